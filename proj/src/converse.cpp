#include "sdmt/converse.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sdmt/dmt.hpp"

namespace sdmt {

namespace {

// Comparisons between products like N*delta and T*r must not flip on the
// last bit of a decimal literal, so every strict inequality gets this slack.
constexpr double kTieTol = 1e-9;

double scaled_tol(double a, double b) {
  return kTieTol * std::max({1.0, std::abs(a), std::abs(b)});
}

void check_slack(double r, double delta) {
  if (!(delta > 0.0)) throw std::domain_error("delta must be positive");
  if (!(delta < r)) throw std::domain_error("delta must be smaller than the rate");
}

}  // namespace

double amplification_bracket(int t_delay, double r, double delta, int n) {
  if (t_delay < 1) throw std::domain_error("delay must be >= 1");
  check_slack(r, delta);
  if (n <= t_delay) throw std::domain_error("window must exceed the delay");
  return 1.0 - double(n) * (r - delta) / (double(n - t_delay) * r);
}

AmplificationThreshold amplification_threshold(int t_delay, double r, double delta) {
  if (t_delay < 1) throw std::domain_error("delay must be >= 1");
  check_slack(r, delta);
  const double target = double(t_delay) * r;
  const double tol = scaled_tol(target, target);
  // start just below target/delta and walk up to the first strictly
  // positive window
  int n = std::max(1, int(std::floor(target / delta)) - 2);
  const int cap = n + 1'000'000;
  while (!(double(n) * delta > target + tol)) {
    if (++n > cap) throw std::runtime_error("threshold search failed to converge");
  }
  return {n, amplification_bracket(t_delay, r, delta, n)};
}

BudgetCheck siso_budget_check(double r, double delta, int n) {
  check_slack(r, delta);
  if (n < 1) throw std::domain_error("window must be >= 1");
  BudgetCheck out;
  out.decodable = double(n + 1) * (r - delta);
  out.required = double(n) * r;
  out.contradiction = out.required > out.decodable + scaled_tol(out.required, out.decodable);
  return out;
}

AmplificationTrace amplification_trace(const AmplificationScenario& sc) {
  if (sc.t_delay != 2)
    throw std::invalid_argument("trace is defined for delay 2 only");
  if (!(sc.delta > 0.0)) throw std::invalid_argument("delta must be positive");
  if (!(sc.rho > 0.0)) throw std::invalid_argument("rho must be positive");
  if (sc.gains_sq.size() < 2)
    throw std::invalid_argument("need gains for at least one block pair");
  for (double g : sc.gains_sq)
    if (!(g >= 0.0)) throw std::invalid_argument("gains must be >= 0");

  const double thr = std::pow(sc.rho, -(1.0 - sc.r + sc.delta));
  const double thr_hi = thr * (1.0 + kTieTol);

  AmplificationTrace out;
  for (std::size_t i = 0; i < sc.gains_sq.size(); ++i) {
    if (sc.gains_sq[i] > thr_hi) {
      out.violating_block = int(i);
      return out;
    }
  }

  const int n_steps = int(sc.gains_sq.size()) - 1;
  out.steps.reserve(std::size_t(n_steps));
  for (int k = 0; k < n_steps; ++k) {
    TraceStep st;
    st.step = k;
    st.effective_gains.assign(std::size_t(k), 1.0);
    st.effective_gains.push_back(sc.gains_sq[std::size_t(k)]);
    st.effective_gains.push_back(sc.gains_sq[std::size_t(k) + 1]);
    bool member = true;
    for (int j = 0; j < k; ++j)
      member = member && st.effective_gains[std::size_t(j)] >= 1.0 - kTieTol;
    member = member && st.effective_gains[std::size_t(k)] <= thr_hi;
    member = member && st.effective_gains[std::size_t(k) + 1] <= thr_hi;
    st.membership = member;
    out.steps.push_back(std::move(st));
  }
  return out;
}

EnvelopePoint simple_bound_envelope(double r, int n_max) {
  if (!(r >= 0.0)) throw std::domain_error("rate must be >= 0");
  if (n_max < 0) throw std::domain_error("n_max must be >= 0");
  EnvelopePoint out;
  out.envelope = simple_bound(0, r);
  out.argmin_n = 0;
  for (int n = 1; n <= n_max; ++n) {
    const double v = simple_bound(n, r);
    if (v < out.envelope) {
      out.envelope = v;
      out.argmin_n = n;
    }
  }
  return out;
}

double multicast_bracket(double r, double delta, double rho, std::int64_t n) {
  check_slack(r, delta);
  if (!(rho > 1.0)) throw std::domain_error("rho must exceed 1");
  if (n < 1) throw std::domain_error("window must be >= 1");
  const double log2_rho = std::log2(rho);
  const double numer = double(n + 1) + double(n + 1) * (r - delta) * log2_rho;
  const double denom = double(n) * r * log2_rho;
  return 1.0 - numer / denom;
}

std::optional<std::int64_t> multicast_min_n(double r, double delta, double rho) {
  check_slack(r, delta);
  if (!(rho > 1.0)) throw std::domain_error("rho must exceed 1");
  const double log2_rho = std::log2(rho);
  // bracket(N) > 0  <=>  N (delta log2(rho) - 1) > 1 + (r - delta) log2(rho)
  const double slope = delta * log2_rho - 1.0;
  if (!(slope > 0.0)) return std::nullopt;
  const double rhs = 1.0 + (r - delta) * log2_rho;
  auto cand = std::int64_t(std::floor(rhs / slope));
  for (std::int64_t n = std::max<std::int64_t>(1, cand - 2); n <= cand + 3; ++n)
    if (multicast_bracket(r, delta, rho, n) > 0.0) return n;
  return std::nullopt;  // unreachable for finite inputs
}

}  // namespace sdmt
