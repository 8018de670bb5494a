#include "sdmt/outage.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "batch.hpp"

namespace sdmt {

namespace {

constexpr double kZ95 = 1.959963984540054;  // two-sided 95% normal quantile

struct BatchTotals {
  std::uint64_t hits = 0;
  double w_sum = 0.0;
  double w2_sum = 0.0;
};

std::pair<double, double> wilson_interval(std::uint64_t hits, std::uint64_t n) {
  double p = double(hits) / double(n);
  double z2 = kZ95 * kZ95;
  double denom = 1.0 + z2 / double(n);
  double center = (p + z2 / (2.0 * double(n))) / denom;
  double rad = kZ95 *
               std::sqrt(p * (1.0 - p) / double(n) + z2 / (4.0 * double(n) * double(n))) /
               denom;
  return {std::max(0.0, center - rad), std::min(1.0, center + rad)};
}

// normal interval from the sample variance of the weighted indicator
std::pair<double, double> normal_interval(double p, double w2_sum, std::uint64_t n) {
  if (n < 2) return {0.0, 1.0};
  double var = (w2_sum / double(n) - p * p) * double(n) / double(n - 1);
  double se = std::sqrt(std::max(var, 0.0) / double(n));
  return {std::clamp(p - kZ95 * se, 0.0, 1.0), std::clamp(p + kZ95 * se, 0.0, 1.0)};
}

void finalize(OutageEstimate& est) {
  est.p_hat = est.trials ? est.weighted_hits / double(est.trials) : 0.0;
  if (est.tilt_theta == 0.0) {
    auto [lo, hi] = wilson_interval(est.hits, est.trials);
    est.ci_lo = lo;
    est.ci_hi = hi;
  } else {
    auto [lo, hi] = normal_interval(est.p_hat, est.weight_sq_sum, est.trials);
    est.ci_lo = lo;
    est.ci_hi = hi;
  }
  if (est.hits > 0 && est.weighted_hits == 0.0)
    est.warning = "all hit weights underflowed to zero";
}

}  // namespace

OutageEstimate assemble_estimate(double snr_db, double tilt_theta, std::uint64_t trials,
                                 std::uint64_t hits, double weighted_hits,
                                 double weight_sq_sum) {
  OutageEstimate est;
  est.snr_db = snr_db;
  est.rho = db_to_linear(snr_db);
  est.tilt_theta = tilt_theta;
  est.trials = trials;
  est.hits = hits;
  est.weighted_hits = weighted_hits;
  est.weight_sq_sum = weight_sq_sum;
  finalize(est);
  return est;
}

double db_to_linear(double snr_db) { return std::pow(10.0, snr_db / 10.0); }

void SnrLadder::validate() const {
  if (snr_db.empty()) throw std::invalid_argument("ladder must have at least one rung");
  for (std::size_t i = 1; i < snr_db.size(); ++i)
    if (!(snr_db[i] > snr_db[i - 1]))
      throw std::invalid_argument("ladder rungs must be strictly increasing");
}

OutageEstimate estimate_outage(const McEvent& event, double snr_db, const McRun& run,
                               const RngSpec& rng) {
  if (event.nr < 1 || event.nt < 1 || event.n_blocks < 1)
    throw std::invalid_argument("malformed event dimensions");
  if (!event.outage) throw std::invalid_argument("missing outage predicate");
  if (run.trials < 1) throw std::invalid_argument("trial count must be >= 1");
  if (run.workers < 1) throw std::invalid_argument("worker count must be >= 1");
  if (!(run.tilt.theta >= 0.0)) throw std::invalid_argument("tilt theta must be >= 0");

  const double rho = db_to_linear(snr_db);
  const double theta = run.tilt.theta;
  const double entry_var = std::pow(rho, -theta);
  const double entries =
      double(event.nr) * double(event.nt) * double(event.n_blocks);
  // log weight = E ln sigma^2 - (1 - 1/sigma^2) * sum |h|^2
  const double log_var_term = entries * std::log(entry_var);
  const double gain_coeff = 1.0 - 1.0 / entry_var;

  auto partial = detail::run_batches<BatchTotals>(
      run.trials, run.workers, [&](std::uint64_t, std::uint64_t lo, std::uint64_t hi) {
        BatchTotals acc;
        for (std::uint64_t t = lo; t < hi; ++t) {
          RngSpec trial_rng = substream(rng, run.trial_offset + t);
          ChannelSequence seq =
              sample_sequence(event.nr, event.nt, event.n_blocks, trial_rng, entry_var);
          if (event.outage(seq, rho)) {
            ++acc.hits;
            if (theta == 0.0) {
              acc.w_sum += 1.0;
              acc.w2_sum += 1.0;
            } else {
              double w = std::exp(log_var_term - gain_coeff * gain_sq_sum(seq));
              acc.w_sum += w;
              acc.w2_sum += w * w;
            }
          }
        }
        return acc;
      });

  std::uint64_t hits = 0;
  double w_sum = 0.0, w2_sum = 0.0;
  for (const auto& p : partial) {
    hits += p.hits;
    w_sum += p.w_sum;
    w2_sum += p.w2_sum;
  }
  return assemble_estimate(snr_db, theta, run.trials, hits, w_sum, w2_sum);
}

OutageEstimate merge_estimates(const std::vector<OutageEstimate>& parts) {
  if (parts.empty()) throw std::invalid_argument("nothing to merge");
  OutageEstimate est;
  est.snr_db = parts.front().snr_db;
  est.rho = parts.front().rho;
  est.tilt_theta = parts.front().tilt_theta;
  for (const auto& p : parts) {
    if (p.snr_db != est.snr_db || p.tilt_theta != est.tilt_theta)
      throw std::invalid_argument("estimates to merge must share rung and tilt");
    est.trials += p.trials;
    est.hits += p.hits;
    est.weighted_hits += p.weighted_hits;
    est.weight_sq_sum += p.weight_sq_sum;
  }
  finalize(est);
  return est;
}

double siso_outage_closed_form(double rho, double r) {
  if (!(rho > 0.0)) throw std::domain_error("rho must be positive");
  if (!(r >= 0.0)) throw std::domain_error("rate must be >= 0");
  double t = (std::pow(rho, r) - 1.0) / rho;
  if (t <= 0.0) return 0.0;
  return std::clamp(-std::expm1(-t), 0.0, 1.0);
}

SlopeFit fit_diversity(const std::vector<std::pair<double, double>>& rho_p,
                       std::vector<std::string>* warnings) {
  std::vector<double> xs, ys;
  for (const auto& [rho, p] : rho_p) {
    if (!(rho > 0.0)) throw std::domain_error("rho must be positive");
    if (p <= 0.0 || p >= 1.0) {
      if (warnings) {
        std::ostringstream os;
        os << "excluded rung rho=" << rho << " with p_hat=" << p;
        warnings->push_back(os.str());
      }
      continue;
    }
    xs.push_back(std::log2(rho));
    ys.push_back(-std::log2(p));
  }
  if (xs.size() < 2)
    throw std::runtime_error("slope fit needs at least 2 usable points");

  const double n = double(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0) throw std::runtime_error("slope fit needs distinct rho values");

  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.points_used = int(xs.size());
  if (syy == 0.0) {
    fit.r_squared = 1.0;
  } else {
    double ss_res = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      double e = ys[i] - (fit.intercept + fit.slope * xs[i]);
      ss_res += e * e;
    }
    fit.r_squared = 1.0 - ss_res / syy;
  }
  return fit;
}

void LadderSpec::validate() const {
  ladder.validate();
  auto check_len = [&](std::size_t len, const char* what) {
    if (len != 1 && len != ladder.snr_db.size())
      throw std::invalid_argument(std::string(what) +
                                  " must have one entry or one per rung");
  };
  if (trials.empty()) throw std::invalid_argument("trial schedule must be non-empty");
  check_len(trials.size(), "trial schedule");
  for (auto t : trials)
    if (t < 1) throw std::invalid_argument("trial count must be >= 1");
  if (tilt_theta.empty()) throw std::invalid_argument("tilt schedule must be non-empty");
  check_len(tilt_theta.size(), "tilt schedule");
  for (auto th : tilt_theta)
    if (!(th >= 0.0)) throw std::invalid_argument("tilt theta must be >= 0");
  if (!(max_rel_ci_width > 0.0))
    throw std::invalid_argument("relative CI width threshold must be positive");
  if (workers < 1) throw std::invalid_argument("worker count must be >= 1");
}

LadderResult run_ladder(const McEvent& event, const LadderSpec& spec, const RngSpec& rng) {
  spec.validate();
  LadderResult out;
  const std::size_t nrungs = spec.ladder.snr_db.size();
  out.estimates.reserve(nrungs);

  for (std::size_t i = 0; i < nrungs; ++i) {
    McRun run;
    run.trials = spec.trials.size() == 1 ? spec.trials[0] : spec.trials[i];
    run.tilt.theta = spec.tilt_theta.size() == 1 ? spec.tilt_theta[0] : spec.tilt_theta[i];
    run.workers = spec.workers;
    out.estimates.push_back(
        estimate_outage(event, spec.ladder.snr_db[i], run, substream(rng, i)));
  }

  std::vector<std::pair<double, double>> usable;
  for (std::size_t i = 0; i < nrungs; ++i) {
    const auto& est = out.estimates[i];
    if (est.p_hat <= 0.0) {
      out.excluded.push_back({int(i), "no weighted hits"});
      continue;
    }
    if (est.p_hat >= 1.0) {
      out.excluded.push_back({int(i), "estimate saturated at 1"});
      continue;
    }
    if (est.hits < spec.min_fit_hits) {
      out.excluded.push_back({int(i), "fewer raw hits than the fit threshold"});
      continue;
    }
    if ((est.ci_hi - est.ci_lo) / est.p_hat > spec.max_rel_ci_width) {
      out.excluded.push_back({int(i), "relative CI width above threshold"});
      continue;
    }
    usable.emplace_back(est.rho, est.p_hat);
  }

  try {
    out.fit = fit_diversity(usable, nullptr);
  } catch (const std::exception& e) {
    out.fit.reset();
    out.fit_error = e.what();
  }
  return out;
}

}  // namespace sdmt
