#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace sdmt {

// Smallest window length N at which the decoded-rate budget argument turns
// strictly positive, together with the bracket value there:
//   bracket(N) = 1 - N (r - delta) / ((N - T) r),
// positive exactly when N delta > T r.
struct AmplificationThreshold {
  int n_star = 0;
  double bracket = 0.0;
};

// Requires delta in (0, r) and delay >= 1. Boundary ties (N delta == T r up
// to rounding) resolve to "not yet positive", so N_star is the first strictly
// positive index even when the products land on representation noise.
AmplificationThreshold amplification_threshold(int t_delay, double r, double delta);

// Bracket value at a given window length; requires n > t_delay.
double amplification_bracket(int t_delay, double r, double delta, int n);

// Rate budget over N+1 sequentially decoded messages against the capacity of
// N outage-level blocks, both as coefficients of log2(rho):
//   decodable = (N+1)(r - delta), required = N r.
struct BudgetCheck {
  double decodable = 0.0;
  double required = 0.0;
  bool contradiction = false;  // required > decodable beyond rounding noise
};

BudgetCheck siso_budget_check(double r, double delta, int n);

// Scenario for the sequential decode-and-amplify walk (single-antenna,
// delay-2): a run of per-block gains all inside the deep-outage region
// |h|^2 <= rho^-(1 - r + delta).
struct AmplificationScenario {
  double r = 0.0;
  double delta = 0.0;
  double rho = 0.0;
  int t_delay = 2;
  std::vector<double> gains_sq;
};

// One decode step: after messages 0..step-1 are decoded their blocks behave
// like unit-gain links, so the effective vector is (1, ..., 1, g_step,
// g_step+1); membership records whether that vector lies in the step's
// outage set (decoded prefix at or above unit gain, trailing pair at or
// below the deep-outage threshold).
struct TraceStep {
  int step = 0;
  std::vector<double> effective_gains;
  bool membership = false;
};

// Walks consecutive block pairs (G gains -> G-1 steps). If some input gain
// violates the deep-outage precondition, reports the first offending block
// and produces no steps; otherwise every membership flag is true by
// construction and the trace is an executable form of the argument.
struct AmplificationTrace {
  std::optional<int> violating_block;
  std::vector<TraceStep> steps;
};

AmplificationTrace amplification_trace(const AmplificationScenario& sc);

// Pointwise minimum of the single-window diversity bounds
// d_N(r) = max(0, (N+2) - (N+1) r) over N in [0, n_max]; ties resolve to the
// smallest N.
struct EnvelopePoint {
  double envelope = 0.0;
  int argmin_n = 0;
};

EnvelopePoint simple_bound_envelope(double r, int n_max);

// Finite-SNR multicast budget bracket (base-2 logs):
//   1 - (N+1 + (N+1)(r - delta) log2(rho)) / (N r log2(rho)).
// Requires delta in (0, r), rho > 1, n >= 1.
double multicast_bracket(double r, double delta, double rho, std::int64_t n);

// Smallest N making multicast_bracket positive at the given rho, or nullopt
// when no N does (delta * log2(rho) <= 1).
std::optional<std::int64_t> multicast_min_n(double r, double delta, double rho);

}  // namespace sdmt
