#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sdmt/channel.hpp"
#include "sdmt/rng.hpp"

namespace sdmt {

double db_to_linear(double snr_db);

// SNR rungs in dB, strictly increasing.
struct SnrLadder {
  std::vector<double> snr_db;
  void validate() const;
};

// Exponential tilt: entries are sampled CN(0, rho^-theta); each trial carries
// the likelihood-ratio weight
//   prod_entries sigma^2 * exp(-|h|^2 (1 - 1/sigma^2)),  sigma^2 = rho^-theta,
// which is identically 1 at theta = 0.
struct TiltSpec {
  double theta = 0.0;
};

struct OutageEstimate {
  double snr_db = 0.0;
  double rho = 0.0;
  double tilt_theta = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t hits = 0;         // raw event count under the sampling measure
  double weighted_hits = 0.0;     // sum of weights over hit trials
  double weight_sq_sum = 0.0;     // sum of squared weights over hit trials
  double p_hat = 0.0;
  double ci_lo = 0.0;             // 95% interval: Wilson untilted, normal tilted
  double ci_hi = 0.0;
  std::string warning;            // empty if none
};

// Event sampled per trial: n_blocks fresh blocks, predicate on the realization.
struct McEvent {
  int nr = 1;
  int nt = 1;
  int n_blocks = 1;
  std::function<bool(const ChannelSequence&, double rho)> outage;
};

struct McRun {
  std::uint64_t trials = 0;
  TiltSpec tilt;
  int workers = 1;
  // global index of the first trial; trial t uses substream(rng, trial_offset + t),
  // so split runs over disjoint offset ranges merge exactly into one big run
  std::uint64_t trial_offset = 0;
};

OutageEstimate estimate_outage(const McEvent& event, double snr_db, const McRun& run,
                               const RngSpec& rng);

// Builds an estimate from raw tallies: computes p_hat and the 95% interval
// (Wilson untilted, normal from the weighted second moment otherwise).
OutageEstimate assemble_estimate(double snr_db, double tilt_theta, std::uint64_t trials,
                                 std::uint64_t hits, double weighted_hits,
                                 double weight_sq_sum);

// Sums trials/hits/weights of compatible estimates and recomputes p_hat and
// the interval; associative and order-insensitive.
OutageEstimate merge_estimates(const std::vector<OutageEstimate>& parts);

// P(log2(1 + rho |h|^2) <= r log2 rho) = 1 - exp(-(rho^r - 1)/rho), clamped to [0,1].
double siso_outage_closed_form(double rho, double r);

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  int points_used = 0;
};

// OLS of -log2(p_hat) against log2(rho). Points with p_hat in {0, 1} are
// excluded with a warning; fewer than 2 usable points throws.
SlopeFit fit_diversity(const std::vector<std::pair<double, double>>& rho_p,
                       std::vector<std::string>* warnings = nullptr);

struct LadderSpec {
  SnrLadder ladder;
  std::vector<std::uint64_t> trials;  // one entry (broadcast) or one per rung
  std::vector<double> tilt_theta;     // one entry (broadcast) or one per rung
  double max_rel_ci_width = 1.0;      // fit filter: (ci_hi - ci_lo)/p_hat
  std::uint64_t min_fit_hits = 20;    // fit filter: raw hits
  int workers = 1;
  void validate() const;
};

struct RungExclusion {
  int index;
  std::string reason;
};

struct LadderResult {
  std::vector<OutageEstimate> estimates;
  std::optional<SlopeFit> fit;  // empty if too few usable rungs
  std::string fit_error;
  std::vector<RungExclusion> excluded;
};

// Per-rung streams derive from substream(rng, rung_index); estimates are
// bit-identical for any worker count.
LadderResult run_ladder(const McEvent& event, const LadderSpec& spec, const RngSpec& rng);

}  // namespace sdmt
