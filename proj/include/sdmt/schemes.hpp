#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sdmt/dmt.hpp"
#include "sdmt/outage.hpp"
#include "sdmt/rng.hpp"

namespace sdmt {

// Parameters shared by the streaming schemes: antenna geometry, decoding
// delay in coherence blocks, per-block multiplexing gain, and the slack
// applied to tree-code step thresholds (in exponent units of log2(rho)).
struct StreamSpec {
  AntennaConfig cfg;
  int delay = 1;
  double rate = 0.0;
  double epsilon = 0.01;
  void validate() const;  // delay >= 1, 0 <= rate <= min(nt,nr), epsilon >= 0
};

// Block-interleaved scheme: a message spread over T blocks fails iff the
// average per-block mutual information falls below the rate,
//   (1/T) sum_j C_j <= r log2(rho).
// c_bits must hold exactly T non-negative entries (bits per channel use).
bool interleave_outage(const StreamSpec& spec, const std::vector<double>& c_bits,
                       double rho);

// Event wrapper: fresh T-block sequence per trial, interleave_outage on the
// per-block mutual informations.
McEvent interleave_event(const StreamSpec& spec);

// Ladder sweep of the interleaved scheme; per-rung streams and batching
// follow run_ladder, so results are worker-count independent.
LadderResult interleave_sim(const StreamSpec& spec, const LadderSpec& ladder,
                            const RngSpec& rng);

// Single-block baseline: one message per block, outage iff
//   C(rho) <= r log2(rho).
McEvent naive_event(double rate);
LadderResult naive_scheme_sim(double rate, const LadderSpec& ladder, const RngSpec& rng);

// Sequential tree-code step event. At the deadline of message k the decoder
// that last committed before step l fails the window l..k+T-1 iff
//   sum_{i=l}^{k+T-1} C_i <= [(k+T-l) r + (k-l) Delta(r) + 4 eps] log2(rho),
// with Delta(r) the rate offset from delta_offset. c_bits covers blocks
// l..k+T-1 in order (size k + T - l).
bool treecode_step_outage(const StreamSpec& spec, int l, int k,
                          const std::vector<double>& c_bits, double rho);

// Per-rung report of the tree-code decoder simulation.
struct TreeRungReport {
  double snr_db = 0.0;
  double rho = 0.0;
  double tilt_theta = 0.0;
  std::uint64_t trials = 0;
  // per_k[k]: message-k error estimate (union of step events over l in [0,k])
  std::vector<OutageEstimate> per_k;
  // lag j = k - l statistics, aggregated over all (l, k) pairs with k - l = j;
  // lag_opportunities[j] = trials * (K - j), lag_rate[j] the weighted frequency
  std::vector<std::uint64_t> lag_hits;
  std::vector<double> lag_weighted;
  std::vector<std::uint64_t> lag_opportunities;
  std::vector<double> lag_rate;
};

// Simulates the decision-directed decoder over messages 0..horizon-1: each
// trial samples a horizon+T-1 block sequence, message k errs iff some step
// l in [0, k] is in outage at its deadline. Atypicality failures vanish in
// the long-codeword regime and are excluded by default; synthetic_mf injects
// a synthetic per-step failure with probability 2^-synthetic_mf for
// sensitivity studies (drawn from a dedicated stream, so the default-off
// results are unchanged by the feature).
std::vector<TreeRungReport> treecode_decode_sim(
    const StreamSpec& spec, int horizon, const LadderSpec& ladder, const RngSpec& rng,
    std::optional<double> synthetic_mf = std::nullopt);

// Two-layer superposition scheme over a block pair (SISO, beta = r/2).
// First-stage event: the early layer decoded with the late layer treated as
// noise,
//   (1/2) log2(1 + g rho / (1 + g rho^(1-r/2))) <= (r/4) log2(rho).
bool prop1_outage_first(double gain_sq, double rho, double r);

// Second-stage event: the residual layer plus the next block,
//   (1/2) log2(1 + rho^(1-r/2) g_k) + (1/2) log2(1 + rho g_next)
//     <= (3r/4) log2(rho).
bool prop1_outage_second(double gain_k_sq, double gain_next_sq, double rho, double r);

enum class Prop1Mode { union_events, first_only, second_only };

// Event over a fresh SISO block pair (g_k, g_next) per trial.
McEvent prop1_event(double rate, Prop1Mode mode);
LadderResult prop1_sim(double rate, Prop1Mode mode, const LadderSpec& ladder,
                       const RngSpec& rng);

}  // namespace sdmt
