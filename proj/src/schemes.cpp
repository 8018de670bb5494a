#include "sdmt/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "batch.hpp"

namespace sdmt {

namespace {

constexpr double kLn2 = 0.6931471805599453;

// log2(1 + x) without cancellation for small x
double log2_1p(double x) { return std::log1p(x) / kLn2; }

// Dedicated block index for synthetic failure draws; far outside any
// realistic channel block range so the channel draws are untouched.
constexpr std::uint64_t kFlagBlock = 0x8000000000000000ull;

}  // namespace

void StreamSpec::validate() const {
  if (cfg.nt < 1 || cfg.nr < 1)
    throw std::invalid_argument("antenna counts must be >= 1");
  if (delay < 1) throw std::invalid_argument("delay must be >= 1");
  const double rmax = double(std::min(cfg.nt, cfg.nr));
  if (!(rate >= 0.0 && rate <= rmax))
    throw std::invalid_argument("rate must lie in [0, min(nt, nr)]");
  if (!(epsilon >= 0.0)) throw std::invalid_argument("epsilon must be >= 0");
}

bool interleave_outage(const StreamSpec& spec, const std::vector<double>& c_bits,
                       double rho) {
  spec.validate();
  if (int(c_bits.size()) != spec.delay)
    throw std::invalid_argument("need exactly one mutual information per block");
  if (!(rho > 0.0)) throw std::domain_error("rho must be positive");
  double sum = 0.0;
  for (double c : c_bits) {
    if (!(c >= 0.0)) throw std::invalid_argument("mutual informations must be >= 0");
    sum += c;
  }
  return sum / double(spec.delay) <= spec.rate * std::log2(rho);
}

McEvent interleave_event(const StreamSpec& spec) {
  spec.validate();
  McEvent ev;
  ev.nr = spec.cfg.nr;
  ev.nt = spec.cfg.nt;
  ev.n_blocks = spec.delay;
  ev.outage = [spec](const ChannelSequence& seq, double rho) {
    std::vector<double> c(seq.blocks.size());
    for (std::size_t j = 0; j < seq.blocks.size(); ++j)
      c[j] = mutual_info(seq.blocks[j], rho);
    return interleave_outage(spec, c, rho);
  };
  return ev;
}

LadderResult interleave_sim(const StreamSpec& spec, const LadderSpec& ladder,
                            const RngSpec& rng) {
  return run_ladder(interleave_event(spec), ladder, rng);
}

McEvent naive_event(double rate) {
  if (!(rate >= 0.0)) throw std::invalid_argument("rate must be >= 0");
  McEvent ev;
  ev.nr = 1;
  ev.nt = 1;
  ev.n_blocks = 1;
  ev.outage = [rate](const ChannelSequence& seq, double rho) {
    return mutual_info(seq.blocks[0], rho) <= rate * std::log2(rho);
  };
  return ev;
}

LadderResult naive_scheme_sim(double rate, const LadderSpec& ladder, const RngSpec& rng) {
  return run_ladder(naive_event(rate), ladder, rng);
}

bool treecode_step_outage(const StreamSpec& spec, int l, int k,
                          const std::vector<double>& c_bits, double rho) {
  spec.validate();
  if (l < 0 || l > k) throw std::invalid_argument("need 0 <= l <= k");
  if (!(rho > 0.0)) throw std::domain_error("rho must be positive");
  const int window = k + spec.delay - l;
  if (int(c_bits.size()) != window)
    throw std::invalid_argument("mutual informations must cover blocks l..k+T-1");
  double sum = 0.0;
  for (double c : c_bits) {
    if (!(c >= 0.0)) throw std::invalid_argument("mutual informations must be >= 0");
    sum += c;
  }
  const double delta = delta_offset(spec.cfg, spec.rate);
  const double coeff =
      double(window) * spec.rate + double(k - l) * delta + 4.0 * spec.epsilon;
  return sum <= coeff * std::log2(rho);
}

namespace {

// Per-batch tallies for the tree-code simulation: message-k error counts and
// step-event counts bucketed by lag.
struct TreeTotals {
  std::vector<std::uint64_t> k_hits;
  std::vector<double> k_w, k_w2;
  std::vector<std::uint64_t> lag_hits;
  std::vector<double> lag_w;

  explicit TreeTotals(std::size_t k = 0)
      : k_hits(k, 0), k_w(k, 0.0), k_w2(k, 0.0), lag_hits(k, 0), lag_w(k, 0.0) {}
};

}  // namespace

std::vector<TreeRungReport> treecode_decode_sim(const StreamSpec& spec, int horizon,
                                                const LadderSpec& ladder,
                                                const RngSpec& rng,
                                                std::optional<double> synthetic_mf) {
  spec.validate();
  ladder.validate();
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  if (synthetic_mf && !(*synthetic_mf >= 0.0))
    throw std::invalid_argument("synthetic failure exponent must be >= 0");

  const int nk = horizon;
  const int t_delay = spec.delay;
  const int n_blocks = nk + t_delay - 1;
  const double delta = delta_offset(spec.cfg, spec.rate);
  const double flag_prob = synthetic_mf ? std::exp2(-*synthetic_mf) : 0.0;
  const double entries_per_trial =
      double(spec.cfg.nr) * double(spec.cfg.nt) * double(n_blocks);

  std::vector<TreeRungReport> out;
  out.reserve(ladder.ladder.snr_db.size());

  for (std::size_t i = 0; i < ladder.ladder.snr_db.size(); ++i) {
    const double snr_db = ladder.ladder.snr_db[i];
    const double rho = db_to_linear(snr_db);
    const double log2_rho = std::log2(rho);
    const std::uint64_t trials =
        ladder.trials.size() == 1 ? ladder.trials[0] : ladder.trials[i];
    const double theta =
        ladder.tilt_theta.size() == 1 ? ladder.tilt_theta[0] : ladder.tilt_theta[i];
    const double entry_var = std::pow(rho, -theta);
    const double log_var_term = entries_per_trial * std::log(entry_var);
    const double gain_coeff = 1.0 - 1.0 / entry_var;
    const RngSpec rung_rng = substream(rng, i);

    auto partial = detail::run_batches<TreeTotals>(
        trials, ladder.workers, [&](std::uint64_t, std::uint64_t lo, std::uint64_t hi) {
          TreeTotals acc{std::size_t(nk)};
          std::vector<double> prefix(std::size_t(n_blocks) + 1);
          for (std::uint64_t t = lo; t < hi; ++t) {
            RngSpec trial_rng = substream(rung_rng, t);
            ChannelSequence seq =
                sample_sequence(spec.cfg.nr, spec.cfg.nt, n_blocks, trial_rng, entry_var);
            const double w =
                theta == 0.0
                    ? 1.0
                    : std::exp(log_var_term - gain_coeff * gain_sq_sum(seq));
            prefix[0] = 0.0;
            for (int b = 0; b < n_blocks; ++b)
              prefix[b + 1] = prefix[b] + mutual_info(seq.blocks[std::size_t(b)], rho);
            BlockRng flag_gen(trial_rng, kFlagBlock);
            for (int k = 0; k < nk; ++k) {
              bool err = false;
              for (int l = 0; l <= k; ++l) {
                const int window = k + t_delay - l;
                const double sum = prefix[std::size_t(k + t_delay)] - prefix[std::size_t(l)];
                const double coeff =
                    double(window) * spec.rate + double(k - l) * delta +
                    4.0 * spec.epsilon;
                bool step = sum <= coeff * log2_rho;
                // draw unconditionally so the flag stream position depends
                // only on (k, l), never on the channel realization
                if (synthetic_mf) step = step || (flag_gen.next_unit() < flag_prob);
                if (step) {
                  ++acc.lag_hits[std::size_t(k - l)];
                  acc.lag_w[std::size_t(k - l)] += w;
                  err = true;
                }
              }
              if (err) {
                ++acc.k_hits[std::size_t(k)];
                acc.k_w[std::size_t(k)] += w;
                acc.k_w2[std::size_t(k)] += w * w;
              }
            }
          }
          return acc;
        });

    TreeTotals total{std::size_t(nk)};
    for (const auto& p : partial) {
      for (int k = 0; k < nk; ++k) {
        total.k_hits[std::size_t(k)] += p.k_hits[std::size_t(k)];
        total.k_w[std::size_t(k)] += p.k_w[std::size_t(k)];
        total.k_w2[std::size_t(k)] += p.k_w2[std::size_t(k)];
        total.lag_hits[std::size_t(k)] += p.lag_hits[std::size_t(k)];
        total.lag_w[std::size_t(k)] += p.lag_w[std::size_t(k)];
      }
    }

    TreeRungReport rep;
    rep.snr_db = snr_db;
    rep.rho = rho;
    rep.tilt_theta = theta;
    rep.trials = trials;
    rep.per_k.reserve(std::size_t(nk));
    for (int k = 0; k < nk; ++k)
      rep.per_k.push_back(assemble_estimate(snr_db, theta, trials,
                                            total.k_hits[std::size_t(k)],
                                            total.k_w[std::size_t(k)],
                                            total.k_w2[std::size_t(k)]));
    rep.lag_hits = total.lag_hits;
    rep.lag_weighted = total.lag_w;
    rep.lag_opportunities.resize(std::size_t(nk));
    rep.lag_rate.resize(std::size_t(nk));
    for (int j = 0; j < nk; ++j) {
      const std::uint64_t opp = trials * std::uint64_t(nk - j);
      rep.lag_opportunities[std::size_t(j)] = opp;
      rep.lag_rate[std::size_t(j)] = total.lag_w[std::size_t(j)] / double(opp);
    }
    out.push_back(std::move(rep));
  }
  return out;
}

bool prop1_outage_first(double gain_sq, double rho, double r) {
  const double beta = 0.5 * r;
  const double lhs =
      0.5 * log2_1p(gain_sq * rho / (1.0 + gain_sq * std::pow(rho, 1.0 - beta)));
  return lhs <= 0.25 * r * std::log2(rho);
}

bool prop1_outage_second(double gain_k_sq, double gain_next_sq, double rho, double r) {
  const double beta = 0.5 * r;
  const double lhs = 0.5 * log2_1p(std::pow(rho, 1.0 - beta) * gain_k_sq) +
                     0.5 * log2_1p(rho * gain_next_sq);
  return lhs <= 0.75 * r * std::log2(rho);
}

McEvent prop1_event(double rate, Prop1Mode mode) {
  if (!(rate > 0.0 && rate <= 1.0))
    throw std::invalid_argument("rate must lie in (0, 1]");
  McEvent ev;
  ev.nr = 1;
  ev.nt = 1;
  ev.n_blocks = 2;
  ev.outage = [rate, mode](const ChannelSequence& seq, double rho) {
    const double g0 = std::norm(seq.blocks[0].entries[0]);
    const double g1 = std::norm(seq.blocks[1].entries[0]);
    switch (mode) {
      case Prop1Mode::first_only:
        return prop1_outage_first(g0, rho, rate);
      case Prop1Mode::second_only:
        return prop1_outage_second(g0, g1, rho, rate);
      default:
        return prop1_outage_first(g0, rho, rate) ||
               prop1_outage_second(g0, g1, rho, rate);
    }
  };
  return ev;
}

LadderResult prop1_sim(double rate, Prop1Mode mode, const LadderSpec& ladder,
                       const RngSpec& rng) {
  return run_ladder(prop1_event(rate, mode), ladder, rng);
}

}  // namespace sdmt
