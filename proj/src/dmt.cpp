#include "sdmt/dmt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace sdmt {

namespace {

void check_cfg(const AntennaConfig& cfg) {
  if (cfg.nt < 1 || cfg.nr < 1) throw std::invalid_argument("antenna counts must be >= 1");
}

constexpr double kTieEps = 1e-12;

}  // namespace

DmtCurve::DmtCurve(std::vector<std::pair<double, double>> breakpoints)
    : bp_(std::move(breakpoints)) {
  if (bp_.size() < 2) throw std::invalid_argument("curve needs at least two breakpoints");
  for (std::size_t i = 1; i < bp_.size(); ++i) {
    if (!(bp_[i].first > bp_[i - 1].first))
      throw std::invalid_argument("breakpoint abscissae must be strictly increasing");
    if (bp_[i].second > bp_[i - 1].second + kTieEps)
      throw std::invalid_argument("diversity must be non-increasing");
  }
  double prev_slope = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < bp_.size(); ++i) {
    double slope = (bp_[i].second - bp_[i - 1].second) / (bp_[i].first - bp_[i - 1].first);
    if (slope < prev_slope - kTieEps)
      throw std::invalid_argument("curve must be convex (slopes non-decreasing)");
    prev_slope = slope;
  }
  if (std::abs(bp_.back().second) > kTieEps)
    throw std::invalid_argument("diversity must reach 0 at maximal multiplexing");
}

double DmtCurve::eval(double r) const {
  if (!(r >= bp_.front().first) || !(r <= bp_.back().first))
    throw std::domain_error("multiplexing gain outside curve domain");
  // rightmost segment whose left endpoint is <= r
  std::size_t i = 1;
  while (i + 1 < bp_.size() && r >= bp_[i].first) ++i;
  const auto& [r0, d0] = bp_[i - 1];
  const auto& [r1, d1v] = bp_[i];
  double slope = (d1v - d0) / (r1 - r0);
  return d0 + slope * (r - r0);
}

double DmtCurve::max_abs_slope() const {
  double m = 0.0;
  for (std::size_t i = 1; i < bp_.size(); ++i)
    m = std::max(m, std::abs((bp_[i].second - bp_[i - 1].second) /
                             (bp_[i].first - bp_[i - 1].first)));
  return m;
}

DmtCurve d1_curve(const AntennaConfig& cfg) {
  check_cfg(cfg);
  const int kmax = std::min(cfg.nt, cfg.nr);
  std::vector<std::pair<double, double>> bp;
  bp.reserve(std::size_t(kmax) + 1);
  for (int k = 0; k <= kmax; ++k)
    bp.emplace_back(double(k), double(cfg.nr - k) * double(cfg.nt - k));
  return DmtCurve(std::move(bp));
}

double d1(const AntennaConfig& cfg, double r) { return d1_curve(cfg).eval(r); }

DmtCurve parallel_curve(int l_blocks, const AntennaConfig& cfg) {
  check_cfg(cfg);
  if (l_blocks < 1) throw std::invalid_argument("block count must be >= 1");
  const DmtCurve base = d1_curve(cfg);
  std::vector<std::pair<double, double>> bp;
  for (const auto& [r, d] : base.breakpoints())
    bp.emplace_back(double(l_blocks) * r, double(l_blocks) * d);
  return DmtCurve(std::move(bp));
}

double parallel_dmt(int l_blocks, const AntennaConfig& cfg, double r) {
  return parallel_curve(l_blocks, cfg).eval(r);
}

DmtCurve streaming_curve(int delay, const AntennaConfig& cfg) {
  check_cfg(cfg);
  if (delay < 1) throw std::invalid_argument("delay must be >= 1");
  const DmtCurve base = d1_curve(cfg);
  std::vector<std::pair<double, double>> bp;
  for (const auto& [r, d] : base.breakpoints())
    bp.emplace_back(r, double(delay) * d);
  return DmtCurve(std::move(bp));
}

double streaming_dmt(int delay, const AntennaConfig& cfg, double r) {
  return streaming_curve(delay, cfg).eval(r);
}

double delta_offset(const AntennaConfig& cfg, double r) {
  check_cfg(cfg);
  if (!(r >= 0.0) || !(r < std::min(cfg.nt, cfg.nr)))
    throw std::domain_error("delta offset defined for 0 <= r < min(nt, nr)");
  return (cfg.nt - r) * (cfg.nr - r) / (2.0 * (cfg.nt + cfg.nr - 2.0 * r));
}

GridMinResult parallel_min_oracle(int l_blocks, const AntennaConfig& cfg, double s,
                                  double grid_step) {
  check_cfg(cfg);
  if (l_blocks < 1 || l_blocks > 4)
    throw std::invalid_argument("grid oracle supports 1 <= L <= 4");
  if (!(grid_step > 0.0)) throw std::invalid_argument("grid step must be positive");
  const double rmax = std::min(cfg.nt, cfg.nr);
  if (!(s >= 0.0) || !(s <= l_blocks * rmax + kTieEps))
    throw std::domain_error("total multiplexing outside [0, L*min(nt,nr)]");

  const DmtCurve curve = d1_curve(cfg);
  const long n = long(std::floor(rmax / grid_step + kTieEps));
  // free coordinates are 1..L-1; the last one is clamped to the remaining budget
  double points = 1.0;
  for (int i = 0; i < l_blocks - 1; ++i) points *= double(n + 1);
  if (points > 1e7) throw std::invalid_argument("grid too large (cap 1e7 points per call)");

  double best = std::numeric_limits<double>::infinity();
  std::vector<long> idx(std::size_t(l_blocks > 1 ? l_blocks - 1 : 0), 0);
  const int free_dims = l_blocks - 1;
  while (true) {
    double partial = 0.0, sum_r = 0.0;
    bool feasible = true;
    for (int i = 0; i < free_dims; ++i) {
      double r = std::min(idx[std::size_t(i)] * grid_step, rmax);
      sum_r += r;
      if (sum_r > s + kTieEps) {
        feasible = false;
        break;
      }
      partial += curve.eval(r);
    }
    if (feasible) {
      double last = std::clamp(s - sum_r, 0.0, rmax);
      double total = partial + curve.eval(last);
      best = std::min(best, total);
    }
    int d = 0;
    for (; d < free_dims; ++d) {
      if (++idx[std::size_t(d)] <= n) break;
      idx[std::size_t(d)] = 0;
    }
    if (d == free_dims) break;
  }

  return {best, double(l_blocks) * curve.max_abs_slope() * grid_step, grid_step};
}

double simple_bound(long n, double r) {
  if (n < 0) throw std::invalid_argument("N must be >= 0");
  if (!(r >= 0.0)) throw std::domain_error("rate must be >= 0");
  return std::max(0.0, double(n + 2) - double(n + 1) * r);
}

double prop1_dmt(double r) {
  if (!(r >= 0.0) || !(r <= 1.0)) throw std::domain_error("rate outside [0, 1]");
  return std::min(1.0 - 0.5 * r, 2.0 - 2.0 * r);
}

double prop2_dmt(double r) {
  if (!(r >= 0.0) || !(r <= 1.0)) throw std::domain_error("rate outside [0, 1]");
  return 1.0 - r;
}

double prop1_region_oracle(double r, double grid_step) {
  if (!(r >= 0.0) || !(r <= 1.0)) throw std::domain_error("rate outside [0, 1]");
  if (!(grid_step > 0.0)) throw std::invalid_argument("grid step must be positive");
  const double hi = 1.0 + r;
  const long n = long(std::floor(hi / grid_step + kTieEps));
  if (double(n + 1) * double(n + 1) > 1e7)
    throw std::invalid_argument("grid too large (cap 1e7 points per call)");
  const double budget = 1.5 * r;
  double best = std::numeric_limits<double>::infinity();
  for (long i = 0; i <= n; ++i) {
    double a1 = i * grid_step;
    double excess = std::max(a1 - 0.5 * r, 0.0);
    if (excess > budget + kTieEps) continue;
    // objective decreases in a2, so of the feasible grid points only the
    // largest one matters
    long j = std::min(long(std::floor((budget - excess) / grid_step + kTieEps)), n);
    double a2 = j * grid_step;
    double obj = std::max(1.0 - a1, 0.0) + std::max(1.0 - a2, 0.0);
    best = std::min(best, obj);
  }
  return best;
}

}  // namespace sdmt
