#pragma once

#include <utility>
#include <vector>

namespace sdmt {

struct AntennaConfig {
  int nt = 1;
  int nr = 1;
};

// Piecewise-linear diversity curve through exact breakpoints. Invariants
// checked on construction: multiplexing values strictly increasing, diversity
// non-increasing, convex (slopes non-decreasing), final diversity 0.
class DmtCurve {
 public:
  explicit DmtCurve(std::vector<std::pair<double, double>> breakpoints);

  // linear interpolation; exact at breakpoints; domain error outside
  double eval(double r) const;
  double max_abs_slope() const;
  const std::vector<std::pair<double, double>>& breakpoints() const { return bp_; }
  double r_max() const { return bp_.back().first; }

 private:
  std::vector<std::pair<double, double>> bp_;
};

// Single-block curve with breakpoints (k, (nr-k)(nt-k)), k = 0..min(nt,nr).
DmtCurve d1_curve(const AntennaConfig& cfg);
double d1(const AntennaConfig& cfg, double r);

// L-fold parallel channel: d(r) = L * d1(r/L), r = total multiplexing over L blocks.
DmtCurve parallel_curve(int l_blocks, const AntennaConfig& cfg);
double parallel_dmt(int l_blocks, const AntennaConfig& cfg, double r);

// Decoding delay T: d(r) = T * d1(r), r = per-block multiplexing.
DmtCurve streaming_curve(int delay, const AntennaConfig& cfg);
double streaming_dmt(int delay, const AntennaConfig& cfg, double r);

// (nt - r)(nr - r) / (2 (nt + nr - 2r)) for 0 <= r < min(nt, nr)
double delta_offset(const AntennaConfig& cfg, double r);

struct GridMinResult {
  double value;      // minimized sum of per-block diversities
  double tolerance;  // guaranteed gap to the continuous optimum
  double grid_step;
};

// Brute-force minimizer of sum_l d1(r_l) over r_l >= 0, sum r_l <= s, on a
// grid of the given step. Caps: l_blocks <= 4 and <= 1e7 grid points per call.
GridMinResult parallel_min_oracle(int l_blocks, const AntennaConfig& cfg, double s,
                                  double grid_step);

// max(0, (N+2) - (N+1) r)
double simple_bound(long n, double r);

// Superposition two-block scheme: claimed curve min(1 - r/2, 2 - 2r), 0 <= r <= 1.
double prop1_dmt(double r);

// Single-block no-memory scheme: 1 - r, 0 <= r <= 1.
double prop2_dmt(double r);

// Grid minimizer of (1-a1)+ + (1-a2)+ over a1, a2 >= 0 with
// (a1 - r/2)+ + a2 <= 3r/2, restricted to [0, 1+r]^2; equals 2 - 2r in the
// limit, within 2 * grid_step on the grid.
double prop1_region_oracle(double r, double grid_step);

}  // namespace sdmt
