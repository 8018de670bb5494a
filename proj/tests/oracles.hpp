#pragma once

// Independent numerical references for the Monte Carlo estimators. Nothing
// here touches the library under test: plain quadrature over the exponential
// and 2x2 Gram eigenvalue laws, accurate to far below Monte Carlo noise.

#include <algorithm>
#include <cmath>
#include <functional>
#include <utility>
#include <vector>

namespace oracle {

inline double simpson(const std::function<double(double)>& f, double a, double b,
                      int n) {
  if (b <= a) return 0.0;
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

// P((1 + a g0)(1 + b g1) <= K) for independent unit-mean exponential gains.
inline double product2_cdf(double a, double b, double K, int n = 40000) {
  if (K <= 1.0) return 0.0;
  const double x_hi = (K - 1.0) / a;
  auto f = [&](double x) {
    const double y = (K / (1.0 + a * x) - 1.0) / b;
    return std::exp(-x) * (y > 0.0 ? -std::expm1(-y) : 0.0);
  };
  return simpson(f, 0.0, x_hi, n);
}

// P(prod_{i=0..2} (1 + s g_i) <= K), equal scale on all three gains.
inline double product3_cdf(double s, double K, int n_outer = 2000, int n_inner = 2000) {
  if (K <= 1.0) return 0.0;
  const double x_hi = (K - 1.0) / s;
  auto f = [&](double x) {
    return std::exp(-x) * product2_cdf(s, s, K / (1.0 + s * x), n_inner);
  };
  return simpson(f, 0.0, x_hi, n_outer);
}

// P((1 + s l1)(1 + s l2) <= K) where (l1 > l2 > 0) follow the eigenvalue law
// of a 2x2 complex Gram matrix of i.i.d. unit CN entries:
//   f(l1, l2) = exp(-l1 - l2) (l1 - l2)^2.
// The inner integral over l1 has the closed antiderivative
//   d/dx [-exp(-x) ((x-c)^2 + 2(x-c) + 2)] = exp(-x) (x-c)^2.
inline double gram22_product_cdf(double s, double K, int n = 40000) {
  if (K <= 1.0) return 0.0;
  const double lc = (std::sqrt(K) - 1.0) / s;  // where the l1 range closes
  auto inner = [&](double l2) {
    const double u = (K / (1.0 + s * l2) - 1.0) / s;
    auto anti = [&](double x) {
      const double d = x - l2;
      return -std::exp(-x) * (d * d + 2.0 * d + 2.0);
    };
    return anti(u) - anti(l2);
  };
  auto f = [&](double l2) { return std::exp(-l2) * inner(l2); };
  return simpson(f, 0.0, lc, n);
}

// Single-gain threshold law P(log2(1 + rho g) <= r log2 rho).
inline double siso_cdf(double rho, double r) {
  const double t = (std::pow(rho, r) - 1.0) / rho;
  return t > 0.0 ? -std::expm1(-t) : 0.0;
}

// Early-layer event of the two-layer superposition pair: algebra on
//   (1/2) log2(1 + g rho / (1 + g rho^(1-r/2))) <= (r/4) log2 rho
// collapses the threshold to g <= (rho^(r/2) - 1) rho^(r/2 - 1).
inline double superpos_first_threshold(double rho, double r) {
  return (std::pow(rho, 0.5 * r) - 1.0) * std::pow(rho, 0.5 * r - 1.0);
}

inline double superpos_first_cdf(double rho, double r) {
  const double t = superpos_first_threshold(rho, r);
  return t > 0.0 ? -std::expm1(-t) : 0.0;
}

// Late event: (1 + rho^(1-r/2) g0)(1 + rho g1) <= rho^(3r/2).
inline double superpos_second_cdf(double rho, double r) {
  return product2_cdf(std::pow(rho, 1.0 - 0.5 * r), rho, std::pow(rho, 1.5 * r));
}

// Union of the two events over one (g0, g1) pair.
inline double superpos_union_cdf(double rho, double r, int n = 40000) {
  const double tf = superpos_first_threshold(rho, r);
  const double a = std::pow(rho, 1.0 - 0.5 * r);
  const double K = std::pow(rho, 1.5 * r);
  const double first = tf > 0.0 ? -std::expm1(-tf) : 0.0;
  const double g_hi = (K - 1.0) / a;  // beyond this the second event is empty
  if (g_hi <= std::max(tf, 0.0)) return first;
  auto f = [&](double g0) {
    const double y = (K / (1.0 + a * g0) - 1.0) / rho;
    return std::exp(-g0) * (y > 0.0 ? -std::expm1(-y) : 0.0);
  };
  return first + simpson(f, std::max(tf, 0.0), g_hi, n);
}

// Ordinary least squares of -log2(p) on log2(rho); inputs must be usable.
inline double ols_slope(const std::vector<std::pair<double, double>>& rho_p) {
  double mx = 0.0, my = 0.0;
  for (const auto& [rho, p] : rho_p) {
    mx += std::log2(rho);
    my += -std::log2(p);
  }
  const double n = double(rho_p.size());
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (const auto& [rho, p] : rho_p) {
    const double dx = std::log2(rho) - mx;
    sxy += dx * (-std::log2(p) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

}  // namespace oracle
