#include "sdmt/channel.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sdmt {

namespace {

void check_dims(int nr, int nt) {
  if (nr < 1 || nt < 1) throw std::invalid_argument("antenna counts must be >= 1");
}

constexpr double kLn2 = 0.6931471805599453094172321;

}  // namespace

ChannelMatrix sample_block(int nr, int nt, const RngSpec& rng, std::uint64_t block,
                           double entry_var) {
  check_dims(nr, nt);
  if (!(entry_var > 0.0)) throw std::invalid_argument("entry variance must be positive");
  ChannelMatrix h;
  h.rows = nr;
  h.cols = nt;
  h.entries.resize(std::size_t(nr) * nt);
  BlockRng gen(rng, block);
  for (auto& e : h.entries) e = gen.next_cgauss(entry_var);
  return h;
}

ChannelMatrix sample_rayleigh(int nr, int nt, const RngSpec& rng, double entry_var) {
  return sample_block(nr, nt, rng, 0, entry_var);
}

ChannelSequence sample_sequence(int nr, int nt, int n_blocks, const RngSpec& rng,
                                double entry_var) {
  check_dims(nr, nt);
  if (n_blocks < 1) throw std::invalid_argument("n_blocks must be >= 1");
  ChannelSequence seq;
  seq.blocks.reserve(std::size_t(n_blocks));
  for (int k = 0; k < n_blocks; ++k)
    seq.blocks.push_back(sample_block(nr, nt, rng, std::uint64_t(k), entry_var));
  return seq;
}

double mutual_info(const ChannelMatrix& h, double rho) {
  if (h.rows < 1 || h.cols < 1 ||
      h.entries.size() != std::size_t(h.rows) * std::size_t(h.cols))
    throw std::invalid_argument("malformed channel matrix");
  if (!(rho > 0.0) || !std::isfinite(rho)) throw std::domain_error("rho must be positive and finite");
  for (const auto& e : h.entries)
    if (!std::isfinite(e.real()) || !std::isfinite(e.imag()))
      throw std::domain_error("non-finite channel entry");

  const double scale = rho / h.cols;
  const int n = std::min(h.rows, h.cols);

  if (n == 1) {
    double s = 0.0;
    for (const auto& e : h.entries) s += std::norm(e);
    return std::log1p(scale * s) / kLn2;
  }

  if (n == 2) {
    // 2x2 Gram of the smaller side; eigenvalues in closed form
    // lam = m +- sqrt(((a-d)/2)^2 + |b|^2), exact for Hermitian 2x2.
    std::complex<double> b{0.0, 0.0};
    double a = 0.0, d = 0.0;
    if (h.rows <= h.cols) {
      for (int j = 0; j < h.cols; ++j) {
        a += std::norm(h.at(0, j));
        d += std::norm(h.at(1, j));
        b += h.at(0, j) * std::conj(h.at(1, j));
      }
    } else {
      for (int i = 0; i < h.rows; ++i) {
        a += std::norm(h.at(i, 0));
        d += std::norm(h.at(i, 1));
        b += std::conj(h.at(i, 0)) * h.at(i, 1);
      }
    }
    double m = 0.5 * (a + d);
    double disc = std::sqrt(0.25 * (a - d) * (a - d) + std::norm(b));
    double l1 = m + disc;
    double l2 = std::max(m - disc, 0.0);
    return (std::log1p(scale * l1) + std::log1p(scale * l2)) / kLn2;
  }

  Eigen::MatrixXcd gram;
  if (h.rows <= h.cols) {
    Eigen::MatrixXcd hm(h.rows, h.cols);
    for (int i = 0; i < h.rows; ++i)
      for (int j = 0; j < h.cols; ++j) hm(i, j) = h.at(i, j);
    gram = hm * hm.adjoint();
  } else {
    Eigen::MatrixXcd hm(h.rows, h.cols);
    for (int i = 0; i < h.rows; ++i)
      for (int j = 0; j < h.cols; ++j) hm(i, j) = h.at(i, j);
    gram = hm.adjoint() * hm;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram, Eigen::EigenvaluesOnly);
  double c = 0.0;
  for (int i = 0; i < n; ++i) c += std::log1p(scale * std::max(es.eigenvalues()[i], 0.0));
  return c / kLn2;
}

double gain_sq_sum(const ChannelSequence& seq) {
  double s = 0.0;
  for (const auto& b : seq.blocks)
    for (const auto& e : b.entries) s += std::norm(e);
  return s;
}

}  // namespace sdmt
