#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "sdmt/rng.hpp"

namespace sdmt {

// One Rayleigh block-fading channel realization, rows = receive antennas,
// cols = transmit antennas, row-major storage.
struct ChannelMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<std::complex<double>> entries;

  std::complex<double>& at(int i, int j) { return entries[std::size_t(i) * cols + j]; }
  const std::complex<double>& at(int i, int j) const {
    return entries[std::size_t(i) * cols + j];
  }
};

struct ChannelSequence {
  std::vector<ChannelMatrix> blocks;
};

// i.i.d. CN(0, entry_var) entries, filled row-major; draws depend only on
// (rng.master_seed, rng.stream_index, block).
ChannelMatrix sample_block(int nr, int nt, const RngSpec& rng, std::uint64_t block,
                           double entry_var = 1.0);

// Single block; identical to sample_block with block = 0.
ChannelMatrix sample_rayleigh(int nr, int nt, const RngSpec& rng, double entry_var = 1.0);

// n_blocks independent blocks 0..n_blocks-1 of the given stream.
ChannelSequence sample_sequence(int nr, int nt, int n_blocks, const RngSpec& rng,
                                double entry_var = 1.0);

// Mutual information in bits per channel use with equal power split across
// transmit antennas:
//   C = log2 det(I + (rho/nt) H H*)
// computed as sum_i log1p((rho/nt) * lambda_i) / ln 2 over the eigenvalues of
// the smaller Gram matrix (closed forms for sizes 1 and 2, Eigen above that).
double mutual_info(const ChannelMatrix& h, double rho);

// sum over all entries of all blocks of |h_ij|^2
double gain_sq_sum(const ChannelSequence& seq);

}  // namespace sdmt
