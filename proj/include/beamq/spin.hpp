#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "beamq/errors.hpp"

// Exact verification engine in the Schwinger spin picture: a mode pair with
// N photons is a spin-N/2 system and the pairwise shift generator acts as
// 2 lambda S_y per pair.  Everything here is dense and exact, intended for
// small dimensions only.

namespace beamq::spin {

struct SpinBlock {
  int pair_index = 0;
  int photon_number = 0;  // N_k >= 1; block dimension N_k + 1
  double lambda = 0.0;    // coupling magnitude lambda_k > 0
};

// Spin-(N/2) angular momentum matrices in the S_z eigenbasis, ordered from
// m = +N/2 down to -N/2.  S_y is purely imaginary and antisymmetric.
Eigen::MatrixXcd build_sy(int n_photons);
Eigen::MatrixXcd build_sx(int n_photons);

// Upper bound on the standard deviation of H = sum_k 2 lambda_k S_y^(k):
// sum_k lambda_k N_k (half the spectral width of each block, summed).
double variance_bound(const std::vector<SpinBlock>& blocks);

struct BlockState {
  Eigen::VectorXcd amplitudes;  // length N_k + 1, unit norm
};

struct OptimalProbe {
  std::vector<BlockState> plus_blocks;   // per-block S_x(pi/2)-rotated top states
  std::vector<BlockState> minus_blocks;  // per-block rotated bottom states
  Eigen::VectorXcd state;                // (|+> + |->)/sqrt(2) on the tensor product
};

// The bound-saturating probe.  Total dimension prod(N_k + 1) is capped at
// 10^6; the global phase is fixed by making the first nonzero amplitude
// real and positive.
OptimalProbe optimal_probe(const std::vector<SpinBlock>& blocks);

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
};

// <H> and Var(H) for a normalized state on the tensor product of the blocks.
Moments variance_of(const Eigen::VectorXcd& state, const std::vector<SpinBlock>& blocks);

// Product of per-block top S_z states |N_k, 0> (the coherent-pair analog):
// mean 0 and variance sum_k lambda_k^2 N_k.
Eigen::VectorXcd top_state(const std::vector<SpinBlock>& blocks);

// Haar-ish random normalized state (i.i.d. complex Gaussian amplitudes).
Eigen::VectorXcd random_state(const std::vector<SpinBlock>& blocks, std::uint64_t seed);

}  // namespace beamq::spin
