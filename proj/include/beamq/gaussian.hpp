#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "beamq/coupling.hpp"
#include "beamq/errors.hpp"

// Covariance-matrix simulator of the structured squeezed-light transceiver.
//
// Quadrature convention: x = a + a^dag, p = i(a^dag - a), so the vacuum
// covariance is the identity and a coherent state |alpha> has mean
// (2 Re alpha, 2 Im alpha).  Quadratures are interleaved (x1, p1, x2, p2, ...).
// Mode layout: K = M_S M_T / 2 signal modes gamma^s followed by K coherent
// modes gamma^c.

namespace beamq::gaussian {

struct GaussianState {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;

  int mode_count() const { return static_cast<int>(mean.size()) / 2; }
  // Throws if cov is asymmetric or violates the uncertainty relation
  // cov + i Omega >= 0 beyond tolerance.
  void validate(double tol = 1e-9) const;
};

struct TransceiverConfig {
  int spatial_modes = 2;  // M_S, even
  int temporal_modes = 1;
  double total_photons = 1.0;      // N, split N_s + N_c
  double squeezed_fraction = 0.5;  // N_s / N
  double displacement_true = 0.0;  // d in waist units
  std::uint64_t seed = 1;
  double aperture_radius = 1.0;
  bool exact_mzi = false;  // full MZI symplectic instead of the linearized map

  void validate() const;
  double photons_squeezed() const { return squeezed_fraction * total_photons; }
  double photons_coherent() const { return (1.0 - squeezed_fraction) * total_photons; }
};

struct EstimationReport {
  double d_true = 0.0;
  double estimate_mean = 0.0;
  double estimate_std = 0.0;
  double predicted_std = 0.0;
  long long trials = 0;
  double standard_error = 0.0;  // estimate_std / sqrt(trials)
};

// Eigenvalues tiled over the temporal slots with the allocation renormalized
// across all M_S M_T / 2 pairs.  a_ratio = sum(l^2)/sum(l) is invariant under
// the tiling.
struct ModePlan {
  std::vector<double> lambdas;
  std::vector<double> allocation;
  double a_ratio = 0.0;
};

ModePlan spatio_temporal_extend(const TransceiverConfig& cfg);

// Orthogonal K x K matrix whose first row is sqrt(allocation), completed by
// Gram-Schmidt over the standard basis.
Eigen::MatrixXd beamsplitter_array(const std::vector<double>& allocation);

// Real 2K x 2K symplectic of a complex K x K mode map (interleaved layout).
Eigen::MatrixXd symplectic_from_unitary(const Eigen::MatrixXcd& u);

// Standard symplectic form matching the interleaved layout.
Eigen::MatrixXd symplectic_form(int mode_count);

// Squeezed vacuum with N_s mean photons in the superposition mode
// sum_k sqrt(c_k) gamma^s_k, coherent amplitudes sqrt(c_k N_c) in gamma^c_k.
// The squeezed quadrature is self-calibrated: whichever axis minimizes the
// closed-form estimator variance.
GaussianState prepare_probe(const TransceiverConfig& cfg, const ModePlan& plan);

// Pairwise shift encoding gamma^s'_k = (1 - i l_k d) gamma^s_k + i l_k d gamma^c_k
// (or the exact MZI with phase 2 l_k d when cfg.exact_mzi).  The linearized
// map requires |l_max d| <= 0.05.
GaussianState encode_displacement(const GaussianState& state, const TransceiverConfig& cfg,
                                  const ModePlan& plan);

// Closed-form standard deviation of the estimator, from the same covariance
// pipeline without sampling.
double predicted_std(const TransceiverConfig& cfg, const ModePlan& plan);

// Recombines b' = W gamma^s', samples the measured quadrature of b'_0 from
// its exact Gaussian marginal, and evaluates the unbiased estimator
// d_hat = Im(b'_0) / (A sqrt(N_c)) per trial.  Trials are drawn in fixed-size
// batches with per-batch generator streams, so a given seed yields a
// bit-identical report regardless of threading.
EstimationReport measure_and_estimate(const GaussianState& state, const TransceiverConfig& cfg,
                                      const ModePlan& plan, long long trials);

// Mean photon number of a state under the convention above.
double mean_photon_number(const GaussianState& state);

}  // namespace beamq::gaussian
