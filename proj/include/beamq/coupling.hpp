#pragma once

#include <vector>

#include <Eigen/Dense>

#include "beamq/errors.hpp"

// The skew-symmetric mode-coupling generator for Hermite-Gaussian modes and
// its orthogonal normal form.

namespace beamq::coupling {

struct CouplingMatrix {
  int dim = 0;
  Eigen::MatrixXd entries;  // skew-symmetric, tridiagonal
};

// Gamma[m][m-1] = +sqrt(m), Gamma[m][m+1] = -sqrt(m+1); the sign convention
// makes the shift overlap expand as S(d) = I - Gamma d + O(d^2).
CouplingMatrix build_gamma(int dim);

struct NormalForm {
  Eigen::MatrixXd transform;        // orthogonal T, rows paired per eigenvalue
  std::vector<double> eigenvalues;  // floor(dim/2) positive values, descending
};

// Orthogonal T with T Gamma T^T = direct sum of lambda_k [[0,1],[-1,0]]
// (trailing zero row/column when dim is odd).  Computed from the symmetric
// tridiagonal companion of Gamma; eigenpairs for +-lambda are recombined into
// real planes and re-orthonormalized with a QR pass.
NormalForm normal_form(const CouplingMatrix& gamma);

// Positive eigenvalue magnitudes only (no transform); cheap for large dim.
std::vector<double> spectrum(int dim);

// Assembled block form matching `normal_form`, for reconstruction checks.
Eigen::MatrixXd block_form(const std::vector<double>& eigenvalues, int dim);

struct SchattenSums {
  double sum_lambda = 0.0;     // half the Schatten 1-norm of Gamma
  double sum_lambda_sq = 0.0;  // half the squared Frobenius norm
};

SchattenSums schatten_sums(const NormalForm& nf);
SchattenSums schatten_sums(const std::vector<double>& eigenvalues);

// Photon fractions c_k = lambda_k / sum(lambda); sums to one.
std::vector<double> photon_allocation(const NormalForm& nf);
std::vector<double> photon_allocation(const std::vector<double>& eigenvalues);

}  // namespace beamq::coupling
