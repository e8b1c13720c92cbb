#pragma once

#include <Eigen/Dense>

#include "beamq/errors.hpp"

// Hermite functions and Hermite-Gaussian receiver modes.
//
// Internal units: lengths are measured in units of the mode-field radius
// (waist), so the n-th mode is Phi_n(x) = (2/w^2)^{1/4} psi_n(sqrt(2) x / w)
// with psi_n the order-n Hermite function and w the waist.  With w = 1 the
// mode-mixing generator induced by a transverse shift has the dimensionless
// tridiagonal form with entries +-sqrt(n).

namespace beamq::hermite {

struct HermiteBasis {
  int max_order;       // number of modes M (orders 0 .. M-1)
  double waist = 1.0;  // mode-field radius; shifts are expressed in the same unit

  HermiteBasis(int max_order_, double waist_ = 1.0);
};

// psi_n(x) = (2^n n! sqrt(pi))^{-1/2} e^{-x^2/2} H_n(x), evaluated by the
// three-term recurrence on the normalized functions.
double hermite_function(int order, double x);

struct OverlapMatrix {
  double displacement = 0.0;
  Eigen::MatrixXd entries;  // S_mn = integral Phi_m(x - d) Phi_n(x) dx
};

struct QuadratureRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;         // weight function e^{-x^2}
  Eigen::VectorXd scaled_weights;  // w_i e^{x_i^2}; never underflows
};

// Gauss-Hermite rule: Golub-Welsch nodes polished by one Newton step on the
// Hermite function, weights from the Christoffel sum 1/sum_k psi_k(x_i)^2
// (the eigenvector-based weights lose all relative accuracy at the extreme
// nodes of large rules).
QuadratureRule gauss_hermite(int point_count);

// Overlap matrix of the displaced modes with the undisplaced ones.  The
// columns are validated as an orthonormal set against an internally extended
// basis (the M x M block of a unitary operator need not be orthogonal by
// itself); a residual above `ortho_tol` throws NumericalError.
OverlapMatrix overlap_matrix(const HermiteBasis& basis, double displacement,
                             double ortho_tol = 1e-8);

// Central finite difference -(S(h) - S(-h)) / 2h, an O(h^2) estimate of the
// mode-coupling generator.
Eigen::MatrixXd numeric_coupling(const HermiteBasis& basis, double step = 1e-4);

}  // namespace beamq::hermite
