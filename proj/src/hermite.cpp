#include "beamq/hermite.hpp"

#include <cmath>
#include <stdexcept>

namespace beamq::hermite {

namespace {

constexpr double kPiQuarterInv = 0.75112554446494248;  // pi^(-1/4)

// psi_0 .. psi_{count-1} at x.  Hermite functions stay bounded, so the row is
// safe at any order and argument.
void hermite_row(int count, double x, Eigen::Ref<Eigen::VectorXd> out) {
  out[0] = kPiQuarterInv * std::exp(-0.5 * x * x);
  if (count == 1) return;
  out[1] = std::sqrt(2.0) * x * out[0];
  for (int n = 1; n + 1 < count; ++n) {
    out[n + 1] = std::sqrt(2.0 / (n + 1)) * x * out[n] - std::sqrt(n / (n + 1.0)) * out[n - 1];
  }
}

// Extended dimension covering the photon-number spread of the shifted modes,
// so that the returned block's columns can be validated as part of an
// orthonormal set.
int extended_order(int max_order, double shift_in_waists) {
  const double b2 = shift_in_waists * shift_in_waists;
  const double spread = 10.0 * std::sqrt(b2 * (2.0 * max_order + 1.0) + b2 * b2 + 1.0);
  const int pad = static_cast<int>(std::ceil(b2 + spread)) + 10;
  return std::min(max_order + pad, 2048);
}

// S_mn = integral psi_m(u - a) psi_n(u) du, by Gauss-Hermite quadrature
// centered at a/2.  With the Gaussian of the weight split across the two
// shifted Hermite functions the shift prefactor cancels identically:
//   S_mn = sum_i [w_i e^{v_i^2}] psi_m(v_i - a/2) psi_n(v_i + a/2),
// which is exact for the polynomial content once the rule order covers it.
Eigen::MatrixXd overlap_block(const HermiteBasis& basis, double displacement, int rows,
                              int cols) {
  const double a = std::sqrt(2.0) * displacement / basis.waist;
  const int order = std::max(rows, cols);
  const QuadratureRule rule = gauss_hermite(4 * order + 16);

  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(rows, cols);
  Eigen::VectorXd hm(rows), hn(cols);
  for (int i = 0; i < rule.nodes.size(); ++i) {
    const double v = rule.nodes[i];
    hermite_row(rows, v - 0.5 * a, hm);
    hermite_row(cols, v + 0.5 * a, hn);
    s.noalias() += rule.scaled_weights[i] * hm * hn.transpose();
  }
  return s;
}

}  // namespace

HermiteBasis::HermiteBasis(int max_order_, double waist_) : max_order(max_order_), waist(waist_) {
  if (max_order < 2) throw std::invalid_argument("HermiteBasis: max_order must be >= 2");
  if (!(waist > 0.0)) throw std::invalid_argument("HermiteBasis: waist must be positive");
}

double hermite_function(int order, double x) {
  if (order < 0) throw std::invalid_argument("hermite_function: order must be >= 0");
  if (!std::isfinite(x)) throw std::invalid_argument("hermite_function: x must be finite");

  const double gauss = std::exp(-0.5 * x * x);
  double prev = kPiQuarterInv * gauss;
  if (order == 0) return prev;
  double cur = std::sqrt(2.0) * x * prev;
  for (int n = 1; n < order; ++n) {
    const double next = std::sqrt(2.0 / (n + 1)) * x * cur - std::sqrt(n / (n + 1.0)) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

QuadratureRule gauss_hermite(int point_count) {
  if (point_count < 1) throw std::invalid_argument("gauss_hermite: point_count must be >= 1");

  Eigen::VectorXd diag = Eigen::VectorXd::Zero(point_count);
  Eigen::VectorXd sub(std::max(point_count - 1, 0));
  for (int k = 0; k + 1 < point_count; ++k) sub[k] = std::sqrt(0.5 * (k + 1));

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("gauss_hermite: tridiagonal eigensolver failed", 0.0);
  }

  QuadratureRule rule;
  rule.nodes = solver.eigenvalues();
  rule.weights.resize(point_count);
  rule.scaled_weights.resize(point_count);

  Eigen::VectorXd psi(point_count + 1);
  for (int i = 0; i < point_count; ++i) {
    double x = rule.nodes[i];
    // One Newton polish on psi_n; psi_n'(x) = sqrt(2n) psi_{n-1}(x) - x psi_n(x).
    hermite_row(point_count + 1, x, psi);
    const double deriv =
        std::sqrt(2.0 * point_count) * psi[point_count - 1] - x * psi[point_count];
    if (deriv != 0.0) {
      x -= psi[point_count] / deriv;
      rule.nodes[i] = x;
      hermite_row(point_count + 1, x, psi);
    }
    const double christoffel = psi.head(point_count).squaredNorm();
    rule.scaled_weights[i] = 1.0 / christoffel;
    rule.weights[i] = std::exp(-x * x) / christoffel;
  }
  return rule;
}

OverlapMatrix overlap_matrix(const HermiteBasis& basis, double displacement, double ortho_tol) {
  if (!std::isfinite(displacement)) {
    throw std::invalid_argument("overlap_matrix: displacement must be finite");
  }

  const int m = basis.max_order;
  const int m_ext = extended_order(m, displacement / basis.waist);
  const Eigen::MatrixXd s_ext = overlap_block(basis, displacement, m_ext, m);

  // Columns live in the full mode space; with enough extra rows their Gram
  // matrix must be the identity up to quadrature error.
  const Eigen::MatrixXd gram = s_ext.transpose() * s_ext;
  const double residual = (gram - Eigen::MatrixXd::Identity(m, m)).cwiseAbs().maxCoeff();
  if (residual > ortho_tol) {
    throw NumericalError("overlap_matrix: orthonormality residual above threshold", residual);
  }

  OverlapMatrix result;
  result.displacement = displacement;
  result.entries = s_ext.topRows(m);
  return result;
}

Eigen::MatrixXd numeric_coupling(const HermiteBasis& basis, double step) {
  if (!(step > 0.0) || step >= 1.0) {
    throw std::invalid_argument("numeric_coupling: step must lie in (0, 1)");
  }
  const Eigen::MatrixXd forward = overlap_matrix(basis, step).entries;
  const Eigen::MatrixXd backward = overlap_matrix(basis, -step).entries;
  return -(forward - backward) / (2.0 * step);
}

}  // namespace beamq::hermite
