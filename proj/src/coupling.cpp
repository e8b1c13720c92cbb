#include "beamq/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace beamq::coupling {

namespace {

// Eigen-decomposition of the symmetric companion of a zero-diagonal skew
// tridiagonal matrix (same sub-diagonal, symmetrized); its spectrum is
// {+-lambda_k} plus a zero for odd dim.
Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> companion_eigs(const Eigen::VectorXd& sub,
                                                              bool vectors) {
  const Eigen::VectorXd diag = Eigen::VectorXd::Zero(sub.size() + 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub,
                                vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("coupling: tridiagonal eigensolver failed", 0.0);
  }
  return solver;
}

std::vector<double> positive_descending(const Eigen::VectorXd& all_eigs, int dim) {
  // Eigen returns the spectrum ascending; the top floor(dim/2) entries are
  // the positive branch.
  std::vector<double> lam;
  lam.reserve(dim / 2);
  for (int i = dim - 1; i >= dim - dim / 2; --i) lam.push_back(all_eigs[i]);
  return lam;
}

void check_simple_spectrum(const Eigen::VectorXd& eigs) {
  double min_gap = std::numeric_limits<double>::infinity();
  for (int i = 0; i + 1 < eigs.size(); ++i) min_gap = std::min(min_gap, eigs[i + 1] - eigs[i]);
  if (eigs.size() > 1 && min_gap < 1e-12) {
    throw NumericalError("normal_form: spectrum not simple", min_gap);
  }
}

Eigen::VectorXd hg_subdiagonal(int dim) {
  Eigen::VectorXd sub(dim - 1);
  for (int n = 0; n + 1 < dim; ++n) sub[n] = std::sqrt(n + 1.0);
  return sub;
}

// Sub-diagonal of a zero-diagonal skew tridiagonal matrix; rejects anything
// with other structure.
Eigen::VectorXd extract_subdiagonal(const Eigen::MatrixXd& m) {
  const int dim = static_cast<int>(m.rows());
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      if (std::abs(i - j) > 1 && m(i, j) != 0.0) {
        throw std::invalid_argument("normal_form: matrix is not tridiagonal");
      }
    }
    if (m(i, i) != 0.0) throw std::invalid_argument("normal_form: diagonal must vanish");
  }
  Eigen::VectorXd sub(dim - 1);
  for (int n = 0; n + 1 < dim; ++n) sub[n] = m(n + 1, n);
  return sub;
}

}  // namespace

CouplingMatrix build_gamma(int dim) {
  if (dim < 2) throw std::invalid_argument("build_gamma: dim must be >= 2");
  CouplingMatrix g;
  g.dim = dim;
  g.entries = Eigen::MatrixXd::Zero(dim, dim);
  for (int m = 0; m < dim; ++m) {
    if (m > 0) g.entries(m, m - 1) = std::sqrt(static_cast<double>(m));
    if (m + 1 < dim) g.entries(m, m + 1) = -std::sqrt(m + 1.0);
  }
  return g;
}

std::vector<double> spectrum(int dim) {
  if (dim < 2) throw std::invalid_argument("spectrum: dim must be >= 2");
  const auto solver = companion_eigs(hg_subdiagonal(dim), false);
  return positive_descending(solver.eigenvalues(), dim);
}

NormalForm normal_form(const CouplingMatrix& gamma) {
  const int dim = gamma.dim;
  if (dim < 2 || gamma.entries.rows() != dim || gamma.entries.cols() != dim) {
    throw std::invalid_argument("normal_form: malformed coupling matrix");
  }
  if ((gamma.entries + gamma.entries.transpose()).cwiseAbs().maxCoeff() > 0.0) {
    throw std::invalid_argument("normal_form: matrix is not skew-symmetric");
  }

  const auto solver = companion_eigs(extract_subdiagonal(gamma.entries), true);
  check_simple_spectrum(solver.eigenvalues());

  NormalForm nf;
  nf.eigenvalues = positive_descending(solver.eigenvalues(), dim);
  nf.transform.resize(dim, dim);

  // For the +lambda eigenvector v of the companion matrix, z = D* v with
  // D = diag(i^n) satisfies Gamma z = i lambda z.  Splitting z into its real
  // and imaginary parts (supported on even and odd indices respectively)
  // gives the invariant plane: Gamma u = -lambda w, Gamma w = +lambda u.
  const int pairs = dim / 2;
  for (int k = 0; k < pairs; ++k) {
    Eigen::VectorXd v = solver.eigenvectors().col(dim - 1 - k);
    int lead = 0;
    while (lead < dim && std::abs(v[lead]) < 1e-14) ++lead;
    if (lead < dim && v[lead] < 0.0) v = -v;

    Eigen::VectorXd u = Eigen::VectorXd::Zero(dim);
    Eigen::VectorXd w = Eigen::VectorXd::Zero(dim);
    const double scale = std::sqrt(2.0);
    for (int n = 0; n < dim; ++n) {
      switch (n % 4) {
        case 0: u[n] = scale * v[n]; break;
        case 1: w[n] = -scale * v[n]; break;
        case 2: u[n] = -scale * v[n]; break;
        case 3: w[n] = scale * v[n]; break;
      }
    }
    nf.transform.row(2 * k) = u.transpose();
    nf.transform.row(2 * k + 1) = w.transpose();
  }
  if (dim % 2 == 1) {
    // Kernel vector: the zero eigenvector of the companion matrix is
    // supported on even indices, where D* is real (+-1).
    Eigen::VectorXd v = solver.eigenvectors().col(dim / 2);
    Eigen::VectorXd u = Eigen::VectorXd::Zero(dim);
    for (int n = 0; n < dim; n += 2) u[n] = (n % 4 == 0) ? v[n] : -v[n];
    if (u.norm() > 0.0) u /= u.norm();
    int lead = 0;
    while (lead < dim && std::abs(u[lead]) < 1e-14) ++lead;
    if (lead < dim && u[lead] < 0.0) u = -u;
    nf.transform.row(dim - 1) = u.transpose();
  }

  // Polish: project the rows back onto the orthogonal group.
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(nf.transform.transpose());
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(dim, dim);
  const Eigen::MatrixXd r = qr.matrixQR().topRows(dim).triangularView<Eigen::Upper>();
  for (int i = 0; i < dim; ++i) {
    if (r(i, i) < 0.0) q.col(i) = -q.col(i);
  }
  nf.transform = q.transpose();

  return nf;
}

Eigen::MatrixXd block_form(const std::vector<double>& eigenvalues, int dim) {
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(dim, dim);
  for (std::size_t k = 0; k < eigenvalues.size(); ++k) {
    const int i = static_cast<int>(2 * k);
    if (i + 1 >= dim) throw std::invalid_argument("block_form: too many eigenvalues");
    b(i, i + 1) = eigenvalues[k];
    b(i + 1, i) = -eigenvalues[k];
  }
  return b;
}

SchattenSums schatten_sums(const std::vector<double>& eigenvalues) {
  SchattenSums sums;
  for (double lam : eigenvalues) {
    sums.sum_lambda += lam;
    sums.sum_lambda_sq += lam * lam;
  }
  return sums;
}

SchattenSums schatten_sums(const NormalForm& nf) { return schatten_sums(nf.eigenvalues); }

std::vector<double> photon_allocation(const std::vector<double>& eigenvalues) {
  const double total = std::accumulate(eigenvalues.begin(), eigenvalues.end(), 0.0);
  if (!(total > 0.0)) {
    throw std::invalid_argument("photon_allocation: eigenvalue sum must be positive");
  }
  std::vector<double> c(eigenvalues.size());
  std::transform(eigenvalues.begin(), eigenvalues.end(), c.begin(),
                 [total](double lam) { return lam / total; });
  return c;
}

std::vector<double> photon_allocation(const NormalForm& nf) {
  return photon_allocation(nf.eigenvalues);
}

}  // namespace beamq::coupling
