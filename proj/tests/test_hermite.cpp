#include <doctest.h>

#include <cmath>
#include <functional>

#include "beamq/coupling.hpp"
#include "beamq/hermite.hpp"

using beamq::NumericalError;
using beamq::hermite::HermiteBasis;
using beamq::hermite::gauss_hermite;
using beamq::hermite::hermite_function;
using beamq::hermite::numeric_coupling;
using beamq::hermite::overlap_matrix;

namespace {

// Oracle: direct evaluation of the defining formula with the exact
// integer-coefficient Hermite recurrence in extended precision.  Usable at
// small order only; that is the point.
long double psi_direct(int n, long double x) {
  long double h_prev = 1.0L, h_cur = 2.0L * x;
  if (n == 0) h_cur = h_prev;
  for (int k = 1; k < n; ++k) {
    const long double h_next = 2.0L * x * h_cur - 2.0L * k * h_prev;
    h_prev = h_cur;
    h_cur = h_next;
  }
  long double factorial = 1.0L;
  for (int k = 2; k <= n; ++k) factorial *= k;
  const long double norm = std::pow(2.0L, n) * factorial * std::sqrt((long double)M_PI);
  return h_cur * std::exp(-x * x / 2.0L) / std::sqrt(norm);
}

// Oracle: adaptive Simpson integration, independent of the quadrature path.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa,
                        double fm, double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol) {
    return left + right + (left + right - whole) / 15.0;
  }
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

double mode_fn(int n, double x) {  // Phi_n at unit waist
  return std::pow(2.0, 0.25) * hermite_function(n, std::sqrt(2.0) * x);
}

}  // namespace

TEST_CASE("hermite function fixed values") {
  CHECK(hermite_function(0, 0.0) == doctest::Approx(std::pow(M_PI, -0.25)).epsilon(1e-14));
  CHECK(hermite_function(1, 0.0) == doctest::Approx(0.0).epsilon(1e-15));
  // Extended-precision direct evaluation, plus an independently computed
  // 22-digit reference for the same point.
  const double got = hermite_function(10, 3.7);
  CHECK(got == doctest::Approx((double)psi_direct(10, 3.7L)).epsilon(1e-12));
  CHECK(got == doctest::Approx(0.33413569497437823).epsilon(1e-12));
}

TEST_CASE("hermite function matches direct formula across orders") {
  for (int n : {2, 3, 5, 8, 13}) {
    for (double x : {-4.1, -0.3, 0.9, 2.5}) {
      CHECK(hermite_function(n, x) ==
            doctest::Approx((double)psi_direct(n, (long double)x)).epsilon(1e-12));
    }
  }
}

TEST_CASE("hermite function rejects bad input") {
  CHECK_THROWS_AS((void)hermite_function(-1, 0.0), std::invalid_argument);
  CHECK_THROWS_AS((void)hermite_function(2, std::nan("")), std::invalid_argument);
  CHECK_THROWS_AS((void)hermite_function(2, INFINITY), std::invalid_argument);
}

TEST_CASE("basis invariants") {
  CHECK_THROWS_AS(HermiteBasis(1), std::invalid_argument);
  CHECK_THROWS_AS(HermiteBasis(4, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(HermiteBasis(4, -1.0), std::invalid_argument);
}

TEST_CASE("gauss-hermite rule sanity") {
  const auto rule = gauss_hermite(1);
  CHECK(rule.nodes[0] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(rule.weights[0] == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-14));

  const auto rule8 = gauss_hermite(8);
  double total = 0.0, second = 0.0;
  for (int i = 0; i < 8; ++i) {
    total += rule8.weights[i];
    second += rule8.weights[i] * rule8.nodes[i] * rule8.nodes[i];
  }
  CHECK(total == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-14));
  CHECK(second == doctest::Approx(0.5 * std::sqrt(M_PI)).epsilon(1e-13));
}

TEST_CASE("orthonormality of the evaluated modes") {
  const HermiteBasis basis(32);
  const auto s = overlap_matrix(basis, 0.0);
  const double resid = (s.entries - Eigen::MatrixXd::Identity(32, 32)).cwiseAbs().maxCoeff();
  CHECK(resid < 1e-10);
}

TEST_CASE("derivative identity against a finite-difference stencil") {
  const double h = 5e-4;
  for (int m = 1; m <= 10; ++m) {
    for (double x = -3.0; x <= 3.01; x += 0.5) {
      const auto psi = [m](double t) { return hermite_function(m, t); };
      const double fd =
          (-psi(x + 2 * h) + 8 * psi(x + h) - 8 * psi(x - h) + psi(x - 2 * h)) / (12 * h);
      const double identity = std::sqrt(m / 2.0) * hermite_function(m - 1, x) -
                              std::sqrt((m + 1) / 2.0) * hermite_function(m + 1, x);
      CHECK(std::abs(fd - identity) < 1e-10);
    }
  }
}

TEST_CASE("overlap at zero shift is the identity") {
  const HermiteBasis basis(4);
  const auto s = overlap_matrix(basis, 0.0);
  CHECK((s.entries - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("overlap expands as identity minus coupling times shift") {
  const HermiteBasis basis(4);
  const double d = 1e-4;
  const auto s = overlap_matrix(basis, d);
  const Eigen::MatrixXd expected =
      Eigen::MatrixXd::Identity(4, 4) - beamq::coupling::build_gamma(4).entries * d;
  CHECK((s.entries - expected).cwiseAbs().maxCoeff() < 1e-7);
}

TEST_CASE("overlap matches adaptive-integration oracle at d = 0.3") {
  const HermiteBasis basis(4);
  const auto s = overlap_matrix(basis, 0.3);
  for (int m = 0; m < 4; ++m) {
    for (int n = 0; n < 4; ++n) {
      const auto integrand = [&](double x) { return mode_fn(m, x - 0.3) * mode_fn(n, x); };
      const double exact = integrate(integrand, -9.0, 9.0, 1e-13);
      CHECK(s.entries(m, n) == doctest::Approx(exact).epsilon(2e-9).scale(1.0));
    }
  }
}

TEST_CASE("overlap respects the waist unit") {
  // A shift of 0.3 waists means the same thing at any waist.
  const auto narrow = overlap_matrix(HermiteBasis(4, 0.5), 0.15);
  const auto unit = overlap_matrix(HermiteBasis(4, 1.0), 0.3);
  CHECK((narrow.entries - unit.entries).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("overlap orthogonality guard reports the residual") {
  const HermiteBasis basis(4);
  CHECK_THROWS_AS((void)overlap_matrix(basis, 0.3, 1e-18), NumericalError);
  try {
    (void)overlap_matrix(basis, 0.3, 1e-18);
  } catch (const NumericalError& e) {
    CHECK(e.residual() > 0.0);
    CHECK(e.residual() < 1e-9);
  }
  CHECK_THROWS_AS((void)overlap_matrix(basis, INFINITY), std::invalid_argument);
}

TEST_CASE("shift expansion residual is second order") {
  const HermiteBasis basis(4);
  const Eigen::MatrixXd gamma = beamq::coupling::build_gamma(4).entries;
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(4, 4);
  double ratios[3];
  int i = 0;
  for (double d : {1e-2, 1e-3, 1e-4}) {
    const auto s = overlap_matrix(basis, d);
    ratios[i++] = (s.entries - eye + gamma * d).norm() / (d * d);
  }
  for (int k = 1; k < 3; ++k) {
    CHECK(std::abs(ratios[k] / ratios[0] - 1.0) < 0.2);
  }
}

TEST_CASE("numeric coupling fixed matrices") {
  const Eigen::MatrixXd m3 = numeric_coupling(HermiteBasis(3), 1e-4);
  Eigen::MatrixXd want(3, 3);
  const double r2 = std::sqrt(2.0);
  want << 0, -1, 0, 1, 0, -r2, 0, r2, 0;
  CHECK((m3 - want).cwiseAbs().maxCoeff() < 1e-6);

  const Eigen::MatrixXd m2 = numeric_coupling(HermiteBasis(2), 1e-4);
  Eigen::MatrixXd want2(2, 2);
  want2 << 0, -1, 1, 0;
  CHECK((m2 - want2).cwiseAbs().maxCoeff() < 1e-6);

  CHECK((m3 + m3.transpose()).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("numeric coupling converges at second order in the step") {
  const HermiteBasis basis(5);
  const Eigen::MatrixXd gamma = beamq::coupling::build_gamma(5).entries;
  const double err_coarse = (numeric_coupling(basis, 2e-3) - gamma).cwiseAbs().maxCoeff();
  const double err_fine = (numeric_coupling(basis, 1e-3) - gamma).cwiseAbs().maxCoeff();
  CHECK(err_coarse / err_fine == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("numeric coupling validates the step") {
  CHECK_THROWS_AS((void)numeric_coupling(HermiteBasis(3), 0.0), std::invalid_argument);
  CHECK_THROWS_AS((void)numeric_coupling(HermiteBasis(3), -1e-4), std::invalid_argument);
}
