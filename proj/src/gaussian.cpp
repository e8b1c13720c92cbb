#include "beamq/gaussian.hpp"

#include <cmath>
#include <complex>
#include <future>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

namespace beamq::gaussian {

namespace {

using Complex = std::complex<double>;

constexpr long long kBatchSize = 65536;  // fixed partition, part of the sampling contract

enum class SqueezeAxis { X, P };

int pair_count(const TransceiverConfig& cfg) {
  return cfg.spatial_modes * cfg.temporal_modes / 2;
}

void check_plan(const TransceiverConfig& cfg, const ModePlan& plan) {
  if (static_cast<int>(plan.lambdas.size()) != pair_count(cfg) ||
      plan.lambdas.size() != plan.allocation.size()) {
    throw std::invalid_argument("gaussian: mode plan does not match configuration");
  }
  double total = 0.0;
  for (double c : plan.allocation) {
    if (c < 0.0) throw std::invalid_argument("gaussian: negative photon fraction");
    total += c;
  }
  if (std::abs(total - 1.0) > 1e-10) {
    throw std::invalid_argument("gaussian: photon fractions must sum to one");
  }
}

GaussianState prepare_with_axis(const TransceiverConfig& cfg, const ModePlan& plan,
                                SqueezeAxis axis) {
  const int k = pair_count(cfg);
  const double n_s = cfg.photons_squeezed();
  const double n_c = cfg.photons_coherent();
  const double r = std::asinh(std::sqrt(n_s));  // N_s = sinh^2 r

  // Squeeze one mode, then scatter it over the signal modes with the array:
  // gamma^s = W^T a', so the squeezed quadratures sit in a'_0.
  Eigen::MatrixXd cov_prime = Eigen::MatrixXd::Identity(2 * k, 2 * k);
  const double squeezed = std::exp(-2.0 * r);
  const double stretched = std::exp(2.0 * r);
  if (axis == SqueezeAxis::P) {
    cov_prime(0, 0) = stretched;
    cov_prime(1, 1) = squeezed;
  } else {
    cov_prime(0, 0) = squeezed;
    cov_prime(1, 1) = stretched;
  }

  const Eigen::MatrixXd w = beamsplitter_array(plan.allocation);
  const Eigen::MatrixXd s_array = symplectic_from_unitary(w.transpose().cast<Complex>());

  GaussianState state;
  state.cov = Eigen::MatrixXd::Identity(4 * k, 4 * k);
  state.cov.topLeftCorner(2 * k, 2 * k) = s_array * cov_prime * s_array.transpose();
  state.mean = Eigen::VectorXd::Zero(4 * k);
  for (int i = 0; i < k; ++i) {
    // coherent amplitude sqrt(c_i N_c), real phase: mean x = 2 alpha
    state.mean[2 * (k + i)] = 2.0 * std::sqrt(plan.allocation[i] * n_c);
  }
  return state;
}

// Linear quadrature map of the pairwise shift encoding (shared by the mean
// and the covariance update).
Eigen::MatrixXd encoding_map(const TransceiverConfig& cfg, const ModePlan& plan) {
  const int k = pair_count(cfg);
  const double d = cfg.displacement_true;

  if (cfg.exact_mzi) {
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(2 * k, 2 * k);
    for (int i = 0; i < k; ++i) {
      const double phi = 2.0 * plan.lambdas[i] * d;
      const Complex em = std::exp(Complex(0.0, -phi));
      u(i, i) = 0.5 * (em + 1.0);
      u(i, k + i) = 0.5 * (1.0 - em);
      u(k + i, i) = 0.5 * (1.0 - em);
      u(k + i, k + i) = 0.5 * (em + 1.0);
    }
    return symplectic_from_unitary(u);
  }

  double lambda_max = 0.0;
  for (double l : plan.lambdas) lambda_max = std::max(lambda_max, l);
  if (std::abs(lambda_max * d) > 0.05) {
    throw std::invalid_argument(
        "encode_displacement: |lambda_max * d| > 0.05 invalidates the linearized map; "
        "enable exact_mzi");
  }

  Eigen::MatrixXd e = Eigen::MatrixXd::Identity(4 * k, 4 * k);
  for (int i = 0; i < k; ++i) {
    const double ld = plan.lambdas[i] * d;
    const int s = 2 * i, c = 2 * (k + i);
    // gamma^s' = (1 - i ld) gamma^s + i ld gamma^c and symmetrically for
    // gamma^c', written on (x, p).
    e(s, s + 1) += ld;
    e(s, c + 1) -= ld;
    e(s + 1, s) -= ld;
    e(s + 1, c) += ld;
    e(c, c + 1) += ld;
    e(c, s + 1) -= ld;
    e(c + 1, c) -= ld;
    e(c + 1, s) += ld;
  }
  return e;
}

// Linear functional picking the measured quadrature Im(b'_0) * 2 = p of the
// recombined mode b'_0 = sum_k sqrt(c_k) gamma^s'_k.
Eigen::VectorXd measured_quadrature(const TransceiverConfig& cfg, const ModePlan& plan) {
  const int k = pair_count(cfg);
  Eigen::VectorXd f = Eigen::VectorXd::Zero(4 * k);
  for (int i = 0; i < k; ++i) f[2 * i + 1] = std::sqrt(plan.allocation[i]);
  return f;
}

double estimator_prefactor(const TransceiverConfig& cfg, const ModePlan& plan) {
  const double n_c = cfg.photons_coherent();
  if (!(n_c > 0.0)) {
    throw std::invalid_argument("gaussian: estimator requires coherent photons (N_c > 0)");
  }
  // Unbiased normalization 1/(A sqrt(N_c)); equals sqrt(2)/(A sqrt(N)) at the
  // half-and-half photon split.
  return 1.0 / (plan.a_ratio * std::sqrt(n_c));
}

struct Marginal {
  double mean = 0.0;
  double variance = 0.0;
};

Marginal measured_marginal(const GaussianState& state, const TransceiverConfig& cfg,
                           const ModePlan& plan) {
  const Eigen::VectorXd f = measured_quadrature(cfg, plan);
  Marginal m;
  m.mean = f.dot(state.mean);
  m.variance = f.dot(state.cov * f);
  if (!(m.variance > 0.0)) {
    throw NumericalError("gaussian: measured quadrature variance is not positive", m.variance);
  }
  return m;
}

double closed_form_std(const TransceiverConfig& cfg, const ModePlan& plan, SqueezeAxis axis) {
  if (!(cfg.photons_coherent() > 0.0)) return std::numeric_limits<double>::infinity();
  const GaussianState probe = prepare_with_axis(cfg, plan, axis);
  const GaussianState encoded = encode_displacement(probe, cfg, plan);
  const Marginal m = measured_marginal(encoded, cfg, plan);
  return cfg.aperture_radius * estimator_prefactor(cfg, plan) * 0.5 * std::sqrt(m.variance);
}

SqueezeAxis calibrated_axis(const TransceiverConfig& cfg, const ModePlan& plan) {
  if (!(cfg.photons_coherent() > 0.0) || !(cfg.photons_squeezed() > 0.0)) {
    return SqueezeAxis::P;
  }
  const double with_p = closed_form_std(cfg, plan, SqueezeAxis::P);
  const double with_x = closed_form_std(cfg, plan, SqueezeAxis::X);
  return with_x < with_p ? SqueezeAxis::X : SqueezeAxis::P;
}

}  // namespace

void GaussianState::validate(double tol) const {
  const int n = mode_count();
  if (mean.size() != 2 * n || cov.rows() != 2 * n || cov.cols() != 2 * n) {
    throw std::invalid_argument("GaussianState: inconsistent sizes");
  }
  if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, cov.norm())) {
    throw std::invalid_argument("GaussianState: covariance is not symmetric");
  }
  const Eigen::MatrixXd omega = symplectic_form(n);
  Eigen::MatrixXcd unc = cov.cast<Complex>() + Complex(0.0, 1.0) * omega.cast<Complex>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(unc);
  if (solver.eigenvalues().minCoeff() < -tol) {
    throw NumericalError("GaussianState: uncertainty relation violated",
                         solver.eigenvalues().minCoeff());
  }
}

void TransceiverConfig::validate() const {
  if (spatial_modes < 2 || spatial_modes % 2 != 0) {
    throw std::invalid_argument("TransceiverConfig: spatial_modes must be even and >= 2");
  }
  if (temporal_modes < 1) {
    throw std::invalid_argument("TransceiverConfig: temporal_modes must be >= 1");
  }
  if (!(total_photons > 0.0)) {
    throw std::invalid_argument("TransceiverConfig: total_photons must be positive");
  }
  if (squeezed_fraction < 0.0 || squeezed_fraction > 1.0) {
    throw std::invalid_argument("TransceiverConfig: squeezed_fraction outside [0, 1]");
  }
  if (!(aperture_radius > 0.0)) {
    throw std::invalid_argument("TransceiverConfig: aperture_radius must be positive");
  }
  if (!std::isfinite(displacement_true)) {
    throw std::invalid_argument("TransceiverConfig: displacement must be finite");
  }
}

ModePlan spatio_temporal_extend(const TransceiverConfig& cfg) {
  cfg.validate();
  const std::vector<double> base = coupling::spectrum(cfg.spatial_modes);

  ModePlan plan;
  plan.lambdas.reserve(base.size() * cfg.temporal_modes);
  for (int t = 0; t < cfg.temporal_modes; ++t) {
    plan.lambdas.insert(plan.lambdas.end(), base.begin(), base.end());
  }
  plan.allocation = coupling::photon_allocation(plan.lambdas);
  const auto sums = coupling::schatten_sums(plan.lambdas);
  plan.a_ratio = sums.sum_lambda_sq / sums.sum_lambda;
  return plan;
}

Eigen::MatrixXd beamsplitter_array(const std::vector<double>& allocation) {
  const int k = static_cast<int>(allocation.size());
  if (k < 1) throw std::invalid_argument("beamsplitter_array: empty allocation");

  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(k, k);
  for (int i = 0; i < k; ++i) {
    if (allocation[i] < 0.0) throw std::invalid_argument("beamsplitter_array: negative fraction");
    w(0, i) = std::sqrt(allocation[i]);
  }
  const double head = w.row(0).norm();
  if (!(head > 0.0)) throw std::invalid_argument("beamsplitter_array: zero allocation");
  w.row(0) /= head;

  int filled = 1;
  for (int candidate = 0; candidate < k && filled < k; ++candidate) {
    Eigen::VectorXd v = Eigen::VectorXd::Unit(k, candidate);
    for (int r = 0; r < filled; ++r) v -= w.row(r).dot(v) * w.row(r).transpose();
    const double norm = v.norm();
    if (norm > 1e-8) {
      w.row(filled++) = v.transpose() / norm;
    }
  }
  if (filled != k) throw NumericalError("beamsplitter_array: Gram-Schmidt failed", filled);
  return w;
}

Eigen::MatrixXd symplectic_from_unitary(const Eigen::MatrixXcd& u) {
  const int k = static_cast<int>(u.rows());
  if (u.cols() != k) throw std::invalid_argument("symplectic_from_unitary: square input");
  Eigen::MatrixXd s(2 * k, 2 * k);
  for (int j = 0; j < k; ++j) {
    for (int l = 0; l < k; ++l) {
      const double re = u(j, l).real();
      const double im = u(j, l).imag();
      s(2 * j, 2 * l) = re;
      s(2 * j, 2 * l + 1) = -im;
      s(2 * j + 1, 2 * l) = im;
      s(2 * j + 1, 2 * l + 1) = re;
    }
  }
  return s;
}

Eigen::MatrixXd symplectic_form(int mode_count) {
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * mode_count, 2 * mode_count);
  for (int i = 0; i < mode_count; ++i) {
    omega(2 * i, 2 * i + 1) = 1.0;
    omega(2 * i + 1, 2 * i) = -1.0;
  }
  return omega;
}

GaussianState prepare_probe(const TransceiverConfig& cfg, const ModePlan& plan) {
  cfg.validate();
  check_plan(cfg, plan);
  return prepare_with_axis(cfg, plan, calibrated_axis(cfg, plan));
}

GaussianState encode_displacement(const GaussianState& state, const TransceiverConfig& cfg,
                                  const ModePlan& plan) {
  cfg.validate();
  check_plan(cfg, plan);
  if (state.mean.size() != 4 * pair_count(cfg)) {
    throw std::invalid_argument("encode_displacement: state does not match configuration");
  }
  const Eigen::MatrixXd e = encoding_map(cfg, plan);
  GaussianState out;
  out.mean = e * state.mean;
  out.cov = e * state.cov * e.transpose();
  return out;
}

double predicted_std(const TransceiverConfig& cfg, const ModePlan& plan) {
  cfg.validate();
  check_plan(cfg, plan);
  return closed_form_std(cfg, plan, calibrated_axis(cfg, plan));
}

EstimationReport measure_and_estimate(const GaussianState& state, const TransceiverConfig& cfg,
                                      const ModePlan& plan, long long trials) {
  cfg.validate();
  check_plan(cfg, plan);
  if (trials < 1) throw std::invalid_argument("measure_and_estimate: trials must be >= 1");

  const Marginal marginal = measured_marginal(state, cfg, plan);
  const double scale = cfg.aperture_radius * estimator_prefactor(cfg, plan) * 0.5;
  const double mu = scale * marginal.mean;
  const double sigma = scale * std::sqrt(marginal.variance);

  struct BatchStats {
    double sum = 0.0;
    double sum_sq = 0.0;
  };
  const long long batches = (trials + kBatchSize - 1) / kBatchSize;
  const auto run_batch = [&](long long b) {
    const long long count = std::min(kBatchSize, trials - b * kBatchSize);
    std::seed_seq seq{cfg.seed, static_cast<std::uint64_t>(b)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> gauss(mu, sigma);
    BatchStats stats;
    for (long long i = 0; i < count; ++i) {
      const double d_hat = gauss(rng);
      stats.sum += d_hat;
      stats.sum_sq += d_hat * d_hat;
    }
    return stats;
  };

  // Per-batch generator streams with an ordered reduction: the report is a
  // pure function of (seed, trials) no matter how many workers run.
  std::vector<BatchStats> partial(batches);
  if (batches > 1) {
    std::vector<std::future<BatchStats>> futures;
    futures.reserve(batches);
    for (long long b = 0; b < batches; ++b) {
      futures.push_back(std::async(std::launch::async, run_batch, b));
    }
    for (long long b = 0; b < batches; ++b) partial[b] = futures[b].get();
  } else {
    partial[0] = run_batch(0);
  }

  double sum = 0.0, sum_sq = 0.0;
  for (const auto& stats : partial) {
    sum += stats.sum;
    sum_sq += stats.sum_sq;
  }

  EstimationReport report;
  report.trials = trials;
  report.d_true = cfg.aperture_radius * cfg.displacement_true;
  report.estimate_mean = sum / trials;
  const double var =
      trials > 1 ? (sum_sq - trials * report.estimate_mean * report.estimate_mean) / (trials - 1)
                 : 0.0;
  report.estimate_std = std::sqrt(std::max(var, 0.0));
  report.standard_error = report.estimate_std / std::sqrt(static_cast<double>(trials));
  report.predicted_std = predicted_std(cfg, plan);
  return report;
}

double mean_photon_number(const GaussianState& state) {
  const int n = state.mode_count();
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    const double xx = state.cov(2 * i, 2 * i);
    const double pp = state.cov(2 * i + 1, 2 * i + 1);
    const double mx = state.mean[2 * i];
    const double mp = state.mean[2 * i + 1];
    total += 0.25 * (xx + pp + mx * mx + mp * mp) - 0.5;
  }
  return total;
}

}  // namespace beamq::gaussian
