#include "beamq/verify.hpp"

#include <cmath>
#include <functional>
#include <sstream>

#include "beamq/coupling.hpp"
#include "beamq/fisher.hpp"
#include "beamq/gaussian.hpp"
#include "beamq/hermite.hpp"
#include "beamq/spin.hpp"

namespace beamq::verify {

namespace {

class Recorder {
 public:
  Recorder(std::string suite, std::vector<CheckResult>& sink)
      : suite_(std::move(suite)), sink_(sink) {}

  void check(const std::string& name, bool passed, double measured, double limit) {
    std::ostringstream detail;
    detail << "measured " << measured << ", limit " << limit;
    sink_.push_back({suite_, name, passed, detail.str()});
  }

  void run(const std::string& name, const std::function<void(Recorder&)>& body) {
    try {
      body(*this);
    } catch (const std::exception& e) {
      sink_.push_back({suite_, name, false, std::string("exception: ") + e.what()});
    }
  }

 private:
  std::string suite_;
  std::vector<CheckResult>& sink_;
};

void hermite_suite(std::vector<CheckResult>& out) {
  Recorder rec("hermite", out);

  rec.run("psi0_at_origin", [](Recorder& r) {
    const double got = hermite::hermite_function(0, 0.0);
    const double want = std::pow(M_PI, -0.25);
    r.check("psi0_at_origin", std::abs(got - want) < 1e-14, std::abs(got - want), 1e-14);
  });

  rec.run("orthonormality_m16", [](Recorder& r) {
    const hermite::HermiteBasis basis(16);
    const Eigen::MatrixXd s = hermite::overlap_matrix(basis, 0.0).entries;
    const double resid = (s - Eigen::MatrixXd::Identity(16, 16)).cwiseAbs().maxCoeff();
    r.check("orthonormality_m16", resid < 1e-10, resid, 1e-10);
  });

  rec.run("derivative_identity", [](Recorder& r) {
    // psi'_m = sqrt(m/2) psi_{m-1} - sqrt((m+1)/2) psi_{m+1}, against a
    // five-point stencil.
    double worst = 0.0;
    const double h = 5e-4;
    for (int m = 1; m <= 8; ++m) {
      for (double x = -3.0; x <= 3.0; x += 0.75) {
        const auto psi = [m](double t) { return hermite::hermite_function(m, t); };
        const double fd =
            (-psi(x + 2 * h) + 8 * psi(x + h) - 8 * psi(x - h) + psi(x - 2 * h)) / (12 * h);
        const double exact = std::sqrt(m / 2.0) * hermite::hermite_function(m - 1, x) -
                             std::sqrt((m + 1) / 2.0) * hermite::hermite_function(m + 1, x);
        worst = std::max(worst, std::abs(fd - exact));
      }
    }
    r.check("derivative_identity", worst < 1e-10, worst, 1e-10);
  });

  rec.run("coupling_consistency", [](Recorder& r) {
    const hermite::HermiteBasis basis(6);
    const Eigen::MatrixXd numeric = hermite::numeric_coupling(basis, 1e-4);
    const Eigen::MatrixXd analytic = coupling::build_gamma(6).entries;
    const double resid = (numeric - analytic).cwiseAbs().maxCoeff();
    r.check("coupling_consistency", resid < 1e-6, resid, 1e-6);
  });
}

void coupling_suite(std::vector<CheckResult>& out) {
  Recorder rec("coupling", out);

  rec.run("trace_identity", [](Recorder& r) {
    // sum lambda_k^2 = -Tr(Gamma^2)/2 = M(M-1)/2
    double worst = 0.0;
    for (int m = 2; m <= 48; ++m) {
      const auto g = coupling::build_gamma(m);
      const double from_trace = -0.5 * (g.entries * g.entries).trace();
      const double from_spectrum = coupling::schatten_sums(coupling::spectrum(m)).sum_lambda_sq;
      const double closed = 0.5 * m * (m - 1);
      worst = std::max(worst, std::abs(from_spectrum - from_trace) / closed);
      worst = std::max(worst, std::abs(from_spectrum - closed) / closed);
    }
    r.check("trace_identity", worst < 1e-9, worst, 1e-9);
  });

  rec.run("normal_form_reconstruction", [](Recorder& r) {
    double worst = 0.0;
    for (int m : {2, 3, 4, 5, 8, 16, 33, 64}) {
      const auto g = coupling::build_gamma(m);
      const auto nf = coupling::normal_form(g);
      const Eigen::MatrixXd block = coupling::block_form(nf.eigenvalues, m);
      worst = std::max(
          worst, (nf.transform * g.entries * nf.transform.transpose() - block).norm());
    }
    r.check("normal_form_reconstruction", worst < 1e-10, worst, 1e-10);
  });

  rec.run("allocation_normalized", [](Recorder& r) {
    double worst = 0.0;
    for (int m : {2, 5, 16, 64}) {
      const auto c = coupling::photon_allocation(coupling::spectrum(m));
      double total = 0.0;
      for (double v : c) total += v;
      worst = std::max(worst, std::abs(total - 1.0));
    }
    r.check("allocation_normalized", worst < 1e-14, worst, 1e-14);
  });
}

void spin_suite(std::vector<CheckResult>& out) {
  Recorder rec("spin", out);

  rec.run("bound_saturation", [](Recorder& r) {
    double worst = 0.0;
    const std::vector<std::vector<spin::SpinBlock>> configs = {
        {{1, 4, 1.0}},
        {{1, 2, 1.0}, {2, 2, std::sqrt(3.0)}},
        {{1, 3, 2.334414}, {2, 2, 0.741964}},
        {{1, 2, 1.0}, {2, 2, 2.0}, {3, 2, 3.0}},
    };
    for (const auto& blocks : configs) {
      const auto probe = spin::optimal_probe(blocks);
      const auto m = spin::variance_of(probe.state, blocks);
      const double bound = spin::variance_bound(blocks);
      worst = std::max(worst, std::abs(m.variance - bound * bound) / (bound * bound));
    }
    r.check("bound_saturation", worst < 1e-10, worst, 1e-10);
  });

  rec.run("random_states_below_bound", [](Recorder& r) {
    const std::vector<spin::SpinBlock> blocks = {{1, 3, 1.0}, {2, 4, std::sqrt(3.0)}};
    const double limit = std::pow(spin::variance_bound(blocks), 2) + 1e-9;
    double worst = 0.0;
    for (std::uint64_t s = 0; s < 100; ++s) {
      const auto state = spin::random_state(blocks, 1000 + s);
      worst = std::max(worst, spin::variance_of(state, blocks).variance);
    }
    r.check("random_states_below_bound", worst <= limit, worst, limit);
  });

  rec.run("coherent_pair_analog", [](Recorder& r) {
    // Var(2 sqrt(j) S_y) on the top state = j N
    double worst = 0.0;
    for (int j = 1; j <= 4; ++j) {
      for (int n = 1; n <= 6; ++n) {
        const std::vector<spin::SpinBlock> blocks = {{1, n, std::sqrt(static_cast<double>(j))}};
        const auto m = spin::variance_of(spin::top_state(blocks), blocks);
        worst = std::max(worst, std::abs(m.variance - static_cast<double>(j) * n));
      }
    }
    r.check("coherent_pair_analog", worst < 1e-9, worst, 1e-9);
  });
}

void gaussian_suite(std::vector<CheckResult>& out) {
  Recorder rec("gaussian", out);

  rec.run("symplectic_preservation", [](Recorder& r) {
    const auto w = gaussian::beamsplitter_array({0.5, 0.3, 0.2});
    const auto s = gaussian::symplectic_from_unitary(w.cast<std::complex<double>>());
    const auto omega = gaussian::symplectic_form(3);
    const double resid = (s * omega * s.transpose() - omega).cwiseAbs().maxCoeff();
    r.check("symplectic_preservation", resid < 1e-12, resid, 1e-12);
  });

  rec.run("photon_audit", [](Recorder& r) {
    gaussian::TransceiverConfig cfg;
    cfg.spatial_modes = 4;
    cfg.total_photons = 6.0;
    const auto plan = gaussian::spatio_temporal_extend(cfg);
    const auto probe = gaussian::prepare_probe(cfg, plan);
    const double total = gaussian::mean_photon_number(probe);
    r.check("photon_audit", std::abs(total - 6.0) < 1e-9, std::abs(total - 6.0), 1e-9);
  });

  rec.run("temporal_extension_invariance", [](Recorder& r) {
    gaussian::TransceiverConfig one;
    one.spatial_modes = 6;
    gaussian::TransceiverConfig many = one;
    many.temporal_modes = 8;
    const double a1 = gaussian::spatio_temporal_extend(one).a_ratio;
    const double a8 = gaussian::spatio_temporal_extend(many).a_ratio;
    r.check("temporal_extension_invariance", std::abs(a1 - a8) < 1e-12, std::abs(a1 - a8),
            1e-12);
  });

  rec.run("estimator_unbiased_and_calibrated", [](Recorder& r) {
    gaussian::TransceiverConfig cfg;
    cfg.spatial_modes = 4;
    cfg.total_photons = 8.0;
    cfg.displacement_true = 0.01;
    cfg.seed = 42;
    const auto plan = gaussian::spatio_temporal_extend(cfg);
    const auto probe = gaussian::prepare_probe(cfg, plan);
    const auto encoded = gaussian::encode_displacement(probe, cfg, plan);
    const auto report = gaussian::measure_and_estimate(encoded, cfg, plan, 100000);
    const double z = std::abs(report.estimate_mean - report.d_true) / report.standard_error;
    const double rel = std::abs(report.estimate_std / report.predicted_std - 1.0);
    r.check("estimator_unbiased", z < 4.0, z, 4.0);
    r.check("variance_matches_prediction", rel < 0.03, rel, 0.03);
  });
}

}  // namespace

std::vector<CheckResult> run_suite(const std::string& suite) {
  std::vector<CheckResult> results;
  const bool all = suite == "all";
  if (all || suite == "hermite") hermite_suite(results);
  if (all || suite == "coupling") coupling_suite(results);
  if (all || suite == "spin") spin_suite(results);
  if (all || suite == "gaussian") gaussian_suite(results);
  if (results.empty()) {
    throw std::invalid_argument("unknown verify suite '" + suite +
                                "' (expected hermite, coupling, spin, gaussian, or all)");
  }
  return results;
}

bool all_passed(const std::vector<CheckResult>& results) {
  for (const auto& r : results) {
    if (!r.passed) return false;
  }
  return true;
}

}  // namespace beamq::verify
