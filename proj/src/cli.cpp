#include "beamq/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "beamq/coupling.hpp"
#include "beamq/gaussian.hpp"
#include "beamq/verify.hpp"

namespace beamq::cli {

namespace {

using nlohmann::ordered_json;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

ordered_json matrix_to_json(const Eigen::MatrixXd& m) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

void emit(const RunConfig& config, const std::string& text, std::ostream& out) {
  if (config.output_path) {
    std::ofstream file(*config.output_path, std::ios::trunc);
    if (!file) throw std::runtime_error("cannot open output path " + *config.output_path);
    file << text;
  } else {
    out << text;
  }
}

int single_value(const std::vector<int>& values, const char* flag) {
  if (values.size() != 1) {
    throw std::invalid_argument(std::string(flag) + " expects exactly one value here");
  }
  return values.front();
}

double single_value(const std::vector<double>& values, const char* flag) {
  if (values.size() != 1) {
    throw std::invalid_argument(std::string(flag) + " expects exactly one value here");
  }
  return values.front();
}

int run_coupling(const RunConfig& config, std::ostream& out) {
  const int ms = single_value(config.spatial_modes, "--ms");
  const auto gamma = coupling::build_gamma(ms);
  const auto nf = coupling::normal_form(gamma);
  const auto sums = coupling::schatten_sums(nf);
  const auto alloc = coupling::photon_allocation(nf);

  if (config.format == Format::Json) {
    ordered_json doc;
    doc["dim"] = ms;
    doc["gamma"] = matrix_to_json(gamma.entries);
    doc["transform"] = matrix_to_json(nf.transform);
    doc["eigenvalues"] = nf.eigenvalues;
    doc["sum_lambda"] = sums.sum_lambda;
    doc["sum_lambda_sq"] = sums.sum_lambda_sq;
    doc["photon_allocation"] = alloc;
    emit(config, doc.dump(2) + "\n", out);
  } else {
    std::ostringstream csv;
    csv << "kind,i,j,value\n";
    for (int i = 0; i < ms; ++i) {
      for (int j = 0; j < ms; ++j) {
        csv << "gamma," << i << ',' << j << ',' << fmt17(gamma.entries(i, j)) << '\n';
      }
    }
    for (int i = 0; i < ms; ++i) {
      for (int j = 0; j < ms; ++j) {
        csv << "transform," << i << ',' << j << ',' << fmt17(nf.transform(i, j)) << '\n';
      }
    }
    for (std::size_t k = 0; k < nf.eigenvalues.size(); ++k) {
      csv << "lambda," << k << ",," << fmt17(nf.eigenvalues[k]) << '\n';
    }
    for (std::size_t k = 0; k < alloc.size(); ++k) {
      csv << "allocation," << k << ",," << fmt17(alloc[k]) << '\n';
    }
    csv << "sum_lambda,,," << fmt17(sums.sum_lambda) << '\n';
    csv << "sum_lambda_sq,,," << fmt17(sums.sum_lambda_sq) << '\n';
    emit(config, csv.str(), out);
  }
  return 0;
}

fisher::PrecisionResult evaluate_qfi(const RunConfig& config, const fisher::ProbeSpec& spec) {
  switch (config.family) {
    case fisher::ProbeFamily::SingleMode: {
      const double photons = config.photons.value_or(spec.photons_spatial());
      return fisher::qfi_single_mode(spec, photons);
    }
    case fisher::ProbeFamily::Classical:
      return fisher::error_classical(spec);
    case fisher::ProbeFamily::SpatialEntangled:
    case fisher::ProbeFamily::SpatioTemporalEntangled:
      return fisher::error_entangled(
          spec, coupling::normal_form(coupling::build_gamma(spec.spatial_modes)));
    case fisher::ProbeFamily::GaussianSqueezed:
      return fisher::error_gaussian(
          spec, coupling::normal_form(coupling::build_gamma(spec.spatial_modes)),
          config.squeezed_fraction);
  }
  throw std::invalid_argument("qfi: unknown family");
}

int run_qfi(const RunConfig& config, std::ostream& out) {
  fisher::ProbeSpec spec;
  spec.family = config.family;
  spec.mode_index = config.mode_index;
  spec.spatial_modes = single_value(config.spatial_modes, "--ms");
  spec.temporal_modes = single_value(config.temporal_modes, "--mt");
  spec.mean_photons_per_mode = single_value(config.mean_photons, "--nbar");
  spec.aperture_radius = config.aperture_radius;
  const auto result = evaluate_qfi(config, spec);

  if (config.format == Format::Json) {
    ordered_json doc;
    doc["family"] = fisher::to_string(spec.family);
    doc["M_S"] = spec.spatial_modes;
    doc["M_T"] = spec.temporal_modes;
    doc["n_bar"] = spec.mean_photons_per_mode;
    doc["r_R"] = spec.aperture_radius;
    if (spec.family == fisher::ProbeFamily::SingleMode) doc["mode_index"] = spec.mode_index;
    doc["qfi"] = result.qfi;
    doc["delta_d"] = result.delta_d;
    emit(config, doc.dump(2) + "\n", out);
  } else {
    std::ostringstream csv;
    csv << "family,M_S,M_T,n_bar,r_R,qfi,delta_d\n";
    csv << fisher::to_string(spec.family) << ',' << spec.spatial_modes << ','
        << spec.temporal_modes << ',' << fmt17(spec.mean_photons_per_mode) << ','
        << fmt17(spec.aperture_radius) << ',' << fmt17(result.qfi) << ','
        << fmt17(result.delta_d) << '\n';
    emit(config, csv.str(), out);
  }
  return 0;
}

int run_scaling(const RunConfig& config, std::ostream& out) {
  const auto sweep =
      fisher::scaling_sweep(config.family, config.spatial_modes, config.temporal_modes,
                            config.mean_photons, config.aperture_radius);

  if (config.format == Format::Json) {
    ordered_json doc;
    doc["family"] = fisher::to_string(config.family);
    ordered_json rows = ordered_json::array();
    for (const auto& row : sweep.rows) {
      ordered_json r;
      r["family"] = fisher::to_string(row.family);
      r["M_S"] = row.spatial_modes;
      r["M_T"] = row.temporal_modes;
      r["n_bar"] = row.mean_photons_per_mode;
      r["r_R"] = row.aperture_radius;
      if (row.error) {
        r["error"] = *row.error;
      } else {
        r["qfi"] = row.qfi;
        r["delta_d"] = row.delta_d;
      }
      rows.push_back(std::move(r));
    }
    doc["rows"] = std::move(rows);
    doc["fitted_exponents"] = sweep.fitted_exponents;
    emit(config, doc.dump(2) + "\n", out);
  } else {
    std::ostringstream csv;
    csv << "family,M_S,M_T,n_bar,r_R,qfi,delta_d,error\n";
    for (const auto& row : sweep.rows) {
      csv << fisher::to_string(row.family) << ',' << row.spatial_modes << ','
          << row.temporal_modes << ',' << fmt17(row.mean_photons_per_mode) << ','
          << fmt17(row.aperture_radius) << ',';
      if (row.error) {
        csv << ",," << *row.error << '\n';
      } else {
        csv << fmt17(row.qfi) << ',' << fmt17(row.delta_d) << ",\n";
      }
    }
    emit(config, csv.str(), out);
  }
  return 0;
}

int run_simulate(const RunConfig& config, std::ostream& out) {
  gaussian::TransceiverConfig cfg;
  cfg.spatial_modes = single_value(config.spatial_modes, "--ms");
  cfg.temporal_modes = single_value(config.temporal_modes, "--mt");
  const double nbar = single_value(config.mean_photons, "--nbar");
  cfg.total_photons =
      config.total_photons.value_or(nbar * cfg.spatial_modes * cfg.temporal_modes);
  cfg.squeezed_fraction = config.squeezed_fraction;
  cfg.displacement_true = config.displacement_true;
  cfg.seed = config.seed;
  cfg.aperture_radius = config.aperture_radius;
  cfg.exact_mzi = config.exact_mzi;

  const auto plan = gaussian::spatio_temporal_extend(cfg);
  const auto probe = gaussian::prepare_probe(cfg, plan);
  const auto encoded = gaussian::encode_displacement(probe, cfg, plan);
  const auto report = gaussian::measure_and_estimate(encoded, cfg, plan, config.trials);

  if (config.format == Format::Json) {
    ordered_json doc;
    doc["config"] = {{"M_S", cfg.spatial_modes},
                     {"M_T", cfg.temporal_modes},
                     {"total_photons", cfg.total_photons},
                     {"squeezed_fraction", cfg.squeezed_fraction},
                     {"d_true", cfg.displacement_true},
                     {"r_R", cfg.aperture_radius},
                     {"seed", cfg.seed},
                     {"exact_mzi", cfg.exact_mzi}};
    doc["report"] = {{"d_true", report.d_true},
                     {"estimate_mean", report.estimate_mean},
                     {"estimate_std", report.estimate_std},
                     {"predicted_std", report.predicted_std},
                     {"trials", report.trials},
                     {"standard_error", report.standard_error}};
    emit(config, doc.dump(2) + "\n", out);
  } else {
    std::ostringstream csv;
    csv << "M_S,M_T,total_photons,squeezed_fraction,seed,d_true,estimate_mean,estimate_std,"
           "predicted_std,trials,standard_error\n";
    csv << cfg.spatial_modes << ',' << cfg.temporal_modes << ',' << fmt17(cfg.total_photons)
        << ',' << fmt17(cfg.squeezed_fraction) << ',' << cfg.seed << ',' << fmt17(report.d_true)
        << ',' << fmt17(report.estimate_mean) << ',' << fmt17(report.estimate_std) << ','
        << fmt17(report.predicted_std) << ',' << report.trials << ','
        << fmt17(report.standard_error) << '\n';
    emit(config, csv.str(), out);
  }
  return 0;
}

int run_verify(const RunConfig& config, std::ostream& out) {
  const auto results = verify::run_suite(config.suite);

  if (config.format == Format::Csv) {
    std::ostringstream csv;
    csv << "suite,check,passed,detail\n";
    for (const auto& r : results) {
      csv << r.suite << ',' << r.name << ',' << (r.passed ? "pass" : "FAIL") << ",\""
          << r.detail << "\"\n";
    }
    emit(config, csv.str(), out);
  } else {
    std::ostringstream table;
    for (const auto& r : results) {
      table << (r.passed ? "[pass] " : "[FAIL] ") << std::left << std::setw(12) << r.suite
            << std::setw(36) << r.name << r.detail << '\n';
    }
    table << (verify::all_passed(results) ? "all checks passed\n" : "some checks FAILED\n");
    emit(config, table.str(), out);
  }
  return verify::all_passed(results) ? 0 : 1;
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    switch (config.command) {
      case Command::Coupling: return run_coupling(config, out);
      case Command::Qfi: return run_qfi(config, out);
      case Command::Scaling: return run_scaling(config, out);
      case Command::Simulate: return run_simulate(config, out);
      case Command::Verify: return run_verify(config, out);
    }
    throw std::invalid_argument("unknown command");
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig config;
  std::string format = "json";
  std::string family = "classical";
  std::string output_path;

  CLI::App app{"quantum-limited beam-displacement precision toolkit"};
  app.require_subcommand(1);
  app.set_config("--config");
  app.fallthrough(false);

  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--out", output_path, "output file (default: stdout)");
  };

  auto* coupling_cmd = app.add_subcommand("coupling", "coupling matrix and its normal form");
  coupling_cmd->add_option("--ms", config.spatial_modes, "spatial mode count")->delimiter(',');
  add_common(coupling_cmd);

  auto* qfi_cmd = app.add_subcommand("qfi", "precision bound for one probe");
  qfi_cmd->add_option("--family", family,
                      "single-mode|classical|spatial-entangled|spatio-temporal-entangled|"
                      "gaussian-squeezed");
  qfi_cmd->add_option("--ms", config.spatial_modes)->delimiter(',');
  qfi_cmd->add_option("--mt", config.temporal_modes)->delimiter(',');
  qfi_cmd->add_option("--nbar", config.mean_photons)->delimiter(',');
  qfi_cmd->add_option("--rr", config.aperture_radius);
  qfi_cmd->add_option("--mode-index", config.mode_index, "j, single-mode family only");
  double photons_flag = 0.0;
  auto* photons_opt = qfi_cmd->add_option("--photons", photons_flag, "single-mode budget N_S");
  qfi_cmd->add_option("--squeezed-fraction", config.squeezed_fraction);
  add_common(qfi_cmd);

  auto* scaling_cmd = app.add_subcommand("scaling", "sweep with fitted exponents");
  scaling_cmd->add_option("--family", family);
  scaling_cmd->add_option("--ms", config.spatial_modes)->delimiter(',');
  scaling_cmd->add_option("--mt", config.temporal_modes)->delimiter(',');
  scaling_cmd->add_option("--nbar", config.mean_photons)->delimiter(',');
  scaling_cmd->add_option("--rr", config.aperture_radius);
  add_common(scaling_cmd);

  auto* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo transceiver run");
  simulate_cmd->add_option("--ms", config.spatial_modes)->delimiter(',');
  simulate_cmd->add_option("--mt", config.temporal_modes)->delimiter(',');
  simulate_cmd->add_option("--nbar", config.mean_photons)->delimiter(',');
  double total_flag = 0.0;
  auto* total_opt = simulate_cmd->add_option("--total-photons", total_flag);
  simulate_cmd->add_option("--squeezed-fraction", config.squeezed_fraction);
  simulate_cmd->add_option("--d-true", config.displacement_true, "displacement in waist units");
  simulate_cmd->add_option("--trials", config.trials);
  simulate_cmd->add_option("--seed", config.seed);
  simulate_cmd->add_option("--rr", config.aperture_radius);
  simulate_cmd->add_flag("--exact-mzi", config.exact_mzi);
  add_common(simulate_cmd);

  auto* verify_cmd = app.add_subcommand("verify", "run the oracle self-check suites");
  verify_cmd->add_option("--suite", config.suite)
      ->check(CLI::IsMember({"hermite", "coupling", "spin", "gaussian", "all"}));
  add_common(verify_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream help;
    const int code = app.exit(e, help, help);
    (code == 0 ? out : err) << help.str();
    return code;
  }

  if (coupling_cmd->parsed()) config.command = Command::Coupling;
  if (qfi_cmd->parsed()) config.command = Command::Qfi;
  if (scaling_cmd->parsed()) config.command = Command::Scaling;
  if (simulate_cmd->parsed()) config.command = Command::Simulate;
  if (verify_cmd->parsed()) config.command = Command::Verify;

  try {
    config.family = fisher::family_from_string(family);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  config.format = format == "csv" ? Format::Csv : Format::Json;
  if (!output_path.empty()) config.output_path = output_path;
  if (*photons_opt) config.photons = photons_flag;
  if (*total_opt) config.total_photons = total_flag;

  return run(config, out, err);
}

}  // namespace beamq::cli
