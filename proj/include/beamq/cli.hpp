#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "beamq/fisher.hpp"

namespace beamq::cli {

enum class Command { Coupling, Qfi, Scaling, Simulate, Verify };
enum class Format { Json, Csv };

struct RunConfig {
  Command command = Command::Verify;
  Format format = Format::Json;
  std::optional<std::string> output_path;

  // coupling / qfi / scaling
  std::vector<int> spatial_modes = {2};
  std::vector<int> temporal_modes = {1};
  std::vector<double> mean_photons = {1.0};
  double aperture_radius = 1.0;
  fisher::ProbeFamily family = fisher::ProbeFamily::Classical;
  int mode_index = 0;
  std::optional<double> photons;  // qfi single-mode budget override

  // simulate
  std::optional<double> total_photons;
  double squeezed_fraction = 0.5;
  double displacement_true = 0.0;
  long long trials = 100000;
  std::uint64_t seed = 1;
  bool exact_mzi = false;

  // verify
  std::string suite = "all";
};

// Executes one parsed command; writes the artifact to the output path or to
// `out`, diagnostics to `err`.  Returns the process exit status.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// Parses argv (flags override config-file values override defaults) and runs.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace beamq::cli
