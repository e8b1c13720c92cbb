#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "beamq/coupling.hpp"

// Closed-form quantum Fisher information and minimum-error expressions for
// the probe families, plus scaling-law sweeps with fitted exponents.

namespace beamq::fisher {

enum class ProbeFamily {
  SingleMode,
  Classical,
  SpatialEntangled,
  SpatioTemporalEntangled,
  GaussianSqueezed,
};

std::string to_string(ProbeFamily family);
ProbeFamily family_from_string(const std::string& name);

struct ProbeSpec {
  ProbeFamily family = ProbeFamily::Classical;
  int mode_index = 0;  // j, SingleMode only
  int spatial_modes = 2;
  int temporal_modes = 1;
  double mean_photons_per_mode = 1.0;
  double aperture_radius = 1.0;

  void validate() const;
  double photons_spatial() const;  // N_S = nbar * M_S
  double photons_total() const;    // N = nbar * M_S * M_T
};

struct PrecisionResult {
  double qfi = 0.0;      // units 1 / length^2
  double delta_d = 0.0;  // single-shot Cramer-Rao bound, +inf when qfi = 0
};

// Probe in spatial mode j only: qfi = 4 j N / r^2.  j = 0 carries no
// first-order shift information and yields the +inf sentinel.
PrecisionResult qfi_single_mode(const ProbeSpec& spec, double photons);

// Coherent probe in the highest-order mode, all spatio-temporal modes
// counted as one effective mode: delta_d = r / (2 M_S sqrt(M_T nbar)).
PrecisionResult error_classical(const ProbeSpec& spec);

// Entangled probe with the optimal photon allocation.  A = sum(l^2)/sum(l)
// over the spatial eigenvalues; the ratio is invariant under temporal
// extension.  SpatialEntangled: delta_d = r / (2 A sqrt(M_T) N_S).
// SpatioTemporalEntangled: delta_d = r / (2 A N).
PrecisionResult error_entangled(const ProbeSpec& spec, const coupling::NormalForm& nf);

// Squeezed-vacuum plus coherent transceiver bound
//   delta = r * sqrt(2) / (A sqrt(N_tot)) / (sqrt(N_s+1) + sqrt(N_s)),
// N_s = squeezed_fraction * N_tot.  Quadrature-normalization caveat: see
// gaussian::predicted_std for the convention used by the simulator.
PrecisionResult error_gaussian(const ProbeSpec& spec, const coupling::NormalForm& nf,
                               double squeezed_fraction = 0.5);

struct SweepRow {
  ProbeFamily family = ProbeFamily::Classical;
  int spatial_modes = 0;
  int temporal_modes = 0;
  double mean_photons_per_mode = 0.0;
  double aperture_radius = 0.0;
  double qfi = 0.0;
  double delta_d = 0.0;
  std::optional<std::string> error;
};

struct SweepResult {
  std::vector<SweepRow> rows;  // deterministic order: ms, then mt, then nbar
  // Log-log slope of delta_d per swept axis, fitted along the axis with the
  // other parameters held at their largest grid values.
  std::map<std::string, double> fitted_exponents;
};

SweepResult scaling_sweep(ProbeFamily family, const std::vector<int>& spatial_modes,
                          const std::vector<int>& temporal_modes,
                          const std::vector<double>& mean_photons, double aperture_radius);

// Least-squares slope of log(y) against log(x).
double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace beamq::fisher
