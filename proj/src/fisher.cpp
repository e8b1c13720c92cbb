#include "beamq/fisher.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace beamq::fisher {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

PrecisionResult from_delta(double delta_d) {
  PrecisionResult r;
  r.delta_d = delta_d;
  r.qfi = std::isinf(delta_d) ? 0.0 : 1.0 / (delta_d * delta_d);
  return r;
}

double a_ratio(const coupling::NormalForm& nf) {
  const auto sums = coupling::schatten_sums(nf);
  if (!(sums.sum_lambda > 0.0)) {
    throw std::invalid_argument("fisher: normal form has empty spectrum");
  }
  return sums.sum_lambda_sq / sums.sum_lambda;
}

double gaussian_delta_scaled(double a, double n_total, double n_squeezed) {
  // sqrt(2)/(A sqrt(N)) / (sqrt(N_s + 1) + sqrt(N_s)); N_s = 0 is the
  // classical limit of the same expression.
  return std::sqrt(2.0) / (a * std::sqrt(n_total)) /
         (std::sqrt(n_squeezed + 1.0) + std::sqrt(n_squeezed));
}

}  // namespace

std::string to_string(ProbeFamily family) {
  switch (family) {
    case ProbeFamily::SingleMode: return "single-mode";
    case ProbeFamily::Classical: return "classical";
    case ProbeFamily::SpatialEntangled: return "spatial-entangled";
    case ProbeFamily::SpatioTemporalEntangled: return "spatio-temporal-entangled";
    case ProbeFamily::GaussianSqueezed: return "gaussian-squeezed";
  }
  throw std::invalid_argument("to_string: unknown probe family");
}

ProbeFamily family_from_string(const std::string& name) {
  if (name == "single-mode") return ProbeFamily::SingleMode;
  if (name == "classical") return ProbeFamily::Classical;
  if (name == "spatial-entangled") return ProbeFamily::SpatialEntangled;
  if (name == "spatio-temporal-entangled") return ProbeFamily::SpatioTemporalEntangled;
  if (name == "gaussian-squeezed") return ProbeFamily::GaussianSqueezed;
  throw std::invalid_argument("unknown probe family '" + name + "'");
}

void ProbeSpec::validate() const {
  if (spatial_modes < 2) throw std::invalid_argument("ProbeSpec: spatial_modes must be >= 2");
  if (temporal_modes < 1) throw std::invalid_argument("ProbeSpec: temporal_modes must be >= 1");
  if (!(mean_photons_per_mode > 0.0)) {
    throw std::invalid_argument("ProbeSpec: mean_photons_per_mode must be positive");
  }
  if (!(aperture_radius > 0.0)) {
    throw std::invalid_argument("ProbeSpec: aperture_radius must be positive");
  }
  if (family == ProbeFamily::SingleMode &&
      (mode_index < 0 || mode_index > spatial_modes - 2)) {
    throw std::invalid_argument("ProbeSpec: mode index outside [0, spatial_modes - 2]");
  }
}

double ProbeSpec::photons_spatial() const { return mean_photons_per_mode * spatial_modes; }

double ProbeSpec::photons_total() const {
  return mean_photons_per_mode * spatial_modes * temporal_modes;
}

PrecisionResult qfi_single_mode(const ProbeSpec& spec, double photons) {
  if (spec.family != ProbeFamily::SingleMode) {
    throw std::invalid_argument("qfi_single_mode: wrong probe family");
  }
  spec.validate();
  if (!(photons > 0.0)) throw std::invalid_argument("qfi_single_mode: photons must be positive");

  const int j = spec.mode_index;
  if (j == 0) return from_delta(kInf);
  const double r = spec.aperture_radius;
  PrecisionResult result;
  result.qfi = 4.0 * j * photons / (r * r);
  result.delta_d = r / (2.0 * std::sqrt(j * photons));
  return result;
}

PrecisionResult error_classical(const ProbeSpec& spec) {
  if (spec.family != ProbeFamily::Classical) {
    throw std::invalid_argument("error_classical: wrong probe family");
  }
  spec.validate();
  const double delta = spec.aperture_radius /
                       (2.0 * spec.spatial_modes *
                        std::sqrt(spec.temporal_modes * spec.mean_photons_per_mode));
  return from_delta(delta);
}

PrecisionResult error_entangled(const ProbeSpec& spec, const coupling::NormalForm& nf) {
  if (spec.family != ProbeFamily::SpatialEntangled &&
      spec.family != ProbeFamily::SpatioTemporalEntangled) {
    throw std::invalid_argument("error_entangled: wrong probe family");
  }
  spec.validate();
  if (static_cast<int>(nf.eigenvalues.size()) != spec.spatial_modes / 2) {
    throw std::invalid_argument("error_entangled: normal form does not match spatial_modes");
  }

  const double a = a_ratio(nf);
  const double r = spec.aperture_radius;
  if (spec.family == ProbeFamily::SpatialEntangled) {
    // Product over temporal slots, budget N_S per slot; the slot QFIs add.
    return from_delta(r / (2.0 * a * std::sqrt(static_cast<double>(spec.temporal_modes)) *
                           spec.photons_spatial()));
  }
  return from_delta(r / (2.0 * a * spec.photons_total()));
}

PrecisionResult error_gaussian(const ProbeSpec& spec, const coupling::NormalForm& nf,
                               double squeezed_fraction) {
  if (spec.family != ProbeFamily::GaussianSqueezed) {
    throw std::invalid_argument("error_gaussian: wrong probe family");
  }
  spec.validate();
  if (squeezed_fraction < 0.0 || squeezed_fraction > 1.0) {
    throw std::invalid_argument("error_gaussian: squeezed_fraction outside [0, 1]");
  }
  const double a = a_ratio(nf);
  const double n_total = spec.photons_total();
  const double n_squeezed = squeezed_fraction * n_total;
  return from_delta(spec.aperture_radius * gaussian_delta_scaled(a, n_total, n_squeezed));
}

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("fit_loglog_slope: need at least two samples");
  }
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double n = static_cast<double>(x.size());
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

SweepResult scaling_sweep(ProbeFamily family, const std::vector<int>& spatial_modes,
                          const std::vector<int>& temporal_modes,
                          const std::vector<double>& mean_photons, double aperture_radius) {
  if (family == ProbeFamily::SingleMode) {
    throw std::invalid_argument("scaling_sweep: single-mode probes are not swept");
  }
  if (spatial_modes.empty() || temporal_modes.empty() || mean_photons.empty()) {
    throw std::invalid_argument("scaling_sweep: empty parameter range");
  }

  std::map<int, coupling::NormalForm> forms;
  const auto form_for = [&forms](int ms) -> const coupling::NormalForm& {
    auto it = forms.find(ms);
    if (it == forms.end()) {
      it = forms.emplace(ms, coupling::normal_form(coupling::build_gamma(ms))).first;
    }
    return it->second;
  };

  const auto evaluate = [&](int ms, int mt, double nbar) {
    ProbeSpec spec;
    spec.family = family;
    spec.spatial_modes = ms;
    spec.temporal_modes = mt;
    spec.mean_photons_per_mode = nbar;
    spec.aperture_radius = aperture_radius;
    switch (family) {
      case ProbeFamily::Classical:
        return error_classical(spec);
      case ProbeFamily::SpatialEntangled:
      case ProbeFamily::SpatioTemporalEntangled:
        return error_entangled(spec, form_for(ms));
      case ProbeFamily::GaussianSqueezed:
        return error_gaussian(spec, form_for(ms));
      default:
        throw std::invalid_argument("scaling_sweep: unsupported family");
    }
  };

  SweepResult result;
  for (int ms : spatial_modes) {
    for (int mt : temporal_modes) {
      for (double nbar : mean_photons) {
        SweepRow row;
        row.family = family;
        row.spatial_modes = ms;
        row.temporal_modes = mt;
        row.mean_photons_per_mode = nbar;
        row.aperture_radius = aperture_radius;
        try {
          const PrecisionResult p = evaluate(ms, mt, nbar);
          row.qfi = p.qfi;
          row.delta_d = p.delta_d;
        } catch (const std::exception& e) {
          row.error = e.what();
        }
        result.rows.push_back(std::move(row));
      }
    }
  }

  // Per-axis exponents, other parameters pinned at their largest values.
  const int ms_ref = spatial_modes.back();
  const int mt_ref = temporal_modes.back();
  const double nbar_ref = mean_photons.back();
  const auto fit_axis = [&](const std::string& key, auto&& values, auto&& eval_one) {
    if (values.size() < 2) return;
    std::vector<double> xs, ys;
    for (auto v : values) {
      try {
        ys.push_back(eval_one(v).delta_d);
        xs.push_back(static_cast<double>(v));
      } catch (const std::exception&) {
      }
    }
    if (xs.size() >= 2) result.fitted_exponents[key] = fit_loglog_slope(xs, ys);
  };
  fit_axis("spatial_modes", spatial_modes,
           [&](int ms) { return evaluate(ms, mt_ref, nbar_ref); });
  fit_axis("temporal_modes", temporal_modes,
           [&](int mt) { return evaluate(ms_ref, mt, nbar_ref); });
  fit_axis("mean_photons_per_mode", mean_photons,
           [&](double nbar) { return evaluate(ms_ref, mt_ref, nbar); });

  return result;
}

}  // namespace beamq::fisher
