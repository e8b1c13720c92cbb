#include <doctest.h>

#include <cmath>

#include "beamq/fisher.hpp"

using namespace beamq::fisher;
using beamq::coupling::build_gamma;
using beamq::coupling::normal_form;

namespace {

ProbeSpec make_spec(ProbeFamily family, int ms, int mt, double nbar, double rr = 1.0) {
  ProbeSpec spec;
  spec.family = family;
  spec.spatial_modes = ms;
  spec.temporal_modes = mt;
  spec.mean_photons_per_mode = nbar;
  spec.aperture_radius = rr;
  return spec;
}

ProbeSpec single_mode_spec(int j, double rr = 1.0) {
  ProbeSpec spec;
  spec.family = ProbeFamily::SingleMode;
  spec.mode_index = j;
  spec.spatial_modes = j + 2;  // wide enough for any j
  spec.aperture_radius = rr;
  return spec;
}

}  // namespace

TEST_CASE("single-mode precision") {
  const auto r1 = qfi_single_mode(single_mode_spec(1), 4.0);
  CHECK(r1.delta_d == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(r1.qfi == doctest::Approx(16.0).epsilon(1e-15));

  const auto r0 = qfi_single_mode(single_mode_spec(0), 5.0);
  CHECK(r0.qfi == 0.0);
  CHECK(std::isinf(r0.delta_d));

  const auto r3 = qfi_single_mode(single_mode_spec(3, 2.0), 3.0);
  CHECK(r3.delta_d == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

  CHECK(r1.delta_d == doctest::Approx(1.0 / std::sqrt(r1.qfi)).epsilon(1e-15));
}

TEST_CASE("single-mode domain checks") {
  ProbeSpec spec = single_mode_spec(3);
  spec.spatial_modes = 4;  // allows j up to 2
  CHECK_THROWS_AS((void)qfi_single_mode(spec, 1.0), std::invalid_argument);
  spec.mode_index = -1;
  CHECK_THROWS_AS((void)qfi_single_mode(spec, 1.0), std::invalid_argument);
  CHECK_THROWS_AS((void)qfi_single_mode(single_mode_spec(1), 0.0), std::invalid_argument);
  CHECK_THROWS_AS((void)error_classical(single_mode_spec(1)), std::invalid_argument);
}

TEST_CASE("classical probe error") {
  const auto base = error_classical(make_spec(ProbeFamily::Classical, 2, 1, 1.0));
  CHECK(base.delta_d == doctest::Approx(0.25).epsilon(1e-15));

  const auto more_time = error_classical(make_spec(ProbeFamily::Classical, 2, 2, 1.0));
  CHECK(more_time.delta_d == doctest::Approx(base.delta_d / std::sqrt(2.0)).epsilon(1e-14));

  const auto more_modes = error_classical(make_spec(ProbeFamily::Classical, 4, 1, 1.0));
  CHECK(more_modes.delta_d == doctest::Approx(base.delta_d / 2.0).epsilon(1e-14));
}

TEST_CASE("classical probe equals a single spatio-temporal coherent mode") {
  // The optimal classical probe re-read as one coherent mode of index M_S
  // carrying all N = M_S M_T nbar photons.
  for (int ms : {2, 3, 8}) {
    for (int mt : {1, 4}) {
      for (double nbar : {1.0, 2.5}) {
        const auto classical = error_classical(make_spec(ProbeFamily::Classical, ms, mt, nbar));
        const auto single = qfi_single_mode(single_mode_spec(ms), ms * mt * nbar);
        CHECK(classical.delta_d == doctest::Approx(single.delta_d).epsilon(1e-14));
      }
    }
  }
}

TEST_CASE("entangled probe error") {
  const auto nf2 = normal_form(build_gamma(2));
  const auto spatial =
      error_entangled(make_spec(ProbeFamily::SpatialEntangled, 2, 1, 2.0), nf2);
  CHECK(spatial.delta_d == doctest::Approx(0.125).epsilon(1e-14));  // A = 1, N_S = 4
  CHECK(spatial.qfi == doctest::Approx(64.0).epsilon(1e-13));

  // Heisenberg in nbar, square-root in temporal slots for the hybrid probe.
  const auto nf8 = normal_form(build_gamma(8));
  const auto h11 = error_entangled(make_spec(ProbeFamily::SpatialEntangled, 8, 1, 1.0), nf8);
  const auto h21 = error_entangled(make_spec(ProbeFamily::SpatialEntangled, 8, 2, 1.0), nf8);
  const auto h12 = error_entangled(make_spec(ProbeFamily::SpatialEntangled, 8, 1, 2.0), nf8);
  CHECK(h21.delta_d == doctest::Approx(h11.delta_d / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(h12.delta_d == doctest::Approx(h11.delta_d / 2.0).epsilon(1e-14));

  // Fully entangled: linear in every budget axis.
  const auto f11 =
      error_entangled(make_spec(ProbeFamily::SpatioTemporalEntangled, 8, 1, 1.0), nf8);
  const auto f21 =
      error_entangled(make_spec(ProbeFamily::SpatioTemporalEntangled, 8, 2, 1.0), nf8);
  CHECK(f21.delta_d == doctest::Approx(f11.delta_d / 2.0).epsilon(1e-14));

  CHECK_THROWS_AS(
      (void)error_entangled(make_spec(ProbeFamily::SpatialEntangled, 4, 1, 1.0), nf8),
      std::invalid_argument);
}

TEST_CASE("spatial-mode scaling of the entangled probe is super-linear") {
  std::vector<double> ms, dd;
  for (int m : {32, 40, 48, 56, 64}) {
    ms.push_back(m);
    dd.push_back(error_entangled(make_spec(ProbeFamily::SpatioTemporalEntangled, m, 1, 1.0),
                                 normal_form(build_gamma(m)))
                     .delta_d);
  }
  CHECK(fit_loglog_slope(ms, dd) == doctest::Approx(-1.5).epsilon(0.034));
}

TEST_CASE("qfi additivity over temporal product copies") {
  const auto nf = normal_form(build_gamma(6));
  for (int mt : {2, 5, 16}) {
    const auto one = error_entangled(make_spec(ProbeFamily::SpatialEntangled, 6, 1, 1.5), nf);
    const auto many = error_entangled(make_spec(ProbeFamily::SpatialEntangled, 6, mt, 1.5), nf);
    CHECK(many.qfi == doctest::Approx(mt * one.qfi).epsilon(1e-12));

    const auto c1 = error_classical(make_spec(ProbeFamily::Classical, 6, 1, 1.5));
    const auto cm = error_classical(make_spec(ProbeFamily::Classical, 6, mt, 1.5));
    CHECK(cm.qfi == doctest::Approx(mt * c1.qfi).epsilon(1e-12));
  }
}

TEST_CASE("gaussian transceiver bound") {
  const auto nf2 = normal_form(build_gamma(2));
  // N = 2, half squeezed: sqrt(2)/sqrt(2) / (sqrt(2)+1) = sqrt(2) - 1.
  const auto half = error_gaussian(make_spec(ProbeFamily::GaussianSqueezed, 2, 1, 1.0), nf2);
  CHECK(half.delta_d == doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-14));

  const auto none =
      error_gaussian(make_spec(ProbeFamily::GaussianSqueezed, 2, 1, 1.0), nf2, 0.0);
  CHECK(none.delta_d == doctest::Approx(std::sqrt(2.0) / std::sqrt(2.0)).epsilon(1e-14));

  CHECK_THROWS_AS(
      (void)error_gaussian(make_spec(ProbeFamily::GaussianSqueezed, 2, 1, 1.0), nf2, 1.5),
      std::invalid_argument);
}

TEST_CASE("gaussian error approaches a constant multiple of the entangled bound") {
  const auto nf = normal_form(build_gamma(4));
  double prev_ratio = 0.0;
  for (double nbar : {16.0, 64.0, 256.0, 1024.0}) {
    const auto g = error_gaussian(make_spec(ProbeFamily::GaussianSqueezed, 4, 1, nbar), nf);
    const auto e = error_entangled(
        make_spec(ProbeFamily::SpatioTemporalEntangled, 4, 1, nbar), nf);
    const double ratio = g.delta_d / e.delta_d;
    if (prev_ratio != 0.0) CHECK(std::abs(ratio / prev_ratio - 1.0) < 0.05);
    prev_ratio = ratio;
  }
  CHECK(prev_ratio == doctest::Approx(2.0).epsilon(0.02));  // limit 2/sqrt(2*1/2 ...)
}

TEST_CASE("error ordering across families") {
  for (int ms : {2, 4, 8, 16}) {
    const auto nf = normal_form(build_gamma(ms));
    for (int mt : {1, 2, 8}) {
      for (double nbar : {1.0, 2.0, 4.0}) {
        const auto c = error_classical(make_spec(ProbeFamily::Classical, ms, mt, nbar));
        const auto s =
            error_entangled(make_spec(ProbeFamily::SpatialEntangled, ms, mt, nbar), nf);
        const auto st = error_entangled(
            make_spec(ProbeFamily::SpatioTemporalEntangled, ms, mt, nbar), nf);
        CHECK(st.delta_d <= s.delta_d + 1e-12);
        CHECK(s.delta_d <= c.delta_d + 1e-12);
      }
    }
  }
}

TEST_CASE("a-ratio grows as sqrt of the spatial modes") {
  double lo = 1e300, hi = 0.0;
  for (int m : {64, 128, 256, 512}) {
    const auto sums = beamq::coupling::schatten_sums(beamq::coupling::spectrum(m));
    const double ratio = sums.sum_lambda_sq / sums.sum_lambda / std::sqrt(double(m));
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  CHECK(hi / lo < 1.1);
}

TEST_CASE("scaling sweep exponents and determinism") {
  const auto classical = scaling_sweep(ProbeFamily::Classical, {8}, {1, 2, 4, 8},
                                       {1.0, 2.0, 4.0, 8.0, 16.0}, 1.0);
  CHECK(classical.fitted_exponents.at("mean_photons_per_mode") ==
        doctest::Approx(-0.5).epsilon(0.04));
  CHECK(classical.fitted_exponents.at("temporal_modes") == doctest::Approx(-0.5).epsilon(0.04));
  CHECK(classical.rows.size() == 20);

  const auto st = scaling_sweep(ProbeFamily::SpatioTemporalEntangled, {32, 40, 48, 56, 64},
                                {1, 2}, {1.0, 2.0, 4.0, 8.0}, 1.0);
  CHECK(st.fitted_exponents.at("mean_photons_per_mode") == doctest::Approx(-1.0).epsilon(0.02));
  CHECK(st.fitted_exponents.at("spatial_modes") == doctest::Approx(-1.5).epsilon(0.034));

  // Deterministic row order: ms outermost, nbar innermost.
  CHECK(st.rows.front().spatial_modes == 32);
  CHECK(st.rows.front().temporal_modes == 1);
  CHECK(st.rows[1].mean_photons_per_mode == 2.0);
  CHECK(st.rows.back().spatial_modes == 64);
}

TEST_CASE("scaling sweep marks invalid points instead of failing") {
  const auto sweep = scaling_sweep(ProbeFamily::Classical, {2}, {1}, {1.0, -1.0}, 1.0);
  REQUIRE(sweep.rows.size() == 2);
  CHECK(!sweep.rows[0].error.has_value());
  CHECK(sweep.rows[1].error.has_value());

  CHECK_THROWS_AS((void)scaling_sweep(ProbeFamily::Classical, {}, {1}, {1.0}, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)scaling_sweep(ProbeFamily::SingleMode, {2}, {1}, {1.0}, 1.0),
                  std::invalid_argument);
}

TEST_CASE("family names round-trip") {
  for (auto family :
       {ProbeFamily::SingleMode, ProbeFamily::Classical, ProbeFamily::SpatialEntangled,
        ProbeFamily::SpatioTemporalEntangled, ProbeFamily::GaussianSqueezed}) {
    CHECK(family_from_string(to_string(family)) == family);
  }
  CHECK_THROWS_AS((void)family_from_string("bogus"), std::invalid_argument);
}
