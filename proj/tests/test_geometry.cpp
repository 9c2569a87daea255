#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pairscan/geometry.hpp"
#include "pairscan/rng.hpp"

using namespace pairscan;

namespace {
const InstrumentConfig kCfg{};

// Independent oracle: reduce by whole turns until inside (-pi, pi].
double wrap_by_reduction(double x) {
    while (x > M_PI) x -= 2.0 * M_PI;
    while (x <= -M_PI) x += 2.0 * M_PI;
    return x;
}
}  // namespace

TEST_CASE("wrap_phase fixed points") {
    CHECK(wrap_phase(0.0) == 0.0);
    CHECK(wrap_phase(3.0 * M_PI / 2.0) == doctest::Approx(-M_PI / 2.0).epsilon(1e-12));
    CHECK(wrap_phase(-7.5) == doctest::Approx(-7.5 + 2.0 * M_PI).epsilon(1e-12));
    CHECK(wrap_phase(M_PI) == doctest::Approx(M_PI));
    CHECK(wrap_phase(-M_PI) == doctest::Approx(M_PI));  // half-open interval
    CHECK_THROWS(wrap_phase(std::numeric_limits<double>::infinity()));
    CHECK_THROWS(wrap_phase(std::numeric_limits<double>::quiet_NaN()));
}

TEST_CASE("wrap_phase is idempotent and 2pi-periodic") {
    Rng rng(7);
    for (int i = 0; i < 20000; ++i) {
        const double x = rng.uniform(-50.0, 50.0);
        const double w = wrap_phase(x);
        CHECK(w > -M_PI);
        CHECK(w <= M_PI);
        CHECK(wrap_phase(w) == doctest::Approx(w).epsilon(1e-14));
        CHECK(wrap_phase(x + 2.0 * M_PI) == doctest::Approx(w).epsilon(1e-9));
        CHECK(w == doctest::Approx(wrap_by_reduction(x)).epsilon(1e-9));
    }
}

TEST_CASE("geometric delay at and near transit") {
    const double b_m = kCfg.baseline_m();
    CHECK(geometric_delay_s(0.0, -4.3, b_m) == 0.0);
    CHECK(geometric_delay_s(0.1, -4.3, b_m) ==
          doctest::Approx(geometric_delay_s(0.1, 4.3, b_m)).epsilon(1e-15));

    // One fringe period of hour angle adds one RF period of delay.
    const double h = 0.116 * M_PI / 12.0;
    const double tau = geometric_delay_s(h, -4.3, b_m);
    CHECK(tau == doctest::Approx(7.01e-10).epsilon(2e-3));
    CHECK(tau * kCfg.ref_frequency_hz == doctest::Approx(1.0).epsilon(1e-2));
}

TEST_CASE("geometric delay advances one RF period per fringe period") {
    const double period_hr = fringe_period_ra_hr(33.0, -4.3);
    const double b_m = kCfg.baseline_m();
    const double dh = period_hr * M_PI / 12.0;
    const double dtau = geometric_delay_s(dh, -4.3, b_m) - geometric_delay_s(0.0, -4.3, b_m);
    CHECK(dtau * kCfg.ref_frequency_hz == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("fringe period") {
    CHECK(fringe_period_ra_hr(33.0, -4.3) == doctest::Approx(0.116).epsilon(0.01));
    CHECK(std::abs(fringe_period_ra_hr(33.0, -4.3) - 0.116) < 0.001);
    CHECK(fringe_period_ra_hr(33.0, 0.0) == doctest::Approx(0.1157487).epsilon(1e-5));
    CHECK(fringe_period_ra_hr(66.0, -4.3) ==
          doctest::Approx(0.5 * fringe_period_ra_hr(33.0, -4.3)).epsilon(1e-12));
    CHECK_THROWS(fringe_period_ra_hr(33.0, 90.0));
    CHECK_THROWS(fringe_period_ra_hr(0.0, 0.0));
}

TEST_CASE("alias offset quantization") {
    CHECK(alias_offset_bins(fringe_period_ra_hr(33.0, -4.3), 0.0075) == 16);
    CHECK(alias_offset_bins(0.120, 0.0075) == 16);
    CHECK(alias_offset_bins(0.0075, 0.0075) == 1);
    CHECK(alias_offset_bins(0.1161, 0.0075) == 16);
}

TEST_CASE("ra binning") {
    CHECK(ra_bin_of(8.83875, kCfg) == 1178);
    CHECK(bin_center_ra_hr(1178, kCfg) == doctest::Approx(8.83875).epsilon(1e-12));
    CHECK(ra_bin_of(0.0, kCfg) == 0);
    CHECK(bin_center_ra_hr(0, kCfg) == doctest::Approx(0.00375).epsilon(1e-12));
    CHECK(ra_bin_of(23.9999, kCfg) == 3199);
    CHECK_THROWS(ra_bin_of(24.0, kCfg));
    CHECK_THROWS(ra_bin_of(-0.001, kCfg));

    for (int k = 0; k < kCfg.ra_bins_per_day; ++k) {
        CHECK(ra_bin_of(bin_center_ra_hr(k, kCfg), kCfg) == k);
    }
}

TEST_CASE("beam RA tracking") {
    const LstReference ref{60498.0, 5.0};
    CHECK(beam_ra_at(60498.0, ref) == doctest::Approx(5.0).epsilon(1e-12));
    const double sidereal_day = 1.0 / kSiderealRate;
    CHECK(beam_ra_at(60498.0 + sidereal_day, ref) == doctest::Approx(5.0).epsilon(1e-9));
    CHECK(beam_ra_at(60498.5, ref) ==
          doctest::Approx(std::fmod(5.0 + 12.0328549128, 24.0)).epsilon(1e-9));

    for (int k = 1; k <= 5; ++k) {
        CHECK(beam_ra_at(60498.0 + k * sidereal_day, ref) ==
              doctest::Approx(5.0).epsilon(1e-7));
    }
}

TEST_CASE("expected east-west phase") {
    CHECK(expected_ew_phase(1.425e9, 0.0, kCfg, 0.0) == 0.0);

    // Reduction oracle for the configured -82 ns compensation at transit.
    const double raw = 2.0 * M_PI * 1.425e9 * 82.0e-9;
    CHECK(expected_ew_phase(1.425e9, 0.0, kCfg) ==
          doctest::Approx(wrap_by_reduction(raw)).epsilon(1e-9));
    CHECK(expected_ew_phase(1.425e9, 0.0, kCfg) ==
          doctest::Approx(-0.9424777960769379).epsilon(1e-6));
}

TEST_CASE("expected phase is linear in frequency") {
    Rng rng(11);
    const double b_m = kCfg.baseline_m();
    for (int i = 0; i < 5000; ++i) {
        const double nu = rng.uniform(1.398e9, 1.451e9);
        const double df = rng.uniform(1.0, 7.0e6);
        const double h = rng.uniform(-0.3, 0.3);
        const double tau_g = geometric_delay_s(h, kCfg.dec_deg, b_m);
        const double lhs = wrap_phase(expected_ew_phase(nu + df, h, kCfg) -
                                      expected_ew_phase(nu, h, kCfg));
        const double rhs = wrap_phase(2.0 * M_PI * df * (tau_g - kCfg.tau_inst_s));
        CHECK(wrap_phase(lhs - rhs) == doctest::Approx(0.0).epsilon(1e-9));
    }
}

TEST_CASE("circular RA difference") {
    CHECK(circ_delta_hr(1.0, 23.0) == doctest::Approx(2.0));
    CHECK(circ_delta_hr(23.0, 1.0) == doctest::Approx(-2.0));
    CHECK(circ_delta_hr(12.0, 0.0) == doctest::Approx(12.0));
    CHECK(hour_angle_rad(8.9, 8.8) == doctest::Approx(0.1 * M_PI / 12.0).epsilon(1e-12));
}
