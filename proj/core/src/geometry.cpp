#include "pairscan/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace pairscan {

namespace {
constexpr double kTwoPi = 2.0 * M_PI;
constexpr double kDegToRad = M_PI / 180.0;
constexpr double kHrToRad = M_PI / 12.0;
}  // namespace

double wrap_phase(double angle_rad) {
    if (!std::isfinite(angle_rad)) {
        throw std::invalid_argument("wrap_phase: non-finite angle");
    }
    double r = std::remainder(angle_rad, kTwoPi);  // [-pi, pi]
    if (r <= -M_PI) r += kTwoPi;                   // half-open: (-pi, pi]
    return r;
}

double circ_delta_hr(double a_hr, double b_hr) {
    double d = std::fmod(a_hr - b_hr, 24.0);
    if (d > 12.0) d -= 24.0;
    if (d <= -12.0) d += 24.0;
    return d;
}

double geometric_delay_s(double hour_angle_rad, double dec_deg,
                         double baseline_m) {
    if (!std::isfinite(hour_angle_rad) || !std::isfinite(dec_deg) ||
        !std::isfinite(baseline_m)) {
        throw std::invalid_argument("geometric_delay_s: non-finite input");
    }
    return baseline_m / kSpeedOfLightMps * std::cos(dec_deg * kDegToRad) *
           std::sin(hour_angle_rad);
}

double fringe_period_ra_hr(double baseline_wavelengths, double dec_deg) {
    if (baseline_wavelengths <= 0.0) {
        throw std::invalid_argument(
            "fringe_period_ra_hr: baseline_wavelengths must be positive");
    }
    const double cos_dec = std::cos(dec_deg * kDegToRad);
    if (std::abs(cos_dec) < 1e-12) {
        throw std::invalid_argument("fringe_period_ra_hr: singular at |dec| = 90");
    }
    return 1.0 / (baseline_wavelengths * cos_dec) / kHrToRad;
}

int alias_offset_bins(double fringe_period_hr, double ra_bin_hr) {
    if (fringe_period_hr <= 0.0 || ra_bin_hr <= 0.0) {
        throw std::invalid_argument("alias_offset_bins: arguments must be positive");
    }
    // Tolerance keeps exact multiples (0.120 / 0.0075) from ticking up.
    return static_cast<int>(std::ceil(fringe_period_hr / ra_bin_hr - 1e-9));
}

int ra_bin_of(double ra_hr, const InstrumentConfig& cfg) {
    if (!(ra_hr >= 0.0 && ra_hr < 24.0)) {
        throw std::invalid_argument("ra_bin_of: RA outside [0, 24)");
    }
    const int k = static_cast<int>(ra_hr / cfg.ra_bin_width_hr());
    return k >= cfg.ra_bins_per_day ? cfg.ra_bins_per_day - 1 : k;
}

double bin_center_ra_hr(int bin, const InstrumentConfig& cfg) {
    if (bin < 0 || bin >= cfg.ra_bins_per_day) {
        throw std::invalid_argument("bin_center_ra_hr: bin out of range");
    }
    return (bin + 0.5) * cfg.ra_bin_width_hr();
}

double beam_ra_at(double mjd, const LstReference& ref) {
    double ra = std::fmod(ref.lst0_hr + (mjd - ref.mjd0) * 24.0 * kSiderealRate,
                          24.0);
    if (ra < 0.0) ra += 24.0;
    return ra;
}

double beam_ra_at(double mjd, const InstrumentConfig& cfg) {
    return beam_ra_at(mjd, LstReference{cfg.lst_ref_mjd, cfg.lst_ref_lst_hr});
}

double hour_angle_rad(double beam_ra_hr, double source_ra_hr) {
    return circ_delta_hr(beam_ra_hr, source_ra_hr) * kHrToRad;
}

double expected_ew_phase(double freq_hz, double hour_angle_rad,
                         const InstrumentConfig& cfg, double tau_inst_s) {
    const double tau_g =
        geometric_delay_s(hour_angle_rad, cfg.dec_deg, cfg.baseline_m());
    return wrap_phase(kTwoPi * freq_hz * (tau_g - tau_inst_s));
}

double expected_ew_phase(double freq_hz, double hour_angle_rad,
                         const InstrumentConfig& cfg) {
    return expected_ew_phase(freq_hz, hour_angle_rad, cfg, cfg.tau_inst_s);
}

}  // namespace pairscan
