#ifndef PAIRSCAN_GEOMETRY_HPP
#define PAIRSCAN_GEOMETRY_HPP

#include "pairscan/config.hpp"

namespace pairscan {

// Pointing sample of the drift-scan beam.
struct SkyPointing {
    double mjd = 0.0;        // quantized to the configured MJD quantum
    double beam_ra_hr = 0.0; // [0, 24)
    double dec_deg = 0.0;
};

struct LstReference {
    double mjd0 = 0.0;
    double lst0_hr = 0.0;
};

// Wrap an angle to (-pi, pi]. Throws std::invalid_argument on non-finite
// input.
double wrap_phase(double angle_rad);

// Circular difference a - b in hours, result in (-12, 12].
double circ_delta_hr(double a_hr, double b_hr);

// Signed geometric delay between the east and west elements for a source at
// the given hour angle. Positive means the east element leads. The sign
// convention is fixed here and used identically by synthesis and analysis.
double geometric_delay_s(double hour_angle_rad, double dec_deg,
                         double baseline_m);

// RA interval producing one wavelength of differential path delay, in hours.
// Throws for |dec| = 90 (singular).
double fringe_period_ra_hr(double baseline_wavelengths, double dec_deg);

// Integer RA-bin offset of the one-wavelength delay alias. Ceiling
// quantization: the 15.48-bin default ratio maps to 16, matching the
// instrument's quoted +/-16 bins; exact multiples are preserved.
int alias_offset_bins(double fringe_period_hr, double ra_bin_hr);

// RA bin index, k = floor(ra / width) in [0, ra_bins_per_day). Throws when
// ra is outside [0, 24).
int ra_bin_of(double ra_hr, const InstrumentConfig& cfg);

// Center RA of bin k: (k + 0.5) * width.
double bin_center_ra_hr(int bin, const InstrumentConfig& cfg);

// Beam RA (== LST) at an MJD given the sidereal calibration pair.
double beam_ra_at(double mjd, const LstReference& ref);
double beam_ra_at(double mjd, const InstrumentConfig& cfg);

// Hour angle of a source RA for a beam pointing, radians: (beam - src) * pi/12
// through the circular difference.
double hour_angle_rad(double beam_ra_hr, double source_ra_hr);

// Expected east-minus-west phase at a frequency for a source at hour angle H:
// wrap(2 pi f (tau_g(H) - tau_inst)). tau_override_s, when finite, replaces
// the configured instrument delay (falsification tests).
double expected_ew_phase(double freq_hz, double hour_angle_rad,
                         const InstrumentConfig& cfg);
double expected_ew_phase(double freq_hz, double hour_angle_rad,
                         const InstrumentConfig& cfg, double tau_inst_s);

}  // namespace pairscan

#endif  // PAIRSCAN_GEOMETRY_HPP
