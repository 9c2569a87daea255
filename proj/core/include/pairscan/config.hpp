#ifndef PAIRSCAN_CONFIG_HPP
#define PAIRSCAN_CONFIG_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace pairscan {

inline constexpr double kSpeedOfLightMps = 299792458.0;

// Sidereal days per solar day.
inline constexpr double kSiderealRate = 1.0027379094;

// Rule applied to the composite SNR log10-likelihood values when deciding
// whether a pulse pair candidate is kept.
//
//   kSignificanceFloor: keep when the value is at or below the threshold,
//     i.e. the pair must be at least this improbable under the noise model.
//     This is the default; it admits strong pulses and thins the
//     noise-caused population.
//   kImprobabilityCap: keep when the value is at or above the threshold,
//     i.e. reject pulses that are too improbable under the noise model.
//
// The rule in force is recorded in the run manifest next to the threshold
// values so results are interpretable either way.
enum class SnrLikeRule { kSignificanceFloor, kImprobabilityCap };

const char* to_string(SnrLikeRule rule);

/**
 * Every dial of the instrument and of the processing chain. Field defaults
 * reproduce the reference instrument; values normally arrive from a flat
 * key-value config file (see load_config_file) with optional environment
 * overrides.
 */
struct InstrumentConfig {
    // Antenna / baseline
    double baseline_wavelengths = 33.0;
    double ref_frequency_hz = 1.425e9;
    double dec_deg = -4.3;
    double element_fwhm_deg = 5.3;
    double baseline_azimuth_deg = 180.0;

    // Timing
    double tau_inst_s = -82.0e-9;   // instrument delay compensation
    double integration_s = 0.27;
    double trigger_period_s = 3.0;
    int windows_per_trigger = 2;
    double mjd_quantum_s = 0.25;

    // Spectral layout
    double fft_bin_hz = 3.7;
    std::vector<std::pair<double, double>> rf_ranges_hz = {
        {1398.0e6, 1424.0e6}, {1426.0e6, 1451.0e6}};
    std::pair<double, double> delta_f_range_hz = {1.0, 7.0e6};
    double rfi_segment_hz = 954.0;
    double wideband_bandwidth_hz = 50.0e6;

    // RA binning
    int ra_bins_per_day = 3200;

    // Detection and filters
    double snr_threshold_db = 8.5;
    // Saturation guard: a window with more dual-element detections than this
    // is an RFI storm; its pulses still feed the segment-concentration
    // counts, but no pair candidates are formed (combinatorial pairing of a
    // broadband burst is meaningless and unbounded). Saturated-window counts
    // are recorded per stage.
    int max_pulses_per_window = 64;
    double ew_phase_filter_rad = 0.10;   // per-pulse |d_EW phi| half-width
    double ddf_phase_filter_rad = 0.80;  // pair |d_df d_EW phi| half-width
    double log10_pulse_snr_like_threshold = -1.60;
    double log10_pair_snr_like_threshold = -2.70;
    SnrLikeRule snr_like_rule = SnrLikeRule::kSignificanceFloor;

    // RFI excision
    int rfi_margin_segments = 500;
    double rfi_window_hours = 4.0;
    bool rfi_look_forward = true;
    // 0 means auto: smallest count whose Poisson tail probability under the
    // noise-only model is below 1%. The effective value is recorded in the
    // run manifest.
    int rfi_concentration_threshold = 0;

    // Sun excision
    double sun_ra_halfwidth_hr = 1.0;
    double sun_mjd_min = 60540.0;

    // Direction-of-interest detection
    int doi_min_events = 8;
    double doi_median_d_min = 3.0;
    double doi_low_d_fraction_max = 0.1;

    // Sidereal calibration pair: LST (hours) at a reference MJD.
    double lst_ref_mjd = 60498.0;
    double lst_ref_lst_hr = 0.0;

    // High-visibility scan default threshold (dB_rel, 0 dB_rel == |V| = 1
    // in simulation power units).
    double highvis_threshold_db = 144.0;

    double ra_bin_width_hr() const { return 24.0 / ra_bins_per_day; }
    double wavelength_m() const { return kSpeedOfLightMps / ref_frequency_hz; }
    double baseline_m() const { return baseline_wavelengths * wavelength_m(); }
    int bins_per_segment() const;
    double snr_threshold_linear() const;

    // Throws std::invalid_argument naming the offending field when a
    // structural invariant is violated.
    void validate() const;
};

// Flat key-value config file. Lines: `key = value`, `[section]` headers are
// cosmetic, `#` starts a comment. Unknown keys raise with the key name.
InstrumentConfig load_config_file(const std::string& path,
                                  InstrumentConfig base = {});

// Apply one key=value pair; shared by the file loader, scenario embedding
// and environment overrides. Throws on unknown key or malformed value.
void apply_config_key(InstrumentConfig& cfg, const std::string& key,
                      const std::string& value);

// PAIRSCAN_CFG_<UPPERCASE_KEY>=value environment overrides, applied last.
void apply_env_overrides(InstrumentConfig& cfg);

// Stable digest of the effective configuration (hex string).
std::string config_digest(const InstrumentConfig& cfg);

// Serialize to the same flat key-value format the loader accepts.
std::string config_to_text(const InstrumentConfig& cfg);

}  // namespace pairscan

#endif  // PAIRSCAN_CONFIG_HPP
