#ifndef PAIRSCAN_FIRST_LEVEL_HPP
#define PAIRSCAN_FIRST_LEVEL_HPP

#include <complex>
#include <cstdint>
#include <vector>

#include "pairscan/simulator.hpp"

namespace pairscan {

// Margin value recorded when no RFI tag is active anywhere near a candidate.
// Kept finite so candidate files round-trip bit-exactly.
inline constexpr double kNoTagMargin = 1.0e9;

// A single 3.7 Hz pulse exceeding the SNR threshold on both elements.
struct PulseDetection {
    double mjd = 0.0;
    int window_index = 0;
    std::int64_t bin_index = 0;
    double freq_hz = 0.0;
    std::int64_t segment_index = 0;
    double snr_db_east = 0.0;
    double snr_db_west = 0.0;
    double phase_east_rad = 0.0;
    double phase_west_rad = 0.0;
};

struct AssociatedMeasurements {
    double east_power_954 = 0.0;   // mean of the two pulses' segment powers
    double west_power_954 = 0.0;
    double east_power_wide = 0.0;  // 50 MHz proxy
    double west_power_wide = 0.0;
    double visibility_mag_db_rel = 0.0;
    double log10_df_likelihood = 0.0;
    double log10_snr_likelihood_pulse1 = 0.0;
    double log10_snr_likelihood_pulse2 = 0.0;
    double log10_snr_likelihood_pair = 0.0;
    double rfi_spectral_margin_segments = kNoTagMargin;  // filled by excision
    double rf_low_freq_hz = 0.0;
};

// Simultaneous (same window, dt = 0) pulse pair. Raw per-element phases are
// stored; direction-hypothesis phase residuals (d_ew_phi_*, d_df_d_ew_phi)
// are computed in second-level processing against an RA-bin hypothesis.
struct PulsePairCandidate {
    PulseDetection pulse1;  // lower frequency
    PulseDetection pulse2;
    double delta_f_hz = 0.0;
    AssociatedMeasurements assoc;
    std::uint64_t candidate_id = 0;  // stable across reruns
};

struct SnrLogLikelihoods {
    double pulse1 = 0.0;
    double pulse2 = 0.0;
    double pair = 0.0;
};

// Verification-path channelizer: plain DFT of a real time series into
// one-sided complex bins 0..N/2. No normalization: a unit-amplitude cosine
// centered on bin k yields |X_k| = N/2. Throws when the length does not
// match sample_rate / bin_hz.
std::vector<std::complex<double>> channelize(const std::vector<double>& timeseries,
                                             double sample_rate_hz, double bin_hz);

// Median bin power divided by ln 2 (median-to-mean conversion for
// exponentially distributed noise power). Throws when fewer than 16 bins.
double estimate_noise_floor(const std::vector<double>& bin_powers);

enum class FloorPolicy { kMeasured, kFixed };

// Per-element detection floors of one window. With kMeasured the floor is
// the median of per-segment medians (one robust pooled value per element per
// window) divided by ln 2; segment medians come from estimate_noise_floor's
// convention. With kFixed both floors are fixed_value (test oracles).
struct WindowFloors {
    double east = 1.0;
    double west = 1.0;
};
WindowFloors window_floors(const WindowSpectra& w, FloorPolicy policy,
                           double fixed_value = 1.0);

// All bins whose SNR meets the threshold on BOTH elements, with phases.
std::vector<PulseDetection> detect_pulses(const WindowSpectra& w, double mjd,
                                          int window_index,
                                          const InstrumentConfig& cfg,
                                          FloorPolicy policy = FloorPolicy::kMeasured,
                                          double fixed_floor = 1.0);

// Composite SNR log10-likelihood statistic: excess-over-threshold tail
// probability under the exponential model, per pulse (both elements) and for
// the pair (sum). A pulse exactly at threshold scores 0.
SnrLogLikelihoods snr_log_likelihoods(double snr_db_e1, double snr_db_w1,
                                      double snr_db_e2, double snr_db_w2,
                                      const InstrumentConfig& cfg);

// Keep decision for the configured rule and thresholds.
bool passes_snr_likelihood(const SnrLogLikelihoods& v, const InstrumentConfig& cfg);

// log10 probability that a second noise pulse lands within +/- delta_f of
// the first under a Poisson spectral process. Returns -inf for rate = 0 or
// delta_f = 0 (documented sentinel).
double delta_f_log_likelihood(double delta_f_hz, double pulse_rate_per_hz);

// Noise-only pulse density per Hz implied by the configured threshold; the
// reference rate for delta_f_log_likelihood in associated measurements.
double awgn_pulse_rate_per_hz(const InstrumentConfig& cfg);

// FX visibility over the materialized band plus the synthetic wideband
// correlated component: V = sum X_e conj(X_w) exp(-i 2 pi f tau). Magnitude
// is reported elsewhere as 10 log10 |V| dB_rel (0 dB_rel == |V| = 1).
std::complex<double> fx_visibility(const WindowSpectra& w, double tau_s,
                                   const InstrumentConfig& cfg);

double visibility_mag_db(const std::complex<double>& v);

// Total bin power of a materialized segment, per element.
double segment_power(const SegmentSpectra& seg, bool east);

// All unordered pulse pairs of one window with delta-f in the configured
// range and both pulses inside rf_ranges. Associated measurements and the
// SNR-likelihood keep rule are applied here; phases stay raw.
std::vector<PulsePairCandidate> form_pairs(const std::vector<PulseDetection>& pulses,
                                           const WindowSpectra& w,
                                           const InstrumentConfig& cfg);

AssociatedMeasurements measure_associated(const PulseDetection& p1,
                                          const PulseDetection& p2,
                                          const WindowSpectra& w,
                                          const SnrLogLikelihoods& snr_vals,
                                          const InstrumentConfig& cfg);

std::uint64_t candidate_id(double mjd, int window_index, std::int64_t bin1,
                           std::int64_t bin2, const InstrumentConfig& cfg);

// First-level summary of one window, persisted in the frames file and used
// by the high-visibility scan and continuum figure data.
struct WindowRecord {
    double mjd = 0.0;
    int window_index = 0;
    double beam_ra_hr = 0.0;
    std::int64_t n_bins = 0;
    double wideband_power_east = 0.0;
    double wideband_power_west = 0.0;
    std::complex<double> visibility = {0.0, 0.0};
    double visibility_mag_db_rel = 0.0;
    std::int64_t n_detections = 0;
};

WindowRecord summarize_window(const WindowSpectra& w, double mjd, int window_index,
                              double beam_ra_hr, std::int64_t n_detections,
                              const InstrumentConfig& cfg);

}  // namespace pairscan

#endif  // PAIRSCAN_FIRST_LEVEL_HPP
