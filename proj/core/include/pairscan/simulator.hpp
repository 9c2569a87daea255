#ifndef PAIRSCAN_SIMULATOR_HPP
#define PAIRSCAN_SIMULATOR_HPP

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "pairscan/geometry.hpp"
#include "pairscan/rng.hpp"
#include "pairscan/scenario.hpp"

namespace pairscan {

// One materialized 954 Hz segment: a contiguous block of FFT bins with the
// same bin set for both elements.
struct SegmentSpectra {
    std::int64_t segment_index = 0;  // global grid: bin_index / bins_per_segment
    std::int64_t first_bin = 0;
    std::vector<std::complex<double>> east;
    std::vector<std::complex<double>> west;

    double freq_of(std::size_t i, double fft_bin_hz) const {
        return static_cast<double>(first_bin + static_cast<std::int64_t>(i)) * fft_bin_hz;
    }
};

// One 0.27 s integration window of a trigger.
struct WindowSpectra {
    std::vector<SegmentSpectra> segments;  // ascending segment_index
    // 50 MHz proxy quantities, synthesized as aggregates.
    double wideband_power_east = 0.0;
    double wideband_power_west = 0.0;
    std::complex<double> wideband_correlated = {0.0, 0.0};

    std::size_t bin_count() const;
};

// One 3.0 s digitizer trigger: windows_per_trigger adjacent windows.
struct TriggerFrame {
    std::int64_t frame_index = 0;
    double mjd = 0.0;  // quantized to the configured MJD quantum
    double beam_ra_hr = 0.0;
    std::vector<WindowSpectra> windows;

    SkyPointing pointing(const InstrumentConfig& cfg) const {
        return {mjd, beam_ra_hr, cfg.dec_deg};
    }
};

// Gaussian beam gain from angular offset, FWHM convention.
double beam_gain(double offset_deg, double fwhm_deg);

// Trigger count of one run: sum over ranges of floor(range_seconds / period).
std::int64_t run_trigger_count(const Scenario& s);

// Trigger time before quantization for a flat frame index.
double trigger_mjd_raw(const Scenario& s, std::int64_t frame_index);

// Quantize an MJD to the configured quantum (0.25 s default).
double quantize_mjd(double mjd, const InstrumentConfig& cfg);

// Integer quantum ticks of a quantized MJD (exact comparisons).
std::int64_t mjd_ticks(double mjd, const InstrumentConfig& cfg);

// Enumerate (frame_index, quantized mjd, beam_ra) without synthesizing
// spectra; the exposure model and tests reuse the exact trigger grid.
void for_each_trigger(const Scenario& s,
                      const std::function<void(std::int64_t, double, double)>& fn);

// Synthesize both windows of one trigger. Deterministic in
// (scenario.seed, frame_index); independent of any other frame.
TriggerFrame synthesize_frame(const Scenario& s, std::int64_t frame_index);

// Synthesize a single window (spec-level operation; synthesize_frame loops
// over windows). The rng must be the stream for (seed, frame, window).
WindowSpectra synthesize_window(const Scenario& s, double mjd, double beam_ra_hr,
                                int window_index, Rng& rng);

// Ordered stream of frames through a visitor; frames are synthesized on the
// fly (a multi-day run does not fit in memory). Throws on empty mjd_ranges.
void generate_run(const Scenario& s,
                  const std::function<void(const TriggerFrame&)>& fn);

// Valid whole segments (global indices) inside the configured rf_ranges.
std::vector<std::pair<std::int64_t, std::int64_t>> valid_segment_ranges(
    const InstrumentConfig& cfg);
std::int64_t count_valid_segments(const InstrumentConfig& cfg);
std::int64_t segment_of_freq(double freq_hz, const InstrumentConfig& cfg);
bool freq_in_rf_ranges(double freq_hz, const InstrumentConfig& cfg);

}  // namespace pairscan

#endif  // PAIRSCAN_SIMULATOR_HPP
