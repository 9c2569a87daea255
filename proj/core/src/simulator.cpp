#include "pairscan/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "pairscan/geometry.hpp"

namespace pairscan {

namespace {
constexpr double kTwoPi = 2.0 * M_PI;
constexpr double kSecondsPerDay = 86400.0;

// Draw-order tags for per-window RNG streams. The synthesis draw order is
// part of the file format contract: segment choice, burst decisions, source
// decisions, noise fill, source tones, RFI bins, wideband scalars.
enum : std::uint64_t { kStreamWindow = 0x51 };
}  // namespace

double beam_gain(double offset_deg, double fwhm_deg) {
    if (fwhm_deg <= 0.0) throw std::invalid_argument("beam_gain: fwhm must be positive");
    const double r = offset_deg / fwhm_deg;
    return std::exp(-4.0 * M_LN2 * r * r);
}

std::vector<std::pair<std::int64_t, std::int64_t>> valid_segment_ranges(
    const InstrumentConfig& cfg) {
    const std::int64_t bins_per_seg = cfg.bins_per_segment();
    std::vector<std::pair<std::int64_t, std::int64_t>> out;
    for (const auto& [lo, hi] : cfg.rf_ranges_hz) {
        const auto bin_lo = static_cast<std::int64_t>(std::ceil(lo / cfg.fft_bin_hz));
        const auto bin_hi = static_cast<std::int64_t>(std::floor(hi / cfg.fft_bin_hz));
        // Whole segments only: partial edge segments are not materialized.
        const std::int64_t seg_lo = (bin_lo + bins_per_seg - 1) / bins_per_seg;
        const std::int64_t seg_hi = (bin_hi + 1) / bins_per_seg - 1;
        if (seg_hi >= seg_lo) out.emplace_back(seg_lo, seg_hi);
    }
    return out;
}

std::int64_t count_valid_segments(const InstrumentConfig& cfg) {
    std::int64_t n = 0;
    for (const auto& [lo, hi] : valid_segment_ranges(cfg)) n += hi - lo + 1;
    return n;
}

std::int64_t segment_of_freq(double freq_hz, const InstrumentConfig& cfg) {
    const auto bin = static_cast<std::int64_t>(std::llround(freq_hz / cfg.fft_bin_hz));
    return bin / cfg.bins_per_segment();
}

bool freq_in_rf_ranges(double freq_hz, const InstrumentConfig& cfg) {
    for (const auto& [lo, hi] : cfg.rf_ranges_hz) {
        if (freq_hz >= lo && freq_hz <= hi) return true;
    }
    return false;
}

std::size_t WindowSpectra::bin_count() const {
    std::size_t n = 0;
    for (const auto& s : segments) n += s.east.size();
    return n;
}

std::int64_t run_trigger_count(const Scenario& s) {
    std::int64_t n = 0;
    for (const auto& [lo, hi] : s.mjd_ranges) {
        n += static_cast<std::int64_t>(
            std::floor((hi - lo) * kSecondsPerDay / s.config.trigger_period_s + 1e-9));
    }
    return n;
}

double trigger_mjd_raw(const Scenario& s, std::int64_t frame_index) {
    std::int64_t base = 0;
    for (const auto& [lo, hi] : s.mjd_ranges) {
        const auto n = static_cast<std::int64_t>(
            std::floor((hi - lo) * kSecondsPerDay / s.config.trigger_period_s + 1e-9));
        if (frame_index < base + n) {
            return lo + static_cast<double>(frame_index - base) *
                            s.config.trigger_period_s / kSecondsPerDay;
        }
        base += n;
    }
    throw std::out_of_range("trigger_mjd_raw: frame index beyond run");
}

double quantize_mjd(double mjd, const InstrumentConfig& cfg) {
    const double ticks_per_day = kSecondsPerDay / cfg.mjd_quantum_s;
    const auto ticks = std::llround(mjd * ticks_per_day);
    return static_cast<double>(ticks) * cfg.mjd_quantum_s / kSecondsPerDay;
}

std::int64_t mjd_ticks(double mjd, const InstrumentConfig& cfg) {
    return std::llround(mjd * kSecondsPerDay / cfg.mjd_quantum_s);
}

void for_each_trigger(const Scenario& s,
                      const std::function<void(std::int64_t, double, double)>& fn) {
    std::int64_t idx = 0;
    for (const auto& [lo, hi] : s.mjd_ranges) {
        const auto n = static_cast<std::int64_t>(
            std::floor((hi - lo) * kSecondsPerDay / s.config.trigger_period_s + 1e-9));
        for (std::int64_t i = 0; i < n; ++i, ++idx) {
            const double raw =
                lo + static_cast<double>(i) * s.config.trigger_period_s / kSecondsPerDay;
            const double mjd = quantize_mjd(raw, s.config);
            fn(idx, mjd, beam_ra_at(mjd, s.config));
        }
    }
}

namespace {

struct BurstPlan {
    const RfiSpec* spec;
    std::int64_t bin_lo;
    std::int64_t bin_hi;
};

// Distinct background segments, by index into the valid-segment list.
std::vector<std::int64_t> pick_background_segments(const Scenario& s,
                                                   std::int64_t n_valid, Rng& rng) {
    std::set<std::int64_t> chosen;
    const int want = s.background_segments_per_window;
    while (static_cast<int>(chosen.size()) < want) {
        chosen.insert(static_cast<std::int64_t>(rng.uniform_int(
            static_cast<std::uint64_t>(n_valid))));
    }
    return {chosen.begin(), chosen.end()};
}

std::int64_t nth_valid_segment(
    const std::vector<std::pair<std::int64_t, std::int64_t>>& ranges,
    std::int64_t n) {
    for (const auto& [lo, hi] : ranges) {
        const std::int64_t len = hi - lo + 1;
        if (n < len) return lo + n;
        n -= len;
    }
    throw std::out_of_range("nth_valid_segment");
}

bool segment_is_valid(
    const std::vector<std::pair<std::int64_t, std::int64_t>>& ranges,
    std::int64_t seg) {
    for (const auto& [lo, hi] : ranges) {
        if (seg >= lo && seg <= hi) return true;
    }
    return false;
}

}  // namespace

WindowSpectra synthesize_window(const Scenario& s, double mjd, double beam_ra_hr,
                                int window_index, Rng& rng) {
    (void)window_index;
    const InstrumentConfig& cfg = s.config;
    const std::int64_t bins_per_seg = cfg.bins_per_segment();
    const auto seg_ranges = valid_segment_ranges(cfg);
    const std::int64_t n_valid = count_valid_segments(cfg);

    // 1. Background segment choice.
    std::set<std::int64_t> segments;
    for (std::int64_t idx : pick_background_segments(s, n_valid, rng)) {
        segments.insert(nth_valid_segment(seg_ranges, idx));
    }

    // 2. RFI burst decisions, in list order.
    std::vector<BurstPlan> bursts;
    for (const auto& r : s.rfi) {
        const double windows_per_hour =
            3600.0 / cfg.trigger_period_s * cfg.windows_per_trigger;
        const double p = std::min(1.0, r.burst_rate_per_hour / windows_per_hour);
        if (rng.bernoulli(p)) {
            auto lo = static_cast<std::int64_t>(
                std::ceil((r.segment_center_hz - 0.5 * r.bandwidth_hz) / cfg.fft_bin_hz));
            auto hi = static_cast<std::int64_t>(
                std::floor((r.segment_center_hz + 0.5 * r.bandwidth_hz) / cfg.fft_bin_hz));
            bursts.push_back({&r, lo, hi});
            for (std::int64_t seg = lo / bins_per_seg; seg <= hi / bins_per_seg; ++seg) {
                if (segment_is_valid(seg_ranges, seg)) segments.insert(seg);
            }
        }
    }

    // 3. Source emission decisions, in list order; tone segments are always
    // materialized so the spectral layout does not depend on emission.
    std::vector<bool> emitting(s.sources.size());
    for (std::size_t i = 0; i < s.sources.size(); ++i) {
        emitting[i] = rng.bernoulli(s.sources[i].emission_probability_per_window);
        for (const auto& [f1, f2] : s.sources[i].tone_pairs) {
            segments.insert(segment_of_freq(f1, cfg));
            segments.insert(segment_of_freq(f2, cfg));
        }
    }

    // Sun state for this window.
    double sun_power_per_bin = 0.0;
    if (s.sun) {
        const double sun_ra = s.sun->ra_at(mjd);
        if (std::abs(circ_delta_hr(beam_ra_hr, sun_ra)) <= s.sun->sidelobe_extent_hr) {
            sun_power_per_bin =
                s.noise_power * (std::pow(10.0, s.sun->broadband_power_rise_db / 10.0) - 1.0);
        }
    }

    // 4. Noise fill, ascending segment order.
    WindowSpectra w;
    w.segments.reserve(segments.size());
    for (std::int64_t seg : segments) {
        SegmentSpectra ss;
        ss.segment_index = seg;
        ss.first_bin = seg * bins_per_seg;
        ss.east.resize(static_cast<std::size_t>(bins_per_seg));
        ss.west.resize(static_cast<std::size_t>(bins_per_seg));
        for (std::int64_t b = 0; b < bins_per_seg; ++b) {
            auto e = rng.complex_gaussian(s.noise_power);
            auto v = rng.complex_gaussian(s.noise_power);
            if (sun_power_per_bin > 0.0) {
                const auto z = rng.complex_gaussian(sun_power_per_bin);
                e += z;
                v += z;
            }
            ss.east[static_cast<std::size_t>(b)] = e;
            ss.west[static_cast<std::size_t>(b)] = v;
        }
        w.segments.push_back(std::move(ss));
    }

    auto find_segment = [&w](std::int64_t seg) -> SegmentSpectra* {
        auto it = std::lower_bound(w.segments.begin(), w.segments.end(), seg,
                                   [](const SegmentSpectra& a, std::int64_t v) {
                                       return a.segment_index < v;
                                   });
        return (it != w.segments.end() && it->segment_index == seg) ? &*it : nullptr;
    };

    double excess_east = 0.0;
    double excess_west = 0.0;

    // 5. Source tones.
    for (std::size_t i = 0; i < s.sources.size(); ++i) {
        if (!emitting[i]) continue;
        const SourceSpec& src = s.sources[i];
        const double dra_deg = circ_delta_hr(src.ra_hr, beam_ra_hr) * 15.0 *
                               std::cos(cfg.dec_deg * M_PI / 180.0);
        const double ddec_deg = src.dec_deg - cfg.dec_deg;
        const double sep_deg = std::hypot(dra_deg, ddec_deg);
        const double gain = beam_gain(sep_deg, cfg.element_fwhm_deg);
        const double h_true = hour_angle_rad(beam_ra_hr, src.ra_hr);
        const double amp2 =
            std::pow(10.0, src.snr_db_at_transit / 10.0) * gain * s.noise_power;
        const double amp = std::sqrt(amp2);
        for (const auto& [f1, f2] : src.tone_pairs) {
            for (double f : {f1, f2}) {
                const double phi0 = rng.uniform_phase();
                const double phi_east = src.phase_coherent
                                            ? phi0 + expected_ew_phase(f, h_true, cfg)
                                            : rng.uniform_phase();
                SegmentSpectra* seg = find_segment(segment_of_freq(f, cfg));
                if (!seg) continue;
                const auto bin = static_cast<std::int64_t>(std::llround(f / cfg.fft_bin_hz));
                const auto off = static_cast<std::size_t>(bin - seg->first_bin);
                seg->west[off] += std::polar(amp, phi0);
                seg->east[off] += std::polar(amp, phi_east);
                excess_east += amp2;
                excess_west += amp2;
            }
        }
    }

    // 6. RFI bursts.
    for (const auto& burst : bursts) {
        const RfiSpec& r = *burst.spec;
        const double p_burst = std::pow(10.0, r.burst_snr_db / 10.0) * s.noise_power;
        const double amp_e = std::sqrt(p_burst * r.element_coupling_east);
        const double amp_w = std::sqrt(p_burst * r.element_coupling_west);
        const double theta_offset = rng.uniform_phase();  // one per burst
        for (std::int64_t bin = burst.bin_lo; bin <= burst.bin_hi; ++bin) {
            SegmentSpectra* seg = find_segment(bin / bins_per_seg);
            if (!seg || bin < seg->first_bin ||
                bin >= seg->first_bin + bins_per_seg) {
                continue;
            }
            const auto off = static_cast<std::size_t>(bin - seg->first_bin);
            const double phi_w = rng.uniform_phase();
            const double phi_e = r.correlated ? phi_w + theta_offset : rng.uniform_phase();
            seg->west[off] += std::polar(amp_w, phi_w);
            seg->east[off] += std::polar(amp_e, phi_e);
            excess_east += p_burst * r.element_coupling_east;
            excess_west += p_burst * r.element_coupling_west;
        }
    }

    // 7. Wideband (50 MHz proxy) aggregates.
    const double k_wide = std::floor(cfg.wideband_bandwidth_hz / cfg.fft_bin_hz);
    const double mean_per_bin = s.noise_power + sun_power_per_bin;
    const double n_mat = static_cast<double>(w.bin_count());
    w.wideband_power_east = std::max(
        0.0, k_wide * mean_per_bin + rng.gaussian() * std::sqrt(k_wide) * mean_per_bin +
                 excess_east);
    w.wideband_power_west = std::max(
        0.0, k_wide * mean_per_bin + rng.gaussian() * std::sqrt(k_wide) * mean_per_bin +
                 excess_west);
    // Cross-power of the un-materialized bins: a zero-mean CLT fluctuation
    // with E|V|^2 = (K - n) p^2 per element pair, plus the fully correlated
    // Sun component. Without the noise term a narrow tone would dominate the
    // wideband visibility, which the full 50 MHz band never allows.
    const double residual_bins = std::max(0.0, k_wide - n_mat);
    w.wideband_correlated =
        rng.complex_gaussian(residual_bins * mean_per_bin * mean_per_bin);
    if (sun_power_per_bin > 0.0) {
        w.wideband_correlated += residual_bins * sun_power_per_bin;
    }
    return w;
}

TriggerFrame synthesize_frame(const Scenario& s, std::int64_t frame_index) {
    TriggerFrame frame;
    frame.frame_index = frame_index;
    frame.mjd = quantize_mjd(trigger_mjd_raw(s, frame_index), s.config);
    frame.beam_ra_hr = beam_ra_at(frame.mjd, s.config);
    frame.windows.reserve(static_cast<std::size_t>(s.config.windows_per_trigger));
    for (int wi = 0; wi < s.config.windows_per_trigger; ++wi) {
        Rng rng = Rng::for_stream(s.seed, static_cast<std::uint64_t>(frame_index),
                                  static_cast<std::uint64_t>(wi), kStreamWindow);
        frame.windows.push_back(
            synthesize_window(s, frame.mjd, frame.beam_ra_hr, wi, rng));
    }
    return frame;
}

void generate_run(const Scenario& s,
                  const std::function<void(const TriggerFrame&)>& fn) {
    s.validate();
    const std::int64_t n = run_trigger_count(s);
    for (std::int64_t i = 0; i < n; ++i) fn(synthesize_frame(s, i));
}

}  // namespace pairscan
