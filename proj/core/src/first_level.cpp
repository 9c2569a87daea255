#include "pairscan/first_level.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "pairscan/hash.hpp"

namespace pairscan {

namespace {
constexpr double kTwoPi = 2.0 * M_PI;

double median_of(std::vector<double> v) {
    const std::size_t n = v.size();
    const std::size_t mid = n / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    double hi = v[mid];
    if (n % 2 == 1) return hi;
    const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lo + hi);
}
}  // namespace

std::vector<std::complex<double>> channelize(const std::vector<double>& timeseries,
                                             double sample_rate_hz, double bin_hz) {
    if (sample_rate_hz <= 0 || bin_hz <= 0) {
        throw std::invalid_argument("channelize: rates must be positive");
    }
    const auto expected = static_cast<std::size_t>(std::llround(sample_rate_hz / bin_hz));
    if (timeseries.size() != expected) {
        throw std::invalid_argument("channelize: timeseries length does not match sample_rate / bin_hz");
    }
    const std::size_t n = timeseries.size();
    std::vector<std::complex<double>> spectrum(n / 2 + 1);
    // Direct DFT; the verification path runs on short windows only.
    for (std::size_t k = 0; k < spectrum.size(); ++k) {
        double re = 0.0, im = 0.0;
        const double w = -kTwoPi * static_cast<double>(k) / static_cast<double>(n);
        for (std::size_t t = 0; t < n; ++t) {
            const double a = w * static_cast<double>(t);
            re += timeseries[t] * std::cos(a);
            im += timeseries[t] * std::sin(a);
        }
        spectrum[k] = {re, im};
    }
    return spectrum;
}

double estimate_noise_floor(const std::vector<double>& bin_powers) {
    if (bin_powers.size() < 16) {
        throw std::invalid_argument("estimate_noise_floor: need at least 16 bins");
    }
    return median_of(bin_powers) / M_LN2;
}

double segment_power(const SegmentSpectra& seg, bool east) {
    double p = 0.0;
    for (const auto& z : east ? seg.east : seg.west) p += std::norm(z);
    return p;
}

WindowFloors window_floors(const WindowSpectra& w, FloorPolicy policy,
                           double fixed_value) {
    if (policy == FloorPolicy::kFixed) return {fixed_value, fixed_value};
    std::vector<double> med_e, med_w;
    med_e.reserve(w.segments.size());
    med_w.reserve(w.segments.size());
    std::vector<double> powers;
    for (const auto& seg : w.segments) {
        powers.clear();
        for (const auto& z : seg.east) powers.push_back(std::norm(z));
        med_e.push_back(estimate_noise_floor(powers));
        powers.clear();
        for (const auto& z : seg.west) powers.push_back(std::norm(z));
        med_w.push_back(estimate_noise_floor(powers));
    }
    if (med_e.empty()) throw std::invalid_argument("window_floors: empty window");
    // Median across segment estimates: robust to hot (RFI) segments and
    // tight enough that the dual-threshold rate tracks the exponential tail.
    return {median_of(med_e), median_of(med_w)};
}

std::vector<PulseDetection> detect_pulses(const WindowSpectra& w, double mjd,
                                          int window_index,
                                          const InstrumentConfig& cfg,
                                          FloorPolicy policy, double fixed_floor) {
    const WindowFloors floors = window_floors(w, policy, fixed_floor);
    const double s_min = cfg.snr_threshold_linear();
    std::vector<PulseDetection> out;
    for (const auto& seg : w.segments) {
        for (std::size_t i = 0; i < seg.east.size(); ++i) {
            const double se = std::norm(seg.east[i]) / floors.east;
            if (se < s_min) continue;
            const double sw = std::norm(seg.west[i]) / floors.west;
            if (sw < s_min) continue;
            PulseDetection d;
            d.mjd = mjd;
            d.window_index = window_index;
            d.bin_index = seg.first_bin + static_cast<std::int64_t>(i);
            d.freq_hz = static_cast<double>(d.bin_index) * cfg.fft_bin_hz;
            d.segment_index = seg.segment_index;
            d.snr_db_east = 10.0 * std::log10(se);
            d.snr_db_west = 10.0 * std::log10(sw);
            d.phase_east_rad = std::arg(seg.east[i]);
            d.phase_west_rad = std::arg(seg.west[i]);
            out.push_back(d);
        }
    }
    return out;
}

SnrLogLikelihoods snr_log_likelihoods(double snr_db_e1, double snr_db_w1,
                                      double snr_db_e2, double snr_db_w2,
                                      const InstrumentConfig& cfg) {
    const double theta = cfg.snr_threshold_linear();
    auto pulse_value = [&](double db_e, double db_w) {
        const double se = std::pow(10.0, db_e / 10.0);
        const double sw = std::pow(10.0, db_w / 10.0);
        if (se < theta - 1e-9 || sw < theta - 1e-9) {
            throw std::invalid_argument("snr_log_likelihoods: SNR below detection threshold");
        }
        // log10 P(E >= se) + log10 P(E >= sw) - log10 P(both >= theta)
        return -((se - theta) + (sw - theta)) / M_LN10;
    };
    SnrLogLikelihoods v;
    v.pulse1 = pulse_value(snr_db_e1, snr_db_w1);
    v.pulse2 = pulse_value(snr_db_e2, snr_db_w2);
    v.pair = v.pulse1 + v.pulse2;
    return v;
}

bool passes_snr_likelihood(const SnrLogLikelihoods& v, const InstrumentConfig& cfg) {
    const double tp = cfg.log10_pulse_snr_like_threshold;
    const double tq = cfg.log10_pair_snr_like_threshold;
    if (cfg.snr_like_rule == SnrLikeRule::kImprobabilityCap) {
        return v.pulse1 >= tp && v.pulse2 >= tp && v.pair >= tq;
    }
    return v.pulse1 <= tp && v.pulse2 <= tp && v.pair <= tq;
}

double delta_f_log_likelihood(double delta_f_hz, double pulse_rate_per_hz) {
    if (delta_f_hz < 0 || pulse_rate_per_hz < 0) {
        throw std::invalid_argument("delta_f_log_likelihood: negative argument");
    }
    const double x = 2.0 * pulse_rate_per_hz * delta_f_hz;
    if (x <= 0.0) return -std::numeric_limits<double>::infinity();
    // log10(1 - exp(-x)), stable for small x.
    return std::log1p(-std::exp(-x)) / M_LN10;
}

double awgn_pulse_rate_per_hz(const InstrumentConfig& cfg) {
    return std::exp(-2.0 * cfg.snr_threshold_linear()) / cfg.fft_bin_hz;
}

std::complex<double> fx_visibility(const WindowSpectra& w, double tau_s,
                                   const InstrumentConfig& cfg) {
    std::complex<double> v = {0.0, 0.0};
    for (const auto& seg : w.segments) {
        for (std::size_t i = 0; i < seg.east.size(); ++i) {
            const double freq = seg.freq_of(i, cfg.fft_bin_hz);
            const double a = -kTwoPi * freq * tau_s;
            v += seg.east[i] * std::conj(seg.west[i]) *
                 std::complex<double>{std::cos(a), std::sin(a)};
        }
    }
    // The synthetic aggregate already represents the band-integrated
    // correlated cross-power at the compensation point.
    v += w.wideband_correlated;
    return v;
}

double visibility_mag_db(const std::complex<double>& v) {
    return 10.0 * std::log10(std::max(std::abs(v), 1e-300));
}

std::uint64_t candidate_id(double mjd, int window_index, std::int64_t bin1,
                           std::int64_t bin2, const InstrumentConfig& cfg) {
    const std::int64_t ticks = std::llround(mjd * 86400.0 / cfg.mjd_quantum_s);
    std::uint64_t h = fnv1a64(std::string_view(reinterpret_cast<const char*>(&ticks), sizeof(ticks)));
    const std::int64_t parts[3] = {window_index, bin1, bin2};
    h = fnv1a64(std::string_view(reinterpret_cast<const char*>(parts), sizeof(parts)), h);
    return h;
}

AssociatedMeasurements measure_associated(const PulseDetection& p1,
                                          const PulseDetection& p2,
                                          const WindowSpectra& w,
                                          const SnrLogLikelihoods& snr_vals,
                                          const InstrumentConfig& cfg) {
    AssociatedMeasurements a;
    auto seg_pow = [&w](std::int64_t seg_index, bool east) {
        for (const auto& seg : w.segments) {
            if (seg.segment_index == seg_index) return segment_power(seg, east);
        }
        return 0.0;
    };
    a.east_power_954 = 0.5 * (seg_pow(p1.segment_index, true) + seg_pow(p2.segment_index, true));
    a.west_power_954 = 0.5 * (seg_pow(p1.segment_index, false) + seg_pow(p2.segment_index, false));
    a.east_power_wide = w.wideband_power_east;
    a.west_power_wide = w.wideband_power_west;
    a.visibility_mag_db_rel = visibility_mag_db(fx_visibility(w, cfg.tau_inst_s, cfg));
    a.log10_df_likelihood =
        delta_f_log_likelihood(std::abs(p2.freq_hz - p1.freq_hz), awgn_pulse_rate_per_hz(cfg));
    a.log10_snr_likelihood_pulse1 = snr_vals.pulse1;
    a.log10_snr_likelihood_pulse2 = snr_vals.pulse2;
    a.log10_snr_likelihood_pair = snr_vals.pair;
    a.rfi_spectral_margin_segments = kNoTagMargin;
    a.rf_low_freq_hz = std::min(p1.freq_hz, p2.freq_hz);
    return a;
}

WindowRecord summarize_window(const WindowSpectra& w, double mjd, int window_index,
                              double beam_ra_hr, std::int64_t n_detections,
                              const InstrumentConfig& cfg) {
    WindowRecord r;
    r.mjd = mjd;
    r.window_index = window_index;
    r.beam_ra_hr = beam_ra_hr;
    r.n_bins = static_cast<std::int64_t>(w.bin_count());
    r.wideband_power_east = w.wideband_power_east;
    r.wideband_power_west = w.wideband_power_west;
    r.visibility = fx_visibility(w, cfg.tau_inst_s, cfg);
    r.visibility_mag_db_rel = visibility_mag_db(r.visibility);
    r.n_detections = n_detections;
    return r;
}

std::vector<PulsePairCandidate> form_pairs(const std::vector<PulseDetection>& pulses,
                                           const WindowSpectra& w,
                                           const InstrumentConfig& cfg) {
    std::vector<PulsePairCandidate> out;
    for (std::size_t i = 0; i < pulses.size(); ++i) {
        for (std::size_t j = i + 1; j < pulses.size(); ++j) {
            const PulseDetection& a = pulses[i].bin_index <= pulses[j].bin_index
                                          ? pulses[i] : pulses[j];
            const PulseDetection& b = pulses[i].bin_index <= pulses[j].bin_index
                                          ? pulses[j] : pulses[i];
            const double df = b.freq_hz - a.freq_hz;
            if (df < cfg.delta_f_range_hz.first || df > cfg.delta_f_range_hz.second) continue;
            if (!freq_in_rf_ranges(a.freq_hz, cfg) || !freq_in_rf_ranges(b.freq_hz, cfg)) continue;
            const SnrLogLikelihoods vals = snr_log_likelihoods(
                a.snr_db_east, a.snr_db_west, b.snr_db_east, b.snr_db_west, cfg);
            if (!passes_snr_likelihood(vals, cfg)) continue;
            PulsePairCandidate c;
            c.pulse1 = a;
            c.pulse2 = b;
            c.delta_f_hz = df;
            c.assoc = measure_associated(a, b, w, vals, cfg);
            c.candidate_id = candidate_id(a.mjd, a.window_index, a.bin_index, b.bin_index, cfg);
            out.push_back(std::move(c));
        }
    }
    return out;
}

}  // namespace pairscan
