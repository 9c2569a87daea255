#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "pairscan/first_level.hpp"
#include "pairscan/geometry.hpp"
#include "pairscan/rng.hpp"
#include "test_support.hpp"

using namespace pairscan;
using namespace pairscan::test;

namespace {

const InstrumentConfig kCfg{};

InstrumentConfig keep_all_cfg() {
    InstrumentConfig cfg;
    cfg.log10_pulse_snr_like_threshold = 0.0;
    cfg.log10_pair_snr_like_threshold = 0.0;
    return cfg;
}

// One-segment window with unit-power noise; bins can be pinned to an exact
// power/phase afterwards.
WindowSpectra noise_window(std::uint64_t seed, int n_segments = 1,
                           std::int64_t first_segment = 1466000) {
    WindowSpectra w;
    Rng rng(seed);
    for (int si = 0; si < n_segments; ++si) {
        SegmentSpectra seg;
        seg.segment_index = first_segment + si;
        seg.first_bin = seg.segment_index * 258;
        seg.east.resize(258);
        seg.west.resize(258);
        for (int i = 0; i < 258; ++i) {
            seg.east[static_cast<std::size_t>(i)] = rng.complex_gaussian(1.0);
            seg.west[static_cast<std::size_t>(i)] = rng.complex_gaussian(1.0);
        }
        w.segments.push_back(std::move(seg));
    }
    return w;
}

void pin_bin(WindowSpectra& w, std::size_t seg, std::size_t off, double snr_db_e,
             double snr_db_w, double phi_e = 0.3, double phi_w = 0.1) {
    w.segments[seg].east[off] = std::polar(std::sqrt(std::pow(10.0, snr_db_e / 10.0)), phi_e);
    w.segments[seg].west[off] = std::polar(std::sqrt(std::pow(10.0, snr_db_w / 10.0)), phi_w);
}

}  // namespace

TEST_CASE("channelizer recovers a bin-centered tone") {
    const int n = 256;
    std::vector<double> ts(static_cast<std::size_t>(n));
    for (int t = 0; t < n; ++t) {
        ts[static_cast<std::size_t>(t)] = std::cos(2.0 * M_PI * 37.0 * t / n);
    }
    const auto spec = channelize(ts, 256.0, 1.0);
    REQUIRE(spec.size() == 129);
    CHECK(std::abs(spec[37]) == doctest::Approx(n / 2.0).epsilon(1e-9));
    for (std::size_t k = 0; k < 129; ++k) {
        if (k == 37) continue;
        CHECK(std::abs(spec[k]) < 1e-6);
    }
    CHECK_THROWS(channelize(std::vector<double>(255), 256.0, 1.0));
}

TEST_CASE("channelizer scalloping for a half-bin tone") {
    const int n = 256;
    std::vector<double> ts(static_cast<std::size_t>(n));
    for (int t = 0; t < n; ++t) {
        ts[static_cast<std::size_t>(t)] = std::cos(2.0 * M_PI * 37.5 * t / n);
    }
    const auto spec = channelize(ts, 256.0, 1.0);
    // Dirichlet-kernel oracle at half-bin offset: |X| = 0.5 / sin(pi / 2N).
    const double oracle = 0.5 / std::sin(M_PI / (2.0 * n));
    CHECK(std::abs(spec[37]) == doctest::Approx(oracle).epsilon(0.02));
    CHECK(std::abs(spec[38]) == doctest::Approx(oracle).epsilon(0.02));
    CHECK(std::abs(spec[37]) == doctest::Approx(std::abs(spec[38])).epsilon(0.02));
    // 2/pi of the centered response.
    CHECK(std::abs(spec[37]) / (n / 2.0) == doctest::Approx(2.0 / M_PI).epsilon(0.02));
}

TEST_CASE("channelizer white-noise spectrum is flat") {
    const int n = 256;
    const int trials = 150;
    std::vector<double> acc(129, 0.0);
    Rng rng(3);
    for (int trial = 0; trial < trials; ++trial) {
        std::vector<double> ts(static_cast<std::size_t>(n));
        for (auto& x : ts) x = rng.gaussian();
        const auto spec = channelize(ts, 256.0, 1.0);
        for (std::size_t k = 0; k < spec.size(); ++k) acc[k] += std::norm(spec[k]);
    }
    double grand = 0.0;
    for (std::size_t k = 1; k < 128; ++k) grand += acc[k];
    grand /= 127.0;
    for (std::size_t k = 1; k < 128; ++k) {
        CHECK(acc[k] / grand > 0.65);
        CHECK(acc[k] / grand < 1.35);
    }
}

TEST_CASE("noise floor estimator convention") {
    // Constant input: median == p, so the estimate is p / ln 2.
    std::vector<double> flat(256, 2.0);
    CHECK(estimate_noise_floor(flat) == doctest::Approx(2.0 / M_LN2).epsilon(1e-12));
    CHECK_THROWS(estimate_noise_floor(std::vector<double>(15, 1.0)));
}

TEST_CASE("noise floor estimator is unbiased for exponential power") {
    Rng rng(17);
    std::vector<double> estimates;
    for (int trial = 0; trial < 2000; ++trial) {
        std::vector<double> powers(256);
        for (auto& p : powers) p = rng.exponential(1.0);
        estimates.push_back(estimate_noise_floor(powers));
    }
    CHECK(mean(estimates) == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("noise floor estimator shrugs off a huge outlier") {
    Rng rng(18);
    std::vector<double> powers(256);
    for (auto& p : powers) p = rng.exponential(1.0);
    const double base = estimate_noise_floor(powers);
    auto spiked = powers;
    spiked[100] = 1.0e6;
    CHECK(estimate_noise_floor(spiked) == doctest::Approx(base).epsilon(0.02));
}

TEST_CASE("dual-element threshold boundary") {
    WindowSpectra w = noise_window(5);
    for (auto& seg : w.segments) {
        for (auto& z : seg.east) z *= 1e-3;
        for (auto& z : seg.west) z *= 1e-3;
    }
    pin_bin(w, 0, 10, 8.6, 8.6);
    pin_bin(w, 0, 20, 9.0, 8.4);  // west below threshold
    const auto pulses = detect_pulses(w, 60500.0, 0, kCfg, FloorPolicy::kFixed, 1.0);
    REQUIRE(pulses.size() == 1);
    CHECK(pulses[0].bin_index == w.segments[0].first_bin + 10);
    CHECK(pulses[0].snr_db_east == doctest::Approx(8.6).epsilon(1e-9));
    CHECK(pulses[0].phase_east_rad == doctest::Approx(0.3).epsilon(1e-9));
    CHECK(pulses[0].segment_index == w.segments[0].segment_index);
}

TEST_CASE("AWGN detection rate follows the exponential tail") {
    InstrumentConfig cfg = keep_all_cfg();
    cfg.snr_threshold_db = 5.0;
    const double q = std::exp(-2.0 * cfg.snr_threshold_linear());
    std::int64_t hits = 0;
    const int windows = 2500;
    for (int i = 0; i < windows; ++i) {
        const WindowSpectra w = noise_window(static_cast<std::uint64_t>(i) + 1000);
        hits += static_cast<std::int64_t>(
            detect_pulses(w, 60500.0, 0, cfg, FloorPolicy::kFixed, 1.0).size());
    }
    const double expect = static_cast<double>(windows) * 258.0 * q;
    CHECK(std::abs(static_cast<double>(hits) - expect) <= 3.0 * std::sqrt(expect));
}

TEST_CASE("composite SNR likelihood values") {
    SUBCASE("pulses exactly at threshold score zero") {
        const auto v = snr_log_likelihoods(8.5, 8.5, 8.5, 8.5, kCfg);
        CHECK(v.pulse1 == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(v.pulse2 == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(v.pair == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("9.5 dB per element") {
        // Oracle: -2 (10^0.95 - 10^0.85) / ln 10.
        const double expected =
            -2.0 * (std::pow(10.0, 0.95) - std::pow(10.0, 0.85)) / M_LN10;
        const auto v = snr_log_likelihoods(9.5, 9.5, 8.5, 8.5, kCfg);
        CHECK(v.pulse1 == doctest::Approx(expected).epsilon(1e-9));
        CHECK(v.pulse1 == doctest::Approx(-1.59219).epsilon(1e-4));
        CHECK(v.pair == doctest::Approx(v.pulse1 + v.pulse2).epsilon(1e-12));
    }
    SUBCASE("below-threshold input violates the precondition") {
        CHECK_THROWS(snr_log_likelihoods(8.4, 8.6, 8.6, 8.6, kCfg));
    }
}

TEST_CASE("SNR-likelihood keep rules") {
    SnrLogLikelihoods strong{-2.0, -2.0, -4.0};
    SnrLogLikelihoods boundary{0.0, 0.0, 0.0};
    SnrLogLikelihoods weak{-1.0, -1.0, -2.0};

    InstrumentConfig floor_rule = kCfg;  // significance_floor default
    CHECK(passes_snr_likelihood(strong, floor_rule));
    CHECK_FALSE(passes_snr_likelihood(boundary, floor_rule));
    CHECK_FALSE(passes_snr_likelihood(weak, floor_rule));

    InstrumentConfig cap_rule = kCfg;
    cap_rule.snr_like_rule = SnrLikeRule::kImprobabilityCap;
    CHECK_FALSE(passes_snr_likelihood(strong, cap_rule));
    CHECK(passes_snr_likelihood(boundary, cap_rule));  // at threshold -> kept
    CHECK(passes_snr_likelihood(weak, cap_rule));
    CHECK_FALSE(passes_snr_likelihood({-2.0, -1.0, -3.0}, cap_rule));  // -2.0 < -1.60
}

TEST_CASE("pair formation combinatorics") {
    const InstrumentConfig cfg = keep_all_cfg();
    WindowSpectra w = noise_window(6, 4, 378000000 / 258);
    auto mk = [&](std::size_t seg, std::size_t off) {
        PulseDetection p;
        p.mjd = 60500.0;
        p.window_index = 0;
        p.bin_index = w.segments[seg].first_bin + static_cast<std::int64_t>(off);
        p.freq_hz = static_cast<double>(p.bin_index) * cfg.fft_bin_hz;
        p.segment_index = w.segments[seg].segment_index;
        p.snr_db_east = p.snr_db_west = 12.0;
        return p;
    };

    SUBCASE("two pulses ~52 Hz apart give one pair") {
        const auto pairs = form_pairs({mk(0, 10), mk(0, 24)}, w, cfg);
        REQUIRE(pairs.size() == 1);
        CHECK(pairs[0].delta_f_hz == doctest::Approx(14 * 3.7).epsilon(1e-6));
        CHECK(pairs[0].pulse1.bin_index < pairs[0].pulse2.bin_index);
        CHECK(pairs[0].assoc.rf_low_freq_hz == doctest::Approx(pairs[0].pulse1.freq_hz));
    }
    SUBCASE("three mutually-in-range pulses give three pairs") {
        CHECK(form_pairs({mk(0, 10), mk(0, 24), mk(1, 40)}, w, cfg).size() == 3);
    }
    SUBCASE("8 MHz spacing is out of range") {
        WindowSpectra wide = noise_window(7, 1, 378000000 / 258);
        SegmentSpectra far = wide.segments[0];
        far.segment_index += 8400;  // ~8 MHz away
        far.first_bin = far.segment_index * 258;
        wide.segments.push_back(far);
        PulseDetection other;
        other.mjd = 60500.0;
        other.window_index = 0;
        other.bin_index = wide.segments[1].first_bin + 5;
        other.freq_hz = static_cast<double>(other.bin_index) * cfg.fft_bin_hz;
        other.segment_index = wide.segments[1].segment_index;
        other.snr_db_east = other.snr_db_west = 12.0;
        PulseDetection near = other;
        near.bin_index = wide.segments[0].first_bin + 10;
        near.freq_hz = static_cast<double>(near.bin_index) * cfg.fft_bin_hz;
        near.segment_index = wide.segments[0].segment_index;
        CHECK(form_pairs({near, other}, wide, cfg).empty());
    }
    SUBCASE("sub-minimum spacing is out of range") {
        InstrumentConfig narrow = cfg;
        narrow.delta_f_range_hz = {100.0, 7.0e6};
        CHECK(form_pairs({mk(0, 10), mk(0, 24)}, w, narrow).empty());
    }
}

TEST_CASE("delta-f likelihood") {
    CHECK(delta_f_log_likelihood(50.0, 1e-5) == doctest::Approx(-3.000217).epsilon(1e-4));
    CHECK(delta_f_log_likelihood(1e12, 1e-5) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(std::isinf(delta_f_log_likelihood(0.0, 1e-5)));
    CHECK(delta_f_log_likelihood(0.0, 1e-5) < 0);
    CHECK(std::isinf(delta_f_log_likelihood(50.0, 0.0)));
}

TEST_CASE("visibility of identical elements is the total power") {
    WindowSpectra w = noise_window(8);
    for (auto& seg : w.segments) seg.west = seg.east;
    const auto v = fx_visibility(w, 0.0, kCfg);
    double total = 0.0;
    for (const auto& seg : w.segments) total += segment_power(seg, true);
    CHECK(v.real() == doctest::Approx(total).epsilon(1e-12));
    CHECK(v.imag() == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("visibility of independent noise is small") {
    double sum_ratio = 0.0;
    const int trials = 200;
    for (int i = 0; i < trials; ++i) {
        const WindowSpectra w = noise_window(static_cast<std::uint64_t>(i) + 50);
        const double p = segment_power(w.segments[0], true);
        sum_ratio += std::abs(fx_visibility(w, 0.0, kCfg)) / p;
    }
    CHECK(sum_ratio / trials < 3.0 / std::sqrt(258.0));
}

TEST_CASE("visibility conjugates when elements swap") {
    WindowSpectra w = noise_window(9, 3);
    WindowSpectra swapped = w;
    for (auto& seg : swapped.segments) std::swap(seg.east, seg.west);
    swapped.wideband_correlated = std::conj(w.wideband_correlated);
    for (double tau : {0.0, -82e-9, 13e-9}) {
        const auto v = fx_visibility(w, tau, kCfg);
        const auto vs = fx_visibility(swapped, -tau, kCfg);
        CHECK(vs.real() == doctest::Approx(v.real()).epsilon(1e-12));
        CHECK(vs.imag() == doctest::Approx(-v.imag()).epsilon(1e-12));
    }
}

TEST_CASE("visibility phase tracks the applied delay for a correlated band") {
    WindowSpectra w = noise_window(10);
    for (auto& seg : w.segments) seg.west = seg.east;  // fully correlated
    const double f_center = (w.segments[0].first_bin + 129) * kCfg.fft_bin_hz;
    for (double tau : {1e-9, 5e-9, -3e-9}) {
        const auto v = fx_visibility(w, tau, kCfg);
        CHECK(wrap_phase(std::arg(v) + 2.0 * M_PI * f_center * tau) ==
              doctest::Approx(0.0).epsilon(1e-3));
    }
    WindowSpectra strong = w;
    for (auto& seg : strong.segments) {
        for (auto& z : seg.east) z *= 3.0;
        for (auto& z : seg.west) z *= 3.0;
    }
    CHECK(std::abs(fx_visibility(strong, 1e-9, kCfg)) >
          8.0 * std::abs(fx_visibility(w, 1e-9, kCfg)));
}

TEST_CASE("associated measurements on a noise window") {
    double p954 = 0.0;
    int n = 0;
    for (int i = 0; i < 200; ++i) {
        WindowSpectra w = noise_window(static_cast<std::uint64_t>(i) + 900);
        PulseDetection p1, p2;
        p1.segment_index = p2.segment_index = w.segments[0].segment_index;
        p1.freq_hz = static_cast<double>(w.segments[0].first_bin) * 3.7;
        p2.freq_hz = p1.freq_hz + 370.0;
        const auto a = measure_associated(p1, p2, w, {0, 0, 0}, kCfg);
        p954 += a.east_power_954;
        ++n;
    }
    // Sum of 258 unit-mean exponentials.
    CHECK(p954 / n == doctest::Approx(258.0).epsilon(0.05));
}

TEST_CASE("a narrow tone pair does not light up the wideband visibility") {
    // The 50 MHz band's own cross-power fluctuation sets the null level; a
    // 15 dB tone pair is buried in it.
    const double k_wide = std::floor(kCfg.wideband_bandwidth_hz / kCfg.fft_bin_hz);
    WindowSpectra null_w = noise_window(400);
    null_w.wideband_correlated = {std::sqrt(k_wide), 0.0};
    WindowSpectra tone_w = noise_window(400);
    tone_w.wideband_correlated = null_w.wideband_correlated;
    pin_bin(tone_w, 0, 50, 15.0, 15.0);
    pin_bin(tone_w, 0, 90, 15.0, 15.0);
    const double null_db = visibility_mag_db(fx_visibility(null_w, kCfg.tau_inst_s, kCfg));
    const double tone_db = visibility_mag_db(fx_visibility(tone_w, kCfg.tau_inst_s, kCfg));
    CHECK(std::abs(tone_db - null_db) < 2.0);
}

TEST_CASE("simulated AWGN visibility stays below the CLT bound on the wide band") {
    Scenario s;
    s.mjd_ranges = {{60500.0, 60500.02}};
    s.seed = 23;
    s.background_segments_per_window = 2;
    const double k_wide =
        std::floor(s.config.wideband_bandwidth_hz / s.config.fft_bin_hz);
    double vis_sum = 0.0, power_sum = 0.0;
    int n = 0;
    generate_run(s, [&](const TriggerFrame& f) {
        for (const auto& w : f.windows) {
            vis_sum += std::abs(fx_visibility(w, 0.0, s.config));
            power_sum += w.wideband_power_east;
            ++n;
        }
    });
    REQUIRE(n > 100);
    CHECK(vis_sum / power_sum < 3.0 / std::sqrt(k_wide));
}

TEST_CASE("per-window pair counts match the exponential-tail prediction") {
    InstrumentConfig cfg = keep_all_cfg();
    cfg.snr_threshold_db = 4.5;
    const double q = std::exp(-2.0 * cfg.snr_threshold_linear());
    const double predicted = 258.0 * 257.0 / 2.0 * q * q;

    const int windows = 12000;
    std::vector<double> counts;
    counts.reserve(static_cast<std::size_t>(windows));
    for (int i = 0; i < windows; ++i) {
        const WindowSpectra w = noise_window(static_cast<std::uint64_t>(i) + 5000);
        const auto pulses = detect_pulses(w, 60500.0, 0, cfg, FloorPolicy::kFixed, 1.0);
        counts.push_back(static_cast<double>(form_pairs(pulses, w, cfg).size()));
    }
    const double m = mean(counts);
    const double se = std::sqrt(variance(counts) / windows);
    CHECK(std::abs(m - predicted) <= 3.0 * se + 1e-6);
}

TEST_CASE("emitted candidates satisfy their structural invariants") {
    Scenario s;
    s.name = "invariants";
    s.seed = 77;
    s.background_segments_per_window = 2;
    s.mjd_ranges = {{60500.0, 60500.05}};
    s.config.snr_threshold_db = 4.0;  // populate
    s.config.log10_pulse_snr_like_threshold = 0.0;
    s.config.log10_pair_snr_like_threshold = 0.0;
    s.config.lst_ref_mjd = 60500.0;

    int checked = 0;
    generate_run(s, [&](const TriggerFrame& f) {
        for (int wi = 0; wi < static_cast<int>(f.windows.size()); ++wi) {
            const auto& w = f.windows[static_cast<std::size_t>(wi)];
            const auto pulses = detect_pulses(w, f.mjd, wi, s.config);
            for (const auto& c : form_pairs(pulses, w, s.config)) {
                CHECK(c.delta_f_hz >= s.config.delta_f_range_hz.first);
                CHECK(c.delta_f_hz <= s.config.delta_f_range_hz.second);
                CHECK(c.pulse1.bin_index < c.pulse2.bin_index);
                CHECK(freq_in_rf_ranges(c.pulse1.freq_hz, s.config));
                CHECK(freq_in_rf_ranges(c.pulse2.freq_hz, s.config));
                CHECK(c.assoc.rfi_spectral_margin_segments >= 0.0);
                CHECK(std::isfinite(c.assoc.east_power_954));
                CHECK(std::isfinite(c.assoc.visibility_mag_db_rel));
                CHECK(c.pulse1.phase_east_rad > -M_PI);
                CHECK(c.pulse1.phase_east_rad <= M_PI);
                ++checked;
            }
        }
    });
    CHECK(checked > 20);
}
