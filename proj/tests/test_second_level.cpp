#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "pairscan/geometry.hpp"
#include "pairscan/rng.hpp"
#include "pairscan/second_level.hpp"
#include "pairscan/simulator.hpp"
#include "test_support.hpp"

using namespace pairscan;
using namespace pairscan::test;

namespace {

const InstrumentConfig kCfg{};

ExposureModel uniform_exposure(int bins = 3200) {
    ExposureModel m;
    m.exposure_s.assign(static_cast<std::size_t>(bins), 1.0);
    m.p.assign(static_cast<std::size_t>(bins), 1.0 / bins);
    m.total_s = bins;
    return m;
}

// A candidate whose east phases encode exact direction residuals for the
// pointing bin containing beam_ra(mjd).
PulsePairCandidate residual_candidate(const InstrumentConfig& cfg, double mjd,
                                      double res1, double res2,
                                      double f1 = 1400.0002e6, double f2 = 1401.2e6) {
    PulsePairCandidate c;
    const double beam = beam_ra_at(mjd, cfg);
    const int k0 = ra_bin_of(beam, cfg);
    const double h = hour_angle_rad(beam, bin_center_ra_hr(k0, cfg));
    c.pulse1.mjd = c.pulse2.mjd = mjd;
    c.pulse1.freq_hz = f1;
    c.pulse2.freq_hz = f2;
    c.pulse1.bin_index = std::llround(f1 / cfg.fft_bin_hz);
    c.pulse2.bin_index = std::llround(f2 / cfg.fft_bin_hz);
    c.pulse1.phase_west_rad = 0.2;
    c.pulse2.phase_west_rad = -0.4;
    c.pulse1.phase_east_rad =
        wrap_phase(0.2 + expected_ew_phase(f1, h, cfg) + res1);
    c.pulse2.phase_east_rad =
        wrap_phase(-0.4 + expected_ew_phase(f2, h, cfg) + res2);
    c.delta_f_hz = std::abs(f2 - f1);
    c.candidate_id = static_cast<std::uint64_t>(std::llround(mjd * 1e6)) ^
                     static_cast<std::uint64_t>(std::llround((res1 + 4) * 1e9));
    return c;
}

}  // namespace

TEST_CASE("exposure of a full sidereal rotation is nearly uniform") {
    InstrumentConfig cfg;
    cfg.lst_ref_mjd = 60500.0;
    const double sidereal_day = 1.0 / kSiderealRate;
    const auto m = build_exposure({{60500.0, 60500.0 + sidereal_day}}, cfg);

    double sum = 0.0;
    for (double p : m.p) sum += p;
    CHECK(std::abs(sum - 1.0) <= 1e-12);
    // Trigger quantization leaves each bin with 8 or 9 triggers of exposure.
    for (double p : m.p) {
        CHECK(p > 0.7 / 3200.0);
        CHECK(p < 1.3 / 3200.0);
    }
}

TEST_CASE("exposure of a partial arc covers only the swept bins") {
    InstrumentConfig cfg;
    cfg.lst_ref_mjd = 60500.0;
    cfg.lst_ref_lst_hr = 6.0;
    const auto m = build_exposure({{60500.0, 60500.1}}, cfg);  // ~2.4 hr arc
    std::int64_t covered = 0;
    for (double p : m.p) covered += p > 0.0;
    CHECK(covered > 300);
    CHECK(covered < 340);
    CHECK(m.p[ra_bin_of(6.5, cfg)] > 0.0);
    CHECK(m.p[ra_bin_of(12.0, cfg)] == 0.0);
}

TEST_CASE("zero total exposure raises") {
    InstrumentConfig cfg;
    CHECK_THROWS(build_exposure({{60500.0, 60500.00001}}, cfg));
}

TEST_CASE("sun-masked exposure equals the trigger-counting oracle") {
    InstrumentConfig cfg;
    cfg.lst_ref_mjd = 60538.0;
    cfg.sun_mjd_min = 60540.0;
    SunEphemeris eph;
    eph.rows = {{60538.0, 3.0, 0.0}, {60544.0, 3.3, 0.0}};
    ExcisionRegion region;
    region.kind = ExcisionRegion::Kind::kSun;
    region.ra_halfwidth_hr = cfg.sun_ra_halfwidth_hr;
    region.mjd_min = cfg.sun_mjd_min;

    const std::vector<std::pair<double, double>> ranges = {{60538.0, 60544.0}};
    const auto model = build_exposure(ranges, cfg, {region}, &eph);

    // Independent per-trigger scan with the analytic linear ephemeris.
    std::vector<double> oracle(3200, 0.0);
    const double t0 = 60538.0;
    const std::int64_t n =
        static_cast<std::int64_t>(std::floor(6.0 * 86400.0 / 3.0 + 1e-9));
    for (std::int64_t i = 0; i < n; ++i) {
        double mjd = t0 + i * 3.0 / 86400.0;
        mjd = std::round(mjd * 345600.0) / 345600.0;
        const double beam = beam_ra_at(mjd, LstReference{60538.0, 0.0});
        const double sun_ra = 3.0 + 0.05 * (mjd - 60538.0);
        if (mjd > 60540.0 && std::abs(circ_delta_hr(beam, sun_ra)) < 1.0) continue;
        oracle[static_cast<std::size_t>(ra_bin_of(beam, cfg))] += 3.0;
    }
    double oracle_total = 0.0;
    for (double e : oracle) oracle_total += e;

    REQUIRE(model.exposure_s.size() == oracle.size());
    for (std::size_t k = 0; k < oracle.size(); ++k) {
        const double diff = std::abs(model.exposure_s[k] - oracle[k]);
        CHECK(diff <= 1e-9 * std::max(1.0, oracle[k]));
    }
    CHECK(model.total_s == doctest::Approx(oracle_total).epsilon(1e-12));

    // The dip is real: bins under the Sun after mjd_min lost exposure.
    const int sun_bin = ra_bin_of(3.2, cfg);
    const int far_bin = ra_bin_of(15.0, cfg);
    CHECK(model.exposure_s[static_cast<std::size_t>(sun_bin)] <
          0.8 * model.exposure_s[static_cast<std::size_t>(far_bin)]);
}

TEST_CASE("exposure normalization holds under every mask combination") {
    InstrumentConfig cfg;
    cfg.lst_ref_mjd = 60538.0;
    SunEphemeris eph;
    eph.rows = {{60538.0, 3.0, 0.0}, {60544.0, 3.3, 0.0}};
    ExcisionRegion sun;
    sun.ra_halfwidth_hr = 1.0;
    sun.mjd_min = 60540.0;
    ExcisionRegion manual;
    manual.kind = ExcisionRegion::Kind::kManual;
    manual.manual_ra_center_hr = 10.0;
    manual.ra_halfwidth_hr = 0.5;
    manual.mjd_min = 0.0;

    const std::vector<std::vector<ExcisionRegion>> mask_sets = {
        {}, {sun}, {manual}, {sun, manual}};
    for (const auto& masks : mask_sets) {
        const auto m = build_exposure({{60538.0, 60544.0}}, cfg, masks, &eph);
        double sum = 0.0;
        for (double p : m.p) sum += p;
        CHECK(std::abs(sum - 1.0) <= 1e-12);
    }
}

TEST_CASE("phase filters accept and reject on the stated windows") {
    InstrumentConfig cfg;
    cfg.lst_ref_mjd = 60500.0;
    const PhaseFilterOptions opts = default_phase_options(cfg);
    const double mjd = 60500.3;

    SUBCASE("inside all windows") {
        const auto events =
            apply_phase_filters({residual_candidate(cfg, mjd, 0.05, 0.03)}, cfg, opts);
        REQUIRE(events.size() == 1);
        CHECK(events[0].d_ew_phi_1 == doctest::Approx(0.05).epsilon(1e-9));
        CHECK(events[0].d_ew_phi_2 == doctest::Approx(0.03).epsilon(1e-9));
        CHECK(events[0].d_df_d_ew_phi == doctest::Approx(-0.02).epsilon(1e-9));
        CHECK(events[0].ra_bin ==
              ra_bin_of(beam_ra_at(mjd, cfg), cfg));
    }
    SUBCASE("per-pulse window rejects") {
        CHECK(apply_phase_filters({residual_candidate(cfg, mjd, 0.20, 0.00)}, cfg, opts)
                  .empty());
    }
    SUBCASE("pair window rejects") {
        PhaseFilterOptions wide = opts;
        wide.ew_halfwidth_rad = 2.0;
        CHECK(apply_phase_filters({residual_candidate(cfg, mjd, 0.9, -0.5)}, cfg, wide)
                  .empty());  // |ddf| = 1.4 > 0.8
    }
    SUBCASE("modified band accepts the complement") {
        PhaseFilterOptions modified = opts;
        modified.ew_halfwidth_rad = M_PI;
        modified.ddf_lo_rad = 0.8;
        modified.ddf_hi_rad = M_PI;
        CHECK(apply_phase_filters({residual_candidate(cfg, mjd, 0.9, -0.5)}, cfg,
                                  modified)
                  .size() == 1);
        CHECK(apply_phase_filters({residual_candidate(cfg, mjd, 0.05, 0.03)}, cfg,
                                  modified)
                  .empty());
    }
}

TEST_CASE("widening either phase window never shrinks the kept set") {
    InstrumentConfig cfg;
    cfg.lst_ref_mjd = 60500.0;
    Rng rng(4);
    std::vector<PulsePairCandidate> cands;
    for (int i = 0; i < 4000; ++i) {
        PulsePairCandidate c = residual_candidate(
            cfg, 60500.0 + rng.uniform01(), rng.uniform_phase(), rng.uniform_phase());
        c.candidate_id = static_cast<std::uint64_t>(i);
        cands.push_back(c);
    }
    PhaseFilterOptions base = default_phase_options(cfg);
    PhaseFilterOptions wider = base;
    wider.ew_halfwidth_rad = 0.25;
    wider.ddf_hi_rad = 1.6;

    auto ids = [&](const PhaseFilterOptions& o) {
        std::set<std::uint64_t> s;
        for (const auto& ev : apply_phase_filters(cands, cfg, o)) s.insert(ev.candidate_id);
        return s;
    };
    const auto base_ids = ids(base);
    const auto wide_ids = ids(wider);
    CHECK(wide_ids.size() > base_ids.size());
    for (auto id : base_ids) CHECK(wide_ids.count(id) == 1);
}

TEST_CASE("high-SNR coherent candidates pass at the true bin") {
    // Simulated source at a bin center; candidates carry real noise scatter.
    Scenario s;
    s.name = "pass-rate";
    s.seed = 60;
    s.background_segments_per_window = 1;
    s.config.lst_ref_mjd = 60500.0;
    s.config.log10_pulse_snr_like_threshold = 0.0;
    s.config.log10_pair_snr_like_threshold = 0.0;
    const int bin = ra_bin_of(0.05, s.config);
    SourceSpec src;
    src.ra_hr = bin_center_ra_hr(bin, s.config);
    src.dec_deg = s.config.dec_deg;
    src.tone_pairs = {{1400.0002e6, 1401.2e6}};
    src.snr_db_at_transit = 30.0;
    src.emission_probability_per_window = 1.0;
    s.sources = {src};
    s.mjd_ranges = {{60500.0, 60500.01}};

    std::vector<PulsePairCandidate> cands;
    std::int64_t in_bin_windows = 0;
    generate_run(s, [&](const TriggerFrame& f) {
        if (ra_bin_of(f.beam_ra_hr, s.config) != bin) return;
        for (int wi = 0; wi < static_cast<int>(f.windows.size()); ++wi) {
            ++in_bin_windows;
            const auto& w = f.windows[static_cast<std::size_t>(wi)];
            const auto pulses = detect_pulses(w, f.mjd, wi, s.config);
            const auto pairs = form_pairs(pulses, w, s.config);
            cands.insert(cands.end(), pairs.begin(), pairs.end());
        }
    });
    REQUIRE(in_bin_windows >= 10);
    const auto events =
        apply_phase_filters(cands, s.config, default_phase_options(s.config));
    std::int64_t at_bin = 0;
    std::int64_t alias_flags = 0;
    for (const auto& ev : events) {
        at_bin += ev.ra_bin == bin;
        alias_flags += ev.alias_minus_pass || ev.alias_plus_pass;
    }
    CHECK(static_cast<double>(at_bin) / static_cast<double>(in_bin_windows) > 0.9);
    // The one-wavelength delay ambiguity: for tones in the lower band a good
    // fraction of true-bin events also satisfy the +/-16-bin hypotheses.
    CHECK(alias_flags > 0);
}

TEST_CASE("heap ordering and deterministic ties") {
    std::vector<AnalyzedEvent> events(4);
    events[0].d_df_d_ew_phi = 0.5;
    events[0].mjd = 60500.0;
    events[1].d_df_d_ew_phi = -0.1;
    events[1].mjd = 60500.1;
    events[2].d_df_d_ew_phi = 0.3;
    events[2].mjd = 60500.2;
    events[3].d_df_d_ew_phi = -0.3;  // tie on |value| with events[2], earlier mjd
    events[3].mjd = 60500.15;
    for (std::size_t i = 0; i < events.size(); ++i) {
        events[i].candidate_id = i;
        events[i].ra_bin = static_cast<int>(i);
    }
    const auto heap = build_sorted_heap(events);
    REQUIRE(heap.size() == 4);
    CHECK(heap[0].abs_ddf_phase == doctest::Approx(0.1));
    CHECK(heap[1].candidate_id == 3);  // mjd tie-break
    CHECK(heap[2].candidate_id == 2);
    CHECK(heap[3].abs_ddf_phase == doctest::Approx(0.5));
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(heap[i].rank == static_cast<std::int64_t>(i) + 1);
        if (i) CHECK(heap[i].abs_ddf_phase >= heap[i - 1].abs_ddf_phase);
    }
}

TEST_CASE("effect size stream values") {
    const auto exposure = uniform_exposure();
    SUBCASE("first record of the heap") {
        std::vector<AnalyzedEvent> events(1);
        events[0].ra_bin = 77;
        auto heap = build_sorted_heap(events);
        cohens_d_stream(heap, exposure);
        // (1 - p) / sqrt(p (1 - p)) with p = 1/3200.
        CHECK(heap[0].cohens_d == doctest::Approx(56.5597).epsilon(1e-4));
        CHECK(heap[0].null_z == 0.0);
    }
    SUBCASE("sixteen-count bin at rank 13718") {
        std::vector<AnalyzedEvent> events(13718);
        Rng rng(2);
        for (std::size_t i = 0; i < events.size(); ++i) {
            events[i].d_df_d_ew_phi = 1e-6 * static_cast<double>(i);
            events[i].mjd = 60500.0 + 1e-6 * static_cast<double>(i);
            events[i].candidate_id = i;
            if (i >= events.size() - 16) {
                events[i].ra_bin = 1178;
            } else {
                events[i].ra_bin = static_cast<int>(rng.uniform_int(3200));
                if (events[i].ra_bin == 1178) events[i].ra_bin = 1179;
            }
        }
        auto heap = build_sorted_heap(events);
        cohens_d_stream(heap, exposure);
        const auto& last = heap.back();
        CHECK(last.rank == 13718);
        CHECK(last.cum_count == 16);
        CHECK(last.cohens_d == doctest::Approx(5.658).epsilon(1e-3));
    }
    SUBCASE("count at expectation gives d = 0") {
        // 3200 events, one per bin: the final record sits exactly at n p.
        std::vector<AnalyzedEvent> events(3200);
        for (std::size_t i = 0; i < events.size(); ++i) {
            events[i].ra_bin = static_cast<int>(i);
            events[i].d_df_d_ew_phi = 1e-6 * static_cast<double>(i);
            events[i].mjd = 60500.0;
            events[i].candidate_id = i;
        }
        auto heap = build_sorted_heap(events);
        cohens_d_stream(heap, exposure);
        CHECK(heap.back().cohens_d == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("event in an unobserved bin raises") {
        ExposureModel holed = uniform_exposure();
        holed.p[5] = 0.0;
        std::vector<AnalyzedEvent> events(1);
        events[0].ra_bin = 5;
        auto heap = build_sorted_heap(events);
        CHECK_THROWS(cohens_d_stream(heap, holed));
    }
}

TEST_CASE("streamed effect size equals from-scratch recomputation") {
    const auto exposure = uniform_exposure();
    Rng rng(9);
    std::vector<AnalyzedEvent> events(2000);
    for (std::size_t i = 0; i < events.size(); ++i) {
        events[i].ra_bin = static_cast<int>(rng.uniform_int(3200));
        events[i].d_df_d_ew_phi = rng.uniform(-0.8, 0.8);
        events[i].mjd = 60500.0 + rng.uniform01();
        events[i].candidate_id = i;
    }
    auto heap = build_sorted_heap(events);
    cohens_d_stream(heap, exposure);

    for (std::size_t n = 1; n <= heap.size(); n += 97) {
        std::int64_t c = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (heap[j].ra_bin == heap[n - 1].ra_bin) ++c;
        }
        const double p = exposure.p[static_cast<std::size_t>(heap[n - 1].ra_bin)];
        const double expect = (static_cast<double>(c) - static_cast<double>(n) * p) /
                              std::sqrt(static_cast<double>(n) * p * (1 - p));
        CHECK(heap[n - 1].cohens_d == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("prior-count z is centered under a uniform null") {
    const auto exposure = uniform_exposure();
    Rng rng(10);
    std::vector<AnalyzedEvent> events(20000);
    for (std::size_t i = 0; i < events.size(); ++i) {
        events[i].ra_bin = static_cast<int>(rng.uniform_int(3200));
        events[i].d_df_d_ew_phi = rng.uniform(0.0, 0.8);
        events[i].mjd = 60500.0 + rng.uniform01();
        events[i].candidate_id = i;
    }
    auto heap = build_sorted_heap(events);
    cohens_d_stream(heap, exposure);
    std::vector<double> zs;
    for (const auto& h : heap) zs.push_back(h.null_z);
    CHECK(std::abs(mean(zs)) < 0.05);
    // The inclusive statistic is positively biased by construction.
    std::vector<double> ds;
    for (const auto& h : heap) ds.push_back(h.cohens_d);
    CHECK(mean(ds) > 0.3);
}

TEST_CASE("direction-of-interest detection") {
    auto make_heap = [](const std::vector<std::pair<int, double>>& bin_d) {
        std::vector<HeapRecord> heap;
        for (std::size_t i = 0; i < bin_d.size(); ++i) {
            HeapRecord h;
            h.rank = static_cast<std::int64_t>(i) + 1;
            h.ra_bin = bin_d[i].first;
            h.cohens_d = bin_d[i].second;
            heap.push_back(h);
        }
        return heap;
    };

    SUBCASE("sustained concentration qualifies; a lone outlier does not") {
        std::vector<std::pair<int, double>> rows;
        rows.push_back({100, 56.0});  // sporadic top-of-heap outlier
        for (int i = 0; i < 12; ++i) rows.push_back({900, 5.0});
        const auto dois = detect_dois(make_heap(rows), kCfg);
        REQUIRE(dois.size() == 1);
        CHECK(dois[0].central_bin == 900);
        CHECK(dois[0].count == 12);
        CHECK(dois[0].median_d == doctest::Approx(5.0));
    }
    SUBCASE("low-d contamination disqualifies") {
        std::vector<std::pair<int, double>> rows;
        for (int i = 0; i < 8; ++i) rows.push_back({900, 5.0});
        for (int i = 0; i < 2; ++i) rows.push_back({900, -1.0});
        CHECK(detect_dois(make_heap(rows), kCfg).empty());
    }
    SUBCASE("adjacent bins merge") {
        std::vector<std::pair<int, double>> rows;
        for (int i = 0; i < 5; ++i) rows.push_back({900, 5.0});
        for (int i = 0; i < 4; ++i) rows.push_back({901, 4.0});
        const auto dois = detect_dois(make_heap(rows), kCfg);
        REQUIRE(dois.size() == 1);
        CHECK(dois[0].merged_count == 9);
        CHECK((dois[0].central_bin == 900 || dois[0].central_bin == 901));
    }
    SUBCASE("alias-bin support is reported") {
        std::vector<std::pair<int, double>> rows;
        for (int i = 0; i < 12; ++i) rows.push_back({900, 5.0});
        for (int i = 0; i < 3; ++i) rows.push_back({916, 4.0});
        for (int i = 0; i < 2; ++i) rows.push_back({884, 4.5});
        const auto dois = detect_dois(make_heap(rows), kCfg);
        REQUIRE(dois.size() == 1);
        CHECK(dois[0].alias_hi_count == 3);
        CHECK(dois[0].alias_lo_count == 2);
        CHECK(dois[0].alias_hi_max_d == doctest::Approx(4.0));
        CHECK(dois[0].alias_lo_max_d == doctest::Approx(4.5));
    }
    SUBCASE("a strong alias cluster folds into the central direction") {
        std::vector<std::pair<int, double>> rows;
        for (int i = 0; i < 12; ++i) rows.push_back({900, 5.0});
        for (int i = 0; i < 9; ++i) rows.push_back({915, 4.0});  // alias shoulder
        const auto dois = detect_dois(make_heap(rows), kCfg);
        REQUIRE(dois.size() == 1);
        CHECK(dois[0].central_bin == 900);
        CHECK(dois[0].alias_lo_count == 0);
        CHECK(dois[0].alias_hi_count == 9);  // 916 +/- 1 covers 915
    }
}

TEST_CASE("bayes update") {
    CHECK(bayes_update(0.5, 1.0, 0.5) == doctest::Approx(1.0));
    CHECK(bayes_update(0.01, 0.9, 0.5) == doctest::Approx(0.018));
    CHECK(bayes_update(0.37, 0.5, 0.5) == doctest::Approx(0.37));
    CHECK_THROWS(bayes_update(0.9, 0.9, 0.5));   // implied conditional > 1
    CHECK_THROWS(bayes_update(0.0, 0.5, 0.5));
    CHECK_THROWS(bayes_update(0.5, 0.5, 1.5));
}

TEST_CASE("photon budget per spectral cell") {
    CHECK(photon_count(290.0, 1.425e9) == doctest::Approx(4240.4).epsilon(2e-4));
    CHECK(photon_count(290.0, 1.425e9) > 3.8e3);
    CHECK(photon_count(290.0, 1.425e9) < 4.6e3);
    CHECK(photon_count(580.0, 1.425e9) ==
          doctest::Approx(2.0 * photon_count(290.0, 1.425e9)).epsilon(1e-12));
    CHECK(photon_count(290.0, 2.85e9) == doctest::Approx(2120.2).epsilon(2e-4));
    CHECK_THROWS(photon_count(0.0001, 1.425e9));  // h nu << k T violated
    CHECK_THROWS(photon_count(-1.0, 1.425e9));
}
