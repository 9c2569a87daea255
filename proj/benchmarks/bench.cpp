#include <benchmark/benchmark.h>

#include "pairscan/first_level.hpp"
#include "pairscan/geometry.hpp"
#include "pairscan/second_level.hpp"
#include "pairscan/simulator.hpp"

using namespace pairscan;

static void BM_WrapPhase(benchmark::State& state) {
    double x = 0.0;
    for (auto _ : state) {
        x += 1.7;
        benchmark::DoNotOptimize(wrap_phase(x));
    }
}
BENCHMARK(BM_WrapPhase);

static void BM_SynthesizeWindow(benchmark::State& state) {
    Scenario s;
    s.mjd_ranges = {{60500.0, 60501.0}};
    s.background_segments_per_window = static_cast<int>(state.range(0));
    std::int64_t frame = 0;
    for (auto _ : state) {
        Rng rng = Rng::for_stream(s.seed, static_cast<std::uint64_t>(frame++), 0, 0x51);
        auto w = synthesize_window(s, 60500.0, 12.0, 0, rng);
        benchmark::DoNotOptimize(w);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0) * 258);
}
BENCHMARK(BM_SynthesizeWindow)->Arg(1)->Arg(4)->Arg(16);

static void BM_DetectPulses(benchmark::State& state) {
    Scenario s;
    s.mjd_ranges = {{60500.0, 60501.0}};
    s.background_segments_per_window = 8;
    Rng rng = Rng::for_stream(s.seed, 0, 0, 0x51);
    const auto w = synthesize_window(s, 60500.0, 12.0, 0, rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(detect_pulses(w, 60500.0, 0, s.config));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(w.bin_count()));
}
BENCHMARK(BM_DetectPulses);

static void BM_FxVisibility(benchmark::State& state) {
    Scenario s;
    s.mjd_ranges = {{60500.0, 60501.0}};
    s.background_segments_per_window = 8;
    Rng rng = Rng::for_stream(s.seed, 0, 0, 0x51);
    const auto w = synthesize_window(s, 60500.0, 12.0, 0, rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(fx_visibility(w, s.config.tau_inst_s, s.config));
    }
}
BENCHMARK(BM_FxVisibility);

static void BM_CohensDStream(benchmark::State& state) {
    const InstrumentConfig cfg;
    ExposureModel exposure;
    exposure.exposure_s.assign(3200, 1.0);
    exposure.p.assign(3200, 1.0 / 3200.0);
    exposure.total_s = 3200.0;

    std::vector<AnalyzedEvent> events(static_cast<std::size_t>(state.range(0)));
    Rng rng(5);
    for (auto& ev : events) {
        ev.ra_bin = static_cast<int>(rng.uniform_int(3200));
        ev.d_df_d_ew_phi = rng.uniform(-0.8, 0.8);
        ev.mjd = 60500.0 + rng.uniform01();
        ev.candidate_id = rng.next_u64();
    }
    for (auto _ : state) {
        auto heap = build_sorted_heap(events);
        cohens_d_stream(heap, exposure);
        benchmark::DoNotOptimize(heap);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CohensDStream)->Arg(13718)->Arg(100000);

BENCHMARK_MAIN();
