#ifndef PAIRSCAN_PIPELINE_HPP
#define PAIRSCAN_PIPELINE_HPP

#include <optional>
#include <string>
#include <vector>

#include "pairscan/io.hpp"

namespace pairscan {

struct RunOptions {
    int workers = 1;
    bool keep_windows = true;     // window records (frames file content)
    bool keep_pulses = false;     // full single-pulse records
    // When set, only candidates passing these direction filters are retained
    // (long calibration runs would not fit in memory otherwise). RFI segment
    // counts always accumulate from the full detection stream.
    std::optional<PhaseFilterOptions> inline_filter;
};

struct DetectResult {
    std::vector<WindowRecord> windows;
    std::vector<PulseDetection> pulses;
    std::vector<PulsePairCandidate> candidates;
    SegmentCounts rfi_counts{4.0};
    std::int64_t n_triggers = 0;
    std::int64_t n_windows = 0;
    std::int64_t n_bins_examined = 0;
    std::int64_t n_detections = 0;
    // Windows over max_pulses_per_window: pulses counted, pairing skipped.
    std::int64_t n_saturated_windows = 0;
};

// simulate + first level over the whole run. Deterministic for any worker
// count: frames are keyed by index and merged in order.
DetectResult run_detect(const Scenario& scenario, const RunOptions& opts);

struct ExciseResult {
    std::vector<PulsePairCandidate> kept;
    std::vector<SegmentTag> tags;
    std::vector<MaskRow> sun_mask;
    std::int64_t threshold_used = 0;
    std::int64_t excised_margin = 0;
    std::int64_t excised_sun = 0;
};

ExciseResult run_excise(std::vector<PulsePairCandidate> candidates,
                        const SegmentCounts& counts, const Scenario& scenario,
                        const SunEphemeris* eph);

struct AnalysisResult {
    ExposureModel exposure;
    std::vector<VariantResult> variants;  // baseline first when requested
};

AnalysisResult run_analysis(const std::vector<PulsePairCandidate>& candidates,
                            const Scenario& scenario,
                            const std::vector<TestVariant>& variants,
                            const SunEphemeris* eph);

// --- File-backed stages (the CLI surface). Each stage reads only persisted
// inputs and writes its outputs plus a manifest entry, so any stage can be
// rerun from files with identical results.

struct StageFlags {
    int workers = 1;
    bool write_frames = true;
    bool write_pulses = true;
    std::optional<std::uint64_t> seed_override;
};

void stage_simulate(const std::string& scenario_path, const std::string& out_dir,
                    const StageFlags& flags, const InstrumentConfig* base_config);
void stage_detect(const std::string& scenario_path, const std::string& out_dir,
                  const StageFlags& flags, const InstrumentConfig* base_config);
void stage_excise(const std::string& out_dir, const std::string& ephemeris_path);
void stage_analyze(const std::string& out_dir, const std::string& variant_spec,
                   int workers);
void stage_diagnose(const std::string& out_dir, const std::string& noise_seeds,
                    std::optional<double> scan_threshold_db);
void stage_report(const std::string& out_dir, const std::string& figure_spec,
                  const std::string& variant_name);

// Scenario loading with optional base config file and seed override.
Scenario load_scenario_for_run(const std::string& scenario_path,
                               const InstrumentConfig* base_config,
                               std::optional<std::uint64_t> seed_override);

}  // namespace pairscan

#endif  // PAIRSCAN_PIPELINE_HPP
