#ifndef PAIRSCAN_DIAGNOSTICS_HPP
#define PAIRSCAN_DIAGNOSTICS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "pairscan/second_level.hpp"

namespace pairscan {

// One falsification / characterization variant. Exactly one kind is active;
// every variant differs from baseline only through its declared override.
struct TestVariant {
    enum class Kind { kBaseline, kPhaseNoise, kTauOverride, kModifiedFilter };
    Kind kind = Kind::kBaseline;
    std::uint64_t noise_seed = 1;     // kPhaseNoise
    double tau_override_s = 0.0;      // kTauOverride
    // kModifiedFilter acceptance: per-pulse |d_EW phi| <= pi, |ddf| in
    // [default upper bound, pi] unless overridden.
    double modified_ew_halfwidth_rad = M_PI;
    double modified_ddf_lo_rad = 0.80;
    double modified_ddf_hi_rad = M_PI;

    std::string name() const;
};

// CLI/variant-list syntax: "baseline", "phase_noise:3", "phase_noise:1..4",
// "tau_zero", "tau:<seconds>", "modified_filter". Comma separated.
std::vector<TestVariant> parse_variant_list(const std::string& spec);

// Every east phase replaced by an independent uniform draw on (-pi, pi],
// deterministic per (seed, candidate id, pulse index). First-level content
// is otherwise untouched, so pre-filter candidate counts are unchanged.
std::vector<PulsePairCandidate> phase_noise_variant(
    std::vector<PulsePairCandidate> candidates, std::uint64_t seed);

PhaseFilterOptions variant_options(const TestVariant& v, const InstrumentConfig& cfg);

// True when the modified acceptance band intersects the default band, which
// would make the default-vs-modified comparison vacuous.
bool modified_windows_overlap_default(const TestVariant& v, const InstrumentConfig& cfg);

struct VariantResult {
    TestVariant variant;
    std::string name;
    std::size_t candidates_in = 0;
    std::vector<AnalyzedEvent> events;
    std::vector<HeapRecord> heap;
    std::vector<DoiReport> dois;
    // Digest of everything NOT overridden by the variant; equal across all
    // variants of one run (audited by tests and the summary file).
    std::string config_audit;
    std::string note;
};

VariantResult run_variant(const TestVariant& v,
                          const std::vector<PulsePairCandidate>& candidates,
                          const ExposureModel& exposure, const InstrumentConfig& cfg);

// Events within +/- halfwidth bins of a bin (DOI strength for comparisons).
std::int64_t events_near_bin(const std::vector<AnalyzedEvent>& events, int bin,
                             int halfwidth, int ra_bins_per_day);

// Default-vs-modified phase-window comparison at a bin: a signal whose DOI
// strength does not drop under the modified (non-common-arrival) windows is
// RFI-like / extended rather than a common-arrival-direction emitter.
struct SourceClassification {
    int bin = 0;
    std::int64_t default_count = 0;
    std::int64_t modified_count = 0;
    bool rfi_like = false;
};

SourceClassification classify_bin(const VariantResult& default_result,
                                  const VariantResult& modified_result, int bin,
                                  const InstrumentConfig& cfg);

// Windows whose visibility magnitude exceeds the threshold.
std::vector<WindowRecord> high_visibility_scan(const std::vector<WindowRecord>& windows,
                                               double threshold_db_rel);

}  // namespace pairscan

#endif  // PAIRSCAN_DIAGNOSTICS_HPP
