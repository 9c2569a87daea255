#ifndef PAIRSCAN_SECOND_LEVEL_HPP
#define PAIRSCAN_SECOND_LEVEL_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pairscan/rfi.hpp"

namespace pairscan {

// Per-RA-bin observing exposure after (MJD, RA) excisions, normalized into
// the binomial event probability p_k.
struct ExposureModel {
    std::vector<double> exposure_s;  // ra_bins_per_day entries
    std::vector<double> p;           // sums to 1 within 1e-12
    double total_s = 0.0;
};

// exposure_k = unmasked observed seconds with the beam center in bin k, from
// the exact trigger grid of the run (same enumeration the simulator uses).
// Throws when total exposure is zero.
ExposureModel build_exposure(const std::vector<std::pair<double, double>>& mjd_ranges,
                             const InstrumentConfig& cfg,
                             const std::vector<ExcisionRegion>& masks = {},
                             const SunEphemeris* eph = nullptr);

// Overrides for second-level reprocessing; the falsification variants differ
// from baseline only through these (phase-noise substitution happens at the
// candidate level, see diagnostics).
struct PhaseFilterOptions {
    std::optional<double> tau_override_s;      // replaces tau_inst when set
    double ew_halfwidth_rad = 0.10;            // per-pulse window
    double ddf_lo_rad = 0.0;                   // acceptance band on |ddf|
    double ddf_hi_rad = 0.80;
    bool evaluate_alias = true;
};

PhaseFilterOptions default_phase_options(const InstrumentConfig& cfg);

// A candidate that survived the direction filters at its own pointing bin.
struct AnalyzedEvent {
    std::size_t candidate_index = 0;
    std::uint64_t candidate_id = 0;
    int ra_bin = 0;
    double mjd = 0.0;
    double f1_hz = 0.0;
    double d_ew_phi_1 = 0.0;
    double d_ew_phi_2 = 0.0;
    double d_df_d_ew_phi = 0.0;
    // Diagnostic: would the candidate also pass under the +/-alias-bin
    // direction hypotheses? Counting stays strictly one event per candidate
    // at its pointing bin; alias support shows up through candidates whose
    // pointing is the aliased bin.
    bool alias_minus_pass = false;
    bool alias_plus_pass = false;
};

// Hour angle of each candidate is (beam RA at its MJD) minus the center of
// the RA bin under evaluation. Keep iff |d_EW phi| of both pulses is within
// the per-pulse window and |d_df d_EW phi| falls in the pair acceptance
// band.
std::vector<AnalyzedEvent> apply_phase_filters(
    const std::vector<PulsePairCandidate>& candidates, const InstrumentConfig& cfg,
    const PhaseFilterOptions& opts);

// Candidate position in the |d_df d_EW phi|-sorted heap with its per-event
// effect size.
struct HeapRecord {
    std::int64_t rank = 0;  // 1-based
    double abs_ddf_phase = 0.0;
    int ra_bin = 0;
    std::int64_t cum_count = 0;  // records of this bin among ranks <= rank
    double cohens_d = 0.0;
    // Prior-count standardized excess: the count BEFORE this record against
    // n-1 trials. Zero-mean under the noise model; used for null
    // calibration (cohens_d includes the record itself and is biased
    // positive at low rank by construction).
    double null_z = 0.0;
    std::uint64_t candidate_id = 0;
    std::size_t candidate_index = 0;
    double d_ew_phi_1 = 0.0;
    double d_ew_phi_2 = 0.0;
    double mjd = 0.0;
};

// Ascending |d_df d_EW phi|; ties broken by (mjd, f1, candidate id) so the
// d stream is reproducible.
std::vector<HeapRecord> build_sorted_heap(const std::vector<AnalyzedEvent>& events);

// d = (C_k(n) - n p_k) / sqrt(n p_k (1 - p_k)) at each rank n, recorded per
// event. Throws when a record lands in a bin with zero exposure.
void cohens_d_stream(std::vector<HeapRecord>& heap, const ExposureModel& exposure);

struct DoiReport {
    int central_bin = 0;
    double center_ra_hr = 0.0;
    std::int64_t count = 0;         // events in the central bin
    std::int64_t merged_count = 0;  // central +/- 1 bin
    std::int64_t adjacent_lo_count = 0;
    std::int64_t adjacent_hi_count = 0;
    std::int64_t alias_lo_count = 0;  // k - alias_offset, +/-1 merged
    std::int64_t alias_hi_count = 0;
    double alias_lo_max_d = 0.0;
    double alias_hi_max_d = 0.0;
    double median_d = 0.0;
    double max_d = 0.0;
    double fraction_d_above_3 = 0.0;
    double fraction_d_below_0 = 0.0;
    std::string classification;  // filled by diagnostics when available
};

// Automated proxy for the manually chosen directions of interest: a bin
// qualifies when its merged (k +/- 1) event count reaches doi_min_events,
// the median d of those events is at least doi_median_d_min, and at most
// doi_low_d_fraction_max of them have d < 0. Alias-bin support is reported,
// not required. Overlapping qualifiers are collapsed to the strongest bin.
std::vector<DoiReport> detect_dois(const std::vector<HeapRecord>& heap,
                                   const InstrumentConfig& cfg);

// Pr(T | B) = Pr(T) Pr(B | T) / Pr(B). Inputs in (0, 1]; throws when the
// implied conditional exceeds 1.
double bayes_update(double pr_t, double pr_b_given_t, double pr_b);

// Photons per (bin_hz x integration) cell for a thermal antenna temperature:
// N = kB T / (h nu), valid in the h nu << k T regime (enforced: ratio below
// 1e-3).
double photon_count(double antenna_temp_k, double freq_hz);

}  // namespace pairscan

#endif  // PAIRSCAN_SECOND_LEVEL_HPP
