#ifndef PAIRSCAN_RFI_HPP
#define PAIRSCAN_RFI_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pairscan/first_level.hpp"
#include "pairscan/scenario.hpp"

namespace pairscan {

// RFI-positive 954 Hz band segment. Counts accumulate in tumbling windows of
// rfi_window_hours anchored on the absolute MJD grid; with look-forward the
// tag stays valid up to one accumulation window past the window end.
struct SegmentTag {
    std::int64_t segment_index = 0;
    double accum_start_mjd = 0.0;
    double accum_end_mjd = 0.0;
    double valid_start_mjd = 0.0;
    double valid_end_mjd = 0.0;
    std::int64_t count = 0;
};

struct ExcisionRegion {
    enum class Kind { kSun, kManual };
    Kind kind = Kind::kSun;
    double ra_halfwidth_hr = 1.0;
    double mjd_min = 60540.0;
    // Manual regions carry an explicit fixed RA center; Sun regions follow
    // the ephemeris.
    double manual_ra_center_hr = 0.0;
    double manual_mjd_max = 1e9;
};

struct SunEphemeris {
    // (mjd, ra_hr, dec_deg) rows, ascending mjd.
    struct Row { double mjd; double ra_hr; double dec_deg; };
    std::vector<Row> rows;

    double ra_at(double mjd) const;  // linear interpolation; throws outside
};

SunEphemeris load_sun_ephemeris(const std::string& path);
SunEphemeris ephemeris_from_spec(const SunSpec& sun);

// Lightweight pulse reference for concentration accounting.
struct PulseRef {
    double mjd = 0.0;
    std::int64_t segment_index = 0;
};

// Tumbling-window counts of single-pulse detections per 954 Hz segment.
// Window index = floor(mjd * 24 / window_hours); anchoring to the absolute
// grid keeps counts independent of where a run starts.
class SegmentCounts {
public:
    explicit SegmentCounts(double window_hours = 4.0);

    void add(double mjd, std::int64_t segment_index, std::int64_t n = 1);
    void merge(const SegmentCounts& other);

    double window_hours() const { return window_hours_; }
    const std::map<std::pair<std::int64_t, std::int64_t>, std::int64_t>& counts() const {
        return counts_;
    }

private:
    double window_hours_;
    // (window_index, segment_index) -> count
    std::map<std::pair<std::int64_t, std::int64_t>, std::int64_t> counts_;
};

SegmentCounts accumulate_segment_counts(const std::vector<PulseRef>& pulses,
                                        double window_hours = 4.0);

std::vector<SegmentTag> tag_rfi_segments(const SegmentCounts& counts,
                                         std::int64_t threshold, bool look_forward);

// Auto concentration threshold: smallest count whose Poisson upper-tail
// probability under the noise-only model is below 1%. The model rate is the
// expected noise-caused single-pulse count per materialized segment per
// accumulation window for this scenario's layout.
std::int64_t auto_rfi_threshold(const Scenario& s);
double expected_awgn_pulses_per_segment_window(const Scenario& s);

// Minimum |segment distance| from either pulse's segment to any tag active
// at the candidate's MJD; kNoTagMargin when no tag is active.
class TagIndex {
public:
    explicit TagIndex(const std::vector<SegmentTag>& tags);
    double margin_segments(const PulsePairCandidate& cand) const;
    bool empty() const { return by_segment_.empty(); }

private:
    // segment -> validity intervals
    std::map<std::int64_t, std::vector<std::pair<double, double>>> by_segment_;
};

// Candidate kept iff margin > rfi_margin_segments (boundary excludes) or no
// active tags. Fills assoc.rfi_spectral_margin_segments.
std::vector<PulsePairCandidate> filter_by_spectral_margin(
    std::vector<PulsePairCandidate> candidates, const TagIndex& tags,
    const InstrumentConfig& cfg, std::int64_t* excised_count = nullptr);

// True when a pointing falls inside the Sun excision region.
bool sun_excluded(double mjd, double beam_ra_hr, const ExcisionRegion& region,
                  const SunEphemeris& eph);

// Drop candidates during Sun transits. Candidate pointing is derived from
// its MJD through the configured sidereal reference.
std::vector<PulsePairCandidate> excise_sun(std::vector<PulsePairCandidate> candidates,
                                           const ExcisionRegion& region,
                                           const SunEphemeris& eph,
                                           const InstrumentConfig& cfg,
                                           std::int64_t* excised_count = nullptr);

// (mjd_start, mjd_end, ra_lo, ra_hi) strips covering the excision region
// over the run span, one per ephemeris interval.
struct MaskRow { double mjd_start, mjd_end, ra_lo_hr, ra_hi_hr; };
std::vector<MaskRow> export_sun_mask(const ExcisionRegion& region,
                                     const SunEphemeris& eph,
                                     const std::vector<std::pair<double, double>>& mjd_ranges);

}  // namespace pairscan

#endif  // PAIRSCAN_RFI_HPP
