#include "pairscan/rfi.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "pairscan/geometry.hpp"

namespace pairscan {

double SunEphemeris::ra_at(double mjd) const {
    if (rows.size() < 2) throw std::invalid_argument("sun ephemeris: need >= 2 rows");
    if (mjd < rows.front().mjd || mjd > rows.back().mjd) {
        throw std::out_of_range("sun ephemeris: mjd " + std::to_string(mjd) +
                                " outside coverage");
    }
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (mjd <= rows[i].mjd) {
            const auto& r0 = rows[i - 1];
            const auto& r1 = rows[i];
            const double t = r1.mjd == r0.mjd ? 0.0 : (mjd - r0.mjd) / (r1.mjd - r0.mjd);
            double ra = std::fmod(r0.ra_hr + t * (r1.ra_hr - r0.ra_hr), 24.0);
            if (ra < 0) ra += 24.0;
            return ra;
        }
    }
    return rows.back().ra_hr;
}

SunEphemeris load_sun_ephemeris(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("sun ephemeris: cannot open '" + path + "'");
    SunEphemeris eph;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        SunEphemeris::Row row{};
        if (!(ss >> row.mjd >> row.ra_hr >> row.dec_deg)) {
            // Header row of column names is tolerated.
            if (eph.rows.empty()) continue;
            throw std::runtime_error("sun ephemeris: malformed row '" + line + "'");
        }
        eph.rows.push_back(row);
    }
    if (eph.rows.size() < 2) {
        throw std::runtime_error("sun ephemeris: missing rows in '" + path + "'");
    }
    return eph;
}

SunEphemeris ephemeris_from_spec(const SunSpec& sun) {
    SunEphemeris eph;
    for (const auto& [mjd, ra] : sun.ra_hr_by_mjd) eph.rows.push_back({mjd, ra, 0.0});
    return eph;
}

SegmentCounts::SegmentCounts(double window_hours) : window_hours_(window_hours) {
    if (window_hours <= 0) {
        throw std::invalid_argument("SegmentCounts: window_hours must be positive");
    }
}

void SegmentCounts::add(double mjd, std::int64_t segment_index, std::int64_t n) {
    const auto win = static_cast<std::int64_t>(std::floor(mjd * 24.0 / window_hours_));
    counts_[{win, segment_index}] += n;
}

void SegmentCounts::merge(const SegmentCounts& other) {
    for (const auto& [key, n] : other.counts_) counts_[key] += n;
}

SegmentCounts accumulate_segment_counts(const std::vector<PulseRef>& pulses,
                                        double window_hours) {
    SegmentCounts c(window_hours);
    for (const auto& p : pulses) c.add(p.mjd, p.segment_index);
    return c;
}

std::vector<SegmentTag> tag_rfi_segments(const SegmentCounts& counts,
                                         std::int64_t threshold, bool look_forward) {
    if (threshold <= 0) throw std::invalid_argument("tag_rfi_segments: threshold must be positive");
    const double win_days = counts.window_hours() / 24.0;
    std::vector<SegmentTag> tags;
    for (const auto& [key, n] : counts.counts()) {
        if (n < threshold) continue;
        const auto& [win, seg] = key;
        SegmentTag t;
        t.segment_index = seg;
        t.accum_start_mjd = static_cast<double>(win) * win_days;
        t.accum_end_mjd = t.accum_start_mjd + win_days;
        t.valid_start_mjd = t.accum_start_mjd;
        t.valid_end_mjd = t.accum_end_mjd + (look_forward ? win_days : 0.0);
        t.count = n;
        tags.push_back(t);
    }
    return tags;
}

double expected_awgn_pulses_per_segment_window(const Scenario& s) {
    const InstrumentConfig& cfg = s.config;
    const double q_dual = std::exp(-2.0 * cfg.snr_threshold_linear());
    const double windows_per_accum = cfg.rfi_window_hours * 3600.0 /
                                     cfg.trigger_period_s * cfg.windows_per_trigger;
    // A given segment is materialized with probability ~ backgrounds/valid.
    const double p_mat = static_cast<double>(s.background_segments_per_window) /
                         static_cast<double>(count_valid_segments(cfg));
    return windows_per_accum * p_mat * cfg.bins_per_segment() * q_dual;
}

std::int64_t auto_rfi_threshold(const Scenario& s) {
    if (s.config.rfi_concentration_threshold > 0) {
        return s.config.rfi_concentration_threshold;
    }
    const double lambda = expected_awgn_pulses_per_segment_window(s);
    // Smallest k with P(Poisson(lambda) >= k) < 1%.
    double tail = 1.0;           // P(X >= 0)
    double pmf = std::exp(-lambda);  // P(X = 0)
    std::int64_t k = 0;
    while (tail >= 0.01 && k < 1000000) {
        tail -= pmf;
        ++k;
        pmf *= lambda / static_cast<double>(k);
    }
    return std::max<std::int64_t>(2, k);
}

TagIndex::TagIndex(const std::vector<SegmentTag>& tags) {
    for (const auto& t : tags) {
        by_segment_[t.segment_index].emplace_back(t.valid_start_mjd, t.valid_end_mjd);
    }
    for (auto& [seg, spans] : by_segment_) std::sort(spans.begin(), spans.end());
}

double TagIndex::margin_segments(const PulsePairCandidate& cand) const {
    if (by_segment_.empty()) return kNoTagMargin;
    double margin = kNoTagMargin;
    const double mjd = cand.pulse1.mjd;
    for (const auto& [seg, spans] : by_segment_) {
        bool active = false;
        for (const auto& [lo, hi] : spans) {
            if (mjd >= lo && mjd <= hi) { active = true; break; }
        }
        if (!active) continue;
        const double d1 = static_cast<double>(std::llabs(cand.pulse1.segment_index - seg));
        const double d2 = static_cast<double>(std::llabs(cand.pulse2.segment_index - seg));
        margin = std::min({margin, d1, d2});
    }
    return margin;
}

std::vector<PulsePairCandidate> filter_by_spectral_margin(
    std::vector<PulsePairCandidate> candidates, const TagIndex& tags,
    const InstrumentConfig& cfg, std::int64_t* excised_count) {
    std::vector<PulsePairCandidate> kept;
    kept.reserve(candidates.size());
    std::int64_t excised = 0;
    for (auto& c : candidates) {
        const double margin = tags.margin_segments(c);
        c.assoc.rfi_spectral_margin_segments = margin;
        // Boundary excludes: a tag exactly margin_segments away is too close.
        if (margin > static_cast<double>(cfg.rfi_margin_segments)) {
            kept.push_back(std::move(c));
        } else {
            ++excised;
        }
    }
    if (excised_count) *excised_count = excised;
    return kept;
}

bool sun_excluded(double mjd, double beam_ra_hr, const ExcisionRegion& region,
                  const SunEphemeris& eph) {
    if (region.kind == ExcisionRegion::Kind::kManual) {
        return mjd > region.mjd_min && mjd < region.manual_mjd_max &&
               std::abs(circ_delta_hr(beam_ra_hr, region.manual_ra_center_hr)) <
                   region.ra_halfwidth_hr;
    }
    if (mjd <= region.mjd_min) return false;
    return std::abs(circ_delta_hr(beam_ra_hr, eph.ra_at(mjd))) < region.ra_halfwidth_hr;
}

std::vector<PulsePairCandidate> excise_sun(std::vector<PulsePairCandidate> candidates,
                                           const ExcisionRegion& region,
                                           const SunEphemeris& eph,
                                           const InstrumentConfig& cfg,
                                           std::int64_t* excised_count) {
    std::vector<PulsePairCandidate> kept;
    kept.reserve(candidates.size());
    std::int64_t excised = 0;
    for (auto& c : candidates) {
        const double beam_ra = beam_ra_at(c.pulse1.mjd, cfg);
        if (sun_excluded(c.pulse1.mjd, beam_ra, region, eph)) {
            ++excised;
        } else {
            kept.push_back(std::move(c));
        }
    }
    if (excised_count) *excised_count = excised;
    return kept;
}

std::vector<MaskRow> export_sun_mask(const ExcisionRegion& region,
                                     const SunEphemeris& eph,
                                     const std::vector<std::pair<double, double>>& mjd_ranges) {
    std::vector<MaskRow> rows;
    for (std::size_t i = 1; i < eph.rows.size(); ++i) {
        double lo = eph.rows[i - 1].mjd;
        double hi = eph.rows[i].mjd;
        lo = std::max(lo, region.mjd_min);
        if (hi <= lo) continue;
        bool overlaps = false;
        for (const auto& [a, b] : mjd_ranges) {
            if (hi > a && lo < b) { overlaps = true; break; }
        }
        if (!overlaps) continue;
        const double ra0 = eph.ra_at(lo);
        const double ra1 = eph.ra_at(hi);
        rows.push_back({lo, hi, std::min(ra0, ra1) - region.ra_halfwidth_hr,
                        std::max(ra0, ra1) + region.ra_halfwidth_hr});
    }
    return rows;
}

}  // namespace pairscan
