#include "pairscan/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "pairscan/hash.hpp"
#include "pairscan/rng.hpp"

namespace pairscan {

namespace {
constexpr std::uint64_t kStreamPhaseNoise = 0x7A;
}

std::string TestVariant::name() const {
    switch (kind) {
        case Kind::kBaseline: return "baseline";
        case Kind::kPhaseNoise: return "phase_noise_" + std::to_string(noise_seed);
        case Kind::kTauOverride: {
            std::ostringstream o;
            o << "tau_" << tau_override_s * 1e9 << "ns";
            return o.str();
        }
        case Kind::kModifiedFilter: return "modified_filter";
    }
    return "?";
}

std::vector<TestVariant> parse_variant_list(const std::string& spec) {
    std::vector<TestVariant> out;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        TestVariant v;
        if (item == "baseline") {
            v.kind = TestVariant::Kind::kBaseline;
            out.push_back(v);
        } else if (item.rfind("phase_noise:", 0) == 0) {
            const std::string arg = item.substr(12);
            const auto dots = arg.find("..");
            v.kind = TestVariant::Kind::kPhaseNoise;
            if (dots == std::string::npos) {
                v.noise_seed = std::stoull(arg);
                out.push_back(v);
            } else {
                const auto lo = std::stoull(arg.substr(0, dots));
                const auto hi = std::stoull(arg.substr(dots + 2));
                if (hi < lo || hi - lo > 1000) {
                    throw std::invalid_argument("variant list: bad seed range '" + item + "'");
                }
                for (auto s = lo; s <= hi; ++s) {
                    v.noise_seed = s;
                    out.push_back(v);
                }
            }
        } else if (item == "tau_zero") {
            v.kind = TestVariant::Kind::kTauOverride;
            v.tau_override_s = 0.0;
            out.push_back(v);
        } else if (item.rfind("tau:", 0) == 0) {
            v.kind = TestVariant::Kind::kTauOverride;
            v.tau_override_s = std::stod(item.substr(4));
            out.push_back(v);
        } else if (item == "modified_filter") {
            v.kind = TestVariant::Kind::kModifiedFilter;
            out.push_back(v);
        } else {
            throw std::invalid_argument("variant list: unknown variant '" + item + "'");
        }
    }
    if (out.empty()) throw std::invalid_argument("variant list: empty");
    return out;
}

std::vector<PulsePairCandidate> phase_noise_variant(
    std::vector<PulsePairCandidate> candidates, std::uint64_t seed) {
    if (seed < 1) throw std::invalid_argument("phase_noise_variant: seed must be >= 1");
    for (auto& c : candidates) {
        Rng r1 = Rng::for_stream(seed, c.candidate_id, 1, kStreamPhaseNoise);
        Rng r2 = Rng::for_stream(seed, c.candidate_id, 2, kStreamPhaseNoise);
        c.pulse1.phase_east_rad = r1.uniform_phase();
        c.pulse2.phase_east_rad = r2.uniform_phase();
    }
    return candidates;
}

PhaseFilterOptions variant_options(const TestVariant& v, const InstrumentConfig& cfg) {
    PhaseFilterOptions o = default_phase_options(cfg);
    switch (v.kind) {
        case TestVariant::Kind::kBaseline:
        case TestVariant::Kind::kPhaseNoise:
            break;
        case TestVariant::Kind::kTauOverride:
            o.tau_override_s = v.tau_override_s;
            break;
        case TestVariant::Kind::kModifiedFilter:
            o.ew_halfwidth_rad = v.modified_ew_halfwidth_rad;
            o.ddf_lo_rad = v.modified_ddf_lo_rad;
            o.ddf_hi_rad = v.modified_ddf_hi_rad;
            break;
    }
    return o;
}

bool modified_windows_overlap_default(const TestVariant& v, const InstrumentConfig& cfg) {
    return v.modified_ddf_lo_rad < cfg.ddf_phase_filter_rad;
}

namespace {

// Everything a variant is NOT allowed to change: instrument config minus the
// overridable analysis knobs.
std::string audit_text(const InstrumentConfig& cfg) {
    InstrumentConfig base = cfg;
    base.tau_inst_s = 0.0;
    base.ew_phase_filter_rad = 1.0;
    base.ddf_phase_filter_rad = 1.0;
    return config_to_text(base);
}

}  // namespace

VariantResult run_variant(const TestVariant& v,
                          const std::vector<PulsePairCandidate>& candidates,
                          const ExposureModel& exposure, const InstrumentConfig& cfg) {
    VariantResult result;
    result.variant = v;
    result.name = v.name();
    result.candidates_in = candidates.size();
    result.config_audit = hex64(fnv1a64(audit_text(cfg)));

    const PhaseFilterOptions opts = variant_options(v, cfg);
    if (v.kind == TestVariant::Kind::kPhaseNoise) {
        const auto noisy = phase_noise_variant(candidates, v.noise_seed);
        result.events = apply_phase_filters(noisy, cfg, opts);
    } else {
        result.events = apply_phase_filters(candidates, cfg, opts);
    }
    if (v.kind == TestVariant::Kind::kModifiedFilter &&
        modified_windows_overlap_default(v, cfg)) {
        result.note = "warning: modified acceptance overlaps default band; comparison may be vacuous";
    }
    result.heap = build_sorted_heap(result.events);
    cohens_d_stream(result.heap, exposure);
    result.dois = detect_dois(result.heap, cfg);
    return result;
}

std::int64_t events_near_bin(const std::vector<AnalyzedEvent>& events, int bin,
                             int halfwidth, int ra_bins_per_day) {
    std::int64_t n = 0;
    for (const auto& ev : events) {
        int d = std::abs(ev.ra_bin - bin);
        d = std::min(d, ra_bins_per_day - d);
        if (d <= halfwidth) ++n;
    }
    return n;
}

SourceClassification classify_bin(const VariantResult& default_result,
                                  const VariantResult& modified_result, int bin,
                                  const InstrumentConfig& cfg) {
    SourceClassification c;
    c.bin = bin;
    c.default_count =
        events_near_bin(default_result.events, bin, 1, cfg.ra_bins_per_day);
    c.modified_count =
        events_near_bin(modified_result.events, bin, 1, cfg.ra_bins_per_day);
    // A handful-of-events floor keeps empty bins from being flagged on ties.
    c.rfi_like = c.modified_count >= std::max<std::int64_t>(c.default_count, 3);
    return c;
}

std::vector<WindowRecord> high_visibility_scan(const std::vector<WindowRecord>& windows,
                                               double threshold_db_rel) {
    std::vector<WindowRecord> out;
    for (const auto& w : windows) {
        if (w.visibility_mag_db_rel > threshold_db_rel) out.push_back(w);
    }
    return out;
}

}  // namespace pairscan
