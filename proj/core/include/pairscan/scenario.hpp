#ifndef PAIRSCAN_SCENARIO_HPP
#define PAIRSCAN_SCENARIO_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pairscan/config.hpp"

namespace pairscan {

// Celestial pulse-pair transmitter. phase_coherent=true models a compact
// aperture: both tones of a pair arrive from one direction and the east
// element phase carries the geometric delay signature. phase_coherent=false
// randomizes the east phase per pulse, modeling extended or RFI-like
// emitters.
struct SourceSpec {
    double ra_hr = 0.0;
    double dec_deg = -4.3;
    std::vector<std::pair<double, double>> tone_pairs;  // (f1_hz, f2_hz)
    double snr_db_at_transit = 15.0;
    double emission_probability_per_window = 0.1;
    bool phase_coherent = true;
};

struct RfiSpec {
    double segment_center_hz = 0.0;
    double bandwidth_hz = 954.0;
    double burst_rate_per_hour = 1.0;
    double burst_snr_db = 20.0;
    double element_coupling_east = 1.0;  // power fraction reaching east
    double element_coupling_west = 1.0;
    bool correlated = false;  // common phase across elements when true
};

struct SunSpec {
    // (mjd, ra_hr) samples; linearly interpolated. Must cover every
    // mjd_range of the scenario.
    std::vector<std::pair<double, double>> ra_hr_by_mjd;
    double broadband_power_rise_db = 20.0;
    double sidelobe_extent_hr = 1.5;

    double ra_at(double mjd) const;  // throws outside table coverage
};

struct Scenario {
    InstrumentConfig config;
    std::vector<std::pair<double, double>> mjd_ranges;  // disjoint, ascending
    std::uint64_t seed = 1;
    std::vector<SourceSpec> sources;
    std::vector<RfiSpec> rfi;
    std::optional<SunSpec> sun;
    double noise_power = 1.0;  // per-bin mean noise power, linear units

    // Number of noise-only 954 Hz segments materialized per window, in
    // addition to segments forced by sources and RFI. Whole segments are the
    // materialization unit so per-segment noise floors are estimable.
    int background_segments_per_window = 4;

    std::string name = "scenario";

    double total_days() const;
    void validate() const;  // throws std::invalid_argument
};

// JSON scenario file. Unknown keys are rejected with the key name. The
// optional "config" object holds flat InstrumentConfig keys, applied over
// the supplied base (defaults when absent).
Scenario load_scenario_json(const std::string& path);
Scenario parse_scenario_json(const std::string& text, const std::string& origin);
Scenario parse_scenario_json_with_base(const std::string& text,
                                       const std::string& origin,
                                       const InstrumentConfig& base);

std::string scenario_to_json(const Scenario& s);
std::string scenario_digest(const Scenario& s);

}  // namespace pairscan

#endif  // PAIRSCAN_SCENARIO_HPP
