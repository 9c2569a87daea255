#include "pairscan/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "pairscan/hash.hpp"
#include "pairscan/simulator.hpp"

namespace pairscan {

using nlohmann::json;

double SunSpec::ra_at(double mjd) const {
    if (ra_hr_by_mjd.size() < 2) {
        throw std::invalid_argument("sun ephemeris: need at least two rows");
    }
    if (mjd < ra_hr_by_mjd.front().first || mjd > ra_hr_by_mjd.back().first) {
        throw std::out_of_range("sun ephemeris: mjd " + std::to_string(mjd) +
                                " outside table coverage");
    }
    for (std::size_t i = 1; i < ra_hr_by_mjd.size(); ++i) {
        const auto& [m0, r0] = ra_hr_by_mjd[i - 1];
        const auto& [m1, r1] = ra_hr_by_mjd[i];
        if (mjd <= m1) {
            const double t = m1 == m0 ? 0.0 : (mjd - m0) / (m1 - m0);
            double ra = std::fmod(r0 + t * (r1 - r0), 24.0);
            if (ra < 0) ra += 24.0;
            return ra;
        }
    }
    return ra_hr_by_mjd.back().second;
}

double Scenario::total_days() const {
    double d = 0.0;
    for (const auto& [lo, hi] : mjd_ranges) d += hi - lo;
    return d;
}

void Scenario::validate() const {
    config.validate();
    auto fail = [this](const std::string& what) {
        throw std::invalid_argument("scenario '" + name + "': " + what);
    };
    if (mjd_ranges.empty()) fail("mjd_ranges must not be empty");
    double prev = -1e18;
    for (const auto& [lo, hi] : mjd_ranges) {
        if (!(lo < hi)) fail("mjd_ranges entries must satisfy start < end");
        if (lo < prev) fail("mjd_ranges must be disjoint and ascending");
        prev = hi;
    }
    if (total_days() <= 0) fail("total days must be positive");
    if (noise_power <= 0) fail("noise_power must be positive");
    if (background_segments_per_window < 1) {
        fail("background_segments_per_window must be >= 1");
    }
    if (background_segments_per_window > count_valid_segments(config)) {
        fail("background_segments_per_window exceeds available segments");
    }
    for (const auto& src : sources) {
        if (!(src.ra_hr >= 0.0 && src.ra_hr < 24.0)) fail("source ra_hr outside [0, 24)");
        if (src.tone_pairs.empty()) fail("source has no tone pairs");
        if (src.emission_probability_per_window < 0.0 ||
            src.emission_probability_per_window > 1.0) {
            fail("emission_probability_per_window outside [0, 1]");
        }
        for (const auto& [f1, f2] : src.tone_pairs) {
            const double df = std::abs(f2 - f1);
            if (df < config.delta_f_range_hz.first || df > config.delta_f_range_hz.second) {
                fail("tone pair delta-f outside configured range");
            }
            if (!freq_in_rf_ranges(f1, config) || !freq_in_rf_ranges(f2, config)) {
                fail("tone frequency outside rf_ranges");
            }
        }
    }
    for (const auto& r : rfi) {
        if (r.bandwidth_hz < config.fft_bin_hz) fail("rfi bandwidth below one FFT bin");
        if (r.element_coupling_east < 0 || r.element_coupling_east > 1 ||
            r.element_coupling_west < 0 || r.element_coupling_west > 1) {
            fail("rfi element coupling outside [0, 1]");
        }
    }
    if (sun) {
        if (sun->ra_hr_by_mjd.size() < 2) fail("sun table needs at least two rows");
        for (std::size_t i = 1; i < sun->ra_hr_by_mjd.size(); ++i) {
            if (sun->ra_hr_by_mjd[i].first <= sun->ra_hr_by_mjd[i - 1].first) {
                fail("sun table mjd column must ascend");
            }
        }
        for (const auto& [lo, hi] : mjd_ranges) {
            if (lo < sun->ra_hr_by_mjd.front().first ||
                hi > sun->ra_hr_by_mjd.back().first) {
                fail("sun table does not cover all mjd_ranges");
            }
        }
    }
}

namespace {

[[noreturn]] void bad(const std::string& origin, const std::string& what) {
    throw std::invalid_argument("scenario '" + origin + "': " + what);
}

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& origin, const std::string& ctx) {
    for (const auto& [key, _] : obj.items()) {
        bool ok = false;
        for (const char* a : allowed) {
            if (key == a) { ok = true; break; }
        }
        if (!ok) bad(origin, "unknown key '" + key + "' in " + ctx);
    }
}

std::vector<std::pair<double, double>> pair_list(const json& j,
                                                 const std::string& origin,
                                                 const std::string& ctx) {
    std::vector<std::pair<double, double>> out;
    if (!j.is_array()) bad(origin, ctx + " must be an array of [a, b] pairs");
    for (const auto& e : j) {
        if (!e.is_array() || e.size() != 2) bad(origin, ctx + " entries must be [a, b]");
        out.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
    return out;
}

}  // namespace

Scenario parse_scenario_json_with_base(const std::string& text,
                                       const std::string& origin,
                                       const InstrumentConfig& base) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        bad(origin, std::string("JSON parse error: ") + e.what());
    }
    check_keys(j, {"name", "config", "mjd_ranges", "seed", "sources", "rfi",
                   "sun", "noise_power", "background_segments_per_window"},
               origin, "scenario");

    Scenario s;
    s.config = base;
    s.name = j.value("name", origin);
    if (j.contains("config")) {
        if (!j["config"].is_object()) bad(origin, "config must be an object");
        for (const auto& [key, value] : j["config"].items()) {
            std::string v;
            if (value.is_string()) v = value.get<std::string>();
            else v = value.dump();
            apply_config_key(s.config, key, v);
        }
    }
    if (!j.contains("mjd_ranges")) bad(origin, "missing mjd_ranges");
    s.mjd_ranges = pair_list(j["mjd_ranges"], origin, "mjd_ranges");
    s.seed = j.value("seed", std::uint64_t{1});
    s.noise_power = j.value("noise_power", 1.0);
    s.background_segments_per_window = j.value("background_segments_per_window", 4);

    if (j.contains("sources")) {
        for (const auto& e : j["sources"]) {
            check_keys(e, {"ra_hr", "dec_deg", "tone_pairs", "snr_db_at_transit",
                           "emission_probability_per_window", "phase_coherent"},
                       origin, "source");
            SourceSpec src;
            src.ra_hr = e.at("ra_hr").get<double>();
            src.dec_deg = e.value("dec_deg", s.config.dec_deg);
            src.tone_pairs = pair_list(e.at("tone_pairs"), origin, "tone_pairs");
            src.snr_db_at_transit = e.value("snr_db_at_transit", 15.0);
            src.emission_probability_per_window =
                e.value("emission_probability_per_window", 0.1);
            src.phase_coherent = e.value("phase_coherent", true);
            s.sources.push_back(src);
        }
    }
    if (j.contains("rfi")) {
        for (const auto& e : j["rfi"]) {
            check_keys(e, {"segment_center_hz", "bandwidth_hz", "burst_rate_per_hour",
                           "burst_snr_db", "element_coupling_east",
                           "element_coupling_west", "correlated"},
                       origin, "rfi");
            RfiSpec r;
            r.segment_center_hz = e.at("segment_center_hz").get<double>();
            r.bandwidth_hz = e.value("bandwidth_hz", 954.0);
            r.burst_rate_per_hour = e.value("burst_rate_per_hour", 1.0);
            r.burst_snr_db = e.value("burst_snr_db", 20.0);
            r.element_coupling_east = e.value("element_coupling_east", 1.0);
            r.element_coupling_west = e.value("element_coupling_west", 1.0);
            r.correlated = e.value("correlated", false);
            s.rfi.push_back(r);
        }
    }
    if (j.contains("sun") && !j["sun"].is_null()) {
        const auto& e = j["sun"];
        check_keys(e, {"ra_hr_by_mjd", "broadband_power_rise_db", "sidelobe_extent_hr"},
                   origin, "sun");
        SunSpec sun;
        sun.ra_hr_by_mjd = pair_list(e.at("ra_hr_by_mjd"), origin, "ra_hr_by_mjd");
        sun.broadband_power_rise_db = e.value("broadband_power_rise_db", 20.0);
        sun.sidelobe_extent_hr = e.value("sidelobe_extent_hr", 1.5);
        s.sun = sun;
    }
    s.validate();
    return s;
}

Scenario parse_scenario_json(const std::string& text, const std::string& origin) {
    return parse_scenario_json_with_base(text, origin, InstrumentConfig{});
}

Scenario load_scenario_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("scenario: cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scenario_json(ss.str(), path);
}

std::string scenario_to_json(const Scenario& s) {
    json j;
    j["name"] = s.name;
    j["seed"] = s.seed;
    j["noise_power"] = s.noise_power;
    j["background_segments_per_window"] = s.background_segments_per_window;
    j["mjd_ranges"] = json::array();
    for (const auto& [lo, hi] : s.mjd_ranges) j["mjd_ranges"].push_back({lo, hi});
    j["sources"] = json::array();
    for (const auto& src : s.sources) {
        json e;
        e["ra_hr"] = src.ra_hr;
        e["dec_deg"] = src.dec_deg;
        e["tone_pairs"] = json::array();
        for (const auto& [f1, f2] : src.tone_pairs) e["tone_pairs"].push_back({f1, f2});
        e["snr_db_at_transit"] = src.snr_db_at_transit;
        e["emission_probability_per_window"] = src.emission_probability_per_window;
        e["phase_coherent"] = src.phase_coherent;
        j["sources"].push_back(e);
    }
    j["rfi"] = json::array();
    for (const auto& r : s.rfi) {
        json e;
        e["segment_center_hz"] = r.segment_center_hz;
        e["bandwidth_hz"] = r.bandwidth_hz;
        e["burst_rate_per_hour"] = r.burst_rate_per_hour;
        e["burst_snr_db"] = r.burst_snr_db;
        e["element_coupling_east"] = r.element_coupling_east;
        e["element_coupling_west"] = r.element_coupling_west;
        e["correlated"] = r.correlated;
        j["rfi"].push_back(e);
    }
    if (s.sun) {
        json e;
        e["ra_hr_by_mjd"] = json::array();
        for (const auto& [m, r] : s.sun->ra_hr_by_mjd) e["ra_hr_by_mjd"].push_back({m, r});
        e["broadband_power_rise_db"] = s.sun->broadband_power_rise_db;
        e["sidelobe_extent_hr"] = s.sun->sidelobe_extent_hr;
        j["sun"] = e;
    }
    // Flat config key map; parse_scenario_json accepts it, so the
    // serialization round-trips (manifests embed scenarios this way).
    json cfg = json::object();
    std::istringstream lines(config_to_text(s.config));
    std::string line;
    while (std::getline(lines, line)) {
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        const auto strip = [](std::string& t) {
            const auto a = t.find_first_not_of(' ');
            const auto b = t.find_last_not_of(' ');
            t = a == std::string::npos ? "" : t.substr(a, b - a + 1);
        };
        strip(key);
        strip(value);
        cfg[key] = value;
    }
    j["config"] = cfg;
    return j.dump(2);
}

std::string scenario_digest(const Scenario& s) {
    return hex64(fnv1a64(scenario_to_json(s)));
}

}  // namespace pairscan
