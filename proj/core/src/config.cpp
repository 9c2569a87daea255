#include "pairscan/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "pairscan/hash.hpp"

namespace pairscan {

const char* to_string(SnrLikeRule rule) {
    switch (rule) {
        case SnrLikeRule::kSignificanceFloor: return "significance_floor";
        case SnrLikeRule::kImprobabilityCap: return "improbability_cap";
    }
    return "?";
}

int InstrumentConfig::bins_per_segment() const {
    return static_cast<int>(std::lround(rfi_segment_hz / fft_bin_hz));
}

double InstrumentConfig::snr_threshold_linear() const {
    return std::pow(10.0, snr_threshold_db / 10.0);
}

void InstrumentConfig::validate() const {
    auto fail = [](const std::string& what) {
        throw std::invalid_argument("config: " + what);
    };
    if (ra_bins_per_day <= 0) fail("ra_bins_per_day must be positive");
    if (fft_bin_hz <= 0) fail("fft_bin_hz must be positive");
    if (integration_s <= 0) fail("integration_s must be positive");
    if (std::abs(integration_s * fft_bin_hz - 1.0) > 0.01) {
        fail("integration_s * fft_bin_hz must be within 1% of 1");
    }
    if (trigger_period_s <= 0) fail("trigger_period_s must be positive");
    if (windows_per_trigger < 1) fail("windows_per_trigger must be >= 1");
    if (windows_per_trigger * integration_s > trigger_period_s) {
        fail("windows do not fit in trigger_period_s");
    }
    if (rf_ranges_hz.empty()) fail("rf_ranges_hz must not be empty");
    double prev_hi = 0.0;
    for (const auto& [lo, hi] : rf_ranges_hz) {
        if (!(lo < hi)) fail("rf_ranges_hz entries must satisfy low < high");
        if (lo < prev_hi) fail("rf_ranges_hz must be disjoint and ascending");
        prev_hi = hi;
    }
    if (!(delta_f_range_hz.first > 0.0 &&
          delta_f_range_hz.first < delta_f_range_hz.second)) {
        fail("delta_f_range_hz must be an ascending positive range");
    }
    if (rfi_segment_hz <= 0) fail("rfi_segment_hz must be positive");
    if (bins_per_segment() < 16) fail("rfi_segment_hz too narrow for fft_bin_hz");
    if (rfi_margin_segments < 0) fail("rfi_margin_segments must be >= 0");
    if (rfi_window_hours <= 0) fail("rfi_window_hours must be positive");
    if (element_fwhm_deg <= 0) fail("element_fwhm_deg must be positive");
    if (baseline_wavelengths <= 0) fail("baseline_wavelengths must be positive");
    if (ref_frequency_hz <= 0) fail("ref_frequency_hz must be positive");
    if (ew_phase_filter_rad <= 0) fail("ew_phase_filter_rad must be positive");
    if (ddf_phase_filter_rad <= 0) fail("ddf_phase_filter_rad must be positive");
    if (sun_ra_halfwidth_hr <= 0) fail("sun_ra_halfwidth_hr must be positive");
    if (doi_min_events < 1) fail("doi_min_events must be >= 1");
    if (max_pulses_per_window < 2) fail("max_pulses_per_window must be >= 2");
    if (mjd_quantum_s <= 0) fail("mjd_quantum_s must be positive");
}

namespace {

double parse_double(const std::string& key, const std::string& value) {
    try {
        size_t pos = 0;
        double v = std::stod(value, &pos);
        while (pos < value.size() && std::isspace(static_cast<unsigned char>(value[pos]))) pos++;
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("config key '" + key + "': bad numeric value '" + value + "'");
    }
}

int parse_int(const std::string& key, const std::string& value) {
    const double v = parse_double(key, value);
    if (v != std::floor(v)) {
        throw std::invalid_argument("config key '" + key + "': expected integer, got '" + value + "'");
    }
    return static_cast<int>(v);
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "on") return true;
    if (value == "false" || value == "0" || value == "off") return false;
    throw std::invalid_argument("config key '" + key + "': expected boolean, got '" + value + "'");
}

// "a-b,c-d" -> list of ranges.
std::vector<std::pair<double, double>> parse_ranges(const std::string& key,
                                                    const std::string& value) {
    std::vector<std::pair<double, double>> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        // Split on the dash separating the two bounds; the mantissa of a
        // leading negative number is not expected here (frequencies).
        const auto dash = item.find('-', 1);
        if (dash == std::string::npos) {
            throw std::invalid_argument("config key '" + key + "': expected 'low-high' ranges");
        }
        out.emplace_back(parse_double(key, item.substr(0, dash)),
                         parse_double(key, item.substr(dash + 1)));
    }
    if (out.empty()) {
        throw std::invalid_argument("config key '" + key + "': empty range list");
    }
    return out;
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

}  // namespace

void apply_config_key(InstrumentConfig& cfg, const std::string& key,
                      const std::string& value) {
    if (key == "baseline_wavelengths") cfg.baseline_wavelengths = parse_double(key, value);
    else if (key == "ref_frequency_hz") cfg.ref_frequency_hz = parse_double(key, value);
    else if (key == "dec_deg") cfg.dec_deg = parse_double(key, value);
    else if (key == "element_fwhm_deg") cfg.element_fwhm_deg = parse_double(key, value);
    else if (key == "baseline_azimuth_deg") cfg.baseline_azimuth_deg = parse_double(key, value);
    else if (key == "tau_inst_s") cfg.tau_inst_s = parse_double(key, value);
    else if (key == "integration_s") cfg.integration_s = parse_double(key, value);
    else if (key == "trigger_period_s") cfg.trigger_period_s = parse_double(key, value);
    else if (key == "windows_per_trigger") cfg.windows_per_trigger = parse_int(key, value);
    else if (key == "mjd_quantum_s") cfg.mjd_quantum_s = parse_double(key, value);
    else if (key == "fft_bin_hz") cfg.fft_bin_hz = parse_double(key, value);
    else if (key == "rf_ranges_hz") cfg.rf_ranges_hz = parse_ranges(key, value);
    else if (key == "delta_f_range_hz") {
        auto r = parse_ranges(key, value);
        if (r.size() != 1) throw std::invalid_argument("config key 'delta_f_range_hz': expected one range");
        cfg.delta_f_range_hz = r[0];
    }
    else if (key == "rfi_segment_hz") cfg.rfi_segment_hz = parse_double(key, value);
    else if (key == "wideband_bandwidth_hz") cfg.wideband_bandwidth_hz = parse_double(key, value);
    else if (key == "ra_bins_per_day") cfg.ra_bins_per_day = parse_int(key, value);
    else if (key == "snr_threshold_db") cfg.snr_threshold_db = parse_double(key, value);
    else if (key == "max_pulses_per_window") cfg.max_pulses_per_window = parse_int(key, value);
    else if (key == "ew_phase_filter_rad") cfg.ew_phase_filter_rad = parse_double(key, value);
    else if (key == "ddf_phase_filter_rad") cfg.ddf_phase_filter_rad = parse_double(key, value);
    else if (key == "log10_pulse_snr_like_threshold") cfg.log10_pulse_snr_like_threshold = parse_double(key, value);
    else if (key == "log10_pair_snr_like_threshold") cfg.log10_pair_snr_like_threshold = parse_double(key, value);
    else if (key == "snr_like_rule") {
        if (value == "significance_floor") cfg.snr_like_rule = SnrLikeRule::kSignificanceFloor;
        else if (value == "improbability_cap") cfg.snr_like_rule = SnrLikeRule::kImprobabilityCap;
        else throw std::invalid_argument("config key 'snr_like_rule': unknown rule '" + value + "'");
    }
    else if (key == "rfi_margin_segments") cfg.rfi_margin_segments = parse_int(key, value);
    else if (key == "rfi_window_hours") cfg.rfi_window_hours = parse_double(key, value);
    else if (key == "rfi_look_forward") cfg.rfi_look_forward = parse_bool(key, value);
    else if (key == "rfi_concentration_threshold") {
        cfg.rfi_concentration_threshold = value == "auto" ? 0 : parse_int(key, value);
    }
    else if (key == "sun_ra_halfwidth_hr") cfg.sun_ra_halfwidth_hr = parse_double(key, value);
    else if (key == "sun_mjd_min") cfg.sun_mjd_min = parse_double(key, value);
    else if (key == "doi_min_events") cfg.doi_min_events = parse_int(key, value);
    else if (key == "doi_median_d_min") cfg.doi_median_d_min = parse_double(key, value);
    else if (key == "doi_low_d_fraction_max") cfg.doi_low_d_fraction_max = parse_double(key, value);
    else if (key == "lst_ref_mjd") cfg.lst_ref_mjd = parse_double(key, value);
    else if (key == "lst_ref_lst_hr") cfg.lst_ref_lst_hr = parse_double(key, value);
    else if (key == "highvis_threshold_db") cfg.highvis_threshold_db = parse_double(key, value);
    else {
        throw std::invalid_argument("config: unknown key '" + key + "'");
    }
}

InstrumentConfig load_config_file(const std::string& path, InstrumentConfig base) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open '" + path + "'");
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        lineno++;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[' && line.back() == ']') continue;  // section header
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                        " of '" + path + "' is not key = value");
        }
        apply_config_key(base, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    base.validate();
    return base;
}

namespace {

const char* const kEnvKeys[] = {
    "baseline_wavelengths", "ref_frequency_hz", "dec_deg", "element_fwhm_deg",
    "baseline_azimuth_deg", "tau_inst_s", "integration_s", "trigger_period_s",
    "windows_per_trigger", "mjd_quantum_s", "fft_bin_hz", "rf_ranges_hz",
    "delta_f_range_hz", "rfi_segment_hz", "wideband_bandwidth_hz",
    "ra_bins_per_day", "snr_threshold_db", "max_pulses_per_window",
    "ew_phase_filter_rad",
    "ddf_phase_filter_rad", "log10_pulse_snr_like_threshold",
    "log10_pair_snr_like_threshold", "snr_like_rule", "rfi_margin_segments",
    "rfi_window_hours", "rfi_look_forward", "rfi_concentration_threshold",
    "sun_ra_halfwidth_hr", "sun_mjd_min", "doi_min_events", "doi_median_d_min",
    "doi_low_d_fraction_max", "lst_ref_mjd", "lst_ref_lst_hr",
    "highvis_threshold_db",
};

}  // namespace

void apply_env_overrides(InstrumentConfig& cfg) {
    for (const char* key : kEnvKeys) {
        std::string env = "PAIRSCAN_CFG_";
        for (const char* p = key; *p; ++p) env += static_cast<char>(std::toupper(*p));
        if (const char* value = std::getenv(env.c_str())) {
            apply_config_key(cfg, key, value);
        }
    }
}

std::string config_to_text(const InstrumentConfig& c) {
    std::ostringstream o;
    o.precision(17);
    o << "[antenna]\n"
      << "baseline_wavelengths = " << c.baseline_wavelengths << "\n"
      << "ref_frequency_hz = " << c.ref_frequency_hz << "\n"
      << "dec_deg = " << c.dec_deg << "\n"
      << "element_fwhm_deg = " << c.element_fwhm_deg << "\n"
      << "baseline_azimuth_deg = " << c.baseline_azimuth_deg << "\n"
      << "[timing]\n"
      << "tau_inst_s = " << c.tau_inst_s << "\n"
      << "integration_s = " << c.integration_s << "\n"
      << "trigger_period_s = " << c.trigger_period_s << "\n"
      << "windows_per_trigger = " << c.windows_per_trigger << "\n"
      << "mjd_quantum_s = " << c.mjd_quantum_s << "\n"
      << "[spectral]\n"
      << "fft_bin_hz = " << c.fft_bin_hz << "\n"
      << "rf_ranges_hz = ";
    for (size_t i = 0; i < c.rf_ranges_hz.size(); ++i) {
        if (i) o << ",";
        o << c.rf_ranges_hz[i].first << "-" << c.rf_ranges_hz[i].second;
    }
    o << "\n"
      << "delta_f_range_hz = " << c.delta_f_range_hz.first << "-"
      << c.delta_f_range_hz.second << "\n"
      << "rfi_segment_hz = " << c.rfi_segment_hz << "\n"
      << "wideband_bandwidth_hz = " << c.wideband_bandwidth_hz << "\n"
      << "[binning]\n"
      << "ra_bins_per_day = " << c.ra_bins_per_day << "\n"
      << "[detection]\n"
      << "snr_threshold_db = " << c.snr_threshold_db << "\n"
      << "max_pulses_per_window = " << c.max_pulses_per_window << "\n"
      << "[filters]\n"
      << "ew_phase_filter_rad = " << c.ew_phase_filter_rad << "\n"
      << "ddf_phase_filter_rad = " << c.ddf_phase_filter_rad << "\n"
      << "log10_pulse_snr_like_threshold = " << c.log10_pulse_snr_like_threshold << "\n"
      << "log10_pair_snr_like_threshold = " << c.log10_pair_snr_like_threshold << "\n"
      << "snr_like_rule = " << to_string(c.snr_like_rule) << "\n"
      << "[rfi]\n"
      << "rfi_margin_segments = " << c.rfi_margin_segments << "\n"
      << "rfi_window_hours = " << c.rfi_window_hours << "\n"
      << "rfi_look_forward = " << (c.rfi_look_forward ? "true" : "false") << "\n"
      << "rfi_concentration_threshold = ";
    if (c.rfi_concentration_threshold == 0) o << "auto";
    else o << c.rfi_concentration_threshold;
    o << "\n"
      << "[sun]\n"
      << "sun_ra_halfwidth_hr = " << c.sun_ra_halfwidth_hr << "\n"
      << "sun_mjd_min = " << c.sun_mjd_min << "\n"
      << "[doi]\n"
      << "doi_min_events = " << c.doi_min_events << "\n"
      << "doi_median_d_min = " << c.doi_median_d_min << "\n"
      << "doi_low_d_fraction_max = " << c.doi_low_d_fraction_max << "\n"
      << "[lst]\n"
      << "lst_ref_mjd = " << c.lst_ref_mjd << "\n"
      << "lst_ref_lst_hr = " << c.lst_ref_lst_hr << "\n"
      << "[diagnostics]\n"
      << "highvis_threshold_db = " << c.highvis_threshold_db << "\n";
    return o.str();
}

std::string config_digest(const InstrumentConfig& cfg) {
    return hex64(fnv1a64(config_to_text(cfg)));
}

}  // namespace pairscan
