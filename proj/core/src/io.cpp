#include "pairscan/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "pairscan/geometry.hpp"
#include "pairscan/hash.hpp"
#include "pairscan/version.hpp"

namespace pairscan {

using nlohmann::json;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string file_digest_hex(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("digest: cannot open '" + path + "'");
    std::uint64_t h = 0xCBF29CE484222325ULL;
    char buf[65536];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        h = fnv1a64(std::string_view(buf, static_cast<std::size_t>(in.gcount())), h);
    }
    return hex64(h);
}

namespace {

class TsvWriter {
public:
    TsvWriter(const std::string& path, const std::string& kind,
              const std::string& header) {
        out_.open(path, std::ios::binary);
        if (!out_) throw std::runtime_error("cannot open '" + path + "' for writing");
        out_ << "# pairscan " << kind << " v" << kFileFormatVersion << "\n";
        out_ << header << "\n";
    }

    void meta(const std::string& key, const std::string& value) {
        out_ << "# " << key << " = " << value << "\n";
    }

    std::ostream& row() { return out_; }

private:
    std::ofstream out_;
};

class TsvReader {
public:
    TsvReader(const std::string& path, const std::string& kind) : path_(path) {
        in_.open(path, std::ios::binary);
        if (!in_) throw std::runtime_error("cannot open '" + path + "'");
        std::string first;
        if (!std::getline(in_, first) ||
            first.rfind("# pairscan " + kind, 0) != 0) {
            throw std::runtime_error("'" + path + "' is not a pairscan " + kind + " file");
        }
    }

    bool next(std::vector<std::string>& fields) {
        std::string line;
        while (std::getline(in_, line)) {
            if (line.empty() || line[0] == '#') continue;
            if (!header_skipped_) {  // column-name row
                header_skipped_ = true;
                continue;
            }
            fields.clear();
            std::istringstream ss(line);
            std::string f;
            while (ss >> f) fields.push_back(f);
            if (!fields.empty()) return true;
        }
        return false;
    }

    const std::string& path() const { return path_; }

private:
    std::string path_;
    std::ifstream in_;
    bool header_skipped_ = false;
};

double to_d(const std::string& s) { return std::strtod(s.c_str(), nullptr); }
std::int64_t to_i(const std::string& s) { return std::strtoll(s.c_str(), nullptr, 10); }

}  // namespace

void write_candidates_file(const std::string& path,
                           const std::vector<PulsePairCandidate>& candidates) {
    TsvWriter w(path, "candidates",
                "mjd window f1_hz f2_hz delta_f_hz snr_e1 snr_w1 snr_e2 snr_w2 "
                "phi_e1 phi_w1 phi_e2 phi_w2 seg1 seg2 p954_e p954_w pwide_e "
                "pwide_w vis_db log10_df_like log10_snr_like_p1 log10_snr_like_p2 "
                "log10_snr_like_pair rfi_margin_seg rf_low_hz cand_id");
    for (const auto& c : candidates) {
        const auto& a = c.assoc;
        w.row() << fmt17(c.pulse1.mjd) << ' ' << c.pulse1.window_index << ' '
                << fmt17(c.pulse1.freq_hz) << ' ' << fmt17(c.pulse2.freq_hz) << ' '
                << fmt17(c.delta_f_hz) << ' ' << fmt17(c.pulse1.snr_db_east) << ' '
                << fmt17(c.pulse1.snr_db_west) << ' ' << fmt17(c.pulse2.snr_db_east) << ' '
                << fmt17(c.pulse2.snr_db_west) << ' ' << fmt17(c.pulse1.phase_east_rad) << ' '
                << fmt17(c.pulse1.phase_west_rad) << ' ' << fmt17(c.pulse2.phase_east_rad) << ' '
                << fmt17(c.pulse2.phase_west_rad) << ' ' << c.pulse1.segment_index << ' '
                << c.pulse2.segment_index << ' ' << fmt17(a.east_power_954) << ' '
                << fmt17(a.west_power_954) << ' ' << fmt17(a.east_power_wide) << ' '
                << fmt17(a.west_power_wide) << ' ' << fmt17(a.visibility_mag_db_rel) << ' '
                << fmt17(a.log10_df_likelihood) << ' ' << fmt17(a.log10_snr_likelihood_pulse1) << ' '
                << fmt17(a.log10_snr_likelihood_pulse2) << ' ' << fmt17(a.log10_snr_likelihood_pair) << ' '
                << fmt17(a.rfi_spectral_margin_segments) << ' ' << fmt17(a.rf_low_freq_hz) << ' '
                << c.candidate_id << "\n";
    }
}

std::vector<PulsePairCandidate> read_candidates_file(const std::string& path,
                                                     const InstrumentConfig& cfg) {
    TsvReader r(path, "candidates");
    std::vector<PulsePairCandidate> out;
    std::vector<std::string> f;
    while (r.next(f)) {
        if (f.size() != 27) {
            throw std::runtime_error("'" + path + "': bad candidate row width");
        }
        PulsePairCandidate c;
        const double mjd = to_d(f[0]);
        const int win = static_cast<int>(to_i(f[1]));
        c.pulse1.mjd = c.pulse2.mjd = mjd;
        c.pulse1.window_index = c.pulse2.window_index = win;
        c.pulse1.freq_hz = to_d(f[2]);
        c.pulse2.freq_hz = to_d(f[3]);
        c.pulse1.bin_index = std::llround(c.pulse1.freq_hz / cfg.fft_bin_hz);
        c.pulse2.bin_index = std::llround(c.pulse2.freq_hz / cfg.fft_bin_hz);
        c.delta_f_hz = to_d(f[4]);
        c.pulse1.snr_db_east = to_d(f[5]);
        c.pulse1.snr_db_west = to_d(f[6]);
        c.pulse2.snr_db_east = to_d(f[7]);
        c.pulse2.snr_db_west = to_d(f[8]);
        c.pulse1.phase_east_rad = to_d(f[9]);
        c.pulse1.phase_west_rad = to_d(f[10]);
        c.pulse2.phase_east_rad = to_d(f[11]);
        c.pulse2.phase_west_rad = to_d(f[12]);
        c.pulse1.segment_index = to_i(f[13]);
        c.pulse2.segment_index = to_i(f[14]);
        auto& a = c.assoc;
        a.east_power_954 = to_d(f[15]);
        a.west_power_954 = to_d(f[16]);
        a.east_power_wide = to_d(f[17]);
        a.west_power_wide = to_d(f[18]);
        a.visibility_mag_db_rel = to_d(f[19]);
        a.log10_df_likelihood = to_d(f[20]);
        a.log10_snr_likelihood_pulse1 = to_d(f[21]);
        a.log10_snr_likelihood_pulse2 = to_d(f[22]);
        a.log10_snr_likelihood_pair = to_d(f[23]);
        a.rfi_spectral_margin_segments = to_d(f[24]);
        a.rf_low_freq_hz = to_d(f[25]);
        c.candidate_id = std::strtoull(f[26].c_str(), nullptr, 10);
        out.push_back(c);
    }
    return out;
}

void write_pulses_file(const std::string& path,
                       const std::vector<PulseDetection>& pulses) {
    TsvWriter w(path, "pulses",
                "mjd window bin freq_hz segment snr_e snr_w phi_e phi_w");
    for (const auto& p : pulses) {
        w.row() << fmt17(p.mjd) << ' ' << p.window_index << ' ' << p.bin_index << ' '
                << fmt17(p.freq_hz) << ' ' << p.segment_index << ' '
                << fmt17(p.snr_db_east) << ' ' << fmt17(p.snr_db_west) << ' '
                << fmt17(p.phase_east_rad) << ' ' << fmt17(p.phase_west_rad) << "\n";
    }
}

std::vector<PulseDetection> read_pulses_file(const std::string& path) {
    TsvReader r(path, "pulses");
    std::vector<PulseDetection> out;
    std::vector<std::string> f;
    while (r.next(f)) {
        if (f.size() != 9) throw std::runtime_error("'" + path + "': bad pulse row width");
        PulseDetection p;
        p.mjd = to_d(f[0]);
        p.window_index = static_cast<int>(to_i(f[1]));
        p.bin_index = to_i(f[2]);
        p.freq_hz = to_d(f[3]);
        p.segment_index = to_i(f[4]);
        p.snr_db_east = to_d(f[5]);
        p.snr_db_west = to_d(f[6]);
        p.phase_east_rad = to_d(f[7]);
        p.phase_west_rad = to_d(f[8]);
        out.push_back(p);
    }
    return out;
}

void write_frames_file(const std::string& path,
                       const std::vector<WindowRecord>& windows) {
    TsvWriter w(path, "frames",
                "mjd window beam_ra_hr n_bins wb_power_e wb_power_w vis_re vis_im "
                "vis_db n_det");
    for (const auto& r : windows) {
        w.row() << fmt17(r.mjd) << ' ' << r.window_index << ' ' << fmt17(r.beam_ra_hr)
                << ' ' << r.n_bins << ' ' << fmt17(r.wideband_power_east) << ' '
                << fmt17(r.wideband_power_west) << ' ' << fmt17(r.visibility.real())
                << ' ' << fmt17(r.visibility.imag()) << ' '
                << fmt17(r.visibility_mag_db_rel) << ' ' << r.n_detections << "\n";
    }
}

std::vector<WindowRecord> read_frames_file(const std::string& path) {
    TsvReader r(path, "frames");
    std::vector<WindowRecord> out;
    std::vector<std::string> f;
    while (r.next(f)) {
        if (f.size() != 10) throw std::runtime_error("'" + path + "': bad frame row width");
        WindowRecord w;
        w.mjd = to_d(f[0]);
        w.window_index = static_cast<int>(to_i(f[1]));
        w.beam_ra_hr = to_d(f[2]);
        w.n_bins = to_i(f[3]);
        w.wideband_power_east = to_d(f[4]);
        w.wideband_power_west = to_d(f[5]);
        w.visibility = {to_d(f[6]), to_d(f[7])};
        w.visibility_mag_db_rel = to_d(f[8]);
        w.n_detections = to_i(f[9]);
        out.push_back(w);
    }
    return out;
}

void write_tags_file(const std::string& path, const std::vector<SegmentTag>& tags) {
    TsvWriter w(path, "rfi_tags",
                "segment accum_start_mjd accum_end_mjd valid_start_mjd valid_end_mjd count");
    for (const auto& t : tags) {
        w.row() << t.segment_index << ' ' << fmt17(t.accum_start_mjd) << ' '
                << fmt17(t.accum_end_mjd) << ' ' << fmt17(t.valid_start_mjd) << ' '
                << fmt17(t.valid_end_mjd) << ' ' << t.count << "\n";
    }
}

std::vector<SegmentTag> read_tags_file(const std::string& path) {
    TsvReader r(path, "rfi_tags");
    std::vector<SegmentTag> out;
    std::vector<std::string> f;
    while (r.next(f)) {
        if (f.size() != 6) throw std::runtime_error("'" + path + "': bad tag row width");
        SegmentTag t;
        t.segment_index = to_i(f[0]);
        t.accum_start_mjd = to_d(f[1]);
        t.accum_end_mjd = to_d(f[2]);
        t.valid_start_mjd = to_d(f[3]);
        t.valid_end_mjd = to_d(f[4]);
        t.count = to_i(f[5]);
        out.push_back(t);
    }
    return out;
}

void write_sun_mask_file(const std::string& path, const std::vector<MaskRow>& rows) {
    TsvWriter w(path, "sun_mask", "mjd_start mjd_end ra_lo_hr ra_hi_hr");
    for (const auto& r : rows) {
        w.row() << fmt17(r.mjd_start) << ' ' << fmt17(r.mjd_end) << ' '
                << fmt17(r.ra_lo_hr) << ' ' << fmt17(r.ra_hi_hr) << "\n";
    }
}

void write_sun_ephemeris_file(const std::string& path, const SunEphemeris& eph) {
    TsvWriter w(path, "sun_ephemeris", "mjd ra_hr dec_deg");
    for (const auto& r : eph.rows) {
        w.row() << fmt17(r.mjd) << ' ' << fmt17(r.ra_hr) << ' ' << fmt17(r.dec_deg) << "\n";
    }
}

void write_exposure_file(const std::string& path, const ExposureModel& exposure,
                         const InstrumentConfig& cfg) {
    TsvWriter w(path, "exposure", "bin ra_center_hr exposure_s p");
    for (std::size_t k = 0; k < exposure.p.size(); ++k) {
        w.row() << k << ' ' << fmt17(bin_center_ra_hr(static_cast<int>(k), cfg)) << ' '
                << fmt17(exposure.exposure_s[k]) << ' ' << fmt17(exposure.p[k]) << "\n";
    }
}

ExposureModel read_exposure_file(const std::string& path) {
    TsvReader r(path, "exposure");
    ExposureModel m;
    std::vector<std::string> f;
    while (r.next(f)) {
        if (f.size() != 4) throw std::runtime_error("'" + path + "': bad exposure row width");
        m.exposure_s.push_back(to_d(f[2]));
        m.p.push_back(to_d(f[3]));
        m.total_s += to_d(f[2]);
    }
    return m;
}

void write_heap_file(const std::string& path, const std::vector<HeapRecord>& heap,
                     const InstrumentConfig& cfg) {
    TsvWriter w(path, "heap",
                "rank abs_ddf_rad bin ra_center_hr cum_count d null_z dew1 dew2 mjd cand_id");
    for (const auto& h : heap) {
        w.row() << h.rank << ' ' << fmt17(h.abs_ddf_phase) << ' ' << h.ra_bin << ' '
                << fmt17(bin_center_ra_hr(h.ra_bin, cfg)) << ' ' << h.cum_count << ' '
                << fmt17(h.cohens_d) << ' ' << fmt17(h.null_z) << ' '
                << fmt17(h.d_ew_phi_1) << ' ' << fmt17(h.d_ew_phi_2) << ' '
                << fmt17(h.mjd) << ' ' << h.candidate_id << "\n";
    }
}

std::vector<HeapRecord> read_heap_file(const std::string& path) {
    TsvReader r(path, "heap");
    std::vector<HeapRecord> out;
    std::vector<std::string> f;
    while (r.next(f)) {
        if (f.size() != 11) throw std::runtime_error("'" + path + "': bad heap row width");
        HeapRecord h;
        h.rank = to_i(f[0]);
        h.abs_ddf_phase = to_d(f[1]);
        h.ra_bin = static_cast<int>(to_i(f[2]));
        h.cum_count = to_i(f[4]);
        h.cohens_d = to_d(f[5]);
        h.null_z = to_d(f[6]);
        h.d_ew_phi_1 = to_d(f[7]);
        h.d_ew_phi_2 = to_d(f[8]);
        h.mjd = to_d(f[9]);
        h.candidate_id = std::strtoull(f[10].c_str(), nullptr, 10);
        out.push_back(h);
    }
    return out;
}

void write_bins_file(const std::string& path, const std::vector<HeapRecord>& heap,
                     const InstrumentConfig& cfg) {
    const auto nbins = static_cast<std::size_t>(cfg.ra_bins_per_day);
    std::vector<std::int64_t> count(nbins, 0);
    std::vector<std::int64_t> count_d_gt_m2(nbins, 0);
    std::vector<std::vector<double>> ds(nbins);
    for (const auto& h : heap) {
        const auto k = static_cast<std::size_t>(h.ra_bin);
        count[k]++;
        if (h.cohens_d > -2.0) count_d_gt_m2[k]++;
        ds[k].push_back(h.cohens_d);
    }
    TsvWriter w(path, "bins", "bin ra_center_hr count max_d median_d count_d_gt_m2");
    w.meta("events", std::to_string(heap.size()));
    const double mean_count =
        static_cast<double>(heap.size()) / static_cast<double>(nbins);
    w.meta("mean_count_per_bin", fmt17(mean_count));
    for (std::size_t k = 0; k < nbins; ++k) {
        double max_d = 0.0, median_d = 0.0;
        if (!ds[k].empty()) {
            std::sort(ds[k].begin(), ds[k].end());
            max_d = ds[k].back();
            const std::size_t n = ds[k].size();
            median_d = n % 2 ? ds[k][n / 2] : 0.5 * (ds[k][n / 2 - 1] + ds[k][n / 2]);
        }
        w.row() << k << ' ' << fmt17(bin_center_ra_hr(static_cast<int>(k), cfg)) << ' '
                << count[k] << ' ' << fmt17(max_d) << ' ' << fmt17(median_d) << ' '
                << count_d_gt_m2[k] << "\n";
    }
}

void write_dois_file(const std::string& path, const std::vector<DoiReport>& dois) {
    TsvWriter w(path, "dois",
                "bin ra_center_hr count merged_count adj_lo_count adj_hi_count "
                "alias_lo_count alias_lo_max_d alias_hi_count alias_hi_max_d "
                "median_d max_d frac_d_gt_3 frac_d_lt_0 classification");
    for (const auto& d : dois) {
        w.row() << d.central_bin << ' ' << fmt17(d.center_ra_hr) << ' ' << d.count << ' '
                << d.merged_count << ' ' << d.adjacent_lo_count << ' '
                << d.adjacent_hi_count << ' ' << d.alias_lo_count << ' '
                << fmt17(d.alias_lo_max_d) << ' ' << d.alias_hi_count << ' '
                << fmt17(d.alias_hi_max_d) << ' ' << fmt17(d.median_d) << ' '
                << fmt17(d.max_d) << ' ' << fmt17(d.fraction_d_above_3) << ' '
                << fmt17(d.fraction_d_below_0) << ' '
                << (d.classification.empty() ? "-" : d.classification) << "\n";
    }
}

void write_report_kv_file(const std::string& path, const std::string& kind,
                          const std::vector<std::pair<std::string, std::string>>& rows) {
    TsvWriter w(path, kind, "key value");
    for (const auto& [k, v] : rows) w.row() << k << ' ' << v << "\n";
}

void write_highvis_file(const std::string& path,
                        const std::vector<WindowRecord>& windows) {
    TsvWriter w(path, "highvis", "mjd window beam_ra_hr vis_db");
    for (const auto& r : windows) {
        w.row() << fmt17(r.mjd) << ' ' << r.window_index << ' ' << fmt17(r.beam_ra_hr)
                << ' ' << fmt17(r.visibility_mag_db_rel) << "\n";
    }
}

namespace {
std::string manifest_path(const std::string& dir) { return dir + "/manifest.json"; }
}  // namespace

bool manifest_exists(const std::string& dir) {
    return std::filesystem::exists(manifest_path(dir));
}

void manifest_init(const std::string& dir, const Scenario& scenario,
                   std::int64_t rfi_threshold_effective) {
    std::filesystem::create_directories(dir);
    json j;
    j["format_version"] = kFileFormatVersion;
    j["tool"] = std::string("pairscan ") + kVersion;
    j["scenario"] = json::parse(scenario_to_json(scenario));
    j["scenario_digest"] = scenario_digest(scenario);
    j["config_digest"] = config_digest(scenario.config);
    const double duty = scenario.config.windows_per_trigger *
                        scenario.config.integration_s /
                        scenario.config.trigger_period_s;
    j["duty_cycle"] = {
        {"fraction", duty},
        {"note",
         "two 0.27 s adjacent windows per 3.0 s trigger (0.18); the quoted "
         "instrument duty cycle of 1/6 differs slightly from the window "
         "arithmetic and is recorded here"}};
    j["statistics"] = {
        {"snr_like_rule", to_string(scenario.config.snr_like_rule)},
        {"snr_like_statistic",
         "excess-over-threshold exponential tail: per pulse log10 P(E>=s_e) + "
         "log10 P(E>=s_w) - log10 P(both>=thr); pair value is the sum"},
        {"log10_pulse_snr_like_threshold", scenario.config.log10_pulse_snr_like_threshold},
        {"log10_pair_snr_like_threshold", scenario.config.log10_pair_snr_like_threshold},
        {"noise_floor",
         "per-segment median bin power / ln 2; detection floor is the median "
         "of the window's segment estimates per element"},
        {"rfi_concentration_threshold_effective", rfi_threshold_effective},
        {"delta_f_rate_per_hz", awgn_pulse_rate_per_hz(scenario.config)}};
    j["modules"] = {{"geometry", kVersion}, {"scenario", kVersion},
                    {"simulator", kVersion}, {"first_level", kVersion},
                    {"rfi", kVersion},       {"second_level", kVersion},
                    {"diagnostics", kVersion}, {"io", kVersion}};
    j["stages"] = json::object();
    std::ofstream out(manifest_path(dir), std::ios::binary);
    out << j.dump(2) << "\n";
}

void manifest_stage(const std::string& dir, const std::string& stage,
                    const std::vector<std::pair<std::string, std::string>>& fields,
                    const std::vector<std::string>& output_paths) {
    std::ifstream in(manifest_path(dir));
    if (!in) throw std::runtime_error("manifest: missing in '" + dir + "'");
    json j = json::parse(in);
    in.close();
    json s = json::object();
    for (const auto& [k, v] : fields) s[k] = v;
    json outputs = json::array();
    for (const auto& p : output_paths) {
        outputs.push_back({{"path", std::filesystem::relative(p, dir).string()},
                           {"bytes", std::filesystem::file_size(p)},
                           {"fnv64", file_digest_hex(p)}});
    }
    s["outputs"] = outputs;
    j["stages"][stage] = s;
    std::ofstream out(manifest_path(dir), std::ios::binary);
    out << j.dump(2) << "\n";
}

Scenario manifest_scenario(const std::string& dir) {
    std::ifstream in(manifest_path(dir));
    if (!in) throw std::runtime_error("manifest: missing in '" + dir + "'");
    json j = json::parse(in);
    return parse_scenario_json(j["scenario"].dump(), dir + "/manifest.json");
}

}  // namespace pairscan
