#include "pairscan/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "pairscan/geometry.hpp"
#include "pairscan/version.hpp"

namespace pairscan {

namespace fs = std::filesystem;

namespace {

constexpr std::int64_t kChunkFrames = 512;

struct ChunkOut {
    std::vector<WindowRecord> windows;
    std::vector<PulseDetection> pulses;
    std::vector<PulsePairCandidate> candidates;
    SegmentCounts counts{4.0};
    std::int64_t n_windows = 0;
    std::int64_t n_bins = 0;
    std::int64_t n_detections = 0;
    std::int64_t n_saturated = 0;

    explicit ChunkOut(double rfi_window_hours) : counts(rfi_window_hours) {}
};

void process_frames(const Scenario& s, const RunOptions& opts, std::int64_t lo,
                    std::int64_t hi, ChunkOut& out) {
    const InstrumentConfig& cfg = s.config;
    for (std::int64_t i = lo; i < hi; ++i) {
        const TriggerFrame frame = synthesize_frame(s, i);
        for (int wi = 0; wi < static_cast<int>(frame.windows.size()); ++wi) {
            const WindowSpectra& w = frame.windows[static_cast<std::size_t>(wi)];
            const auto pulses = detect_pulses(w, frame.mjd, wi, cfg);
            for (const auto& p : pulses) out.counts.add(p.mjd, p.segment_index);
            const bool saturated =
                static_cast<int>(pulses.size()) > cfg.max_pulses_per_window;
            if (saturated) out.n_saturated += 1;
            auto candidates = saturated ? std::vector<PulsePairCandidate>{}
                                        : form_pairs(pulses, w, cfg);
            if (opts.inline_filter) {
                const auto events =
                    apply_phase_filters(candidates, cfg, *opts.inline_filter);
                std::vector<PulsePairCandidate> kept;
                kept.reserve(events.size());
                for (const auto& ev : events) {
                    kept.push_back(candidates[ev.candidate_index]);
                }
                candidates = std::move(kept);
            }
            out.n_windows += 1;
            out.n_bins += static_cast<std::int64_t>(w.bin_count());
            out.n_detections += static_cast<std::int64_t>(pulses.size());
            if (opts.keep_windows) {
                out.windows.push_back(summarize_window(
                    w, frame.mjd, wi, frame.beam_ra_hr,
                    static_cast<std::int64_t>(pulses.size()), cfg));
            }
            if (opts.keep_pulses) {
                out.pulses.insert(out.pulses.end(), pulses.begin(), pulses.end());
            }
            out.candidates.insert(out.candidates.end(), candidates.begin(),
                                  candidates.end());
        }
    }
}

}  // namespace

DetectResult run_detect(const Scenario& scenario, const RunOptions& opts) {
    scenario.validate();
    const std::int64_t n_frames = run_trigger_count(scenario);
    if (n_frames <= 0) throw std::invalid_argument("run_detect: empty run");
    const std::int64_t n_chunks = (n_frames + kChunkFrames - 1) / kChunkFrames;
    const int workers = std::max(1, opts.workers);

    std::vector<ChunkOut> chunks;
    chunks.reserve(static_cast<std::size_t>(n_chunks));
    for (std::int64_t i = 0; i < n_chunks; ++i) {
        chunks.emplace_back(scenario.config.rfi_window_hours);
    }

    std::atomic<std::int64_t> next{0};
    auto work = [&]() {
        for (;;) {
            const std::int64_t c = next.fetch_add(1);
            if (c >= n_chunks) break;
            const std::int64_t lo = c * kChunkFrames;
            const std::int64_t hi = std::min(n_frames, lo + kChunkFrames);
            process_frames(scenario, opts, lo, hi, chunks[static_cast<std::size_t>(c)]);
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int t = 0; t < workers; ++t) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }

    DetectResult r;
    r.rfi_counts = SegmentCounts(scenario.config.rfi_window_hours);
    r.n_triggers = n_frames;
    for (auto& c : chunks) {
        r.n_windows += c.n_windows;
        r.n_bins_examined += c.n_bins;
        r.n_detections += c.n_detections;
        r.n_saturated_windows += c.n_saturated;
        r.rfi_counts.merge(c.counts);
        r.windows.insert(r.windows.end(), c.windows.begin(), c.windows.end());
        r.pulses.insert(r.pulses.end(), c.pulses.begin(), c.pulses.end());
        r.candidates.insert(r.candidates.end(), c.candidates.begin(), c.candidates.end());
    }
    return r;
}

ExciseResult run_excise(std::vector<PulsePairCandidate> candidates,
                        const SegmentCounts& counts, const Scenario& scenario,
                        const SunEphemeris* eph) {
    ExciseResult out;
    out.threshold_used = auto_rfi_threshold(scenario);
    out.tags = tag_rfi_segments(counts, out.threshold_used,
                                scenario.config.rfi_look_forward);
    const TagIndex index(out.tags);
    out.kept = filter_by_spectral_margin(std::move(candidates), index,
                                         scenario.config, &out.excised_margin);
    if (scenario.sun || eph) {
        SunEphemeris local;
        if (!eph) {
            local = ephemeris_from_spec(*scenario.sun);
            eph = &local;
        }
        ExcisionRegion region;
        region.kind = ExcisionRegion::Kind::kSun;
        region.ra_halfwidth_hr = scenario.config.sun_ra_halfwidth_hr;
        region.mjd_min = scenario.config.sun_mjd_min;
        out.kept = excise_sun(std::move(out.kept), region, *eph, scenario.config,
                              &out.excised_sun);
        out.sun_mask = export_sun_mask(region, *eph, scenario.mjd_ranges);
    }
    return out;
}

AnalysisResult run_analysis(const std::vector<PulsePairCandidate>& candidates,
                            const Scenario& scenario,
                            const std::vector<TestVariant>& variants,
                            const SunEphemeris* eph) {
    AnalysisResult out;
    std::vector<ExcisionRegion> masks;
    SunEphemeris local;
    if (scenario.sun || eph) {
        if (!eph) {
            local = ephemeris_from_spec(*scenario.sun);
            eph = &local;
        }
        ExcisionRegion region;
        region.kind = ExcisionRegion::Kind::kSun;
        region.ra_halfwidth_hr = scenario.config.sun_ra_halfwidth_hr;
        region.mjd_min = scenario.config.sun_mjd_min;
        masks.push_back(region);
    }
    out.exposure = build_exposure(scenario.mjd_ranges, scenario.config, masks, eph);
    for (const auto& v : variants) {
        out.variants.push_back(run_variant(v, candidates, out.exposure, scenario.config));
    }
    return out;
}

Scenario load_scenario_for_run(const std::string& scenario_path,
                               const InstrumentConfig* base_config,
                               std::optional<std::uint64_t> seed_override) {
    Scenario s;
    if (base_config) {
        std::ifstream in(scenario_path);
        if (!in) throw std::runtime_error("scenario: cannot open '" + scenario_path + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        // Scenario config keys apply on top of the base config file.
        s = parse_scenario_json_with_base(ss.str(), scenario_path, *base_config);
    } else {
        s = load_scenario_json(scenario_path);
    }
    if (seed_override) s.seed = *seed_override;
    apply_env_overrides(s.config);
    s.config.validate();
    return s;
}

namespace {

class StageTimer {
public:
    StageTimer() : start_(std::chrono::steady_clock::now()) {}
    std::pair<std::string, std::string> field() const {
        const double s = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - start_)
                             .count();
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.3f", s);
        return {"wall_s", buf};
    }

private:
    std::chrono::steady_clock::time_point start_;
};

std::string analysis_dir(const std::string& out_dir, const std::string& variant) {
    return out_dir + "/analysis/" + variant;
}

void write_variant_outputs(const std::string& dir, const VariantResult& v,
                           const ExposureModel& exposure, const InstrumentConfig& cfg,
                           std::vector<std::string>& outputs) {
    fs::create_directories(dir);
    const std::string heap_path = dir + "/heap.tsv";
    const std::string bins_path = dir + "/bins.tsv";
    const std::string dois_path = dir + "/dois.tsv";
    const std::string exposure_path = dir + "/exposure.tsv";
    write_heap_file(heap_path, v.heap, cfg);
    write_bins_file(bins_path, v.heap, cfg);
    write_dois_file(dois_path, v.dois);
    write_exposure_file(exposure_path, exposure, cfg);
    outputs.insert(outputs.end(), {heap_path, bins_path, dois_path, exposure_path});
}

}  // namespace

void stage_simulate(const std::string& scenario_path, const std::string& out_dir,
                    const StageFlags& flags, const InstrumentConfig* base_config) {
    const StageTimer timer;
    const Scenario s = load_scenario_for_run(scenario_path, base_config,
                                             flags.seed_override);
    fs::create_directories(out_dir);
    manifest_init(out_dir, s, auto_rfi_threshold(s));

    RunOptions opts;
    opts.workers = flags.workers;
    opts.keep_windows = true;
    opts.keep_pulses = false;
    DetectResult r = run_detect(s, opts);

    std::vector<std::string> outputs;
    if (flags.write_frames) {
        const std::string frames_path = out_dir + "/frames.tsv";
        write_frames_file(frames_path, r.windows);
        outputs.push_back(frames_path);
    }
    if (s.sun) {
        const std::string eph_path = out_dir + "/sun_ephemeris.tsv";
        write_sun_ephemeris_file(eph_path, ephemeris_from_spec(*s.sun));
        outputs.push_back(eph_path);
    }
    manifest_stage(out_dir, "simulate",
                   {{"triggers", std::to_string(r.n_triggers)},
                    {"windows", std::to_string(r.n_windows)},
                    {"bins_examined", std::to_string(r.n_bins_examined)},
                    {"detections", std::to_string(r.n_detections)},
                    timer.field()},
                   outputs);
}

void stage_detect(const std::string& scenario_path, const std::string& out_dir,
                  const StageFlags& flags, const InstrumentConfig* base_config) {
    const StageTimer timer;
    const Scenario s = load_scenario_for_run(scenario_path, base_config,
                                             flags.seed_override);
    fs::create_directories(out_dir);
    manifest_init(out_dir, s, auto_rfi_threshold(s));

    RunOptions opts;
    opts.workers = flags.workers;
    opts.keep_windows = flags.write_frames;
    opts.keep_pulses = flags.write_pulses;
    DetectResult r = run_detect(s, opts);

    std::vector<std::string> outputs;
    if (flags.write_frames) {
        const std::string frames_path = out_dir + "/frames.tsv";
        write_frames_file(frames_path, r.windows);
        outputs.push_back(frames_path);
    }
    if (flags.write_pulses) {
        const std::string pulses_path = out_dir + "/pulses.tsv";
        write_pulses_file(pulses_path, r.pulses);
        outputs.push_back(pulses_path);
    }
    const std::string cand_path = out_dir + "/candidates.tsv";
    write_candidates_file(cand_path, r.candidates);
    outputs.push_back(cand_path);
    if (s.sun) {
        const std::string eph_path = out_dir + "/sun_ephemeris.tsv";
        write_sun_ephemeris_file(eph_path, ephemeris_from_spec(*s.sun));
        outputs.push_back(eph_path);
    }
    manifest_stage(out_dir, "detect",
                   {{"triggers", std::to_string(r.n_triggers)},
                    {"windows", std::to_string(r.n_windows)},
                    {"bins_examined", std::to_string(r.n_bins_examined)},
                    {"detections", std::to_string(r.n_detections)},
                    {"candidates", std::to_string(r.candidates.size())},
                    {"saturated_windows", std::to_string(r.n_saturated_windows)},
                    timer.field()},
                   outputs);
}

void stage_excise(const std::string& out_dir, const std::string& ephemeris_path) {
    const StageTimer timer;
    const Scenario s = manifest_scenario(out_dir);
    auto candidates = read_candidates_file(out_dir + "/candidates.tsv", s.config);
    if (!fs::exists(out_dir + "/pulses.tsv")) {
        throw std::runtime_error(
            "excise: '" + out_dir + "/pulses.tsv' is missing; rerun detect "
            "without --no-pulses (segment concentration counts come from the "
            "single-pulse stream)");
    }
    const auto pulses = read_pulses_file(out_dir + "/pulses.tsv");
    std::vector<PulseRef> refs;
    refs.reserve(pulses.size());
    for (const auto& p : pulses) refs.push_back({p.mjd, p.segment_index});
    const SegmentCounts counts =
        accumulate_segment_counts(refs, s.config.rfi_window_hours);

    SunEphemeris eph;
    const SunEphemeris* eph_ptr = nullptr;
    std::string eph_file = ephemeris_path;
    if (eph_file.empty() && fs::exists(out_dir + "/sun_ephemeris.tsv")) {
        eph_file = out_dir + "/sun_ephemeris.tsv";
    }
    if (!eph_file.empty()) {
        eph = load_sun_ephemeris(eph_file);
        eph_ptr = &eph;
    }

    ExciseResult r = run_excise(std::move(candidates), counts, s, eph_ptr);

    const std::string tags_path = out_dir + "/rfi_tags.tsv";
    const std::string kept_path = out_dir + "/candidates_kept.tsv";
    const std::string report_path = out_dir + "/excision_report.tsv";
    write_tags_file(tags_path, r.tags);
    write_candidates_file(kept_path, r.kept);
    std::vector<std::string> outputs{tags_path, kept_path, report_path};
    if (!r.sun_mask.empty() || eph_ptr) {
        const std::string mask_path = out_dir + "/sun_mask.tsv";
        write_sun_mask_file(mask_path, r.sun_mask);
        outputs.push_back(mask_path);
    }
    write_report_kv_file(
        report_path, "excision_report",
        {{"concentration_threshold", std::to_string(r.threshold_used)},
         {"tags", std::to_string(r.tags.size())},
         {"excised_by_margin", std::to_string(r.excised_margin)},
         {"excised_by_sun", std::to_string(r.excised_sun)},
         {"kept", std::to_string(r.kept.size())}});
    manifest_stage(out_dir, "excise",
                   {{"tags", std::to_string(r.tags.size())},
                    {"threshold", std::to_string(r.threshold_used)},
                    {"excised_margin", std::to_string(r.excised_margin)},
                    {"excised_sun", std::to_string(r.excised_sun)},
                    {"kept", std::to_string(r.kept.size())},
                    timer.field()},
                   outputs);
}

void stage_analyze(const std::string& out_dir, const std::string& variant_spec,
                   int workers) {
    (void)workers;  // analysis is sequential by contract (deterministic folds)
    const StageTimer timer;
    const Scenario s = manifest_scenario(out_dir);
    const std::string kept_path = out_dir + "/candidates_kept.tsv";
    const std::string cand_path =
        fs::exists(kept_path) ? kept_path : out_dir + "/candidates.tsv";
    const auto candidates = read_candidates_file(cand_path, s.config);

    SunEphemeris eph;
    const SunEphemeris* eph_ptr = nullptr;
    if (fs::exists(out_dir + "/sun_ephemeris.tsv")) {
        eph = load_sun_ephemeris(out_dir + "/sun_ephemeris.tsv");
        eph_ptr = &eph;
    }

    const auto variants = parse_variant_list(variant_spec);
    const AnalysisResult r = run_analysis(candidates, s, variants, eph_ptr);

    std::vector<std::string> outputs;
    std::vector<std::pair<std::string, std::string>> summary;
    std::optional<std::size_t> baseline_dois;
    for (const auto& v : r.variants) {
        if (v.variant.kind == TestVariant::Kind::kBaseline) baseline_dois = v.dois.size();
    }
    for (const auto& v : r.variants) {
        write_variant_outputs(analysis_dir(out_dir, v.name), v, r.exposure,
                              s.config, outputs);
        std::int64_t alias_pass = 0;
        for (const auto& ev : v.events) {
            alias_pass += ev.alias_minus_pass || ev.alias_plus_pass;
        }
        std::ostringstream line;
        line << "candidates_in=" << v.candidates_in << " events=" << v.heap.size()
             << " alias_hypothesis_pass=" << alias_pass << " dois=" << v.dois.size();
        if (baseline_dois) {
            line << " doi_delta_vs_baseline="
                 << (static_cast<std::int64_t>(v.dois.size()) -
                     static_cast<std::int64_t>(*baseline_dois));
        }
        line << " audit=" << v.config_audit;
        if (!v.note.empty()) line << " note=\"" << v.note << "\"";
        summary.emplace_back(v.name, line.str());
    }
    const std::string summary_path = out_dir + "/analysis/variants_summary.tsv";
    write_report_kv_file(summary_path, "variants_summary", summary);
    outputs.push_back(summary_path);
    manifest_stage(out_dir, "analyze",
                   {{"input", fs::relative(cand_path, out_dir).string()},
                    {"variants", std::to_string(r.variants.size())},
                    timer.field()},
                   outputs);
}

void stage_diagnose(const std::string& out_dir, const std::string& noise_seeds,
                    std::optional<double> scan_threshold_db) {
    const StageTimer timer;
    const Scenario s = manifest_scenario(out_dir);
    std::string spec = "baseline,phase_noise:" + noise_seeds + ",tau_zero,modified_filter";
    stage_analyze(out_dir, spec, 1);

    // Classification: default vs modified strength at every default-variant
    // DOI bin plus every modified-variant DOI bin.
    const std::string kept_path = out_dir + "/candidates_kept.tsv";
    const std::string cand_path =
        fs::exists(kept_path) ? kept_path : out_dir + "/candidates.tsv";
    const auto candidates = read_candidates_file(cand_path, s.config);
    SunEphemeris eph;
    const SunEphemeris* eph_ptr = nullptr;
    if (fs::exists(out_dir + "/sun_ephemeris.tsv")) {
        eph = load_sun_ephemeris(out_dir + "/sun_ephemeris.tsv");
        eph_ptr = &eph;
    }
    TestVariant baseline;
    TestVariant modified;
    modified.kind = TestVariant::Kind::kModifiedFilter;
    const AnalysisResult r =
        run_analysis(candidates, s, {baseline, modified}, eph_ptr);
    const VariantResult& vb = r.variants[0];
    const VariantResult& vm = r.variants[1];
    std::vector<int> bins;
    for (const auto& d : vb.dois) bins.push_back(d.central_bin);
    for (const auto& d : vm.dois) bins.push_back(d.central_bin);
    std::sort(bins.begin(), bins.end());
    bins.erase(std::unique(bins.begin(), bins.end()), bins.end());
    std::vector<std::pair<std::string, std::string>> rows;
    for (int b : bins) {
        const auto c = classify_bin(vb, vm, b, s.config);
        std::ostringstream line;
        line << "default_count=" << c.default_count
             << " modified_count=" << c.modified_count
             << " rfi_like=" << (c.rfi_like ? "true" : "false");
        rows.emplace_back(std::to_string(b), line.str());
    }
    const std::string classify_path = out_dir + "/analysis/classification.tsv";
    write_report_kv_file(classify_path, "classification", rows);

    // High-visibility scan over the persisted window records.
    std::vector<std::string> outputs{classify_path};
    if (fs::exists(out_dir + "/frames.tsv")) {
        const auto windows = read_frames_file(out_dir + "/frames.tsv");
        const double thr = scan_threshold_db.value_or(s.config.highvis_threshold_db);
        const auto hits = high_visibility_scan(windows, thr);
        const std::string hv_path = out_dir + "/analysis/highvis.tsv";
        write_highvis_file(hv_path, hits);
        outputs.push_back(hv_path);
    }
    manifest_stage(out_dir, "diagnose",
                   {{"classified_bins", std::to_string(bins.size())}, timer.field()},
                   outputs);
}

void stage_report(const std::string& out_dir, const std::string& figure_spec,
                  const std::string& variant_name) {
    const StageTimer timer;
    const Scenario s = manifest_scenario(out_dir);
    const InstrumentConfig& cfg = s.config;
    const std::string vdir = analysis_dir(out_dir, variant_name);
    if (!fs::exists(vdir + "/heap.tsv")) {
        throw std::runtime_error("report: no analysis outputs for variant '" +
                                 variant_name + "' in " + out_dir);
    }
    const auto heap = read_heap_file(vdir + "/heap.tsv");
    const std::string fig_dir = vdir + "/figs";
    fs::create_directories(fig_dir);

    const int alias = alias_offset_bins(
        fringe_period_ra_hr(cfg.baseline_wavelengths, cfg.dec_deg),
        cfg.ra_bin_width_hr());
    const auto nbins = static_cast<std::size_t>(cfg.ra_bins_per_day);

    std::vector<std::string> outputs;
    std::stringstream ss(figure_spec);
    std::string which;
    while (std::getline(ss, which, ',')) {
        if (which.empty()) continue;
        const std::string path = fig_dir + "/" + which + ".tsv";
        if (which == "fig2") {
            // Per-event d in the central and aliased panels around each DOI.
            const std::vector<DoiReport> dois = detect_dois(heap, cfg);
            std::ofstream out(path, std::ios::binary);
            out << "# pairscan fig2 v" << kFileFormatVersion << "\n";
            out << "doi_bin panel bin ra_center_hr rank d\n";
            const auto n = static_cast<int>(nbins);
            for (const auto& doi : dois) {
                for (int panel = -1; panel <= 1; ++panel) {
                    const int center = doi.central_bin + panel * alias;
                    for (const auto& h : heap) {
                        int dist = std::abs(h.ra_bin - ((center % n + n) % n));
                        dist = std::min(dist, n - dist);
                        if (dist > 1) continue;
                        out << doi.central_bin << ' ' << panel << ' ' << h.ra_bin << ' '
                            << fmt17(bin_center_ra_hr(h.ra_bin, cfg)) << ' ' << h.rank
                            << ' ' << fmt17(h.cohens_d) << "\n";
                    }
                }
            }
        } else if (which == "fig3" || which == "fig23") {
            // Per-bin counts; fig3 restricts to events with d > -2.
            std::vector<std::int64_t> count(nbins, 0);
            for (const auto& h : heap) {
                if (which == "fig3" && !(h.cohens_d > -2.0)) continue;
                count[static_cast<std::size_t>(h.ra_bin)]++;
            }
            std::ofstream out(path, std::ios::binary);
            out << "# pairscan " << which << " v" << kFileFormatVersion << "\n";
            out << "bin ra_center_hr count\n";
            for (std::size_t k = 0; k < nbins; ++k) {
                out << k << ' ' << fmt17(bin_center_ra_hr(static_cast<int>(k), cfg))
                    << ' ' << count[k] << "\n";
            }
        } else if (which == "fig4" || which == "fig21" || which == "fig22" ||
                   which == "fig24") {
            // Full-RA per-event d; fig22/fig24 conventionally come from a
            // phase-noise variant directory.
            std::ofstream out(path, std::ios::binary);
            out << "# pairscan " << which << " v" << kFileFormatVersion << "\n";
            out << "bin ra_center_hr rank d\n";
            for (const auto& h : heap) {
                out << h.ra_bin << ' ' << fmt17(bin_center_ra_hr(h.ra_bin, cfg)) << ' '
                    << h.rank << ' ' << fmt17(h.cohens_d) << "\n";
            }
        } else if (which == "fig20") {
            const auto exposure = read_exposure_file(vdir + "/exposure.tsv");
            std::ofstream out(path, std::ios::binary);
            out << "# pairscan fig20 v" << kFileFormatVersion << "\n";
            out << "bin ra_center_hr p\n";
            for (std::size_t k = 0; k < exposure.p.size(); ++k) {
                out << k << ' ' << fmt17(bin_center_ra_hr(static_cast<int>(k), cfg))
                    << ' ' << fmt17(exposure.p[k]) << "\n";
            }
        } else if (which == "fig26") {
            const auto windows = read_frames_file(out_dir + "/frames.tsv");
            const auto hits = high_visibility_scan(windows, cfg.highvis_threshold_db);
            std::ofstream out(path, std::ios::binary);
            out << "# pairscan fig26 v" << kFileFormatVersion << "\n";
            out << "mjd beam_ra_hr vis_db\n";
            for (const auto& w : hits) {
                out << fmt17(w.mjd) << ' ' << fmt17(w.beam_ra_hr) << ' '
                    << fmt17(w.visibility_mag_db_rel) << "\n";
            }
        } else {
            throw std::invalid_argument("report: unknown figure class '" + which + "'");
        }
        outputs.push_back(path);
    }
    manifest_stage(out_dir, "report_" + variant_name,
                   {{"figures", figure_spec}, timer.field()}, outputs);
}

}  // namespace pairscan
