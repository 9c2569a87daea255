#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "pairscan/pipeline.hpp"
#include "pairscan/version.hpp"

namespace {

struct CommonFlags {
    std::string scenario;
    std::string config;
    std::string out;
    int workers = 1;
    std::uint64_t seed = 0;
    bool seed_set = false;
};

const pairscan::InstrumentConfig* load_base(const std::string& path,
                                            pairscan::InstrumentConfig& storage) {
    if (path.empty()) return nullptr;
    storage = pairscan::load_config_file(path);
    return &storage;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pairscan: two-element drift-scan pulse-pair simulation and analysis"};
    app.set_version_flag("--version", std::string("pairscan ") + pairscan::kVersion);
    app.require_subcommand(1);

    CommonFlags f;
    bool no_frames = false;
    bool no_pulses = false;
    std::string ephemeris;
    std::string variants = "baseline";
    std::string seeds = "1..4";
    std::string figures;
    std::string variant_name = "baseline";
    double scan_threshold = -1e9;

    auto add_common = [&](CLI::App* cmd, bool needs_scenario) {
        if (needs_scenario) {
            cmd->add_option("--scenario", f.scenario, "scenario JSON file")->required();
        }
        cmd->add_option("--config", f.config, "base instrument config file");
        cmd->add_option("--workers", f.workers, "worker threads (output is identical for any count)");
        auto* s = cmd->add_option("--seed", f.seed, "override the scenario seed");
        s->each([&](const std::string&) { f.seed_set = true; });
    };

    auto* simulate = app.add_subcommand("simulate", "synthesize a run and write frame records");
    add_common(simulate, true);
    simulate->add_option("--out", f.out, "output directory")->required();
    simulate->add_flag("--no-frames", no_frames, "skip the frames file");

    auto* detect = app.add_subcommand("detect", "synthesize and run first-level detection");
    add_common(detect, true);
    detect->add_option("--out", f.out, "output directory")->required();
    detect->add_flag("--no-frames", no_frames, "skip the frames file");
    detect->add_flag("--no-pulses", no_pulses, "skip the single-pulse file");

    auto* excise = app.add_subcommand("excise", "RFI concentration tagging and Sun excision");
    excise->add_option("--in", f.out, "run directory")->required();
    excise->add_option("--ephemeris", ephemeris, "sun ephemeris file (mjd ra_hr dec_deg)");

    auto* analyze = app.add_subcommand("analyze", "second-level statistics per variant");
    analyze->add_option("--in", f.out, "run directory")->required();
    analyze->add_option("--variant", variants,
                        "comma list: baseline, phase_noise:<s|a..b>, tau_zero, tau:<s>, modified_filter");
    analyze->add_option("--workers", f.workers, "worker threads");

    auto* diagnose = app.add_subcommand("diagnose", "falsification battery, classification, high-visibility scan");
    diagnose->add_option("--in", f.out, "run directory")->required();
    diagnose->add_option("--seeds", seeds, "phase-noise seed range (default 1..4)");
    diagnose->add_option("--scan-threshold", scan_threshold, "visibility threshold dB_rel");

    auto* report = app.add_subcommand("report", "emit figure-data files from analysis outputs");
    report->add_option("--in", f.out, "run directory")->required();
    report->add_option("--figure", figures,
                       "comma list: fig2 fig3 fig4 fig20 fig21 fig22 fig23 fig24 fig26")
        ->required();
    report->add_option("--variant", variant_name, "analysis variant directory (default baseline)");

    CLI11_PARSE(app, argc, argv);

    try {
        pairscan::InstrumentConfig base_storage;
        const pairscan::InstrumentConfig* base = load_base(f.config, base_storage);
        pairscan::StageFlags flags;
        flags.workers = f.workers;
        flags.write_frames = !no_frames;
        flags.write_pulses = !no_pulses;
        if (f.seed_set) flags.seed_override = f.seed;

        if (simulate->parsed()) {
            pairscan::stage_simulate(f.scenario, f.out, flags, base);
        } else if (detect->parsed()) {
            pairscan::stage_detect(f.scenario, f.out, flags, base);
        } else if (excise->parsed()) {
            pairscan::stage_excise(f.out, ephemeris);
        } else if (analyze->parsed()) {
            pairscan::stage_analyze(f.out, variants, f.workers);
        } else if (diagnose->parsed()) {
            std::optional<double> thr;
            if (scan_threshold > -1e8) thr = scan_threshold;
            pairscan::stage_diagnose(f.out, seeds, thr);
        } else if (report->parsed()) {
            pairscan::stage_report(f.out, figures, variant_name);
        }
    } catch (const std::exception& e) {
        std::cerr << "pairscan: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
