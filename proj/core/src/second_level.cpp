#include "pairscan/second_level.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pairscan/geometry.hpp"
#include "pairscan/simulator.hpp"

namespace pairscan {

namespace {
double median_of_sorted(std::vector<double>& v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    if (n == 0) return 0.0;
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}
}  // namespace

ExposureModel build_exposure(const std::vector<std::pair<double, double>>& mjd_ranges,
                             const InstrumentConfig& cfg,
                             const std::vector<ExcisionRegion>& masks,
                             const SunEphemeris* eph) {
    ExposureModel model;
    model.exposure_s.assign(static_cast<std::size_t>(cfg.ra_bins_per_day), 0.0);

    Scenario grid;  // trigger enumeration only
    grid.config = cfg;
    grid.mjd_ranges = mjd_ranges;
    for_each_trigger(grid, [&](std::int64_t, double mjd, double beam_ra) {
        for (const auto& region : masks) {
            if (region.kind == ExcisionRegion::Kind::kSun && !eph) {
                throw std::invalid_argument("build_exposure: sun mask without ephemeris");
            }
            if (sun_excluded(mjd, beam_ra, region,
                             eph ? *eph : SunEphemeris{})) {
                return;
            }
        }
        model.exposure_s[static_cast<std::size_t>(ra_bin_of(beam_ra, cfg))] +=
            cfg.trigger_period_s;
    });

    for (double e : model.exposure_s) model.total_s += e;
    if (model.total_s <= 0.0) {
        throw std::invalid_argument("build_exposure: zero total exposure");
    }
    model.p.resize(model.exposure_s.size());
    for (std::size_t k = 0; k < model.p.size(); ++k) {
        model.p[k] = model.exposure_s[k] / model.total_s;
    }
    return model;
}

PhaseFilterOptions default_phase_options(const InstrumentConfig& cfg) {
    PhaseFilterOptions o;
    o.ew_halfwidth_rad = cfg.ew_phase_filter_rad;
    o.ddf_lo_rad = 0.0;
    o.ddf_hi_rad = cfg.ddf_phase_filter_rad;
    return o;
}

std::vector<AnalyzedEvent> apply_phase_filters(
    const std::vector<PulsePairCandidate>& candidates, const InstrumentConfig& cfg,
    const PhaseFilterOptions& opts) {
    const double tau = opts.tau_override_s.value_or(cfg.tau_inst_s);
    const int alias = alias_offset_bins(
        fringe_period_ra_hr(cfg.baseline_wavelengths, cfg.dec_deg),
        cfg.ra_bin_width_hr());
    const int nbins = cfg.ra_bins_per_day;

    std::vector<AnalyzedEvent> out;
    for (std::size_t idx = 0; idx < candidates.size(); ++idx) {
        const PulsePairCandidate& c = candidates[idx];
        const double beam_ra = beam_ra_at(c.pulse1.mjd, cfg);
        const int k0 = ra_bin_of(beam_ra, cfg);

        const double phi_e1 = c.pulse1.phase_east_rad;
        const double phi_e2 = c.pulse2.phase_east_rad;

        auto residuals = [&](int bin, double& d1, double& d2, double& ddf) {
            const double h = hour_angle_rad(beam_ra, bin_center_ra_hr(bin, cfg));
            d1 = wrap_phase(phi_e1 - c.pulse1.phase_west_rad -
                            expected_ew_phase(c.pulse1.freq_hz, h, cfg, tau));
            d2 = wrap_phase(phi_e2 - c.pulse2.phase_west_rad -
                            expected_ew_phase(c.pulse2.freq_hz, h, cfg, tau));
            ddf = wrap_phase(d2 - d1);
        };
        auto passes = [&](double d1, double d2, double ddf) {
            return std::abs(d1) <= opts.ew_halfwidth_rad &&
                   std::abs(d2) <= opts.ew_halfwidth_rad &&
                   std::abs(ddf) >= opts.ddf_lo_rad &&
                   std::abs(ddf) <= opts.ddf_hi_rad;
        };

        double d1, d2, ddf;
        residuals(k0, d1, d2, ddf);
        if (!passes(d1, d2, ddf)) continue;

        AnalyzedEvent ev;
        ev.candidate_index = idx;
        ev.candidate_id = c.candidate_id;
        ev.ra_bin = k0;
        ev.mjd = c.pulse1.mjd;
        ev.f1_hz = c.pulse1.freq_hz;
        ev.d_ew_phi_1 = d1;
        ev.d_ew_phi_2 = d2;
        ev.d_df_d_ew_phi = ddf;
        if (opts.evaluate_alias) {
            double a1, a2, addf;
            residuals(((k0 - alias) % nbins + nbins) % nbins, a1, a2, addf);
            ev.alias_minus_pass = passes(a1, a2, addf);
            residuals((k0 + alias) % nbins, a1, a2, addf);
            ev.alias_plus_pass = passes(a1, a2, addf);
        }
        out.push_back(ev);
    }
    return out;
}

std::vector<HeapRecord> build_sorted_heap(const std::vector<AnalyzedEvent>& events) {
    std::vector<HeapRecord> heap;
    heap.reserve(events.size());
    for (const auto& ev : events) {
        HeapRecord r;
        r.abs_ddf_phase = std::abs(ev.d_df_d_ew_phi);
        r.ra_bin = ev.ra_bin;
        r.candidate_id = ev.candidate_id;
        r.candidate_index = ev.candidate_index;
        r.d_ew_phi_1 = ev.d_ew_phi_1;
        r.d_ew_phi_2 = ev.d_ew_phi_2;
        r.mjd = ev.mjd;
        heap.push_back(r);
    }
    std::sort(heap.begin(), heap.end(), [](const HeapRecord& a, const HeapRecord& b) {
        if (a.abs_ddf_phase != b.abs_ddf_phase) return a.abs_ddf_phase < b.abs_ddf_phase;
        if (a.mjd != b.mjd) return a.mjd < b.mjd;
        return a.candidate_id < b.candidate_id;
    });
    for (std::size_t i = 0; i < heap.size(); ++i) {
        heap[i].rank = static_cast<std::int64_t>(i) + 1;
    }
    return heap;
}

void cohens_d_stream(std::vector<HeapRecord>& heap, const ExposureModel& exposure) {
    std::vector<std::int64_t> counts(exposure.p.size(), 0);
    for (auto& rec : heap) {
        const auto k = static_cast<std::size_t>(rec.ra_bin);
        if (k >= exposure.p.size()) throw std::out_of_range("cohens_d_stream: bin out of range");
        const double p = exposure.p[k];
        if (p <= 0.0) {
            throw std::invalid_argument("cohens_d_stream: event in unobserved RA bin " +
                                        std::to_string(rec.ra_bin));
        }
        counts[k] += 1;
        rec.cum_count = counts[k];
        const double n = static_cast<double>(rec.rank);
        rec.cohens_d = (static_cast<double>(rec.cum_count) - n * p) /
                       std::sqrt(n * p * (1.0 - p));
        if (rec.rank >= 2) {
            const double m = n - 1.0;
            rec.null_z = (static_cast<double>(rec.cum_count - 1) - m * p) /
                         std::sqrt(m * p * (1.0 - p));
        } else {
            rec.null_z = 0.0;
        }
    }
}

std::vector<DoiReport> detect_dois(const std::vector<HeapRecord>& heap,
                                   const InstrumentConfig& cfg) {
    const int nbins = cfg.ra_bins_per_day;
    const int alias = alias_offset_bins(
        fringe_period_ra_hr(cfg.baseline_wavelengths, cfg.dec_deg),
        cfg.ra_bin_width_hr());

    std::vector<std::vector<double>> d_by_bin(static_cast<std::size_t>(nbins));
    std::vector<std::int64_t> count(static_cast<std::size_t>(nbins), 0);
    for (const auto& rec : heap) {
        d_by_bin[static_cast<std::size_t>(rec.ra_bin)].push_back(rec.cohens_d);
        count[static_cast<std::size_t>(rec.ra_bin)] += 1;
    }
    auto at = [&](int k) { return ((k % nbins) + nbins) % nbins; };
    auto merged_count = [&](int k) {
        return count[static_cast<std::size_t>(at(k - 1))] +
               count[static_cast<std::size_t>(at(k))] +
               count[static_cast<std::size_t>(at(k + 1))];
    };

    struct Qualifier { int bin; std::int64_t merged; };
    std::vector<Qualifier> qualifiers;
    // The central bin must carry real support on its own; adjacent bins top
    // up the merged population the d statistics are judged on.
    const std::int64_t central_min =
        std::max<std::int64_t>(2, cfg.doi_min_events / 2);
    for (int k = 0; k < nbins; ++k) {
        const std::int64_t m = merged_count(k);
        if (m < cfg.doi_min_events) continue;
        if (count[static_cast<std::size_t>(k)] < central_min) continue;
        std::vector<double> ds;
        for (int off = -1; off <= 1; ++off) {
            const auto& v = d_by_bin[static_cast<std::size_t>(at(k + off))];
            ds.insert(ds.end(), v.begin(), v.end());
        }
        std::int64_t below0 = 0;
        for (double d : ds) {
            if (d < 0.0) ++below0;
        }
        const double median = median_of_sorted(ds);
        if (median < cfg.doi_median_d_min) continue;
        if (static_cast<double>(below0) >
            cfg.doi_low_d_fraction_max * static_cast<double>(ds.size())) {
            continue;
        }
        qualifiers.push_back({k, m});
    }

    // Collapse adjacent qualifiers to the strongest central bin. An alias
    // cluster straddles two bins (the fringe period is a non-integer 15.48
    // bins), so its per-bin counts run below the true direction's central
    // bin even when the cluster total is larger; central count ranks first.
    std::sort(qualifiers.begin(), qualifiers.end(), [&](const Qualifier& a, const Qualifier& b) {
        const auto ca = count[static_cast<std::size_t>(a.bin)];
        const auto cb = count[static_cast<std::size_t>(b.bin)];
        if (ca != cb) return ca > cb;
        if (a.merged != b.merged) return a.merged > b.merged;
        return a.bin < b.bin;
    });
    // Geometric-delay aliasing repeats at every multiple of the fringe
    // period with falling beam gain; first and second order are reachable
    // by strong sources. Qualifiers there belong to the accepted direction.
    const double fringe_bins =
        fringe_period_ra_hr(cfg.baseline_wavelengths, cfg.dec_deg) /
        cfg.ra_bin_width_hr();
    auto same_direction = [&](int d) {
        if (d <= 2) return true;
        for (int j = 1; j <= 2; ++j) {
            if (std::abs(d - j * fringe_bins) <= 2.5) return true;
        }
        return false;
    };
    std::vector<int> accepted;
    for (const auto& q : qualifiers) {
        bool clash = false;
        for (int b : accepted) {
            int d = std::abs(q.bin - b);
            d = std::min(d, nbins - d);
            if (same_direction(d)) {
                clash = true;
                break;
            }
        }
        if (!clash) accepted.push_back(q.bin);
    }
    std::sort(accepted.begin(), accepted.end());

    std::vector<DoiReport> reports;
    for (int k : accepted) {
        DoiReport r;
        r.central_bin = k;
        r.center_ra_hr = bin_center_ra_hr(k, cfg);
        r.count = count[static_cast<std::size_t>(k)];
        r.adjacent_lo_count = count[static_cast<std::size_t>(at(k - 1))];
        r.adjacent_hi_count = count[static_cast<std::size_t>(at(k + 1))];
        r.merged_count = r.count + r.adjacent_lo_count + r.adjacent_hi_count;
        std::vector<double> ds;
        for (int off = -1; off <= 1; ++off) {
            const auto& v = d_by_bin[static_cast<std::size_t>(at(k + off))];
            ds.insert(ds.end(), v.begin(), v.end());
        }
        std::vector<double> sorted = ds;
        r.median_d = median_of_sorted(sorted);
        std::int64_t above3 = 0, below0 = 0;
        r.max_d = 0.0;
        for (double d : ds) {
            r.max_d = std::max(r.max_d, d);
            if (d > 3.0) ++above3;
            if (d < 0.0) ++below0;
        }
        r.fraction_d_above_3 = ds.empty() ? 0.0 : static_cast<double>(above3) / ds.size();
        r.fraction_d_below_0 = ds.empty() ? 0.0 : static_cast<double>(below0) / ds.size();
        for (int side = -1; side <= 1; side += 2) {
            std::int64_t n = 0;
            double max_d = 0.0;
            for (int off = -1; off <= 1; ++off) {
                const int kb = at(k + side * alias + off);
                n += count[static_cast<std::size_t>(kb)];
                for (double d : d_by_bin[static_cast<std::size_t>(kb)]) {
                    max_d = std::max(max_d, d);
                }
            }
            if (side < 0) { r.alias_lo_count = n; r.alias_lo_max_d = max_d; }
            else { r.alias_hi_count = n; r.alias_hi_max_d = max_d; }
        }
        reports.push_back(r);
    }
    return reports;
}

double bayes_update(double pr_t, double pr_b_given_t, double pr_b) {
    auto in_unit = [](double p) { return p > 0.0 && p <= 1.0; };
    if (!in_unit(pr_t) || !in_unit(pr_b_given_t) || !in_unit(pr_b)) {
        throw std::invalid_argument("bayes_update: probabilities must be in (0, 1]");
    }
    if (pr_t * pr_b_given_t > pr_b * (1.0 + 1e-12)) {
        throw std::invalid_argument("bayes_update: Pr(T) Pr(B|T) exceeds Pr(B)");
    }
    return pr_t * pr_b_given_t / pr_b;
}

double photon_count(double antenna_temp_k, double freq_hz) {
    constexpr double kBoltzmann = 1.380649e-23;
    constexpr double kPlanck = 6.62607015e-34;
    if (antenna_temp_k <= 0.0 || freq_hz <= 0.0) {
        throw std::invalid_argument("photon_count: temperature and frequency must be positive");
    }
    const double ratio = kPlanck * freq_hz / (kBoltzmann * antenna_temp_k);
    if (ratio >= 1e-3) {
        throw std::invalid_argument("photon_count: h nu << k T regime violated");
    }
    // Bin width times integration time is 1 by construction, so the cell
    // photon count is just kT/(h nu).
    return 1.0 / ratio;
}

}  // namespace pairscan
