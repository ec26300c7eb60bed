#include "siting/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <thread>

#include "siting/rng.hpp"

namespace siting {

namespace {

std::string fmt_g(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

std::string vehicle_name(int index) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "V%04d", index + 1);
    return buf;
}

}  // namespace

bool SynthParams::valid() const {
    if (n_vehicles < 0 || records_per_vehicle < 0) return false;
    if (hotspots.empty()) return false;
    for (const auto& h : hotspots) {
        if (!(h.weight > 0.0) || !std::isfinite(h.weight)) return false;
        if (!(h.spread_km >= 0.0) || !std::isfinite(h.spread_km)) return false;
        if (!is_valid(h.center)) return false;
    }
    if (!bbox.valid()) return false;
    if (!(span_hours > 0.0)) return false;
    if (!(lognormal_median_km > 0.0) || !(lognormal_sigma >= 0.0)) return false;
    if (short_gap_prob < 0.0 || short_gap_prob > 1.0) return false;
    if (relocate_prob < 0.0 || relocate_prob > 1.0) return false;
    if (!(mean_speed_kmh > 0.0)) return false;
    if (!(detour_min >= 1.0) || detour_max < detour_min) return false;
    return true;
}

std::vector<OdRecord> generate(const SynthParams& p) {
    if (!p.valid()) throw std::invalid_argument("invalid scenario parameters");

    std::vector<OdRecord> out;
    if (p.n_vehicles == 0 || p.records_per_vehicle == 0) return out;
    out.reserve(static_cast<std::size_t>(p.n_vehicles) *
                static_cast<std::size_t>(p.records_per_vehicle));

    Rng rng(p.seed);
    DegreeScale scale;
    std::vector<double> weights;
    weights.reserve(p.hotspots.size());
    for (const auto& h : p.hotspots) weights.push_back(h.weight);

    auto draw_point = [&]() {
        const Hotspot& h = p.hotspots[rng.weighted_pick(weights)];
        GeoPoint g = h.center;
        g.lat += rng.normal() * h.spread_km / scale.lat_km;
        g.lon += rng.normal() * h.spread_km / scale.lon_km;
        g.lon = std::clamp(g.lon, p.bbox.lon_min, p.bbox.lon_max);
        g.lat = std::clamp(g.lat, p.bbox.lat_min, p.bbox.lat_max);
        return g;
    };

    for (int v = 0; v < p.n_vehicles; ++v) {
        std::string vid = vehicle_name(v);
        GeoPoint pos = draw_point();
        // Stagger departures across the first fifth of the span.
        Timestamp t = p.span_start +
                      static_cast<Timestamp>(rng.uniform01() * p.span_hours * 3600.0 * 0.2);

        for (int r = 0; r < p.records_per_vehicle; ++r) {
            GeoPoint o = pos;
            if (rng.uniform01() < p.relocate_prob) o = draw_point();

            // Pick the mixture draw whose distance from the origin comes
            // closest to the sampled trip length.
            double target = rng.lognormal(p.lognormal_median_km, p.lognormal_sigma);
            GeoPoint d = o;
            double best_diff = std::numeric_limits<double>::infinity();
            for (int k = 0; k < 8; ++k) {
                GeoPoint cand = draw_point();
                double diff = std::fabs(manhattan_km(o, cand, scale) - target);
                if (diff < best_diff) {
                    best_diff = diff;
                    d = cand;
                }
            }

            double detour = rng.uniform(p.detour_min, p.detour_max);
            double dist = manhattan_km(o, d, scale) * detour;
            Timestamp dur = std::max<Timestamp>(
                60, static_cast<Timestamp>(std::llround(dist / p.mean_speed_kmh * 3600.0)));

            out.push_back({vid, t, o, t + dur, d, dist, true, true});
            pos = d;

            Timestamp gap;
            if (rng.uniform01() < p.short_gap_prob)
                gap = 30 + static_cast<Timestamp>(rng.uniform01() * 240.0);
            else
                gap = 360 + static_cast<Timestamp>(rng.uniform01() * 2040.0);
            t += dur + gap;
        }
    }
    return out;
}

std::string PipelineCounts::to_text() const {
    std::string s;
    auto line = [&s](const char* key, std::size_t v) {
        s += key;
        s += '=';
        s += std::to_string(v);
        s += '\n';
    };
    line("raw_records", raw_records);
    line("clean.parsed", cleaning.parsed);
    line("clean.interpolated", cleaning.interpolated);
    line("clean.dropped_missing", cleaning.dropped_missing);
    line("clean.clamped_drift", cleaning.clamped_drift);
    line("clean.dropped_duplicate", cleaning.dropped_duplicate);
    line("clean.retained", cleaning.retained);
    line("filtered_records", filtered_records);
    line("vehicles", vehicles);
    line("chains_built", chains_built);
    line("chains_kept", chains_kept);
    line("demand_points", demand_points);
    line("candidates", candidates);
    return s;
}

std::vector<TripChain> build_chain_stage(std::vector<OdRecord> records,
                                         const PipelineParams& params,
                                         PipelineCounts* counts) {
    PipelineCounts local;
    PipelineCounts& c = counts ? *counts : local;
    c.raw_records = records.size();

    CleanResult cleaned;
    try {
        cleaned = clean(std::move(records), params.cleaning);
    } catch (const std::exception& e) {
        throw PipelineError("clean", e.what());
    }
    c.cleaning = cleaned.report;

    std::vector<OdRecord> kept;
    if (params.depart_filter) {
        for (const auto& r : cleaned.records) {
            int sec = seconds_of_day(r.o_time);
            for (const auto& w : *params.depart_filter) {
                if (w.contains(sec)) {
                    kept.push_back(r);
                    break;
                }
            }
        }
    } else {
        kept = std::move(cleaned.records);
    }
    c.filtered_records = kept.size();

    auto grouped = group_by_vehicle(kept);
    c.vehicles = grouped.size();

    std::vector<TripChain> chains;
    try {
        chains = build_chains(grouped, params.chain, params.scale);
    } catch (const std::exception& e) {
        throw PipelineError("chains", e.what());
    }
    c.chains_built = chains.size();

    chains = filter_chains(std::move(chains), params.min_chain_km);
    if (params.max_chains > 0 && chains.size() > params.max_chains)
        chains.resize(params.max_chains);
    c.chains_kept = chains.size();
    return chains;
}

Bundle run_pipeline(std::vector<OdRecord> records, const PipelineParams& params) {
    Bundle b;
    std::vector<TripChain> chains = build_chain_stage(std::move(records), params, &b.counts);

    try {
        b.demand = extract_demand(chains, params.rings);
    } catch (const std::exception& e) {
        throw PipelineError("demand", e.what());
    }
    b.counts.demand_points = b.demand.size();

    try {
        // An empty demand set has nothing to cluster; let the matrix stage
        // report the empty instance.
        if (!b.demand.empty())
            b.candidates = candidate_set(b.demand, params.kmeans, params.scale);
    } catch (const std::exception& e) {
        throw PipelineError("cluster", e.what());
    }
    b.counts.candidates = b.candidates.size();

    try {
        b.matrix = build_cost_matrix(b.demand, b.candidates, params.congestion, params.scale);
    } catch (const std::exception& e) {
        throw PipelineError("matrix", e.what());
    }
    return b;
}

SweepResult sweep_m(const Bundle& bundle, int m_from, int m_to, Method method,
                    const SolveParams& base, int jobs) {
    if (m_from < 1 || m_from > m_to || static_cast<std::size_t>(m_to) > bundle.matrix.cols)
        throw std::invalid_argument("sweep range must satisfy 1 <= from <= to <= |J|");

    double total_weight = 0.0;
    for (double w : bundle.matrix.h) total_weight += w;

    SweepResult result;
    result.seed = base.seed;
    result.scenario = "I=" + std::to_string(bundle.matrix.rows) +
                      " J=" + std::to_string(bundle.matrix.cols);
    result.rows.resize(static_cast<std::size_t>(m_to - m_from + 1));

    auto solve_row = [&](std::size_t idx) {
        SweepRow& row = result.rows[idx];
        row.m = m_from + static_cast<int>(idx);
        row.pmedian_avg_km = std::numeric_limits<double>::quiet_NaN();
        row.minmax_km = std::numeric_limits<double>::quiet_NaN();
        SolveParams p = base;
        p.m = row.m;
        p.method = method;
        try {
            SitingSolution s = solve(bundle.matrix, Model::PMedian, p);
            row.pmedian_avg_km = s.pmedian_objective / total_weight;
            row.exact_pmedian = s.exact;
        } catch (const std::exception& e) {
            row.error = std::string("pmedian: ") + e.what();
        }
        try {
            SitingSolution s = solve(bundle.matrix, Model::MinMax, p);
            row.minmax_km = s.minmax_objective;
            row.exact_minmax = s.exact;
        } catch (const std::exception& e) {
            if (!row.error.empty()) row.error += "; ";
            row.error += std::string("minmax: ") + e.what();
        }
    };

    int workers = std::min<int>(std::max(jobs, 1), static_cast<int>(result.rows.size()));
    if (workers <= 1) {
        for (std::size_t i = 0; i < result.rows.size(); ++i) solve_row(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&]() {
                for (std::size_t i = next++; i < result.rows.size(); i = next++) solve_row(i);
            });
        for (auto& th : pool) th.join();
    }

    for (std::size_t i = 0; i + 1 < result.rows.size(); ++i) {
        const SweepRow& a = result.rows[i];
        const SweepRow& b = result.rows[i + 1];
        if (!a.error.empty() || !b.error.empty()) continue;
        if (!(a.exact_pmedian && b.exact_pmedian) &&
            b.pmedian_avg_km > a.pmedian_avg_km * 1.05)
            result.warnings.push_back("pmedian_avg_km rises over 5% from m=" +
                                      std::to_string(a.m) + " to m=" + std::to_string(b.m));
        if (!(a.exact_minmax && b.exact_minmax) && b.minmax_km > a.minmax_km * 1.05)
            result.warnings.push_back("minmax_km rises over 5% from m=" + std::to_string(a.m) +
                                      " to m=" + std::to_string(b.m));
    }
    return result;
}

std::string CompareReport::to_text() const {
    std::string s;
    auto line = [&s](const std::string& key, const std::string& val) {
        s += key;
        s += '=';
        s += val;
        s += '\n';
    };
    line("m", std::to_string(m));
    line("pmedian_objective_plain", fmt_g(pmedian_obj_plain));
    line("pmedian_objective_congested", fmt_g(pmedian_obj_congested));
    line("minmax_objective_plain", fmt_g(minmax_obj_plain));
    line("minmax_objective_congested", fmt_g(minmax_obj_congested));
    line("exact_plain", exact_plain ? "1" : "0");
    line("exact_congested", exact_congested ? "1" : "0");
    static const char* zone_keys[3] = {"inner3", "ring3to4", "outer"};
    for (int z = 0; z < 3; ++z)
        line(std::string("open_") + zone_keys[z] + "_plain",
             std::to_string(zone_open_plain[static_cast<std::size_t>(z)]));
    for (int z = 0; z < 3; ++z)
        line(std::string("open_") + zone_keys[z] + "_congested",
             std::to_string(zone_open_congested[static_cast<std::size_t>(z)]));
    line("downtown_delta", std::to_string(downtown_delta));
    return s;
}

CompareReport congestion_compare(const Bundle& plain, const Bundle& congested, int m,
                                 Method method, const SolveParams& base,
                                 const RingConfig& rings) {
    bool comparable = plain.demand.size() == congested.demand.size() &&
                      plain.candidates.size() == congested.candidates.size();
    if (comparable) {
        for (std::size_t i = 0; i < plain.demand.size(); ++i) {
            if (plain.demand[i].location != congested.demand[i].location ||
                plain.demand[i].weight != congested.demand[i].weight) {
                comparable = false;
                break;
            }
        }
        for (std::size_t j = 0; comparable && j < plain.candidates.size(); ++j) {
            if (plain.candidates[j].id != congested.candidates[j].id ||
                plain.candidates[j].location != congested.candidates[j].location)
                comparable = false;
        }
    }
    if (!comparable) throw std::invalid_argument("bundles not comparable");

    SolveParams p = base;
    p.m = m;
    p.method = method;

    CompareReport report;
    report.m = m;

    SitingSolution pm_plain = solve(plain.matrix, Model::PMedian, p);
    SitingSolution pm_cong = solve(congested.matrix, Model::PMedian, p);
    SitingSolution mm_plain = solve(plain.matrix, Model::MinMax, p);
    SitingSolution mm_cong = solve(congested.matrix, Model::MinMax, p);

    report.pmedian_obj_plain = pm_plain.pmedian_objective;
    report.pmedian_obj_congested = pm_cong.pmedian_objective;
    report.minmax_obj_plain = mm_plain.minmax_objective;
    report.minmax_obj_congested = mm_cong.minmax_objective;
    report.exact_plain = pm_plain.exact;
    report.exact_congested = pm_cong.exact;

    report.stations.reserve(plain.candidates.size());
    for (const auto& c : plain.candidates) {
        StationCompareRow row;
        row.id = c.id;
        row.location = c.location;
        row.zone = zone_of(c.location, rings);
        row.open_plain = std::binary_search(pm_plain.open.begin(), pm_plain.open.end(), c.id);
        row.open_congested =
            std::binary_search(pm_cong.open.begin(), pm_cong.open.end(), c.id);
        if (row.open_plain) ++report.zone_open_plain[static_cast<std::size_t>(row.zone)];
        if (row.open_congested)
            ++report.zone_open_congested[static_cast<std::size_t>(row.zone)];
        report.stations.push_back(row);
    }
    report.downtown_delta =
        report.zone_open_congested[static_cast<std::size_t>(RingZone::Inner3)] -
        report.zone_open_plain[static_cast<std::size_t>(RingZone::Inner3)];
    return report;
}

SynthParams paper_scenario() {
    SynthParams p;
    p.seed = 20160504;
    p.n_vehicles = 450;
    p.records_per_vehicle = 150;
    p.span_start = parse_timestamp_or_throw("20160504 00:00:00");
    p.span_hours = 24.0;
    p.lognormal_median_km = 10.0;
    p.lognormal_sigma = 0.45;
    p.bbox = fifth_ring_box();
    p.short_gap_prob = 0.96;
    p.relocate_prob = 0.02;
    p.mean_speed_kmh = 32.0;
    p.detour_min = 1.05;
    p.detour_max = 1.3;
    p.hotspots = {
        {{116.33, 39.90}, 3.0, 1.2},  {{116.42, 39.93}, 2.5, 1.0},
        {{116.38, 39.875}, 2.0, 1.0}, {{116.41, 39.955}, 1.5, 0.8},
        {{116.29, 39.84}, 1.2, 1.0},  {{116.47, 39.99}, 1.0, 1.0},
        {{116.22, 39.78}, 0.8, 1.5},  {{116.52, 40.01}, 0.8, 1.5},
    };
    return p;
}

PipelineParams paper_pipeline() {
    PipelineParams q;
    q.min_chain_km = 120.0;
    q.max_chains = 3000;
    q.kmeans.k = 100;
    q.kmeans.seed = 7;
    return q;
}

SynthParams tiny_scenario() {
    SynthParams p;
    p.seed = 11;
    p.n_vehicles = 4;
    p.records_per_vehicle = 20;
    p.span_start = parse_timestamp_or_throw("20160504 00:00:00");
    p.span_hours = 24.0;
    p.lognormal_median_km = 8.0;
    p.lognormal_sigma = 0.5;
    p.bbox = fifth_ring_box();
    p.short_gap_prob = 0.85;
    p.relocate_prob = 0.08;
    p.mean_speed_kmh = 30.0;
    p.detour_min = 1.05;
    p.detour_max = 1.3;
    p.hotspots = {
        {{116.35, 39.91}, 2.0, 1.5},
        {{116.45, 39.95}, 1.5, 1.5},
        {{116.28, 39.83}, 1.0, 2.0},
    };
    return p;
}

PipelineParams tiny_pipeline() {
    PipelineParams q;
    q.min_chain_km = 0.0;
    q.max_chains = 0;
    q.kmeans.k = 10;
    q.kmeans.seed = 3;
    return q;
}

}  // namespace siting
