#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "siting/scenario.hpp"

using namespace siting;

namespace {

SynthParams small_scenario() {
    SynthParams p;
    p.seed = 321;
    p.n_vehicles = 20;
    p.records_per_vehicle = 30;
    p.span_start = parse_timestamp_or_throw("20160504 00:00:00");
    p.hotspots = {
        {{116.35, 39.91}, 2.0, 1.5},
        {{116.45, 39.95}, 1.0, 1.5},
    };
    p.short_gap_prob = 0.5;
    return p;
}

}  // namespace

TEST_CASE("generation is deterministic") {
    auto a = generate(small_scenario());
    auto b = generate(small_scenario());
    CHECK(a == b);

    SynthParams other = small_scenario();
    other.seed = 322;
    CHECK(generate(other) != a);
}

TEST_CASE("generation honors counts, box and time order") {
    SynthParams p = small_scenario();
    p.n_vehicles = 200;
    p.records_per_vehicle = 120;
    auto records = generate(p);
    REQUIRE(records.size() == 200u * 120u);

    std::set<std::string> vids;
    std::map<std::string, Timestamp> last_end;
    for (const OdRecord& r : records) {
        vids.insert(r.vehicle_id);
        CHECK(p.bbox.contains(r.o));
        CHECK(p.bbox.contains(r.d));
        CHECK(r.o_time < r.d_time);
        CHECK(r.o_known);
        CHECK(r.d_known);
        CHECK(r.distance_km >= 0.0);
        auto it = last_end.find(r.vehicle_id);
        if (it != last_end.end()) CHECK(r.o_time > it->second);
        last_end[r.vehicle_id] = r.d_time;
    }
    CHECK(vids.size() == 200);
    CHECK(records.front().vehicle_id == "V0001");
    CHECK(records.back().vehicle_id == "V0200");

    // Departures stagger across the first fifth of the span.
    std::set<std::string> seen;
    for (const OdRecord& r : records) {
        if (!seen.insert(r.vehicle_id).second) continue;
        CHECK(r.o_time >= p.span_start);
        CHECK(r.o_time < p.span_start + static_cast<Timestamp>(p.span_hours * 3600.0 * 0.2) + 1);
    }
}

TEST_CASE("zero vehicles or records yield nothing") {
    SynthParams p = small_scenario();
    p.n_vehicles = 0;
    CHECK(generate(p).empty());
    p = small_scenario();
    p.records_per_vehicle = 0;
    CHECK(generate(p).empty());
}

TEST_CASE("parameter validation") {
    SynthParams p = small_scenario();
    CHECK(p.valid());

    p.hotspots.clear();
    CHECK_FALSE(p.valid());
    CHECK_THROWS_AS(generate(p), std::invalid_argument);

    p = small_scenario();
    p.detour_min = 0.9;  // a shortcut below the straight-line bound
    CHECK_FALSE(p.valid());

    p = small_scenario();
    p.n_vehicles = -1;
    CHECK_FALSE(p.valid());

    p = small_scenario();
    p.relocate_prob = 1.5;
    CHECK_FALSE(p.valid());

    p = small_scenario();
    p.hotspots[0].weight = 0.0;
    CHECK_FALSE(p.valid());

    p = small_scenario();
    p.bbox = BoundingBox{116.5, 116.2, 39.75, 40.03};
    CHECK_FALSE(p.valid());
}

TEST_CASE("a single zero-spread hotspot pins every coordinate") {
    SynthParams p = small_scenario();
    p.hotspots = {{{116.40, 39.90}, 1.0, 0.0}};
    p.n_vehicles = 3;
    p.records_per_vehicle = 10;
    auto records = generate(p);
    REQUIRE(records.size() == 30);
    for (const OdRecord& r : records) {
        CHECK(r.o == GeoPoint{116.40, 39.90});
        CHECK(r.d == GeoPoint{116.40, 39.90});
        CHECK(r.distance_km == 0.0);
        CHECK(r.d_time - r.o_time == 60);  // floor travel time
    }
}

TEST_CASE("recorded distances are detoured Manhattan distances") {
    auto records = generate(small_scenario());
    const SynthParams p = small_scenario();
    const DegreeScale scale;
    int measured = 0;
    for (const OdRecord& r : records) {
        const double base = manhattan_km(r.o, r.d, scale);
        if (base < 1e-9) continue;
        const double ratio = r.distance_km / base;
        CHECK(ratio >= p.detour_min - 1e-9);
        CHECK(ratio <= p.detour_max + 1e-9);
        ++measured;
    }
    CHECK(measured > 100);
}

TEST_CASE("both gap classes appear and stay separated") {
    auto records = generate(small_scenario());
    std::map<std::string, const OdRecord*> prev;
    int short_gaps = 0, long_gaps = 0;
    for (const OdRecord& r : records) {
        auto it = prev.find(r.vehicle_id);
        if (it != prev.end()) {
            const Timestamp gap = r.o_time - it->second->d_time;
            CHECK(gap >= 30);
            CHECK((gap <= 270 || gap >= 360));
            (gap <= 270 ? short_gaps : long_gaps)++;
        }
        prev[r.vehicle_id] = &r;
    }
    CHECK(short_gaps > 50);
    CHECK(long_gaps > 50);
}

TEST_CASE("tiny pipeline wires the stages together") {
    auto records = generate(tiny_scenario());
    REQUIRE(records.size() == 80);

    Bundle b = run_pipeline(records, tiny_pipeline());
    const PipelineCounts& c = b.counts;
    CHECK(c.raw_records == 80);
    CHECK(c.cleaning.retained == c.filtered_records);  // no departure filter
    CHECK(c.vehicles == 4);
    CHECK(c.chains_kept <= c.chains_built);
    CHECK(c.chains_kept > 0);
    CHECK(c.demand_points == 2 * c.chains_kept);
    CHECK(c.demand_points == b.demand.size());
    CHECK(c.candidates == 10);
    CHECK(b.candidates.size() == 10);
    CHECK(b.matrix.rows == b.demand.size());
    CHECK(b.matrix.cols == 10);
    for (const DemandPoint& d : b.demand) CHECK(d.weight == 1.0);
    for (double w : b.matrix.h) CHECK(w == 1.0);

    const std::string text = c.to_text();
    CHECK(text.find("raw_records=80") != std::string::npos);
    CHECK(text.find("clean.retained=") != std::string::npos);
    CHECK(text.find("chains_built=") != std::string::npos);
    CHECK(text.find("candidates=10") != std::string::npos);
}

TEST_CASE("the pipeline is deterministic end to end") {
    auto records = generate(tiny_scenario());
    Bundle a = run_pipeline(records, tiny_pipeline());
    Bundle b = run_pipeline(records, tiny_pipeline());
    CHECK(a.matrix.d == b.matrix.d);
    CHECK(a.matrix.h == b.matrix.h);
    REQUIRE(a.demand.size() == b.demand.size());
    for (std::size_t i = 0; i < a.demand.size(); ++i) {
        CHECK(a.demand[i].location == b.demand[i].location);
        CHECK(a.demand[i].zone == b.demand[i].zone);
        CHECK(a.demand[i].time == b.demand[i].time);
    }
    REQUIRE(a.candidates.size() == b.candidates.size());
    for (std::size_t j = 0; j < a.candidates.size(); ++j) {
        CHECK(a.candidates[j].id == b.candidates[j].id);
        CHECK(a.candidates[j].location == b.candidates[j].location);
        CHECK(a.candidates[j].member_count == b.candidates[j].member_count);
    }
}

TEST_CASE("an empty input fails at the matrix stage") {
    try {
        run_pipeline({}, tiny_pipeline());
        FAIL("expected a pipeline error");
    } catch (const PipelineError& e) {
        CHECK(e.stage == "matrix");
        CHECK(std::string(e.what()) == "matrix: empty instance");
    }
}

TEST_CASE("the departure filter trims records before chaining") {
    PipelineParams params = tiny_pipeline();
    params.depart_filter = std::vector<TimeWindow>{{7 * 3600, 9 * 3600}};

    auto rec = [](const std::string& vid, Timestamp ot, Timestamp dt) {
        OdRecord r;
        r.vehicle_id = vid;
        r.o_time = ot;
        r.d_time = dt;
        r.o = {116.40, 39.90};
        r.d = {116.42, 39.92};
        r.distance_km = 3.0;
        return r;
    };
    std::vector<OdRecord> records = {
        rec("A", 8 * 3600, 8 * 3600 + 600),        // departs 08:00, kept
        rec("A", 8 * 3600 + 700, 8 * 3600 + 1300), // departs 08:11, kept
        rec("A", 12 * 3600, 12 * 3600 + 600),      // departs noon, dropped
        rec("B", 6 * 3600, 6 * 3600 + 600),        // departs 06:00, dropped
    };

    PipelineCounts counts;
    auto chains = build_chain_stage(records, params, &counts);
    CHECK(counts.raw_records == 4);
    CHECK(counts.cleaning.retained == 4);
    CHECK(counts.filtered_records == 2);
    CHECK(counts.vehicles == 1);
    std::size_t trips = 0;
    for (const auto& c : chains) {
        CHECK(c.vehicle_id == "A");
        trips += c.trips.size();
        for (const auto& t : c.trips) {
            const int sec = seconds_of_day(t.o_time);
            CHECK(sec >= 7 * 3600);
            CHECK(sec < 9 * 3600);
        }
    }
    CHECK(trips == 2);
}

TEST_CASE("sweeping m is exact, monotone and well-labeled on the tiny scenario") {
    Bundle b = run_pipeline(generate(tiny_scenario()), tiny_pipeline());
    SolveParams base;
    base.seed = 1;
    SweepResult sweep = sweep_m(b, 1, 10, Method::Exact, base);

    CHECK(sweep.scenario ==
          "I=" + std::to_string(b.matrix.rows) + " J=" + std::to_string(b.matrix.cols));
    CHECK(sweep.seed == 1);
    CHECK(sweep.warnings.empty());
    REQUIRE(sweep.rows.size() == 10);
    for (std::size_t i = 0; i < sweep.rows.size(); ++i) {
        const SweepRow& row = sweep.rows[i];
        CHECK(row.m == static_cast<int>(i) + 1);
        CHECK(row.error.empty());
        CHECK(row.exact_pmedian);
        CHECK(row.exact_minmax);
        CHECK(std::isfinite(row.pmedian_avg_km));
        CHECK(std::isfinite(row.minmax_km));
        if (i > 0) {
            CHECK(row.pmedian_avg_km <= sweep.rows[i - 1].pmedian_avg_km + 1e-9);
            CHECK(row.minmax_km <= sweep.rows[i - 1].minmax_km + 1e-9);
        }
    }
    // Opening every candidate reduces the average below the single-station case.
    CHECK(sweep.rows.back().pmedian_avg_km < sweep.rows.front().pmedian_avg_km);
}

TEST_CASE("a single-m sweep works") {
    Bundle b = run_pipeline(generate(tiny_scenario()), tiny_pipeline());
    auto sweep = sweep_m(b, 3, 3, Method::Exact, SolveParams{});
    REQUIRE(sweep.rows.size() == 1);
    CHECK(sweep.rows[0].m == 3);
    CHECK(sweep.rows[0].error.empty());
}

TEST_CASE("sweep range validation") {
    Bundle b = run_pipeline(generate(tiny_scenario()), tiny_pipeline());
    CHECK_THROWS_AS(sweep_m(b, 0, 5, Method::Exact, SolveParams{}), std::invalid_argument);
    CHECK_THROWS_AS(sweep_m(b, 4, 3, Method::Exact, SolveParams{}), std::invalid_argument);
    CHECK_THROWS_AS(sweep_m(b, 1, 11, Method::Exact, SolveParams{}), std::invalid_argument);
}

TEST_CASE("parallel sweeps match the serial result") {
    Bundle b = run_pipeline(generate(tiny_scenario()), tiny_pipeline());
    SolveParams base;
    base.seed = 9;
    auto serial = sweep_m(b, 1, 10, Method::Heuristic, base, 1);
    auto parallel = sweep_m(b, 1, 10, Method::Heuristic, base, 8);
    REQUIRE(serial.rows.size() == parallel.rows.size());
    for (std::size_t i = 0; i < serial.rows.size(); ++i) {
        CHECK(serial.rows[i].m == parallel.rows[i].m);
        CHECK(serial.rows[i].pmedian_avg_km == parallel.rows[i].pmedian_avg_km);
        CHECK(serial.rows[i].minmax_km == parallel.rows[i].minmax_km);
        CHECK(serial.rows[i].exact_pmedian == parallel.rows[i].exact_pmedian);
        CHECK(serial.rows[i].error == parallel.rows[i].error);
    }
}

TEST_CASE("solver failures land in the row and the sweep carries on") {
    Bundle b = run_pipeline(generate(tiny_scenario()), tiny_pipeline());
    SolveParams base;
    base.node_budget = 1;  // every exact attempt dies immediately
    auto sweep = sweep_m(b, 2, 4, Method::Exact, base);
    REQUIRE(sweep.rows.size() == 3);
    for (const SweepRow& row : sweep.rows) {
        CHECK_FALSE(row.error.empty());
        CHECK(row.error.find("pmedian:") != std::string::npos);
        CHECK(row.error.find("minmax:") != std::string::npos);
        CHECK(row.error.find("exact budget exceeded") != std::string::npos);
        CHECK(std::isnan(row.pmedian_avg_km));
        CHECK(std::isnan(row.minmax_km));
    }
}

TEST_CASE("a neutral congestion policy changes nothing") {
    auto records = generate(tiny_scenario());
    PipelineParams plain_params = tiny_pipeline();
    PipelineParams neutral_params = tiny_pipeline();
    CongestionPolicy neutral;
    neutral.sigma_inner3 = 1.0;
    neutral.sigma_ring34 = 1.0;
    neutral.sigma_other = 1.0;
    neutral_params.congestion = neutral;

    Bundle plain = run_pipeline(records, plain_params);
    Bundle with_policy = run_pipeline(records, neutral_params);
    CHECK(plain.matrix.d == with_policy.matrix.d);

    auto report = congestion_compare(plain, with_policy, 3, Method::Exact, SolveParams{},
                                     plain_params.rings);
    CHECK(report.m == 3);
    CHECK(report.exact_plain);
    CHECK(report.exact_congested);
    CHECK(report.pmedian_obj_plain == report.pmedian_obj_congested);
    CHECK(report.minmax_obj_plain == report.minmax_obj_congested);
    CHECK(report.downtown_delta == 0);
    CHECK(report.zone_open_plain == report.zone_open_congested);
    REQUIRE(report.stations.size() == plain.candidates.size());
    for (const auto& s : report.stations) CHECK(s.open_plain == s.open_congested);
}

TEST_CASE("congestion reshapes the cost side of the comparison") {
    // Hand-built bundles sharing demand and candidates, differing only in
    // the congestion multiplier applied to rush-hour downtown rows.
    RingConfig rings = default_rings();
    std::vector<DemandPoint> demand;
    for (int i = 0; i < 3; ++i) {
        DemandPoint p;
        p.location = {116.37 + 0.01 * i, 39.90};
        p.zone = RingZone::Inner3;
        p.time = 8 * 3600;  // morning rush
        demand.push_back(p);
    }
    for (int i = 0; i < 3; ++i) {
        DemandPoint p;
        p.location = {116.21 + 0.01 * i, 39.77};
        p.zone = RingZone::Outer;
        p.time = 12 * 3600;
        demand.push_back(p);
    }
    std::vector<CandidateStation> cands = {
        {0, {116.38, 39.90}, 3},  // downtown
        {1, {116.22, 39.77}, 2},  // outskirts
        {2, {116.50, 40.01}, 1},  // far corner
    };

    Bundle plain, congested;
    plain.demand = congested.demand = demand;
    plain.candidates = congested.candidates = cands;
    plain.matrix = build_cost_matrix(demand, cands, std::nullopt, DegreeScale{});
    congested.matrix = build_cost_matrix(demand, cands, CongestionPolicy{}, DegreeScale{});

    auto report = congestion_compare(plain, congested, 2, Method::Exact, SolveParams{}, rings);
    CHECK(report.exact_plain);
    CHECK(report.exact_congested);
    // Multipliers of at least one can only push costs up.
    CHECK(report.pmedian_obj_congested >= report.pmedian_obj_plain);
    CHECK(report.minmax_obj_congested >= report.minmax_obj_plain);

    int plain_total = 0, congested_total = 0, inner_plain = 0, inner_congested = 0;
    REQUIRE(report.stations.size() == 3);
    for (const auto& s : report.stations) {
        plain_total += s.open_plain ? 1 : 0;
        congested_total += s.open_congested ? 1 : 0;
        if (s.zone == RingZone::Inner3) {
            inner_plain += s.open_plain ? 1 : 0;
            inner_congested += s.open_congested ? 1 : 0;
        }
    }
    CHECK(plain_total == 2);
    CHECK(congested_total == 2);
    CHECK(report.zone_open_plain[0] + report.zone_open_plain[1] + report.zone_open_plain[2] == 2);
    CHECK(report.zone_open_congested[0] + report.zone_open_congested[1] +
              report.zone_open_congested[2] ==
          2);
    CHECK(report.downtown_delta == inner_congested - inner_plain);

    const std::string text = report.to_text();
    CHECK(text.find("m=2") != std::string::npos);
    CHECK(text.find("pmedian_objective_plain=") != std::string::npos);
    CHECK(text.find("downtown_delta=") != std::string::npos);
}

TEST_CASE("mismatched bundles are rejected") {
    auto records = generate(tiny_scenario());
    Bundle a = run_pipeline(records, tiny_pipeline());
    Bundle b = a;

    Bundle shorter = a;
    shorter.demand.pop_back();
    CHECK_THROWS_WITH_AS(
        congestion_compare(a, shorter, 2, Method::Exact, SolveParams{}, default_rings()),
        "bundles not comparable", std::invalid_argument);

    Bundle moved = a;
    moved.demand[0].location.lon += 0.001;
    CHECK_THROWS_WITH_AS(
        congestion_compare(a, moved, 2, Method::Exact, SolveParams{}, default_rings()),
        "bundles not comparable", std::invalid_argument);

    Bundle reweighted = a;
    reweighted.demand[0].weight = 2.0;
    CHECK_THROWS_AS(
        congestion_compare(a, reweighted, 2, Method::Exact, SolveParams{}, default_rings()),
        std::invalid_argument);

    Bundle relabeled = a;
    relabeled.candidates[0].id = 42;
    CHECK_THROWS_AS(
        congestion_compare(a, relabeled, 2, Method::Exact, SolveParams{}, default_rings()),
        std::invalid_argument);

    // The untouched copy still compares fine.
    CHECK_NOTHROW(congestion_compare(a, b, 2, Method::Exact, SolveParams{}, default_rings()));
}

TEST_CASE("shipped presets are coherent") {
    CHECK(paper_scenario().valid());
    CHECK(tiny_scenario().valid());
    CHECK(paper_pipeline().kmeans.k == 100);
    CHECK(paper_pipeline().rings.valid());
    CHECK(tiny_pipeline().kmeans.k == 10);
}
