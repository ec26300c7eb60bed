#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "siting/cluster.hpp"
#include "siting/cost.hpp"
#include "siting/ingest.hpp"
#include "siting/solve.hpp"
#include "siting/tripchain.hpp"

namespace siting {

struct Hotspot {
    GeoPoint center;
    double weight = 1.0;
    double spread_km = 1.0;
};

struct SynthParams {
    std::uint64_t seed = 0;
    int n_vehicles = 0;
    int records_per_vehicle = 0;
    std::vector<Hotspot> hotspots;
    Timestamp span_start = 0;      // first possible departure
    double span_hours = 24.0;      // departures stagger across the first fifth of this
    double lognormal_median_km = 10.0;
    double lognormal_sigma = 0.5;
    BoundingBox bbox = fifth_ring_box();  // all coordinates clamped into this box
    double short_gap_prob = 0.9;   // chance the next trip starts within the chain gap
    double relocate_prob = 0.1;    // chance the vehicle reappears somewhere else
    double mean_speed_kmh = 30.0;
    double detour_min = 1.05;
    double detour_max = 1.35;

    bool valid() const;
};

// Deterministic synthetic OD records: origins from the hotspot mixture,
// destinations chosen to approximate a log-normal trip length, timestamps
// advancing through a mix of short (chainable) and long gaps.
std::vector<OdRecord> generate(const SynthParams& params);

struct PipelineParams {
    CleaningParams cleaning;
    ChainParams chain;
    double min_chain_km = 0.0;   // drop chains shorter than this
    std::size_t max_chains = 0;  // 0 = unlimited, else keep the first N
    KmeansParams kmeans;
    RingConfig rings = default_rings();
    DegreeScale scale;
    std::optional<CongestionPolicy> congestion;  // empty = plain Manhattan costs
    // When set, only trips departing inside one of these windows feed the
    // chain builder (the re-extraction variant of the congestion study).
    std::optional<std::vector<TimeWindow>> depart_filter;
};

struct PipelineCounts {
    std::size_t raw_records = 0;
    CleaningReport cleaning;
    std::size_t filtered_records = 0;  // after the optional departure filter
    std::size_t vehicles = 0;
    std::size_t chains_built = 0;
    std::size_t chains_kept = 0;
    std::size_t demand_points = 0;
    std::size_t candidates = 0;

    std::string to_text() const;
};

struct Bundle {
    std::vector<DemandPoint> demand;
    std::vector<CandidateStation> candidates;
    CostMatrix matrix;
    PipelineCounts counts;
};

struct PipelineError : std::runtime_error {
    PipelineError(const std::string& stage_name, const std::string& message)
        : std::runtime_error(stage_name + ": " + message), stage(stage_name) {}
    std::string stage;
};

// Cleaning, optional departure filtering, grouping, chain building and the
// chain filters; the front half of run_pipeline. Fills the matching fields
// of *counts when given. Throws PipelineError naming the failing stage.
std::vector<TripChain> build_chain_stage(std::vector<OdRecord> records,
                                         const PipelineParams& params,
                                         PipelineCounts* counts = nullptr);

// clean -> group -> chains -> filter -> demand -> cluster -> matrix.
// Throws PipelineError naming the failing stage.
Bundle run_pipeline(std::vector<OdRecord> records, const PipelineParams& params);

struct SweepRow {
    int m = 0;
    double pmedian_avg_km = 0.0;  // pmedian objective / total demand weight
    double minmax_km = 0.0;
    bool exact_pmedian = false;
    bool exact_minmax = false;
    std::string error;  // nonempty when a solver failed at this m
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::string scenario;
    std::uint64_t seed = 0;
    std::vector<std::string> warnings;  // heuristic regressions above 5%
};

// Solves both models for every m in [m_from, m_to]. Rows are independent;
// `jobs` > 1 solves them on a small thread pool. Solver failures are
// recorded in the row and the sweep continues.
SweepResult sweep_m(const Bundle& bundle, int m_from, int m_to, Method method,
                    const SolveParams& base, int jobs = 1);

struct StationCompareRow {
    int id = 0;
    GeoPoint location;
    RingZone zone = RingZone::Outer;
    bool open_plain = false;      // P-median solution without congestion
    bool open_congested = false;  // P-median solution with congestion
};

struct CompareReport {
    int m = 0;
    double pmedian_obj_plain = 0.0;
    double pmedian_obj_congested = 0.0;
    double minmax_obj_plain = 0.0;
    double minmax_obj_congested = 0.0;
    bool exact_plain = false;
    bool exact_congested = false;
    // Open-station counts per zone (Inner3, Ring3To4, Outer) for the
    // P-median solutions.
    std::array<int, 3> zone_open_plain{};
    std::array<int, 3> zone_open_congested{};
    int downtown_delta = 0;  // Inner3 congested minus Inner3 plain
    std::vector<StationCompareRow> stations;

    std::string to_text() const;
};

// Requires both bundles to share demand and candidates (only d_ij differs);
// otherwise throws std::invalid_argument("bundles not comparable").
CompareReport congestion_compare(const Bundle& plain, const Bundle& congested, int m,
                                 Method method, const SolveParams& base,
                                 const RingConfig& rings);

// Fixed-seed presets backing the config profiles. The paper pair aims for
// roughly 3,000 kept chains, 6,000 demand points and 100 candidates; the
// tiny pair stays small enough for the exact solvers over every m.
SynthParams paper_scenario();
PipelineParams paper_pipeline();
SynthParams tiny_scenario();
PipelineParams tiny_pipeline();

}  // namespace siting
