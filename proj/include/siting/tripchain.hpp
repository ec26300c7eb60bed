#pragma once

#include <map>
#include <string>
#include <vector>

#include "siting/geo.hpp"
#include "siting/ingest.hpp"

namespace siting {

struct ChainParams {
    double max_gap_min = 5.0;     // pick-up must follow drop-off within this
    double max_link_km = 0.5;     // pick-up must be this close to drop-off
    double range_cap_km = 150.0;  // battery range; chain total stays below it
};

// Consecutive trips of one vehicle linked under the gap, proximity and
// range conditions. Both endpoints are charging demand.
struct TripChain {
    std::string vehicle_id;
    std::vector<OdRecord> trips;
    double total_km = 0.0;
    GeoPoint start;
    Timestamp start_time = 0;
    GeoPoint end;
    Timestamp end_time = 0;
};

struct DemandPoint {
    GeoPoint location;
    double weight = 1.0;
    RingZone zone = RingZone::Outer;
    Timestamp time = 0;
};

// Greedy left-to-right linking per vehicle. The next trip extends the
// current chain iff the gap is in [0, max_gap], the pick-up is within
// max_link_km of the previous drop-off, and the extended total stays
// strictly below range_cap. Every trip lands in exactly one chain; chains
// are emitted in vehicle_id order.
std::vector<TripChain> build_chains(
    const std::map<std::string, std::vector<OdRecord>>& per_vehicle,
    const ChainParams& params, const DegreeScale& scale);

// Keeps chains with total_km >= min_total_km; min_total_km = 0 keeps all.
std::vector<TripChain> filter_chains(std::vector<TripChain> chains, double min_total_km);

// Two demand points per chain, one at each endpoint, weight 1.
std::vector<DemandPoint> extract_demand(const std::vector<TripChain>& chains,
                                        const RingConfig& rings);

}  // namespace siting
