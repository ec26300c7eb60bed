#include "siting/tripchain.hpp"

#include <algorithm>

namespace siting {

namespace {

TripChain close_chain(const std::string& vehicle_id, std::vector<OdRecord> trips) {
    TripChain chain;
    chain.vehicle_id = vehicle_id;
    chain.total_km = 0.0;
    for (const OdRecord& t : trips) chain.total_km += t.distance_km;
    chain.start = trips.front().o;
    chain.start_time = trips.front().o_time;
    chain.end = trips.back().d;
    chain.end_time = trips.back().d_time;
    chain.trips = std::move(trips);
    return chain;
}

}  // namespace

std::vector<TripChain> build_chains(
    const std::map<std::string, std::vector<OdRecord>>& per_vehicle,
    const ChainParams& params, const DegreeScale& scale) {
    const double max_gap_sec = params.max_gap_min * 60.0;
    std::vector<TripChain> chains;

    for (const auto& [vehicle_id, trips] : per_vehicle) {
        std::vector<OdRecord> current;
        double total = 0.0;
        for (const OdRecord& trip : trips) {
            if (!current.empty()) {
                const OdRecord& last = current.back();
                const double gap = static_cast<double>(trip.o_time - last.d_time);
                const double link = manhattan_km(last.d, trip.o, scale);
                const bool extend = gap >= 0.0 && gap <= max_gap_sec &&
                                    link <= params.max_link_km &&
                                    total + trip.distance_km < params.range_cap_km;
                if (!extend) {
                    chains.push_back(close_chain(vehicle_id, std::move(current)));
                    current.clear();
                    total = 0.0;
                }
            }
            total += trip.distance_km;
            current.push_back(trip);
        }
        if (!current.empty()) chains.push_back(close_chain(vehicle_id, std::move(current)));
    }
    return chains;
}

std::vector<TripChain> filter_chains(std::vector<TripChain> chains, double min_total_km) {
    if (min_total_km <= 0.0) return chains;
    std::vector<TripChain> kept;
    kept.reserve(chains.size());
    for (TripChain& c : chains) {
        if (c.total_km >= min_total_km) kept.push_back(std::move(c));
    }
    return kept;
}

std::vector<DemandPoint> extract_demand(const std::vector<TripChain>& chains,
                                        const RingConfig& rings) {
    std::vector<DemandPoint> demand;
    demand.reserve(chains.size() * 2);
    for (const TripChain& c : chains) {
        demand.push_back(DemandPoint{c.start, 1.0, zone_of(c.start, rings), c.start_time});
        demand.push_back(DemandPoint{c.end, 1.0, zone_of(c.end, rings), c.end_time});
    }
    return demand;
}

}  // namespace siting
