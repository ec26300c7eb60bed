#include "siting/cost.hpp"

#include <stdexcept>

namespace siting {

double sigma_for(const DemandPoint& point, const CongestionPolicy& policy) {
    const int sec = seconds_of_day(point.time);
    bool in_window = false;
    for (const TimeWindow& w : policy.windows) {
        if (w.contains(sec)) {
            in_window = true;
            break;
        }
    }
    if (!in_window) return policy.sigma_other;
    switch (point.zone) {
        case RingZone::Inner3: return policy.sigma_inner3;
        case RingZone::Ring3To4: return policy.sigma_ring34;
        case RingZone::Outer: return policy.sigma_other;
    }
    return policy.sigma_other;
}

CostMatrix build_cost_matrix(const std::vector<DemandPoint>& demand,
                             const std::vector<CandidateStation>& candidates,
                             const std::optional<CongestionPolicy>& policy,
                             const DegreeScale& scale) {
    if (demand.empty() || candidates.empty()) throw std::invalid_argument("empty instance");

    CostMatrix m;
    m.rows = demand.size();
    m.cols = candidates.size();
    m.d.resize(m.rows * m.cols);
    m.h.resize(m.rows);

    for (std::size_t i = 0; i < m.rows; ++i) {
        m.h[i] = demand[i].weight;
        const double sigma = policy ? sigma_for(demand[i], *policy) : 1.0;
        double* row = &m.d[i * m.cols];
        for (std::size_t j = 0; j < m.cols; ++j) {
            const double base = manhattan_km(demand[i].location, candidates[j].location, scale);
            row[j] = sigma == 1.0 ? base : sigma * base;
        }
    }
    return m;
}

}  // namespace siting
