#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "siting/cluster.hpp"
#include "siting/geo.hpp"
#include "siting/timeutil.hpp"
#include "siting/tripchain.hpp"

namespace siting {

// Daily window, seconds since midnight, half-open [start, end).
struct TimeWindow {
    int start_sec = 0;
    int end_sec = 0;

    bool contains(int sec_of_day) const {
        return sec_of_day >= start_sec && sec_of_day < end_sec;
    }
};

// Multiplicative rush-hour penalties keyed on where and when demand occurs.
struct CongestionPolicy {
    RingConfig rings = default_rings();
    std::vector<TimeWindow> windows{{7 * 3600, 9 * 3600}, {18 * 3600, 20 * 3600}};
    double sigma_inner3 = 1.5;
    double sigma_ring34 = 1.2;
    double sigma_other = 1.0;

    bool valid() const {
        return sigma_inner3 >= 1.0 && sigma_ring34 >= 1.0 && sigma_other >= 1.0;
    }
};

double sigma_for(const DemandPoint& point, const CongestionPolicy& policy);

// Equivalent distances between every demand point (row) and candidate
// station (column), in kilometers. Row order follows the demand set, column
// order the candidate ids.
struct CostMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> d;  // row-major, rows*cols entries
    std::vector<double> h;  // demand weight per row

    double at(std::size_t i, std::size_t j) const { return d[i * cols + j]; }
};

// d_ij = sigma(i) * manhattan_km(i, j); without a policy sigma is 1 and the
// entries are plain Manhattan distances. Throws std::invalid_argument
// ("empty instance") when either set is empty.
CostMatrix build_cost_matrix(const std::vector<DemandPoint>& demand,
                             const std::vector<CandidateStation>& candidates,
                             const std::optional<CongestionPolicy>& policy,
                             const DegreeScale& scale);

}  // namespace siting
