#pragma once

#include <cstdint>
#include <vector>

#include "siting/geo.hpp"
#include "siting/tripchain.hpp"

namespace siting {

struct KmeansParams {
    int k = 100;
    std::uint64_t seed = 0;
    int max_iters = 100;
    double tol = 1e-6;  // squared-km centroid movement threshold
};

struct CandidateStation {
    int id = 0;
    GeoPoint location;
    int member_count = 0;
};

struct KmeansResult {
    std::vector<GeoPoint> centroids;    // k entries, unordered
    std::vector<int> assignment;        // point index -> centroid index
    std::vector<double> wcss_history;   // per accepted iteration, non-increasing
    int iterations = 0;
};

// Lloyd iterations with k-means++ seeding, Euclidean metric on km-scaled
// coordinates. Empty clusters are reseeded to the point farthest from its
// own centroid. Deterministic for a fixed (points, params, scale).
// Throws std::invalid_argument("k exceeds distinct points") when the input
// has fewer distinct locations than k.
KmeansResult kmeans(const std::vector<DemandPoint>& points, const KmeansParams& params,
                    const DegreeScale& scale);

// Centroids with stable ids 0..k-1 assigned in (lat, lon) order.
std::vector<CandidateStation> candidate_set(const std::vector<DemandPoint>& points,
                                            const KmeansParams& params,
                                            const DegreeScale& scale);

}  // namespace siting
