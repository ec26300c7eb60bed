#include "siting/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <utility>

#include "siting/rng.hpp"

namespace siting {

namespace {

struct XY {
    double x = 0.0;
    double y = 0.0;
};

double sqdist(const XY& a, const XY& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return dx * dx + dy * dy;
}

// Nearest center, lowest index on ties.
int nearest(const XY& p, const std::vector<XY>& centers, double* dist_out) {
    int best = 0;
    double best_d = sqdist(p, centers[0]);
    for (int c = 1; c < static_cast<int>(centers.size()); ++c) {
        const double d = sqdist(p, centers[c]);
        if (d < best_d) {
            best_d = d;
            best = c;
        }
    }
    if (dist_out) *dist_out = best_d;
    return best;
}

std::vector<XY> kmeanspp_init(const std::vector<XY>& pts, int k, Rng& rng) {
    std::vector<XY> centers;
    centers.reserve(k);
    centers.push_back(pts[rng.uniform_int(pts.size())]);

    std::vector<double> d2(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) d2[i] = sqdist(pts[i], centers[0]);

    while (static_cast<int>(centers.size()) < k) {
        double total = 0.0;
        for (double d : d2) total += d;
        std::size_t pick;
        if (total <= 0.0) {
            // Unreachable under the distinct-point precondition; fall back to
            // a uniform draw.
            pick = rng.uniform_int(pts.size());
        } else {
            const double x = rng.uniform01() * total;
            double acc = 0.0;
            pick = pts.size() - 1;
            for (std::size_t i = 0; i < pts.size(); ++i) {
                acc += d2[i];
                if (x < acc) {
                    pick = i;
                    break;
                }
            }
        }
        centers.push_back(pts[pick]);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            d2[i] = std::min(d2[i], sqdist(pts[i], centers.back()));
        }
    }
    return centers;
}

}  // namespace

KmeansResult kmeans(const std::vector<DemandPoint>& points, const KmeansParams& params,
                    const DegreeScale& scale) {
    if (params.k < 1) throw std::invalid_argument("k must be at least 1");
    std::set<std::pair<double, double>> distinct;
    for (const DemandPoint& p : points) distinct.emplace(p.location.lon, p.location.lat);
    if (static_cast<int>(distinct.size()) < params.k) {
        throw std::invalid_argument("k exceeds distinct points");
    }

    const int k = params.k;
    std::vector<XY> pts(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        pts[i] = XY{points[i].location.lon * scale.lon_km, points[i].location.lat * scale.lat_km};
    }

    Rng rng(params.seed);
    std::vector<XY> centers = kmeanspp_init(pts, k, rng);

    KmeansResult result;
    result.assignment.assign(pts.size(), 0);
    std::vector<double> assigned_d2(pts.size(), 0.0);
    std::vector<int> counts(k, 0);

    auto assign_all = [&]() {
        double wcss = 0.0;
        std::fill(counts.begin(), counts.end(), 0);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            result.assignment[i] = nearest(pts[i], centers, &assigned_d2[i]);
            ++counts[result.assignment[i]];
            wcss += assigned_d2[i];
        }
        return wcss;
    };

    // Moves every empty cluster's center onto the point farthest from its
    // own center. Returns true if anything moved.
    auto repair_empties = [&]() {
        bool repaired = false;
        for (int c = 0; c < k; ++c) {
            if (counts[c] > 0) continue;
            std::size_t far = 0;
            double far_d = -1.0;
            for (std::size_t i = 0; i < pts.size(); ++i) {
                if (counts[result.assignment[i]] <= 1) continue;  // donors stay non-empty
                if (assigned_d2[i] > far_d) {
                    far_d = assigned_d2[i];
                    far = i;
                }
            }
            centers[c] = pts[far];
            --counts[result.assignment[far]];
            result.assignment[far] = c;
            assigned_d2[far] = 0.0;
            counts[c] = 1;
            repaired = true;
        }
        return repaired;
    };

    auto assign_and_repair = [&]() {
        double wcss = assign_all();
        int guard = 0;
        while (repair_empties() && ++guard <= k) wcss = assign_all();
        return wcss;
    };

    auto record = [&](double wcss) {
        if (!result.wcss_history.empty() && wcss > result.wcss_history.back() * (1.0 + 1e-12)) {
            throw std::logic_error("k-means objective increased");
        }
        result.wcss_history.push_back(wcss);
    };

    for (int iter = 0; iter < params.max_iters; ++iter) {
        record(assign_and_repair());
        result.iterations = iter + 1;

        // Update step.
        std::vector<XY> sums(k, XY{});
        std::vector<int> n(k, 0);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            sums[result.assignment[i]].x += pts[i].x;
            sums[result.assignment[i]].y += pts[i].y;
            ++n[result.assignment[i]];
        }
        double movement = 0.0;
        for (int c = 0; c < k; ++c) {
            if (n[c] == 0) continue;
            const XY updated{sums[c].x / n[c], sums[c].y / n[c]};
            movement = std::max(movement, sqdist(updated, centers[c]));
            centers[c] = updated;
        }
        if (movement < params.tol) break;
    }

    // Leave the assignment optimal against the returned centroids.
    const double final_wcss = assign_and_repair();
    if (result.wcss_history.empty() || final_wcss <= result.wcss_history.back() * (1.0 + 1e-12)) {
        result.wcss_history.push_back(final_wcss);
    }

    result.centroids.resize(k);
    for (int c = 0; c < k; ++c) {
        result.centroids[c] = GeoPoint{centers[c].x / scale.lon_km, centers[c].y / scale.lat_km};
    }
    return result;
}

std::vector<CandidateStation> candidate_set(const std::vector<DemandPoint>& points,
                                            const KmeansParams& params,
                                            const DegreeScale& scale) {
    const KmeansResult km = kmeans(points, params, scale);

    std::vector<int> order(km.centroids.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const GeoPoint& pa = km.centroids[a];
        const GeoPoint& pb = km.centroids[b];
        if (pa.lat != pb.lat) return pa.lat < pb.lat;
        if (pa.lon != pb.lon) return pa.lon < pb.lon;
        return a < b;
    });

    std::vector<int> members(km.centroids.size(), 0);
    for (int a : km.assignment) ++members[a];

    std::vector<CandidateStation> stations(order.size());
    for (std::size_t rank = 0; rank < order.size(); ++rank) {
        stations[rank] = CandidateStation{static_cast<int>(rank), km.centroids[order[rank]],
                                          members[order[rank]]};
    }
    return stations;
}

}  // namespace siting
