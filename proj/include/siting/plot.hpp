#pragma once

#include <string>
#include <vector>

#include "siting/cluster.hpp"
#include "siting/geo.hpp"
#include "siting/scenario.hpp"
#include "siting/tripchain.hpp"

namespace siting {

// Scatter map: demand points in gray, P-median stations as star markers
// (class "station-pmedian"), Min-max stations as red dots (class
// "station-minmax"). Ring outlines are drawn when rings is non-null.
// Deterministic byte-for-byte for identical inputs. Throws
// std::invalid_argument when demand is empty.
std::string map_svg(const std::vector<DemandPoint>& demand,
                    const std::vector<CandidateStation>& pmedian_stations,
                    const std::vector<CandidateStation>& minmax_stations,
                    const RingConfig* rings = nullptr);

enum class CurveMetric { PMedianAvg, MinMax };

// Metric-vs-m polyline over the sweep rows; rows whose metric is NaN are
// skipped. Throws std::invalid_argument when no plottable row remains.
std::string curve_svg(const SweepResult& sweep, CurveMetric metric);

}  // namespace siting
