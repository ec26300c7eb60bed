#include "siting/geo.hpp"

#include <cmath>
#include <stdexcept>

namespace siting {

bool is_valid(const GeoPoint& p) {
    return std::isfinite(p.lon) && std::isfinite(p.lat) &&
           p.lat >= -90.0 && p.lat <= 90.0 &&
           p.lon >= -180.0 && p.lon <= 180.0;
}

bool BoundingBox::valid() const {
    return std::isfinite(lon_min) && std::isfinite(lon_max) &&
           std::isfinite(lat_min) && std::isfinite(lat_max) &&
           lon_min < lon_max && lat_min < lat_max;
}

bool BoundingBox::contains(const GeoPoint& p) const {
    return p.lon >= lon_min && p.lon <= lon_max &&
           p.lat >= lat_min && p.lat <= lat_max;
}

const char* zone_name(RingZone z) {
    switch (z) {
        case RingZone::Inner3: return "inner3";
        case RingZone::Ring3To4: return "ring3to4";
        case RingZone::Outer: return "outer";
    }
    return "outer";
}

RingZone zone_from_name(const std::string& name) {
    if (name == "inner3") return RingZone::Inner3;
    if (name == "ring3to4") return RingZone::Ring3To4;
    if (name == "outer") return RingZone::Outer;
    throw std::invalid_argument("unknown zone name: " + name);
}

bool RingConfig::valid() const {
    return ring3.valid() && ring4.valid() &&
           ring4.lon_min < ring3.lon_min && ring3.lon_max < ring4.lon_max &&
           ring4.lat_min < ring3.lat_min && ring3.lat_max < ring4.lat_max;
}

double manhattan_km(const GeoPoint& a, const GeoPoint& b, const DegreeScale& scale) {
    return std::abs(a.lat - b.lat) * scale.lat_km +
           std::abs(a.lon - b.lon) * scale.lon_km;
}

bool in_bbox(const GeoPoint& p, const BoundingBox& box) {
    return box.contains(p);
}

RingZone zone_of(const GeoPoint& p, const RingConfig& rings) {
    if (rings.ring3.contains(p)) return RingZone::Inner3;
    if (rings.ring4.contains(p)) return RingZone::Ring3To4;
    return RingZone::Outer;
}

GeoPoint centroid(const std::vector<GeoPoint>& points) {
    if (points.empty()) throw std::invalid_argument("empty point set");
    double lon = 0.0, lat = 0.0;
    for (const GeoPoint& p : points) {
        lon += p.lon;
        lat += p.lat;
    }
    const double n = static_cast<double>(points.size());
    return GeoPoint{lon / n, lat / n};
}

BoundingBox fifth_ring_box() {
    return BoundingBox{116.2, 116.55, 39.75, 40.03};
}

RingConfig default_rings() {
    RingConfig rings;
    rings.ring3 = BoundingBox{116.30, 116.45, 39.85, 39.97};
    rings.ring4 = BoundingBox{116.27, 116.48, 39.82, 40.00};
    return rings;
}

}  // namespace siting
