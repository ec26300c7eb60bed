#pragma once

#include <string>
#include <vector>

namespace siting {

// WGS-84 point in decimal degrees.
struct GeoPoint {
    double lon = 0.0;
    double lat = 0.0;

    friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

// Finite coordinates, lat in [-90, 90], lon in [-180, 180].
bool is_valid(const GeoPoint& p);

// Equirectangular degree-to-km conversion. The study area spans less than
// 0.3 degrees, so a fixed scale is accurate to well under 0.1%.
// lon_km is 111.194 * cos(39.89 deg), rounded.
struct DegreeScale {
    double lat_km = 111.194;
    double lon_km = 85.3;
};

struct BoundingBox {
    double lon_min = 0.0;
    double lon_max = 0.0;
    double lat_min = 0.0;
    double lat_max = 0.0;

    bool valid() const;
    // Closed intervals on all four edges.
    bool contains(const GeoPoint& p) const;

    friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

// Congestion zones: inside the 3rd ring, between the 3rd and 4th rings,
// everything else.
enum class RingZone { Inner3, Ring3To4, Outer };

const char* zone_name(RingZone z);
RingZone zone_from_name(const std::string& name);  // throws std::invalid_argument

// Axis-aligned stand-ins for the ring roads. ring3 must sit strictly inside
// ring4 on all four edges.
struct RingConfig {
    BoundingBox ring3;
    BoundingBox ring4;

    bool valid() const;
};

// Weighted L1 distance in kilometers: |dlat|*lat_km + |dlon|*lon_km.
double manhattan_km(const GeoPoint& a, const GeoPoint& b, const DegreeScale& scale);

bool in_bbox(const GeoPoint& p, const BoundingBox& box);

// Total partition: every point lands in exactly one zone.
RingZone zone_of(const GeoPoint& p, const RingConfig& rings);

// Arithmetic mean per coordinate. Throws std::invalid_argument on an empty set.
GeoPoint centroid(const std::vector<GeoPoint>& points);

// Shipped defaults for the Beijing study area.
BoundingBox fifth_ring_box();   // lon 116.2..116.55, lat 39.75..40.03
RingConfig default_rings();     // ring3 lon 116.30..116.45 lat 39.85..39.97,
                                // ring4 lon 116.27..116.48 lat 39.82..40.00

}  // namespace siting
