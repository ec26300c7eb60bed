#include "siting/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace siting {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream ss(line);
    while (std::getline(ss, cur, ',')) out.push_back(trim(cur));
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

bool parse_double(const std::string& s, double& out) {
    try {
        std::size_t pos = 0;
        out = std::stod(s, &pos);
        return pos == s.size() && std::isfinite(out);
    } catch (const std::exception&) {
        return false;
    }
}

struct ColumnIndex {
    std::size_t vehicle_id, o_time, o_lon, o_lat, d_time, d_lon, d_lat, distance_km;
    std::size_t max_index() const {
        return std::max({vehicle_id, o_time, o_lon, o_lat, d_time, d_lon, d_lat, distance_km});
    }
};

ColumnIndex resolve_columns(const std::string& header, const CsvSchema& schema) {
    const std::vector<std::string> names = split_csv(header);
    auto find = [&](const std::string& want) -> std::size_t {
        for (std::size_t i = 0; i < names.size(); ++i) {
            if (names[i] == want) return i;
        }
        throw std::runtime_error("missing mandatory column: " + want);
    };
    ColumnIndex idx{};
    idx.vehicle_id = find(schema.vehicle_id);
    idx.o_time = find(schema.o_time);
    idx.o_lon = find(schema.o_lon);
    idx.o_lat = find(schema.o_lat);
    idx.d_time = find(schema.d_time);
    idx.d_lon = find(schema.d_lon);
    idx.d_lat = find(schema.d_lat);
    idx.distance_km = find(schema.distance_km);
    return idx;
}

// Canonical record order: by vehicle, then times, then coordinates.
bool record_less(const OdRecord& a, const OdRecord& b) {
    return std::tie(a.vehicle_id, a.o_time, a.d_time, a.o.lon, a.o.lat,
                    a.d.lon, a.d.lat, a.distance_km) <
           std::tie(b.vehicle_id, b.o_time, b.d_time, b.o.lon, b.o.lat,
                    b.d.lon, b.d.lat, b.distance_km);
}

double clamp(double v, double lo, double hi) {
    return v < lo ? lo : (v > hi ? hi : v);
}

// Clamps both endpoints into the box; true if anything moved.
bool clamp_into(OdRecord& r, const BoundingBox& box) {
    const OdRecord before = r;
    r.o.lon = clamp(r.o.lon, box.lon_min, box.lon_max);
    r.o.lat = clamp(r.o.lat, box.lat_min, box.lat_max);
    r.d.lon = clamp(r.d.lon, box.lon_min, box.lon_max);
    r.d.lat = clamp(r.d.lat, box.lat_min, box.lat_max);
    return !(r.o == before.o && r.d == before.d);
}

}  // namespace

ParseResult parse_records(std::istream& in, const CsvSchema& schema) {
    if (!in) throw std::runtime_error("unreadable input stream");

    std::string header;
    if (!std::getline(in, header)) throw std::runtime_error("unreadable input stream: no header");
    if (!header.empty() && header.back() == '\r') header.pop_back();
    const ColumnIndex idx = resolve_columns(header, schema);

    ParseResult result;
    std::string line;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        const std::vector<std::string> f = split_csv(line);
        auto reject = [&](const std::string& why) {
            result.errors.push_back(ParseError{line_no, why});
        };
        if (f.size() <= idx.max_index()) {
            reject("too few columns");
            continue;
        }

        OdRecord rec;
        rec.vehicle_id = f[idx.vehicle_id];
        if (rec.vehicle_id.empty()) {
            reject("empty vehicle_id");
            continue;
        }

        const auto ot = parse_timestamp(f[idx.o_time]);
        const auto dt = parse_timestamp(f[idx.d_time]);
        if (!ot || !dt) {
            reject("bad timestamp");
            continue;
        }
        rec.o_time = *ot;
        rec.d_time = *dt;
        if (rec.o_time >= rec.d_time) {
            reject("d_time not after o_time");
            continue;
        }

        if (!parse_double(f[idx.distance_km], rec.distance_km) || rec.distance_km <= 0.0) {
            reject("bad distance_km");
            continue;
        }

        // An endpoint with any empty coordinate cell is flagged missing;
        // a non-empty cell that fails to parse rejects the row.
        bool bad = false;
        auto read_endpoint = [&](const std::string& lon_s, const std::string& lat_s,
                                 GeoPoint& p, bool& known) {
            if (lon_s.empty() || lat_s.empty()) {
                known = false;
                p = GeoPoint{};
                if ((!lon_s.empty() && !parse_double(lon_s, p.lon)) ||
                    (!lat_s.empty() && !parse_double(lat_s, p.lat))) {
                    bad = true;
                }
                return;
            }
            known = true;
            if (!parse_double(lon_s, p.lon) || !parse_double(lat_s, p.lat) || !is_valid(p)) {
                bad = true;
            }
        };
        read_endpoint(f[idx.o_lon], f[idx.o_lat], rec.o, rec.o_known);
        read_endpoint(f[idx.d_lon], f[idx.d_lat], rec.d, rec.d_known);
        if (bad) {
            reject("bad coordinate");
            continue;
        }

        result.records.push_back(std::move(rec));
    }
    return result;
}

bool CleaningReport::consistent() const {
    return retained == parsed + interpolated - dropped_missing - dropped_duplicate;
}

std::string CleaningReport::to_text() const {
    std::ostringstream os;
    os << "parsed=" << parsed << "\n"
       << "interpolated=" << interpolated << "\n"
       << "dropped_missing=" << dropped_missing << "\n"
       << "clamped_drift=" << clamped_drift << "\n"
       << "dropped_duplicate=" << dropped_duplicate << "\n"
       << "retained=" << retained << "\n";
    return os.str();
}

CleanResult clean(std::vector<OdRecord> records, const CleaningParams& params) {
    CleaningReport report;
    const std::size_t input_count = records.size();
    const double max_gap_sec = params.max_gap_min * 60.0;

    // Pass 1: missing endpoints. Work on per-vehicle timelines; the anchor
    // neighbors are the records as parsed, not as repaired.
    std::sort(records.begin(), records.end(), record_less);
    std::vector<OdRecord> kept;
    kept.reserve(records.size());

    std::size_t i = 0;
    while (i < records.size()) {
        std::size_t j = i;
        while (j < records.size() && records[j].vehicle_id == records[i].vehicle_id) ++j;

        for (std::size_t k = i; k < j; ++k) {
            OdRecord r = records[k];
            if (r.o_known && r.d_known) {
                kept.push_back(std::move(r));
                continue;
            }
            if (!r.o_known && !r.d_known) {
                ++report.dropped_missing;
                continue;
            }
            if (!r.o_known) {
                // Reconstruct the origin between the previous drop-off and
                // this record's own destination.
                if (k == i || !records[k - 1].d_known || !r.d_known) {
                    ++report.dropped_missing;
                    continue;
                }
                const OdRecord& prev = records[k - 1];
                const double gap = static_cast<double>(r.o_time - prev.d_time);
                if (gap < 0.0 || gap > max_gap_sec) {
                    ++report.dropped_missing;
                    continue;
                }
                const double span = static_cast<double>(r.d_time - prev.d_time);
                const double t = span > 0.0 ? gap / span : 0.0;
                r.o.lon = prev.d.lon + t * (r.d.lon - prev.d.lon);
                r.o.lat = prev.d.lat + t * (r.d.lat - prev.d.lat);
                r.o_known = true;
            } else {
                // Reconstruct the destination between this record's origin
                // and the next pick-up.
                if (k + 1 >= j || !records[k + 1].o_known) {
                    ++report.dropped_missing;
                    continue;
                }
                const OdRecord& next = records[k + 1];
                const double gap = static_cast<double>(next.o_time - r.d_time);
                if (gap < 0.0 || gap > max_gap_sec) {
                    ++report.dropped_missing;
                    continue;
                }
                const double span = static_cast<double>(next.o_time - r.o_time);
                const double t = span > 0.0
                                     ? static_cast<double>(r.d_time - r.o_time) / span
                                     : 0.0;
                r.d.lon = r.o.lon + t * (next.o.lon - r.o.lon);
                r.d.lat = r.o.lat + t * (next.o.lat - r.o.lat);
                r.d_known = true;
            }
            ++report.interpolated;
            kept.push_back(std::move(r));
        }
        i = j;
    }

    // Pass 2: drift clamping.
    for (OdRecord& r : kept) {
        if (clamp_into(r, params.sanity_box)) ++report.clamped_drift;
    }

    // Pass 3: exact duplicates, first occurrence wins.
    std::sort(kept.begin(), kept.end(), record_less);
    std::vector<OdRecord> unique;
    unique.reserve(kept.size());
    for (OdRecord& r : kept) {
        if (!unique.empty() && unique.back() == r) {
            ++report.dropped_duplicate;
            continue;
        }
        unique.push_back(std::move(r));
    }

    report.parsed = input_count - report.interpolated;
    report.retained = unique.size();
    return CleanResult{std::move(unique), report};
}

std::map<std::string, std::vector<OdRecord>> group_by_vehicle(
    const std::vector<OdRecord>& records) {
    std::map<std::string, std::vector<OdRecord>> groups;
    for (const OdRecord& r : records) groups[r.vehicle_id].push_back(r);
    for (auto& [id, list] : groups) {
        std::stable_sort(list.begin(), list.end(),
                         [](const OdRecord& a, const OdRecord& b) { return a.o_time < b.o_time; });
    }
    return groups;
}

}  // namespace siting
