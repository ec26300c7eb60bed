#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "siting/geo.hpp"
#include "siting/timeutil.hpp"

namespace siting {

// One taxi trip (an OD pair). o_known / d_known are false only for rows that
// arrived with empty coordinate cells; clean() repairs or drops those, so
// downstream of clean() both flags are always true.
struct OdRecord {
    std::string vehicle_id;
    Timestamp o_time = 0;
    GeoPoint o;
    Timestamp d_time = 0;
    GeoPoint d;
    double distance_km = 0.0;
    bool o_known = true;
    bool d_known = true;

    friend bool operator==(const OdRecord&, const OdRecord&) = default;
};

struct ParseError {
    std::size_t line = 0;  // 1-based, header is line 1
    std::string message;
};

struct ParseResult {
    std::vector<OdRecord> records;
    std::vector<ParseError> errors;
};

// Header names of the required input columns. Order in the file is free;
// columns are resolved by name and extras are ignored.
struct CsvSchema {
    std::string vehicle_id = "vehicle_id";
    std::string o_time = "o_time";
    std::string o_lon = "o_lon";
    std::string o_lat = "o_lat";
    std::string d_time = "d_time";
    std::string d_lon = "d_lon";
    std::string d_lat = "d_lat";
    std::string distance_km = "distance_km";
};

// Parses header-prefixed CSV. Malformed rows are collected per line, never
// fatal. Throws std::runtime_error if the stream is unreadable or a
// mandatory column is absent.
ParseResult parse_records(std::istream& in, const CsvSchema& schema = {});

struct CleaningParams {
    // A record with a missing endpoint is dropped when the reporting gap to
    // its anchor neighbor exceeds this.
    double max_gap_min = 5.0;

    // Coordinates outside this box are clamped to its boundary.
    BoundingBox sanity_box{116.2 - 0.25, 116.55 + 0.25, 39.75 - 0.25, 40.03 + 0.25};
};

struct CleaningReport {
    std::size_t parsed = 0;             // records kept verbatim from the parser
    std::size_t interpolated = 0;       // records with a reconstructed endpoint
    std::size_t dropped_missing = 0;
    std::size_t clamped_drift = 0;
    std::size_t dropped_duplicate = 0;
    std::size_t retained = 0;

    // retained = parsed + interpolated - dropped_missing - dropped_duplicate
    bool consistent() const;

    std::string to_text() const;  // key=value block
};

struct CleanResult {
    std::vector<OdRecord> records;  // canonical order, all coordinates known
    CleaningReport report;
};

// Three passes: repair-or-drop missing endpoints, clamp drifted coordinates
// into the sanity box, collapse exact duplicates. Idempotent.
CleanResult clean(std::vector<OdRecord> records, const CleaningParams& params = {});

// Time-sorted per-vehicle partition; the union of the lists is the input.
std::map<std::string, std::vector<OdRecord>> group_by_vehicle(
    const std::vector<OdRecord>& records);

}  // namespace siting
