#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "siting/cluster.hpp"
#include "siting/ingest.hpp"
#include "siting/scenario.hpp"
#include "siting/solve.hpp"
#include "siting/tripchain.hpp"

namespace siting {

// Writes to <path>.tmp then renames, so readers never observe a partial
// file. Creates missing parent directories. Throws std::runtime_error.
void write_file_atomic(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);  // throws std::runtime_error

// Shared float-to-text formatting so identical values always serialize to
// identical bytes.
std::string fmt_double(double v);

std::string records_to_csv(const std::vector<OdRecord>& records);
ParseResult read_records_file(const std::string& path);

std::string chains_to_csv(const std::vector<TripChain>& chains);

std::string demand_to_csv(const std::vector<DemandPoint>& demand);
std::vector<DemandPoint> demand_from_csv(const std::string& text);

std::string candidates_to_csv(const std::vector<CandidateStation>& candidates);
std::vector<CandidateStation> candidates_from_csv(const std::string& text);

// Structured solution text: header key=value lines, then one "station id
// lon lat" line per open station, then one "assign demand station" line per
// demand row.
struct SolutionFile {
    Model model = Model::PMedian;
    Method method = Method::Auto;
    std::uint64_t seed = 0;
    int m = 0;
    SitingSolution solution;
    std::vector<CandidateStation> stations;  // open stations only, id order
};

std::string solution_to_text(const SolutionFile& file);
SolutionFile solution_from_text(const std::string& text);

std::string sweep_to_csv(const SweepResult& sweep);
SweepResult sweep_from_csv(const std::string& text);

std::string compare_stations_to_csv(const CompareReport& report);

}  // namespace siting
