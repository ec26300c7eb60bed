#include "siting/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace siting {

namespace {

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t pos = text.find('\n', start);
        if (pos == std::string::npos) {
            lines.push_back(text.substr(start));
            break;
        }
        lines.push_back(text.substr(start, pos - start));
        start = pos + 1;
    }
    return lines;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find(',', start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

double parse_double_or_throw(const std::string& s, std::size_t line_no) {
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size())
        throw std::runtime_error("line " + std::to_string(line_no) + ": bad number '" + s + "'");
    return v;
}

long long parse_int_or_throw(const std::string& s, std::size_t line_no) {
    char* end = nullptr;
    long long v = std::strtoll(s.c_str(), &end, 10);
    if (s.empty() || end != s.c_str() + s.size())
        throw std::runtime_error("line " + std::to_string(line_no) + ": bad integer '" + s + "'");
    return v;
}

void expect_header(const std::vector<std::string>& lines, const std::string& header,
                   const char* what) {
    if (lines.empty() || lines[0] != header)
        throw std::runtime_error(std::string(what) + ": expected header '" + header + "'");
}

}  // namespace

void write_file_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    fs::path target(path);
    if (target.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(target.parent_path(), ec);
        if (ec) throw std::runtime_error("cannot create directory " +
                                         target.parent_path().string() + ": " + ec.message());
    }
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw std::runtime_error("write failed: " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) throw std::runtime_error("cannot rename " + tmp.string() + " to " + path + ": " +
                                     ec.message());
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

std::string records_to_csv(const std::vector<OdRecord>& records) {
    std::string s = "vehicle_id,o_time,o_lon,o_lat,d_time,d_lon,d_lat,distance_km\n";
    for (const auto& r : records) {
        s += r.vehicle_id;
        s += ',';
        s += format_timestamp(r.o_time);
        s += ',';
        if (r.o_known) {
            s += fmt_double(r.o.lon);
            s += ',';
            s += fmt_double(r.o.lat);
        } else {
            s += ',';
        }
        s += ',';
        s += format_timestamp(r.d_time);
        s += ',';
        if (r.d_known) {
            s += fmt_double(r.d.lon);
            s += ',';
            s += fmt_double(r.d.lat);
        } else {
            s += ',';
        }
        s += ',';
        s += fmt_double(r.distance_km);
        s += '\n';
    }
    return s;
}

ParseResult read_records_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    return parse_records(in);
}

std::string chains_to_csv(const std::vector<TripChain>& chains) {
    std::string s =
        "vehicle_id,trips,total_km,start_time,start_lon,start_lat,end_time,end_lon,end_lat\n";
    for (const auto& c : chains) {
        s += c.vehicle_id;
        s += ',';
        s += std::to_string(c.trips.size());
        s += ',';
        s += fmt_double(c.total_km);
        s += ',';
        s += format_timestamp(c.start_time);
        s += ',';
        s += fmt_double(c.start.lon);
        s += ',';
        s += fmt_double(c.start.lat);
        s += ',';
        s += format_timestamp(c.end_time);
        s += ',';
        s += fmt_double(c.end.lon);
        s += ',';
        s += fmt_double(c.end.lat);
        s += '\n';
    }
    return s;
}

std::string demand_to_csv(const std::vector<DemandPoint>& demand) {
    std::string s = "id,lon,lat,weight,zone,time\n";
    for (std::size_t i = 0; i < demand.size(); ++i) {
        const auto& p = demand[i];
        s += std::to_string(i);
        s += ',';
        s += fmt_double(p.location.lon);
        s += ',';
        s += fmt_double(p.location.lat);
        s += ',';
        s += fmt_double(p.weight);
        s += ',';
        s += zone_name(p.zone);
        s += ',';
        s += std::to_string(p.time);
        s += '\n';
    }
    return s;
}

std::vector<DemandPoint> demand_from_csv(const std::string& text) {
    auto lines = split_lines(text);
    expect_header(lines, "id,lon,lat,weight,zone,time", "demand csv");
    std::vector<DemandPoint> out;
    for (std::size_t n = 1; n < lines.size(); ++n) {
        if (lines[n].empty()) continue;
        auto f = split_fields(lines[n]);
        if (f.size() != 6)
            throw std::runtime_error("line " + std::to_string(n + 1) + ": expected 6 fields");
        DemandPoint p;
        p.location.lon = parse_double_or_throw(f[1], n + 1);
        p.location.lat = parse_double_or_throw(f[2], n + 1);
        p.weight = parse_double_or_throw(f[3], n + 1);
        p.zone = zone_from_name(f[4]);
        p.time = parse_int_or_throw(f[5], n + 1);
        out.push_back(p);
    }
    return out;
}

std::string candidates_to_csv(const std::vector<CandidateStation>& candidates) {
    std::string s = "id,lon,lat,member_count\n";
    for (const auto& c : candidates) {
        s += std::to_string(c.id);
        s += ',';
        s += fmt_double(c.location.lon);
        s += ',';
        s += fmt_double(c.location.lat);
        s += ',';
        s += std::to_string(c.member_count);
        s += '\n';
    }
    return s;
}

std::vector<CandidateStation> candidates_from_csv(const std::string& text) {
    auto lines = split_lines(text);
    expect_header(lines, "id,lon,lat,member_count", "candidate csv");
    std::vector<CandidateStation> out;
    for (std::size_t n = 1; n < lines.size(); ++n) {
        if (lines[n].empty()) continue;
        auto f = split_fields(lines[n]);
        if (f.size() != 4)
            throw std::runtime_error("line " + std::to_string(n + 1) + ": expected 4 fields");
        CandidateStation c;
        c.id = static_cast<int>(parse_int_or_throw(f[0], n + 1));
        c.location.lon = parse_double_or_throw(f[1], n + 1);
        c.location.lat = parse_double_or_throw(f[2], n + 1);
        c.member_count = static_cast<int>(parse_int_or_throw(f[3], n + 1));
        out.push_back(c);
    }
    return out;
}

std::string solution_to_text(const SolutionFile& file) {
    std::string s;
    s += "model=";
    s += model_name(file.model);
    s += "\nmethod=";
    s += method_name(file.method);
    s += "\nseed=";
    s += std::to_string(file.seed);
    s += "\nm=";
    s += std::to_string(file.m);
    s += "\nexact=";
    s += file.solution.exact ? "1" : "0";
    s += "\npmedian_objective=";
    s += fmt_double(file.solution.pmedian_objective);
    s += "\nminmax_objective=";
    s += fmt_double(file.solution.minmax_objective);
    s += '\n';
    for (const auto& st : file.stations) {
        s += "station ";
        s += std::to_string(st.id);
        s += ' ';
        s += fmt_double(st.location.lon);
        s += ' ';
        s += fmt_double(st.location.lat);
        s += '\n';
    }
    for (std::size_t i = 0; i < file.solution.assignment.size(); ++i) {
        s += "assign ";
        s += std::to_string(i);
        s += ' ';
        s += std::to_string(file.solution.assignment[i]);
        s += '\n';
    }
    return s;
}

SolutionFile solution_from_text(const std::string& text) {
    SolutionFile file;
    auto lines = split_lines(text);
    std::size_t n = 0;
    bool saw_model = false, saw_m = false;
    for (; n < lines.size(); ++n) {
        const std::string& line = lines[n];
        if (line.empty()) continue;
        if (line.rfind("station ", 0) == 0 || line.rfind("assign ", 0) == 0) break;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("line " + std::to_string(n + 1) + ": expected key=value");
        std::string key = line.substr(0, eq);
        std::string val = line.substr(eq + 1);
        if (key == "model") {
            file.model = model_from_name(val);
            saw_model = true;
        } else if (key == "method") {
            file.method = method_from_name(val);
        } else if (key == "seed") {
            file.seed = static_cast<std::uint64_t>(parse_int_or_throw(val, n + 1));
        } else if (key == "m") {
            file.m = static_cast<int>(parse_int_or_throw(val, n + 1));
            saw_m = true;
        } else if (key == "exact") {
            file.solution.exact = val == "1";
        } else if (key == "pmedian_objective") {
            file.solution.pmedian_objective = parse_double_or_throw(val, n + 1);
        } else if (key == "minmax_objective") {
            file.solution.minmax_objective = parse_double_or_throw(val, n + 1);
        } else {
            throw std::runtime_error("line " + std::to_string(n + 1) + ": unknown key '" + key +
                                     "'");
        }
    }
    if (!saw_model || !saw_m) throw std::runtime_error("solution file: missing model or m");

    for (; n < lines.size(); ++n) {
        const std::string& line = lines[n];
        if (line.empty()) continue;
        std::istringstream iss(line);
        std::string tag;
        iss >> tag;
        if (tag == "station") {
            CandidateStation st;
            if (!(iss >> st.id >> st.location.lon >> st.location.lat))
                throw std::runtime_error("line " + std::to_string(n + 1) + ": bad station line");
            file.stations.push_back(st);
            file.solution.open.push_back(st.id);
        } else if (tag == "assign") {
            std::size_t demand_id = 0;
            int station_id = 0;
            if (!(iss >> demand_id >> station_id))
                throw std::runtime_error("line " + std::to_string(n + 1) + ": bad assign line");
            if (demand_id != file.solution.assignment.size())
                throw std::runtime_error("line " + std::to_string(n + 1) +
                                         ": assign lines out of order");
            file.solution.assignment.push_back(station_id);
        } else {
            throw std::runtime_error("line " + std::to_string(n + 1) + ": unknown line '" + tag +
                                     "'");
        }
    }
    if (static_cast<int>(file.stations.size()) != file.m)
        throw std::runtime_error("solution file: station count differs from m");
    return file;
}

std::string sweep_to_csv(const SweepResult& sweep) {
    std::string s = "m,pmedian_avg_km,minmax_km,exact_pmedian,exact_minmax\n";
    for (const auto& row : sweep.rows) {
        s += std::to_string(row.m);
        s += ',';
        s += fmt_double(row.pmedian_avg_km);
        s += ',';
        s += fmt_double(row.minmax_km);
        s += ',';
        s += row.exact_pmedian ? "1" : "0";
        s += ',';
        s += row.exact_minmax ? "1" : "0";
        s += '\n';
    }
    return s;
}

SweepResult sweep_from_csv(const std::string& text) {
    auto lines = split_lines(text);
    expect_header(lines, "m,pmedian_avg_km,minmax_km,exact_pmedian,exact_minmax", "sweep csv");
    SweepResult out;
    for (std::size_t n = 1; n < lines.size(); ++n) {
        if (lines[n].empty()) continue;
        auto f = split_fields(lines[n]);
        if (f.size() != 5)
            throw std::runtime_error("line " + std::to_string(n + 1) + ": expected 5 fields");
        SweepRow row;
        row.m = static_cast<int>(parse_int_or_throw(f[0], n + 1));
        row.pmedian_avg_km = parse_double_or_throw(f[1], n + 1);
        row.minmax_km = parse_double_or_throw(f[2], n + 1);
        row.exact_pmedian = f[3] == "1";
        row.exact_minmax = f[4] == "1";
        out.rows.push_back(row);
    }
    return out;
}

std::string compare_stations_to_csv(const CompareReport& report) {
    std::string s = "id,lon,lat,zone,open_plain,open_congested\n";
    for (const auto& row : report.stations) {
        s += std::to_string(row.id);
        s += ',';
        s += fmt_double(row.location.lon);
        s += ',';
        s += fmt_double(row.location.lat);
        s += ',';
        s += zone_name(row.zone);
        s += ',';
        s += row.open_plain ? "1" : "0";
        s += ',';
        s += row.open_congested ? "1" : "0";
        s += '\n';
    }
    return s;
}

}  // namespace siting
