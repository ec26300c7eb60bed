#include "siting/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace siting {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = s.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(trim(s.substr(start)));
            break;
        }
        out.push_back(trim(s.substr(start, pos - start)));
        start = pos + 1;
    }
    return out;
}

double to_double(const std::string& v, std::size_t line) {
    char* end = nullptr;
    double d = std::strtod(v.c_str(), &end);
    if (end != v.c_str() + v.size() || v.empty())
        throw ConfigError(line, "expected a number, got '" + v + "'");
    return d;
}

long long to_int(const std::string& v, std::size_t line) {
    char* end = nullptr;
    long long n = std::strtoll(v.c_str(), &end, 10);
    if (end != v.c_str() + v.size() || v.empty())
        throw ConfigError(line, "expected an integer, got '" + v + "'");
    return n;
}

std::uint64_t to_u64(const std::string& v, std::size_t line) {
    char* end = nullptr;
    unsigned long long n = std::strtoull(v.c_str(), &end, 10);
    // strtoull wraps negative input around instead of failing; refuse it.
    if (end != v.c_str() + v.size() || v.empty() || v[0] == '-')
        throw ConfigError(line, "expected an unsigned integer, got '" + v + "'");
    return n;
}

bool to_bool(const std::string& v, std::size_t line) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigError(line, "expected true/false, got '" + v + "'");
}

// "lon_min,lat_min,lon_max,lat_max" (west, south, east, north)
BoundingBox to_bbox(const std::string& v, std::size_t line) {
    auto parts = split(v, ',');
    if (parts.size() != 4) throw ConfigError(line, "expected lon_min,lat_min,lon_max,lat_max");
    BoundingBox b;
    b.lon_min = to_double(parts[0], line);
    b.lat_min = to_double(parts[1], line);
    b.lon_max = to_double(parts[2], line);
    b.lat_max = to_double(parts[3], line);
    if (!b.valid()) throw ConfigError(line, "box is empty or inverted");
    return b;
}

int to_minute_of_day(const std::string& v, std::size_t line) {
    if (v.size() != 5 || v[2] != ':') throw ConfigError(line, "expected HH:MM");
    int h = (v[0] - '0') * 10 + (v[1] - '0');
    int m = (v[3] - '0') * 10 + (v[4] - '0');
    if (v[0] < '0' || v[0] > '9' || v[1] < '0' || v[1] > '9' || v[3] < '0' || v[3] > '9' ||
        v[4] < '0' || v[4] > '9' || h > 23 || m > 59)
        throw ConfigError(line, "expected HH:MM");
    return h * 60 + m;
}

// "07:00-09:00;18:00-20:00"
std::vector<TimeWindow> to_windows(const std::string& v, std::size_t line) {
    std::vector<TimeWindow> out;
    for (const auto& item : split(v, ';')) {
        if (item.empty()) continue;
        auto dash = item.find('-');
        if (dash == std::string::npos) throw ConfigError(line, "expected HH:MM-HH:MM");
        TimeWindow w;
        w.start_sec = to_minute_of_day(trim(item.substr(0, dash)), line) * 60;
        w.end_sec = to_minute_of_day(trim(item.substr(dash + 1)), line) * 60;
        if (w.end_sec <= w.start_sec) throw ConfigError(line, "window ends before it starts");
        out.push_back(w);
    }
    if (out.empty()) throw ConfigError(line, "no windows given");
    return out;
}

// "lon,lat,weight,spread_km;..."
std::vector<Hotspot> to_hotspots(const std::string& v, std::size_t line) {
    std::vector<Hotspot> out;
    for (const auto& item : split(v, ';')) {
        if (item.empty()) continue;
        auto parts = split(item, ',');
        if (parts.size() != 4) throw ConfigError(line, "expected lon,lat,weight,spread_km");
        Hotspot h;
        h.center.lon = to_double(parts[0], line);
        h.center.lat = to_double(parts[1], line);
        h.weight = to_double(parts[2], line);
        h.spread_km = to_double(parts[3], line);
        out.push_back(h);
    }
    if (out.empty()) throw ConfigError(line, "no hotspots given");
    return out;
}

}  // namespace

PipelineParams PipelineConfig::effective_pipeline(bool with_congestion) const {
    PipelineParams p = pipeline;
    p.congestion = with_congestion ? std::optional<CongestionPolicy>(congestion) : std::nullopt;
    if (rush_hour_only) p.depart_filter = congestion.windows;
    return p;
}

PipelineConfig parse_config(std::istream& in) {
    PipelineConfig cfg;
    std::string raw;
    std::size_t line_no = 0;

    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;

        auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(line_no, "expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(line_no, "empty key");

        if (key == "profile") {
            if (val == "paper") {
                cfg.synth = paper_scenario();
                cfg.pipeline = paper_pipeline();
            } else if (val == "tiny") {
                cfg.synth = tiny_scenario();
                cfg.pipeline = tiny_pipeline();
            } else {
                throw ConfigError(line_no, "unknown profile '" + val + "'");
            }
            cfg.synth_seed_set = true;
            cfg.cluster_seed_set = true;
        } else if (key == "io.input") {
            cfg.input_path = val;
        } else if (key == "io.output_dir") {
            cfg.output_dir = val;
        } else if (key == "geo.lat_km") {
            cfg.pipeline.scale.lat_km = to_double(val, line_no);
        } else if (key == "geo.lon_km") {
            cfg.pipeline.scale.lon_km = to_double(val, line_no);
        } else if (key == "geo.bbox") {
            cfg.synth.bbox = to_bbox(val, line_no);
        } else if (key == "geo.ring3") {
            cfg.pipeline.rings.ring3 = to_bbox(val, line_no);
            cfg.congestion.rings = cfg.pipeline.rings;
        } else if (key == "geo.ring4") {
            cfg.pipeline.rings.ring4 = to_bbox(val, line_no);
            cfg.congestion.rings = cfg.pipeline.rings;
        } else if (key == "clean.max_gap_min") {
            cfg.pipeline.cleaning.max_gap_min = to_double(val, line_no);
        } else if (key == "clean.sanity_box") {
            cfg.pipeline.cleaning.sanity_box = to_bbox(val, line_no);
        } else if (key == "chain.max_gap_min") {
            cfg.pipeline.chain.max_gap_min = to_double(val, line_no);
        } else if (key == "chain.max_link_km") {
            cfg.pipeline.chain.max_link_km = to_double(val, line_no);
        } else if (key == "chain.range_cap_km") {
            cfg.pipeline.chain.range_cap_km = to_double(val, line_no);
        } else if (key == "chain.min_total_km") {
            cfg.pipeline.min_chain_km = to_double(val, line_no);
        } else if (key == "chain.max_chains") {
            long long n = to_int(val, line_no);
            if (n < 0) throw ConfigError(line_no, "chain.max_chains must be >= 0");
            cfg.pipeline.max_chains = static_cast<std::size_t>(n);
        } else if (key == "cluster.k") {
            cfg.pipeline.kmeans.k = static_cast<int>(to_int(val, line_no));
        } else if (key == "cluster.seed") {
            cfg.pipeline.kmeans.seed = to_u64(val, line_no);
            cfg.cluster_seed_set = true;
        } else if (key == "cluster.max_iters") {
            cfg.pipeline.kmeans.max_iters = static_cast<int>(to_int(val, line_no));
        } else if (key == "cluster.tol") {
            cfg.pipeline.kmeans.tol = to_double(val, line_no);
        } else if (key == "congestion.enabled") {
            cfg.congestion_enabled = to_bool(val, line_no);
        } else if (key == "congestion.sigma_inner3") {
            cfg.congestion.sigma_inner3 = to_double(val, line_no);
        } else if (key == "congestion.sigma_ring34") {
            cfg.congestion.sigma_ring34 = to_double(val, line_no);
        } else if (key == "congestion.sigma_other") {
            cfg.congestion.sigma_other = to_double(val, line_no);
        } else if (key == "congestion.windows") {
            cfg.congestion.windows = to_windows(val, line_no);
        } else if (key == "congestion.rush_hour_only") {
            cfg.rush_hour_only = to_bool(val, line_no);
        } else if (key == "solve.m") {
            cfg.solve.m = static_cast<int>(to_int(val, line_no));
        } else if (key == "solve.method") {
            try {
                cfg.solve.method = method_from_name(val);
            } catch (const std::invalid_argument& e) {
                throw ConfigError(line_no, e.what());
            }
        } else if (key == "solve.seed") {
            cfg.solve.seed = to_u64(val, line_no);
            cfg.solve_seed_set = true;
        } else if (key == "solve.exact_limit") {
            cfg.solve.exact_limit = static_cast<int>(to_int(val, line_no));
        } else if (key == "solve.combo_budget") {
            cfg.solve.combo_budget = to_double(val, line_no);
        } else if (key == "solve.node_budget") {
            cfg.solve.node_budget = to_int(val, line_no);
        } else if (key == "solve.restarts") {
            cfg.solve.restarts = static_cast<int>(to_int(val, line_no));
        } else if (key == "synth.seed") {
            cfg.synth.seed = to_u64(val, line_no);
            cfg.synth_seed_set = true;
        } else if (key == "synth.n_vehicles") {
            cfg.synth.n_vehicles = static_cast<int>(to_int(val, line_no));
        } else if (key == "synth.records_per_vehicle") {
            cfg.synth.records_per_vehicle = static_cast<int>(to_int(val, line_no));
        } else if (key == "synth.span_start") {
            auto t = parse_timestamp(val);
            if (!t) throw ConfigError(line_no, "expected YYYYMMDD HH:MM:SS");
            cfg.synth.span_start = *t;
        } else if (key == "synth.span_hours") {
            cfg.synth.span_hours = to_double(val, line_no);
        } else if (key == "synth.median_km") {
            cfg.synth.lognormal_median_km = to_double(val, line_no);
        } else if (key == "synth.sigma") {
            cfg.synth.lognormal_sigma = to_double(val, line_no);
        } else if (key == "synth.short_gap_prob") {
            cfg.synth.short_gap_prob = to_double(val, line_no);
        } else if (key == "synth.relocate_prob") {
            cfg.synth.relocate_prob = to_double(val, line_no);
        } else if (key == "synth.speed_kmh") {
            cfg.synth.mean_speed_kmh = to_double(val, line_no);
        } else if (key == "synth.detour_min") {
            cfg.synth.detour_min = to_double(val, line_no);
        } else if (key == "synth.detour_max") {
            cfg.synth.detour_max = to_double(val, line_no);
        } else if (key == "synth.hotspots") {
            cfg.synth.hotspots = to_hotspots(val, line_no);
        } else {
            throw ConfigError(line_no, "unknown key '" + key + "'");
        }
    }

    if (!cfg.pipeline.rings.valid())
        throw ConfigError(line_no, "ring3 must lie strictly inside ring4");
    if (!cfg.congestion.valid())
        throw ConfigError(line_no, "congestion factors must be >= 1");
    return cfg;
}

PipelineConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(0, "cannot open config file: " + path);
    return parse_config(in);
}

}  // namespace siting
