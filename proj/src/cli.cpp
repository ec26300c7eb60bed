#include "siting/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "siting/config.hpp"
#include "siting/io.hpp"
#include "siting/plot.hpp"

namespace siting::cli {

namespace {

struct GlobalOpts {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int jobs = 1;
};

PipelineConfig load_cfg(const GlobalOpts& g, bool required) {
    std::string path = g.config_path;
    if (path.empty()) {
        const char* env = std::getenv("CHARGE_SITING_CONFIG");
        if (env) path = env;
    }
    PipelineConfig cfg;
    if (!path.empty())
        cfg = load_config(path);
    else if (required)
        throw ConfigError(0, "no config: pass --config or set CHARGE_SITING_CONFIG");
    if (g.seed_set) {
        cfg.synth.seed = g.seed;
        cfg.solve.seed = g.seed;
        cfg.pipeline.kmeans.seed = g.seed;
        cfg.synth_seed_set = cfg.solve_seed_set = cfg.cluster_seed_set = true;
    }
    if (!g.out_dir.empty()) cfg.output_dir = g.out_dir;
    return cfg;
}

std::string join_path(const std::string& dir, const std::string& name) {
    if (dir.empty() || dir == ".") return name;
    return dir + "/" + name;
}

void require_seed(bool set, const char* stage) {
    if (!set)
        throw ConfigError(0, std::string(stage) +
                                 " needs a seed: set it in the config or pass --seed");
}

void check_m(int m, int k) {
    if (m < 1 || m > k)
        throw ConfigError(0, "m must satisfy 1 <= m <= |J| (here |J| = cluster.k = " +
                                 std::to_string(k) + ", got m = " + std::to_string(m) + ")");
}

std::vector<OdRecord> load_input_records(const PipelineConfig& cfg,
                                         const std::string& flag_input) {
    std::string path = flag_input.empty() ? cfg.input_path : flag_input;
    if (path.empty()) throw ConfigError(0, "no input: set io.input or pass --input");
    ParseResult parsed = read_records_file(path);
    if (!parsed.errors.empty())
        std::cerr << "note: skipped " << parsed.errors.size() << " malformed row(s), first at line "
                  << parsed.errors.front().line << ": " << parsed.errors.front().message << "\n";
    return std::move(parsed.records);
}

// Pipeline seeds: clustering is always stochastic; solving only when a
// heuristic can run.
void require_pipeline_seeds(const PipelineConfig& cfg, Method method) {
    require_seed(cfg.cluster_seed_set, "cluster");
    if (method != Method::Exact) require_seed(cfg.solve_seed_set, "solve");
}

std::vector<CandidateStation> open_stations(const SitingSolution& sol,
                                            const std::vector<CandidateStation>& candidates) {
    std::vector<CandidateStation> out;
    out.reserve(sol.open.size());
    for (int id : sol.open) out.push_back(candidates[static_cast<std::size_t>(id)]);
    return out;
}

int cmd_synth(const PipelineConfig& cfg) {
    require_seed(cfg.synth_seed_set, "synth");
    auto records = generate(cfg.synth);
    std::string path = join_path(cfg.output_dir, "records.csv");
    write_file_atomic(path, records_to_csv(records));
    std::cout << "wrote " << path << " (" << records.size() << " records)\n";
    return 0;
}

int cmd_ingest(const PipelineConfig& cfg, const std::string& input) {
    auto records = load_input_records(cfg, input);
    CleanResult cleaned = clean(std::move(records), cfg.pipeline.cleaning);
    std::string csv_path = join_path(cfg.output_dir, "records_clean.csv");
    std::string report_path = join_path(cfg.output_dir, "clean_report.txt");
    write_file_atomic(csv_path, records_to_csv(cleaned.records));
    write_file_atomic(report_path, cleaned.report.to_text());
    std::cout << cleaned.report.to_text() << "wrote " << csv_path << "\n";
    return 0;
}

int cmd_chains(const PipelineConfig& cfg, const std::string& input) {
    auto records = load_input_records(cfg, input);
    PipelineCounts counts;
    auto chains = build_chain_stage(std::move(records), cfg.effective_pipeline(false), &counts);
    std::string path = join_path(cfg.output_dir, "chains.csv");
    write_file_atomic(path, chains_to_csv(chains));
    std::cout << counts.to_text() << "wrote " << path << "\n";
    return 0;
}

int cmd_cluster(const PipelineConfig& cfg, const std::string& input) {
    require_seed(cfg.cluster_seed_set, "cluster");
    auto records = load_input_records(cfg, input);
    Bundle bundle = run_pipeline(std::move(records), cfg.effective_pipeline(cfg.congestion_enabled));
    std::string demand_path = join_path(cfg.output_dir, "demand.csv");
    std::string cand_path = join_path(cfg.output_dir, "candidates.csv");
    std::string counts_path = join_path(cfg.output_dir, "pipeline_counts.txt");
    write_file_atomic(demand_path, demand_to_csv(bundle.demand));
    write_file_atomic(cand_path, candidates_to_csv(bundle.candidates));
    write_file_atomic(counts_path, bundle.counts.to_text());
    std::cout << bundle.counts.to_text() << "wrote " << demand_path << ", " << cand_path << "\n";
    return 0;
}

int cmd_solve(const PipelineConfig& cfg, const std::string& input, const std::string& model_str,
              int m_flag, const std::string& method_flag) {
    SolveParams params = cfg.solve;
    if (m_flag > 0) params.m = m_flag;
    if (!method_flag.empty()) params.method = method_from_name(method_flag);
    check_m(params.m, cfg.pipeline.kmeans.k);
    require_pipeline_seeds(cfg, params.method);
    Model model = model_from_name(model_str);

    auto records = load_input_records(cfg, input);
    Bundle bundle = run_pipeline(std::move(records), cfg.effective_pipeline(cfg.congestion_enabled));

    bool downgraded = false;
    auto t0 = std::chrono::steady_clock::now();
    SitingSolution sol = solve(bundle.matrix, model, params, &downgraded);
    auto wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - t0)
                       .count();

    SolutionFile file;
    file.model = model;
    file.method = params.method;
    file.seed = params.seed;
    file.m = params.m;
    file.solution = sol;
    file.stations = open_stations(sol, bundle.candidates);
    std::string path =
        join_path(cfg.output_dir, std::string("solution_") + model_name(model) + ".txt");
    write_file_atomic(path, solution_to_text(file));

    if (downgraded) std::cout << "note: exact budget exhausted, fell back to the heuristic\n";
    std::cout << "model=" << model_name(model) << " m=" << params.m << " exact="
              << (sol.exact ? 1 : 0) << "\npmedian_objective=" << fmt_double(sol.pmedian_objective)
              << "\nminmax_objective=" << fmt_double(sol.minmax_objective)
              << "\nwall_ms=" << wall_ms << "\nwrote " << path << "\n";
    return 0;
}

int cmd_sweep(const PipelineConfig& cfg, const std::string& input, int from, int to,
              const std::string& method_flag, int jobs) {
    SolveParams params = cfg.solve;
    Method method = method_flag.empty() ? params.method : method_from_name(method_flag);
    require_pipeline_seeds(cfg, method);

    auto records = load_input_records(cfg, input);
    Bundle bundle = run_pipeline(std::move(records), cfg.effective_pipeline(cfg.congestion_enabled));
    SweepResult sweep = sweep_m(bundle, from, to, method, params, jobs);

    std::string path = join_path(cfg.output_dir, "sweep.csv");
    write_file_atomic(path, sweep_to_csv(sweep));
    for (const auto& w : sweep.warnings) std::cerr << "warning: " << w << "\n";
    std::size_t failed = 0;
    for (const auto& row : sweep.rows)
        if (!row.error.empty()) {
            std::cerr << "m=" << row.m << " failed: " << row.error << "\n";
            ++failed;
        }
    std::cout << "sweep " << sweep.scenario << ": " << sweep.rows.size() << " rows ("
              << failed << " failed), wrote " << path << "\n";
    return 0;
}

int cmd_compare(const PipelineConfig& cfg, const std::string& input, int m_flag,
                const std::string& method_flag) {
    SolveParams params = cfg.solve;
    int m = m_flag > 0 ? m_flag : params.m;
    Method method = method_flag.empty() ? params.method : method_from_name(method_flag);
    check_m(m, cfg.pipeline.kmeans.k);
    require_pipeline_seeds(cfg, method);

    auto records = load_input_records(cfg, input);
    Bundle plain = run_pipeline(records, cfg.effective_pipeline(false));
    Bundle congested = run_pipeline(std::move(records), cfg.effective_pipeline(true));
    CompareReport report =
        congestion_compare(plain, congested, m, method, params, cfg.pipeline.rings);

    std::string text_path = join_path(cfg.output_dir, "compare.txt");
    std::string csv_path = join_path(cfg.output_dir, "compare_stations.csv");
    write_file_atomic(text_path, report.to_text());
    write_file_atomic(csv_path, compare_stations_to_csv(report));
    std::cout << report.to_text() << "wrote " << text_path << ", " << csv_path << "\n";
    return 0;
}

int cmd_report(const PipelineConfig& cfg, const std::string& input, int from, int to, int jobs) {
    SolveParams params = cfg.solve;
    check_m(params.m, cfg.pipeline.kmeans.k);
    require_pipeline_seeds(cfg, params.method);

    auto records = load_input_records(cfg, input);
    Bundle plain = run_pipeline(records, cfg.effective_pipeline(false));
    Bundle congested = run_pipeline(std::move(records), cfg.effective_pipeline(true));
    const Bundle& active = cfg.congestion_enabled ? congested : plain;

    write_file_atomic(join_path(cfg.output_dir, "demand.csv"), demand_to_csv(active.demand));
    write_file_atomic(join_path(cfg.output_dir, "candidates.csv"),
                      candidates_to_csv(active.candidates));
    write_file_atomic(join_path(cfg.output_dir, "pipeline_counts.txt"), active.counts.to_text());

    SitingSolution pm = solve(active.matrix, Model::PMedian, params);
    SitingSolution mm = solve(active.matrix, Model::MinMax, params);
    const std::pair<Model, const SitingSolution*> outputs[] = {{Model::PMedian, &pm},
                                                               {Model::MinMax, &mm}};
    for (const auto& [model, sol] : outputs) {
        SolutionFile file;
        file.model = model;
        file.method = params.method;
        file.seed = params.seed;
        file.m = params.m;
        file.solution = *sol;
        file.stations = open_stations(*sol, active.candidates);
        write_file_atomic(
            join_path(cfg.output_dir, std::string("solution_") + model_name(model) + ".txt"),
            solution_to_text(file));
    }

    SweepResult sweep = sweep_m(active, from, to, params.method, params, jobs);
    write_file_atomic(join_path(cfg.output_dir, "sweep.csv"), sweep_to_csv(sweep));
    for (const auto& w : sweep.warnings) std::cerr << "warning: " << w << "\n";

    CompareReport report =
        congestion_compare(plain, congested, params.m, params.method, params, cfg.pipeline.rings);
    write_file_atomic(join_path(cfg.output_dir, "compare.txt"), report.to_text());
    write_file_atomic(join_path(cfg.output_dir, "compare_stations.csv"),
                      compare_stations_to_csv(report));

    write_file_atomic(join_path(cfg.output_dir, "map.svg"),
                      map_svg(active.demand, open_stations(pm, active.candidates),
                              open_stations(mm, active.candidates), &cfg.pipeline.rings));
    write_file_atomic(join_path(cfg.output_dir, "curve_pmedian.svg"),
                      curve_svg(sweep, CurveMetric::PMedianAvg));
    write_file_atomic(join_path(cfg.output_dir, "curve_minmax.svg"),
                      curve_svg(sweep, CurveMetric::MinMax));

    std::cout << active.counts.to_text() << report.to_text() << "report written to "
              << cfg.output_dir << "\n";
    return 0;
}

int cmd_plot(const GlobalOpts& g, const std::string& kind, const std::string& demand_path,
             const std::string& pm_path, const std::string& mm_path,
             const std::string& sweep_path, const std::string& metric_str,
             const std::string& out) {
    try {
        std::string svg;
        if (kind == "map") {
            if (demand_path.empty()) throw ConfigError(0, "map plots need --demand");
            auto demand = demand_from_csv(read_file(demand_path));
            std::vector<CandidateStation> pm_stations, mm_stations;
            if (!pm_path.empty()) pm_stations = solution_from_text(read_file(pm_path)).stations;
            if (!mm_path.empty()) mm_stations = solution_from_text(read_file(mm_path)).stations;
            PipelineConfig cfg = load_cfg(g, false);
            bool have_cfg = !g.config_path.empty() || std::getenv("CHARGE_SITING_CONFIG");
            svg = map_svg(demand, pm_stations, mm_stations,
                          have_cfg ? &cfg.pipeline.rings : nullptr);
        } else if (kind == "curve") {
            if (sweep_path.empty()) throw ConfigError(0, "curve plots need --sweep");
            SweepResult sweep = sweep_from_csv(read_file(sweep_path));
            CurveMetric metric;
            if (metric_str == "pmedian")
                metric = CurveMetric::PMedianAvg;
            else if (metric_str == "minmax")
                metric = CurveMetric::MinMax;
            else
                throw ConfigError(0, "unknown metric '" + metric_str + "'");
            svg = curve_svg(sweep, metric);
        } else {
            throw ConfigError(0, "unknown plot kind '" + kind + "'");
        }
        write_file_atomic(out, svg);
        std::cout << "wrote " << out << "\n";
        return 0;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        // Bad file contents are a stage failure, not a config problem.
        throw PipelineError("plot", e.what());
    }
}

}  // namespace

int run(std::vector<std::string> args) {
    CLI::App app{"taxi trip-chain charging-station siting toolkit"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--config", g.config_path,
                   "config file (falls back to $CHARGE_SITING_CONFIG)");
    app.add_option("--out-dir", g.out_dir, "override io.output_dir");
    auto* seed_opt = app.add_option("--seed", g.seed, "override every configured seed");
    app.add_option("--jobs", g.jobs, "worker threads for sweeps")->check(CLI::PositiveNumber);

    std::string input, model_str = "pmedian", method_flag, kind = "map";
    std::string demand_path, pm_path, mm_path, sweep_path, metric_str = "pmedian", plot_out;
    int m_flag = 0, from = 30, to = 60;

    auto* c_synth = app.add_subcommand("synth", "generate synthetic OD records");
    auto* c_ingest = app.add_subcommand("ingest", "parse and clean an OD record file");
    auto* c_chains = app.add_subcommand("chains", "build trip chains from records");
    auto* c_cluster = app.add_subcommand("cluster", "extract demand and candidate stations");
    auto* c_solve = app.add_subcommand("solve", "site m stations on the pipeline output");
    auto* c_sweep = app.add_subcommand("sweep", "solve both models over a range of m");
    auto* c_compare = app.add_subcommand("compare", "plain vs congested siting at one m");
    auto* c_report = app.add_subcommand("report", "full pipeline, solutions, sweep and plots");
    auto* c_plot = app.add_subcommand("plot", "render an SVG from result files");

    for (auto* c : {c_ingest, c_chains, c_cluster, c_solve, c_sweep, c_compare, c_report})
        c->add_option("--input", input, "input records CSV (overrides io.input)");
    c_solve->add_option("--model", model_str, "pmedian or minmax");
    c_solve->add_option("--m", m_flag, "stations to open (overrides solve.m)");
    c_compare->add_option("--m", m_flag, "stations to open (overrides solve.m)");
    for (auto* c : {c_solve, c_sweep, c_compare})
        c->add_option("--method", method_flag, "exact, heuristic or auto");
    for (auto* c : {c_sweep, c_report}) {
        c->add_option("--from", from, "first m");
        c->add_option("--to", to, "last m");
    }
    c_plot->add_option("--kind", kind, "map or curve");
    c_plot->add_option("--demand", demand_path, "demand CSV (map)");
    c_plot->add_option("--pmedian", pm_path, "total-cost solution file (map)");
    c_plot->add_option("--minmax", mm_path, "worst-case solution file (map)");
    c_plot->add_option("--sweep", sweep_path, "sweep CSV (curve)");
    c_plot->add_option("--metric", metric_str, "pmedian or minmax (curve)");
    c_plot->add_option("--out", plot_out, "output SVG path")->required();

    for (auto* c : app.get_subcommands({})) c->fallthrough();

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    g.seed_set = seed_opt->count() > 0;

    try {
        if (c_synth->parsed()) return cmd_synth(load_cfg(g, true));
        if (c_ingest->parsed()) return cmd_ingest(load_cfg(g, true), input);
        if (c_chains->parsed()) return cmd_chains(load_cfg(g, true), input);
        if (c_cluster->parsed()) return cmd_cluster(load_cfg(g, true), input);
        if (c_solve->parsed())
            return cmd_solve(load_cfg(g, true), input, model_str, m_flag, method_flag);
        if (c_sweep->parsed())
            return cmd_sweep(load_cfg(g, true), input, from, to, method_flag, g.jobs);
        if (c_compare->parsed())
            return cmd_compare(load_cfg(g, true), input, m_flag, method_flag);
        if (c_report->parsed()) return cmd_report(load_cfg(g, true), input, from, to, g.jobs);
        if (c_plot->parsed())
            return cmd_plot(g, kind, demand_path, pm_path, mm_path, sweep_path, metric_str,
                            plot_out);
        std::cerr << "error: no subcommand\n";
        return 2;
    } catch (const BudgetExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const PipelineError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace siting::cli
