// Acceptance checks for the siting toolkit. Each numbered criterion prints
// exactly one PASS or FAIL line with the key numbers; the exit status is the
// number of failed criteria. Oracles here are written independently of the
// library internals: exhaustive enumeration for the exact solvers, a
// direct per-row scan for the nearest assignment, and re-derived chain
// invariants for the pipeline.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "siting/cli.hpp"
#include "siting/io.hpp"
#include "siting/rng.hpp"
#include "siting/scenario.hpp"

using namespace siting;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& detail) {
    std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

template <typename Body>
void guarded(int id, Body&& body) {
    try {
        body();
    } catch (const std::exception& e) {
        report(id, false, std::string("unexpected exception: ") + e.what());
    }
}

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

struct Objectives {
    double pmedian = 0.0;
    double minmax = 0.0;
};

// Both objectives of an open set, accumulated in the library's order so
// equality checks can use tolerance zero.
Objectives eval_open(const CostMatrix& mat, const std::vector<int>& open) {
    Objectives o;
    for (std::size_t i = 0; i < mat.rows; ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (int j : open)
            if (mat.at(i, static_cast<std::size_t>(j)) < best)
                best = mat.at(i, static_cast<std::size_t>(j));
        o.pmedian += mat.h[i] * best;
        o.minmax = std::max(o.minmax, best);
    }
    return o;
}

bool next_combination(std::vector<int>& comb, int n) {
    const int m = static_cast<int>(comb.size());
    for (int i = m - 1; i >= 0; --i) {
        if (comb[static_cast<std::size_t>(i)] < n - m + i) {
            ++comb[static_cast<std::size_t>(i)];
            for (int t = i + 1; t < m; ++t)
                comb[static_cast<std::size_t>(t)] = comb[static_cast<std::size_t>(t - 1)] + 1;
            return true;
        }
    }
    return false;
}

// Best objective per model over every m-subset of the candidates.
Objectives enumerate_best(const CostMatrix& mat, int m) {
    std::vector<int> comb(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) comb[static_cast<std::size_t>(i)] = i;
    Objectives best{std::numeric_limits<double>::infinity(),
                    std::numeric_limits<double>::infinity()};
    do {
        Objectives o = eval_open(mat, comb);
        if (o.pmedian < best.pmedian) best.pmedian = o.pmedian;
        if (o.minmax < best.minmax) best.minmax = o.minmax;
    } while (next_combination(comb, static_cast<int>(mat.cols)));
    return best;
}

CostMatrix random_instance(std::uint64_t seed, int* m_out) {
    Rng rng(seed);
    const std::size_t rows = 5 + rng.uniform_int(26);  // 5..30
    const std::size_t cols = 2 + rng.uniform_int(11);  // 2..12
    CostMatrix mat;
    mat.rows = rows;
    mat.cols = cols;
    mat.d.resize(rows * cols);
    mat.h.resize(rows);
    for (double& v : mat.d) v = rng.uniform(0.1, 30.0);
    for (double& v : mat.h) v = 1.0 + static_cast<double>(rng.uniform_int(4));
    const int m_max = std::min<int>(4, static_cast<int>(cols));
    *m_out = 1 + static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(m_max)));
    return mat;
}

std::string report_config(const fs::path& dir) {
    return "profile = tiny\n"
           "io.input = " + (dir / "records.csv").string() + "\n"
           "io.output_dir = " + dir.string() + "\n"
           "congestion.enabled = false\n"
           "solve.m = 3\n"
           "solve.method = exact\n"
           "solve.seed = 1\n";
}

}  // namespace

int main() {
    constexpr int kInstances = 100;
    std::vector<CostMatrix> mats(kInstances);
    std::vector<int> ms(kInstances);
    std::vector<Objectives> exact(kInstances);
    bool exact_ready = false;

    // 1. On seeded random instances the exact solvers match exhaustive
    //    enumeration over every m-subset, with tolerance zero.
    guarded(1, [&] {
        for (int i = 0; i < kInstances; ++i)
            mats[static_cast<std::size_t>(i)] =
                random_instance(1000 + static_cast<std::uint64_t>(i), &ms[static_cast<std::size_t>(i)]);
        const auto t0 = std::chrono::steady_clock::now();
        int mismatches = 0;
        std::string first;
        for (int i = 0; i < kInstances; ++i) {
            const CostMatrix& mat = mats[static_cast<std::size_t>(i)];
            const int m = ms[static_cast<std::size_t>(i)];
            SitingSolution pm = solve_pmedian_exact(mat, m);
            SitingSolution mm = solve_minmax_exact(mat, m);
            exact[static_cast<std::size_t>(i)] = {pm.pmedian_objective, mm.minmax_objective};
            Objectives best = enumerate_best(mat, m);
            if (pm.pmedian_objective != best.pmedian || mm.minmax_objective != best.minmax) {
                ++mismatches;
                if (first.empty())
                    first = " first at instance " + std::to_string(i) + " (pmedian " +
                            num(pm.pmedian_objective) + " vs " + num(best.pmedian) + ", minmax " +
                            num(mm.minmax_objective) + " vs " + num(best.minmax) + ")";
            }
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        exact_ready = true;
        const bool ok = mismatches == 0 && secs < 10.0;
        report(1, ok,
               "exact == enumeration (tolerance 0, both models) on " +
                   std::to_string(kInstances - mismatches) + "/" + std::to_string(kInstances) +
                   " instances in " + num(secs) + " s" + first);
    });

    // 2. On the same instances the heuristics stay within 5% of exact on at
    //    least 95, and every returned solution passes the invariant audit.
    guarded(2, [&] {
        if (!exact_ready) {
            report(2, false, "skipped: exact objectives unavailable");
            return;
        }
        int within = 0, infeasible = 0;
        double worst_gap = 0.0;
        for (int i = 0; i < kInstances; ++i) {
            const CostMatrix& mat = mats[static_cast<std::size_t>(i)];
            const int m = ms[static_cast<std::size_t>(i)];
            SitingSolution pm =
                solve_pmedian_heuristic(mat, m, static_cast<std::uint64_t>(i), 3);
            SitingSolution mm = solve_minmax_heuristic(mat, m, static_cast<std::uint64_t>(i));
            if (!validate_solution(pm, mat, m) || !validate_solution(mm, mat, m)) ++infeasible;
            const Objectives& ex = exact[static_cast<std::size_t>(i)];
            const double gap_pm = (pm.pmedian_objective - ex.pmedian) / ex.pmedian;
            const double gap_mm = (mm.minmax_objective - ex.minmax) / ex.minmax;
            worst_gap = std::max({worst_gap, gap_pm, gap_mm});
            if (gap_pm <= 0.05 && gap_mm <= 0.05) ++within;
        }
        const bool ok = within >= 95 && infeasible == 0;
        report(2, ok,
               "heuristics within 5% of exact on " + std::to_string(within) + "/" +
                   std::to_string(kInstances) + " instances, " + std::to_string(infeasible) +
                   " infeasible, worst gap " + num(100.0 * worst_gap) + "%");
    });

    // 3. On the small fixed-seed scenario both exact objectives are
    //    non-increasing in the number of stations.
    guarded(3, [&] {
        Bundle bundle = run_pipeline(generate(tiny_scenario()), tiny_pipeline());
        double total_h = 0.0;
        for (double h : bundle.matrix.h) total_h += h;
        const int k = static_cast<int>(bundle.matrix.cols);
        std::vector<double> avg, worst;
        bool monotone = true;
        for (int m = 1; m <= k; ++m) {
            avg.push_back(solve_pmedian_exact(bundle.matrix, m).pmedian_objective / total_h);
            worst.push_back(solve_minmax_exact(bundle.matrix, m).minmax_objective);
            if (m > 1) {
                const std::size_t t = avg.size() - 1;
                if (avg[t] > avg[t - 1] + 1e-9 || worst[t] > worst[t - 1] + 1e-9)
                    monotone = false;
            }
        }
        report(3, monotone,
               "exact objectives non-increasing for m = 1.." + std::to_string(k) +
                   ": avg km " + num(avg.front()) + " -> " + num(avg.back()) + ", worst km " +
                   num(worst.front()) + " -> " + num(worst.back()));
    });

    // The study-sized scenario is shared by criteria 4 and 5.
    std::vector<OdRecord> study_records;
    std::optional<Bundle> study_plain;
    auto ensure_study = [&] {
        if (!study_plain) {
            study_records = generate(paper_scenario());
            study_plain = run_pipeline(study_records, paper_pipeline());
        }
    };
    SolveParams study_params;
    study_params.m = 30;
    study_params.method = Method::Heuristic;
    study_params.seed = 1;
    study_params.restarts = 3;

    // 4. Heuristic sweep m = 30..60 on the study scenario shows diminishing
    //    returns: the curve falls overall and flattens toward large m.
    guarded(4, [&] {
        ensure_study();
        const int jobs = std::max(1u, std::thread::hardware_concurrency());
        const auto t0 = std::chrono::steady_clock::now();
        SweepResult sweep = sweep_m(*study_plain, 30, 60, Method::Heuristic, study_params, jobs);
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        auto avg_at = [&](int m) { return sweep.rows[static_cast<std::size_t>(m - 30)].pmedian_avg_km; };
        bool rows_ok = sweep.rows.size() == 31;
        for (const auto& row : sweep.rows)
            if (!row.error.empty()) rows_ok = false;
        const double drop_30_40 = avg_at(30) - avg_at(40);
        const double drop_50_60 = avg_at(50) - avg_at(60);
        const bool ok = rows_ok && avg_at(60) < avg_at(30) && drop_50_60 < drop_30_40 &&
                        secs < 300.0;
        report(4, ok,
               "avg km falls " + num(avg_at(30)) + " -> " + num(avg_at(60)) +
                   "; early drop (m 30-40) " + num(drop_30_40) + " > late drop (m 50-60) " +
                   num(drop_50_60) + "; " + std::to_string(sweep.rows.size()) + " rows with " +
                   std::to_string(jobs) + " jobs in " + num(secs) + " s");
    });

    // 5. With rush-hour congestion weights (1.5 / 1.2 / 1.0) the inner-city
    //    open-station count at m = 30 does not fall; both worst-case
    //    objectives are reported for the record.
    guarded(5, [&] {
        ensure_study();
        PipelineParams congested_params = paper_pipeline();
        CongestionPolicy policy;
        policy.rings = congested_params.rings;
        congested_params.congestion = policy;
        Bundle congested = run_pipeline(study_records, congested_params);
        CompareReport rep = congestion_compare(*study_plain, congested, 30, Method::Heuristic,
                                               study_params, congested_params.rings);
        const bool ok = rep.zone_open_congested[0] >= rep.zone_open_plain[0];
        report(5, ok,
               "inner-city stations " + std::to_string(rep.zone_open_plain[0]) + " plain -> " +
                   std::to_string(rep.zone_open_congested[0]) +
                   " congested; minmax objectives reported: plain " +
                   num(rep.minmax_obj_plain) + " km, congested " + num(rep.minmax_obj_congested) +
                   " km");
    });

    // 6. Chain building on 10,000 synthetic records: every chain respects
    //    the gap, link and range rules, the chains partition each vehicle's
    //    trips, and demand extraction yields two points per chain.
    guarded(6, [&] {
        SynthParams sp = paper_scenario();
        sp.seed = 20260816;
        sp.n_vehicles = 100;
        sp.records_per_vehicle = 100;
        std::vector<OdRecord> records = generate(sp);
        bool ok = records.size() == 10000;
        std::string why = ok ? "" : " (record count " + std::to_string(records.size()) + ")";

        CleanResult cleaned = clean(records);
        auto per_vehicle = group_by_vehicle(cleaned.records);
        const ChainParams rules;
        const DegreeScale scale;
        auto chains = build_chains(per_vehicle, rules, scale);

        std::map<std::string, std::vector<OdRecord>> rebuilt;
        for (const auto& chain : chains) {
            double total = 0.0;
            for (std::size_t t = 0; t < chain.trips.size(); ++t) {
                total += chain.trips[t].distance_km;
                if (t > 0) {
                    const auto& prev = chain.trips[t - 1];
                    const auto& cur = chain.trips[t];
                    const double gap = static_cast<double>(cur.o_time - prev.d_time);
                    const double link = manhattan_km(prev.d, cur.o, scale);
                    if (gap < 0.0 || gap > rules.max_gap_min * 60.0) {
                        ok = false;
                        why = " (gap " + num(gap) + " s out of range)";
                    }
                    if (link > rules.max_link_km) {
                        ok = false;
                        why = " (link " + num(link) + " km too long)";
                    }
                }
            }
            if (total != chain.total_km || total >= rules.range_cap_km) {
                ok = false;
                why = " (chain total " + num(chain.total_km) + " km)";
            }
            auto& seq = rebuilt[chain.vehicle_id];
            seq.insert(seq.end(), chain.trips.begin(), chain.trips.end());
        }
        if (rebuilt != per_vehicle) {
            ok = false;
            why = " (chains do not partition the trips)";
        }
        auto demand = extract_demand(chains, default_rings());
        if (demand.size() != 2 * chains.size()) {
            ok = false;
            why = " (demand " + std::to_string(demand.size()) + " != 2 * chains)";
        }
        report(6, ok,
               std::to_string(records.size()) + " records -> " + std::to_string(chains.size()) +
                   " chains; gap/link/range rules, trip partition and 2-points-per-chain all hold" +
                   why);
    });

    // 7. Two CLI report runs with the same config and seed write
    //    byte-identical outputs.
    guarded(7, [&] {
        unsetenv("CHARGE_SITING_CONFIG");
        const fs::path root = fs::temp_directory_path() / "siting_acceptance";
        fs::remove_all(root);
        const fs::path dirs[2] = {root / "run_a", root / "run_b"};
        for (const auto& dir : dirs) {
            fs::create_directories(dir);
            const fs::path cfg = dir / "run.conf";
            write_file_atomic(cfg.string(), report_config(dir));
            if (cli::run({"--config", cfg.string(), "synth"}) != 0 ||
                cli::run({"--config", cfg.string(), "report", "--from", "1", "--to", "10"}) != 0) {
                report(7, false, "CLI run failed in " + dir.string());
                return;
            }
        }
        const char* files[] = {"demand.csv",           "candidates.csv",
                               "solution_pmedian.txt", "solution_minmax.txt",
                               "sweep.csv",            "map.svg",
                               "curve_pmedian.svg",    "curve_minmax.svg"};
        int identical = 0;
        std::string diff;
        for (const char* name : files) {
            if (read_file((dirs[0] / name).string()) == read_file((dirs[1] / name).string()))
                ++identical;
            else if (diff.empty())
                diff = std::string(" first difference in ") + name;
        }
        fs::remove_all(root);
        report(7, identical == 8,
               std::to_string(identical) +
                   "/8 report outputs byte-identical across two seeded runs" + diff);
    });

    // 8. Nearest assignment equals a per-demand brute force on random open
    //    sets, so searching open sets alone loses nothing.
    guarded(8, [&] {
        Rng rng(9090);
        int agreeing = 0;
        const int rounds = 1000;
        for (int t = 0; t < rounds; ++t) {
            int m_unused = 0;
            CostMatrix mat = random_instance(50000 + static_cast<std::uint64_t>(t), &m_unused);
            std::vector<int> ids(mat.cols);
            for (std::size_t j = 0; j < mat.cols; ++j) ids[j] = static_cast<int>(j);
            const std::size_t size = 1 + rng.uniform_int(mat.cols);
            for (std::size_t j = 0; j < size; ++j) {
                const std::size_t swap_with = j + rng.uniform_int(mat.cols - j);
                std::swap(ids[j], ids[swap_with]);
            }
            std::vector<int> open(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(size));
            std::sort(open.begin(), open.end());

            AssignResult got = assign_nearest(open, mat);
            bool same = got.assignment.size() == mat.rows;
            for (std::size_t i = 0; same && i < mat.rows; ++i) {
                // Scan in reverse so agreement is not an artifact of sharing
                // the library's loop order; ties resolve to the lowest id.
                double best = std::numeric_limits<double>::infinity();
                for (auto it = open.rbegin(); it != open.rend(); ++it) {
                    const double v = mat.at(i, static_cast<std::size_t>(*it));
                    if (v <= best) best = v;
                }
                int arg = -1;
                for (int j : open)
                    if (mat.at(i, static_cast<std::size_t>(j)) == best) {
                        arg = j;
                        break;
                    }
                if (got.assignment[i] != arg ||
                    mat.at(i, static_cast<std::size_t>(got.assignment[i])) != best)
                    same = false;
            }
            if (same) ++agreeing;
        }
        report(8, agreeing == rounds,
               "nearest assignment matches per-demand brute force on " +
                   std::to_string(agreeing) + "/" + std::to_string(rounds) + " random open sets");
    });

    return failures;
}
