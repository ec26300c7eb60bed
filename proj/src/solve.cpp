#include "siting/solve.hpp"

#include <algorithm>
#include <bit>
#include <cstddef>
#include <limits>
#include <optional>

#include "siting/rng.hpp"

namespace siting {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_m(const CostMatrix& matrix, int m) {
    if (matrix.rows == 0 || matrix.cols == 0)
        throw std::invalid_argument("empty instance");
    if (m < 1 || static_cast<std::size_t>(m) > matrix.cols)
        throw std::invalid_argument("m must satisfy 1 <= m <= |J|");
}

// Shared leaf evaluation. Scans candidates in the order given (callers pass
// ascending ids) and accumulates in demand order so that every code path
// that scores the same open set produces bitwise-identical objectives.
double weighted_cost(const std::vector<int>& open, const CostMatrix& matrix) {
    double total = 0.0;
    for (std::size_t i = 0; i < matrix.rows; ++i) {
        double best = kInf;
        for (int j : open) {
            double d = matrix.at(i, static_cast<std::size_t>(j));
            if (d < best) best = d;
        }
        total += matrix.h[i] * best;
    }
    return total;
}

struct NodeBudget {
    long long left;
    void spend() {
        if (--left < 0) throw BudgetExceeded();
    }
};

// ---- P-median exact ----

class PMedianBnb {
public:
    PMedianBnb(const CostMatrix& matrix, int m, long long node_budget)
        : matrix_(matrix), m_(m), budget_{node_budget} {
        n_ = static_cast<int>(matrix.cols);
        allowed_.assign(static_cast<std::size_t>(n_), true);
        row_min_.resize(matrix.rows);
        row_arg_.resize(matrix.rows);
        bound_ = 0.0;
        for (std::size_t i = 0; i < matrix.rows; ++i) {
            double best = kInf;
            int arg = -1;
            for (int j = 0; j < n_; ++j) {
                double d = matrix.at(i, static_cast<std::size_t>(j));
                if (d < best) {
                    best = d;
                    arg = j;
                }
            }
            row_min_[i] = best;
            row_arg_[i] = arg;
            bound_ += matrix.h[i] * best;
        }
    }

    std::vector<int> run(std::vector<int> incumbent, double incumbent_cost) {
        best_set_ = std::move(incumbent);
        best_cost_ = incumbent_cost;
        open_.clear();
        dfs(0, 0);
        return best_set_;
    }

private:
    void dfs(int pos, int opened) {
        budget_.spend();
        if (opened == m_) {
            double cost = weighted_cost(open_, matrix_);
            if (cost < best_cost_) {
                best_cost_ = cost;
                best_set_ = open_;
            }
            return;
        }
        if (pos == n_ || opened + (n_ - pos) < m_) return;
        if (bound_ >= best_cost_) return;

        open_.push_back(pos);
        dfs(pos + 1, opened + 1);
        open_.pop_back();

        auto undo = exclude(pos);
        if (bound_ < best_cost_) dfs(pos + 1, opened);
        restore(pos, undo);
    }

    struct RowSave {
        std::size_t row;
        double min;
        int arg;
    };

    // Removing a candidate from the allowed set only affects rows whose
    // current minimum it carried; those are rescanned and saved for undo.
    std::vector<RowSave> exclude(int j) {
        allowed_[static_cast<std::size_t>(j)] = false;
        std::vector<RowSave> saved;
        for (std::size_t i = 0; i < matrix_.rows; ++i) {
            if (row_arg_[i] != j) continue;
            saved.push_back({i, row_min_[i], row_arg_[i]});
            double best = kInf;
            int arg = -1;
            for (int c = 0; c < n_; ++c) {
                if (!allowed_[static_cast<std::size_t>(c)]) continue;
                double d = matrix_.at(i, static_cast<std::size_t>(c));
                if (d < best) {
                    best = d;
                    arg = c;
                }
            }
            bound_ += matrix_.h[i] * (best - row_min_[i]);
            row_min_[i] = best;
            row_arg_[i] = arg;
        }
        return saved;
    }

    void restore(int j, const std::vector<RowSave>& saved) {
        allowed_[static_cast<std::size_t>(j)] = true;
        for (const auto& s : saved) {
            bound_ += matrix_.h[s.row] * (s.min - row_min_[s.row]);
            row_min_[s.row] = s.min;
            row_arg_[s.row] = s.arg;
        }
    }

    const CostMatrix& matrix_;
    int m_;
    int n_ = 0;
    NodeBudget budget_;
    std::vector<bool> allowed_;
    std::vector<double> row_min_;
    std::vector<int> row_arg_;
    double bound_ = 0.0;
    std::vector<int> open_;
    std::vector<int> best_set_;
    double best_cost_ = kInf;
};

// ---- P-median heuristic ----

std::vector<int> greedy_start(const CostMatrix& matrix, int m) {
    const int n = static_cast<int>(matrix.cols);
    std::vector<int> open;
    std::vector<char> used(static_cast<std::size_t>(n), 0);
    std::vector<double> cur(matrix.rows, kInf);

    // First pick: cheapest single candidate. Later picks: largest drop in
    // total cost, lowest id on ties (which also resolves all-zero gains).
    for (int step = 0; step < m; ++step) {
        int best_j = -1;
        double best_val = kInf;
        for (int j = 0; j < n; ++j) {
            if (used[static_cast<std::size_t>(j)]) continue;
            double val = 0.0;
            if (step == 0) {
                for (std::size_t i = 0; i < matrix.rows; ++i)
                    val += matrix.h[i] * matrix.at(i, static_cast<std::size_t>(j));
            } else {
                for (std::size_t i = 0; i < matrix.rows; ++i) {
                    double d = matrix.at(i, static_cast<std::size_t>(j));
                    if (d < cur[i]) val -= matrix.h[i] * (cur[i] - d);
                }
            }
            if (val < best_val) {
                best_val = val;
                best_j = j;
            }
        }
        used[static_cast<std::size_t>(best_j)] = 1;
        open.push_back(best_j);
        for (std::size_t i = 0; i < matrix.rows; ++i) {
            double d = matrix.at(i, static_cast<std::size_t>(best_j));
            if (d < cur[i]) cur[i] = d;
        }
    }
    std::sort(open.begin(), open.end());
    return open;
}

// Best-improvement vertex substitution (Whitaker-style fast gain
// evaluation). Per pass it computes, for every closed candidate `in`, the
// savings from adding it, plus for every open `out` the extra cost its
// clients would pay rerouted to their second choice or to `in`.
void interchange(const CostMatrix& matrix, std::vector<int>& open) {
    const int n = static_cast<int>(matrix.cols);
    const int m = static_cast<int>(open.size());
    if (m >= n) return;
    const std::size_t rows = matrix.rows;

    std::vector<double> d1(rows), d2(rows);
    std::vector<int> a1(rows);
    std::vector<char> is_open(static_cast<std::size_t>(n), 0);

    while (true) {
        std::fill(is_open.begin(), is_open.end(), 0);
        for (int j : open) is_open[static_cast<std::size_t>(j)] = 1;
        double obj = 0.0;
        for (std::size_t i = 0; i < rows; ++i) {
            double b1 = kInf, b2 = kInf;
            int arg = -1;
            for (int j : open) {
                double d = matrix.at(i, static_cast<std::size_t>(j));
                if (d < b1) {
                    b2 = b1;
                    b1 = d;
                    arg = j;
                } else if (d < b2) {
                    b2 = d;
                }
            }
            d1[i] = b1;
            d2[i] = b2;
            a1[i] = arg;
            obj += matrix.h[i] * b1;
        }

        double best_delta = 0.0;
        int best_in = -1, best_out = -1;
        std::vector<double> reroute(static_cast<std::size_t>(n), 0.0);
        for (int in = 0; in < n; ++in) {
            if (is_open[static_cast<std::size_t>(in)]) continue;
            double gain = 0.0;
            for (int j : open) reroute[static_cast<std::size_t>(j)] = 0.0;
            for (std::size_t i = 0; i < rows; ++i) {
                double din = matrix.at(i, static_cast<std::size_t>(in));
                if (din < d1[i]) gain += matrix.h[i] * (d1[i] - din);
                // If i's current station closes, i moves to min(d2, din).
                double fallback = d2[i] < din ? d2[i] : din;
                double now = din < d1[i] ? din : d1[i];
                reroute[static_cast<std::size_t>(a1[i])] += matrix.h[i] * (fallback - now);
            }
            for (int out : open) {
                double delta = gain - reroute[static_cast<std::size_t>(out)];
                if (delta > best_delta) {
                    best_delta = delta;
                    best_in = in;
                    best_out = out;
                }
            }
        }
        if (best_in < 0) break;

        std::vector<int> trial = open;
        trial.erase(std::find(trial.begin(), trial.end(), best_out));
        trial.push_back(best_in);
        std::sort(trial.begin(), trial.end());
        // Guard against accumulated float error claiming a bogus gain.
        if (weighted_cost(trial, matrix) >= obj) break;
        open = std::move(trial);
    }
}

// ---- Min-max ----

class CoverTable {
public:
    CoverTable(const CostMatrix& matrix) : matrix_(matrix) {
        words_ = (matrix.rows + 63) / 64;
    }

    void set_radius(double r) {
        const int n = static_cast<int>(matrix_.cols);
        cover_.assign(static_cast<std::size_t>(n) * words_, 0);
        for (std::size_t i = 0; i < matrix_.rows; ++i)
            for (int j = 0; j < n; ++j)
                if (matrix_.at(i, static_cast<std::size_t>(j)) <= r)
                    cover_[static_cast<std::size_t>(j) * words_ + i / 64] |= 1ULL << (i % 64);
    }

    std::vector<std::uint64_t> full_mask() const {
        std::vector<std::uint64_t> mask(words_, 0);
        for (std::size_t i = 0; i < matrix_.rows; ++i) mask[i / 64] |= 1ULL << (i % 64);
        return mask;
    }

    const std::uint64_t* of(int j) const { return &cover_[static_cast<std::size_t>(j) * words_]; }

    std::size_t words() const { return words_; }

    int covered_count(int j, const std::vector<std::uint64_t>& uncovered) const {
        const std::uint64_t* c = of(j);
        int total = 0;
        for (std::size_t w = 0; w < words_; ++w) total += std::popcount(c[w] & uncovered[w]);
        return total;
    }

    bool covers(int j, std::size_t i) const {
        return (of(j)[i / 64] >> (i % 64)) & 1ULL;
    }

private:
    const CostMatrix& matrix_;
    std::size_t words_ = 0;
    std::vector<std::uint64_t> cover_;
};

bool all_zero(const std::vector<std::uint64_t>& mask) {
    for (std::uint64_t w : mask)
        if (w) return false;
    return true;
}

int popcount_all(const std::vector<std::uint64_t>& mask) {
    int total = 0;
    for (std::uint64_t w : mask) total += std::popcount(w);
    return total;
}

// Exact set cover: can m candidates cover every demand within the current
// radius? Branches on the uncovered demand with the fewest covering
// candidates, trying those candidates in ascending id order.
class CoverBnb {
public:
    CoverBnb(const CoverTable& table, int n, int m, NodeBudget& budget)
        : table_(table), n_(n), m_(m), budget_(budget) {}

    std::optional<std::vector<int>> run(const std::vector<std::uint64_t>& start) {
        chosen_.clear();
        found_.reset();
        dfs(start, 0);
        return found_;
    }

private:
    void dfs(const std::vector<std::uint64_t>& uncovered, int depth) {
        if (found_) return;
        budget_.spend();
        if (all_zero(uncovered)) {
            found_ = chosen_;
            return;
        }
        if (depth == m_) return;

        int remaining = popcount_all(uncovered);
        int widest = 0;
        std::size_t pick = 0;
        int pick_count = std::numeric_limits<int>::max();
        for (std::size_t w = 0; w < table_.words(); ++w) {
            std::uint64_t bits = uncovered[w];
            while (bits) {
                std::size_t i = w * 64 + static_cast<std::size_t>(std::countr_zero(bits));
                bits &= bits - 1;
                int c = 0;
                for (int j = 0; j < n_; ++j)
                    if (table_.covers(j, i)) ++c;
                if (c == 0) return;  // this demand is unreachable at this radius
                if (c < pick_count) {
                    pick_count = c;
                    pick = i;
                }
            }
        }
        for (int j = 0; j < n_; ++j) widest = std::max(widest, table_.covered_count(j, uncovered));
        if (widest == 0 || static_cast<long long>(widest) * (m_ - depth) < remaining) return;

        for (int j = 0; j < n_; ++j) {
            if (!table_.covers(j, pick)) continue;
            std::vector<std::uint64_t> next(uncovered);
            const std::uint64_t* c = table_.of(j);
            for (std::size_t w = 0; w < table_.words(); ++w) next[w] &= ~c[w];
            chosen_.push_back(j);
            dfs(next, depth + 1);
            chosen_.pop_back();
            if (found_) return;
        }
    }

    const CoverTable& table_;
    int n_;
    int m_;
    NodeBudget& budget_;
    std::vector<int> chosen_;
    std::optional<std::vector<int>> found_;
};

std::optional<std::vector<int>> greedy_cover(const CoverTable& table, int n, int m,
                                             const std::vector<std::uint64_t>& start) {
    std::vector<std::uint64_t> uncovered = start;
    std::vector<int> chosen;
    while (!all_zero(uncovered)) {
        if (static_cast<int>(chosen.size()) == m) return std::nullopt;
        int best_j = -1, best_c = 0;
        for (int j = 0; j < n; ++j) {
            int c = table.covered_count(j, uncovered);
            if (c > best_c) {
                best_c = c;
                best_j = j;
            }
        }
        if (best_j < 0) return std::nullopt;
        const std::uint64_t* c = table.of(best_j);
        for (std::size_t w = 0; w < table.words(); ++w) uncovered[w] &= ~c[w];
        chosen.push_back(best_j);
    }
    return chosen;
}

std::vector<double> distinct_entries(const CostMatrix& matrix) {
    std::vector<double> vals(matrix.d);
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    return vals;
}

// Every open set must serve the hardest demand, so no radius below the
// largest per-row minimum can be feasible.
double radius_floor(const CostMatrix& matrix) {
    double floor_r = 0.0;
    for (std::size_t i = 0; i < matrix.rows; ++i) {
        double best = kInf;
        for (std::size_t j = 0; j < matrix.cols; ++j) {
            double d = matrix.at(i, j);
            if (d < best) best = d;
        }
        floor_r = std::max(floor_r, best);
    }
    return floor_r;
}

// A witness may cover everything with fewer than m stations; the contract
// fixes |open| = m, so pad with the lowest unused ids. Padding only adds
// stations, which can never worsen a min over the set.
std::vector<int> pad_open(std::vector<int> open, int n, int m) {
    std::sort(open.begin(), open.end());
    open.erase(std::unique(open.begin(), open.end()), open.end());
    for (int j = 0; j < n && static_cast<int>(open.size()) < m; ++j)
        if (!std::binary_search(open.begin(), open.end(), j)) {
            open.insert(std::lower_bound(open.begin(), open.end(), j), j);
        }
    return open;
}

// First and second smallest open distances per demand row; with these a
// single swap evaluates in O(rows).
struct RowMins {
    double d1 = kInf;
    int j1 = -1;
    double d2 = kInf;
};

void row_mins(const CostMatrix& matrix, const std::vector<int>& open, std::vector<RowMins>& out) {
    out.assign(matrix.rows, RowMins{});
    for (std::size_t i = 0; i < matrix.rows; ++i) {
        RowMins& r = out[i];
        for (int j : open) {
            const double v = matrix.at(i, static_cast<std::size_t>(j));
            if (v < r.d1) {
                r.d2 = r.d1;
                r.d1 = v;
                r.j1 = j;
            } else if (v < r.d2) {
                r.d2 = v;
            }
        }
    }
}

// Best-improvement interchange on the worst assigned distance. The greedy
// cover can settle a radius step or two above the optimum; swapping single
// stations closes most of that gap and never makes the set worse.
std::vector<int> improve_minmax(std::vector<int> open, const CostMatrix& matrix) {
    const int n = static_cast<int>(matrix.cols);
    if (static_cast<int>(open.size()) >= n) return open;
    std::vector<char> is_open(static_cast<std::size_t>(n), 0);
    for (int j : open) is_open[static_cast<std::size_t>(j)] = 1;
    std::vector<RowMins> mins;
    for (;;) {
        row_mins(matrix, open, mins);
        double best = 0.0;
        for (const RowMins& r : mins) best = std::max(best, r.d1);
        int best_out = -1, best_in = -1;
        for (int out : open) {
            for (int in = 0; in < n; ++in) {
                if (is_open[static_cast<std::size_t>(in)]) continue;
                double worst = 0.0;
                for (std::size_t i = 0; i < matrix.rows; ++i) {
                    const double keep = mins[i].j1 == out ? mins[i].d2 : mins[i].d1;
                    const double v = matrix.at(i, static_cast<std::size_t>(in));
                    const double r = v < keep ? v : keep;
                    if (r > worst) {
                        worst = r;
                        if (worst >= best) break;
                    }
                }
                if (worst < best) {
                    best = worst;
                    best_out = out;
                    best_in = in;
                }
            }
        }
        if (best_in < 0) return open;
        is_open[static_cast<std::size_t>(best_out)] = 0;
        is_open[static_cast<std::size_t>(best_in)] = 1;
        for (int& j : open)
            if (j == best_out) j = best_in;
        std::sort(open.begin(), open.end());
    }
}

SitingSolution finish(std::vector<int> open, const CostMatrix& matrix, bool exact) {
    std::sort(open.begin(), open.end());
    SitingSolution sol;
    AssignResult a = assign_nearest(open, matrix);
    sol.open = std::move(open);
    sol.assignment = std::move(a.assignment);
    sol.pmedian_objective = a.pmedian_objective;
    sol.minmax_objective = a.minmax_objective;
    sol.exact = exact;
    return sol;
}

}  // namespace

const char* model_name(Model m) {
    return m == Model::PMedian ? "pmedian" : "minmax";
}

const char* method_name(Method m) {
    switch (m) {
        case Method::Exact: return "exact";
        case Method::Heuristic: return "heuristic";
        default: return "auto";
    }
}

Model model_from_name(const std::string& name) {
    if (name == "pmedian") return Model::PMedian;
    if (name == "minmax") return Model::MinMax;
    throw std::invalid_argument("unknown model: " + name);
}

Method method_from_name(const std::string& name) {
    if (name == "exact") return Method::Exact;
    if (name == "heuristic") return Method::Heuristic;
    if (name == "auto") return Method::Auto;
    throw std::invalid_argument("unknown method: " + name);
}

AssignResult assign_nearest(const std::vector<int>& open, const CostMatrix& matrix) {
    if (open.empty()) throw std::invalid_argument("open set is empty");
    for (int j : open)
        if (j < 0 || static_cast<std::size_t>(j) >= matrix.cols)
            throw std::invalid_argument("open candidate id out of range");

    AssignResult out;
    out.assignment.resize(matrix.rows);
    for (std::size_t i = 0; i < matrix.rows; ++i) {
        double best = kInf;
        int arg = -1;
        for (int j : open) {
            double d = matrix.at(i, static_cast<std::size_t>(j));
            if (d < best || (d == best && j < arg)) {
                best = d;
                arg = j;
            }
        }
        out.assignment[i] = arg;
        out.pmedian_objective += matrix.h[i] * best;
        if (best > out.minmax_objective) out.minmax_objective = best;
    }
    return out;
}

SitingSolution solve_pmedian_exact(const CostMatrix& matrix, int m, long long node_budget) {
    check_m(matrix, m);
    std::vector<int> start = greedy_start(matrix, m);
    interchange(matrix, start);
    double start_cost = weighted_cost(start, matrix);

    PMedianBnb bnb(matrix, m, node_budget);
    std::vector<int> best = bnb.run(start, start_cost);
    return finish(std::move(best), matrix, true);
}

SitingSolution solve_pmedian_heuristic(const CostMatrix& matrix, int m, std::uint64_t seed,
                                       int restarts) {
    check_m(matrix, m);
    const int n = static_cast<int>(matrix.cols);

    std::vector<int> best = greedy_start(matrix, m);
    interchange(matrix, best);
    double best_cost = weighted_cost(best, matrix);

    Rng rng(seed);
    for (int r = 0; r < restarts; ++r) {
        std::vector<int> ids(static_cast<std::size_t>(n));
        for (int j = 0; j < n; ++j) ids[static_cast<std::size_t>(j)] = j;
        // Partial Fisher-Yates: the first m slots become the random start.
        for (int j = 0; j < m; ++j) {
            std::size_t pick = static_cast<std::size_t>(j) +
                               static_cast<std::size_t>(rng.uniform_int(static_cast<std::uint64_t>(n - j)));
            std::swap(ids[static_cast<std::size_t>(j)], ids[pick]);
        }
        std::vector<int> open(ids.begin(), ids.begin() + m);
        std::sort(open.begin(), open.end());
        interchange(matrix, open);
        double cost = weighted_cost(open, matrix);
        if (cost < best_cost) {
            best_cost = cost;
            best = std::move(open);
        }
    }
    return finish(std::move(best), matrix, false);
}

SitingSolution solve_minmax_exact(const CostMatrix& matrix, int m, long long node_budget) {
    check_m(matrix, m);
    const int n = static_cast<int>(matrix.cols);
    std::vector<double> vals = distinct_entries(matrix);
    std::size_t lo = static_cast<std::size_t>(
        std::lower_bound(vals.begin(), vals.end(), radius_floor(matrix)) - vals.begin());
    std::size_t hi = vals.size() - 1;

    NodeBudget budget{node_budget};
    CoverTable table(matrix);
    std::vector<int> witness;

    auto feasible = [&](std::size_t idx) -> std::optional<std::vector<int>> {
        table.set_radius(vals[idx]);
        CoverBnb bnb(table, n, m, budget);
        return bnb.run(table.full_mask());
    };

    // The top radius always works: every entry fits, so any single
    // candidate covers all demands.
    if (auto w = feasible(hi)) witness = *w;
    while (lo < hi) {
        std::size_t mid = lo + (hi - lo) / 2;
        if (auto w = feasible(mid)) {
            witness = *w;
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }

    SitingSolution sol = finish(pad_open(std::move(witness), n, m), matrix, true);
    if (sol.minmax_objective != vals[lo])
        throw std::logic_error("min-max witness does not attain its radius");
    return sol;
}

SitingSolution solve_minmax_heuristic(const CostMatrix& matrix, int m, std::uint64_t seed) {
    check_m(matrix, m);
    const int n = static_cast<int>(matrix.cols);
    std::vector<double> vals = distinct_entries(matrix);
    std::size_t lo = static_cast<std::size_t>(
        std::lower_bound(vals.begin(), vals.end(), radius_floor(matrix)) - vals.begin());
    std::size_t hi = vals.size() - 1;

    CoverTable table(matrix);
    auto feasible = [&](std::size_t idx) -> std::optional<std::vector<int>> {
        table.set_radius(vals[idx]);
        return greedy_cover(table, n, m, table.full_mask());
    };

    while (lo < hi) {
        std::size_t mid = lo + (hi - lo) / 2;
        if (feasible(mid))
            hi = mid;
        else
            lo = mid + 1;
    }
    // Greedy feasibility is not perfectly monotone in the radius, so walk
    // up until it actually succeeds; the largest radius always does.
    std::optional<std::vector<int>> witness;
    while (!(witness = feasible(lo))) ++lo;

    auto worst_of = [&](const std::vector<int>& open) {
        double worst = 0.0;
        for (std::size_t i = 0; i < matrix.rows; ++i) {
            double best = kInf;
            for (int j : open) best = std::min(best, matrix.at(i, static_cast<std::size_t>(j)));
            worst = std::max(worst, best);
        }
        return worst;
    };

    std::vector<int> best_open = improve_minmax(pad_open(std::move(*witness), n, m), matrix);
    double best_obj = worst_of(best_open);

    // The swap search has local optima; a few seeded random starts escape
    // most of them.
    Rng rng(seed);
    for (int t = 0; t < 3 && m < n; ++t) {
        std::vector<int> ids(static_cast<std::size_t>(n));
        for (int j = 0; j < n; ++j) ids[static_cast<std::size_t>(j)] = j;
        for (int k = 0; k < m; ++k) {
            const std::size_t pick =
                static_cast<std::size_t>(k) +
                static_cast<std::size_t>(rng.uniform_int(static_cast<std::uint64_t>(n - k)));
            std::swap(ids[static_cast<std::size_t>(k)], ids[pick]);
        }
        std::vector<int> start(ids.begin(), ids.begin() + m);
        std::sort(start.begin(), start.end());
        std::vector<int> improved = improve_minmax(std::move(start), matrix);
        const double obj = worst_of(improved);
        if (obj < best_obj) {
            best_obj = obj;
            best_open = std::move(improved);
        }
    }
    return finish(std::move(best_open), matrix, false);
}

SitingSolution solve(const CostMatrix& matrix, Model model, const SolveParams& params,
                     bool* downgraded) {
    if (downgraded) *downgraded = false;
    check_m(matrix, params.m);

    auto run_exact = [&]() {
        return model == Model::PMedian
                   ? solve_pmedian_exact(matrix, params.m, params.node_budget)
                   : solve_minmax_exact(matrix, params.m, params.node_budget);
    };
    auto run_heuristic = [&]() {
        return model == Model::PMedian
                   ? solve_pmedian_heuristic(matrix, params.m, params.seed, params.restarts)
                   : solve_minmax_heuristic(matrix, params.m, params.seed);
    };

    switch (params.method) {
        case Method::Exact:
            return run_exact();
        case Method::Heuristic:
            return run_heuristic();
        default: {
            bool try_exact =
                static_cast<int>(matrix.cols) <= params.exact_limit ||
                binomial_approx(static_cast<int>(matrix.cols), params.m) <= params.combo_budget;
            if (!try_exact) return run_heuristic();
            try {
                return run_exact();
            } catch (const BudgetExceeded&) {
                if (downgraded) *downgraded = true;
                return run_heuristic();
            }
        }
    }
}

bool validate_solution(const SitingSolution& sol, const CostMatrix& matrix, int m,
                       std::string* why) {
    auto fail = [&](const char* msg) {
        if (why) *why = msg;
        return false;
    };
    if (static_cast<int>(sol.open.size()) != m) return fail("open set size differs from m");
    if (!std::is_sorted(sol.open.begin(), sol.open.end())) return fail("open ids not sorted");
    if (std::adjacent_find(sol.open.begin(), sol.open.end()) != sol.open.end())
        return fail("open ids repeat");
    for (int j : sol.open)
        if (j < 0 || static_cast<std::size_t>(j) >= matrix.cols)
            return fail("open id out of range");
    if (sol.assignment.size() != matrix.rows) return fail("assignment size differs from |I|");

    AssignResult ref = assign_nearest(sol.open, matrix);
    if (sol.assignment != ref.assignment) return fail("assignment is not nearest-open");
    if (sol.pmedian_objective != ref.pmedian_objective)
        return fail("total-cost objective mismatch");
    if (sol.minmax_objective != ref.minmax_objective)
        return fail("worst-cost objective mismatch");
    return true;
}

double binomial_approx(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    k = std::min(k, n - k);
    double r = 1.0;
    for (int i = 1; i <= k; ++i) {
        r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
        if (r > 1e18) return 1e18;
    }
    return r;
}

}  // namespace siting
