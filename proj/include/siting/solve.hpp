#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "siting/cost.hpp"

namespace siting {

// PMedian minimizes the demand-weighted total assigned distance; MinMax
// minimizes the worst assigned distance.
enum class Model { PMedian, MinMax };
enum class Method { Exact, Heuristic, Auto };

const char* model_name(Model m);
const char* method_name(Method m);
Model model_from_name(const std::string& name);    // throws std::invalid_argument
Method method_from_name(const std::string& name);  // throws std::invalid_argument

struct SolveParams {
    int m = 1;
    Method method = Method::Auto;
    std::uint64_t seed = 0;

    // Auto attempts the exact solver when |J| <= exact_limit or when
    // C(|J|, m) <= combo_budget; the attempt is capped by node_budget and
    // falls back to the heuristic if the cap is hit.
    int exact_limit = 25;
    double combo_budget = 2e6;
    long long node_budget = 10'000'000;

    // Extra randomized starts for the P-median heuristic.
    int restarts = 3;
};

struct BudgetExceeded : std::runtime_error {
    BudgetExceeded() : std::runtime_error("exact budget exceeded; use Heuristic") {}
};

struct AssignResult {
    std::vector<int> assignment;     // demand row -> open candidate id
    double pmedian_objective = 0.0;  // sum_i h_i * d(i, assigned(i))
    double minmax_objective = 0.0;   // max_i d(i, assigned(i))
};

struct SitingSolution {
    std::vector<int> open;  // sorted candidate ids, exactly m of them
    std::vector<int> assignment;
    double pmedian_objective = 0.0;
    double minmax_objective = 0.0;
    bool exact = false;
};

// Assigns every demand row to its cheapest open candidate (lowest id on
// ties) and computes both objectives. Given the open set this is the optimal
// assignment for both models, which is why the solvers search only over
// open sets.
AssignResult assign_nearest(const std::vector<int>& open, const CostMatrix& matrix);

// Depth-first branch and bound over open/close decisions. The lower bound
// at a node is the weighted sum of per-demand minima over all candidates
// not yet excluded. Throws BudgetExceeded when node_budget is exhausted.
SitingSolution solve_pmedian_exact(const CostMatrix& matrix, int m,
                                   long long node_budget = 10'000'000);

// Greedy construction followed by best-improvement vertex substitution,
// repeated from `restarts` randomized starts. Deterministic given seed.
SitingSolution solve_pmedian_heuristic(const CostMatrix& matrix, int m, std::uint64_t seed,
                                       int restarts = 3);

// Binary search over the distinct matrix entries with an exact set-cover
// feasibility test per radius. The returned objective is always one of the
// matrix entries. Throws BudgetExceeded when node_budget is exhausted.
SitingSolution solve_minmax_exact(const CostMatrix& matrix, int m,
                                  long long node_budget = 10'000'000);

// Same search with a greedy cover as the feasibility test, then a
// best-improvement station swap pass on the worst assigned distance.
// Deterministic; objective >= the exact optimum.
SitingSolution solve_minmax_heuristic(const CostMatrix& matrix, int m, std::uint64_t seed);

// Dispatch per SolveParams. Sets *downgraded when Auto had to fall back to
// the heuristic after an exact attempt ran out of budget.
SitingSolution solve(const CostMatrix& matrix, Model model, const SolveParams& params,
                     bool* downgraded = nullptr);

// Feasibility and tie-break audit of a finished solution; on failure *why
// names the violated condition.
bool validate_solution(const SitingSolution& sol, const CostMatrix& matrix, int m,
                       std::string* why = nullptr);

// C(n, k) computed in doubles, saturating at 1e18.
double binomial_approx(int n, int k);

}  // namespace siting
