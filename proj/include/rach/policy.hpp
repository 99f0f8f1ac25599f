#pragma once

// Parameter selection: the Eq.(4)-style barring policy, the closed-form
// budget-constrained p*(M), the POCA search over preamble allocations, and
// Pareto-frontier enumeration for the (maximize S, minimize R) bi-objective.

#include <cstdint>
#include <span>
#include <vector>

#include "rach/types.hpp"

namespace rach::policy {

/// State-of-the-art barring policy: p* = min(1, M/n). Throws DomainError for
/// n <= 0.
double acb_probability(double n, int M);

/// Lemma-2 closed form: the p maximizing S(n; p, M) subject to
/// R(n; p, M) <= r_bar for a fixed M, clamped into (0, 1].
/// Requires n >= 1 and costs.occupied > costs.idle; throws InfeasibleError
/// when M * r_idle > r_bar (the budget cannot even hold M idle preambles).
double constrained_p_star(double n, int M, const ResourceCosts& costs,
                          const ResourceBudget& budget);

/// k_max = floor(r_bar / (r_idle * granularity)) — the POCA search bound.
std::int64_t poca_k_max(const ResourceCosts& costs, const ResourceBudget& budget);

struct PocaStats {
    std::int64_t p_star_evaluations = 0;
};

/// POCA: maximize predicted throughput over M in {m, 2m, ..., k_max m} with
/// p = constrained_p_star(n, M). Evaluates p*(M) exactly once per k (the
/// count is reported through stats); ties in S resolve to the largest M.
/// Throws InfeasibleError when k_max < 1.
PolicyDecision poca(double n, const ResourceCosts& costs, const ResourceBudget& budget,
                    PocaStats* stats = nullptr);

/// Evaluate every (p, M) grid point and flag the mutually non-dominated set
/// under (maximize S, minimize R). Strict dominance; duplicate objective
/// pairs share frontier membership.
std::vector<ParetoPoint> pareto_frontier(double n, const ResourceCosts& costs,
                                         std::span<const double> p_grid,
                                         std::span<const int> M_values);

/// Flag on_frontier over an arbitrary point set (used to place externally
/// supplied points, e.g. the Eq.(4) policy points, against a grid).
void flag_frontier(std::span<ParetoPoint> points);

}  // namespace rach::policy
