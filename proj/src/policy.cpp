#include "rach/policy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "rach/kernels/batch.hpp"
#include "rach/kernels/scalar_math.hpp"

namespace rach::policy {

double acb_probability(double n, int M) {
    if (!(n > 0.0)) throw DomainError("acb_probability: n must be > 0");
    if (M < 1) throw InvariantError("acb_probability: M must be >= 1");
    return kern::mind(1.0, static_cast<double>(M) / n);
}

namespace {

void check_pstar_args(double n, int M, const ResourceCosts& costs,
                      const ResourceBudget& budget) {
    costs.validate();
    budget.validate();
    if (!(n >= 1.0)) throw DomainError("constrained_p_star: n must be >= 1");
    if (M < 1) throw InvariantError("constrained_p_star: M must be >= 1");
    if (!(costs.occupied > costs.idle))
        throw InvariantError("constrained_p_star: requires r_occupied > r_idle");
    if (static_cast<double>(M) * costs.idle > budget.r_bar)
        throw InfeasibleError("constrained_p_star: M = " + std::to_string(M) +
                              " infeasible, M * r_idle > r_bar = " +
                              std::to_string(budget.r_bar));
}

}  // namespace

double constrained_p_star(double n, int M, const ResourceCosts& costs,
                          const ResourceBudget& budget) {
    check_pstar_args(n, M, costs, budget);
    return kern::p_star_core(n, static_cast<double>(M), costs.idle, costs.occupied,
                             budget.r_bar);
}

std::int64_t poca_k_max(const ResourceCosts& costs, const ResourceBudget& budget) {
    costs.validate();
    budget.validate();
    if (!(costs.idle > 0.0))
        throw InvariantError("poca_k_max: r_idle must be > 0 for a finite search bound");
    const double k = std::floor(budget.r_bar / (costs.idle * budget.granularity));
    return static_cast<std::int64_t>(k);
}

PolicyDecision poca(double n, const ResourceCosts& costs, const ResourceBudget& budget,
                    PocaStats* stats) {
    if (!(n >= 1.0)) throw DomainError("poca: n must be >= 1");
    if (!(costs.occupied > costs.idle))
        throw InvariantError("poca: requires r_occupied > r_idle");
    const std::int64_t k_max = poca_k_max(costs, budget);
    if (k_max < 1)
        throw InfeasibleError("poca: budget r_bar = " + std::to_string(budget.r_bar) +
                              " infeasible, no multiple of m = " +
                              std::to_string(budget.granularity) + " fits");
    const kern::ScanResult r =
        kern::poca_scan(n, costs, budget.r_bar, budget.granularity, k_max);
    if (stats) stats->p_star_evaluations = r.evaluations;
    return PolicyDecision{r.p, r.M, r.S, r.R};
}

std::vector<ParetoPoint> pareto_frontier(double n, const ResourceCosts& costs,
                                         std::span<const double> p_grid,
                                         std::span<const int> M_values) {
    if (!(n >= 1.0)) throw DomainError("pareto_frontier: n must be >= 1");
    if (p_grid.empty() || M_values.empty())
        throw InvariantError("pareto_frontier: grids must be non-empty");
    costs.validate();

    std::vector<ParetoPoint> pts;
    pts.reserve(p_grid.size() * M_values.size());
    std::vector<double> S(p_grid.size()), R(p_grid.size());
    for (int M : M_values) {
        if (M < 1) throw InvariantError("pareto_frontier: M must be >= 1");
        kern::curve_sr(n, M, costs, p_grid, S, R);
        for (std::size_t i = 0; i < p_grid.size(); ++i)
            pts.push_back(ParetoPoint{p_grid[i], M, S[i], R[i], false});
    }
    flag_frontier(pts);
    return pts;
}

void flag_frontier(std::span<ParetoPoint> points) {
    std::vector<std::size_t> idx(points.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        if (points[a].R != points[b].R) return points[a].R < points[b].R;
        if (points[a].S != points[b].S) return points[a].S > points[b].S;
        return a < b;
    });

    double best_s = -std::numeric_limits<double>::infinity();
    std::size_t i = 0;
    while (i < idx.size()) {
        std::size_t j = i;
        const double group_r = points[idx[i]].R;
        while (j < idx.size() && points[idx[j]].R == group_r) ++j;
        const double group_max_s = points[idx[i]].S;
        for (std::size_t t = i; t < j; ++t) {
            ParetoPoint& pt = points[idx[t]];
            pt.on_frontier = (pt.S == group_max_s) && (group_max_s > best_s);
        }
        best_s = kern::maxd(best_s, group_max_s);
        i = j;
    }
}

}  // namespace rach::policy
