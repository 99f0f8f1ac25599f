#pragma once

// Ground-truth engines for the closed forms: seeded Monte Carlo sampling of
// contention rounds, and exact expectations by enumeration for small
// instances. The enumeration deliberately avoids the closed-form survival
// probabilities (it conditions on the transmitter count and walks occupancy
// vectors), so agreement with rach::throughput / expected_idle /
// expected_consumption is a real consistency check, not a tautology.

#include <cstdint>

#include "rach/kernels/philox.hpp"
#include "rach/types.hpp"

namespace rach::oracle {

struct RoundSample {
    ChannelSplit split;
    int successes = 0;   ///< = split.singleton under ternary feedback
    double consumed = 0; ///< (m_S + m_C) r_O + m_I r_I
};

/// Sample one contention round: each of the n backlogged UEs transmits with
/// probability p; each transmitter picks one of the M preambles uniformly.
/// Deterministic given the stream state. Accepts p in [0, 1].
RoundSample simulate_round(std::int64_t n, double p, int M, const ResourceCosts& costs,
                           kern::PhiloxStream& rng);

struct ExactExpectations {
    double successes = 0;
    double idle = 0;
    double consumption = 0;
};

/// Exact E[s], E[m_I], E[r] by conditioning on k ~ Binomial(n, p) transmitters
/// and enumerating occupancy vectors with multinomial weights. The outcome
/// space sum_k C(n,k) M^k = (M+1)^n must stay below outcome_cap, otherwise
/// CapExceededError names the offending (n, M).
ExactExpectations exact_expectations(int n, double p, int M, const ResourceCosts& costs,
                                     double outcome_cap = 1e7);

/// Same expectations by brute-force listing of all M^k preamble assignments.
/// Slower; exists as an independent cross-check of the recursion above.
ExactExpectations exact_expectations_raw(int n, double p, int M, const ResourceCosts& costs,
                                         double outcome_cap = 1e7);

struct MonteCarloStats {
    std::int64_t rounds = 0;
    double mean_successes = 0, se_successes = 0;
    double mean_idle = 0, se_idle = 0;
    double mean_consumed = 0, se_consumed = 0;
};

/// Sample means and standard errors of s, m_I and r over the given number of
/// rounds at fixed (n, p, M).
MonteCarloStats monte_carlo(std::int64_t n, double p, int M, const ResourceCosts& costs,
                            std::int64_t rounds, kern::PhiloxStream& rng);

}  // namespace rach::oracle
