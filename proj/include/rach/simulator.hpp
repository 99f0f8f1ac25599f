#pragma once

// Round-driven simulation of the burst-arrival scenario: N UEs activate
// within a short window, join the backlog at the next round boundary, and
// contend under a pluggable controller until every UE has succeeded.
// Contention rounds sit at t = r * round_period for r = 1, 2, ...; a UE
// activated at u joins round floor(u / period) + 1.

#include <cstdint>
#include <string_view>
#include <vector>

#include "rach/estimator.hpp"
#include "rach/types.hpp"

namespace rach::sim {

enum class ControllerKind { Poca, Lin17, Duan16Fixed, Duan16Dynamic };
enum class ArrivalProfile { Uniform, Beta };  // Beta = Beta(3,4) over the window
enum class EstimatorKind { SplitInversion, Perfect };

const char* controller_name(ControllerKind k);
ControllerKind controller_from_name(std::string_view name);
const char* profile_name(ArrivalProfile p);
ArrivalProfile profile_from_name(std::string_view name);
const char* estimator_name(EstimatorKind k);
EstimatorKind estimator_from_name(std::string_view name);

struct ControllerConfig {
    ControllerKind kind = ControllerKind::Poca;
    int fixed_M = 54;  ///< preamble count for the fixed-allocation benchmarks
};

struct ScenarioConfig {
    int N = 1000;
    double activation_window_ms = 10.0;
    double round_period_ms = 5.0;
    ResourceCosts costs{};
    ResourceBudget budget{50.0, 1};
    ControllerConfig controller{};
    std::uint64_t master_seed = 1;
    int replications = 1;
    ArrivalProfile profile = ArrivalProfile::Uniform;
    EstimatorKind estimator = EstimatorKind::SplitInversion;
    std::int64_t round_cap = 100000;
    double initial_estimate = 0.0;  ///< arrival crediting supplies the prior
    bool credit_arrivals = true;

    void validate() const;
};

struct RoundRecord {
    std::int64_t round_index = 0;  ///< 1-based; the round runs at index * period
    PolicyDecision decision{};
    ChannelSplit split{};
    int successes = 0;
    double consumed = 0.0;
    std::int64_t backlog_true = 0;
    double backlog_estimate = 0.0;
};

struct BurstResult {
    std::int64_t resolution_rounds = 0;
    double resolution_time_ms = 0.0;
    double avg_throughput = 0.0;   ///< successes per round = N / resolution_rounds
    double avg_consumption = 0.0;  ///< RBs per round
    std::vector<RoundRecord> rounds;
};

// Controllers see only the estimator state (their backlog knowledge) and the
// budget; estimates below one UE are clamped to n = 1.
PolicyDecision controller_poca(const ResourceBudget& budget, const ResourceCosts& costs,
                               const est::EstimatorState& state);
PolicyDecision controller_lin17(int M_fixed, const ResourceCosts& costs,
                                const est::EstimatorState& state);
PolicyDecision controller_duan16_fixed(int M_fixed, const ResourceCosts& costs,
                                       const est::EstimatorState& state);
PolicyDecision controller_duan16_dynamic(const ResourceBudget& budget,
                                         const ResourceCosts& costs,
                                         const est::EstimatorState& state);

/// Run one burst. Streams are derived from (master_seed, replication), so the
/// result is a pure function of (config, replication). Throws RoundCapError
/// when the burst does not resolve within config.round_cap rounds, and
/// InfeasibleError when the controller cannot satisfy the budget.
BurstResult run_burst(const ScenarioConfig& config, std::uint64_t replication,
                      bool keep_rounds = true);

struct ReplicationSet {
    std::vector<BurstResult> results;  ///< completed bursts only
    int aborted = 0;                   ///< hit the round cap; never averaged in
};

/// Run config.replications bursts, fanned out over threads; aggregation is
/// deterministic (results land in replication order).
ReplicationSet run_replications(const ScenarioConfig& config, bool keep_rounds = false,
                                int threads = 0);

}  // namespace rach::sim
