#include "rach/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>
#include <vector>

#include "rach/kernels/batch.hpp"
#include "rach/kernels/philox.hpp"
#include "rach/kernels/scalar_math.hpp"
#include "rach/oracle.hpp"
#include "rach/policy.hpp"

namespace rach::sim {

const char* controller_name(ControllerKind k) {
    switch (k) {
        case ControllerKind::Poca: return "poca";
        case ControllerKind::Lin17: return "lin17";
        case ControllerKind::Duan16Fixed: return "duan16f";
        case ControllerKind::Duan16Dynamic: return "duan16d";
    }
    return "?";
}

ControllerKind controller_from_name(std::string_view name) {
    if (name == "poca") return ControllerKind::Poca;
    if (name == "lin17") return ControllerKind::Lin17;
    if (name == "duan16f") return ControllerKind::Duan16Fixed;
    if (name == "duan16d") return ControllerKind::Duan16Dynamic;
    throw ConfigError("unknown controller '" + std::string(name) +
                      "' (expected poca|lin17|duan16f|duan16d)");
}

const char* profile_name(ArrivalProfile p) {
    return p == ArrivalProfile::Uniform ? "uniform" : "beta";
}

ArrivalProfile profile_from_name(std::string_view name) {
    if (name == "uniform") return ArrivalProfile::Uniform;
    if (name == "beta") return ArrivalProfile::Beta;
    throw ConfigError("unknown arrival profile '" + std::string(name) +
                      "' (expected uniform|beta)");
}

const char* estimator_name(EstimatorKind k) {
    return k == EstimatorKind::SplitInversion ? "split_inversion" : "perfect";
}

EstimatorKind estimator_from_name(std::string_view name) {
    if (name == "split_inversion") return EstimatorKind::SplitInversion;
    if (name == "perfect") return EstimatorKind::Perfect;
    throw ConfigError("unknown estimator '" + std::string(name) +
                      "' (expected split_inversion|perfect)");
}

void ScenarioConfig::validate() const {
    if (N < 1) throw InvariantError("ScenarioConfig: N must be >= 1");
    if (!(activation_window_ms >= 0.0))
        throw InvariantError("ScenarioConfig: activation window must be >= 0");
    if (!(round_period_ms > 0.0))
        throw InvariantError("ScenarioConfig: round period must be > 0");
    if (replications < 1) throw InvariantError("ScenarioConfig: replications must be >= 1");
    if (round_cap < 1) throw InvariantError("ScenarioConfig: round cap must be >= 1");
    if (!(initial_estimate >= 0.0))
        throw InvariantError("ScenarioConfig: initial estimate must be >= 0");
    if (controller.fixed_M < 1) throw InvariantError("ScenarioConfig: fixed_M must be >= 1");
    costs.validate();
    budget.validate();
}

namespace {

double clamped_estimate(const est::EstimatorState& state) {
    return kern::maxd(state.n_hat, 1.0);
}

PolicyDecision fixed_m_decision(int M_fixed, const ResourceCosts& costs, double n_hat) {
    const double p = policy::acb_probability(n_hat, M_fixed);
    const kern::SR sr = kern::sr_eval(n_hat, p, static_cast<double>(M_fixed), costs.idle,
                                      costs.occupied);
    return PolicyDecision{p, M_fixed, sr.S, sr.R};
}

}  // namespace

PolicyDecision controller_poca(const ResourceBudget& budget, const ResourceCosts& costs,
                               const est::EstimatorState& state) {
    return policy::poca(clamped_estimate(state), costs, budget);
}

PolicyDecision controller_lin17(int M_fixed, const ResourceCosts& costs,
                                const est::EstimatorState& state) {
    return fixed_m_decision(M_fixed, costs, clamped_estimate(state));
}

PolicyDecision controller_duan16_fixed(int M_fixed, const ResourceCosts& costs,
                                       const est::EstimatorState& state) {
    // identical decision rule to Lin17; kept as a separately registered
    // controller for benchmark labeling
    return fixed_m_decision(M_fixed, costs, clamped_estimate(state));
}

PolicyDecision controller_duan16_dynamic(const ResourceBudget& budget,
                                         const ResourceCosts& costs,
                                         const est::EstimatorState& state) {
    const double n = clamped_estimate(state);
    const std::int64_t k_max = policy::poca_k_max(costs, budget);
    const kern::ScanResult r =
        kern::duan_scan(n, costs, budget.r_bar, budget.granularity, k_max);
    if (!r.feasible)
        throw InfeasibleError("duan16d: no (p, M) pair satisfies r_bar = " +
                              std::to_string(budget.r_bar));
    return PolicyDecision{r.p, r.M, r.S, r.R};
}

namespace {

// Beta(3,4) CDF: 20x^3 - 45x^4 + 36x^5 - 10x^6 on [0, 1].
double beta34_cdf(double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    return x * x * x * (20.0 + x * (-45.0 + x * (36.0 - 10.0 * x)));
}

double arrival_cdf(ArrivalProfile profile, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    return profile == ArrivalProfile::Uniform ? x : beta34_cdf(x);
}

// Inverse CDF by bisection (deterministic, 60 halvings).
double arrival_quantile(ArrivalProfile profile, double u) {
    if (profile == ArrivalProfile::Uniform) return u;
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (beta34_cdf(mid) < u)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

PolicyDecision decide(const ScenarioConfig& cfg, const est::EstimatorState& state) {
    switch (cfg.controller.kind) {
        case ControllerKind::Poca: return controller_poca(cfg.budget, cfg.costs, state);
        case ControllerKind::Lin17:
            return controller_lin17(cfg.controller.fixed_M, cfg.costs, state);
        case ControllerKind::Duan16Fixed:
            return controller_duan16_fixed(cfg.controller.fixed_M, cfg.costs, state);
        case ControllerKind::Duan16Dynamic:
            return controller_duan16_dynamic(cfg.budget, cfg.costs, state);
    }
    throw ConfigError("unknown controller kind");
}

}  // namespace

BurstResult run_burst(const ScenarioConfig& cfg, std::uint64_t replication,
                      bool keep_rounds) {
    cfg.validate();
    kern::PhiloxStream arrivals(cfg.master_seed, replication * 2);
    kern::PhiloxStream contention(cfg.master_seed, replication * 2 + 1);

    const double T = cfg.round_period_ms;
    const double W = cfg.activation_window_ms;

    // activation times -> joining round (1-based): floor(u / T) + 1
    std::vector<std::int64_t> joiners;
    for (int i = 0; i < cfg.N; ++i) {
        const double u = W * arrival_quantile(cfg.profile, arrivals.next_unit());
        const auto r = static_cast<std::int64_t>(std::floor(u / T)) + 1;
        if (static_cast<std::size_t>(r) >= joiners.size())
            joiners.resize(static_cast<std::size_t>(r) + 1, 0);
        ++joiners[static_cast<std::size_t>(r)];
    }

    est::EstimatorState state = est::initial_state(
        cfg.controller.kind == ControllerKind::Poca ||
                cfg.controller.kind == ControllerKind::Duan16Dynamic
            ? cfg.budget.granularity
            : cfg.controller.fixed_M,
        cfg.initial_estimate);

    BurstResult out;
    std::int64_t backlog = 0;
    std::int64_t total_successes = 0;
    double consumed_sum = 0.0;

    for (std::int64_t r = 1;; ++r) {
        if (r > cfg.round_cap)
            throw RoundCapError("run_burst: burst unresolved after " +
                                std::to_string(cfg.round_cap) + " rounds (N = " +
                                std::to_string(cfg.N) + ", controller = " +
                                controller_name(cfg.controller.kind) + ")");
        if (static_cast<std::size_t>(r) < joiners.size()) backlog += joiners[r];

        if (cfg.credit_arrivals) {
            const double f1 = arrival_cdf(cfg.profile, W > 0.0 ? (r - 1) * T / W : 1.0);
            const double f2 = arrival_cdf(cfg.profile, W > 0.0 ? r * T / W : 1.0);
            const double expected_new = cfg.N * (f2 - f1) + (r == 1 && W == 0.0 ? cfg.N : 0.0);
            state = est::add_arrivals(state, expected_new);
        }
        if (cfg.estimator == EstimatorKind::Perfect)
            state.n_hat = static_cast<double>(backlog);

        const PolicyDecision decision = decide(cfg, state);
        state.last_decision = decision;

        const oracle::RoundSample sample =
            oracle::simulate_round(backlog, decision.p, decision.M, cfg.costs, contention);

        consumed_sum += sample.consumed;
        total_successes += sample.successes;
        backlog -= sample.successes;

        if (keep_rounds)
            out.rounds.push_back(RoundRecord{r, decision, sample.split, sample.successes,
                                             sample.consumed, backlog + sample.successes,
                                             state.n_hat});

        state = est::update(state, sample.split);

        if (total_successes == cfg.N) {
            out.resolution_rounds = r;
            break;
        }
    }

    out.resolution_time_ms = static_cast<double>(out.resolution_rounds) * T;
    out.avg_throughput = static_cast<double>(cfg.N) / static_cast<double>(out.resolution_rounds);
    out.avg_consumption = consumed_sum / static_cast<double>(out.resolution_rounds);
    return out;
}

ReplicationSet run_replications(const ScenarioConfig& cfg, bool keep_rounds, int threads) {
    cfg.validate();
    const int reps = cfg.replications;
    if (threads <= 0) {
        const unsigned hw = std::thread::hardware_concurrency();
        threads = static_cast<int>(hw > 0 ? hw : 1);
    }
    threads = std::min<int>(threads, reps);

    std::vector<BurstResult> slots(static_cast<std::size_t>(reps));
    std::vector<char> ok(static_cast<std::size_t>(reps), 0);
    std::vector<std::exception_ptr> hard_error(static_cast<std::size_t>(threads));

    auto worker = [&](int tid) {
        for (int rep = tid; rep < reps; rep += threads) {
            try {
                slots[static_cast<std::size_t>(rep)] =
                    run_burst(cfg, static_cast<std::uint64_t>(rep), keep_rounds);
                ok[static_cast<std::size_t>(rep)] = 1;
            } catch (const RoundCapError&) {
                ok[static_cast<std::size_t>(rep)] = 0;  // reported, never averaged in
            } catch (...) {
                hard_error[static_cast<std::size_t>(tid)] = std::current_exception();
                return;
            }
        }
    };

    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker, t);
        for (auto& th : pool) th.join();
    }
    for (const auto& err : hard_error)
        if (err) std::rethrow_exception(err);

    ReplicationSet set;
    set.results.reserve(static_cast<std::size_t>(reps));
    for (int rep = 0; rep < reps; ++rep) {
        if (ok[static_cast<std::size_t>(rep)])
            set.results.push_back(std::move(slots[static_cast<std::size_t>(rep)]));
        else
            ++set.aborted;
    }
    return set;
}

}  // namespace rach::sim
