#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace rach {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid argument / violated type invariant.
class InvariantError : public Error {
public:
    using Error::Error;
};

/// A quantity left the mathematical domain of an operation (e.g. n < 1 in
/// the throughput formula, or a zero-consumption denominator).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A budget or parameter combination admits no feasible decision.
class InfeasibleError : public Error {
public:
    using Error::Error;
};

/// Exact enumeration refused because the outcome space exceeds the cap.
class CapExceededError : public Error {
public:
    using Error::Error;
};

/// An observed channel split is inconsistent with the decision it came from.
class InconsistentObservationError : public Error {
public:
    using Error::Error;
};

/// Configuration / CLI input problem (maps to exit code 1).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// The burst simulator hit its round cap without resolving the burst.
class RoundCapError : public Error {
public:
    using Error::Error;
};

/// Per-preamble resource prices in resource blocks. An idle preamble costs
/// only its PRACH share; an occupied one (singleton or collided) additionally
/// pays the MSG3 uplink grant.
struct ResourceCosts {
    double idle = 0.09;      ///< r_I, RBs per idle preamble
    double occupied = 1.09;  ///< r_O, RBs per occupied preamble

    void validate() const {
        if (!(idle >= 0.0))
            throw InvariantError("ResourceCosts: idle cost must be >= 0");
        if (!(occupied >= idle))
            throw InvariantError("ResourceCosts: occupied cost must be >= idle cost");
    }
};

/// Parameters of one contention round: n backlogged devices, access
/// probability p, and M available preambles. n is real-valued because
/// controllers feed backlog estimates into the closed forms.
struct ContentionConfig {
    double n = 0.0;
    double p = 1.0;
    int M = 1;

    void validate() const {
        if (!(n >= 0.0))
            throw InvariantError("ContentionConfig: n must be >= 0");
        if (!(p > 0.0 && p <= 1.0))
            throw InvariantError("ContentionConfig: p must lie in (0, 1]");
        if (M < 1)
            throw InvariantError("ContentionConfig: M must be >= 1");
    }
};

/// Outcome of a contention round: how the M preambles split into collided,
/// singleton (successful) and idle.
struct ChannelSplit {
    int collided = 0;
    int singleton = 0;
    int idle = 0;

    int total() const { return collided + singleton + idle; }
};

/// Soft constraint on the expected per-round consumption, plus the preamble
/// allocation granularity m (M must be a positive multiple of m).
struct ResourceBudget {
    double r_bar = 50.0;
    int granularity = 1;

    void validate() const {
        if (!(r_bar > 0.0))
            throw InvariantError("ResourceBudget: r_bar must be > 0");
        if (granularity < 1)
            throw InvariantError("ResourceBudget: granularity must be >= 1");
    }
};

/// A controller's (p, M) choice for the next round together with the model's
/// predicted throughput and consumption at the estimate it was computed from.
struct PolicyDecision {
    double p = 1.0;
    int M = 1;
    double predicted_S = 0.0;
    double predicted_R = 0.0;
};

/// One point of the bi-objective solution space (maximize S, minimize R).
struct ParetoPoint {
    double p = 0.0;
    int M = 1;
    double S = 0.0;
    double R = 0.0;
    bool on_frontier = false;
};

}  // namespace rach
