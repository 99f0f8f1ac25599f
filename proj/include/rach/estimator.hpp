#pragma once

// Online backlog estimation from the observed channel split: a moment-match
// inversion of the expected-idle formula E[m_I] = M (1 - p/M)^n, with a
// half-preamble pseudo-count when no preamble stayed idle, followed by
// subtraction of the observed successes. Controllers consume the backlog
// only through EstimatorState, so alternative estimators can be wired in
// without touching them.

#include "rach/types.hpp"

namespace rach::est {

struct EstimatorState {
    double n_hat = 0.0;
    PolicyDecision last_decision{};
};

/// Fresh state; without an explicit prior the estimate starts at one round's
/// capacity M.
EstimatorState initial_state(int M, double prior = -1.0);

/// Invert the idle count observed under (p, M) into a backlog reading:
///   0 < m_I < M : ln(m_I / M) / ln(1 - p/M)
///   m_I = 0     : ln(1 / (2M)) / ln(1 - p/M)   (half-preamble pseudo-count)
///   m_I = M     : 0
double invert_idle(int m_idle, double p, int M);

/// Consume the split observed under state.last_decision:
/// n_hat' = max(invert_idle(m_I) - m_S, 0). Throws
/// InconsistentObservationError when the split does not sum to the
/// decision's M.
EstimatorState update(const EstimatorState& state, const ChannelSplit& observed);

/// Credit expected newly activated UEs for the coming round.
EstimatorState add_arrivals(const EstimatorState& state, double expected_new);

}  // namespace rach::est
