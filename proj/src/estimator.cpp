#include "rach/estimator.hpp"

#include <string>

#include "rach/kernels/scalar_math.hpp"

namespace rach::est {

EstimatorState initial_state(int M, double prior) {
    if (M < 1) throw InvariantError("initial_state: M must be >= 1");
    EstimatorState s;
    s.n_hat = prior >= 0.0 ? prior : static_cast<double>(M);
    s.last_decision.M = M;
    return s;
}

double invert_idle(int m_idle, double p, int M) {
    if (M < 1) throw InvariantError("invert_idle: M must be >= 1");
    if (m_idle < 0 || m_idle > M) throw InvariantError("invert_idle: m_idle out of range");
    if (!(p > 0.0 && p <= 1.0)) throw InvariantError("invert_idle: p must lie in (0, 1]");
    const double lq = kern::log1p_core(-p / M);
    if (m_idle == M) return 0.0;
    const double frac = m_idle > 0 ? static_cast<double>(m_idle) / M : 1.0 / (2.0 * M);
    return kern::log_core(frac) / lq;
}

EstimatorState update(const EstimatorState& state, const ChannelSplit& observed) {
    if (observed.collided < 0 || observed.singleton < 0 || observed.idle < 0)
        throw InconsistentObservationError("update: negative split component");
    if (observed.total() != state.last_decision.M)
        throw InconsistentObservationError(
            "update: split sums to " + std::to_string(observed.total()) +
            " but the decision allocated M = " + std::to_string(state.last_decision.M));

    const double n_obs =
        invert_idle(observed.idle, state.last_decision.p, state.last_decision.M);
    EstimatorState next = state;
    next.n_hat = kern::maxd(n_obs - observed.singleton, 0.0);
    return next;
}

EstimatorState add_arrivals(const EstimatorState& state, double expected_new) {
    if (!(expected_new >= 0.0)) throw InvariantError("add_arrivals: expected_new must be >= 0");
    EstimatorState next = state;
    next.n_hat += expected_new;
    return next;
}

}  // namespace rach::est
