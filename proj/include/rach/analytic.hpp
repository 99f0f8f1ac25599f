#pragma once

// Closed-form single-round performance model of multi-channel slotted ALOHA
// with access barring: throughput, expected idle preambles, expected
// time-frequency consumption, and their ratio (efficiency).
//
// All operations are pure. (1 - p/M)^n is evaluated as exp(n log1p(-p/M))
// through the shared kernels, so results are bit-identical with the batch
// and scan paths.

#include <span>

#include "rach/types.hpp"

namespace rach {

/// Expected successes per round, S(n; p, M) = n p (1 - p/M)^(n-1).
/// Requires cfg.n >= 1 (the exponent has no protocol meaning below one
/// contender; callers clamp estimates first). Throws DomainError otherwise.
double throughput(const ContentionConfig& cfg);

/// Expected idle preambles, E[m_I] = M (1 - p/M)^n. Accepts n = 0.
double expected_idle(const ContentionConfig& cfg);

/// Expected per-round consumption in resource blocks,
/// R = M (r_O - (r_O - r_I)(1 - p/M)^n). Accepts n = 0.
double expected_consumption(const ContentionConfig& cfg, const ResourceCosts& costs);

/// Efficiency T = S / R. Throws DomainError when R == 0 (possible only with
/// r_I = 0 and a degenerate p); never silently returns infinity.
double efficiency(const ContentionConfig& cfg, const ResourceCosts& costs);

/// Grid evaluation of S and R over p for fixed (n >= 1, M); dispatched to the
/// active kernel backend. Output spans may be empty when not needed.
void curve(double n, int M, const ResourceCosts& costs, std::span<const double> p,
           std::span<double> S, std::span<double> R);

}  // namespace rach
