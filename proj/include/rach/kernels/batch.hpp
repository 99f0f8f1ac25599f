#pragma once

// Dispatched batch kernels: the data-parallel inner loops of the artifact.
// Scalar reference implementations live in src/kernels/batch_scalar.cpp, the
// AVX2 variants in src/kernels/batch_avx2.cpp; outputs are bit-identical.

#include <cstdint>
#include <span>

#include "rach/types.hpp"

namespace rach::kern {

/// Evaluate S and R over a grid of access probabilities for fixed (n, M).
/// Either output span may be empty when not needed; non-empty spans must
/// match p.size().
void curve_sr(double n, int M, const ResourceCosts& costs, std::span<const double> p,
              std::span<double> S, std::span<double> R);

struct ScanResult {
    double p = 0.0;
    int M = 0;
    double S = 0.0;
    double R = 0.0;
    std::int64_t evaluations = 0;
    bool feasible = false;
};

/// POCA inner loop: for k = k_max .. 1, M = k*m, p = Lemma-2 p*(M); returns
/// the throughput argmax. Ties resolve to the largest M (the strict
/// improvement test of the downward scan). Exactly one evaluation per k.
ScanResult poca_scan(double n, const ResourceCosts& costs, double r_bar, int m,
                     std::int64_t k_max);

/// Benchmark policy scan: p = min(1, M/n) per M = k*m, pairs with R > r_bar
/// discarded, throughput argmax among the rest. Ties resolve to the smallest
/// M. feasible is false when every pair violates the budget.
ScanResult duan_scan(double n, const ResourceCosts& costs, double r_bar, int m,
                     std::int64_t k_max);

/// Count draws with unit_from_u64(buf pair) < p among n_draws consecutive
/// u64s (buf holds 2*n_draws words, little-endian pairs).
std::size_t bernoulli_count(const std::uint32_t* buf, std::size_t n_draws, double p);

}  // namespace rach::kern
