#pragma once

// Internal: per-backend entry points behind the dispatch layer.

#include <cstdint>
#include <span>

#include "rach/kernels/batch.hpp"
#include "rach/types.hpp"

namespace rach::kern::detail {

void curve_sr_scalar(double n, int M, const ResourceCosts& costs,
                     std::span<const double> p, std::span<double> S, std::span<double> R);
void curve_sr_avx2(double n, int M, const ResourceCosts& costs,
                   std::span<const double> p, std::span<double> S, std::span<double> R);

ScanResult poca_scan_scalar(double n, const ResourceCosts& costs, double r_bar, int m,
                            std::int64_t k_max);
ScanResult poca_scan_avx2(double n, const ResourceCosts& costs, double r_bar, int m,
                          std::int64_t k_max);

ScanResult duan_scan_scalar(double n, const ResourceCosts& costs, double r_bar, int m,
                            std::int64_t k_max);
ScanResult duan_scan_avx2(double n, const ResourceCosts& costs, double r_bar, int m,
                          std::int64_t k_max);

void philox_fill_scalar(std::uint64_t seed, std::uint64_t stream, std::uint64_t block0,
                        std::uint32_t* out, std::size_t n_blocks);
void philox_fill_avx2(std::uint64_t seed, std::uint64_t stream, std::uint64_t block0,
                      std::uint32_t* out, std::size_t n_blocks);

std::size_t bernoulli_count_scalar(const std::uint32_t* buf, std::size_t n_draws, double p);
std::size_t bernoulli_count_avx2(const std::uint32_t* buf, std::size_t n_draws, double p);

}  // namespace rach::kern::detail
