// Scalar reference implementations of the batch kernels.

#include <limits>

#include "impl.hpp"
#include "rach/kernels/philox.hpp"
#include "rach/kernels/scalar_math.hpp"

namespace rach::kern::detail {

void curve_sr_scalar(double n, int M, const ResourceCosts& costs,
                     std::span<const double> p, std::span<double> S, std::span<double> R) {
    const double Md = static_cast<double>(M);
    for (std::size_t i = 0; i < p.size(); ++i) {
        const SR sr = sr_eval(n, p[i], Md, costs.idle, costs.occupied);
        if (!S.empty()) S[i] = sr.S;
        if (!R.empty()) R[i] = sr.R;
    }
}

ScanResult poca_scan_scalar(double n, const ResourceCosts& costs, double r_bar, int m,
                            std::int64_t k_max) {
    ScanResult best;
    if (k_max < 1) return best;
    best.S = -std::numeric_limits<double>::infinity();
    for (std::int64_t k = k_max; k >= 1; --k) {
        const double Md = static_cast<double>(k) * m;
        const double p = p_star_core(n, Md, costs.idle, costs.occupied, r_bar);
        const SR sr = sr_eval(n, p, Md, costs.idle, costs.occupied);
        ++best.evaluations;
        if (sr.S > best.S) {
            best.S = sr.S;
            best.R = sr.R;
            best.p = p;
            best.M = static_cast<int>(k) * m;
        }
    }
    best.feasible = true;
    return best;
}

ScanResult duan_scan_scalar(double n, const ResourceCosts& costs, double r_bar, int m,
                            std::int64_t k_max) {
    ScanResult best;
    if (k_max < 1) return best;
    best.S = -std::numeric_limits<double>::infinity();
    for (std::int64_t k = 1; k <= k_max; ++k) {
        const double Md = static_cast<double>(k) * m;
        const double p = mind(1.0, Md / n);
        const SR sr = sr_eval(n, p, Md, costs.idle, costs.occupied);
        ++best.evaluations;
        if (sr.R <= r_bar && sr.S > best.S) {
            best.S = sr.S;
            best.R = sr.R;
            best.p = p;
            best.M = static_cast<int>(k) * m;
            best.feasible = true;
        }
    }
    if (!best.feasible) {
        best.S = 0.0;
        best.evaluations = k_max;
    }
    return best;
}

void philox_fill_scalar(std::uint64_t seed, std::uint64_t stream, std::uint64_t block0,
                        std::uint32_t* out, std::size_t n_blocks) {
    const auto k0 = static_cast<std::uint32_t>(seed);
    const auto k1 = static_cast<std::uint32_t>(seed >> 32);
    const auto c2 = static_cast<std::uint32_t>(stream);
    const auto c3 = static_cast<std::uint32_t>(stream >> 32);
    for (std::size_t i = 0; i < n_blocks; ++i) {
        const std::uint64_t blk = block0 + i;
        philox_block(k0, k1, static_cast<std::uint32_t>(blk),
                     static_cast<std::uint32_t>(blk >> 32), c2, c3, out + 4 * i);
    }
}

std::size_t bernoulli_count_scalar(const std::uint32_t* buf, std::size_t n_draws, double p) {
    std::size_t count = 0;
    for (std::size_t i = 0; i < n_draws; ++i) {
        const std::uint64_t x =
            static_cast<std::uint64_t>(buf[2 * i]) |
            (static_cast<std::uint64_t>(buf[2 * i + 1]) << 32);
        count += PhiloxStream::unit_from_u64(x) < p ? 1 : 0;
    }
    return count;
}

}  // namespace rach::kern::detail
