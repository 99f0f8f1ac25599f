#include "rach/kernels/dispatch.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <stdexcept>

#include "impl.hpp"
#include "rach/kernels/batch.hpp"
#include "rach/kernels/philox.hpp"

namespace rach::kern {

bool cpu_supports_avx2() {
#if defined(__x86_64__) || defined(__i386__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

namespace {

Backend resolve_auto() {
    if (const char* env = std::getenv("RACH_BACKEND")) {
        if (std::strcmp(env, "scalar") == 0) return Backend::Scalar;
        if (std::strcmp(env, "avx2") == 0) return Backend::Avx2;
    }
    return cpu_supports_avx2() ? Backend::Avx2 : Backend::Scalar;
}

std::atomic<Backend> g_backend{resolve_auto()};

}  // namespace

Backend active_backend() { return g_backend.load(std::memory_order_relaxed); }

void force_backend(Backend b) {
    if (b == Backend::Auto) b = resolve_auto();
    if (b == Backend::Avx2 && !cpu_supports_avx2())
        throw std::runtime_error("AVX2 backend requested but CPU lacks AVX2/FMA");
    g_backend.store(b, std::memory_order_relaxed);
}

const char* backend_name(Backend b) {
    switch (b) {
        case Backend::Auto: return "auto";
        case Backend::Scalar: return "scalar";
        case Backend::Avx2: return "avx2";
    }
    return "?";
}

void curve_sr(double n, int M, const ResourceCosts& costs, std::span<const double> p,
              std::span<double> S, std::span<double> R) {
    if (active_backend() == Backend::Avx2)
        detail::curve_sr_avx2(n, M, costs, p, S, R);
    else
        detail::curve_sr_scalar(n, M, costs, p, S, R);
}

ScanResult poca_scan(double n, const ResourceCosts& costs, double r_bar, int m,
                     std::int64_t k_max) {
    if (active_backend() == Backend::Avx2)
        return detail::poca_scan_avx2(n, costs, r_bar, m, k_max);
    return detail::poca_scan_scalar(n, costs, r_bar, m, k_max);
}

ScanResult duan_scan(double n, const ResourceCosts& costs, double r_bar, int m,
                     std::int64_t k_max) {
    if (active_backend() == Backend::Avx2)
        return detail::duan_scan_avx2(n, costs, r_bar, m, k_max);
    return detail::duan_scan_scalar(n, costs, r_bar, m, k_max);
}

void philox_fill(std::uint64_t seed, std::uint64_t stream, std::uint64_t block0,
                 std::uint32_t* out, std::size_t n_blocks) {
    if (active_backend() == Backend::Avx2)
        detail::philox_fill_avx2(seed, stream, block0, out, n_blocks);
    else
        detail::philox_fill_scalar(seed, stream, block0, out, n_blocks);
}

std::size_t bernoulli_count(const std::uint32_t* buf, std::size_t n_draws, double p) {
    if (active_backend() == Backend::Avx2)
        return detail::bernoulli_count_avx2(buf, n_draws, p);
    return detail::bernoulli_count_scalar(buf, n_draws, p);
}

}  // namespace rach::kern
