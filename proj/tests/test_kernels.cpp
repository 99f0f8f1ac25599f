#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "rach/kernels/batch.hpp"
#include "rach/kernels/dispatch.hpp"
#include "rach/kernels/philox.hpp"
#include "rach/kernels/scalar_math.hpp"

using namespace rach;
using kern::Backend;

namespace {

std::uint64_t ulp_distance(double a, double b) {
    if (a == b) return 0;
    if (std::isnan(a) || std::isnan(b)) return std::isnan(a) == std::isnan(b) ? 0 : ~0ull;
    if (std::isinf(a) || std::isinf(b)) return a == b ? 0 : ~0ull;
    auto ia = std::bit_cast<std::int64_t>(a);
    auto ib = std::bit_cast<std::int64_t>(b);
    if (ia < 0) ia = std::numeric_limits<std::int64_t>::min() - ia;
    if (ib < 0) ib = std::numeric_limits<std::int64_t>::min() - ib;
    return static_cast<std::uint64_t>(ia > ib ? ia - ib : ib - ia);
}

bool same_bits(double a, double b) {
    return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b) ||
           (std::isnan(a) && std::isnan(b));
}

struct BackendGuard {
    Backend saved;
    BackendGuard() : saved(kern::active_backend()) {}
    ~BackendGuard() { kern::force_backend(saved); }
};

}  // namespace

// ---------------------------------------------------------------------------
// Philox4x32-10
// ---------------------------------------------------------------------------

TEST_CASE("philox known-answer vectors") {
    std::uint32_t out[4];

    // Random123 kat_vectors: zero key/counter
    kern::philox_block(0, 0, 0, 0, 0, 0, out);
    CHECK(out[0] == 0x6627E8D5u);
    CHECK(out[1] == 0xE169C58Du);
    CHECK(out[2] == 0xBC57AC4Cu);
    CHECK(out[3] == 0x9B00DBD8u);

    // all ones
    kern::philox_block(0xFFFFFFFFu, 0xFFFFFFFFu, 0xFFFFFFFFu, 0xFFFFFFFFu, 0xFFFFFFFFu,
                       0xFFFFFFFFu, out);
    CHECK(out[0] == 0x408F276Du);
    CHECK(out[1] == 0x41C83B0Eu);
    CHECK(out[2] == 0xA20BC7C6u);
    CHECK(out[3] == 0x6D5451FDu);

    // pi digits
    kern::philox_block(0xA4093822u, 0x299F31D0u, 0x243F6A88u, 0x85A308D3u, 0x13198A2Eu,
                       0x03707344u, out);
    CHECK(out[0] == 0xD16CFE09u);
    CHECK(out[1] == 0x94FDCCEBu);
    CHECK(out[2] == 0x5001E420u);
    CHECK(out[3] == 0x24126EA1u);

    // vectors derived from the algorithm definition (frozen)
    kern::philox_block(0xDEADBEEFu, 0xCAFEF00Du, 1, 0, 0, 0, out);
    CHECK(out[0] == 0x149714FAu);
    CHECK(out[1] == 0x7A2992C0u);
    CHECK(out[2] == 0x1014078Eu);
    CHECK(out[3] == 0x3B34DDE9u);

    kern::philox_block(0x0F0F0F0Fu, 0xF0F0F0F0u, 0x12345678u, 0x9ABCDEF0u, 0x13579BDFu,
                       0x2468ACE0u, out);
    CHECK(out[0] == 0x2A25FFB8u);
    CHECK(out[1] == 0xD89AA0EDu);
    CHECK(out[2] == 0x975F1782u);
    CHECK(out[3] == 0x70EB28B2u);
}

TEST_CASE("philox_fill matches per-block generation on both backends") {
    BackendGuard guard;
    const std::uint64_t seed = 0x123456789ABCDEF0ull;
    const std::uint64_t stream = 42;

    for (std::size_t n_blocks : {std::size_t{1}, std::size_t{3}, std::size_t{4},
                                 std::size_t{7}, std::size_t{64}, std::size_t{129}}) {
        std::vector<std::uint32_t> expect(4 * n_blocks);
        for (std::size_t i = 0; i < n_blocks; ++i) {
            const std::uint64_t blk = 5 + i;
            kern::philox_block(static_cast<std::uint32_t>(seed),
                               static_cast<std::uint32_t>(seed >> 32),
                               static_cast<std::uint32_t>(blk),
                               static_cast<std::uint32_t>(blk >> 32),
                               static_cast<std::uint32_t>(stream),
                               static_cast<std::uint32_t>(stream >> 32),
                               expect.data() + 4 * i);
        }
        for (Backend b : {Backend::Scalar, Backend::Avx2}) {
            if (b == Backend::Avx2 && !kern::cpu_supports_avx2()) continue;
            kern::force_backend(b);
            std::vector<std::uint32_t> got(4 * n_blocks, 0);
            kern::philox_fill(seed, stream, 5, got.data(), n_blocks);
            CHECK(got == expect);
        }
    }
}

TEST_CASE("philox stream: bulk fill and scalar draws interleave consistently") {
    kern::PhiloxStream a(7, 3), b(7, 3);
    std::vector<std::uint32_t> bulk(37);
    a.fill_u32(bulk);
    for (std::size_t i = 0; i < bulk.size(); ++i) CHECK(b.next_u32() == bulk[i]);
    CHECK(a.next_u32() == b.next_u32());

    // distinct streams and seeds diverge
    kern::PhiloxStream c(7, 4), d(8, 3);
    CHECK(kern::PhiloxStream(7, 3).next_u64() != c.next_u64());
    CHECK(kern::PhiloxStream(7, 3).next_u64() != d.next_u64());
}

TEST_CASE("philox stream: unit doubles and bounded ints stay in range") {
    kern::PhiloxStream s(99, 0);
    double sum = 0.0;
    for (int i = 0; i < 20000; ++i) {
        const double u = s.next_unit();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        sum += u;
    }
    CHECK(std::abs(sum / 20000 - 0.5) < 0.02);  // ~5 sigma

    for (std::uint32_t range : {1u, 2u, 7u, 54u, 555u}) {
        std::vector<int> seen(range, 0);
        for (int i = 0; i < 2000; ++i) {
            const std::uint32_t v = s.bounded(range);
            REQUIRE(v < range);
            ++seen[v];
        }
        if (range == 2) CHECK(std::abs(seen[0] - 1000) < 150);
    }
}

// ---------------------------------------------------------------------------
// exp / log / log1p kernels
// ---------------------------------------------------------------------------

TEST_CASE("exp_core: exact anchors and edges") {
    CHECK(kern::exp_core(0.0) == 1.0);
    CHECK(kern::exp_core(-std::numeric_limits<double>::infinity()) == 0.0);
    CHECK(kern::exp_core(std::numeric_limits<double>::infinity()) ==
          std::numeric_limits<double>::infinity());
    CHECK(std::isnan(kern::exp_core(std::numeric_limits<double>::quiet_NaN())));
    CHECK(kern::exp_core(800.0) == std::numeric_limits<double>::infinity());
    CHECK(kern::exp_core(-800.0) == 0.0);
}

TEST_CASE("log_core: exact anchors and edges") {
    CHECK(kern::log_core(1.0) == 0.0);
    CHECK(kern::log_core(0.0) == -std::numeric_limits<double>::infinity());
    CHECK(std::isnan(kern::log_core(-1.0)));
    CHECK(kern::log_core(std::numeric_limits<double>::infinity()) ==
          std::numeric_limits<double>::infinity());
    CHECK(std::isnan(kern::log_core(std::numeric_limits<double>::quiet_NaN())));
    // subnormal argument
    const double sub = 1e-310;
    CHECK(ulp_distance(kern::log_core(sub), std::log(sub)) <= 4);
}

TEST_CASE("log1p_core: anchors") {
    CHECK(kern::log1p_core(0.0) == 0.0);
    CHECK(kern::log1p_core(-1.0) == -std::numeric_limits<double>::infinity());
    CHECK(std::isnan(kern::log1p_core(-1.5)));
    const double tiny = 1e-300;
    CHECK(kern::log1p_core(-tiny) == -tiny);
}

TEST_CASE("scalar kernels track libm within a few ulp") {
    kern::PhiloxStream s(2024, 0);
    std::uint64_t worst_exp = 0, worst_log = 0, worst_log1p = 0;
    for (int i = 0; i < 200000; ++i) {
        // exp over the range the model exercises (large-negative to small-positive)
        const double x = -745.0 + 760.0 * s.next_unit();
        worst_exp = std::max(worst_exp, ulp_distance(kern::exp_core(x), std::exp(x)));

        const double y = std::exp(-700.0 + 1400.0 * s.next_unit());
        worst_log = std::max(worst_log, ulp_distance(kern::log_core(y), std::log(y)));

        const double z = -1.0 + s.next_unit();  // (-1, 0): the survival-probability domain
        worst_log1p = std::max(worst_log1p, ulp_distance(kern::log1p_core(z), std::log1p(z)));
    }
    CHECK(worst_exp <= 4);
    CHECK(worst_log <= 4);
    CHECK(worst_log1p <= 4);
}

TEST_CASE("survival_pow conventions") {
    CHECK(kern::survival_pow(0.0, 1.0) == 1.0);  // 0^0 = 1
    CHECK(kern::survival_pow(3.0, 1.0) == 0.0);  // 0^3 = 0
    CHECK(kern::survival_pow(0.0, 0.0) == 1.0);
    CHECK(kern::survival_pow(5.0, 0.0) == 1.0);
    CHECK(kern::survival_pow(2.0, 0.5) == doctest::Approx(0.25).epsilon(1e-15));
}

// ---------------------------------------------------------------------------
// batch kernels: backend equivalence (bitwise)
// ---------------------------------------------------------------------------

TEST_CASE("curve_sr: AVX2 output is bit-identical to scalar") {
    if (!kern::cpu_supports_avx2()) return;
    BackendGuard guard;
    kern::PhiloxStream rng(5, 0);
    const ResourceCosts costs{};

    for (int rep = 0; rep < 20; ++rep) {
        const double n = 1.0 + 4999.0 * rng.next_unit();
        const int M = 1 + static_cast<int>(rng.bounded(600));
        const std::size_t len = 1 + rng.bounded(257);
        std::vector<double> p(len);
        for (auto& v : p) v = std::nextafter(rng.next_unit(), 1.0);

        std::vector<double> S1(len), R1(len), S2(len), R2(len);
        kern::force_backend(Backend::Scalar);
        kern::curve_sr(n, M, costs, p, S1, R1);
        kern::force_backend(Backend::Avx2);
        kern::curve_sr(n, M, costs, p, S2, R2);
        for (std::size_t i = 0; i < len; ++i) {
            REQUIRE(same_bits(S1[i], S2[i]));
            REQUIRE(same_bits(R1[i], R2[i]));
        }
    }
}

TEST_CASE("curve_sr agrees bitwise with the single-point closed forms") {
    BackendGuard guard;
    const ResourceCosts costs{};
    const double n = 400.0;
    const int M = 54;
    std::vector<double> p(101), S(101), R(101);
    for (int i = 0; i <= 100; ++i) p[i] = (i + 1) / 102.0;

    for (Backend b : {Backend::Scalar, Backend::Avx2}) {
        if (b == Backend::Avx2 && !kern::cpu_supports_avx2()) continue;
        kern::force_backend(b);
        kern::curve_sr(n, M, costs, p, S, R);
        for (std::size_t i = 0; i < p.size(); ++i) {
            const kern::SR one = kern::sr_eval(n, p[i], M, costs.idle, costs.occupied);
            REQUIRE(same_bits(S[i], one.S));
            REQUIRE(same_bits(R[i], one.R));
        }
    }
}

TEST_CASE("poca_scan and duan_scan: backend equivalence") {
    if (!kern::cpu_supports_avx2()) return;
    BackendGuard guard;
    kern::PhiloxStream rng(17, 0);

    for (int rep = 0; rep < 40; ++rep) {
        const ResourceCosts costs{0.01 + 0.2 * rng.next_unit(), 0.5 + rng.next_unit()};
        const double n = 1.0 + 3000.0 * rng.next_unit();
        const int m = 1 + static_cast<int>(rng.bounded(7));
        const double r_bar = costs.idle * m * (1.0 + 600.0 * rng.next_unit());
        const auto k_max =
            static_cast<std::int64_t>(std::floor(r_bar / (costs.idle * m)));
        if (k_max < 1) continue;

        kern::force_backend(Backend::Scalar);
        const kern::ScanResult ps = kern::poca_scan(n, costs, r_bar, m, k_max);
        const kern::ScanResult ds = kern::duan_scan(n, costs, r_bar, m, k_max);
        kern::force_backend(Backend::Avx2);
        const kern::ScanResult pa = kern::poca_scan(n, costs, r_bar, m, k_max);
        const kern::ScanResult da = kern::duan_scan(n, costs, r_bar, m, k_max);

        REQUIRE(ps.M == pa.M);
        REQUIRE(same_bits(ps.p, pa.p));
        REQUIRE(same_bits(ps.S, pa.S));
        REQUIRE(same_bits(ps.R, pa.R));
        REQUIRE(ps.evaluations == pa.evaluations);
        REQUIRE(ds.M == da.M);
        REQUIRE(same_bits(ds.p, da.p));
        REQUIRE(same_bits(ds.S, da.S));
        REQUIRE(same_bits(ds.R, da.R));
        REQUIRE(ds.feasible == da.feasible);
    }
}

TEST_CASE("bernoulli_count: backend equivalence and against naive counting") {
    BackendGuard guard;
    kern::PhiloxStream rng(31, 9);
    for (std::size_t n_draws : {std::size_t{0}, std::size_t{1}, std::size_t{5},
                                std::size_t{400}, std::size_t{1001}}) {
        std::vector<std::uint32_t> buf(2 * n_draws);
        rng.fill_u32(buf);
        for (double p : {0.0, 0.135, 0.5, 1.0}) {
            std::size_t naive = 0;
            for (std::size_t i = 0; i < n_draws; ++i) {
                const std::uint64_t x = static_cast<std::uint64_t>(buf[2 * i]) |
                                        (static_cast<std::uint64_t>(buf[2 * i + 1]) << 32);
                naive += kern::PhiloxStream::unit_from_u64(x) < p ? 1 : 0;
            }
            kern::force_backend(Backend::Scalar);
            CHECK(kern::bernoulli_count(buf.data(), n_draws, p) == naive);
            if (kern::cpu_supports_avx2()) {
                kern::force_backend(Backend::Avx2);
                CHECK(kern::bernoulli_count(buf.data(), n_draws, p) == naive);
            }
        }
    }
}

TEST_CASE("p_star_core honors the budget boundary cases") {
    // boundary: r_bar exactly equals M * r_idle -> p collapses to the smallest
    // positive double, predicted consumption stays at the budget
    const double p = kern::p_star_core(10.0, 4.0, 0.25, 1.25, 1.0);
    CHECK(p == kern::fc::kTiny);
    const kern::SR sr = kern::sr_eval(10.0, p, 4.0, 0.25, 1.25);
    CHECK(sr.R <= 1.0 + 1e-9);

    // loose budget: unconstrained optimum M/n
    CHECK(kern::p_star_core(400.0, 54.0, 0.09, 1.09, 58.86) == doctest::Approx(0.135));
}
