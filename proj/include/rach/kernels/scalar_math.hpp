#pragma once

// Scalar reference kernels for exp / log / log1p and the closed-form
// throughput/consumption evaluation built on them.
//
// These are not thin wrappers over libm: the AVX2 backend re-implements the
// exact same operation sequence lane-wise, and the equivalence tests assert
// bit-identical outputs between backends. Keep every arithmetic step (op
// kind, order, fma usage) in sync with src/kernels/batch_avx2.cpp.
// Accuracy target is a few ulp, which the polynomial degrees below provide
// with margin (see tests/test_kernels.cpp for the measured bounds).

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>

namespace rach::kern {

namespace fc {

inline constexpr double kLog2E = 1.4426950408889634074;  // log2(e)
inline constexpr double kShift = 6755399441055744.0;     // 1.5 * 2^52, round-to-nearest-int trick
// ln(2) split; hi has 23 significant bits so e*kLn2Hi is exact for |e| < 2^29
inline constexpr double kLn2Hi = 6.93147180369123816490e-01;
inline constexpr double kLn2Lo = 1.90821492927058770002e-10;
inline constexpr double kExpClamp = 1280.0;  // |x| beyond this saturates to 0/inf anyway
inline constexpr double kSqrt2 = 1.4142135623730951;
inline constexpr double kMinNormal = 2.2250738585072014e-308;
inline constexpr double kTiny = 4.9406564584124654e-324;  // smallest subnormal

// exp(r) ~= Horner Taylor series on |r| <= ln(2)/2, coefficients 1/13! .. 1/2!,
// then two closing steps with 1.0 (degree 13; truncation ~1.7e-16 relative).
inline constexpr double kExpC[] = {
    1.0 / 6227020800.0, 1.0 / 479001600.0, 1.0 / 39916800.0, 1.0 / 3628800.0,
    1.0 / 362880.0,     1.0 / 40320.0,     1.0 / 5040.0,     1.0 / 720.0,
    1.0 / 120.0,        1.0 / 24.0,        1.0 / 6.0,        1.0 / 2.0,
};

// ln(m) = 2s + s*w, s = (m-1)/(m+1), w = z*(2/3 + z*(2/5 + ...)), z = s^2.
// Nine terms keep the truncation below 3e-17 relative on m in [1/sqrt2, sqrt2].
inline constexpr double kLogC[] = {
    2.0 / 3.0,  2.0 / 5.0,  2.0 / 7.0,  2.0 / 9.0, 2.0 / 11.0,
    2.0 / 13.0, 2.0 / 15.0, 2.0 / 17.0, 2.0 / 19.0,
};

}  // namespace fc

// min/max with SSE semantics (second operand wins on NaN / equality); the
// vector backend uses _mm256_min_pd/_mm256_max_pd which behave the same way.
inline double mind(double a, double b) { return a < b ? a : b; }
inline double maxd(double a, double b) { return a > b ? a : b; }

inline double exp_core(double x) {
    const double xc = maxd(mind(x, fc::kExpClamp), -fc::kExpClamp);
    const double t = xc * fc::kLog2E + fc::kShift;
    const double kd = t - fc::kShift;
    double r = std::fma(kd, -fc::kLn2Hi, xc);
    r = std::fma(kd, -fc::kLn2Lo, r);

    double p = fc::kExpC[0];
    for (int i = 1; i < 12; ++i) p = std::fma(p, r, fc::kExpC[i]);
    p = std::fma(p, r, 1.0);
    p = std::fma(p, r, 1.0);

    // 2^k in two halves so k down to -1074 (subnormal results) stays exact
    const double k1d = std::floor(kd * 0.5);
    const double k2d = kd - k1d;
    const auto k1 = static_cast<std::int64_t>(k1d);
    const auto k2 = static_cast<std::int64_t>(k2d);
    const double s1 = std::bit_cast<double>(static_cast<std::uint64_t>(1023 + k1) << 52);
    const double s2 = std::bit_cast<double>(static_cast<std::uint64_t>(1023 + k2) << 52);
    double res = (p * s1) * s2;
    if (x != x) res = x;
    return res;
}

inline double log_core(double x) {
    const bool scaled = x < fc::kMinNormal;  // also true for x <= 0; masked below
    const double xs = scaled ? x * 0x1p54 : x;
    const double eadj = scaled ? 54.0 : 0.0;

    const auto b = std::bit_cast<std::uint64_t>(xs);
    const auto eraw = static_cast<std::int64_t>(b >> 52) - 1023;
    double m = std::bit_cast<double>((b & 0x000FFFFFFFFFFFFFull) | 0x3FF0000000000000ull);
    const bool big = m > fc::kSqrt2;
    if (big) m = 0.5 * m;
    const double e_d = (static_cast<double>(static_cast<std::int32_t>(eraw)) - eadj) +
                       (big ? 1.0 : 0.0);

    const double s = (m - 1.0) / (m + 1.0);
    const double z = s * s;
    double w = fc::kLogC[8];
    for (int i = 7; i >= 0; --i) w = std::fma(w, z, fc::kLogC[i]);
    w = w * z;

    const double u = e_d * fc::kLn2Lo;
    double v = std::fma(s, w, u);
    v = std::fma(2.0, s, v);
    double res = std::fma(e_d, fc::kLn2Hi, v);

    if (x == 0.0) res = -std::numeric_limits<double>::infinity();
    if (x < 0.0) res = std::numeric_limits<double>::quiet_NaN();
    if (x == std::numeric_limits<double>::infinity()) res = x;
    if (x != x) res = x;
    return res;
}

inline double log1p_core(double x) {
    const double u = 1.0 + x;
    const double um1 = u - 1.0;
    const double corr = x / um1;  // Goldberg correction for the rounding of 1+x
    double res = log_core(u) * corr;
    if (um1 == 0.0) res = x;
    if (x == std::numeric_limits<double>::infinity()) res = x;
    return res;
}

/// (1 - p_over_M)^e for e >= 0 with the 0^0 = 1 convention.
inline double survival_pow(double e, double p_over_M) {
    if (e == 0.0) return 1.0;
    return exp_core(e * log1p_core(-p_over_M));
}

struct SR {
    double S;
    double R;
};

/// Canonical evaluation of throughput S = n p (1-p/M)^(n-1) and expected
/// consumption R = M (r_O - (r_O - r_I)(1-p/M)^n). Every call site (singles,
/// curve batches, policy scans) funnels through this operation sequence so
/// cross-module comparisons of predicted values are exact.
inline SR sr_eval(double n, double p, double M, double r_idle, double r_occupied) {
    const double pom = p / M;
    const double l = log1p_core(-pom);
    const double qn1 = (n - 1.0) == 0.0 ? 1.0 : exp_core((n - 1.0) * l);
    const double qn = n == 0.0 ? 1.0 : exp_core(n * l);
    const double a = n * p;
    const double S = a * qn1;
    const double d = r_occupied - r_idle;
    const double t = d * qn;
    const double R = M * (r_occupied - t);
    return {S, R};
}

/// Lemma-2 constrained optimum p*(M) = min(M/n, p_max) clamped into (0, 1],
/// where p_max solves R(n; p, M) = r_bar when the budget can bind.
/// Precondition (checked by callers): M * r_idle <= r_bar.
inline double p_star_core(double n, double M, double r_idle, double r_occupied,
                          double r_bar) {
    const double rbm = r_bar / M;
    double pmax;
    if (r_occupied >= rbm) {
        const double d = r_occupied - r_idle;
        const double ratio = maxd((r_occupied - rbm) / d, 0.0);
        const double lr = log_core(ratio);
        const double er = exp_core(lr / n);
        pmax = M * (1.0 - er);
    } else {
        pmax = 1.0;
    }
    double p = mind(M / n, pmax);
    p = mind(p, 1.0);
    p = maxd(p, fc::kTiny);  // keeps p in (0,1] when the budget binds at p -> 0
    return p;
}

}  // namespace rach::kern
