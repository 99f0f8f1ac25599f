// AVX2(+FMA) variants of the batch kernels. Every arithmetic step mirrors the
// scalar reference in include/rach/kernels/scalar_math.hpp operation for
// operation; tests/test_kernels.cpp asserts bit-identical outputs.

#if defined(__x86_64__) || defined(__i386__)

#include <immintrin.h>

#include <cstring>
#include <limits>

#include "impl.hpp"
#include "rach/kernels/philox.hpp"
#include "rach/kernels/scalar_math.hpp"

namespace rach::kern::detail {

namespace {

inline __m256d splat(double v) { return _mm256_set1_pd(v); }

const __m256d kOne = splat(1.0);
const __m256d kZero = _mm256_setzero_pd();
const __m256d kNegInf = splat(-std::numeric_limits<double>::infinity());
const __m256d kPosInf = splat(std::numeric_limits<double>::infinity());
const __m256d kNan = splat(std::numeric_limits<double>::quiet_NaN());
const __m256d kSignMask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x8000000000000000ll));

inline __m256d vexp(__m256d x) {
    __m256d xc = _mm256_min_pd(x, splat(fc::kExpClamp));
    xc = _mm256_max_pd(xc, splat(-fc::kExpClamp));
    const __m256d t = _mm256_add_pd(_mm256_mul_pd(xc, splat(fc::kLog2E)), splat(fc::kShift));
    const __m256d kd = _mm256_sub_pd(t, splat(fc::kShift));
    __m256d r = _mm256_fmadd_pd(kd, splat(-fc::kLn2Hi), xc);
    r = _mm256_fmadd_pd(kd, splat(-fc::kLn2Lo), r);

    __m256d p = splat(fc::kExpC[0]);
    for (int i = 1; i < 12; ++i) p = _mm256_fmadd_pd(p, r, splat(fc::kExpC[i]));
    p = _mm256_fmadd_pd(p, r, kOne);
    p = _mm256_fmadd_pd(p, r, kOne);

    const __m256d k1d = _mm256_floor_pd(_mm256_mul_pd(kd, splat(0.5)));
    const __m256d k2d = _mm256_sub_pd(kd, k1d);
    const __m256i bias = _mm256_set1_epi64x(1023);
    const __m256i i1 = _mm256_cvtepi32_epi64(_mm256_cvtpd_epi32(k1d));
    const __m256i i2 = _mm256_cvtepi32_epi64(_mm256_cvtpd_epi32(k2d));
    const __m256d s1 = _mm256_castsi256_pd(_mm256_slli_epi64(_mm256_add_epi64(i1, bias), 52));
    const __m256d s2 = _mm256_castsi256_pd(_mm256_slli_epi64(_mm256_add_epi64(i2, bias), 52));
    __m256d res = _mm256_mul_pd(_mm256_mul_pd(p, s1), s2);
    const __m256d nan_mask = _mm256_cmp_pd(x, x, _CMP_UNORD_Q);
    return _mm256_blendv_pd(res, x, nan_mask);
}

inline __m256d vlog(__m256d x) {
    const __m256d scaled = _mm256_cmp_pd(x, splat(fc::kMinNormal), _CMP_LT_OQ);
    const __m256d xs = _mm256_blendv_pd(x, _mm256_mul_pd(x, splat(0x1p54)), scaled);
    const __m256d eadj = _mm256_and_pd(scaled, splat(54.0));

    const __m256i b = _mm256_castpd_si256(xs);
    const __m256i eraw = _mm256_sub_epi64(_mm256_srli_epi64(b, 52), _mm256_set1_epi64x(1023));
    const __m256i lanes = _mm256_permutevar8x32_epi32(eraw, _mm256_setr_epi32(0, 2, 4, 6, 0, 0, 0, 0));
    const __m256d eraw_d = _mm256_cvtepi32_pd(_mm256_castsi256_si128(lanes));

    const __m256i mant =
        _mm256_or_si256(_mm256_and_si256(b, _mm256_set1_epi64x(0x000FFFFFFFFFFFFFll)),
                        _mm256_set1_epi64x(0x3FF0000000000000ll));
    __m256d m = _mm256_castsi256_pd(mant);
    const __m256d big = _mm256_cmp_pd(m, splat(fc::kSqrt2), _CMP_GT_OQ);
    m = _mm256_blendv_pd(m, _mm256_mul_pd(splat(0.5), m), big);
    const __m256d bigadd = _mm256_and_pd(big, kOne);
    const __m256d e_d = _mm256_add_pd(_mm256_sub_pd(eraw_d, eadj), bigadd);

    const __m256d s = _mm256_div_pd(_mm256_sub_pd(m, kOne), _mm256_add_pd(m, kOne));
    const __m256d z = _mm256_mul_pd(s, s);
    __m256d w = splat(fc::kLogC[8]);
    for (int i = 7; i >= 0; --i) w = _mm256_fmadd_pd(w, z, splat(fc::kLogC[i]));
    w = _mm256_mul_pd(w, z);

    const __m256d u = _mm256_mul_pd(e_d, splat(fc::kLn2Lo));
    __m256d v = _mm256_fmadd_pd(s, w, u);
    v = _mm256_fmadd_pd(splat(2.0), s, v);
    __m256d res = _mm256_fmadd_pd(e_d, splat(fc::kLn2Hi), v);

    res = _mm256_blendv_pd(res, kNegInf, _mm256_cmp_pd(x, kZero, _CMP_EQ_OQ));
    res = _mm256_blendv_pd(res, kNan, _mm256_cmp_pd(x, kZero, _CMP_LT_OQ));
    res = _mm256_blendv_pd(res, x, _mm256_cmp_pd(x, kPosInf, _CMP_EQ_OQ));
    res = _mm256_blendv_pd(res, x, _mm256_cmp_pd(x, x, _CMP_UNORD_Q));
    return res;
}

inline __m256d vlog1p(__m256d x) {
    const __m256d u = _mm256_add_pd(kOne, x);
    const __m256d um1 = _mm256_sub_pd(u, kOne);
    const __m256d corr = _mm256_div_pd(x, um1);
    __m256d res = _mm256_mul_pd(vlog(u), corr);
    res = _mm256_blendv_pd(res, x, _mm256_cmp_pd(um1, kZero, _CMP_EQ_OQ));
    res = _mm256_blendv_pd(res, x, _mm256_cmp_pd(x, kPosInf, _CMP_EQ_OQ));
    return res;
}

struct VSR {
    __m256d S;
    __m256d R;
};

inline VSR vsr_eval(double n, __m256d p, __m256d Md, double r_idle, double r_occupied) {
    const __m256d pom = _mm256_div_pd(p, Md);
    const __m256d l = vlog1p(_mm256_xor_pd(pom, kSignMask));
    const __m256d qn1 =
        (n - 1.0) == 0.0 ? kOne : vexp(_mm256_mul_pd(splat(n - 1.0), l));
    const __m256d qn = n == 0.0 ? kOne : vexp(_mm256_mul_pd(splat(n), l));
    const __m256d a = _mm256_mul_pd(splat(n), p);
    const __m256d S = _mm256_mul_pd(a, qn1);
    const double d = r_occupied - r_idle;
    const __m256d t = _mm256_mul_pd(splat(d), qn);
    const __m256d R = _mm256_mul_pd(Md, _mm256_sub_pd(splat(r_occupied), t));
    return {S, R};
}

inline __m256d vp_star(double n, __m256d Md, double r_idle, double r_occupied,
                       double r_bar) {
    const __m256d rbm = _mm256_div_pd(splat(r_bar), Md);
    const __m256d cond = _mm256_cmp_pd(splat(r_occupied), rbm, _CMP_GE_OQ);
    const double d = r_occupied - r_idle;
    const __m256d ratio =
        _mm256_max_pd(_mm256_div_pd(_mm256_sub_pd(splat(r_occupied), rbm), splat(d)), kZero);
    const __m256d lr = vlog(ratio);
    const __m256d er = vexp(_mm256_div_pd(lr, splat(n)));
    const __m256d pmax_f = _mm256_mul_pd(Md, _mm256_sub_pd(kOne, er));
    const __m256d pmax = _mm256_blendv_pd(kOne, pmax_f, cond);
    __m256d p = _mm256_min_pd(_mm256_div_pd(Md, splat(n)), pmax);
    p = _mm256_min_pd(p, kOne);
    p = _mm256_max_pd(p, splat(fc::kTiny));
    return p;
}

}  // namespace

void curve_sr_avx2(double n, int M, const ResourceCosts& costs,
                   std::span<const double> p, std::span<double> S, std::span<double> R) {
    const double Md = static_cast<double>(M);
    const __m256d Mv = splat(Md);
    const std::size_t n4 = p.size() / 4 * 4;
    for (std::size_t i = 0; i < n4; i += 4) {
        const VSR sr = vsr_eval(n, _mm256_loadu_pd(p.data() + i), Mv, costs.idle,
                                costs.occupied);
        if (!S.empty()) _mm256_storeu_pd(S.data() + i, sr.S);
        if (!R.empty()) _mm256_storeu_pd(R.data() + i, sr.R);
    }
    for (std::size_t i = n4; i < p.size(); ++i) {
        const SR sr = sr_eval(n, p[i], Md, costs.idle, costs.occupied);
        if (!S.empty()) S[i] = sr.S;
        if (!R.empty()) R[i] = sr.R;
    }
}

namespace {

// Merge candidate lanes into best, preferring higher S; on exact S ties the
// larger (poca) or smaller (duan) k wins, matching the strict-improvement
// order of the scalar scans.
template <bool PreferLargerK>
void reduce_lanes(const double* s, const double* r, const double* pp, const double* kk,
                  int count, ScanResult& best, double& bestK) {
    for (int i = 0; i < count; ++i) {
        const bool better =
            s[i] > best.S || (s[i] == best.S && (PreferLargerK ? kk[i] > bestK : kk[i] < bestK));
        if (better) {
            best.S = s[i];
            best.R = r[i];
            best.p = pp[i];
            bestK = kk[i];
        }
    }
}

}  // namespace

ScanResult poca_scan_avx2(double n, const ResourceCosts& costs, double r_bar, int m,
                          std::int64_t k_max) {
    ScanResult best;
    if (k_max < 1) return best;
    best.S = -std::numeric_limits<double>::infinity();
    double bestK = -1.0;
    const double md = static_cast<double>(m);

    const std::int64_t k4 = k_max / 4 * 4;
    const __m256d iota = _mm256_setr_pd(1.0, 2.0, 3.0, 4.0);
    __m256d vbestS = kNegInf, vbestR = kZero, vbestP = kZero, vbestK = splat(-1.0);
    for (std::int64_t k0 = 0; k0 < k4; k0 += 4) {
        const __m256d kv = _mm256_add_pd(splat(static_cast<double>(k0)), iota);
        const __m256d Md = _mm256_mul_pd(kv, splat(md));
        const __m256d p = vp_star(n, Md, costs.idle, costs.occupied, r_bar);
        const VSR sr = vsr_eval(n, p, Md, costs.idle, costs.occupied);
        const __m256d gt = _mm256_cmp_pd(sr.S, vbestS, _CMP_GT_OQ);
        const __m256d eq = _mm256_cmp_pd(sr.S, vbestS, _CMP_EQ_OQ);
        const __m256d kgt = _mm256_cmp_pd(kv, vbestK, _CMP_GT_OQ);
        const __m256d take = _mm256_or_pd(gt, _mm256_and_pd(eq, kgt));
        vbestS = _mm256_blendv_pd(vbestS, sr.S, take);
        vbestR = _mm256_blendv_pd(vbestR, sr.R, take);
        vbestP = _mm256_blendv_pd(vbestP, p, take);
        vbestK = _mm256_blendv_pd(vbestK, kv, take);
    }
    alignas(32) double s[4], r[4], pp[4], kk[4];
    _mm256_store_pd(s, vbestS);
    _mm256_store_pd(r, vbestR);
    _mm256_store_pd(pp, vbestP);
    _mm256_store_pd(kk, vbestK);
    if (k4 > 0) reduce_lanes<true>(s, r, pp, kk, 4, best, bestK);

    for (std::int64_t k = k4 + 1; k <= k_max; ++k) {
        const double Md = static_cast<double>(k) * m;
        const double p = p_star_core(n, Md, costs.idle, costs.occupied, r_bar);
        const SR sr = sr_eval(n, p, Md, costs.idle, costs.occupied);
        const double kd = static_cast<double>(k);
        if (sr.S > best.S || (sr.S == best.S && kd > bestK)) {
            best.S = sr.S;
            best.R = sr.R;
            best.p = p;
            bestK = kd;
        }
    }
    best.M = static_cast<int>(bestK) * m;
    best.evaluations = k_max;
    best.feasible = k_max >= 1;
    return best;
}

ScanResult duan_scan_avx2(double n, const ResourceCosts& costs, double r_bar, int m,
                          std::int64_t k_max) {
    ScanResult best;
    if (k_max < 1) return best;
    best.S = -std::numeric_limits<double>::infinity();
    double bestK = std::numeric_limits<double>::infinity();
    const double md = static_cast<double>(m);

    const std::int64_t k4 = k_max / 4 * 4;
    const __m256d iota = _mm256_setr_pd(1.0, 2.0, 3.0, 4.0);
    __m256d vbestS = kNegInf, vbestR = kZero, vbestP = kZero, vbestK = kPosInf;
    for (std::int64_t k0 = 0; k0 < k4; k0 += 4) {
        const __m256d kv = _mm256_add_pd(splat(static_cast<double>(k0)), iota);
        const __m256d Md = _mm256_mul_pd(kv, splat(md));
        const __m256d p = _mm256_min_pd(kOne, _mm256_div_pd(Md, splat(n)));
        const VSR sr = vsr_eval(n, p, Md, costs.idle, costs.occupied);
        const __m256d feas = _mm256_cmp_pd(sr.R, splat(r_bar), _CMP_LE_OQ);
        const __m256d sFeas = _mm256_blendv_pd(kNegInf, sr.S, feas);
        const __m256d gt = _mm256_cmp_pd(sFeas, vbestS, _CMP_GT_OQ);
        const __m256d eq = _mm256_cmp_pd(sFeas, vbestS, _CMP_EQ_OQ);
        const __m256d klt = _mm256_cmp_pd(kv, vbestK, _CMP_LT_OQ);
        const __m256d take = _mm256_or_pd(gt, _mm256_and_pd(eq, klt));
        vbestS = _mm256_blendv_pd(vbestS, sFeas, take);
        vbestR = _mm256_blendv_pd(vbestR, sr.R, take);
        vbestP = _mm256_blendv_pd(vbestP, p, take);
        vbestK = _mm256_blendv_pd(vbestK, kv, take);
    }
    alignas(32) double s[4], r[4], pp[4], kk[4];
    _mm256_store_pd(s, vbestS);
    _mm256_store_pd(r, vbestR);
    _mm256_store_pd(pp, vbestP);
    _mm256_store_pd(kk, vbestK);
    if (k4 > 0) reduce_lanes<false>(s, r, pp, kk, 4, best, bestK);

    for (std::int64_t k = k4 + 1; k <= k_max; ++k) {
        const double Md = static_cast<double>(k) * m;
        const double p = mind(1.0, Md / n);
        const SR sr = sr_eval(n, p, Md, costs.idle, costs.occupied);
        const double kd = static_cast<double>(k);
        if (sr.R <= r_bar && (sr.S > best.S || (sr.S == best.S && kd < bestK))) {
            best.S = sr.S;
            best.R = sr.R;
            best.p = p;
            bestK = kd;
        }
    }
    best.feasible = best.S > -std::numeric_limits<double>::infinity();
    best.M = best.feasible ? static_cast<int>(bestK) * m : 0;
    best.evaluations = k_max;
    if (!best.feasible) {
        best.S = 0.0;
        best.p = 0.0;
        best.R = 0.0;
    }
    return best;
}

void philox_fill_avx2(std::uint64_t seed, std::uint64_t stream, std::uint64_t block0,
                      std::uint32_t* out, std::size_t n_blocks) {
    using namespace philox;
    // precomputed key schedule
    std::uint32_t ks0[kRounds], ks1[kRounds];
    ks0[0] = static_cast<std::uint32_t>(seed);
    ks1[0] = static_cast<std::uint32_t>(seed >> 32);
    for (int r = 1; r < kRounds; ++r) {
        ks0[r] = ks0[r - 1] + kWeyl0;
        ks1[r] = ks1[r - 1] + kWeyl1;
    }

    const __m256i lo32 = _mm256_set1_epi64x(0xFFFFFFFFll);
    const __m256i vm0 = _mm256_set1_epi64x(kMul0);
    const __m256i vm1 = _mm256_set1_epi64x(kMul1);
    const __m256i vc2 = _mm256_set1_epi64x(stream & 0xFFFFFFFFull);
    const __m256i vc3 = _mm256_set1_epi64x(stream >> 32);

    const std::size_t n4 = n_blocks / 4 * 4;
    __m256i vctr = _mm256_add_epi64(_mm256_set1_epi64x(static_cast<long long>(block0)),
                                    _mm256_setr_epi64x(0, 1, 2, 3));
    for (std::size_t i = 0; i < n4; i += 4) {
        __m256i x0 = _mm256_and_si256(vctr, lo32);
        __m256i x1 = _mm256_srli_epi64(vctr, 32);
        __m256i x2 = vc2;
        __m256i x3 = vc3;
        for (int r = 0; r < kRounds; ++r) {
            const __m256i k0 = _mm256_set1_epi64x(ks0[r]);
            const __m256i k1 = _mm256_set1_epi64x(ks1[r]);
            const __m256i p0 = _mm256_mul_epu32(vm0, x0);
            const __m256i p1 = _mm256_mul_epu32(vm1, x2);
            const __m256i hi0 = _mm256_srli_epi64(p0, 32);
            const __m256i lo0 = _mm256_and_si256(p0, lo32);
            const __m256i hi1 = _mm256_srli_epi64(p1, 32);
            const __m256i lo1 = _mm256_and_si256(p1, lo32);
            const __m256i n0 = _mm256_xor_si256(_mm256_xor_si256(hi1, x1), k0);
            const __m256i n2 = _mm256_xor_si256(_mm256_xor_si256(hi0, x3), k1);
            x0 = n0;
            x1 = lo1;
            x2 = n2;
            x3 = lo0;
        }
        const __m256i x01 = _mm256_or_si256(x0, _mm256_slli_epi64(x1, 32));
        const __m256i x23 = _mm256_or_si256(x2, _mm256_slli_epi64(x3, 32));
        const __m256i lo = _mm256_unpacklo_epi64(x01, x23);
        const __m256i hi = _mm256_unpackhi_epi64(x01, x23);
        const __m256i out0 = _mm256_permute2x128_si256(lo, hi, 0x20);
        const __m256i out1 = _mm256_permute2x128_si256(lo, hi, 0x31);
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + 4 * i), out0);
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + 4 * i + 8), out1);
        vctr = _mm256_add_epi64(vctr, _mm256_set1_epi64x(4));
    }
    for (std::size_t i = n4; i < n_blocks; ++i) {
        const std::uint64_t blk = block0 + i;
        philox_block(static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                     static_cast<std::uint32_t>(blk), static_cast<std::uint32_t>(blk >> 32),
                     static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                     out + 4 * i);
    }
}

std::size_t bernoulli_count_avx2(const std::uint32_t* buf, std::size_t n_draws, double p) {
    const __m256i exp52 = _mm256_set1_epi64x(0x4330000000000000ll);
    const __m256d two52 = splat(0x1p52);
    const __m256d scale = splat(0x1p-52);
    const __m256d pv = splat(p);
    std::size_t count = 0;
    const std::size_t n4 = n_draws / 4 * 4;
    for (std::size_t i = 0; i < n4; i += 4) {
        const __m256i x = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(buf + 2 * i));
        const __m256i hi = _mm256_srli_epi64(x, 12);
        const __m256d d =
            _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(hi, exp52)), two52);
        const __m256d u = _mm256_mul_pd(d, scale);
        const __m256d lt = _mm256_cmp_pd(u, pv, _CMP_LT_OQ);
        count += static_cast<unsigned>(__builtin_popcount(_mm256_movemask_pd(lt)));
    }
    for (std::size_t i = n4; i < n_draws; ++i) {
        const std::uint64_t x =
            static_cast<std::uint64_t>(buf[2 * i]) |
            (static_cast<std::uint64_t>(buf[2 * i + 1]) << 32);
        count += PhiloxStream::unit_from_u64(x) < p ? 1 : 0;
    }
    return count;
}

}  // namespace rach::kern::detail

#else  // non-x86: forward to the scalar reference so the dispatch layer links

#include "impl.hpp"

namespace rach::kern::detail {
void curve_sr_avx2(double n, int M, const ResourceCosts& costs,
                   std::span<const double> p, std::span<double> S, std::span<double> R) {
    curve_sr_scalar(n, M, costs, p, S, R);
}
ScanResult poca_scan_avx2(double n, const ResourceCosts& costs, double r_bar, int m,
                          std::int64_t k_max) {
    return poca_scan_scalar(n, costs, r_bar, m, k_max);
}
ScanResult duan_scan_avx2(double n, const ResourceCosts& costs, double r_bar, int m,
                          std::int64_t k_max) {
    return duan_scan_scalar(n, costs, r_bar, m, k_max);
}
void philox_fill_avx2(std::uint64_t seed, std::uint64_t stream, std::uint64_t block0,
                      std::uint32_t* out, std::size_t n_blocks) {
    philox_fill_scalar(seed, stream, block0, out, n_blocks);
}
std::size_t bernoulli_count_avx2(const std::uint32_t* buf, std::size_t n_draws, double p) {
    return bernoulli_count_scalar(buf, n_draws, p);
}
}  // namespace rach::kern::detail

#endif
