#pragma once

// Philox4x32-10 counter-based generator (Salmon et al.'s construction).
// Chosen because streams are splittable by construction: every (seed,
// stream_id) pair addresses an independent sequence, and any block can be
// generated without sequencing through its predecessors. The scalar block
// function below is the reference; philox_fill dispatches to an AVX2
// four-blocks-at-a-time variant that produces the identical word stream.
//
// Layout: key = (seed_lo, seed_hi); counter words c2, c3 = stream id;
// c0, c1 = 64-bit block index. Each block yields four 32-bit words.

#include <cstdint>
#include <cstring>
#include <span>

namespace rach::kern {

namespace philox {
inline constexpr std::uint32_t kMul0 = 0xD2511F53u;
inline constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
inline constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
inline constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
inline constexpr int kRounds = 10;
}  // namespace philox

inline void philox_block(std::uint32_t k0, std::uint32_t k1, std::uint32_t c0,
                         std::uint32_t c1, std::uint32_t c2, std::uint32_t c3,
                         std::uint32_t out[4]) {
    using namespace philox;
    for (int r = 0; r < kRounds; ++r) {
        if (r > 0) {
            k0 += kWeyl0;
            k1 += kWeyl1;
        }
        const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c0;
        const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c2;
        const auto lo0 = static_cast<std::uint32_t>(p0);
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const auto lo1 = static_cast<std::uint32_t>(p1);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const std::uint32_t n0 = hi1 ^ c1 ^ k0;
        const std::uint32_t n1 = lo1;
        const std::uint32_t n2 = hi0 ^ c3 ^ k1;
        const std::uint32_t n3 = lo0;
        c0 = n0;
        c1 = n1;
        c2 = n2;
        c3 = n3;
    }
    out[0] = c0;
    out[1] = c1;
    out[2] = c2;
    out[3] = c3;
}

/// Fill out[0 .. 4*n_blocks) with the words of blocks block0 .. block0+n_blocks-1.
/// Dispatched (scalar / AVX2); both backends emit the identical word stream.
void philox_fill(std::uint64_t seed, std::uint64_t stream, std::uint64_t block0,
                 std::uint32_t* out, std::size_t n_blocks);

/// Buffered word stream over one (seed, stream_id) pair.
class PhiloxStream {
public:
    PhiloxStream(std::uint64_t seed, std::uint64_t stream_id)
        : seed_(seed), stream_(stream_id) {}

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_; }

    std::uint32_t next_u32() {
        if (pos_ == 4) refill();
        return carry_[pos_++];
    }

    /// Two consecutive words, little-endian (first word = low half).
    std::uint64_t next_u64() {
        const std::uint64_t lo = next_u32();
        const std::uint64_t hi = next_u32();
        return lo | (hi << 32);
    }

    /// Uniform double in [0, 1) with 52 random mantissa bits.
    double next_unit() { return unit_from_u64(next_u64()); }

    bool bernoulli(double p) { return next_unit() < p; }

    /// Unbiased integer in [0, range) (multiply-shift with rejection).
    std::uint32_t bounded(std::uint32_t range) {
        std::uint64_t m = static_cast<std::uint64_t>(next_u32()) * range;
        auto l = static_cast<std::uint32_t>(m);
        if (l < range) {
            const std::uint32_t t = (0u - range) % range;
            while (l < t) {
                m = static_cast<std::uint64_t>(next_u32()) * range;
                l = static_cast<std::uint32_t>(m);
            }
        }
        return static_cast<std::uint32_t>(m >> 32);
    }

    /// Bulk draw; continues the same word sequence as the scalar getters.
    void fill_u32(std::span<std::uint32_t> out) {
        std::size_t i = 0;
        while (pos_ < 4 && i < out.size()) out[i++] = carry_[pos_++];
        const std::size_t whole = (out.size() - i) / 4;
        if (whole > 0) {
            philox_fill(seed_, stream_, block_, out.data() + i, whole);
            block_ += whole;
            i += whole * 4;
        }
        while (i < out.size()) out[i++] = next_u32();
    }

    static double unit_from_u64(std::uint64_t x) {
        return static_cast<double>(x >> 12) * 0x1p-52;
    }

private:
    void refill() {
        philox_block(static_cast<std::uint32_t>(seed_),
                     static_cast<std::uint32_t>(seed_ >> 32),
                     static_cast<std::uint32_t>(block_),
                     static_cast<std::uint32_t>(block_ >> 32),
                     static_cast<std::uint32_t>(stream_),
                     static_cast<std::uint32_t>(stream_ >> 32), carry_);
        ++block_;
        pos_ = 0;
    }

    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    std::uint32_t carry_[4] = {0, 0, 0, 0};
    int pos_ = 4;
};

}  // namespace rach::kern
