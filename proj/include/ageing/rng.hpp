#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

// Counter-based pseudo-random numbers (Philox4x32-10). Every draw is a pure
// function of (master seed, stream id, draw index), so replications can run
// in any order, on any number of threads, and still produce identical output.

namespace ageing {

inline constexpr std::string_view rng_id = "philox4x32-10";

struct philox_block {
    std::uint32_t v[4];
};

// One full 10-round Philox4x32 pass. Counter words are c0..c3, key words
// k0,k1; the Weyl constants advance the key between rounds.
inline philox_block philox4x32_10(philox_block ctr, std::uint32_t k0, std::uint32_t k1) {
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * ctr.v[0];
        const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * ctr.v[2];
        const philox_block next{{
            static_cast<std::uint32_t>(p1 >> 32) ^ ctr.v[1] ^ k0,
            static_cast<std::uint32_t>(p1),
            static_cast<std::uint32_t>(p0 >> 32) ^ ctr.v[3] ^ k1,
            static_cast<std::uint32_t>(p0),
        }};
        ctr = next;
        k0 += 0x9E3779B9u;
        k1 += 0xBB67AE85u;
    }
    return ctr;
}

// Identifies one replication's stream. (master_seed, stream_id) -> state is
// injective: stream_id occupies the high counter words, the draw index the
// low ones, and the master seed is the cipher key.
struct SeedSpec {
    std::uint64_t master_seed = 0;
    std::uint64_t stream_id = 0;
};

// Stateless-by-construction uniform stream: block i>>1 of the counter space,
// half i&1. next_* advance a local draw index only.
class RngStream {
public:
    explicit RngStream(SeedSpec seed) : seed_(seed) {}

    std::uint64_t next_bits() {
        const std::uint64_t i = index_++;
        if ((i & 1) == 0) {
            const philox_block ctr{{
                static_cast<std::uint32_t>(i >> 1),
                static_cast<std::uint32_t>(i >> 33),
                static_cast<std::uint32_t>(seed_.stream_id),
                static_cast<std::uint32_t>(seed_.stream_id >> 32),
            }};
            const philox_block out = philox4x32_10(
                ctr, static_cast<std::uint32_t>(seed_.master_seed),
                static_cast<std::uint32_t>(seed_.master_seed >> 32));
            cached_ = (std::uint64_t{out.v[2]} << 32) | out.v[3];
            return (std::uint64_t{out.v[0]} << 32) | out.v[1];
        }
        return cached_;
    }

    // Uniform on the open interval (0,1): 53-bit mantissa offset by half a
    // grid step, so 0 and 1 are unreachable and -log(u) is always finite.
    double next_uniform() {
        return (static_cast<double>(next_bits() >> 11) + 0.5) * 0x1p-53;
    }

    // Inverse-transform exponential with the given rate (survival e^{-rate*x}).
    double next_exponential(double rate) {
        return -std::log(next_uniform()) / rate;
    }

private:
    SeedSpec seed_;
    std::uint64_t index_ = 0;
    std::uint64_t cached_ = 0;
};

} // namespace ageing
