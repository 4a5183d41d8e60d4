/**
 * @file  rng.hpp
 * @brief Philox4x32-10 counter-based generator.
 *
 * A sample's random numbers are a pure function of (seed, sample index), so
 * any partitioning of a Monte-Carlo loop reproduces the same draws.
 */
#pragma once

#include <array>
#include <cstdint>

namespace acphase {

class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    explicit constexpr Philox4x32(std::uint64_t seed)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {}

    /// Ten-round Philox bijection of the counter under this generator's key.
    constexpr Counter operator()(Counter ctr) const
    {
        Key key = key_;
        for (int round = 0; round < 10; ++round) {
            ctr = single_round(ctr, key);
            key[0] += 0x9E3779B9u;
            key[1] += 0xBB67AE85u;
        }
        return ctr;
    }

    /// Two uniforms in [0, 1) for stream `index`, built from 53-bit mantissas.
    constexpr std::array<double, 2> uniform2(std::uint64_t index) const
    {
        const Counter r = (*this)({static_cast<std::uint32_t>(index),
                                   static_cast<std::uint32_t>(index >> 32), 0u, 0u});
        const std::uint64_t a = (static_cast<std::uint64_t>(r[0]) << 32) | r[1];
        const std::uint64_t b = (static_cast<std::uint64_t>(r[2]) << 32) | r[3];
        constexpr double scale = 1.0 / 9007199254740992.0; // 2^-53
        return {static_cast<double>(a >> 11) * scale, static_cast<double>(b >> 11) * scale};
    }

private:
    static constexpr Counter single_round(const Counter& c, const Key& k)
    {
        constexpr std::uint64_t m0 = 0xD2511F53u;
        constexpr std::uint64_t m1 = 0xCD9E8D57u;
        const std::uint64_t p0 = m0 * c[0];
        const std::uint64_t p1 = m1 * c[2];
        return {static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k[0], static_cast<std::uint32_t>(p1),
                static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k[1], static_cast<std::uint32_t>(p0)};
    }

    Key key_;
};

} // namespace acphase
