#pragma once

#include <cstdint>
#include <random>

#include <gmpxx.h>

namespace hofbauer {

/// Named streams derived from the master seed. Stream k of seed s is an
/// mt19937_64 seeded with seed_seq{lo(s), hi(s), lo(k), hi(k)}.
enum class Stream : std::uint64_t {
    brolin = 1,
    conformal = 2,
    custom = 3,
    dirac = 4,
};

inline std::mt19937_64 make_stream(std::uint64_t master, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    return std::mt19937_64(seq);
}

inline std::mt19937_64 make_stream(std::uint64_t master, Stream s) {
    return make_stream(master, static_cast<std::uint64_t>(s));
}

/// Uniform integer in [0, 2^bits).
inline mpz_class random_bits(std::mt19937_64& rng, unsigned long bits) {
    mpz_class out = 0;
    unsigned long have = 0;
    while (have < bits) {
        out <<= 64;
        out += static_cast<unsigned long>(rng());
        have += 64;
    }
    out >>= static_cast<mp_bitcnt_t>(have - bits);
    return out;
}

} // namespace hofbauer
