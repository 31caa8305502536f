#pragma once
// Exact integer helpers shared by the plan arithmetic and the bound
// calculator.

#include <cstdint>

namespace hitab {

// base^exp <= 2^bits, evaluated exactly (bits <= 64).
constexpr bool pow_leq_pow2(std::uint64_t base, std::uint32_t exp, std::uint32_t bits) {
    if (base <= 1)
        return true;
    const unsigned __int128 limit = static_cast<unsigned __int128>(1) << bits;
    unsigned __int128 acc = 1;
    for (std::uint32_t i = 0; i < exp; ++i) {
        acc *= base;
        if (acc > limit)
            return false;
    }
    return true;
}

// floor((2^bits)^(1/exp)): the largest k with k^exp <= 2^bits.
constexpr std::uint64_t floor_root_of_pow2(std::uint32_t bits, std::uint32_t exp) {
    std::uint64_t lo = 1, hi = 2;
    while (pow_leq_pow2(hi, exp, bits))
        hi *= 2;
    while (lo + 1 < hi) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        if (pow_leq_pow2(mid, exp, bits))
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

} // namespace hitab
