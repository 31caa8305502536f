#pragma once
// Counter-based deterministic generator "ctr-mix64", format id 1.
//
// Every table word is a pure function of (seed, table, entry, word), so the
// same seed yields bit-identical tables on every platform, and composed
// schemes can evaluate entries lazily without materializing tables.
// The chain and its constants are frozen; any change requires a new id.

#include <cstdint>

namespace hitab {

inline constexpr std::uint8_t kGeneratorId = 1;
inline constexpr const char* kGeneratorName = "ctr-mix64";

constexpr std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
}

// One 64-bit word of the table stream.
constexpr std::uint64_t stream_word(std::uint64_t seed, std::uint64_t table,
                                    std::uint64_t entry, std::uint64_t word) {
    std::uint64_t z = mix64(seed ^ 0x9E3779B97F4A7C15ULL);
    z = mix64(z ^ (table * 0xA24BAED4963EE407ULL));
    z = mix64(z ^ (entry * 0x9FB21C651E98DF25ULL));
    z = mix64(z ^ (word * 0xD6E8FEB86659FD93ULL));
    return z;
}

// Partially applied stream: the per-(seed, table) prefix is reusable across
// the entries of one table.
struct TableStream {
    std::uint64_t prefix;

    constexpr TableStream(std::uint64_t seed, std::uint64_t table)
        : prefix(mix64(mix64(seed ^ 0x9E3779B97F4A7C15ULL) ^
                       (table * 0xA24BAED4963EE407ULL))) {}

    constexpr std::uint64_t word(std::uint64_t entry, std::uint64_t w) const {
        std::uint64_t z = mix64(prefix ^ (entry * 0x9FB21C651E98DF25ULL));
        return mix64(z ^ (w * 0xD6E8FEB86659FD93ULL));
    }
};

// Independent sub-seed for one level/role of a composed scheme.
constexpr std::uint64_t derive_subseed(std::uint64_t master, std::uint64_t level,
                                       std::uint64_t role) {
    std::uint64_t z = mix64(master ^ 0x6A09E667F3BCC909ULL);
    z = mix64(z ^ (level * 0xC2B2AE3D27D4EB4FULL));
    return mix64(z ^ (role * 0x165667B19E3779F9ULL));
}

// Frozen per-trial seed stream for statistical tests.
constexpr std::uint64_t trial_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t z = mix64(master ^ 0xBB67AE8584CAA73BULL);
    return mix64(z ^ (index * 0x27D4EB2F165667C5ULL));
}

// Roles used by derive_subseed across the composed schemes.
enum SubseedRole : std::uint64_t {
    kRoleExpander = 1,   // a level that widens keys into intermediate characters
    kRoleCompressor = 2, // the final simple tabulation into R
    kRoleBottom = 3,     // the bottom table bank of triple/recursive schemes
};

} // namespace hitab
