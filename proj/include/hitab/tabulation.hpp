#pragma once
// Simple tabulation: c character tables of packed output vectors, hashed by
// XOR of one lookup per input character.
//
// Packed layout: output character j occupies bits [j*out_char_bits,
// (j+1)*out_char_bits) of the entry bit string, LSB first, stored as a
// little-endian sequence of 64-bit words. XOR of entries is then plain
// word-wise XOR regardless of character width.

#include <cstdint>
#include <span>
#include <vector>

#include "hitab/errors.hpp"
#include "hitab/io.hpp"
#include "hitab/keyspace.hpp"
#include "hitab/prng.hpp"

namespace hitab {

// Default table memory budget: HITAB_MEM_BUDGET (bytes, optional K/M/G
// suffix) or 1 GiB.
std::uint64_t default_mem_budget();

struct TabulationParams {
    std::uint32_t in_char_bits = 0;   // bits per input character
    std::uint32_t in_char_count = 0;  // c
    std::uint32_t out_char_bits = 0;  // bits of one Psi character
    std::uint32_t out_char_count = 0; // d

    TabulationParams() = default;
    TabulationParams(std::uint32_t in_bits, std::uint32_t in_count,
                     std::uint32_t out_bits, std::uint32_t out_count);
    TabulationParams(const KeyCodec& codec, std::uint32_t out_bits, std::uint32_t out_count)
        : TabulationParams(codec.char_bits, codec.char_count, out_bits, out_count) {}

    std::uint32_t packed_bits() const { return out_char_bits * out_char_count; }
    std::uint32_t words_per_entry() const { return (packed_bits() + 63) / 64; }
    std::uint32_t entry_serialized_bytes() const { return (packed_bits() + 7) / 8; }
    std::uint64_t entries_per_table() const { return 1ULL << in_char_bits; }
    // Saturates instead of wrapping, so hostile headers cannot sneak a
    // wrapped size past a budget check.
    std::uint64_t table_bytes() const {
        const unsigned __int128 bytes = static_cast<unsigned __int128>(in_char_count) *
                                        entries_per_table() * words_per_entry() * 8;
        return bytes > ~0ULL ? ~0ULL : static_cast<std::uint64_t>(bytes);
    }
    // Keys wider than a word are only reachable through eval_chars.
    std::uint32_t key_bits() const {
        std::uint64_t w = static_cast<std::uint64_t>(in_char_bits) * in_char_count;
        return w >= 64 ? 64 : static_cast<std::uint32_t>(w);
    }
    std::uint64_t in_char_mask() const {
        return in_char_bits >= 64 ? ~0ULL : (1ULL << in_char_bits) - 1;
    }
    bool key_in_range(std::uint64_t key) const {
        return key_bits() >= 64 || key < (1ULL << key_bits());
    }

    friend bool operator==(const TabulationParams&, const TabulationParams&) = default;
};

// Character j of a packed output vector.
std::uint64_t packed_get_char(std::span<const std::uint64_t> words, std::uint32_t j,
                              std::uint32_t out_char_bits);

// Thread-local count of table entries touched by eval paths; tests use it to
// pin the lookup cost of every scheme.
std::uint64_t& lookup_counter();

class SimpleTabulation {
public:
    // Fills the tables from the ctr-mix64 stream keyed by (seed, table,
    // entry). Throws resource_error when table_bytes() exceeds the budget.
    static SimpleTabulation generate(const TabulationParams& params, std::uint64_t seed,
                                     std::uint64_t mem_budget = default_mem_budget());

    // Wraps explicitly provided tables (words laid out as generate() would).
    static SimpleTabulation from_tables(const TabulationParams& params,
                                        std::vector<std::uint64_t> words,
                                        std::uint64_t seed = 0);

    // One packed word of one table entry, as generate() fills it. Pure; lets
    // composed schemes evaluate without materializing tables.
    static std::uint64_t generated_word(const TabulationParams& params, std::uint64_t seed,
                                        std::uint32_t table, std::uint64_t entry,
                                        std::uint32_t word);

    const TabulationParams& params() const { return params_; }
    std::uint64_t seed() const { return seed_; }

    // XOR of the c looked-up entries; key split LSB-first per the codec
    // convention. Exactly c table lookups.
    void eval_into(std::uint64_t key, std::span<std::uint64_t> out) const;
    std::vector<std::uint64_t> eval(std::uint64_t key) const;
    // Fast path for packed outputs of at most 64 bits.
    std::uint64_t eval64(std::uint64_t key) const;

    // Evaluation on an explicit character vector (chars[i] indexes table i);
    // this is how wide intermediate keys of composed schemes are hashed.
    void eval_chars_into(std::span<const std::uint64_t> chars,
                         std::span<std::uint64_t> out) const;
    std::uint64_t eval_chars64(std::span<const std::uint64_t> chars) const;

    // XOR over the entries named by an arbitrary position-character set;
    // agrees with eval when the set represents a key, and is 0 on the empty
    // set.
    std::vector<std::uint64_t> eval_set(const PositionCharSet& s) const;

    std::span<const std::uint64_t> entry(std::uint32_t table, std::uint64_t e) const;
    const std::vector<std::uint64_t>& words() const { return words_; }

    // "HTAB" container, bit-exact across platforms.
    void serialize_into(ByteWriter& out) const;
    std::vector<std::uint8_t> serialize() const;
    static SimpleTabulation deserialize_from(ByteReader& in,
                                             std::uint64_t mem_budget = default_mem_budget());
    static SimpleTabulation deserialize(std::span<const std::uint8_t> bytes,
                                        std::uint64_t mem_budget = default_mem_budget());

    friend bool operator==(const SimpleTabulation&, const SimpleTabulation&) = default;

private:
    SimpleTabulation(TabulationParams params, std::uint64_t seed,
                     std::vector<std::uint64_t> words)
        : params_(params), seed_(seed), words_(std::move(words)) {}

    TabulationParams params_;
    std::uint64_t seed_ = 0;
    std::vector<std::uint64_t> words_; // c * 2^in_bits entries of words_per_entry()
};

} // namespace hitab
