#pragma once
// Word keys as character vectors, and set algebra on position characters.
//
// Character 0 is the least-significant char_bits bits of the key; serialized
// functions rely on this order, so it is part of the file format contract.

#include <compare>
#include <cstdint>
#include <vector>

#include "hitab/errors.hpp"

namespace hitab {

// How a w-bit key splits into char_count characters of char_bits bits each.
struct KeyCodec {
    std::uint32_t char_bits = 0;  // b
    std::uint32_t char_count = 0; // c

    KeyCodec(std::uint32_t bits, std::uint32_t count);

    std::uint32_t key_bits() const { return char_bits * char_count; }
    std::uint64_t char_mask() const {
        return char_bits >= 64 ? ~0ULL : (1ULL << char_bits) - 1;
    }
    std::uint64_t key_mask() const {
        return key_bits() >= 64 ? ~0ULL : (1ULL << key_bits()) - 1;
    }
    // |Phi| = 2^char_bits; requires char_bits < 64 to be representable.
    std::uint64_t alphabet_size() const { return 1ULL << char_bits; }

    bool key_in_range(std::uint64_t key) const { return (key & ~key_mask()) == 0; }

    friend bool operator==(const KeyCodec&, const KeyCodec&) = default;
};

// A (position, character) pair. Keys and tabulation outputs are viewed as
// sets of these.
struct PositionChar {
    std::uint32_t position = 0;
    std::uint64_t character = 0;

    friend auto operator<=>(const PositionChar&, const PositionChar&) = default;
};

// An ordered duplicate-free set of position characters.
class PositionCharSet {
public:
    PositionCharSet() = default;
    explicit PositionCharSet(std::vector<PositionChar> members);

    const std::vector<PositionChar>& members() const { return members_; }
    bool empty() const { return members_.empty(); }
    std::size_t size() const { return members_.size(); }
    bool contains(const PositionChar& pc) const;

    // True when there is exactly one member per position 0..c-1.
    bool is_key_set() const;

    friend bool operator==(const PositionCharSet&, const PositionCharSet&) = default;

private:
    std::vector<PositionChar> members_; // sorted, unique
};

// Bits [i*b, (i+1)*b) of key become character i.
std::vector<std::uint64_t> split_key(std::uint64_t key, const KeyCodec& codec);

// Inverse of split_key.
std::uint64_t join_key(const std::vector<std::uint64_t>& chars, const KeyCodec& codec);

// The key viewed as its set of input position characters.
PositionCharSet key_to_set(std::uint64_t key, const KeyCodec& codec);

// {(i,x_i),(i,y_i) : x_i != y_i} for two key sets of the same shape.
// Empty iff x == y. Throws domain_error when the shapes differ.
PositionCharSet symmetric_difference(const PositionCharSet& x, const PositionCharSet& y);

} // namespace hitab
