#include "hitab/keyspace.hpp"

#include <algorithm>

namespace hitab {

KeyCodec::KeyCodec(std::uint32_t bits, std::uint32_t count)
    : char_bits(bits), char_count(count) {
    if (bits < 1 || count < 1)
        throw domain_error("KeyCodec: char_bits and char_count must be >= 1");
    if (static_cast<std::uint64_t>(bits) * count > 64)
        throw domain_error("KeyCodec: char_bits * char_count must be <= 64");
}

PositionCharSet::PositionCharSet(std::vector<PositionChar> members)
    : members_(std::move(members)) {
    std::sort(members_.begin(), members_.end());
    auto dup = std::adjacent_find(members_.begin(), members_.end());
    if (dup != members_.end())
        throw domain_error("PositionCharSet: duplicate member");
}

bool PositionCharSet::contains(const PositionChar& pc) const {
    return std::binary_search(members_.begin(), members_.end(), pc);
}

bool PositionCharSet::is_key_set() const {
    for (std::size_t i = 0; i < members_.size(); ++i)
        if (members_[i].position != i)
            return false;
    return !members_.empty();
}

std::vector<std::uint64_t> split_key(std::uint64_t key, const KeyCodec& codec) {
    if (!codec.key_in_range(key))
        throw domain_error("split_key: key out of range for codec");
    std::vector<std::uint64_t> chars(codec.char_count);
    for (std::uint32_t i = 0; i < codec.char_count; ++i)
        chars[i] = (key >> (i * codec.char_bits)) & codec.char_mask();
    return chars;
}

std::uint64_t join_key(const std::vector<std::uint64_t>& chars, const KeyCodec& codec) {
    if (chars.size() != codec.char_count)
        throw domain_error("join_key: wrong character count");
    std::uint64_t key = 0;
    for (std::uint32_t i = 0; i < codec.char_count; ++i) {
        if (chars[i] & ~codec.char_mask())
            throw domain_error("join_key: character out of range");
        key |= chars[i] << (i * codec.char_bits);
    }
    return key;
}

PositionCharSet key_to_set(std::uint64_t key, const KeyCodec& codec) {
    auto chars = split_key(key, codec);
    std::vector<PositionChar> members(chars.size());
    for (std::size_t i = 0; i < chars.size(); ++i)
        members[i] = {static_cast<std::uint32_t>(i), chars[i]};
    return PositionCharSet(std::move(members));
}

PositionCharSet symmetric_difference(const PositionCharSet& x, const PositionCharSet& y) {
    if (!x.is_key_set() || !y.is_key_set() || x.size() != y.size())
        throw domain_error("symmetric_difference: sets do not represent keys of one codec");
    std::vector<PositionChar> out;
    std::set_symmetric_difference(x.members().begin(), x.members().end(),
                                  y.members().begin(), y.members().end(),
                                  std::back_inserter(out));
    return PositionCharSet(std::move(out));
}

} // namespace hitab
