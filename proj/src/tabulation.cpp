#include "hitab/tabulation.hpp"

#include <cstdlib>
#include <string>

namespace hitab {

std::uint64_t default_mem_budget() {
    static const std::uint64_t value = [] {
        const char* env = std::getenv("HITAB_MEM_BUDGET");
        if (!env || !*env)
            return 1ULL << 30;
        char* end = nullptr;
        std::uint64_t v = std::strtoull(env, &end, 10);
        switch (end && *end ? *end : '\0') {
        case 'K': case 'k': v <<= 10; break;
        case 'M': case 'm': v <<= 20; break;
        case 'G': case 'g': v <<= 30; break;
        default: break;
        }
        return v ? v : 1ULL << 30;
    }();
    return value;
}

TabulationParams::TabulationParams(std::uint32_t in_bits, std::uint32_t in_count,
                                   std::uint32_t out_bits, std::uint32_t out_count)
    : in_char_bits(in_bits), in_char_count(in_count),
      out_char_bits(out_bits), out_char_count(out_count) {
    if (in_bits < 1 || in_bits > 63)
        throw domain_error("TabulationParams: input character bits must be in [1,63]");
    if (in_count < 1)
        throw domain_error("TabulationParams: need at least one input character");
    if (out_bits < 1 || out_bits > 64)
        throw domain_error("TabulationParams: output character bits must be in [1,64]");
    if (out_count < 1)
        throw domain_error("TabulationParams: need at least one output character");
    if (static_cast<std::uint64_t>(out_bits) * out_count > (1ULL << 20))
        throw domain_error("TabulationParams: packed output too wide");
}

std::uint64_t packed_get_char(std::span<const std::uint64_t> words, std::uint32_t j,
                              std::uint32_t out_char_bits) {
    const std::uint64_t mask =
        out_char_bits >= 64 ? ~0ULL : (1ULL << out_char_bits) - 1;
    const std::uint32_t lo = j * out_char_bits;
    const std::uint32_t w = lo / 64, off = lo % 64;
    std::uint64_t v = words[w] >> off;
    if (off + out_char_bits > 64)
        v |= words[w + 1] << (64 - off);
    return v & mask;
}

std::uint64_t& lookup_counter() {
    thread_local std::uint64_t count = 0;
    return count;
}

std::uint64_t SimpleTabulation::generated_word(const TabulationParams& params,
                                               std::uint64_t seed, std::uint32_t table,
                                               std::uint64_t entry, std::uint32_t word) {
    std::uint64_t v = stream_word(seed, table, entry, word);
    const std::uint32_t rem = params.packed_bits() % 64;
    if (rem != 0 && word == params.words_per_entry() - 1)
        v &= (1ULL << rem) - 1;
    return v;
}

SimpleTabulation SimpleTabulation::generate(const TabulationParams& params,
                                            std::uint64_t seed, std::uint64_t mem_budget) {
    if (params.table_bytes() > mem_budget)
        throw resource_error("generate: tables need " + std::to_string(params.table_bytes()) +
                             " bytes, budget is " + std::to_string(mem_budget));
    const std::uint32_t wpe = params.words_per_entry();
    const std::uint64_t per_table = params.entries_per_table();
    std::vector<std::uint64_t> words(params.in_char_count * per_table * wpe);
    const std::uint32_t rem = params.packed_bits() % 64;
    const std::uint64_t tail_mask = rem ? (1ULL << rem) - 1 : ~0ULL;
    std::size_t idx = 0;
    for (std::uint32_t t = 0; t < params.in_char_count; ++t) {
        TableStream stream(seed, t);
        for (std::uint64_t e = 0; e < per_table; ++e) {
            for (std::uint32_t w = 0; w < wpe; ++w)
                words[idx++] = stream.word(e, w);
            words[idx - 1] &= tail_mask;
        }
    }
    return SimpleTabulation(params, seed, std::move(words));
}

SimpleTabulation SimpleTabulation::from_tables(const TabulationParams& params,
                                               std::vector<std::uint64_t> words,
                                               std::uint64_t seed) {
    const std::uint64_t expect = params.table_bytes() / 8;
    if (words.size() != expect)
        throw domain_error("from_tables: expected " + std::to_string(expect) + " words");
    const std::uint32_t rem = params.packed_bits() % 64;
    if (rem) {
        const std::uint64_t tail_mask = (1ULL << rem) - 1;
        const std::uint32_t wpe = params.words_per_entry();
        for (std::size_t i = wpe - 1; i < words.size(); i += wpe)
            if (words[i] & ~tail_mask)
                throw domain_error("from_tables: entry exceeds packed width");
    }
    return SimpleTabulation(params, seed, std::move(words));
}

std::span<const std::uint64_t> SimpleTabulation::entry(std::uint32_t table,
                                                       std::uint64_t e) const {
    const std::uint32_t wpe = params_.words_per_entry();
    return {words_.data() + (table * params_.entries_per_table() + e) * wpe, wpe};
}

void SimpleTabulation::eval_into(std::uint64_t key, std::span<std::uint64_t> out) const {
    if (!params_.key_in_range(key))
        throw domain_error("eval: key out of range");
    const std::uint32_t wpe = params_.words_per_entry();
    const std::uint64_t mask = params_.in_char_mask();
    const std::uint32_t b = params_.in_char_bits;
    auto& lc = lookup_counter();
    for (std::uint32_t w = 0; w < wpe; ++w)
        out[w] = 0;
    for (std::uint32_t i = 0; i < params_.in_char_count; ++i) {
        const std::uint32_t shift = i * b;
        const std::uint64_t ch = shift >= 64 ? 0 : (key >> shift) & mask;
        const std::uint64_t* e = words_.data() + (i * params_.entries_per_table() + ch) * wpe;
        ++lc;
        for (std::uint32_t w = 0; w < wpe; ++w)
            out[w] ^= e[w];
    }
}

std::vector<std::uint64_t> SimpleTabulation::eval(std::uint64_t key) const {
    std::vector<std::uint64_t> out(params_.words_per_entry());
    eval_into(key, out);
    return out;
}

std::uint64_t SimpleTabulation::eval64(std::uint64_t key) const {
    if (params_.packed_bits() > 64)
        throw domain_error("eval64: packed output wider than 64 bits");
    if (!params_.key_in_range(key))
        throw domain_error("eval: key out of range");
    const std::uint64_t mask = params_.in_char_mask();
    const std::uint32_t b = params_.in_char_bits;
    const std::uint64_t per_table = params_.entries_per_table();
    auto& lc = lookup_counter();
    std::uint64_t h = 0;
    for (std::uint32_t i = 0; i < params_.in_char_count; ++i) {
        const std::uint32_t shift = i * b;
        const std::uint64_t ch = shift >= 64 ? 0 : (key >> shift) & mask;
        ++lc;
        h ^= words_[i * per_table + ch];
    }
    return h;
}

void SimpleTabulation::eval_chars_into(std::span<const std::uint64_t> chars,
                                       std::span<std::uint64_t> out) const {
    if (chars.size() != params_.in_char_count)
        throw domain_error("eval_chars: wrong character count");
    const std::uint32_t wpe = params_.words_per_entry();
    auto& lc = lookup_counter();
    for (std::uint32_t w = 0; w < wpe; ++w)
        out[w] = 0;
    for (std::uint32_t i = 0; i < params_.in_char_count; ++i) {
        if (chars[i] & ~params_.in_char_mask())
            throw domain_error("eval_chars: character out of range");
        const std::uint64_t* e =
            words_.data() + (i * params_.entries_per_table() + chars[i]) * wpe;
        ++lc;
        for (std::uint32_t w = 0; w < wpe; ++w)
            out[w] ^= e[w];
    }
}

std::uint64_t SimpleTabulation::eval_chars64(std::span<const std::uint64_t> chars) const {
    if (params_.packed_bits() > 64)
        throw domain_error("eval_chars64: packed output wider than 64 bits");
    if (chars.size() != params_.in_char_count)
        throw domain_error("eval_chars: wrong character count");
    const std::uint64_t per_table = params_.entries_per_table();
    auto& lc = lookup_counter();
    std::uint64_t h = 0;
    for (std::uint32_t i = 0; i < params_.in_char_count; ++i) {
        if (chars[i] & ~params_.in_char_mask())
            throw domain_error("eval_chars: character out of range");
        ++lc;
        h ^= words_[i * per_table + chars[i]];
    }
    return h;
}

std::vector<std::uint64_t> SimpleTabulation::eval_set(const PositionCharSet& s) const {
    std::vector<std::uint64_t> out(params_.words_per_entry(), 0);
    auto& lc = lookup_counter();
    const std::uint32_t wpe = params_.words_per_entry();
    for (const auto& pc : s.members()) {
        if (pc.position >= params_.in_char_count)
            throw domain_error("eval_set: position out of range");
        if (pc.character & ~params_.in_char_mask())
            throw domain_error("eval_set: character out of range");
        const std::uint64_t* e =
            words_.data() + (pc.position * params_.entries_per_table() + pc.character) * wpe;
        ++lc;
        for (std::uint32_t w = 0; w < wpe; ++w)
            out[w] ^= e[w];
    }
    return out;
}

namespace {
constexpr char kTabMagic[4] = {'H', 'T', 'A', 'B'};
constexpr std::uint8_t kTabVersion = 1;
} // namespace

void SimpleTabulation::serialize_into(ByteWriter& out) const {
    const std::size_t start = out.bytes().size();
    out.raw(std::span<const std::uint8_t>(
        reinterpret_cast<const std::uint8_t*>(kTabMagic), 4));
    out.u8(kTabVersion);
    out.u8(kGeneratorId);
    out.u8(0);
    out.u8(0);
    out.u32le(params_.in_char_bits);
    out.u32le(params_.in_char_count);
    out.u32le(params_.out_char_bits);
    out.u32le(params_.out_char_count);
    out.u64le(seed_);
    const std::uint32_t wpe = params_.words_per_entry();
    const std::uint32_t entry_bytes = params_.entry_serialized_bytes();
    const std::uint64_t entries = params_.in_char_count * params_.entries_per_table();
    for (std::uint64_t e = 0; e < entries; ++e) {
        const std::uint64_t* w = words_.data() + e * wpe;
        std::uint32_t left = entry_bytes;
        for (std::uint32_t i = 0; i < wpe && left > 0; ++i) {
            const std::uint32_t take = left < 8 ? left : 8;
            out.uint_le(w[i], take);
            left -= take;
        }
    }
    out.u32le(crc32(std::span(out.bytes()).subspan(start)));
}

std::vector<std::uint8_t> SimpleTabulation::serialize() const {
    ByteWriter out;
    serialize_into(out);
    return out.take();
}

SimpleTabulation SimpleTabulation::deserialize_from(ByteReader& in,
                                                    std::uint64_t mem_budget) {
    const std::size_t start = in.offset();
    in.expect_magic(kTabMagic, "HTAB");
    const std::uint8_t version = in.u8();
    if (version != kTabVersion)
        throw bad_version_error("HTAB: unsupported version " + std::to_string(version));
    const std::uint8_t gen = in.u8();
    if (gen != kGeneratorId)
        throw bad_version_error("HTAB: unknown generator id " + std::to_string(gen));
    in.u8();
    in.u8();
    const std::uint32_t in_bits = in.u32le();
    const std::uint32_t in_count = in.u32le();
    const std::uint32_t out_bits = in.u32le();
    const std::uint32_t out_count = in.u32le();
    const std::uint64_t seed = in.u64le();
    TabulationParams params(in_bits, in_count, out_bits, out_count);
    if (params.table_bytes() > mem_budget)
        throw resource_error("HTAB: tables exceed memory budget");
    const std::uint32_t wpe = params.words_per_entry();
    const std::uint32_t entry_bytes = params.entry_serialized_bytes();
    const std::uint64_t entries = params.in_char_count * params.entries_per_table();
    std::vector<std::uint64_t> words(entries * wpe, 0);
    for (std::uint64_t e = 0; e < entries; ++e) {
        std::uint32_t left = entry_bytes;
        for (std::uint32_t i = 0; i < wpe && left > 0; ++i) {
            const std::uint32_t take = left < 8 ? left : 8;
            words[e * wpe + i] = in.uint_le(take);
            left -= take;
        }
    }
    in.verify_crc_since(start, "HTAB");
    return SimpleTabulation(params, seed, std::move(words));
}

SimpleTabulation SimpleTabulation::deserialize(std::span<const std::uint8_t> bytes,
                                               std::uint64_t mem_budget) {
    ByteReader in(bytes);
    auto result = deserialize_from(in, mem_budget);
    if (in.remaining() != 0)
        throw parse_error("HTAB: trailing bytes after container");
    return result;
}

} // namespace hitab
