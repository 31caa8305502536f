#include "hitab/schemes.hpp"

#include <bit>

#include "hitab/numeric.hpp"

namespace hitab {

namespace {

void require(bool ok, const char* what) {
    if (!ok)
        throw domain_error(what);
}

} // namespace

// ---------------------------------------------------------------- double --

DoubleTabulation DoubleTabulation::create(std::uint32_t in_bits, std::uint32_t in_count,
                                          std::uint32_t d, std::uint32_t psi_bits,
                                          std::uint32_t range_bits, std::uint64_t seed,
                                          std::uint64_t mem_budget) {
    require(range_bits >= 1 && range_bits <= 64, "double: range_bits must be in [1,64]");
    TabulationParams fp(in_bits, in_count, psi_bits, d);
    TabulationParams sp(psi_bits, d, range_bits, 1);
    const std::uint64_t need = fp.table_bytes() + sp.table_bytes();
    if (need > mem_budget)
        throw resource_error("double: tables need " + std::to_string(need) +
                             " bytes, budget is " + std::to_string(mem_budget));
    auto first = SimpleTabulation::generate(fp, derive_subseed(seed, 0, kRoleExpander),
                                            mem_budget);
    auto second = SimpleTabulation::generate(sp, derive_subseed(seed, 1, kRoleCompressor),
                                             mem_budget);
    return DoubleTabulation(std::move(first), std::move(second));
}

DoubleTabulation DoubleTabulation::create(const KeyCodec& codec, std::uint32_t d,
                                          std::uint32_t psi_bits, std::uint32_t range_bits,
                                          std::uint64_t seed, std::uint64_t mem_budget) {
    return create(codec.char_bits, codec.char_count, d, psi_bits, range_bits, seed,
                  mem_budget);
}

DoubleTabulation DoubleTabulation::from_parts(SimpleTabulation first,
                                              SimpleTabulation second) {
    require(first.params().out_char_bits == second.params().in_char_bits &&
                first.params().out_char_count == second.params().in_char_count,
            "double: first level output params must equal second level input params");
    require(second.params().packed_bits() <= 64, "double: range wider than 64 bits");
    return DoubleTabulation(std::move(first), std::move(second));
}

std::uint64_t DoubleTabulation::eval(std::uint64_t key) const {
    thread_local std::vector<std::uint64_t> mid;
    thread_local std::vector<std::uint64_t> chars;
    const TabulationParams& fp = first_.params();
    mid.resize(fp.words_per_entry());
    first_.eval_into(key, mid);
    chars.resize(fp.out_char_count);
    for (std::uint32_t j = 0; j < fp.out_char_count; ++j)
        chars[j] = packed_get_char(mid, j, fp.out_char_bits);
    return second_.eval_chars64(chars);
}

std::uint64_t double_eval_at_seed(std::uint32_t in_bits, std::uint32_t in_count,
                                  std::uint32_t d, std::uint32_t psi_bits,
                                  std::uint32_t range_bits, std::uint64_t seed,
                                  std::uint64_t key) {
    TabulationParams fp(in_bits, in_count, psi_bits, d);
    TabulationParams sp(psi_bits, d, range_bits, 1);
    if (!fp.key_in_range(key))
        throw domain_error("double_eval_at_seed: key out of range");
    const std::uint64_t s1 = derive_subseed(seed, 0, kRoleExpander);
    const std::uint64_t s2 = derive_subseed(seed, 1, kRoleCompressor);
    thread_local std::vector<std::uint64_t> mid;
    mid.assign(fp.words_per_entry(), 0);
    const std::uint64_t mask = fp.in_char_mask();
    for (std::uint32_t i = 0; i < in_count; ++i) {
        const std::uint32_t shift = i * in_bits;
        const std::uint64_t ch = shift >= 64 ? 0 : (key >> shift) & mask;
        for (std::uint32_t w = 0; w < fp.words_per_entry(); ++w)
            mid[w] ^= SimpleTabulation::generated_word(fp, s1, i, ch, w);
    }
    std::uint64_t h = 0;
    for (std::uint32_t j = 0; j < d; ++j) {
        const std::uint64_t ch = packed_get_char(mid, j, psi_bits);
        h ^= SimpleTabulation::generated_word(sp, s2, j, ch, 0);
    }
    return h;
}

// ---------------------------------------------------------------- triple --

TripleTabulation TripleTabulation::create(std::uint32_t range_bits, std::uint64_t seed,
                                          std::uint64_t mem_budget) {
    require(range_bits >= 1 && range_bits <= 64, "triple: range_bits must be in [1,64]");
    TabulationParams p0(16, 4, 32, kLevel0Out);
    TabulationParams p1(16, 2, 16, kLevel1Out);
    TabulationParams pb(16, kBottomIn, range_bits, 1);
    const std::uint64_t need = p0.table_bytes() + p1.table_bytes() + pb.table_bytes();
    if (need > mem_budget)
        throw resource_error("triple: tables need " + std::to_string(need) +
                             " bytes, budget is " + std::to_string(mem_budget));
    auto l0 = SimpleTabulation::generate(p0, derive_subseed(seed, 0, kRoleExpander),
                                         mem_budget);
    auto l1 = SimpleTabulation::generate(p1, derive_subseed(seed, 1, kRoleExpander),
                                         mem_budget);
    auto bottom = SimpleTabulation::generate(pb, derive_subseed(seed, 2, kRoleBottom),
                                             mem_budget);
    return TripleTabulation(std::move(l0), std::move(l1), std::move(bottom));
}

TripleTabulation TripleTabulation::from_parts(SimpleTabulation level0,
                                              SimpleTabulation level1,
                                              SimpleTabulation bottom) {
    require(level0.params().in_char_bits == 16 && level0.params().in_char_count == 4 &&
                level0.params().out_char_bits == 32 &&
                level0.params().out_char_count == kLevel0Out,
            "triple: level 0 shape mismatch");
    require(level1.params().in_char_bits == 16 && level1.params().in_char_count == 2 &&
                level1.params().out_char_bits == 16 &&
                level1.params().out_char_count == kLevel1Out,
            "triple: level 1 shape mismatch");
    require(bottom.params().in_char_bits == 16 &&
                bottom.params().in_char_count == kBottomIn &&
                bottom.params().out_char_count == 1,
            "triple: bottom shape mismatch");
    return TripleTabulation(std::move(level0), std::move(level1), std::move(bottom));
}

std::uint64_t TripleTabulation::eval(std::uint64_t key) const {
    thread_local std::vector<std::uint64_t> mid0;
    thread_local std::vector<std::uint64_t> mid1;
    thread_local std::vector<std::uint64_t> chars;
    mid0.resize(level0_.params().words_per_entry());
    level0_.eval_into(key, mid0);
    mid1.resize(level1_.params().words_per_entry());
    chars.resize(kBottomIn);
    std::size_t n = 0;
    for (std::uint32_t j = 0; j < kLevel0Out; ++j) {
        const std::uint64_t mid32 = packed_get_char(mid0, j, 32);
        level1_.eval_into(mid32, mid1);
        for (std::uint32_t i = 0; i < kLevel1Out; ++i)
            chars[n++] = packed_get_char(mid1, i, 16);
    }
    return bottom_.eval_chars64(chars);
}

// ------------------------------------------------------------- recursive --

RecursivePlan RecursivePlan::make(std::uint32_t c, std::uint32_t key_bits) {
    require(c >= 1, "recursive plan: need c >= 1");
    require(key_bits >= 1 && key_bits <= 64, "recursive plan: key_bits must be in [1,64]");
    const std::uint32_t levels = std::bit_width(c - 1) + 1; // ceil(lg2 c) + 1
    const std::uint32_t padded = 1u << levels;
    // u^(1/c') must be a power of two, i.e. c' must divide the key width
    if (key_bits % padded != 0)
        throw domain_error("recursive plan: key_bits must be divisible by c' = " +
                           std::to_string(padded));
    RecursivePlan plan;
    plan.requested_chars = c;
    plan.key_bits = key_bits;
    plan.levels = levels;
    plan.padded_chars = padded;
    plan.char_bits = key_bits / padded;
    plan.bottom_table_count = 1;
    for (std::uint32_t i = 0; i < levels; ++i) {
        plan.in_counts.push_back(padded >> i);
        plan.out_counts.push_back(12 * (padded >> i));
        plan.out_bits.push_back(key_bits >> (i + 1));
        plan.bottom_table_count *= plan.out_counts.back();
    }
    plan.target_uniqueness = floor_root_of_pow2(key_bits, 10 * padded);
    return plan;
}

std::uint64_t RecursivePlan::table_bytes(std::uint32_t range_bits) const {
    std::uint64_t total = 0;
    for (std::uint32_t i = 0; i < levels; ++i)
        total += TabulationParams(char_bits, in_counts[i], out_bits[i], out_counts[i])
                     .table_bytes();
    total += TabulationParams(char_bits, static_cast<std::uint32_t>(bottom_table_count),
                              range_bits, 1)
                 .table_bytes();
    return total;
}

std::uint64_t RecursivePlan::lookups_per_eval() const {
    // level i runs once per intermediate character above it
    std::uint64_t total = 0, invocations = 1;
    for (std::uint32_t i = 0; i < levels; ++i) {
        total += invocations * in_counts[i];
        invocations *= out_counts[i];
    }
    return total + invocations; // bottom: one lookup per output character
}

RecursiveTabulation RecursiveTabulation::create(const RecursivePlan& plan,
                                                std::uint32_t range_bits,
                                                std::uint64_t seed,
                                                std::uint64_t mem_budget) {
    require(range_bits >= 1 && range_bits <= 64, "recursive: range_bits must be in [1,64]");
    const std::uint64_t need = plan.table_bytes(range_bits);
    if (need > mem_budget)
        throw resource_error("recursive: tables need " + std::to_string(need) +
                             " bytes, budget is " + std::to_string(mem_budget));
    std::vector<SimpleTabulation> levels;
    for (std::uint32_t i = 0; i < plan.levels; ++i) {
        TabulationParams p(plan.char_bits, plan.in_counts[i], plan.out_bits[i],
                           plan.out_counts[i]);
        levels.push_back(
            SimpleTabulation::generate(p, derive_subseed(seed, i, kRoleExpander), mem_budget));
    }
    TabulationParams pb(plan.char_bits, static_cast<std::uint32_t>(plan.bottom_table_count),
                        range_bits, 1);
    auto bottom = SimpleTabulation::generate(pb, derive_subseed(seed, plan.levels, kRoleBottom),
                                             mem_budget);
    return RecursiveTabulation(plan, std::move(levels), std::move(bottom));
}

RecursiveTabulation RecursiveTabulation::from_parts(RecursivePlan plan,
                                                    std::vector<SimpleTabulation> levels,
                                                    SimpleTabulation bottom) {
    require(levels.size() == plan.levels, "recursive: level count mismatch");
    for (std::uint32_t i = 0; i < plan.levels; ++i) {
        const TabulationParams expect(plan.char_bits, plan.in_counts[i], plan.out_bits[i],
                                      plan.out_counts[i]);
        require(levels[i].params() == expect, "recursive: level shape mismatch");
    }
    require(bottom.params().in_char_bits == plan.char_bits &&
                bottom.params().in_char_count == plan.bottom_table_count &&
                bottom.params().out_char_count == 1,
            "recursive: bottom shape mismatch");
    return RecursiveTabulation(std::move(plan), std::move(levels), std::move(bottom));
}

std::uint64_t RecursiveTabulation::eval(std::uint64_t key) const {
    if (!levels_[0].params().key_in_range(key))
        throw domain_error("recursive eval: key out of range");
    thread_local std::vector<std::vector<std::uint64_t>> scratch;
    if (scratch.size() < levels_.size())
        scratch.resize(levels_.size());
    const std::uint64_t* bottom_words = bottom_.words().data();
    const std::uint64_t bottom_entries = bottom_.params().entries_per_table();
    auto& lc = lookup_counter();
    std::uint64_t cursor = 0;
    std::uint64_t h = 0;
    auto walk = [&](auto&& self, std::uint32_t level, std::uint64_t value) -> void {
        if (level == levels_.size()) {
            ++lc;
            h ^= bottom_words[cursor++ * bottom_entries + value];
            return;
        }
        const SimpleTabulation& f = levels_[level];
        auto& buf = scratch[level];
        buf.resize(f.params().words_per_entry());
        f.eval_into(value, buf);
        const std::uint32_t d = f.params().out_char_count;
        const std::uint32_t ob = f.params().out_char_bits;
        for (std::uint32_t j = 0; j < d; ++j)
            self(self, level + 1, packed_get_char(buf, j, ob));
    };
    walk(walk, 0, key);
    return h;
}

// ------------------------------------------------------------ polynomial --

std::uint64_t PolynomialHash::mulmod(std::uint64_t a, std::uint64_t b) {
    const unsigned __int128 t = static_cast<unsigned __int128>(a) * b;
    std::uint64_t s = (static_cast<std::uint64_t>(t) & kPrime) +
                      static_cast<std::uint64_t>(t >> 61);
    if (s >= kPrime)
        s -= kPrime;
    return s;
}

std::uint64_t PolynomialHash::addmod(std::uint64_t a, std::uint64_t b) {
    std::uint64_t s = a + b;
    if (s >= kPrime)
        s -= kPrime;
    return s;
}

PolynomialHash PolynomialHash::create(std::uint32_t coeff_count, std::uint64_t seed,
                                      std::uint32_t range_bits) {
    require(coeff_count >= 1, "poly: need at least one coefficient");
    require(range_bits >= 1 && range_bits <= 61, "poly: range_bits must be in [1,61]");
    std::vector<std::uint64_t> coeffs(coeff_count);
    for (std::uint32_t i = 0; i < coeff_count; ++i) {
        for (std::uint32_t w = 0;; ++w) {
            const std::uint64_t v = stream_word(seed, 0, i, w) & kPrime;
            if (v < kPrime) { // rejects only the all-ones pattern
                coeffs[i] = v;
                break;
            }
        }
    }
    return PolynomialHash(std::move(coeffs), range_bits, seed);
}

PolynomialHash PolynomialHash::from_coefficients(std::vector<std::uint64_t> coeffs,
                                                 std::uint32_t range_bits,
                                                 std::uint64_t seed) {
    require(!coeffs.empty(), "poly: need at least one coefficient");
    require(range_bits >= 1 && range_bits <= 61, "poly: range_bits must be in [1,61]");
    for (std::uint64_t a : coeffs)
        require(a < kPrime, "poly: coefficient not in the prime field");
    return PolynomialHash(std::move(coeffs), range_bits, seed);
}

std::uint64_t PolynomialHash::eval(std::uint64_t key) const {
    if (key >= kPrime)
        throw domain_error("poly eval: key must be smaller than 2^61 - 1");
    std::uint64_t acc = 0;
    for (std::size_t i = coeffs_.size(); i-- > 0;)
        acc = addmod(mulmod(acc, key), coeffs_[i]);
    const std::uint64_t mask = range_bits_ >= 64 ? ~0ULL : (1ULL << range_bits_) - 1;
    return acc & mask;
}

// ------------------------------------------------------------- container --

namespace {

constexpr char kSchMagic[4] = {'H', 'S', 'C', 'H'};
constexpr std::uint8_t kSchVersion = 1;
enum SchemeTag : std::uint8_t {
    kTagDouble = 1,
    kTagTriple = 2,
    kTagRecursive = 3,
    kTagPoly = 4,
};

} // namespace

std::uint64_t AnyScheme::eval(std::uint64_t key) const {
    return std::visit([key](const auto& s) { return s.eval(key); }, v_);
}

std::uint32_t AnyScheme::key_bits() const {
    return std::visit([](const auto& s) { return s.key_bits(); }, v_);
}

std::uint32_t AnyScheme::range_bits() const {
    return std::visit([](const auto& s) { return s.range_bits(); }, v_);
}

std::uint64_t AnyScheme::lookups_per_eval() const {
    return std::visit([](const auto& s) { return s.lookups_per_eval(); }, v_);
}

std::string AnyScheme::kind() const {
    struct Visitor {
        std::string operator()(const DoubleTabulation&) const { return "double"; }
        std::string operator()(const TripleTabulation&) const { return "triple"; }
        std::string operator()(const RecursiveTabulation&) const { return "recursive"; }
        std::string operator()(const PolynomialHash&) const { return "poly"; }
    };
    return std::visit(Visitor{}, v_);
}

std::vector<std::uint8_t> AnyScheme::serialize() const {
    ByteWriter out;
    out.raw(std::span<const std::uint8_t>(
        reinterpret_cast<const std::uint8_t*>(kSchMagic), 4));
    out.u8(kSchVersion);
    struct Visitor {
        ByteWriter& out;
        void operator()(const DoubleTabulation& s) const {
            out.u8(kTagDouble);
            s.first().serialize_into(out);
            s.second().serialize_into(out);
        }
        void operator()(const TripleTabulation& s) const {
            out.u8(kTagTriple);
            s.level0().serialize_into(out);
            s.level1().serialize_into(out);
            s.bottom().serialize_into(out);
        }
        void operator()(const RecursiveTabulation& s) const {
            out.u8(kTagRecursive);
            out.u32le(s.plan().requested_chars);
            out.u32le(s.plan().key_bits);
            for (const auto& level : s.levels())
                level.serialize_into(out);
            s.bottom().serialize_into(out);
        }
        void operator()(const PolynomialHash& s) const {
            out.u8(kTagPoly);
            out.u32le(s.range_bits());
            out.u32le(static_cast<std::uint32_t>(s.coefficients().size()));
            out.u64le(s.seed());
            for (std::uint64_t a : s.coefficients())
                out.u64le(a);
        }
    };
    std::visit(Visitor{out}, v_);
    out.finish_with_crc();
    return out.take();
}

AnyScheme AnyScheme::deserialize(std::span<const std::uint8_t> bytes,
                                 std::uint64_t mem_budget) {
    ByteReader in(bytes);
    in.expect_magic(kSchMagic, "HSCH");
    const std::uint8_t version = in.u8();
    if (version != kSchVersion)
        throw bad_version_error("HSCH: unsupported version " + std::to_string(version));
    const std::uint8_t tag = in.u8();
    auto parse_tab = [&](std::uint64_t& budget) {
        auto t = SimpleTabulation::deserialize_from(in, budget);
        const std::uint64_t used = t.params().table_bytes();
        budget = used > budget ? 0 : budget - used;
        return t;
    };
    std::optional<AnyScheme> result;
    std::uint64_t budget = mem_budget;
    switch (tag) {
    case kTagDouble: {
        auto first = parse_tab(budget);
        auto second = parse_tab(budget);
        result = AnyScheme(DoubleTabulation::from_parts(std::move(first), std::move(second)));
        break;
    }
    case kTagTriple: {
        auto l0 = parse_tab(budget);
        auto l1 = parse_tab(budget);
        auto bottom = parse_tab(budget);
        result = AnyScheme(
            TripleTabulation::from_parts(std::move(l0), std::move(l1), std::move(bottom)));
        break;
    }
    case kTagRecursive: {
        const std::uint32_t c = in.u32le();
        const std::uint32_t key_bits = in.u32le();
        auto plan = RecursivePlan::make(c, key_bits);
        std::vector<SimpleTabulation> levels;
        for (std::uint32_t i = 0; i < plan.levels; ++i)
            levels.push_back(parse_tab(budget));
        auto bottom = parse_tab(budget);
        result = AnyScheme(RecursiveTabulation::from_parts(std::move(plan), std::move(levels),
                                                           std::move(bottom)));
        break;
    }
    case kTagPoly: {
        const std::uint32_t range_bits = in.u32le();
        const std::uint32_t count = in.u32le();
        const std::uint64_t seed = in.u64le();
        if (count > (1u << 20))
            throw parse_error("HSCH: implausible coefficient count");
        std::vector<std::uint64_t> coeffs(count);
        for (auto& a : coeffs)
            a = in.u64le();
        result = AnyScheme(PolynomialHash::from_coefficients(std::move(coeffs), range_bits, seed));
        break;
    }
    default:
        throw parse_error("HSCH: unknown scheme tag " + std::to_string(tag));
    }
    in.verify_crc_since(0, "HSCH");
    if (in.remaining() != 0)
        throw parse_error("HSCH: trailing bytes after container");
    return *result;
}

// --------------------------------------------------------------- presets --

const std::vector<Preset>& presets() {
    static const std::vector<Preset> list = {
        {"32-2", 16, 2, 20, 16, 100, "1.5e-42", false},
        {"64-3", 22, 3, 24, 22, 100, "1.4e-49", false},
        {"64-4-triple", 16, 4, 14, 32, 100, "9.0e-36", true},
    };
    return list;
}

const Preset* find_preset(const std::string& name) {
    for (const auto& p : presets())
        if (p.name == name)
            return &p;
    return nullptr;
}

AnyScheme make_preset(const std::string& name, std::uint64_t seed,
                      std::uint32_t range_bits, std::uint64_t mem_budget) {
    const Preset* p = find_preset(name);
    if (!p)
        throw domain_error("unknown preset: " + name);
    if (p->triple)
        return AnyScheme(TripleTabulation::create(range_bits, seed, mem_budget));
    return AnyScheme(DoubleTabulation::create(p->in_bits, p->in_count, p->d, p->psi_bits,
                                              range_bits, seed, mem_budget));
}

} // namespace hitab
