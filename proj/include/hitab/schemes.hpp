#pragma once
// Composed hash constructions: double tabulation, the three concrete
// presets (including triple tabulation for 64-bit keys), the recursive
// plan and evaluator, and the Mersenne-prime polynomial baseline.

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hitab/tabulation.hpp"

namespace hitab {

// r∘h: a simple tabulation h into d intermediate characters over Psi,
// composed with an independent simple tabulation r into R = [2^range_bits].
class DoubleTabulation {
public:
    // Both levels generated from sub-seeds derived from `seed`
    // (level 0 / expander, level 1 / compressor).
    static DoubleTabulation create(std::uint32_t in_bits, std::uint32_t in_count,
                                   std::uint32_t d, std::uint32_t psi_bits,
                                   std::uint32_t range_bits, std::uint64_t seed,
                                   std::uint64_t mem_budget = default_mem_budget());
    static DoubleTabulation create(const KeyCodec& codec, std::uint32_t d,
                                   std::uint32_t psi_bits, std::uint32_t range_bits,
                                   std::uint64_t seed,
                                   std::uint64_t mem_budget = default_mem_budget());

    // Wires two existing levels; first's output params must equal second's
    // input params.
    static DoubleTabulation from_parts(SimpleTabulation first, SimpleTabulation second);

    std::uint64_t eval(std::uint64_t key) const; // second(first(key)); c+d lookups

    const SimpleTabulation& first() const { return first_; }
    const SimpleTabulation& second() const { return second_; }
    std::uint32_t key_bits() const { return first_.params().key_bits(); }
    std::uint32_t range_bits() const { return second_.params().packed_bits(); }
    std::uint64_t lookups_per_eval() const {
        return first_.params().in_char_count + second_.params().in_char_count;
    }

    friend bool operator==(const DoubleTabulation&, const DoubleTabulation&) = default;

private:
    DoubleTabulation(SimpleTabulation first, SimpleTabulation second)
        : first_(std::move(first)), second_(std::move(second)) {}

    SimpleTabulation first_;
    SimpleTabulation second_;
};

// Same function as DoubleTabulation::create(...).eval(key), computed
// straight off the generator stream without materializing tables. Lets
// statistical tests draw many independently seeded schemes cheaply.
std::uint64_t double_eval_at_seed(std::uint32_t in_bits, std::uint32_t in_count,
                                  std::uint32_t d, std::uint32_t psi_bits,
                                  std::uint32_t range_bits, std::uint64_t seed,
                                  std::uint64_t key);

// The 64-bit-key triple construction: one level widening 4x16-bit input
// characters into 14 32-bit characters, one shared level expanding each
// 32-bit character into 20 16-bit characters, and a bottom simple
// tabulation over all 14*20 = 280 characters.
class TripleTabulation {
public:
    static constexpr std::uint32_t kLevel0Out = 14;  // d, 32-bit characters
    static constexpr std::uint32_t kLevel1Out = 20;  // per 32-bit character
    static constexpr std::uint32_t kBottomIn = kLevel0Out * kLevel1Out;

    static TripleTabulation create(std::uint32_t range_bits, std::uint64_t seed,
                                   std::uint64_t mem_budget = default_mem_budget());
    static TripleTabulation from_parts(SimpleTabulation level0, SimpleTabulation level1,
                                       SimpleTabulation bottom);

    std::uint64_t eval(std::uint64_t key) const; // 4 + 14*2 + 280 = 312 lookups

    const SimpleTabulation& level0() const { return level0_; }
    const SimpleTabulation& level1() const { return level1_; }
    const SimpleTabulation& bottom() const { return bottom_; }
    std::uint32_t key_bits() const { return 64; }
    std::uint32_t range_bits() const { return bottom_.params().packed_bits(); }
    std::uint64_t lookups_per_eval() const { return 4 + kLevel0Out * 2 + kBottomIn; }

    friend bool operator==(const TripleTabulation&, const TripleTabulation&) = default;

private:
    TripleTabulation(SimpleTabulation l0, SimpleTabulation l1, SimpleTabulation bottom)
        : level0_(std::move(l0)), level1_(std::move(l1)), bottom_(std::move(bottom)) {}

    SimpleTabulation level0_;
    SimpleTabulation level1_;
    SimpleTabulation bottom_;
};

// The recursion schedule behind the u^{Omega(1/c)}-independence
// construction: levels halve the key width, each level widens c_(i)
// characters into d_(i) = 12*c_(i), and the bottom holds one table per
// output character of the whole recursion.
struct RecursivePlan {
    std::uint32_t requested_chars = 0; // c
    std::uint32_t key_bits = 0;        // lg2 u
    std::uint32_t levels = 0;          // l = ceil(lg2 c) + 1
    std::uint32_t padded_chars = 0;    // c' = 2^l
    std::uint32_t char_bits = 0;       // lg2 |Phi| = key_bits / c'
    std::vector<std::uint32_t> in_counts;  // c_(i) = c' / 2^i
    std::vector<std::uint32_t> out_counts; // d_(i) = 12 * c_(i)
    std::vector<std::uint32_t> out_bits;   // lg2 |Psi_(i)| = key_bits / 2^(i+1)
    std::uint64_t bottom_table_count = 0;  // D = prod d_(i)
    std::uint64_t target_uniqueness = 0;   // floor(u^(1/(10 c')))

    // Rejects key widths where u^(1/c') is not a power of two.
    static RecursivePlan make(std::uint32_t c, std::uint32_t key_bits);

    std::uint64_t table_bytes(std::uint32_t range_bits) const;
    std::uint64_t lookups_per_eval() const;

    friend bool operator==(const RecursivePlan&, const RecursivePlan&) = default;
};

class RecursiveTabulation {
public:
    static RecursiveTabulation create(const RecursivePlan& plan, std::uint32_t range_bits,
                                      std::uint64_t seed,
                                      std::uint64_t mem_budget = default_mem_budget());
    static RecursiveTabulation from_parts(RecursivePlan plan,
                                          std::vector<SimpleTabulation> levels,
                                          SimpleTabulation bottom);

    // Depth-first: each intermediate character is expanded by the next
    // level's shared function; bottom tables are XORed in expansion order.
    std::uint64_t eval(std::uint64_t key) const;

    const RecursivePlan& plan() const { return plan_; }
    const std::vector<SimpleTabulation>& levels() const { return levels_; }
    const SimpleTabulation& bottom() const { return bottom_; }
    std::uint32_t key_bits() const { return plan_.key_bits; }
    std::uint32_t range_bits() const { return bottom_.params().packed_bits(); }
    std::uint64_t lookups_per_eval() const { return plan_.lookups_per_eval(); }

    friend bool operator==(const RecursiveTabulation&, const RecursiveTabulation&) = default;

private:
    RecursiveTabulation(RecursivePlan plan, std::vector<SimpleTabulation> levels,
                        SimpleTabulation bottom)
        : plan_(std::move(plan)), levels_(std::move(levels)), bottom_(std::move(bottom)) {}

    RecursivePlan plan_;
    std::vector<SimpleTabulation> levels_;
    SimpleTabulation bottom_;
};

// Degree k-1 polynomial over Z_p, p = 2^61 - 1, masked to range_bits.
class PolynomialHash {
public:
    static constexpr std::uint64_t kPrime = (1ULL << 61) - 1;

    static PolynomialHash create(std::uint32_t coeff_count, std::uint64_t seed,
                                 std::uint32_t range_bits);
    static PolynomialHash from_coefficients(std::vector<std::uint64_t> coeffs,
                                            std::uint32_t range_bits,
                                            std::uint64_t seed = 0);

    std::uint64_t eval(std::uint64_t key) const; // Horner with Mersenne folding

    const std::vector<std::uint64_t>& coefficients() const { return coeffs_; }
    std::uint32_t key_bits() const { return 61; }
    std::uint32_t range_bits() const { return range_bits_; }
    std::uint64_t seed() const { return seed_; }
    std::uint64_t lookups_per_eval() const { return 0; }

    static std::uint64_t mulmod(std::uint64_t a, std::uint64_t b);
    static std::uint64_t addmod(std::uint64_t a, std::uint64_t b);

    friend bool operator==(const PolynomialHash&, const PolynomialHash&) = default;

private:
    PolynomialHash(std::vector<std::uint64_t> coeffs, std::uint32_t range_bits,
                   std::uint64_t seed)
        : coeffs_(std::move(coeffs)), range_bits_(range_bits), seed_(seed) {}

    std::vector<std::uint64_t> coeffs_; // a_0 .. a_{k-1}
    std::uint32_t range_bits_ = 0;
    std::uint64_t seed_ = 0;
};

// Any persisted scheme; what the CLI reads back from an HSCH container.
class AnyScheme {
public:
    using Variant =
        std::variant<DoubleTabulation, TripleTabulation, RecursiveTabulation, PolynomialHash>;

    AnyScheme(DoubleTabulation s) : v_(std::move(s)) {}
    AnyScheme(TripleTabulation s) : v_(std::move(s)) {}
    AnyScheme(RecursiveTabulation s) : v_(std::move(s)) {}
    AnyScheme(PolynomialHash s) : v_(std::move(s)) {}

    std::uint64_t eval(std::uint64_t key) const;
    std::uint32_t key_bits() const;
    std::uint32_t range_bits() const;
    std::uint64_t lookups_per_eval() const;
    std::string kind() const;

    // "HSCH" envelope with nested HTAB containers (or the coefficient list
    // for the polynomial baseline) and a trailing CRC.
    std::vector<std::uint8_t> serialize() const;
    static AnyScheme deserialize(std::span<const std::uint8_t> bytes,
                                 std::uint64_t mem_budget = default_mem_budget());

    const Variant& variant() const { return v_; }

private:
    Variant v_;
};

// Certified parameter presets for 100-independent hashing.
struct Preset {
    std::string name;            // "32-2", "64-3", "64-4-triple"
    std::uint32_t in_bits;       // lg2 |Phi|
    std::uint32_t in_count;      // c
    std::uint32_t d;             // intermediate characters
    std::uint32_t psi_bits;      // lg2 |Psi|
    std::uint32_t claimed_uniqueness;   // 100
    std::string claimed_failure_bound;  // decimal, as published
    bool triple;
};

const std::vector<Preset>& presets();
const Preset* find_preset(const std::string& name);
AnyScheme make_preset(const std::string& name, std::uint64_t seed,
                      std::uint32_t range_bits = 64,
                      std::uint64_t mem_budget = default_mem_budget());

} // namespace hitab
