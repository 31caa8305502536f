#pragma once
// Desk-scale ground-truth oracles: brute-force uniqueness/oddness checkers,
// exact independence verification by exhaustive enumeration of second-level
// tables, the odd-composition lemma, and a chi-square surrogate for schemes
// too large to enumerate.

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "hitab/tabulation.hpp"

namespace hitab {

// A dense tabulated function U -> Psi^d on a tiny universe.
struct ExplicitFunction {
    std::uint32_t domain_size = 0;    // |U|
    std::uint32_t out_char_count = 0; // d
    std::uint32_t out_char_bits = 0;  // lg2 |Psi|
    std::vector<std::uint64_t> values; // row-major, |U| * d characters

    std::uint64_t value(std::uint32_t x, std::uint32_t j) const {
        return values[static_cast<std::size_t>(x) * out_char_count + j];
    }
    std::uint64_t alphabet_size() const { return 1ULL << out_char_bits; }
    void validate() const;

    // f materialized from a simple tabulation over its whole key domain.
    static ExplicitFunction from_tabulation(const SimpleTabulation& st);
    // f(x)_i = x_i: the identity on position characters.
    static ExplicitFunction identity_characters(const KeyCodec& codec);
    static ExplicitFunction constant(std::uint32_t domain_size, std::uint32_t d,
                                     std::uint32_t bits, std::uint64_t value);
    static ExplicitFunction random(std::uint64_t seed, std::uint32_t domain_size,
                                   std::uint32_t d, std::uint32_t bits);
};

struct ViolationWitness {
    enum Kind { kNotUnique, kNotOdd };
    Kind kind = kNotUnique;
    std::vector<std::uint32_t> keys; // the violating set X, sorted
};

struct CheckBudgets {
    std::uint64_t max_subsets = 1ULL << 20;  // key sets enumerated
    std::uint64_t max_fillings = 1ULL << 24; // second-level table fillings
};

// Enumerates every X with 2 <= |X| <= k, size-major and lexicographic
// within a size; a set passes when some output position character is hit
// by exactly one of its keys. Returns the first violating set, if any.
std::optional<ViolationWitness> is_k_unique(const ExplicitFunction& f, std::uint32_t k,
                                            const CheckBudgets& budgets = {});

// Same enumeration; a set passes when some output position character
// occurs an odd number of times.
std::optional<ViolationWitness> is_k_odd(const ExplicitFunction& f, std::uint32_t k,
                                         const CheckBudgets& budgets = {});

struct OddCompositionResult {
    bool hypotheses_hold = false; // f and every g_i are k-odd
    bool composed_odd = false;    // F(x)_(i,j) = g_i(f(x)_i)_j is k-odd
    ExplicitFunction composed;
};

// Materializes F and checks the composition lemma instance; the lemma
// asserts composed_odd whenever hypotheses_hold.
OddCompositionResult odd_composition_check(const ExplicitFunction& f,
                                           const std::vector<ExplicitFunction>& g,
                                           std::uint32_t k,
                                           const CheckBudgets& budgets = {});

struct IndependenceResult {
    bool exact = false;
    // first key tuple whose joint distribution is not uniform, empty if none
    std::vector<std::uint32_t> failing_tuple;
};

// Enumerates ALL fillings of the d character tables r_j: Psi -> [2^r_bits]
// and counts the joint distribution of r(f(x)) over every tuple of at most
// k distinct keys; exact independence means every tuple is exactly uniform.
IndependenceResult exact_independence(const ExplicitFunction& f, std::uint32_t k,
                                      std::uint32_t r_bits,
                                      const CheckBudgets& budgets = {});

struct ChiSquareResult {
    double statistic = 0;
    double p_value = 0;
    std::uint64_t cells = 0;
    std::uint64_t trials = 0;
};

// Draws `trials` schemes from the frozen trial-seed stream, coarsens the
// joint hash tuple of `keys` to bins_per_coord per coordinate (top bits),
// and tests the joint histogram against uniform.
ChiSquareResult chi_square_independence(
    const std::function<std::function<std::uint64_t(std::uint64_t)>(std::uint64_t)>& factory,
    const std::vector<std::uint64_t>& keys, std::uint64_t trials,
    std::uint32_t bins_per_coord, std::uint32_t range_bits, std::uint64_t master_seed);

// Q(a, x): upper regularized incomplete gamma, the chi-square tail.
double regularized_gamma_q(double a, double x);

// For c = 2: checks eval(a,b) ^ eval(a,b') ^ eval(a',b) ^ eval(a',b') = 0,
// exhaustively for in_char_bits <= 4, on sampled rectangles otherwise.
bool rectangle_zero_check(const SimpleTabulation& st);

} // namespace hitab
