#include "hitab/verify.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

namespace hitab {

namespace {

// Next k-combination of {0..n-1} in lexicographic order; false when done.
bool next_combination(std::vector<std::uint32_t>& idx, std::uint32_t n) {
    const std::size_t k = idx.size();
    std::size_t i = k;
    while (i-- > 0) {
        if (idx[i] + (k - i) < n) {
            ++idx[i];
            for (std::size_t j = i + 1; j < k; ++j)
                idx[j] = idx[j - 1] + 1;
            return true;
        }
    }
    return false;
}

std::uint64_t subsets_up_to(std::uint32_t n, std::uint32_t k, std::uint64_t cap) {
    // sum_{s=2..k} C(n,s), saturating at cap+1
    std::uint64_t total = 0;
    for (std::uint32_t s = 2; s <= k && s <= n; ++s) {
        unsigned __int128 c = 1;
        for (std::uint32_t i = 1; i <= s; ++i)
            c = c * (n - s + i) / i;
        if (c > cap || (total += static_cast<std::uint64_t>(c)) > cap)
            return cap + 1;
    }
    return total;
}

// Shared subset scan; Predicate(X) returns true when the set passes.
template <typename Predicate>
std::optional<std::vector<std::uint32_t>> first_violation(const ExplicitFunction& f,
                                                          std::uint32_t k,
                                                          const CheckBudgets& budgets,
                                                          Predicate&& passes) {
    f.validate();
    const std::uint32_t n = f.domain_size;
    if (subsets_up_to(n, k, budgets.max_subsets) > budgets.max_subsets)
        throw resource_error("subset enumeration exceeds budget of " +
                             std::to_string(budgets.max_subsets) + " sets");
    for (std::uint32_t size = 2; size <= k && size <= n; ++size) {
        std::vector<std::uint32_t> x(size);
        for (std::uint32_t i = 0; i < size; ++i)
            x[i] = i;
        do {
            if (!passes(x))
                return x;
        } while (next_combination(x, n));
    }
    return std::nullopt;
}

bool has_unique_output_char(const ExplicitFunction& f, const std::vector<std::uint32_t>& x) {
    for (std::uint32_t j = 0; j < f.out_char_count; ++j) {
        for (std::size_t a = 0; a < x.size(); ++a) {
            const std::uint64_t v = f.value(x[a], j);
            bool unique = true;
            for (std::size_t b = 0; b < x.size(); ++b) {
                if (b != a && f.value(x[b], j) == v) {
                    unique = false;
                    break;
                }
            }
            if (unique)
                return true;
        }
    }
    return false;
}

bool has_odd_output_char(const ExplicitFunction& f, const std::vector<std::uint32_t>& x) {
    for (std::uint32_t j = 0; j < f.out_char_count; ++j) {
        for (std::size_t a = 0; a < x.size(); ++a) {
            const std::uint64_t v = f.value(x[a], j);
            std::size_t count = 0;
            for (std::size_t b = 0; b < x.size(); ++b)
                count += f.value(x[b], j) == v;
            if (count % 2 == 1)
                return true;
        }
    }
    return false;
}

} // namespace

void ExplicitFunction::validate() const {
    if (domain_size < 1 || out_char_count < 1 || out_char_bits < 1 || out_char_bits > 63)
        throw domain_error("explicit function: bad shape");
    if (values.size() != static_cast<std::size_t>(domain_size) * out_char_count)
        throw domain_error("explicit function: value table has wrong size");
    const std::uint64_t limit = alphabet_size();
    for (std::uint64_t v : values)
        if (v >= limit)
            throw domain_error("explicit function: character out of range");
}

ExplicitFunction ExplicitFunction::from_tabulation(const SimpleTabulation& st) {
    const TabulationParams& p = st.params();
    if (p.key_bits() > 24)
        throw resource_error("from_tabulation: key domain too large to materialize");
    ExplicitFunction f;
    f.domain_size = 1u << p.key_bits();
    f.out_char_count = p.out_char_count;
    f.out_char_bits = p.out_char_bits;
    f.values.resize(static_cast<std::size_t>(f.domain_size) * f.out_char_count);
    for (std::uint32_t x = 0; x < f.domain_size; ++x) {
        const auto packed = st.eval(x);
        for (std::uint32_t j = 0; j < f.out_char_count; ++j)
            f.values[static_cast<std::size_t>(x) * f.out_char_count + j] =
                packed_get_char(packed, j, p.out_char_bits);
    }
    f.validate();
    return f;
}

ExplicitFunction ExplicitFunction::identity_characters(const KeyCodec& codec) {
    if (codec.key_bits() > 24)
        throw resource_error("identity_characters: key domain too large");
    ExplicitFunction f;
    f.domain_size = 1u << codec.key_bits();
    f.out_char_count = codec.char_count;
    f.out_char_bits = codec.char_bits;
    f.values.resize(static_cast<std::size_t>(f.domain_size) * f.out_char_count);
    for (std::uint32_t x = 0; x < f.domain_size; ++x)
        for (std::uint32_t i = 0; i < codec.char_count; ++i)
            f.values[static_cast<std::size_t>(x) * f.out_char_count + i] =
                (x >> (i * codec.char_bits)) & codec.char_mask();
    return f;
}

ExplicitFunction ExplicitFunction::constant(std::uint32_t domain_size, std::uint32_t d,
                                            std::uint32_t bits, std::uint64_t value) {
    ExplicitFunction f;
    f.domain_size = domain_size;
    f.out_char_count = d;
    f.out_char_bits = bits;
    f.values.assign(static_cast<std::size_t>(domain_size) * d, value);
    f.validate();
    return f;
}

ExplicitFunction ExplicitFunction::random(std::uint64_t seed, std::uint32_t domain_size,
                                          std::uint32_t d, std::uint32_t bits) {
    ExplicitFunction f;
    f.domain_size = domain_size;
    f.out_char_count = d;
    f.out_char_bits = bits;
    f.values.resize(static_cast<std::size_t>(domain_size) * d);
    const std::uint64_t mask = (1ULL << bits) - 1;
    for (std::uint32_t x = 0; x < domain_size; ++x)
        for (std::uint32_t j = 0; j < d; ++j)
            f.values[static_cast<std::size_t>(x) * d + j] = stream_word(seed, j, x, 0) & mask;
    return f;
}

std::optional<ViolationWitness> is_k_unique(const ExplicitFunction& f, std::uint32_t k,
                                            const CheckBudgets& budgets) {
    auto bad = first_violation(f, k, budgets, [&](const std::vector<std::uint32_t>& x) {
        return has_unique_output_char(f, x);
    });
    if (!bad)
        return std::nullopt;
    return ViolationWitness{ViolationWitness::kNotUnique, std::move(*bad)};
}

std::optional<ViolationWitness> is_k_odd(const ExplicitFunction& f, std::uint32_t k,
                                         const CheckBudgets& budgets) {
    auto bad = first_violation(f, k, budgets, [&](const std::vector<std::uint32_t>& x) {
        return has_odd_output_char(f, x);
    });
    if (!bad)
        return std::nullopt;
    return ViolationWitness{ViolationWitness::kNotOdd, std::move(*bad)};
}

OddCompositionResult odd_composition_check(const ExplicitFunction& f,
                                           const std::vector<ExplicitFunction>& g,
                                           std::uint32_t k, const CheckBudgets& budgets) {
    f.validate();
    if (g.size() != f.out_char_count)
        throw domain_error("odd_composition_check: need one g per output position of f");
    for (const auto& gi : g) {
        gi.validate();
        if (gi.domain_size != f.alphabet_size())
            throw domain_error("odd_composition_check: g domain must equal f's alphabet");
        if (gi.out_char_count != g[0].out_char_count ||
            gi.out_char_bits != g[0].out_char_bits)
            throw domain_error("odd_composition_check: all g must share output shape");
    }
    const std::uint32_t c = f.out_char_count;
    const std::uint32_t dg = g[0].out_char_count;

    OddCompositionResult result;
    result.composed.domain_size = f.domain_size;
    result.composed.out_char_count = c * dg;
    result.composed.out_char_bits = g[0].out_char_bits;
    result.composed.values.resize(static_cast<std::size_t>(f.domain_size) * c * dg);
    for (std::uint32_t x = 0; x < f.domain_size; ++x)
        for (std::uint32_t i = 0; i < c; ++i) {
            const auto mid = static_cast<std::uint32_t>(f.value(x, i));
            for (std::uint32_t j = 0; j < dg; ++j)
                result.composed.values[(static_cast<std::size_t>(x) * c + i) * dg + j] =
                    g[i].value(mid, j);
        }

    result.hypotheses_hold = !is_k_odd(f, k, budgets).has_value();
    for (const auto& gi : g)
        result.hypotheses_hold = result.hypotheses_hold && !is_k_odd(gi, k, budgets).has_value();
    result.composed_odd = !is_k_odd(result.composed, k, budgets).has_value();
    return result;
}

IndependenceResult exact_independence(const ExplicitFunction& f, std::uint32_t k,
                                      std::uint32_t r_bits, const CheckBudgets& budgets) {
    f.validate();
    if (r_bits < 1 || r_bits > 16)
        throw domain_error("exact_independence: r_bits must be in [1,16]");
    const std::uint64_t table_bits = f.alphabet_size() * f.out_char_count * r_bits;
    if (table_bits > 63 || (1ULL << table_bits) > budgets.max_fillings)
        throw resource_error("exact_independence: 2^" + std::to_string(table_bits) +
                             " fillings exceed the enumeration budget");
    const std::uint64_t fillings = 1ULL << table_bits;
    const std::uint32_t n = f.domain_size;
    const std::uint64_t r_mask = (1ULL << r_bits) - 1;

    // slot index of (j, f(x)_j) inside a packed filling, per key
    std::vector<std::uint32_t> slots(static_cast<std::size_t>(n) * f.out_char_count);
    for (std::uint32_t x = 0; x < n; ++x)
        for (std::uint32_t j = 0; j < f.out_char_count; ++j)
            slots[static_cast<std::size_t>(x) * f.out_char_count + j] = static_cast<std::uint32_t>(
                (j * f.alphabet_size() + f.value(x, j)) * r_bits);

    // tuples in the deterministic order: size-major, lexicographic
    std::vector<std::vector<std::uint32_t>> tuples;
    for (std::uint32_t size = 1; size <= k && size <= n; ++size) {
        if (static_cast<std::uint64_t>(size) * r_bits > 30)
            throw resource_error("exact_independence: joint histogram too large");
        std::vector<std::uint32_t> x(size);
        for (std::uint32_t i = 0; i < size; ++i)
            x[i] = i;
        do {
            tuples.push_back(x);
        } while (next_combination(x, n));
        if (tuples.size() > budgets.max_subsets)
            throw resource_error("exact_independence: tuple count exceeds budget");
    }

    std::vector<std::vector<std::uint64_t>> hist(tuples.size());
    for (std::size_t t = 0; t < tuples.size(); ++t)
        hist[t].assign(1ULL << (r_bits * tuples[t].size()), 0);

    std::vector<std::uint64_t> hashes(n);
    for (std::uint64_t filling = 0; filling < fillings; ++filling) {
        for (std::uint32_t x = 0; x < n; ++x) {
            std::uint64_t h = 0;
            const std::uint32_t* s = slots.data() + static_cast<std::size_t>(x) * f.out_char_count;
            for (std::uint32_t j = 0; j < f.out_char_count; ++j)
                h ^= (filling >> s[j]) & r_mask;
            hashes[x] = h;
        }
        for (std::size_t t = 0; t < tuples.size(); ++t) {
            std::uint64_t joint = 0;
            for (std::uint32_t x : tuples[t])
                joint = (joint << r_bits) | hashes[x];
            ++hist[t][joint];
        }
    }

    for (std::size_t t = 0; t < tuples.size(); ++t) {
        const std::uint64_t expect = fillings >> (r_bits * tuples[t].size());
        for (std::uint64_t count : hist[t])
            if (count != expect)
                return IndependenceResult{false, tuples[t]};
    }
    return IndependenceResult{true, {}};
}

double regularized_gamma_q(double a, double x) {
    // series for P(a,x) when x < a+1, continued fraction for Q otherwise
    if (x < 0 || a <= 0)
        throw domain_error("regularized_gamma_q: bad arguments");
    if (x == 0)
        return 1.0;
    const double lg = std::lgamma(a);
    if (x < a + 1) {
        double ap = a, sum = 1.0 / a, del = sum;
        for (int i = 0; i < 1000; ++i) {
            ap += 1;
            del *= x / ap;
            sum += del;
            if (std::fabs(del) < std::fabs(sum) * 1e-16)
                break;
        }
        const double p = sum * std::exp(-x + a * std::log(x) - lg);
        return 1.0 - p;
    }
    // modified Lentz
    const double tiny = 1e-300;
    double b = x + 1 - a, c = 1 / tiny, d = 1 / b, h = d;
    for (int i = 1; i <= 1000; ++i) {
        const double an = -static_cast<double>(i) * (i - a);
        b += 2;
        d = an * d + b;
        if (std::fabs(d) < tiny)
            d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny)
            c = tiny;
        d = 1 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16)
            break;
    }
    return std::exp(-x + a * std::log(x) - lg) * h;
}

ChiSquareResult chi_square_independence(
    const std::function<std::function<std::uint64_t(std::uint64_t)>(std::uint64_t)>& factory,
    const std::vector<std::uint64_t>& keys, std::uint64_t trials,
    std::uint32_t bins_per_coord, std::uint32_t range_bits, std::uint64_t master_seed) {
    if (keys.empty() || keys.size() > 4)
        throw domain_error("chi_square: need 1..4 keys");
    if (bins_per_coord < 2 || (bins_per_coord & (bins_per_coord - 1)) != 0)
        throw domain_error("chi_square: bins_per_coord must be a power of two >= 2");
    const std::uint32_t bin_bits = static_cast<std::uint32_t>(std::countr_zero(bins_per_coord));
    if (range_bits < bin_bits || range_bits > 64)
        throw domain_error("chi_square: range narrower than the bins");
    std::uint64_t cells = 1;
    for (std::size_t i = 0; i < keys.size(); ++i)
        cells *= bins_per_coord;
    if (trials < 100 * cells)
        throw domain_error("chi_square: undersampled, need trials >= 100 * cells");

    std::vector<std::uint64_t> hist(cells, 0);
    for (std::uint64_t t = 0; t < trials; ++t) {
        auto h = factory(trial_seed(master_seed, t));
        std::uint64_t idx = 0;
        for (std::uint64_t key : keys) {
            const std::uint64_t v = h(key);
            const std::uint64_t bin = (v >> (range_bits - bin_bits)) & (bins_per_coord - 1);
            idx = idx * bins_per_coord + bin;
        }
        ++hist[idx];
    }

    const double expect = static_cast<double>(trials) / static_cast<double>(cells);
    double stat = 0;
    for (std::uint64_t count : hist) {
        const double diff = static_cast<double>(count) - expect;
        stat += diff * diff / expect;
    }
    const double df = static_cast<double>(cells - 1);
    ChiSquareResult result;
    result.statistic = stat;
    result.p_value = regularized_gamma_q(df / 2.0, stat / 2.0);
    result.cells = cells;
    result.trials = trials;
    return result;
}

bool rectangle_zero_check(const SimpleTabulation& st) {
    const TabulationParams& p = st.params();
    if (p.in_char_count != 2)
        throw domain_error("rectangle_zero_check: needs c = 2");
    auto rect_is_zero = [&](std::uint64_t a, std::uint64_t a2, std::uint64_t b,
                            std::uint64_t b2) {
        const std::uint32_t wpe = p.words_per_entry();
        std::vector<std::uint64_t> acc(wpe, 0);
        for (auto [x, y] : {std::pair{a, b}, {a, b2}, {a2, b}, {a2, b2}}) {
            std::vector<std::uint64_t> chars = {x, y};
            std::vector<std::uint64_t> out(wpe);
            st.eval_chars_into(chars, out);
            for (std::uint32_t w = 0; w < wpe; ++w)
                acc[w] ^= out[w];
        }
        for (std::uint64_t w : acc)
            if (w != 0)
                return false;
        return true;
    };
    if (p.in_char_bits <= 4) {
        const std::uint64_t m = p.entries_per_table();
        for (std::uint64_t a = 0; a < m; ++a)
            for (std::uint64_t a2 = a + 1; a2 < m; ++a2)
                for (std::uint64_t b = 0; b < m; ++b)
                    for (std::uint64_t b2 = b + 1; b2 < m; ++b2)
                        if (!rect_is_zero(a, a2, b, b2))
                            return false;
        return true;
    }
    const std::uint64_t mask = p.in_char_mask();
    for (std::uint32_t i = 0; i < 1000; ++i) {
        const std::uint64_t a = stream_word(0xEEC7, 0, i, 0) & mask;
        const std::uint64_t a2 = stream_word(0xEEC7, 1, i, 0) & mask;
        const std::uint64_t b = stream_word(0xEEC7, 2, i, 0) & mask;
        const std::uint64_t b2 = stream_word(0xEEC7, 3, i, 0) & mask;
        if (a == a2 || b == b2)
            continue;
        if (!rect_is_zero(a, a2, b, b2))
            return false;
    }
    return true;
}

} // namespace hitab
