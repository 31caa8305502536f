#pragma once
// Failure-probability certificates for k-uniqueness of a randomly seeded
// simple tabulation function: the refined code-counting bound P, the
// key-coding bound Q, and their combined double sum over active positions
// and list lengths. All arithmetic is log-domain; every total is computed
// in two precisions and cross-checked.

#include <cstdint>
#include <string>
#include <vector>

#include "hitab/errors.hpp"

namespace hitab {

struct Rational {
    std::uint64_t num = 1;
    std::uint64_t den = 1;

    // Accepts "1", "3/4", or a plain decimal like "0.25".
    static Rational parse(const std::string& text);
    double as_double() const { return static_cast<double>(num) / static_cast<double>(den); }
    std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }

    friend bool operator==(const Rational&, const Rational&) = default;
};

// How the number of active positions c' enters the bound formulas. The
// combinatorial factors always use c'; the equation-count target
// q = eps*d/(2c) either keeps the function's own c (the reading that
// reproduces the published figures) or uses c' as well.
enum class BoundConvention {
    kQKeepsFunctionC,
    kQUsesActiveC,
};

const char* convention_name(BoundConvention c);

struct BoundParams {
    std::uint32_t c = 0;          // input characters of the certified function
    std::uint32_t d = 0;          // output characters
    std::uint64_t phi_size = 0;   // |Phi|
    std::uint64_t psi_size = 0;   // |Psi|
    std::uint64_t k = 0;          // uniqueness target
    Rational epsilon{1, 1};       // 1 for plain uniqueness
    BoundConvention convention = BoundConvention::kQKeepsFunctionC;

    void validate(bool need_k = true) const;
};

struct BoundTerm {
    std::uint32_t ell = 0;
    long double log_p = 0; // clamped at 0 (probability 1)
    long double log_q = 0; // +inf marker never used; q absent in p-only mode
    bool q_defined = false;
    char winner = 'P';
};

struct BoundSubtotal {
    std::uint32_t c_active = 0;
    std::uint64_t binom = 0;          // C(c, c')
    long double log_inner = 0;        // log of clamped inner sum
    long double log_contribution = 0; // log of min(binom * inner, 1)
    std::vector<BoundTerm> terms;
};

struct BoundReport {
    BoundParams params;
    bool p_only = false;
    std::uint64_t lstar = 0; // inner upper limit in p-only mode
    long double total_log_e = 0;    // high-precision lane
    long double total_log_e_ld = 0; // long double lane
    std::string total_decimal;      // upper-rounded, 2 significant digits
    bool precision_flagged = false; // lanes disagree beyond 1e-6 relative
    std::vector<BoundSubtotal> breakdown;
};

// log P_{l,c'}: (e c'|Phi|/l)^l * (e (l/c')^(2c'-1) / (eps 2^(c'-1) |Psi|))^m,
// m = ceil(q l), clamped at probability 1. Requires l >= 2 c'.
long double p_bound(std::uint32_t ell, std::uint32_t c_active, const BoundParams& params);

// log Q^k_{l,c'}: adds the key-coding route; requires 2c' <= l <= k c'.
long double q_bound(std::uint32_t ell, std::uint32_t c_active, const BoundParams& params);

// sum_{c'=1..c} C(c,c') sum_{l=2c'}^{k c'} min{P, Q}, log-sum-exp in a fixed
// deterministic order, every partial clamped at probability 1.
BoundReport total_bound(const BoundParams& params);

// P-only variant with an explicit inner limit l*, as in the uniqueness
// discussion preceding the key-coding refinement.
BoundReport p_only_bound(const BoundParams& params, std::uint64_t lstar);

// floor(|Psi|^(1/(5c))), exact integer root.
std::uint64_t uniqueness_target(const BoundParams& params);

// log(|Phi|^2 / |Psi|^(eps d / (2c))). Drops an o(1) factor; advisory only,
// never a certificate. The certified number is total_bound().
long double asymptotic_failure_estimate(const BoundParams& params);

// Machine-readable key=value lines.
std::string render_report_kv(const BoundReport& report);
// Human-readable table.
std::string render_report_table(const BoundReport& report);

} // namespace hitab
