#include "hitab/bounds.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <sstream>

namespace hitab {

namespace {

constexpr long double kNegInf = -std::numeric_limits<long double>::infinity();
constexpr mpfr_prec_t kHighPrec = 256;

// Minimal value wrapper around mpfr_t for the high-precision lane.
class Big {
public:
    Big() { mpfr_init2(v_, kHighPrec); mpfr_set_zero(v_, 1); }
    explicit Big(std::uint64_t u) : Big() { mpfr_set_uj(v_, u, MPFR_RNDN); }
    Big(const Big& o) : Big() { mpfr_set(v_, o.v_, MPFR_RNDN); }
    Big(Big&& o) noexcept : Big() { mpfr_swap(v_, o.v_); }
    Big& operator=(Big o) {
        mpfr_swap(v_, o.v_);
        return *this;
    }
    ~Big() { mpfr_clear(v_); }

    static Big neg_inf() {
        Big b;
        mpfr_set_inf(b.v_, -1);
        return b;
    }

    Big operator+(const Big& o) const { Big r; mpfr_add(r.v_, v_, o.v_, MPFR_RNDN); return r; }
    Big operator-(const Big& o) const { Big r; mpfr_sub(r.v_, v_, o.v_, MPFR_RNDN); return r; }
    Big operator*(const Big& o) const { Big r; mpfr_mul(r.v_, v_, o.v_, MPFR_RNDN); return r; }
    bool operator<(const Big& o) const { return mpfr_cmp(v_, o.v_) < 0; }

    bool is_neg_inf() const { return mpfr_inf_p(v_) && mpfr_sgn(v_) < 0; }
    bool positive() const { return !mpfr_inf_p(v_) && mpfr_sgn(v_) > 0; }
    long double to_ld() const { return mpfr_get_ld(v_, MPFR_RNDN); }

    static Big log_u64(std::uint64_t u) {
        Big b(u);
        mpfr_log(b.v_, b.v_, MPFR_RNDN);
        return b;
    }
    static Big log_add_exp(const Big& a, const Big& b) {
        if (a.is_neg_inf()) return b;
        if (b.is_neg_inf()) return a;
        const Big& hi = a < b ? b : a;
        const Big& lo = a < b ? a : b;
        Big t = lo - hi;
        mpfr_exp(t.v_, t.v_, MPFR_RNDN);
        mpfr_log1p(t.v_, t.v_, MPFR_RNDN);
        return hi + t;
    }
    static Big min0(Big a) {
        if (a.positive())
            mpfr_set_zero(a.v_, 1);
        return a;
    }

private:
    mpfr_t v_;
};

struct BigLane {
    using value = Big;
    static Big num(std::uint64_t u) { return Big(u); }
    static Big log_of(std::uint64_t u) { return Big::log_u64(u); }
    static Big clamp0(Big x) { return Big::min0(std::move(x)); }
    static Big logaddexp(const Big& a, const Big& b) { return Big::log_add_exp(a, b); }
    static Big neg_inf() { return Big::neg_inf(); }
};

struct LdLane {
    struct value {
        long double v;
        value operator+(value o) const { return {v + o.v}; }
        value operator-(value o) const { return {v - o.v}; }
        value operator*(value o) const { return {v * o.v}; }
        bool operator<(value o) const { return v < o.v; }
        long double to_ld() const { return v; }
    };
    static value num(std::uint64_t u) { return {static_cast<long double>(u)}; }
    static value log_of(std::uint64_t u) { return {std::log(static_cast<long double>(u))}; }
    static value clamp0(value x) { return {std::min(x.v, 0.0L)}; }
    static value logaddexp(value a, value b) {
        if (a.v == kNegInf) return b;
        if (b.v == kNegInf) return a;
        const long double hi = std::max(a.v, b.v), lo = std::min(a.v, b.v);
        return {hi + std::log1p(std::exp(lo - hi))};
    }
    static value neg_inf() { return {kNegInf}; }
};

std::uint64_t binomial_u64(std::uint32_t n, std::uint32_t k) {
    if (k > n)
        return 0;
    k = std::min(k, n - k);
    unsigned __int128 acc = 1;
    for (std::uint32_t i = 1; i <= k; ++i) {
        acc = acc * (n - k + i) / i;
        if (acc > ~0ULL)
            throw domain_error("binomial overflow");
    }
    return static_cast<std::uint64_t>(acc);
}

// m = ceil(q * ell) with q = eps*d/(2*cq), exact in integers.
std::uint64_t equation_count(const BoundParams& p, std::uint32_t cq, std::uint64_t ell) {
    const unsigned __int128 numer =
        static_cast<unsigned __int128>(p.epsilon.num) * p.d * ell;
    const unsigned __int128 denom = static_cast<unsigned __int128>(p.epsilon.den) * 2 * cq;
    return static_cast<std::uint64_t>((numer + denom - 1) / denom);
}

std::uint32_t q_active(const BoundParams& p, std::uint32_t c_active) {
    return p.convention == BoundConvention::kQUsesActiveC ? c_active : p.c;
}

// log of (e c'|Phi|/l)^l * (e (l/c')^(2c'-1) / (eps 2^(c'-1) |Psi|))^m, unclamped.
template <typename Lane>
typename Lane::value p_raw(std::uint64_t ell, std::uint32_t ca, const BoundParams& p) {
    const std::uint64_t m = equation_count(p, q_active(p, ca), ell);
    auto one = Lane::num(1);
    auto list_part =
        Lane::num(ell) * (one + Lane::log_of(ca) + Lane::log_of(p.phi_size) - Lane::log_of(ell));
    auto eq_base = one + Lane::num(2 * ca - 1) * (Lane::log_of(ell) - Lane::log_of(ca)) -
                   (Lane::log_of(p.epsilon.num) - Lane::log_of(p.epsilon.den)) -
                   Lane::num(ca - 1) * Lane::log_of(2) - Lane::log_of(p.psi_size);
    return list_part + Lane::num(m) * eq_base;
}

// log of the key-coding route, unclamped:
// (e c'|Phi|/l)^l * (e (l/c')^c' / k)^k * (e k^2 c' / (eps l |Psi|))^m.
template <typename Lane>
typename Lane::value q_raw(std::uint64_t ell, std::uint32_t ca, const BoundParams& p) {
    const std::uint64_t m = equation_count(p, q_active(p, ca), ell);
    auto one = Lane::num(1);
    auto list_part =
        Lane::num(ell) * (one + Lane::log_of(ca) + Lane::log_of(p.phi_size) - Lane::log_of(ell));
    auto key_part = Lane::num(p.k) *
                    (one + Lane::num(ca) * (Lane::log_of(ell) - Lane::log_of(ca)) -
                     Lane::log_of(p.k));
    auto eq_base = one + Lane::num(2) * Lane::log_of(p.k) + Lane::log_of(ca) -
                   (Lane::log_of(p.epsilon.num) - Lane::log_of(p.epsilon.den)) -
                   Lane::log_of(ell) - Lane::log_of(p.psi_size);
    return list_part + key_part + Lane::num(m) * eq_base;
}

// The double sum in one lane, c' ascending then l ascending. Each per-l
// term, each inner sum, each binomial-scaled contribution, and the total
// are all clamped at probability 1 (each is itself a probability).
template <typename Lane>
typename Lane::value evaluate_total(const BoundParams& params, bool p_only,
                                    std::uint64_t lstar,
                                    std::vector<BoundSubtotal>* breakdown) {
    auto total = Lane::neg_inf();
    for (std::uint32_t ca = 1; ca <= params.c; ++ca) {
        const std::uint64_t binom = binomial_u64(params.c, ca);
        const std::uint64_t hi = p_only ? lstar : params.k * ca;
        auto inner = Lane::neg_inf();
        BoundSubtotal sub;
        sub.c_active = ca;
        sub.binom = binom;
        for (std::uint64_t ell = 2ull * ca; ell <= hi; ++ell) {
            auto lp = Lane::clamp0(p_raw<Lane>(ell, ca, params));
            auto term = lp;
            BoundTerm t;
            t.ell = static_cast<std::uint32_t>(ell);
            t.log_p = lp.to_ld();
            if (!p_only) {
                auto lq = Lane::clamp0(q_raw<Lane>(ell, ca, params));
                t.log_q = lq.to_ld();
                t.q_defined = true;
                if (lq < lp) {
                    term = lq;
                    t.winner = 'Q';
                }
            }
            inner = Lane::logaddexp(inner, term);
            if (breakdown)
                sub.terms.push_back(t);
        }
        inner = Lane::clamp0(inner);
        auto contribution = Lane::clamp0(inner + Lane::log_of(binom));
        total = Lane::logaddexp(total, contribution);
        if (breakdown) {
            sub.log_inner = inner.to_ld();
            sub.log_contribution = contribution.to_ld();
            breakdown->push_back(std::move(sub));
        }
    }
    return Lane::clamp0(total);
}

// Upper-rounded scientific notation with two significant digits; an upper
// bound must never be under-reported, so every step rounds up.
std::string decimal_upper_2sig(long double log_e) {
    if (log_e >= 0)
        return "1.0e+0";
    if (log_e == kNegInf)
        return "0.0e+0";
    mpfr_t l, ln10, log10v, frac, mant;
    mpfr_inits2(kHighPrec, l, ln10, log10v, frac, mant, static_cast<mpfr_ptr>(nullptr));
    mpfr_set_ld(l, log_e, MPFR_RNDU);
    mpfr_set_ld(frac, 1e-40L, MPFR_RNDU); // slack above the lane's own error
    mpfr_add(l, l, frac, MPFR_RNDU);
    mpfr_set_ui(ln10, 10, MPFR_RNDN);
    mpfr_log(ln10, ln10, MPFR_RNDN);
    mpfr_div(log10v, l, ln10, MPFR_RNDU);
    mpfr_floor(frac, log10v);
    const long exp10 = mpfr_get_si(frac, MPFR_RNDN);
    mpfr_sub(frac, log10v, frac, MPFR_RNDU);
    mpfr_ui_pow(mant, 10, frac, MPFR_RNDU); // mantissa in [1,10)
    mpfr_mul_ui(mant, mant, 10, MPFR_RNDU);
    mpfr_ceil(mant, mant);
    long digits = mpfr_get_si(mant, MPFR_RNDN);
    mpfr_clears(l, ln10, log10v, frac, mant, static_cast<mpfr_ptr>(nullptr));
    long exp_out = exp10;
    if (digits >= 100) {
        digits = 10;
        ++exp_out;
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%ld.%lde%+ld", digits / 10, digits % 10, exp_out);
    return buf;
}

BoundReport make_report(const BoundParams& params, bool p_only, std::uint64_t lstar) {
    BoundReport report;
    report.params = params;
    report.p_only = p_only;
    report.lstar = lstar;
    report.total_log_e_ld = evaluate_total<LdLane>(params, p_only, lstar, nullptr).to_ld();
    report.total_log_e =
        evaluate_total<BigLane>(params, p_only, lstar, &report.breakdown).to_ld();
    report.total_decimal = decimal_upper_2sig(report.total_log_e);
    const long double diff = std::fabs(report.total_log_e - report.total_log_e_ld);
    const long double scale = std::max<long double>(std::fabs(report.total_log_e), 1.0L);
    report.precision_flagged = !(diff / scale < 1e-6L);
    return report;
}

} // namespace

Rational Rational::parse(const std::string& text) {
    if (text.empty())
        throw domain_error("epsilon: empty");
    Rational r;
    const auto slash = text.find('/');
    const auto dot = text.find('.');
    try {
        if (slash != std::string::npos) {
            r.num = std::stoull(text.substr(0, slash));
            r.den = std::stoull(text.substr(slash + 1));
        } else if (dot != std::string::npos) {
            const std::string whole = text.substr(0, dot);
            const std::string frac = text.substr(dot + 1);
            if (frac.size() > 9)
                throw domain_error("epsilon: too many decimal digits");
            std::uint64_t scale = 1;
            for (std::size_t i = 0; i < frac.size(); ++i)
                scale *= 10;
            r.num = (whole.empty() ? 0 : std::stoull(whole)) * scale +
                    (frac.empty() ? 0 : std::stoull(frac));
            r.den = scale;
        } else {
            r.num = std::stoull(text);
            r.den = 1;
        }
    } catch (const std::invalid_argument&) {
        throw domain_error("epsilon: cannot parse '" + text + "'");
    } catch (const std::out_of_range&) {
        throw domain_error("epsilon: out of range '" + text + "'");
    }
    if (r.den == 0)
        throw domain_error("epsilon: zero denominator");
    const std::uint64_t g = std::gcd(r.num, r.den);
    if (g > 1) {
        r.num /= g;
        r.den /= g;
    }
    return r;
}

const char* convention_name(BoundConvention c) {
    switch (c) {
    case BoundConvention::kQKeepsFunctionC: return "q-keeps-function-c";
    case BoundConvention::kQUsesActiveC: return "q-uses-active-c";
    }
    return "?";
}

void BoundParams::validate(bool need_k) const {
    if (c < 1 || d < 1)
        throw domain_error("bound params: c and d must be >= 1");
    if (phi_size < 2 || psi_size < 2)
        throw domain_error("bound params: |Phi| and |Psi| must be >= 2");
    if (epsilon.num == 0 || epsilon.den == 0 || epsilon.num > epsilon.den)
        throw domain_error("bound params: epsilon must be in (0, 1]");
    if (need_k && k < 2)
        throw domain_error("bound params: k must be >= 2");
}

long double p_bound(std::uint32_t ell, std::uint32_t c_active, const BoundParams& params) {
    params.validate(false);
    if (c_active < 1 || c_active > params.c)
        throw domain_error("p_bound: c_active must be in [1, c]");
    if (ell < 2ull * c_active)
        throw domain_error("p_bound: need ell >= 2*c_active");
    return std::min(p_raw<LdLane>(ell, c_active, params).v, 0.0L);
}

long double q_bound(std::uint32_t ell, std::uint32_t c_active, const BoundParams& params) {
    params.validate(true);
    if (c_active < 1 || c_active > params.c)
        throw domain_error("q_bound: c_active must be in [1, c]");
    if (ell < 2ull * c_active || ell > params.k * c_active)
        throw domain_error("q_bound: need 2*c_active <= ell <= k*c_active");
    return std::min(q_raw<LdLane>(ell, c_active, params).v, 0.0L);
}

BoundReport total_bound(const BoundParams& params) {
    params.validate(true);
    return make_report(params, false, 0);
}

BoundReport p_only_bound(const BoundParams& params, std::uint64_t lstar) {
    params.validate(false);
    return make_report(params, true, lstar);
}

std::uint64_t uniqueness_target(const BoundParams& params) {
    params.validate(false);
    const std::uint32_t exp = 5 * params.c;
    auto fits = [&](std::uint64_t base) {
        if (base <= 1)
            return true;
        unsigned __int128 acc = 1;
        for (std::uint32_t i = 0; i < exp; ++i) {
            acc *= base;
            if (acc > params.psi_size)
                return false;
        }
        return true;
    };
    std::uint64_t lo = 1, hi = 2;
    while (fits(hi))
        hi *= 2;
    while (lo + 1 < hi) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        if (fits(mid))
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

long double asymptotic_failure_estimate(const BoundParams& params) {
    params.validate(false);
    const long double log_phi = std::log(static_cast<long double>(params.phi_size));
    const long double log_psi = std::log(static_cast<long double>(params.psi_size));
    const long double q = static_cast<long double>(params.epsilon.num) * params.d /
                          (2.0L * params.epsilon.den * params.c);
    return 2 * log_phi - q * log_psi;
}

std::string render_report_kv(const BoundReport& r) {
    std::ostringstream out;
    out.precision(17);
    out << "bound.params c=" << r.params.c << " d=" << r.params.d
        << " phi=" << r.params.phi_size << " psi=" << r.params.psi_size;
    if (!r.p_only)
        out << " k=" << r.params.k;
    out << " epsilon=" << r.params.epsilon.str() << "\n";
    out << "bound.convention " << convention_name(r.params.convention) << "\n";
    out << "bound.mode " << (r.p_only ? "p-only" : "total");
    if (r.p_only)
        out << " lstar=" << r.lstar;
    out << "\n";
    for (const auto& sub : r.breakdown)
        out << "bound.subtotal c_active=" << sub.c_active << " binom=" << sub.binom
            << " log_e=" << static_cast<double>(sub.log_contribution) << "\n";
    out << "bound.total_log_e " << static_cast<double>(r.total_log_e) << "\n";
    out << "bound.total_decimal " << r.total_decimal << "\n";
    out << "bound.precision_flagged " << (r.precision_flagged ? 1 : 0) << "\n";
    return out.str();
}

std::string render_report_table(const BoundReport& r) {
    std::ostringstream out;
    out << "failure probability certificate (" << (r.p_only ? "P-only" : "P/Q total")
        << ")\n";
    out << "  c=" << r.params.c << " d=" << r.params.d << " |Phi|=" << r.params.phi_size
        << " |Psi|=" << r.params.psi_size;
    if (!r.p_only)
        out << " k=" << r.params.k;
    out << " epsilon=" << r.params.epsilon.str() << "\n";
    out << "  convention: " << convention_name(r.params.convention) << "\n";
    for (const auto& sub : r.breakdown) {
        std::size_t q_wins = 0;
        for (const auto& t : sub.terms)
            q_wins += t.winner == 'Q';
        out << "  c'=" << sub.c_active << "  C(c,c')=" << sub.binom
            << "  log_e contribution=" << static_cast<double>(sub.log_contribution) << "  ("
            << sub.terms.size() << " terms, Q wins " << q_wins << ")\n";
    }
    out << "  total <= " << r.total_decimal << "  (log_e "
        << static_cast<double>(r.total_log_e) << ")";
    if (r.precision_flagged)
        out << "  [PRECISION FLAGGED]";
    out << "\n";
    return out.str();
}

} // namespace hitab
