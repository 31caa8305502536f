#include "hitab/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <chrono>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>

#include "hitab/bounds.hpp"
#include "hitab/schemes.hpp"
#include "hitab/verify.hpp"

namespace hitab {

namespace {

enum ExitCode : int {
    kExitOk = 0,
    kExitCheckFailed = 1,
    kExitUsage = 2,
    kExitInputData = 3,
    kExitResource = 4,
};

// frozen stream for the statistical suite
constexpr std::uint64_t kChiSquareMasterSeed = 0x5EEDC41B727220A9ULL;

BoundParams bound_params_for(std::uint32_t c, std::uint32_t d, std::uint32_t phi_bits,
                             std::uint32_t psi_bits, std::uint64_t k,
                             const std::string& epsilon) {
    BoundParams p;
    p.c = c;
    p.d = d;
    if (phi_bits < 1 || phi_bits > 63 || psi_bits < 1 || psi_bits > 63)
        throw domain_error("phi/psi bits must be in [1,63]");
    p.phi_size = 1ULL << phi_bits;
    p.psi_size = 1ULL << psi_bits;
    p.k = k;
    p.epsilon = Rational::parse(epsilon);
    return p;
}

BoundReport print_certificate(std::ostream& out, const BoundParams& params) {
    BoundReport report = total_bound(params);
    out << render_report_kv(report);
    out << "advisory.uniqueness_target " << uniqueness_target(params) << "\n";
    out << "advisory.asymptotic_log_e "
        << static_cast<double>(asymptotic_failure_estimate(params))
        << " (drops o(1); the certified bound is the total above)\n";
    return report;
}

// ------------------------------------------------------------------- gen --

struct GenOptions {
    std::string preset;
    std::uint32_t c = 0, in_bits = 0, d = 0, out_bits = 0;
    std::uint32_t r_bits = 64;
    std::uint64_t seed = 0;
    std::uint64_t k = 100;
    std::string out_path;
};

int cmd_gen(const GenOptions& opt, std::ostream& out, std::ostream& err) {
    AnyScheme scheme = [&] {
        if (!opt.preset.empty()) {
            if (!find_preset(opt.preset))
                throw domain_error("unknown preset: " + opt.preset);
            return make_preset(opt.preset, opt.seed, opt.r_bits);
        }
        if (opt.c == 0 || opt.in_bits == 0 || opt.d == 0 || opt.out_bits == 0)
            throw domain_error("gen: give --preset or all of --c --in-bits --d --out-bits");
        return AnyScheme(DoubleTabulation::create(opt.in_bits, opt.c, opt.d, opt.out_bits,
                                                  opt.r_bits, opt.seed));
    }();

    out << "gen.scheme " << scheme.kind() << " key_bits=" << scheme.key_bits()
        << " range_bits=" << scheme.range_bits() << " seed=" << opt.seed << "\n";
    if (!opt.preset.empty()) {
        const Preset* p = find_preset(opt.preset);
        out << "gen.preset " << p->name << " claimed_uniqueness=" << p->claimed_uniqueness
            << " claimed_failure_bound=" << p->claimed_failure_bound << "\n";
        if (p->triple) {
            // level 0 certificate, then the shared level-1 function (the
            // 32-bit-key parameters), then their union
            BoundParams level0 = bound_params_for(p->in_count, p->d, p->in_bits, p->psi_bits,
                                                  p->claimed_uniqueness, "1");
            BoundParams level1 = bound_params_for(2, 20, 16, 16, p->claimed_uniqueness, "1");
            out << "gen.certificate level=0\n";
            const BoundReport r0 = print_certificate(out, level0);
            out << "gen.certificate level=1 (shared by all intermediate characters)\n";
            const BoundReport r1 = print_certificate(out, level1);
            const long double u =
                std::log(std::exp(r0.total_log_e) + std::exp(r1.total_log_e));
            out << "bound.union_log_e " << static_cast<double>(u) << "\n";
        } else {
            BoundParams params = bound_params_for(p->in_count, p->d, p->in_bits, p->psi_bits,
                                                  p->claimed_uniqueness, "1");
            print_certificate(out, params);
        }
    } else {
        print_certificate(out,
                          bound_params_for(opt.c, opt.d, opt.in_bits, opt.out_bits, opt.k, "1"));
    }

    const auto bytes = scheme.serialize();
    try {
        write_file_bytes(opt.out_path, bytes);
    } catch (const std::runtime_error& e) {
        err << "gen: " << e.what() << "\n";
        return kExitUsage;
    }
    out << "gen.wrote " << opt.out_path << " bytes=" << bytes.size() << "\n";
    return kExitOk;
}

// ------------------------------------------------------------------ hash --

struct HashOptions {
    std::string scheme_path;
    std::string in_path;  // empty: stdin
    std::string out_path; // empty: stdout
};

int cmd_hash(const HashOptions& opt, std::istream& in, std::ostream& out, std::ostream& err) {
    AnyScheme scheme = AnyScheme::deserialize(read_file_bytes(opt.scheme_path));
    const std::uint32_t key_bits = scheme.key_bits();
    const std::uint64_t key_mask = key_bits >= 64 ? ~0ULL : (1ULL << key_bits) - 1;
    const int out_digits = static_cast<int>((scheme.range_bits() + 3) / 4);

    std::ifstream file_in;
    if (!opt.in_path.empty()) {
        file_in.open(opt.in_path);
        if (!file_in) {
            err << "hash: cannot open " << opt.in_path << "\n";
            return kExitInputData;
        }
    }
    std::istream& keys_in = opt.in_path.empty() ? in : file_in;
    std::ofstream file_out;
    if (!opt.out_path.empty()) {
        file_out.open(opt.out_path, std::ios::trunc);
        if (!file_out) {
            err << "hash: cannot open " << opt.out_path << "\n";
            return kExitUsage;
        }
    }
    std::ostream& hashes_out = opt.out_path.empty() ? out : file_out;

    std::string line;
    std::uint64_t line_no = 0;
    while (std::getline(keys_in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty()) {
            err << "hash: line " << line_no << ": empty line\n";
            return kExitInputData;
        }
        std::uint64_t key = 0;
        const auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), key, 16);
        if (ec != std::errc{} || ptr != line.data() + line.size()) {
            err << "hash: line " << line_no << ": malformed hexadecimal key '" << line
                << "'\n";
            return kExitInputData;
        }
        if (key & ~key_mask) {
            err << "hash: line " << line_no << ": key wider than the scheme's " << key_bits
                << "-bit keys\n";
            return kExitInputData;
        }
        std::uint64_t h = 0;
        try {
            h = scheme.eval(key);
        } catch (const domain_error& e) {
            err << "hash: line " << line_no << ": " << e.what() << "\n";
            return kExitInputData;
        }
        hashes_out << std::hex << std::setw(out_digits) << std::setfill('0') << h << std::dec
                   << "\n";
    }
    return kExitOk;
}

// ----------------------------------------------------------------- bound --

struct BoundOptions {
    std::uint32_t c = 0, d = 0, phi_bits = 0, psi_bits = 0;
    std::uint64_t k = 100;
    std::string epsilon = "1";
    std::string mode = "total";
    std::uint64_t lstar = 0;
    std::string convention = "q-keeps-function-c";
    bool pretty = false;
};

int cmd_bound(const BoundOptions& opt, std::ostream& out, std::ostream& err) {
    BoundParams params =
        bound_params_for(opt.c, opt.d, opt.phi_bits, opt.psi_bits, opt.k, opt.epsilon);
    if (opt.convention == "q-keeps-function-c")
        params.convention = BoundConvention::kQKeepsFunctionC;
    else if (opt.convention == "q-uses-active-c")
        params.convention = BoundConvention::kQUsesActiveC;
    else {
        err << "bound: unknown convention " << opt.convention << "\n";
        return kExitUsage;
    }
    BoundReport report;
    if (opt.mode == "total") {
        report = total_bound(params);
    } else if (opt.mode == "p-only") {
        if (opt.lstar == 0) {
            err << "bound: --mode p-only needs --lstar\n";
            return kExitUsage;
        }
        report = p_only_bound(params, opt.lstar);
    } else {
        err << "bound: unknown mode " << opt.mode << "\n";
        return kExitUsage;
    }
    out << render_report_kv(report);
    out << "advisory.uniqueness_target " << uniqueness_target(params) << "\n";
    out << "advisory.asymptotic_log_e "
        << static_cast<double>(asymptotic_failure_estimate(params))
        << " (drops o(1); the certified bound is the total above)\n";
    if (opt.pretty)
        out << render_report_table(report);
    return kExitOk;
}

// ---------------------------------------------------------------- verify --

struct VerifyOptions {
    std::string suite = "all";
    std::uint64_t trials = 100000;
    std::uint64_t max_subsets = 1ULL << 20;
    std::uint64_t max_fillings = 1ULL << 24;
};

struct VerifyContext {
    std::ostream& out;
    bool all_ok = true;

    void record(const std::string& check, const std::string& params, bool ok,
                const std::string& detail = "") {
        out << "check=" << check << " params=\"" << params << "\" verdict="
            << (ok ? "pass" : "fail");
        if (!detail.empty())
            out << " " << detail;
        out << "\n";
        all_ok = all_ok && ok;
    }
};

std::string witness_str(const std::optional<ViolationWitness>& w) {
    if (!w)
        return "witness=none";
    std::string s = "witness=";
    for (std::size_t i = 0; i < w->keys.size(); ++i)
        s += (i ? "," : "") + std::to_string(w->keys[i]);
    return s;
}

void suite_uniqueness(VerifyContext& ctx, const CheckBudgets& budgets) {
    // an identity output position makes every set pass at any k
    ExplicitFunction ident;
    ident.domain_size = 16;
    ident.out_char_count = 2;
    ident.out_char_bits = 4;
    ident.values.resize(32);
    for (std::uint32_t x = 0; x < 16; ++x) {
        ident.values[2 * x] = x;
        ident.values[2 * x + 1] = 0;
    }
    auto w1 = is_k_unique(ident, 5, budgets);
    ctx.record("uniqueness.identity-position", "|U|=16 d=2 k=5", !w1, witness_str(w1));

    auto constant = ExplicitFunction::constant(4, 2, 2, 1);
    auto w2 = is_k_unique(constant, 2, budgets);
    const bool expected = w2 && w2->keys == std::vector<std::uint32_t>{0, 1};
    ctx.record("uniqueness.constant-witness", "|U|=4 d=2 k=2", expected, witness_str(w2));

    auto st = SimpleTabulation::generate(TabulationParams(2, 2, 4, 4), 11);
    auto f = ExplicitFunction::from_tabulation(st);
    auto w3 = is_k_unique(f, 3, budgets);
    ctx.record("uniqueness.random-simple-tabulation", "b=2 c=2 d=4 |Psi|=16 k=3 seed=11",
               !w3, witness_str(w3));
}

void suite_oddness(VerifyContext& ctx, const CheckBudgets& budgets) {
    ExplicitFunction ident;
    ident.domain_size = 16;
    ident.out_char_count = 2;
    ident.out_char_bits = 4;
    ident.values.resize(32);
    for (std::uint32_t x = 0; x < 16; ++x) {
        ident.values[2 * x] = x;
        ident.values[2 * x + 1] = 0;
    }
    auto w1 = is_k_odd(ident, 5, budgets);
    ctx.record("oddness.k-unique-implies-k-odd", "|U|=16 d=2 k=5", !w1, witness_str(w1));

    // the XOR-closed quadruple {00,01,10,11} in two 1-bit positions
    auto xor_closed = ExplicitFunction::identity_characters(KeyCodec(1, 2));
    auto w2 = is_k_odd(xor_closed, 4, budgets);
    const bool caught = w2 && w2->keys == std::vector<std::uint32_t>{0, 1, 2, 3};
    ctx.record("oddness.xor-closed-quadruple", "|U|=4 d=2 k=4", caught, witness_str(w2));

    auto constant = ExplicitFunction::constant(4, 1, 2, 3);
    auto w3 = is_k_odd(constant, 2, budgets);
    ctx.record("oddness.constant-even-set", "|U|=4 d=1 k=2", w3.has_value(), witness_str(w3));
}

void suite_lemma1(VerifyContext& ctx, const CheckBudgets& budgets) {
    // frozen 4-unique instance: identity coordinate, |U|=4, Psi=[4], d=2
    ExplicitFunction f;
    f.domain_size = 4;
    f.out_char_count = 2;
    f.out_char_bits = 2;
    f.values.resize(8);
    for (std::uint32_t x = 0; x < 4; ++x) {
        f.values[2 * x] = x;
        f.values[2 * x + 1] = 0;
    }
    const bool unique = !is_k_unique(f, 4, budgets).has_value();
    auto r1 = exact_independence(f, 4, 1, budgets);
    ctx.record("lemma1.four-unique-exact-independence", "|U|=4 Psi=[4] d=2 r_bits=1 k=4",
               unique && r1.exact, "fillings=256");

    // simple tabulation itself: exactly 3-independent, not 4-independent
    auto ident = ExplicitFunction::identity_characters(KeyCodec(1, 2));
    auto r3 = exact_independence(ident, 3, 1, budgets);
    auto r4 = exact_independence(ident, 4, 1, budgets);
    const bool matches = r3.exact && !r4.exact;
    std::string detail = "three=" + std::string(r3.exact ? "uniform" : "non-uniform") +
                         " four=" + std::string(r4.exact ? "uniform" : "non-uniform");
    ctx.record("lemma1.simple-tabulation-3-not-4", "b=1 c=2 r_bits=1", matches, detail);
}

void suite_rectangle(VerifyContext& ctx) {
    bool ok = true;
    for (std::uint64_t seed = 0; seed < 100 && ok; ++seed) {
        auto st = SimpleTabulation::generate(TabulationParams(2, 2, 8, 1), seed);
        ok = rectangle_zero_check(st);
    }
    ctx.record("rectangle.exhaustive-b2", "b=2 c=2 seeds=100 rectangles=36", ok);
}

void suite_chisq(VerifyContext& ctx, std::uint64_t trials) {
    const std::vector<std::uint64_t> keys = {0x00000001, 0x12345678, 0xFFFFFFFF};
    auto preset_factory = [](std::uint64_t seed) {
        return [seed](std::uint64_t key) {
            return double_eval_at_seed(16, 2, 20, 16, 64, seed, key);
        };
    };
    auto r1 = chi_square_independence(preset_factory, keys, trials, 4, 64,
                                      kChiSquareMasterSeed);
    const bool in_band = r1.p_value > 1e-4 && r1.p_value < 1 - 1e-4;
    std::ostringstream d1;
    d1 << "stat=" << r1.statistic << " p=" << r1.p_value;
    ctx.record("chisq.preset-32-2-band", "keys=3 trials=" + std::to_string(trials) + " bins=4",
               in_band, d1.str());

    // zeroed second level: every hash collapses to 0
    auto broken_factory = [](std::uint64_t) {
        return [](std::uint64_t) -> std::uint64_t { return 0; };
    };
    auto r2 = chi_square_independence(broken_factory, keys, trials, 4, 64,
                                      kChiSquareMasterSeed);
    std::ostringstream d2;
    d2 << "stat=" << r2.statistic << " p=" << r2.p_value;
    ctx.record("chisq.broken-scheme-rejected", "second level zeroed", r2.p_value < 1e-10,
               d2.str());

    // calibration control: fresh uniform words instead of a hash scheme
    auto uniform_factory = [](std::uint64_t seed) {
        return [seed](std::uint64_t key) { return stream_word(seed, key, 1, 1); };
    };
    auto r3 = chi_square_independence(uniform_factory, keys, trials, 4, 64,
                                      kChiSquareMasterSeed);
    const bool in_band3 = r3.p_value > 1e-4 && r3.p_value < 1 - 1e-4;
    std::ostringstream d3;
    d3 << "stat=" << r3.statistic << " p=" << r3.p_value;
    ctx.record("chisq.uniform-control-band", "true-random reference", in_band3, d3.str());
}

int cmd_verify(const VerifyOptions& opt, std::ostream& out, std::ostream& err) {
    CheckBudgets budgets{opt.max_subsets, opt.max_fillings};
    VerifyContext ctx{out};
    try {
        const bool all = opt.suite == "all";
        if (all || opt.suite == "uniqueness")
            suite_uniqueness(ctx, budgets);
        if (all || opt.suite == "oddness")
            suite_oddness(ctx, budgets);
        if (all || opt.suite == "lemma1")
            suite_lemma1(ctx, budgets);
        if (all || opt.suite == "rectangle")
            suite_rectangle(ctx);
        if (all || opt.suite == "chisq")
            suite_chisq(ctx, opt.trials);
        if (!all && opt.suite != "uniqueness" && opt.suite != "oddness" &&
            opt.suite != "lemma1" && opt.suite != "rectangle" && opt.suite != "chisq") {
            err << "verify: unknown suite " << opt.suite << "\n";
            return kExitUsage;
        }
    } catch (const resource_error& e) {
        err << "verify: " << e.what() << "\n";
        return kExitResource;
    }
    return ctx.all_ok ? kExitOk : kExitCheckFailed;
}

// ----------------------------------------------------------------- bench --

struct BenchOptions {
    std::string schemes = "double-32-2";
    std::uint64_t keys = 1000000;
    std::uint64_t seed = 1;
    std::uint64_t key_seed = 0;
    bool deterministic_keys = false;
    std::string report_path;
};

struct BenchRow {
    std::string name;
    std::uint64_t keys;
    double ns_per_key;
    double keys_per_sec;
    std::uint64_t lookups_per_key;
    std::uint64_t checksum;
};

std::string bench_row_str(const BenchRow& r) {
    std::ostringstream out;
    out << "bench scheme=" << r.name << " keys=" << r.keys << " ns_per_key=" << std::fixed
        << std::setprecision(2) << r.ns_per_key << " keys_per_sec=" << std::setprecision(0)
        << r.keys_per_sec << " lookups_per_key=" << r.lookups_per_key << " checksum=0x"
        << std::hex << r.checksum << std::dec;
    return out.str();
}

int cmd_bench(const BenchOptions& opt, std::ostream& out, std::ostream& err) {
    std::vector<std::string> names;
    std::stringstream ss(opt.schemes);
    for (std::string item; std::getline(ss, item, ',');)
        if (!item.empty())
            names.push_back(item);
    if (names.empty()) {
        err << "bench: empty scheme list\n";
        return kExitUsage;
    }

    std::uint64_t key_seed = opt.key_seed;
    if (opt.deterministic_keys)
        key_seed = 0xD37E12B1;
    else if (key_seed == 0)
        key_seed = std::random_device{}();

    struct Runner {
        std::function<std::uint64_t(std::uint64_t)> eval;
        std::uint64_t key_mask;
    };
    auto build = [&](const std::string& name) -> Runner {
        if (name == "simple-32") {
            auto st = std::make_shared<SimpleTabulation>(
                SimpleTabulation::generate(TabulationParams(16, 2, 64, 1), opt.seed));
            return {[st](std::uint64_t key) { return st->eval64(key); }, 0xFFFFFFFF};
        }
        std::shared_ptr<AnyScheme> scheme;
        if (name == "double-32-2" || name == "double-64-3")
            scheme = std::make_shared<AnyScheme>(make_preset(name.substr(7), opt.seed));
        else if (name == "triple-64-4")
            scheme = std::make_shared<AnyScheme>(make_preset("64-4-triple", opt.seed));
        else if (name == "recursive-3-16")
            scheme = std::make_shared<AnyScheme>(
                RecursiveTabulation::create(RecursivePlan::make(3, 16), 64, opt.seed));
        else if (name.rfind("poly-", 0) == 0)
            scheme = std::make_shared<AnyScheme>(PolynomialHash::create(
                static_cast<std::uint32_t>(std::stoul(name.substr(5))), opt.seed, 61));
        else
            throw domain_error("bench: unknown scheme " + name);
        const std::uint32_t kb = scheme->key_bits();
        // stay strictly inside the polynomial's prime field
        const std::uint64_t mask =
            scheme->kind() == "poly" ? (1ULL << 60) - 1
                                     : (kb >= 64 ? ~0ULL : (1ULL << kb) - 1);
        return {[scheme](std::uint64_t key) { return scheme->eval(key); }, mask};
    };

    std::vector<BenchRow> rows;
    for (const auto& name : names) {
        Runner runner = build(name);
        std::vector<std::uint64_t> keys(opt.keys);
        for (std::uint64_t i = 0; i < opt.keys; ++i)
            keys[i] = stream_word(key_seed, 0xBEEF, i, 0) & runner.key_mask;

        const std::uint64_t warmup = std::min<std::uint64_t>(opt.keys, 100000);
        std::uint64_t checksum = 0;
        for (std::uint64_t i = 0; i < warmup; ++i)
            checksum ^= runner.eval(keys[i]);
        checksum = 0;
        const std::uint64_t lookups_before = lookup_counter();
        const auto t0 = std::chrono::steady_clock::now();
        for (std::uint64_t i = 0; i < opt.keys; ++i)
            checksum ^= runner.eval(keys[i]);
        const auto t1 = std::chrono::steady_clock::now();
        const std::uint64_t lookups = (lookup_counter() - lookups_before) / opt.keys;
        const double ns =
            static_cast<double>(
                std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count()) /
            static_cast<double>(opt.keys);

        BenchRow row{name, opt.keys, ns, 1e9 / ns, lookups, checksum};
        rows.push_back(row);
        out << bench_row_str(row) << "\n";
    }

    if (!opt.report_path.empty()) {
        std::ofstream report(opt.report_path, std::ios::trunc);
        if (!report) {
            err << "bench: cannot open " << opt.report_path << "\n";
            return kExitUsage;
        }
        for (const auto& row : rows)
            report << bench_row_str(row) << "\n";
    }
    return kExitOk;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err) {
    CLI::App app{"hitab: high-independence tabulation hashing"};
    app.require_subcommand(1);

    GenOptions gen;
    auto* gen_cmd = app.add_subcommand("gen", "generate a scheme and print its certificate");
    gen_cmd->add_option("--preset", gen.preset, "32-2 | 64-3 | 64-4-triple");
    gen_cmd->add_option("--c", gen.c, "input characters");
    gen_cmd->add_option("--in-bits", gen.in_bits, "bits per input character");
    gen_cmd->add_option("--d", gen.d, "intermediate characters");
    gen_cmd->add_option("--out-bits", gen.out_bits, "bits per intermediate character");
    gen_cmd->add_option("--r-bits", gen.r_bits, "hash range bits (default 64)");
    gen_cmd->add_option("--k", gen.k, "uniqueness target for the certificate");
    gen_cmd->add_option("--seed", gen.seed, "master seed")->required();
    gen_cmd->add_option("--out", gen.out_path, "output container path")->required();

    HashOptions hash;
    auto* hash_cmd = app.add_subcommand("hash", "hash hex keys, one per line");
    hash_cmd->add_option("--scheme", hash.scheme_path, "HSCH container")->required();
    hash_cmd->add_option("--in", hash.in_path, "key file (default stdin)");
    hash_cmd->add_option("--out", hash.out_path, "hash file (default stdout)");

    BoundOptions bound;
    auto* bound_cmd = app.add_subcommand("bound", "failure-probability certificate");
    bound_cmd->add_option("--c", bound.c)->required();
    bound_cmd->add_option("--d", bound.d)->required();
    bound_cmd->add_option("--phi-bits", bound.phi_bits)->required();
    bound_cmd->add_option("--psi-bits", bound.psi_bits)->required();
    bound_cmd->add_option("--k", bound.k, "uniqueness target (default 100)");
    bound_cmd->add_option("--epsilon", bound.epsilon, "rational in (0,1], default 1");
    bound_cmd->add_option("--mode", bound.mode, "total | p-only");
    bound_cmd->add_option("--lstar", bound.lstar, "list length limit for p-only mode");
    bound_cmd->add_option("--convention", bound.convention,
                          "q-keeps-function-c | q-uses-active-c");
    bound_cmd->add_flag("--pretty", bound.pretty, "append the human-readable table");

    VerifyOptions verify;
    auto* verify_cmd = app.add_subcommand("verify", "desk-scale oracle suites");
    verify_cmd->add_option("suite", verify.suite,
                           "uniqueness | oddness | lemma1 | rectangle | chisq | all");
    verify_cmd->add_option("--trials", verify.trials, "chi-square trials");
    verify_cmd->add_option("--max-subsets", verify.max_subsets, "subset enumeration budget");
    verify_cmd->add_option("--max-fillings", verify.max_fillings, "filling enumeration budget");

    BenchOptions bench;
    auto* bench_cmd = app.add_subcommand("bench", "throughput of schemes");
    bench_cmd->add_option("--schemes", bench.schemes,
                          "comma list: simple-32,double-32-2,double-64-3,triple-64-4,"
                          "recursive-3-16,poly-<k>");
    bench_cmd->add_option("--keys", bench.keys, "number of keys to hash");
    bench_cmd->add_option("--seed", bench.seed, "scheme seed");
    bench_cmd->add_option("--key-seed", bench.key_seed, "key stream seed (0 = random)");
    bench_cmd->add_flag("--deterministic-keys", bench.deterministic_keys,
                        "pin the documented fixed key stream");
    bench_cmd->add_option("--report", bench.report_path, "also write rows to this file");

    std::vector<const char*> argv;
    argv.push_back("hitab");
    for (const auto& a : args)
        argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (gen_cmd->parsed())
            return cmd_gen(gen, out, err);
        if (hash_cmd->parsed())
            return cmd_hash(hash, in, out, err);
        if (bound_cmd->parsed())
            return cmd_bound(bound, out, err);
        if (verify_cmd->parsed())
            return cmd_verify(verify, out, err);
        if (bench_cmd->parsed())
            return cmd_bench(bench, out, err);
    } catch (const resource_error& e) {
        err << "error: " << e.what() << "\n";
        return kExitResource;
    } catch (const parse_error& e) {
        err << "error: " << e.what() << "\n";
        return kExitInputData;
    } catch (const domain_error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}

} // namespace hitab
