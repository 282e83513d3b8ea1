// cartanq: verification and computation CLI.
//
//   cartanq verify --suite lie|twist|char0-quant|modular [params]
//   cartanq bracket A B --n N [--p P]
//   cartanq delta A --family F --k K [--m M] --n N [--p P --q Q] [--tdeg N]
//   cartanq antipode A ... (same parameters as delta)
//   cartanq dims --n N --p P
//   cartanq twist-check --family F [--k K --m M] --n N [--tdeg N]
//
// Exit codes: 0 = all checks pass, 1 = a verification failed, 2 = usage error.
// CARTANQ_SEED overrides --seed when set.
#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

#include "cartanq/quantmod.hpp"
#include "cartanq/suites.hpp"

using namespace cartanq;
using json = nlohmann::ordered_json;

namespace {

struct CliArgs {
    RunConfig cfg;
    std::string suite;
    std::string out;
    std::vector<std::string> alphas;
};

void add_common_flags(CLI::App* cmd, CliArgs& a) {
    cmd->add_option("--n", a.cfg.n, "rank parameter n of K(2n+1)");
    cmd->add_option("--p", a.cfg.p, "characteristic (0 = rationals, else prime >= 5)");
    cmd->add_option("--q", a.cfg.q, "residue q of the quotient k[t]/(t^p - q t)");
    cmd->add_option("--tdeg", a.cfg.tdeg, "t-degree truncation for char-0 series");
    cmd->add_option("--family", a.cfg.family,
                    "twist family: vertical|horizontal|contact|ix|product");
    cmd->add_option("--k", a.cfg.k, "twist index k (1 <= k <= n)");
    cmd->add_option("--m", a.cfg.m, "horizontal companion index m");
    cmd->add_option("--seed", a.cfg.seed, "seed for sampled checks");
    cmd->add_option("--sample", a.cfg.sample, "sample size for seeded modular checks");
    cmd->add_option("--max-seconds", a.cfg.max_seconds,
                    "wall-clock budget; timed-out items are reported as skipped");
    cmd->add_option("--workers", a.cfg.workers,
                    "worker threads (0 = available parallelism)");
    cmd->add_option("--out", a.out, "also write the JSON report to this file");
    cmd->add_flag("--timings", a.cfg.timings,
                  "record wall-clock millis per check (breaks byte-identical output)");
}

EnvCtx<Rat> ctx_char0(int n, long tmax) {
    EnvCtx<Rat> ctx;
    ctx.alg = std::make_shared<KAlgebra<Rat>>(KMode::Char0Pos, n);
    ctx.tmax = tmax;
    return ctx;
}

// CLI11 strips the surrounding [ ] from bracketed positional values; accept
// the multi-index text form with or without them.
MultiIndex parse_alpha(std::string s, int n) {
    if (s.empty() || s.front() != '[') s = "[" + s + "]";
    return MultiIndex::parse(s, n);
}

TwistFamily parse_family(const std::string& f) {
    if (f == "vertical") return TwistFamily::Vertical;
    if (f == "horizontal") return TwistFamily::Horizontal;
    if (f == "contact") return TwistFamily::ContactVertical;
    if (f == "ix") return TwistFamily::CaseIx;
    throw UsageError("unknown family '" + f + "' (expected vertical|horizontal|contact|ix)");
}

TwistSpec spec_from(const CliArgs& a) {
    if (a.cfg.family.empty()) throw UsageError("--family is required");
    TwistSpec s{parse_family(a.cfg.family), a.cfg.n, a.cfg.k, a.cfg.m};
    try {
        s.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    return s;
}

std::string coeff_str(const Rat& c) { return c.get_str(); }
std::string coeff_str(const Fp& c) { return c.str(); }

// Serialize a rank-1 or rank-2 series element as the documented term list:
// {"left": monomial, "right": monomial (or "1"), "t": degree, "c": coefficient}.
template <class R>
json terms_json(const Tensor<R>& x) {
    json out = json::array();
    for (const auto& [k, c] : x) {
        if (is_zero(c)) continue;
        json t;
        t["left"] = k.legs[0].str();
        t["right"] = k.legs.size() > 1 ? k.legs[1].str() : std::string("1");
        t["t"] = k.t;
        t["c"] = coeff_str(c);
        out.push_back(std::move(t));
    }
    return out;
}

void emit(const json& j, const std::string& out) {
    std::string text = j.dump(2) + "\n";
    std::cout << text;
    if (!out.empty()) {
        std::ofstream f(out);
        f << text;
    }
}

int run_verify(const CliArgs& a) {
    SuiteReport rep = run_suite(a.suite, a.cfg);
    std::string text = report_json(rep);
    std::cout << text;
    if (!a.out.empty()) {
        std::ofstream f(a.out);
        f << text;
    }
    return rep.all_passed() ? 0 : 1;
}

int run_bracket(const CliArgs& a) {
    MultiIndex x = parse_alpha(a.alphas.at(0), a.cfg.n);
    MultiIndex y = parse_alpha(a.alphas.at(1), a.cfg.n);
    json out = json::array();
    if (a.cfg.p == 0) {
        for (const auto& [g, c] : k_bracket_pair_char0(x, y, KMode::Char0Pos)) {
            if (is_zero(c)) continue;
            out.push_back({{"alpha", g.str()}, {"c", coeff_str(c)}});
        }
    } else {
        for (const auto& [g, c] : k_bracket_pair_mod(x, y, a.cfg.p)) {
            if (is_zero(c)) continue;
            out.push_back({{"alpha", g.str()}, {"c", coeff_str(c)}});
        }
    }
    emit(out, a.out);
    return 0;
}

int run_delta_or_antipode(const CliArgs& a, bool antipode) {
    MultiIndex x = parse_alpha(a.alphas.at(0), a.cfg.n);
    TwistSpec s = spec_from(a);
    json out;
    if (a.cfg.p != 0) {
        if (a.cfg.p < 5 || !is_prime_small(a.cfg.p))
            throw UsageError("--p must be 0 or a prime >= 5");
        ModHopf hopf(a.cfg.n, a.cfg.p, a.cfg.q, s);
        out = antipode ? terms_json(hopf.s_gen(x)) : terms_json(hopf.delta_gen(x));
    } else {
        auto ctx = ctx_char0(a.cfg.n, a.cfg.tdeg);
        out = antipode ? terms_json(antipode_closed(ctx, s, x))
                       : terms_json(delta_closed(ctx, s, x));
    }
    emit(out, a.out);
    return 0;
}

int run_dims(const CliArgs& a) {
    if (a.cfg.p < 5 || !is_prime_small(a.cfg.p))
        throw UsageError("dims needs a prime --p >= 5");
    DimReport r = dims_report(a.cfg.n, a.cfg.p);
    json out;
    out["lie"] = r.lie_dim;
    out["utq"] = std::to_string(a.cfg.p) + "^" + std::to_string(r.lie_dim + 1);
    emit(out, a.out);
    return 0;
}

int run_twist_check(const CliArgs& a) {
    auto ctx = ctx_char0(a.cfg.n, a.cfg.tdeg);
    json out;
    bool ok;
    if (a.cfg.family == "product") {
        if (a.cfg.n < 2) throw UsageError("product twists need n >= 2");
        TwistSpec s1{TwistFamily::Vertical, a.cfg.n, 1};
        TwistSpec s2{TwistFamily::Vertical, a.cfg.n, 2};
        Tensor<Rat> f1 = twist_build(ctx, s1, Rat(0), false);
        Tensor<Rat> f2 = twist_build(ctx, s2, Rat(0), false);
        Tensor<Rat> f = tensor_mul(ctx, f1, f2);
        out["family"] = "product";
        out["commute"] = twist_commute_check(ctx, f1, f2);
        out["cocycle"] = twist_cocycle_check(ctx, f);
        out["counit"] = twist_counit_check(ctx, f);
        ok = out["commute"].get<bool>() && out["cocycle"].get<bool>() &&
             out["counit"].get<bool>();
    } else {
        TwistSpec s = spec_from(a);
        Tensor<Rat> f = twist_build(ctx, s, Rat(0), false);
        out["family"] = family_name(s.family);
        out["k"] = s.k;
        if (s.family == TwistFamily::Horizontal) out["m"] = s.m;
        out["cocycle"] = twist_cocycle_check(ctx, f);
        out["counit"] = twist_counit_check(ctx, f);
        ok = out["cocycle"].get<bool>() && out["counit"].get<bool>();
    }
    out["status"] = ok ? "pass" : "fail";
    emit(out, a.out);
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact verification kernel for generalized Cartan-type-K "
                 "Lie algebras and their Jordanian quantizations"};
    app.require_subcommand(1);
    CliArgs a;

    CLI::App* verify = app.add_subcommand("verify", "run a verification suite");
    verify->add_option("--suite", a.suite, "lie|twist|char0-quant|modular")
        ->required();
    add_common_flags(verify, a);

    CLI::App* bracket =
        app.add_subcommand("bracket", "Lie bracket of two basis derivations");
    bracket->add_option("alphas", a.alphas, "two multi-indices [a_{-n},..;a_0;a_1,..]")
        ->expected(2);
    add_common_flags(bracket, a);

    CLI::App* delta = app.add_subcommand("delta", "twisted coproduct of D_K(x^a)");
    delta->add_option("alphas", a.alphas, "one multi-index")->expected(1);
    add_common_flags(delta, a);

    CLI::App* antipode = app.add_subcommand("antipode", "twisted antipode of D_K(x^a)");
    antipode->add_option("alphas", a.alphas, "one multi-index")->expected(1);
    add_common_flags(antipode, a);

    CLI::App* dims = app.add_subcommand("dims", "exact dimension report");
    add_common_flags(dims, a);

    CLI::App* tcheck =
        app.add_subcommand("twist-check", "cocycle/counit axioms of one twist");
    add_common_flags(tcheck, a);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    if (const char* env = std::getenv("CARTANQ_SEED")) {
        try {
            a.cfg.seed = std::stoull(env);
        } catch (...) {
            std::cerr << "error: CARTANQ_SEED is not an integer\n";
            return 2;
        }
    }

    try {
        if (verify->parsed()) return run_verify(a);
        if (bracket->parsed()) return run_bracket(a);
        if (delta->parsed()) return run_delta_or_antipode(a, false);
        if (antipode->parsed()) return run_delta_or_antipode(a, true);
        if (dims->parsed()) return run_dims(a);
        if (tcheck->parsed()) return run_twist_check(a);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
