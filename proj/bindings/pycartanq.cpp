// Python bindings: the main kernel operations (brackets, twisted coproducts
// and antipodes, dimension reports) and the verification suites.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cartanq/quantmod.hpp"
#include "cartanq/suites.hpp"

namespace py = pybind11;
using namespace cartanq;

namespace {

EnvCtx<Rat> ctx_char0(int n, long tmax) {
    EnvCtx<Rat> ctx;
    ctx.alg = std::make_shared<KAlgebra<Rat>>(KMode::Char0Pos, n);
    ctx.tmax = tmax;
    return ctx;
}

TwistFamily parse_family(const std::string& f) {
    if (f == "vertical") return TwistFamily::Vertical;
    if (f == "horizontal") return TwistFamily::Horizontal;
    if (f == "contact") return TwistFamily::ContactVertical;
    if (f == "ix") return TwistFamily::CaseIx;
    throw py::value_error("unknown family '" + f + "'");
}

TwistSpec make_spec(const std::string& family, int n, int k, int m) {
    TwistSpec s{parse_family(family), n, k, m};
    s.validate();
    return s;
}

std::string coeff_str(const Rat& c) { return c.get_str(); }
std::string coeff_str(const Fp& c) { return c.str(); }

template <class R>
py::list terms_list(const Tensor<R>& x) {
    py::list out;
    for (const auto& [key, c] : x) {
        if (is_zero(c)) continue;
        py::dict t;
        t["left"] = key.legs[0].str();
        t["right"] = key.legs.size() > 1 ? key.legs[1].str() : std::string("1");
        t["t"] = key.t;
        t["c"] = coeff_str(c);
        out.append(std::move(t));
    }
    return out;
}

py::list bracket(const std::string& a, const std::string& b, int n,
                 std::int64_t p) {
    MultiIndex x = MultiIndex::parse(a, n), y = MultiIndex::parse(b, n);
    py::list out;
    auto push = [&out](const std::string& alpha, const std::string& c) {
        py::dict t;
        t["alpha"] = alpha;
        t["c"] = c;
        out.append(std::move(t));
    };
    if (p == 0) {
        for (const auto& [g, c] : k_bracket_pair_char0(x, y, KMode::Char0Pos))
            if (!is_zero(c)) push(g.str(), coeff_str(c));
    } else {
        for (const auto& [g, c] : k_bracket_pair_mod(x, y, p))
            if (!is_zero(c)) push(g.str(), coeff_str(c));
    }
    return out;
}

py::list delta(const std::string& alpha, const std::string& family, int n,
               int k, int m, std::int64_t p, long q, long tdeg) {
    MultiIndex a = MultiIndex::parse(alpha, n);
    TwistSpec s = make_spec(family, n, k, m);
    if (p != 0) {
        ModHopf hopf(n, p, q, s);
        return terms_list(hopf.delta_gen(a));
    }
    auto ctx = ctx_char0(n, tdeg);
    return terms_list(delta_closed(ctx, s, a));
}

py::list antipode(const std::string& alpha, const std::string& family, int n,
                  int k, int m, std::int64_t p, long q, long tdeg) {
    MultiIndex a = MultiIndex::parse(alpha, n);
    TwistSpec s = make_spec(family, n, k, m);
    if (p != 0) {
        ModHopf hopf(n, p, q, s);
        return terms_list(hopf.s_gen(a));
    }
    auto ctx = ctx_char0(n, tdeg);
    return terms_list(antipode_closed(ctx, s, a));
}

py::dict dims(int n, std::int64_t p) {
    DimReport r = dims_report(n, p);
    py::dict out;
    out["lie"] = r.lie_dim;
    out["u"] = r.u_dim.get_str();
    out["utq"] = std::to_string(p) + "^" + std::to_string(r.lie_dim + 1);
    out["congruence"] = r.congruence;
    out["top_grade"] = r.top_grade;
    return out;
}

std::string verify(const std::string& suite, int n, std::int64_t p, long q,
                   long tdeg, const std::string& family, int k, int m,
                   std::uint64_t seed, long sample, double max_seconds,
                   int workers) {
    RunConfig cfg;
    cfg.n = n;
    cfg.p = p;
    cfg.q = q;
    cfg.tdeg = tdeg;
    cfg.family = family;
    cfg.k = k;
    cfg.m = m;
    cfg.seed = seed;
    cfg.sample = sample;
    cfg.max_seconds = max_seconds;
    cfg.workers = workers;
    return report_json(run_suite(suite, cfg));
}

}  // namespace

PYBIND11_MODULE(pycartanq, mod) {
    mod.doc() =
        "exact kernel for generalized Cartan-type-K Lie algebras and their "
        "Jordanian quantizations";
    mod.def("bracket", &bracket, py::arg("a"), py::arg("b"), py::arg("n"),
            py::arg("p") = 0,
            "Lie bracket of two basis derivations, as a list of "
            "{alpha, c} terms");
    mod.def("delta", &delta, py::arg("alpha"), py::arg("family"), py::arg("n"),
            py::arg("k") = 1, py::arg("m") = 2, py::arg("p") = 0,
            py::arg("q") = 0, py::arg("tdeg") = 3,
            "twisted coproduct of D_K(x^alpha) as a list of "
            "{left, right, t, c} terms");
    mod.def("antipode", &antipode, py::arg("alpha"), py::arg("family"),
            py::arg("n"), py::arg("k") = 1, py::arg("m") = 2, py::arg("p") = 0,
            py::arg("q") = 0, py::arg("tdeg") = 3,
            "twisted antipode of D_K(x^alpha)");
    mod.def("dims", &dims, py::arg("n"), py::arg("p"),
            "exact dimension report for K(2n+1;1) and u_{t,q}");
    mod.def("verify", &verify, py::arg("suite"), py::arg("n") = 1,
            py::arg("p") = 0, py::arg("q") = 0, py::arg("tdeg") = 3,
            py::arg("family") = "", py::arg("k") = 1, py::arg("m") = 2,
            py::arg("seed") = 0, py::arg("sample") = 25,
            py::arg("max_seconds") = -1.0, py::arg("workers") = 0,
            "run a verification suite and return its JSON report");

    py::register_exception<UsageError>(mod, "UsageError", PyExc_ValueError);
}
