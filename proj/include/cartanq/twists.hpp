// Jordanian-type Drinfeld twists on U(K+)[[t]]: the catalogued (h, e) pairs
// with [h, e] = e, the two-tensor series F_a and its partner, the elements
// u_a / v_a, twist-axiom checks (cocycle + counit), products of commuting
// twists, the classical r-matrix, and the exp(h (x) ln(1-et)) normal form.
#ifndef CARTANQ_TWISTS_HPP
#define CARTANQ_TWISTS_HPP

#include <optional>
#include <string>
#include <vector>

#include "cartanq/env.hpp"

namespace cartanq {

enum class TwistFamily { Vertical, Horizontal, ContactVertical, CaseIx };

inline std::string family_name(TwistFamily f) {
    switch (f) {
        case TwistFamily::Vertical: return "vertical";
        case TwistFamily::Horizontal: return "horizontal";
        case TwistFamily::ContactVertical: return "contact";
        case TwistFamily::CaseIx: return "ix";
    }
    return "?";
}

// sign sigma(m): -1 for m > 0, +1 for m < 0 (horizontal family bookkeeping)
inline int sigma_sign(int m) { return m > 0 ? -1 : 1; }

struct TwistSpec {
    TwistFamily family;
    int n;
    int k;      // 1 <= k <= n
    int m = 0;  // horizontal only: 1 <= |m| <= n, |m| != k

    MultiIndex h_index() const {
        if (family == TwistFamily::CaseIx) return MultiIndex::unit(n, 0);
        return MultiIndex::unit(n, k) + MultiIndex::unit(n, -k);
    }
    MultiIndex e_index() const {
        switch (family) {
            case TwistFamily::Vertical:
                return MultiIndex::unit(n, k).scaled(2) + MultiIndex::unit(n, -k);
            case TwistFamily::Horizontal:
                return MultiIndex::unit(n, k) + MultiIndex::unit(n, m);
            case TwistFamily::ContactVertical:
            case TwistFamily::CaseIx:
                return MultiIndex::unit(n, k) + MultiIndex::unit(n, 0);
        }
        throw std::logic_error("unreachable");
    }

    void validate() const {
        if (k < 1 || k > n) throw std::invalid_argument("TwistSpec: need 1 <= k <= n");
        if (family == TwistFamily::Horizontal) {
            if (n < 2) throw std::invalid_argument("TwistSpec: horizontal needs n >= 2");
            if (m == 0 || std::abs(m) > n || std::abs(m) == k)
                throw std::invalid_argument("TwistSpec: horizontal needs 1 <= |m| <= n, |m| != k");
        }
        // [h, e] = e in K
        KElement<Rat> br = k_bracket_pair_char0(h_index(), e_index(), KMode::Char0Pos);
        KElement<Rat> want{{e_index(), Rat(1)}};
        if (br != want) throw std::logic_error("TwistSpec: [h, e] != e");
    }
};

// All basic twists available at a given rank (vertical k<=n; horizontal all
// (k,m); contact-vertical k<=n; case-ix k<=n).
inline std::vector<TwistSpec> twist_catalog(int n) {
    std::vector<TwistSpec> out;
    for (int k = 1; k <= n; ++k) out.push_back({TwistFamily::Vertical, n, k});
    if (n >= 2)
        for (int k = 1; k <= n; ++k)
            for (int m = -n; m <= n; ++m)
                if (m != 0 && std::abs(m) != k)
                    out.push_back({TwistFamily::Horizontal, n, k, m});
    for (int k = 1; k <= n; ++k) out.push_back({TwistFamily::ContactVertical, n, k});
    for (int k = 1; k <= n; ++k) out.push_back({TwistFamily::CaseIx, n, k});
    return out;
}

// F_a = sum_r (-1)^r/r! h_a^[r] (x) e^r t^r  (kind=false: the twist itself)
// partner = sum_r 1/r! h_a^<r> (x) e^r t^r   (kind=true: its inverse)
inline Tensor<Rat> twist_build(const EnvCtx<Rat>& ctx, const MultiIndex& h,
                               const MultiIndex& e, const Rat& a, bool partner) {
    long rmax = ctx.tmax >= 0 ? ctx.tmax : 8;
    Tensor<Rat> out;
    EnvElement<Rat> epow = env_one(ctx);
    for (long r = 0; r <= rmax; ++r) {
        Rat c = Rat(1) / Rat(factorial(r));
        if (!partner && r % 2) c = -c;
        EnvElement<Rat> hf = h_factorial(ctx, h, a, r, /*rising=*/partner);
        Tensor<Rat> term = tensor_mul(ctx, tensor_from_env(hf, 2, 0, r),
                                      tensor_from_env(epow, 2, 1, 0));
        scaled_add(out, term, c);
        if (r < rmax) epow = env_mul(ctx, epow, env_gen(ctx, e));
    }
    return out;
}

inline Tensor<Rat> twist_build(const EnvCtx<Rat>& ctx, const TwistSpec& spec,
                               const Rat& a, bool partner) {
    spec.validate();
    return twist_build(ctx, spec.h_index(), spec.e_index(), a, partner);
}

// u_a = m(S_0 (x) Id)(partner_a) = sum (-1)^r/r! h_{-a}^[r] e^r t^r
// v_a = m(Id (x) S_0)(F_a)       = sum       1/r! h_a^[r]  e^r t^r
inline Tensor<Rat> twist_u(const EnvCtx<Rat>& ctx, const MultiIndex& h,
                           const MultiIndex& e, const Rat& a) {
    Tensor<Rat> f = twist_build(ctx, h, e, a, /*partner=*/true);
    return tensor_merge_legs(ctx, tensor_apply_antipode0(ctx, f, 0), 0, 1);
}

inline Tensor<Rat> twist_v(const EnvCtx<Rat>& ctx, const MultiIndex& h,
                           const MultiIndex& e, const Rat& a) {
    Tensor<Rat> f = twist_build(ctx, h, e, a, /*partner=*/false);
    return tensor_merge_legs(ctx, tensor_apply_antipode0(ctx, f, 1), 0, 1);
}

// F_a * partner_b = 1 (x) (1-et)^{a-b}
inline bool twist_fa_fb_check(const EnvCtx<Rat>& ctx, const MultiIndex& h,
                              const MultiIndex& e, const Rat& a, const Rat& b) {
    Tensor<Rat> prod = tensor_mul(ctx, twist_build(ctx, h, e, a, false),
                                  twist_build(ctx, h, e, b, true));
    if (!rat_is_integer(a - b)) return false;
    long z = static_cast<long>(Rat(a - b).get_num().get_si());
    Tensor<Rat> want = tensor_insert_unit_leg(
        one_minus_et_pow(ctx, env_gen(ctx, e), z), 0);
    return prod == want;
}

// v_a * u_b = (1-et)^{-(a+b)}
inline bool twist_vu_check(const EnvCtx<Rat>& ctx, const MultiIndex& h,
                           const MultiIndex& e, const Rat& a, const Rat& b) {
    Tensor<Rat> prod = tensor_mul(ctx, twist_v(ctx, h, e, a), twist_u(ctx, h, e, b));
    if (!rat_is_integer(a + b)) return false;
    long z = static_cast<long>(Rat(a + b).get_num().get_si());
    return prod == one_minus_et_pow(ctx, env_gen(ctx, e), -z);
}

// Twist axioms: (F (x) 1)(Delta_0 (x) Id)(F) = (1 (x) F)(Id (x) Delta_0)(F)
// and (eps (x) Id)(F) = 1 = (Id (x) eps)(F).
inline bool twist_cocycle_check(const EnvCtx<Rat>& ctx, const Tensor<Rat>& f) {
    Tensor<Rat> lhs = tensor_mul(ctx, tensor_insert_unit_leg(f, 2),
                                 tensor_apply_delta0(ctx, f, 0));
    Tensor<Rat> rhs = tensor_mul(ctx, tensor_insert_unit_leg(f, 0),
                                 tensor_apply_delta0(ctx, f, 1));
    return lhs == rhs;
}

inline bool twist_counit_check(const EnvCtx<Rat>& ctx, const Tensor<Rat>& f) {
    Tensor<Rat> unit = tensor_unit(ctx, 1);
    return tensor_apply_counit0(f, 0) == unit && tensor_apply_counit0(f, 1) == unit;
}

// Two twists commute as rank-2 series elements.
inline bool twist_commute_check(const EnvCtx<Rat>& ctx, const Tensor<Rat>& f,
                                const Tensor<Rat>& g) {
    return tensor_mul(ctx, f, g) == tensor_mul(ctx, g, f);
}

// The mixed coproduct relations behind "the product of commuting twists is a
// twist": (F (x) 1) commutes with (D0 (x) Id)(G), and (1 (x) F) commutes with
// (Id (x) D0)(G) -- they live over elementwise-commuting carrier subalgebras.
inline bool twist_product_relations_check(const EnvCtx<Rat>& ctx, const Tensor<Rat>& f,
                                          const Tensor<Rat>& g) {
    Tensor<Rat> a1 = tensor_insert_unit_leg(f, 2), b1 = tensor_apply_delta0(ctx, g, 0);
    Tensor<Rat> a2 = tensor_insert_unit_leg(f, 0), b2 = tensor_apply_delta0(ctx, g, 1);
    return tensor_mul(ctx, a1, b1) == tensor_mul(ctx, b1, a1) &&
           tensor_mul(ctx, a2, b2) == tensor_mul(ctx, b2, a2);
}

// F = exp(h (x) ln(1-et)), the Jordanian normal form.
inline bool jordanian_equiv_check(const EnvCtx<Rat>& ctx, const MultiIndex& h,
                                  const MultiIndex& e) {
    long nmax = ctx.tmax >= 0 ? ctx.tmax : 8;
    // sigma = ln(1-et) = -sum_{r>=1} e^r t^r / r, in leg 1
    Tensor<Rat> x;  // h (x) sigma
    EnvElement<Rat> epow = env_gen(ctx, e);
    for (long r = 1; r <= nmax; ++r) {
        Tensor<Rat> term = tensor_mul(ctx, tensor_from_env(env_gen(ctx, h), 2, 0, 0),
                                      tensor_from_env(epow, 2, 1, r));
        scaled_add(x, term, Rat(-1) / Rat(r));
        if (r < nmax) epow = env_mul(ctx, epow, env_gen(ctx, e));
    }
    Tensor<Rat> expx = tensor_unit(ctx, 2), xp = tensor_unit(ctx, 2);
    for (long i = 1; i <= nmax; ++i) {
        xp = tensor_mul(ctx, xp, x);
        scaled_add(expx, xp, Rat(1) / Rat(factorial(i)));
    }
    return expx == twist_build(ctx, h, e, Rat(0), false);
}

// r = h (x) e - e (x) h, and the classical Yang-Baxter equation
// [r12, r13] + [r12, r23] + [r13, r23] = 0 inside U(K+)^{(x)3}.
inline Tensor<Rat> rmatrix_build(const EnvCtx<Rat>& ctx, const MultiIndex& h,
                                 const MultiIndex& e) {
    Tensor<Rat> r;
    scaled_add(r, tensor_mul(ctx, tensor_from_env(env_gen(ctx, h), 2, 0),
                             tensor_from_env(env_gen(ctx, e), 2, 1)),
               Rat(1));
    scaled_add(r, tensor_mul(ctx, tensor_from_env(env_gen(ctx, e), 2, 0),
                             tensor_from_env(env_gen(ctx, h), 2, 1)),
               Rat(-1));
    return r;
}

inline bool cybe_check(const EnvCtx<Rat>& ctx, const Tensor<Rat>& r) {
    // embed r into legs (i,j) of the rank-3 algebra
    auto embed = [&](int i, int j) {
        Tensor<Rat> out;
        for (const auto& [k, c] : r) {
            TKey nk{k.t, std::vector<PBWMonomial>(3)};
            nk.legs[i] = k.legs[0];
            nk.legs[j] = k.legs[1];
            add_into(out, nk, c);
        }
        return out;
    };
    Tensor<Rat> r12 = embed(0, 1), r13 = embed(0, 2), r23 = embed(1, 2);
    auto comm = [&](const Tensor<Rat>& a, const Tensor<Rat>& b) {
        return map_sub(tensor_mul(ctx, a, b), tensor_mul(ctx, b, a));
    };
    Tensor<Rat> acc = comm(r12, r13);
    scaled_add(acc, comm(r12, r23), Rat(1));
    scaled_add(acc, comm(r13, r23), Rat(1));
    // skew-symmetry r + r21 = 0
    Tensor<Rat> skew = r;
    for (const auto& [k, c] : r) {
        TKey fk{k.t, {k.legs[1], k.legs[0]}};
        add_into(skew, fk, c);
    }
    return acc.empty() && skew.empty();
}

}  // namespace cartanq

#endif  // CARTANQ_TWISTS_HPP
