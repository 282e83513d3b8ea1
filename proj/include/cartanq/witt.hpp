// The generalized Witt algebra W (characteristic 0), the divided power
// algebra O(2n+1;1) and Jacobson-Witt algebra W(2n+1;1) (characteristic p),
// the two D_K maps, and the derivation-action oracle including p-th powers.
//
// Char-0 basis symbols: x^alpha * d_j, where d_j is the degree derivation
// x_j d/dx_j; the bracket pairing is d_j(beta) = beta_j.
// Modular basis symbols: x^{(alpha)} D_j with D_j x^{(beta)} = x^{(beta-e_j)}
// (divided-power differentiation); brackets are computed through the
// derivation action so the divided-power binomials are respected.
#ifndef CARTANQ_WITT_HPP
#define CARTANQ_WITT_HPP

#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cartanq/fp.hpp"
#include "cartanq/multiindex.hpp"
#include "cartanq/rational.hpp"

namespace cartanq {

// (exponent, derivation label)
using WittKey = std::pair<MultiIndex, int>;

template <class R>
using WittMap = std::map<WittKey, R>;

using WittC0 = WittMap<Rat>;
using WittMod = WittMap<Fp>;

using OElement = std::map<MultiIndex, Fp>;

template <class M, class K, class R>
void add_into(M& m, const K& key, const R& c) {
    if (is_zero(c)) return;
    auto it = m.find(key);
    if (it == m.end()) {
        m.emplace(key, c);
    } else {
        it->second += c;
        if (is_zero(it->second)) m.erase(it);
    }
}

// ---------------------------------------------------------------------------
// characteristic 0

// [x^a d_j, x^b d_l] = x^{a+b} (b_j d_l - a_l d_j)
inline WittC0 witt_bracket_char0(const WittC0& a, const WittC0& b) {
    WittC0 out;
    for (const auto& [ka, ca] : a) {
        for (const auto& [kb, cb] : b) {
            const auto& [ea, ja] = ka;
            const auto& [eb, jb] = kb;
            MultiIndex sum = ea + eb;
            Rat c = ca * cb;
            add_into(out, WittKey{sum, jb}, c * Rat(eb.at(ja)));
            add_into(out, WittKey{sum, ja}, -c * Rat(ea.at(jb)));
        }
    }
    return out;
}

// D_K(x^a) = (2 - sum_{i>=1}(a_i + a_{-i})) x^{a-e_0} d_0
//          + sum_i a_0 x^{a-e_0} (d_i + d_{-i})
//          + sum_i x^{a-e_i-e_{-i}} (a_{-i} d_i - a_i d_{-i})
inline WittC0 dk_char0(const MultiIndex& a) {
    int n = a.n();
    WittC0 out;
    long wing = 0;
    for (int i = 1; i <= n; ++i) wing += a.at(i) + a.at(-i);
    MultiIndex e0 = MultiIndex::unit(n, 0);
    add_into(out, WittKey{a - e0, 0}, Rat(2 - wing));
    for (int i = 1; i <= n; ++i) {
        add_into(out, WittKey{a - e0, i}, Rat(a.at(0)));
        add_into(out, WittKey{a - e0, -i}, Rat(a.at(0)));
        MultiIndex sh = a - MultiIndex::unit(n, i) - MultiIndex::unit(n, -i);
        add_into(out, WittKey{sh, i}, Rat(a.at(-i)));
        add_into(out, WittKey{sh, -i}, -Rat(a.at(i)));
    }
    return out;
}

// ---------------------------------------------------------------------------
// characteristic p

// x^{(a)} x^{(b)} = C(a+b, a) x^{(a+b)}, zero outside the box 0 <= . <= tau.
inline OElement o_multiply(const OElement& a, const OElement& b, std::int64_t p) {
    OElement out;
    for (const auto& [ea, ca] : a) {
        for (const auto& [eb, cb] : b) {
            MultiIndex sum = ea + eb;
            if (!sum.in_box(p)) continue;
            add_into(out, sum, ca * cb * mi_binom_fp(ea, eb, p));
        }
    }
    return out;
}

inline OElement o_monomial(const MultiIndex& a, std::int64_t p) {
    OElement out;
    if (a.in_box(p)) out.emplace(a, Fp(1, p));
    return out;
}

// D_j applied to a divided-power monomial: x^{(a)} -> x^{(a - e_j)}.
inline OElement o_diff(const MultiIndex& a, int j, std::int64_t p) {
    OElement out;
    MultiIndex sh = a - MultiIndex::unit(a.n(), j);
    if (sh.nonneg() && sh.in_box(p)) out.emplace(sh, Fp(1, p));
    return out;
}

// Action of D = sum c x^{(b)} D_j on f (both over F_p).
inline OElement derivation_apply(const WittMod& D, const OElement& f, std::int64_t p) {
    OElement out;
    for (const auto& [kd, cd] : D) {
        const auto& [eb, j] = kd;
        OElement bmono = o_monomial(eb, p);
        for (const auto& [ef, cf] : f) {
            for (const auto& [eg, cg] : o_multiply(bmono, o_diff(ef, j, p), p))
                add_into(out, eg, cd * cf * cg);
        }
    }
    return out;
}

// [f D_j, g D_l] = (f * D_j g) D_l - (g * D_l f) D_j with divided-power
// products; the commutator of derivations, expanded termwise.
inline WittMod witt_bracket_mod(const WittMod& a, const WittMod& b, std::int64_t p) {
    WittMod out;
    for (const auto& [ka, ca] : a) {
        for (const auto& [kb, cb] : b) {
            const auto& [ea, ja] = ka;
            const auto& [eb, jb] = kb;
            Fp c = ca * cb;
            for (const auto& [eg, cg] : o_multiply(o_monomial(ea, p), o_diff(eb, ja, p), p))
                add_into(out, WittKey{eg, jb}, c * cg);
            for (const auto& [eg, cg] : o_multiply(o_monomial(eb, p), o_diff(ea, jb, p), p))
                add_into(out, WittKey{eg, ja}, -(c * cg));
        }
    }
    return out;
}

// D_K(x^{(a)}) = (2 - sum(a_i + a_{-i})) x^{(a)} D_0
//             + sum_i x^{(a-e_0)} ( x^{(e_i)} D_i + x^{(e_{-i})} D_{-i} )
//             + sum_i ( x^{(a-e_{-i})} D_i - x^{(a-e_i)} D_{-i} )
// where the inline products are divided-power products.
inline WittMod dk_modular(const MultiIndex& a, std::int64_t p) {
    if (!a.in_box(p)) throw std::invalid_argument("dk_modular: index outside box");
    int n = a.n();
    WittMod out;
    long wing = 0;
    for (int i = 1; i <= n; ++i) wing += a.at(i) + a.at(-i);
    add_into(out, WittKey{a, 0}, Fp(2 - wing, p));
    MultiIndex e0 = MultiIndex::unit(n, 0);
    MultiIndex am0 = a - e0;
    bool has0 = am0.nonneg();
    for (int i = 1; i <= n; ++i) {
        if (has0) {
            OElement base = o_monomial(am0, p);
            for (const auto& [eg, cg] :
                 o_multiply(base, o_monomial(MultiIndex::unit(n, i), p), p))
                add_into(out, WittKey{eg, i}, cg);
            for (const auto& [eg, cg] :
                 o_multiply(base, o_monomial(MultiIndex::unit(n, -i), p), p))
                add_into(out, WittKey{eg, -i}, cg);
        }
        MultiIndex ami = a - MultiIndex::unit(n, -i);
        if (ami.nonneg()) add_into(out, WittKey{ami, i}, Fp(1, p));
        MultiIndex api = a - MultiIndex::unit(n, i);
        if (api.nonneg()) add_into(out, WittKey{api, -i}, Fp(-1, p));
    }
    return out;
}

// Raise the derivation D to its p-th operator power on O and re-express it in
// the x^{(a)} D_j basis.  W(2n+1;1) is closed under the p-map, so the
// re-expression must succeed; a failure signals an implementation bug and is
// reported via an exception.
WittMod derivation_p_power(const WittMod& D, int n, std::int64_t p);

}  // namespace cartanq

#endif  // CARTANQ_WITT_HPP
