// The Lie algebras K, K+ (char 0) and K'(2n+1;1), K(2n+1;1) (char p) in
// their intrinsic D_K(x^alpha) coordinates: closed-form bracket, grading,
// basis enumeration, dimension bookkeeping.
//
// Closed form (char 0):
//   [D_K(x^a), D_K(x^b)] = D_K( ((2-S_a) b_0 - (2-S_b) a_0) x^{a+b-e_0}
//                        + sum_{i=1}^n (a_{-i} b_i - a_i b_{-i}) x^{a+b-e_i-e_{-i}} )
// with S_a = sum_{i=1}^n (a_i + a_{-i}).
//
// Modular structure constants are never transcribed by hand: they come either
// from the Witt-derivation oracle (authoritative) or from the char-0 closed
// form times the divided-power factorial ratio gamma!/(alpha! beta!) -- the
// two routes are cross-asserted in the test suite.
#ifndef CARTANQ_CARTANK_HPP
#define CARTANQ_CARTANK_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <vector>

#include "cartanq/fp.hpp"
#include "cartanq/multiindex.hpp"
#include "cartanq/rational.hpp"
#include "cartanq/witt.hpp"

namespace cartanq {

enum class KMode { Char0Full, Char0Pos, Modular };

template <class R>
using KElement = std::map<MultiIndex, R>;  // sum c_a D_K(x^a) / D_K(x^{(a)})

// Integer structure constants of the char-0 closed form for one basis pair.
inline std::map<MultiIndex, Int> k_bracket_terms_int(const MultiIndex& a,
                                                     const MultiIndex& b) {
    a.check_arity(b);
    int n = a.n();
    std::map<MultiIndex, Int> out;
    long sa = 0, sb = 0;
    for (int i = 1; i <= n; ++i) {
        sa += a.at(i) + a.at(-i);
        sb += b.at(i) + b.at(-i);
    }
    Int c0 = Int(2 - sa) * b.at(0) - Int(2 - sb) * a.at(0);
    add_into(out, a + b - MultiIndex::unit(n, 0), c0);
    for (int i = 1; i <= n; ++i) {
        Int ci = Int(a.at(-i)) * b.at(i) - Int(a.at(i)) * b.at(-i);
        add_into(out, a + b - MultiIndex::unit(n, i) - MultiIndex::unit(n, -i), ci);
    }
    return out;
}

// Char-0 bracket of a single basis pair.
inline KElement<Rat> k_bracket_pair_char0(const MultiIndex& a, const MultiIndex& b,
                                          KMode mode) {
    KElement<Rat> out;
    for (const auto& [g, c] : k_bracket_terms_int(a, b)) {
        if (mode == KMode::Char0Pos && !g.nonneg())
            throw std::logic_error("k_bracket: left K+ with nonzero coefficient");
        add_into(out, g, Rat(c));
    }
    return out;
}

// Modular bracket of a single basis pair, via the identification
// D_K(x^{(a)}) = (1/a!) D_K(x^a): coefficient on D_K(x^{(g)}) is the char-0
// constant times g!/(a! b!), an integer, reduced mod p; out-of-box g drop.
inline KElement<Fp> k_bracket_pair_mod(const MultiIndex& a, const MultiIndex& b,
                                       std::int64_t p) {
    KElement<Fp> out;
    Int denom = mi_factorial(a) * mi_factorial(b);
    for (const auto& [g, c] : k_bracket_terms_int(a, b)) {
        if (!g.in_box(p)) continue;
        Rat coeff = Rat(c * mi_factorial(g)) / Rat(denom);
        if (!rat_is_integer(coeff))
            throw std::logic_error("k_bracket_pair_mod: non-integral coefficient");
        add_into(out, g, fp_from_int(coeff.get_num(), p));
    }
    return out;
}

// Same pair, through the Witt-derivation oracle: result as a WittMod element.
inline WittMod k_bracket_pair_mod_witt(const MultiIndex& a, const MultiIndex& b,
                                       std::int64_t p) {
    return witt_bracket_mod(dk_modular(a, p), dk_modular(b, p), p);
}

// Cross-assert the two modular routes for one pair: dk image of the closed
// candidate must reproduce the Witt-side bracket.
inline bool k_bracket_mod_consistent(const MultiIndex& a, const MultiIndex& b,
                                     std::int64_t p) {
    WittMod img;
    for (const auto& [g, c] : k_bracket_pair_mod(a, b, p))
        for (const auto& [kw, cw] : dk_modular(g, p)) add_into(img, kw, c * cw);
    return img == k_bracket_pair_mod_witt(a, b, p);
}

// Bilinear bracket extension over either coefficient ring.
template <class R, class PairBracket>
KElement<R> k_bracket_lin(const KElement<R>& x, const KElement<R>& y,
                          PairBracket&& pair) {
    KElement<R> out;
    for (const auto& [a, ca] : x)
        for (const auto& [b, cb] : y)
            for (const auto& [g, c] : pair(a, b)) add_into(out, g, ca * cb * c);
    return out;
}

inline KElement<Rat> k_bracket(const KElement<Rat>& x, const KElement<Rat>& y,
                               KMode mode = KMode::Char0Full) {
    return k_bracket_lin(x, y, [mode](const MultiIndex& a, const MultiIndex& b) {
        return k_bracket_pair_char0(a, b, mode);
    });
}

inline KElement<Fp> k_bracket_mod(const KElement<Fp>& x, const KElement<Fp>& y,
                                  std::int64_t p) {
    return k_bracket_lin(x, y, [p](const MultiIndex& a, const MultiIndex& b) {
        return k_bracket_pair_mod(a, b, p);
    });
}

inline bool k_congruence_case(int n, std::int64_t p) { return (2 * n + 4) % p == 0; }

// Basis of K(2n+1;1): box indices, excluding tau in the congruence case.
inline std::vector<MultiIndex> k_basis_modular(int n, std::int64_t p) {
    std::vector<MultiIndex> all = box_indices(n, p);
    if (!k_congruence_case(n, p)) return all;
    std::vector<MultiIndex> out;
    MultiIndex tau = MultiIndex::tau(n, p);
    for (auto& a : all)
        if (!(a == tau)) out.push_back(a);
    return out;
}

inline long k_grading(const MultiIndex& a) { return a.norm(); }

// Top grade s of K(2n+1;1) = (2n+2)(p-1)-2, one lower in the congruence case.
inline long k_top_grade(int n, std::int64_t p) {
    long s = (2L * n + 2) * (p - 1) - 2;
    return k_congruence_case(n, p) ? s - 1 : s;
}

// Memoizing bracket provider shared by the enveloping-algebra straightening.
// R = Rat (char-0 modes) or Fp (modular mode).
template <class R>
class KAlgebra {
  public:
    KAlgebra(KMode mode, int n, std::int64_t p = 0) : mode_(mode), n_(n), p_(p) {
        if constexpr (std::is_same_v<R, Fp>) {
            if (mode != KMode::Modular || p < 5)
                throw std::invalid_argument("KAlgebra<Fp>: modular mode needs p >= 5");
        } else {
            if (mode == KMode::Modular)
                throw std::invalid_argument("KAlgebra<Rat>: modular mode needs Fp");
        }
    }

    KMode mode() const { return mode_; }
    int n() const { return n_; }
    std::int64_t p() const { return p_; }

    R one() const {
        if constexpr (std::is_same_v<R, Fp>)
            return Fp(1, p_);
        else
            return Rat(1);
    }
    R from_long(long v) const {
        if constexpr (std::is_same_v<R, Fp>)
            return Fp(v, p_);
        else
            return Rat(v);
    }

    const KElement<R>& bracket(const MultiIndex& a, const MultiIndex& b) const {
        auto key = std::make_pair(a, b);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        KElement<R> val;
        if constexpr (std::is_same_v<R, Fp>)
            val = k_bracket_pair_mod(a, b, p_);
        else
            val = k_bracket_pair_char0(a, b, mode_);
        return cache_.emplace(std::move(key), std::move(val)).first->second;
    }

  private:
    KMode mode_;
    int n_;
    std::int64_t p_;
    mutable std::map<std::pair<MultiIndex, MultiIndex>, KElement<R>> cache_;
};

}  // namespace cartanq

#endif  // CARTANQ_CARTANK_HPP
