// U(K+) and its restricted quotients as PBW-normalized noncommutative
// polynomial rings, plus tensor squares/cubes and truncated t-series.
//
// A PBW monomial is a strictly increasing product of basis symbols
// D_K(x^alpha) under the graded-lex IndexOrder; straightening uses
// x y = y x + [x, y] with brackets supplied by a KAlgebra.  In restricted
// ("u") contexts the p-relations are applied on top: g^p -> g for the toral
// generators (alpha = e_i + e_{-i} or e_0, whose p-th power as a derivation
// is themselves) and g^p -> 0 for every other generator; both substitutions
// are valid anywhere in a word because g^p - g^{[p]} is central in U.
//
// The formal parameter t lives in the term key (never in the coefficient
// ring); char-0 contexts truncate degrees > tmax, modular contexts fold
// t^p -> q t.
#ifndef CARTANQ_ENV_HPP
#define CARTANQ_ENV_HPP

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <unordered_map>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cartanq/cartank.hpp"

namespace cartanq {

struct PBWMonomial {
    // (generator, exponent >= 1), strictly increasing in IndexOrder
    std::vector<std::pair<MultiIndex, long>> factors;

    bool is_one() const { return factors.empty(); }
    long length() const {
        long s = 0;
        for (const auto& f : factors) s += f.second;
        return s;
    }
    friend bool operator==(const PBWMonomial&, const PBWMonomial&) = default;
    friend auto operator<=>(const PBWMonomial&, const PBWMonomial&) = default;

    std::string str() const {
        if (factors.empty()) return "1";
        std::ostringstream os;
        bool first = true;
        for (const auto& [g, e] : factors) {
            if (!first) os << '*';
            first = false;
            os << 'D' << g.str();
            if (e > 1) os << '^' << e;
        }
        return os.str();
    }
};

template <class R>
using EnvElement = std::map<PBWMonomial, R>;

struct TKey {
    long t = 0;
    std::vector<PBWMonomial> legs;
    friend bool operator==(const TKey&, const TKey&) = default;
    friend auto operator<=>(const TKey&, const TKey&) = default;
};

// Rank-r tensor over U with a t-degree per term; rank 1 doubles as a plain
// t-series over U.
template <class R>
using Tensor = std::map<TKey, R>;

template <class R>
struct EnvCtx {
    std::shared_ptr<const KAlgebra<R>> alg;
    bool restricted = false;    // apply the u-quotient p-relations
    long tmax = -1;             // char-0 truncation (-1 = keep all degrees)
    bool fold_modular = false;  // t^p -> q t (modular series contexts)
    Fp q;

    int n() const { return alg->n(); }
    std::int64_t p() const { return alg->p(); }
    R one() const { return alg->one(); }
    R from_long(long v) const { return alg->from_long(v); }

    // Generators with g^{[p]} = g (the toral ones): e_i + e_{-i}, e_0.
    bool is_toral(const MultiIndex& g) const {
        if (g.total() == 1 && g.at(0) == 1) return true;
        if (g.total() != 2 || g.at(0) != 0) return false;
        for (int i = 1; i <= n(); ++i)
            if (g.at(i) == 1 && g.at(-i) == 1) return true;
        return false;
    }

    mutable std::map<std::pair<PBWMonomial, MultiIndex>, EnvElement<R>> straighten_cache;
    mutable std::map<PBWMonomial, Tensor<R>> delta0_cache;
    // interning table: monomial <-> dense integer id, shared by the caches below
    mutable std::map<PBWMonomial, int> mono_id;
    mutable std::vector<const PBWMonomial*> mono_by_id;
    // normal form of (monomial * monomial) keyed by the pair of ids, stored
    // compactly as id/coefficient pairs
    mutable std::unordered_map<std::uint64_t, std::vector<std::pair<int, R>>>
        mono_mul_cache;
    // id-based straightening cache: (monomial id, generator id) -> normal form
    mutable std::map<MultiIndex, int> gen_id;
    mutable std::unordered_map<std::uint64_t, std::vector<std::pair<int, R>>>
        straighten_c;
};

template <class R>
int mono_intern(const EnvCtx<R>& ctx, const PBWMonomial& m) {
    auto [it, inserted] = ctx.mono_id.try_emplace(m, static_cast<int>(ctx.mono_by_id.size()));
    if (inserted) ctx.mono_by_id.push_back(&it->first);
    return it->second;
}

// ---------------------------------------------------------------------------
// element helpers

template <class R>
EnvElement<R> env_one(const EnvCtx<R>& ctx) {
    return {{PBWMonomial{}, ctx.one()}};
}

template <class R>
EnvElement<R> env_gen(const EnvCtx<R>& ctx, const MultiIndex& g) {
    return {{PBWMonomial{{{g, 1}}}, ctx.one()}};
}

template <class R>
EnvElement<R> env_from_k(const EnvCtx<R>&, const KElement<R>& x) {
    EnvElement<R> out;
    for (const auto& [g, c] : x) add_into(out, PBWMonomial{{{g, 1}}}, c);
    return out;
}

template <class M, class R>
void scaled_add(M& into, const M& from, const R& c) {
    if (is_zero(c)) return;
    for (const auto& [k, v] : from) add_into(into, k, v * c);
}

template <class M>
M map_sub(const M& a, const M& b) {
    M out = a;
    for (const auto& [k, v] : b) add_into(out, k, -v);
    return out;
}

// Apply the restricted p-relations to one monomial; appends the surviving
// (possibly rescaled) monomial into `out`.
template <class R>
void env_push_reduced(const EnvCtx<R>& ctx, EnvElement<R>& out, PBWMonomial m,
                      const R& c) {
    if (is_zero(c)) return;
    if (ctx.restricted) {
        const std::int64_t p = ctx.p();
        for (auto it = m.factors.begin(); it != m.factors.end();) {
            if (it->second >= p) {
                if (!ctx.is_toral(it->first)) return;  // g^p = 0
                while (it->second >= p) it->second -= p - 1;  // g^p = g
            }
            ++it;
        }
    }
    add_into(out, m, c);
}

template <class R>
EnvElement<R> env_times_gen(const EnvCtx<R>& ctx, const EnvElement<R>& a,
                            const MultiIndex& g);

// Normal form of (normal monomial m) * generator g, cached by reference.
template <class R>
const EnvElement<R>& mono_times_gen(const EnvCtx<R>& ctx, const PBWMonomial& m,
                                    const MultiIndex& g) {
    auto key = std::make_pair(m, g);
    if (auto it = ctx.straighten_cache.find(key); it != ctx.straighten_cache.end())
        return it->second;

    EnvElement<R> out;
    if (m.is_one() || m.factors.back().first <= g) {
        PBWMonomial r = m;
        if (!r.factors.empty() && r.factors.back().first == g)
            r.factors.back().second += 1;
        else
            r.factors.push_back({g, 1});
        env_push_reduced(ctx, out, std::move(r), ctx.one());
    } else {
        // m = m1 * x with x > g:  m*g = (m1*g)*x + m1*[x, g]
        MultiIndex x = m.factors.back().first;
        PBWMonomial m1 = m;
        if (--m1.factors.back().second == 0) m1.factors.pop_back();

        out = env_times_gen(ctx, mono_times_gen(ctx, m1, g), x);
        for (const auto& [z, c] : ctx.alg->bracket(x, g))
            scaled_add(out, mono_times_gen(ctx, m1, z), c);
    }
    return ctx.straighten_cache.emplace(std::move(key), std::move(out)).first->second;
}

template <class R>
EnvElement<R> env_times_gen(const EnvCtx<R>& ctx, const EnvElement<R>& a,
                            const MultiIndex& g) {
    EnvElement<R> out;
    for (const auto& [m, c] : a) scaled_add(out, mono_times_gen(ctx, m, g), c);
    return out;
}

template <class R>
EnvElement<R> env_times_mono(const EnvCtx<R>& ctx, const EnvElement<R>& a,
                             const PBWMonomial& m) {
    EnvElement<R> cur = a;
    for (const auto& [g, e] : m.factors)
        for (long i = 0; i < e; ++i) cur = env_times_gen(ctx, cur, g);
    return cur;
}

template <class R>
using CompactElem = std::vector<std::pair<int, R>>;

template <class R>
void compact_sorted(std::unordered_map<int, R>& acc, CompactElem<R>& out) {
    out.clear();
    out.reserve(acc.size());
    for (auto& [id, c] : acc)
        if (!is_zero(c)) out.emplace_back(id, std::move(c));
    std::sort(out.begin(), out.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
}

template <class R>
void compact_add(std::unordered_map<int, R>& acc, const CompactElem<R>& x, const R& c) {
    for (const auto& [id, v] : x) {
        auto [it, inserted] = acc.try_emplace(id, v * c);
        if (!inserted) it->second += v * c;
    }
}

// Normal form of (normal monomial m) * generator g on interned ids.
template <class R>
const CompactElem<R>& mono_times_gen_c(const EnvCtx<R>& ctx, int idm,
                                       const MultiIndex& g) {
    const int idg = [&] {
        auto [it, inserted] = ctx.gen_id.try_emplace(g, static_cast<int>(ctx.gen_id.size()));
        (void)inserted;
        return it->second;
    }();
    const std::uint64_t key =
        (static_cast<std::uint64_t>(static_cast<std::uint32_t>(idm)) << 32) |
        static_cast<std::uint32_t>(idg);
    if (auto it = ctx.straighten_c.find(key); it != ctx.straighten_c.end())
        return it->second;

    const PBWMonomial& m = *ctx.mono_by_id[idm];
    CompactElem<R> out;
    if (m.is_one() || m.factors.back().first <= g) {
        PBWMonomial r = m;
        if (!r.factors.empty() && r.factors.back().first == g)
            r.factors.back().second += 1;
        else
            r.factors.push_back({g, 1});
        EnvElement<R> tmp;
        env_push_reduced(ctx, tmp, std::move(r), ctx.one());
        for (const auto& [rm, c] : tmp) out.emplace_back(mono_intern(ctx, rm), c);
    } else {
        // m = m1 * x with x > g:  m*g = (m1*g)*x + m1*[x, g]
        MultiIndex x = m.factors.back().first;
        PBWMonomial m1 = m;
        if (--m1.factors.back().second == 0) m1.factors.pop_back();
        const int idm1 = mono_intern(ctx, m1);

        std::unordered_map<int, R> acc;
        // copy: recursive calls may rehash the cache under a held reference
        CompactElem<R> mg = mono_times_gen_c(ctx, idm1, g);
        for (const auto& [id, c] : mg) compact_add(acc, mono_times_gen_c(ctx, id, x), c);
        for (const auto& [z, c] : ctx.alg->bracket(x, g))
            compact_add(acc, mono_times_gen_c(ctx, idm1, z), c);
        compact_sorted(acc, out);
    }
    return ctx.straighten_c.emplace(key, std::move(out)).first->second;
}

// Normal form of (normal monomial) * (normal monomial) by interned ids.
template <class R>
CompactElem<R> mono_mul_nocache(const EnvCtx<R>& ctx, int ida, int idb) {
    CompactElem<R> cur{{ida, ctx.one()}};
    for (const auto& [g, e] : ctx.mono_by_id[idb]->factors) {
        for (long i = 0; i < e; ++i) {
            std::unordered_map<int, R> acc;
            for (const auto& [id, c] : cur) compact_add(acc, mono_times_gen_c(ctx, id, g), c);
            compact_sorted(acc, cur);
        }
    }
    return cur;
}

// Cached variant, used for the leading tensor legs whose monomials recur
// heavily across products (the trailing leg carries the blowup and is
// deduplicated by grouping instead, so it never enters this cache).
template <class R>
const CompactElem<R>& mono_times_mono(const EnvCtx<R>& ctx, int ida, int idb) {
    const std::uint64_t key =
        (static_cast<std::uint64_t>(static_cast<std::uint32_t>(ida)) << 32) |
        static_cast<std::uint32_t>(idb);
    auto it = ctx.mono_mul_cache.find(key);
    if (it != ctx.mono_mul_cache.end()) return it->second;
    return ctx.mono_mul_cache.emplace(key, mono_mul_nocache(ctx, ida, idb))
        .first->second;
}

template <class R>
EnvElement<R> env_mul(const EnvCtx<R>& ctx, const EnvElement<R>& a,
                      const EnvElement<R>& b) {
    EnvElement<R> out;
    for (const auto& [mb, cb] : b) scaled_add(out, env_times_mono(ctx, a, mb), cb);
    return out;
}

template <class R>
EnvElement<R> env_pow(const EnvCtx<R>& ctx, const EnvElement<R>& a, long e) {
    EnvElement<R> acc = env_one(ctx);
    for (long i = 0; i < e; ++i) acc = env_mul(ctx, acc, a);
    return acc;
}

// Re-normalize a word of generators (used by straightening/confluence tests).
template <class R>
EnvElement<R> env_normalize(const EnvCtx<R>& ctx,
                            const std::vector<std::pair<MultiIndex, long>>& word) {
    EnvElement<R> cur = env_one(ctx);
    for (const auto& [g, e] : word)
        for (long i = 0; i < e; ++i) cur = env_times_gen(ctx, cur, g);
    return cur;
}

// ---------------------------------------------------------------------------
// tensors and series

inline TKey tkey_unit(int rank) { return TKey{0, std::vector<PBWMonomial>(rank)}; }

template <class R>
Tensor<R> tensor_unit(const EnvCtx<R>& ctx, int rank) {
    return {{tkey_unit(rank), ctx.one()}};
}

// Embed an EnvElement into leg `pos` of a rank-`rank` tensor at t-degree td.
template <class R>
Tensor<R> tensor_from_env(const EnvElement<R>& a, int rank, int pos, long td = 0) {
    Tensor<R> out;
    for (const auto& [m, c] : a) {
        TKey k{td, std::vector<PBWMonomial>(rank)};
        k.legs[pos] = m;
        add_into(out, k, c);
    }
    return out;
}

template <class R>
int tensor_rank(const Tensor<R>& a) {
    return a.empty() ? -1 : static_cast<int>(a.begin()->first.legs.size());
}

template <class R>
Tensor<R> tensor_mul(const EnvCtx<R>& ctx, const Tensor<R>& a, const Tensor<R>& b) {
    Tensor<R> out;
    if (a.empty() || b.empty()) return out;
    const size_t rank = a.begin()->first.legs.size();
    if (rank != b.begin()->first.legs.size())
        throw std::invalid_argument("tensor rank mismatch");

    // intern every leg monomial once so the hot loops work on integer ids
    struct Flat {
        long t;
        std::vector<int> legs;
        R c;
    };
    auto flatten = [&](const Tensor<R>& x) {
        std::vector<Flat> f;
        f.reserve(x.size());
        for (const auto& [k, c] : x) {
            Flat fl{k.t, {}, c};
            fl.legs.reserve(rank);
            for (const auto& m : k.legs) fl.legs.push_back(mono_intern(ctx, m));
            f.push_back(std::move(fl));
        }
        return f;
    };
    const std::vector<Flat> fa = flatten(a), fb = flatten(b);
    const size_t last = rank - 1;

    // group a-terms sharing a trailing-leg monomial: each trailing product is
    // computed once per group and discarded (caching those would dominate
    // memory; the leading legs are small and go through the shared cache)
    std::map<int, std::vector<const Flat*>> groups;
    for (const auto& ta : fa) groups[ta.legs[last]].push_back(&ta);

    // accumulate per (t, ids of all legs but the last), summing over the last
    // leg id; converted back to monomial keys once at the end
    std::map<std::pair<long, std::vector<int>>, std::unordered_map<int, R>> buckets;
    std::vector<const CompactElem<R>*> legs(rank);
    std::pair<long, std::vector<int>> bkey;
    bkey.second.resize(rank - 1);
    for (const auto& [u, group] : groups) {
        for (const auto& tb : fb) {
            const CompactElem<R> plast = mono_mul_nocache(ctx, u, tb.legs[last]);
            if (plast.empty()) continue;
            legs[last] = &plast;
            for (const Flat* pta : group) {
                const Flat& ta = *pta;
                long t = ta.t + tb.t;
                R c = ta.c * tb.c;
                if (ctx.fold_modular) {
                    auto [rt, mult] = tquot_fold_exp(t, ctx.p(), ctx.q);
                    t = rt;
                    if constexpr (std::is_same_v<R, Fp>) c = c * mult;
                } else if (ctx.tmax >= 0 && t > ctx.tmax) {
                    continue;
                }
                bool dead = false;
                for (size_t i = 0; i < last; ++i) {
                    legs[i] = &mono_times_mono(ctx, ta.legs[i], tb.legs[i]);
                    if (legs[i]->empty()) {
                        dead = true;
                        break;
                    }
                }
                if (dead) continue;
                bkey.first = t;
                // cartesian product over the leading legs; innermost loop
                // streams the trailing leg into the bucket
                std::vector<size_t> idx(rank - 1, 0);
                while (true) {
                    R cc = c;
                    for (size_t i = 0; i + 1 < rank; ++i) {
                        bkey.second[i] = (*legs[i])[idx[i]].first;
                        cc = cc * (*legs[i])[idx[i]].second;
                    }
                    auto& bucket = buckets[bkey];
                    for (const auto& [id, cl] : *legs[last]) {
                        auto [it, inserted] = bucket.try_emplace(id, cc * cl);
                        if (!inserted) it->second += cc * cl;
                    }
                    size_t i = 0;
                    for (; i + 1 < rank; ++i) {
                        if (++idx[i] < legs[i]->size()) break;
                        idx[i] = 0;
                    }
                    if (i + 1 >= rank) break;
                }
            }
        }
    }
    for (const auto& [bk, bucket] : buckets) {
        TKey k{bk.first, {}};
        k.legs.reserve(rank);
        for (int id : bk.second) k.legs.push_back(*ctx.mono_by_id[id]);
        k.legs.emplace_back();
        for (const auto& [id, c] : bucket) {
            if (is_zero(c)) continue;
            k.legs.back() = *ctx.mono_by_id[id];
            out.emplace(k, c);
        }
    }
    return out;
}

template <class R>
Tensor<R> tensor_pow(const EnvCtx<R>& ctx, const Tensor<R>& a, long e, int rank) {
    Tensor<R> acc = tensor_unit(ctx, rank);
    for (long i = 0; i < e; ++i) acc = tensor_mul(ctx, acc, a);
    return acc;
}

// Insert a unit leg at position `pos` (rank grows by one).
template <class R>
Tensor<R> tensor_insert_unit_leg(const Tensor<R>& a, int pos) {
    Tensor<R> out;
    for (const auto& [k, c] : a) {
        TKey nk = k;
        nk.legs.insert(nk.legs.begin() + pos, PBWMonomial{});
        add_into(out, nk, c);
    }
    return out;
}

template <class R>
Tensor<R> tensor_scale_t(const Tensor<R>& a, long dt) {
    Tensor<R> out;
    for (const auto& [k, c] : a) {
        TKey nk = k;
        nk.t += dt;
        add_into(out, nk, c);
    }
    return out;
}

// Replace leg `pos` of every term by f(monomial) (an EnvElement), expanding
// the result multilinearly.  f must be linear on monomials.
template <class R, class F>
Tensor<R> tensor_map_leg(const Tensor<R>& a, int pos, F&& f) {
    Tensor<R> out;
    for (const auto& [k, c] : a) {
        for (const auto& [m, cm] : f(k.legs[pos])) {
            TKey nk = k;
            nk.legs[pos] = m;
            add_into(out, nk, c * cm);
        }
    }
    return out;
}

// Multiply legs i and j (i < j) into position i; rank drops by one.
template <class R>
Tensor<R> tensor_merge_legs(const EnvCtx<R>& ctx, const Tensor<R>& a, int i, int j) {
    Tensor<R> out;
    for (const auto& [k, c] : a) {
        EnvElement<R> prod = env_times_mono(
            ctx, EnvElement<R>{{k.legs[i], ctx.one()}}, k.legs[j]);
        for (const auto& [m, cm] : prod) {
            TKey nk = k;
            nk.legs[i] = m;
            nk.legs.erase(nk.legs.begin() + j);
            add_into(out, nk, c * cm);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// base Hopf structure (Delta_0 primitive, S_0(g) = -g, eps_0(g) = 0)

template <class R>
Tensor<R> delta0_mono(const EnvCtx<R>& ctx, const PBWMonomial& m) {
    if (auto it = ctx.delta0_cache.find(m); it != ctx.delta0_cache.end())
        return it->second;
    Tensor<R> acc = tensor_unit(ctx, 2);
    for (const auto& [g, e] : m.factors) {
        EnvElement<R> gg = env_gen(ctx, g);
        Tensor<R> dg;
        scaled_add(dg, tensor_from_env(gg, 2, 0), ctx.one());
        scaled_add(dg, tensor_from_env(gg, 2, 1), ctx.one());
        for (long i = 0; i < e; ++i) acc = tensor_mul(ctx, acc, dg);
    }
    ctx.delta0_cache.emplace(m, acc);
    return acc;
}

template <class R>
Tensor<R> delta0(const EnvCtx<R>& ctx, const EnvElement<R>& a) {
    Tensor<R> out;
    for (const auto& [m, c] : a) scaled_add(out, delta0_mono(ctx, m), c);
    return out;
}

template <class R>
EnvElement<R> antipode0(const EnvCtx<R>& ctx, const EnvElement<R>& a) {
    EnvElement<R> out;
    for (const auto& [m, c] : a) {
        EnvElement<R> cur = env_one(ctx);
        for (auto it = m.factors.rbegin(); it != m.factors.rend(); ++it)
            for (long i = 0; i < it->second; ++i)
                cur = env_times_gen(ctx, cur, it->first);
        R sign = (m.length() % 2 == 0) ? ctx.one() : -ctx.one();
        scaled_add(out, cur, c * sign);
    }
    return out;
}

template <class R>
R counit0(const EnvCtx<R>& ctx, const EnvElement<R>& a) {
    auto it = a.find(PBWMonomial{});
    return it == a.end() ? ctx.from_long(0) : it->second;
}

// Apply Delta_0 to leg `pos` (rank grows by one, the two new legs replace it).
template <class R>
Tensor<R> tensor_apply_delta0(const EnvCtx<R>& ctx, const Tensor<R>& a, int pos) {
    Tensor<R> out;
    for (const auto& [k, c] : a) {
        for (const auto& [dk, dc] : delta0_mono(ctx, k.legs[pos])) {
            TKey nk{k.t + dk.t, {}};
            nk.legs = k.legs;
            nk.legs[pos] = dk.legs[0];
            nk.legs.insert(nk.legs.begin() + pos + 1, dk.legs[1]);
            add_into(out, nk, c * dc);
        }
    }
    return out;
}

// Apply eps_0 to leg `pos` (rank drops by one).
template <class R>
Tensor<R> tensor_apply_counit0(const Tensor<R>& a, int pos) {
    Tensor<R> out;
    for (const auto& [k, c] : a) {
        if (!k.legs[pos].is_one()) continue;
        TKey nk = k;
        nk.legs.erase(nk.legs.begin() + pos);
        add_into(out, nk, c);
    }
    return out;
}

// Apply S_0 to leg `pos`.
template <class R>
Tensor<R> tensor_apply_antipode0(const EnvCtx<R>& ctx, const Tensor<R>& a, int pos) {
    return tensor_map_leg(a, pos, [&](const PBWMonomial& m) {
        return antipode0(ctx, EnvElement<R>{{m, ctx.one()}});
    });
}

// ---------------------------------------------------------------------------
// factorial polynomials and (1 - e t)^z

// falling: prod_{i=0}^{m-1} (h + a - i); rising: prod (h + a + i).
template <class R>
EnvElement<R> h_factorial(const EnvCtx<R>& ctx, const MultiIndex& h, const R& a,
                          long m, bool rising) {
    EnvElement<R> acc = env_one(ctx);
    for (long i = 0; i < m; ++i) {
        EnvElement<R> f = env_gen(ctx, h);
        R shift = a;
        if (rising)
            shift += ctx.from_long(i);
        else
            shift -= ctx.from_long(i);
        add_into(f, PBWMonomial{}, shift);
        acc = env_mul(ctx, acc, f);
    }
    return acc;
}

// (1 - e t)^z as a rank-1 series.  Char 0: negative z via the binomial
// series up to tmax.  Modular: z is reduced mod p first ((1-et)^p = 1 in the
// restricted quotient, where e is nilpotent), leaving a plain finite power.
template <class R>
Tensor<R> one_minus_et_pow(const EnvCtx<R>& ctx, const EnvElement<R>& e, long z) {
    Tensor<R> out;
    if (ctx.fold_modular || ctx.restricted) {
        const std::int64_t p = ctx.p();
        long zr = z % p;
        if (zr < 0) zr += p;
        EnvElement<R> epow = env_one(ctx);
        for (long i = 0; i <= zr; ++i) {
            R c = ctx.one();
            if constexpr (std::is_same_v<R, Fp>)
                c = binom_mod_p(zr, i, p) * Fp(i % 2 ? -1 : 1, p);
            scaled_add(out, tensor_from_env(epow, 1, 0, i), c);
            if (i < zr) epow = env_mul(ctx, epow, e);
        }
        return out;
    }
    long imax = ctx.tmax >= 0 ? ctx.tmax : 64;
    if (z >= 0 && z < imax) imax = z;
    EnvElement<R> epow = env_one(ctx);
    for (long i = 0; i <= imax; ++i) {
        Int b = z >= 0 ? binom_int(z, i) * (i % 2 ? -1 : 1) : binom_int(-z + i - 1, i);
        if constexpr (std::is_same_v<R, Rat>)
            scaled_add(out, tensor_from_env(epow, 1, 0, i), Rat(b));
        if (i < imax) epow = env_mul(ctx, epow, e);
    }
    return out;
}

// Degree-by-degree inverse of a series whose degree-0 slice is the unit
// tensor (char-0 contexts only; folding breaks the t-grading).
template <class R>
Tensor<R> series_inverse(const EnvCtx<R>& ctx, const Tensor<R>& a, int rank) {
    if (ctx.fold_modular) throw std::invalid_argument("series_inverse: char-0 only");
    long nmax = ctx.tmax >= 0 ? ctx.tmax : 0;
    std::map<long, Tensor<R>> slices;  // slices of a, with t reset to 0
    for (const auto& [k, c] : a) {
        TKey k0 = k;
        k0.t = 0;
        add_into(slices[k.t], k0, c);
    }
    if (slices[0] != tensor_unit(ctx, rank))
        throw std::invalid_argument("series_inverse: degree-0 part is not 1");
    std::map<long, Tensor<R>> inv;
    inv[0] = tensor_unit(ctx, rank);
    for (long d = 1; d <= nmax; ++d) {
        Tensor<R> acc;
        for (long i = 1; i <= d; ++i) {
            auto it = slices.find(i);
            if (it == slices.end()) continue;
            scaled_add(acc, tensor_mul(ctx, it->second, inv[d - i]), -ctx.one());
        }
        inv[d] = std::move(acc);
    }
    Tensor<R> out;
    for (const auto& [d, sl] : inv) scaled_add(out, tensor_scale_t(sl, d), ctx.one());
    return out;
}

}  // namespace cartanq

#endif  // CARTANQ_ENV_HPP
