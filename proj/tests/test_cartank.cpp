// The contact-type algebras K / K+ / K(2n+1;1): closed bracket vs the Witt
// embedding, closure, grading, modular cross-checks, basis bookkeeping.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "cartanq/cartank.hpp"

using namespace cartanq;

namespace {

std::vector<MultiIndex> small_indices(int n, long maxent) {
    // all nonnegative indices with every entry <= maxent
    std::vector<MultiIndex> out;
    MultiIndex cur(n);
    const int len = 2 * n + 1;
    while (true) {
        out.push_back(cur);
        int i = 0;
        for (; i < len; ++i) {
            long& v = cur.at(i - n);
            if (v < maxent) {
                ++v;
                break;
            }
            v = 0;
        }
        if (i == len) break;
    }
    return out;
}

}  // namespace

TEST_CASE("closed-form char-0 bracket matches the Witt-algebra commutator") {
    for (int n : {1, 2}) {
        long maxent = n == 1 ? 3 : 1;
        auto idx = small_indices(n, maxent);
        for (const auto& a : idx) {
            for (const auto& b : idx) {
                WittC0 lhs = witt_bracket_char0(dk_char0(a), dk_char0(b));
                WittC0 rhs;
                for (const auto& [g, c] : k_bracket_pair_char0(a, b, KMode::Char0Full))
                    for (const auto& [kw, cw] : dk_char0(g)) add_into(rhs, kw, c * cw);
                CHECK(lhs == rhs);
            }
        }
    }
}

TEST_CASE("K+ closes: no negative exponents with nonzero coefficient") {
    for (int n : {1, 2}) {
        long maxent = n == 1 ? 3 : 1;
        auto idx = small_indices(n, maxent);
        for (const auto& a : idx)
            for (const auto& b : idx)
                for (const auto& [g, c] : k_bracket_pair_char0(a, b, KMode::Char0Pos))
                    CHECK(g.nonneg());
    }
}

TEST_CASE("char-0 bracket: antisymmetry, Jacobi, grading additivity") {
    auto idx = small_indices(1, 2);
    for (const auto& a : idx) {
        for (const auto& b : idx) {
            KElement<Rat> ab = k_bracket_pair_char0(a, b, KMode::Char0Full);
            KElement<Rat> ba = k_bracket_pair_char0(b, a, KMode::Char0Full);
            for (auto& [k, v] : ba) v = -v;
            CHECK(ab == ba);
            for (const auto& [g, c] : ab) CHECK(g.norm() == a.norm() + b.norm());
        }
    }
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<size_t> pick(0, idx.size() - 1);
    std::uniform_int_distribution<int> coef(-3, 3);
    auto rnd = [&] {
        KElement<Rat> x;
        for (int i = 0; i < 3; ++i) add_into(x, idx[pick(rng)], Rat(coef(rng)));
        return x;
    };
    for (int rep = 0; rep < 20; ++rep) {
        KElement<Rat> a = rnd(), b = rnd(), c = rnd();
        KElement<Rat> jac = k_bracket(a, k_bracket(b, c));
        for (const auto& [k, v] : k_bracket(b, k_bracket(c, a))) add_into(jac, k, v);
        for (const auto& [k, v] : k_bracket(c, k_bracket(a, b))) add_into(jac, k, v);
        CHECK(jac.empty());
    }
}

TEST_CASE("diagonal elements act diagonally") {
    // h = D(x^{e_k+e_{-k}}): [h, x_a] = (a_k - a_{-k}) x_a
    // hc = D(x^{e_0}):       [hc, x_a] = ||a|| x_a
    for (int n : {1, 2}) {
        auto idx = small_indices(n, 2);
        for (int k = 1; k <= n; ++k) {
            MultiIndex h = MultiIndex::unit(n, k) + MultiIndex::unit(n, -k);
            for (const auto& a : idx) {
                KElement<Rat> br = k_bracket_pair_char0(h, a, KMode::Char0Full);
                KElement<Rat> want;
                add_into(want, a, Rat(a.at(k) - a.at(-k)));
                CHECK(br == want);
            }
        }
        MultiIndex hc = MultiIndex::unit(n, 0);
        for (const auto& a : idx) {
            KElement<Rat> br = k_bracket_pair_char0(hc, a, KMode::Char0Full);
            KElement<Rat> want;
            add_into(want, a, Rat(a.norm()));
            CHECK(br == want);
        }
    }
}

TEST_CASE("modular bracket: closed route agrees with the Witt oracle") {
    const std::int64_t p = 5;
    auto basis = k_basis_modular(1, p);
    for (const auto& a : basis)
        for (const auto& b : basis) CHECK(k_bracket_mod_consistent(a, b, p));
}

TEST_CASE("modular bracket p=7 sampled pairs") {
    const std::int64_t p = 7;
    std::mt19937_64 rng(42);
    auto basis = k_basis_modular(1, p);
    std::uniform_int_distribution<size_t> pick(0, basis.size() - 1);
    for (int rep = 0; rep < 200; ++rep)
        CHECK(k_bracket_mod_consistent(basis[pick(rng)], basis[pick(rng)], p));
}

TEST_CASE("congruence case and dimensions") {
    CHECK(!k_congruence_case(1, 5));
    CHECK(!k_congruence_case(1, 7));
    CHECK(k_congruence_case(3, 5));  // 2n+4 = 10
    CHECK(k_basis_modular(1, 5).size() == 125);
    CHECK(k_basis_modular(1, 7).size() == 343);
    CHECK(k_top_grade(1, 5) == 14);
    CHECK(k_top_grade(1, 7) == 22);
    // congruence case: tau excluded, top grade drops by one
    CHECK(k_top_grade(3, 5) == 8 * 4 - 2 - 1);
    // top grade is attained and maximal over the basis
    for (std::int64_t p : {5, 7}) {
        long top = -100;
        for (const auto& a : k_basis_modular(1, p)) top = std::max(top, k_grading(a));
        CHECK(top == k_top_grade(1, p));
    }
}

TEST_CASE("KAlgebra provider memoizes both rings") {
    KAlgebra<Rat> a0(KMode::Char0Pos, 1);
    MultiIndex h = MultiIndex::unit(1, 1) + MultiIndex::unit(1, -1);
    MultiIndex e = MultiIndex::unit(1, 1).scaled(2) + MultiIndex::unit(1, -1);
    const auto& he = a0.bracket(h, e);
    CHECK(he == k_bracket_pair_char0(h, e, KMode::Char0Pos));
    CHECK(&a0.bracket(h, e) == &he);

    KAlgebra<Fp> am(KMode::Modular, 1, 5);
    CHECK(am.bracket(h, e) == k_bracket_pair_mod(h, e, 5));
    CHECK_THROWS(KAlgebra<Fp>(KMode::Modular, 1, 4));
}
