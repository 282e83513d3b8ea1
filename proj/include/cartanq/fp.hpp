// Prime-field scalars F_p (p an odd prime >= 5) and the p-truncated quotient
// ring K[t]/(t^p - q t).
//
// Fp carries its modulus in the value so that the generic linear-algebra code
// can be instantiated uniformly for Rat and Fp.  A default-constructed Fp is
// the "unbound zero": it combines with any modulus (needed so that empty
// accumulators have a well-defined additive identity).
#ifndef CARTANQ_FP_HPP
#define CARTANQ_FP_HPP

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cartanq/rational.hpp"

namespace cartanq {

inline bool is_prime_small(long p) {
    if (p < 2) return false;
    for (long d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

struct Fp {
    // residue in [0, p); p == 0 means "unbound zero" (no modulus yet).
    std::int64_t v = 0;
    std::int64_t p = 0;

    Fp() = default;
    Fp(std::int64_t value, std::int64_t modulus) : p(modulus) {
        if (modulus <= 0) throw std::invalid_argument("Fp: modulus must be positive");
        v = value % modulus;
        if (v < 0) v += modulus;
        if (v == 0) p = modulus;  // keep modulus even for zero: harmless
    }

    static std::int64_t join(std::int64_t a, std::int64_t b) {
        if (a == 0) return b;
        if (b == 0) return a;
        if (a != b) throw std::invalid_argument("Fp: modulus mismatch");
        return a;
    }

    friend Fp operator+(const Fp& a, const Fp& b) {
        std::int64_t m = join(a.p, b.p);
        if (m == 0) return Fp();
        return Fp(a.v + b.v, m);
    }
    friend Fp operator-(const Fp& a, const Fp& b) {
        std::int64_t m = join(a.p, b.p);
        if (m == 0) return Fp();
        return Fp(a.v - b.v, m);
    }
    friend Fp operator*(const Fp& a, const Fp& b) {
        std::int64_t m = join(a.p, b.p);
        if (m == 0) return Fp();
        return Fp(a.v * b.v, m);
    }
    Fp operator-() const { return p == 0 ? Fp() : Fp(-v, p); }
    Fp& operator+=(const Fp& o) { return *this = *this + o; }
    Fp& operator-=(const Fp& o) { return *this = *this - o; }
    Fp& operator*=(const Fp& o) { return *this = *this * o; }
    friend bool operator==(const Fp& a, const Fp& b) {
        if (a.v == 0 && b.v == 0) return true;
        return join(a.p, b.p) != 0 && a.v == b.v;
    }
    friend bool operator!=(const Fp& a, const Fp& b) { return !(a == b); }

    Fp pow(std::int64_t e) const {
        if (p == 0) {
            if (e == 0) throw std::domain_error("Fp: 0^0 with unbound modulus");
            return Fp();
        }
        std::int64_t ee = e % (p - 1);  // Fermat: valid for v != 0
        if (v == 0) return e == 0 ? Fp(1, p) : Fp(0, p);
        if (ee < 0) ee += p - 1;
        Fp acc(1, p), base = *this;
        while (ee) {
            if (ee & 1) acc *= base;
            base *= base;
            ee >>= 1;
        }
        return acc;
    }

    Fp inv() const {
        if (v == 0) throw std::domain_error("Fp: inverse of zero");
        return pow(p - 2);
    }

    std::string str() const { return std::to_string(v); }
};

inline bool is_zero(const Fp& a) { return a.v == 0; }

// Reduce a big integer into F_p.
inline Fp fp_from_int(const Int& z, std::int64_t p) {
    Int r = z % p;
    std::int64_t v = static_cast<std::int64_t>(r.get_si());
    return Fp(v, p);
}

// Reduce an exact rational with p-free denominator into F_p.
inline Fp fp_from_rat(const Rat& r, std::int64_t p) {
    Fp num = fp_from_int(r.get_num(), p);
    Fp den = fp_from_int(r.get_den(), p);
    if (is_zero(den)) throw std::domain_error("fp_from_rat: denominator divisible by p");
    return num * den.inv();
}

// C(a, b) mod p via the base-p digit decomposition (Lucas); stays correct for
// a, b >= p, which the divided-power product rule needs.
inline Fp binom_mod_p(long a, long b, std::int64_t p) {
    if (a < 0 || b < 0) throw std::invalid_argument("binom_mod_p: negative argument");
    if (!is_prime_small(p)) throw std::invalid_argument("binom_mod_p: p not prime");
    if (b > a) return Fp(0, p);
    Fp acc(1, p);
    while (a > 0 || b > 0) {
        long ad = a % p, bd = b % p;
        if (bd > ad) return Fp(0, p);
        // digit binomial by the small factorial formula (ad, bd < p)
        std::int64_t num = 1, den = 1;
        for (long i = 0; i < bd; ++i) {
            num = num * ((ad - i) % p) % p;
            den = den * ((i + 1) % p) % p;
        }
        acc *= Fp(num, p) * Fp(den, p).inv();
        a /= p;
        b /= p;
    }
    return acc;
}

// Element of K[t]/(t^p - q t): dense coefficient vector c_0..c_{p-1}.
struct TQuotPoly {
    std::vector<Fp> c;  // size p
    std::int64_t p = 0;
    Fp q;

    TQuotPoly(std::int64_t p_, Fp q_) : c(static_cast<size_t>(p_)), p(p_), q(q_) {
        if (!is_prime_small(p_)) throw std::invalid_argument("TQuotPoly: p not prime");
        if (q_.p != 0 && q_.p != p_) throw std::invalid_argument("TQuotPoly: q modulus mismatch");
    }
};

// Fold exponent e >= p by repeated substitution t^p = q t; returns the pair
// (reduced exponent, q-power multiplier).  t^e with e >= p becomes
// q * t^{e-p+1}, iterated until the exponent drops below p.
inline std::pair<long, Fp> tquot_fold_exp(long e, std::int64_t p, Fp q) {
    if (e < 0) throw std::invalid_argument("tquot_fold_exp: negative exponent");
    Fp mult(1, p);
    while (e >= p) {
        e = e - static_cast<long>(p) + 1;
        mult *= q;
    }
    return {e, mult};
}

inline TQuotPoly tquot_normalize(const std::vector<std::pair<long, Fp>>& raw, Fp q,
                                 std::int64_t p) {
    TQuotPoly out(p, q);
    for (const auto& [e, coef] : raw) {
        auto [re, mult] = tquot_fold_exp(e, p, q);
        out.c[static_cast<size_t>(re)] += coef * mult;
    }
    return out;
}

inline TQuotPoly tquot_mul(const TQuotPoly& a, const TQuotPoly& b) {
    if (a.p != b.p || a.q != b.q) throw std::invalid_argument("tquot_mul: ring mismatch");
    std::vector<std::pair<long, Fp>> raw;
    for (long i = 0; i < a.p; ++i)
        for (long j = 0; j < b.p; ++j)
            if (!is_zero(a.c[i]) && !is_zero(b.c[j]))
                raw.emplace_back(i + j, a.c[i] * b.c[j]);
    return tquot_normalize(raw, a.q, a.p);
}

}  // namespace cartanq

#endif  // CARTANQ_FP_HPP
