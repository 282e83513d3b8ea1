// Exact characteristic-0 coefficients: arbitrary-precision rationals and
// integers, backed by GMP.  Rat is always in canonical form (lowest terms,
// positive denominator) -- mpq_class maintains that invariant for us.
#ifndef CARTANQ_RATIONAL_HPP
#define CARTANQ_RATIONAL_HPP

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace cartanq {

using Int = mpz_class;
using Rat = mpq_class;

inline bool is_zero(const Rat& r) { return sgn(r) == 0; }

// Note: the two-argument mpq_class(num, den) constructor does not reduce to
// lowest terms; canonicalize a copy before inspecting the denominator.
inline bool rat_is_integer(const Rat& r) {
    Rat c = r;
    c.canonicalize();
    return c.get_den() == 1;
}

inline Int factorial(long m) {
    if (m < 0) throw std::invalid_argument("factorial of negative argument");
    Int f;
    mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(m));
    return f;
}

// C(a, b) over Z; 0 for b < 0 or b > a (a assumed >= 0 by callers).
inline Int binom_int(long a, long b) {
    if (b < 0 || b > a) return 0;
    Int r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(a),
                 static_cast<unsigned long>(b));
    return r;
}

inline Int pow_int(const Int& base, unsigned long exp) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exp);
    return r;
}

inline Rat rat_pow(const Rat& base, long exp) {
    if (exp == 0) return Rat(1);
    Rat b = base;
    bool inv = exp < 0;
    unsigned long e = static_cast<unsigned long>(inv ? -exp : exp);
    if (inv) {
        if (is_zero(b)) throw std::domain_error("0^negative");
        b = 1 / b;
    }
    Rat acc(1);
    while (e) {
        if (e & 1) acc *= b;
        b *= b;
        e >>= 1;
    }
    return acc;
}

inline std::string to_string(const Rat& r) { return r.get_str(); }
inline std::string to_string(const Int& z) { return z.get_str(); }

}  // namespace cartanq

#endif  // CARTANQ_RATIONAL_HPP
