// Exponent multi-indices alpha in Z^{2n+1}, addressed by labels -n..-1,0,1..n.
//
// Conventions used throughout the kernel:
//   |alpha|      = sum of all 2n+1 entries
//   ||alpha||    = |alpha| + alpha_0 - 2        (the contact grading)
//   box          = { 0 <= alpha_i <= p-1 for all i }, tau = (p-1,...,p-1)
//   PBW order    = graded-lex: first ||alpha||, then the entry array from
//                  label -n to n (a strict total order fixed once for all
//                  basis enumeration and straightening).
// Text form: "[a_{-n},...,a_{-1};a_0;a_1,...,a_n]", e.g. "[1;0;2]" for n=1.
#ifndef CARTANQ_MULTIINDEX_HPP
#define CARTANQ_MULTIINDEX_HPP

#include <compare>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cartanq/fp.hpp"
#include "cartanq/rational.hpp"

namespace cartanq {

class MultiIndex {
  public:
    explicit MultiIndex(int n) : n_(n), e_(2 * static_cast<size_t>(n) + 1, 0) {
        if (n < 1) throw std::invalid_argument("MultiIndex: n must be >= 1");
    }
    MultiIndex(int n, std::vector<long> entries) : n_(n), e_(std::move(entries)) {
        if (n < 1 || e_.size() != 2 * static_cast<size_t>(n) + 1)
            throw std::invalid_argument("MultiIndex: entry count must be 2n+1");
    }

    static MultiIndex unit(int n, int label) {
        MultiIndex m(n);
        m.at(label) = 1;
        return m;
    }

    int n() const { return n_; }

    long& at(int label) {
        check_label(label);
        return e_[static_cast<size_t>(label + n_)];
    }
    long at(int label) const {
        check_label(label);
        return e_[static_cast<size_t>(label + n_)];
    }

    const std::vector<long>& entries() const { return e_; }

    long total() const { return std::accumulate(e_.begin(), e_.end(), 0L); }

    // ||alpha|| = |alpha| + alpha_0 - 2
    long norm() const { return total() + at(0) - 2; }

    bool nonneg() const {
        for (long v : e_)
            if (v < 0) return false;
        return true;
    }

    // 0 <= alpha <= tau = (p-1,...,p-1); strict additionally excludes tau.
    bool in_box(long p, bool strict = false) const {
        bool all_top = true;
        for (long v : e_) {
            if (v < 0 || v > p - 1) return false;
            if (v != p - 1) all_top = false;
        }
        return !(strict && all_top);
    }

    static MultiIndex tau(int n, long p) {
        MultiIndex m(n);
        for (auto& v : m.e_) v = p - 1;
        return m;
    }

    friend MultiIndex operator+(const MultiIndex& a, const MultiIndex& b) {
        a.check_arity(b);
        MultiIndex r = a;
        for (size_t i = 0; i < r.e_.size(); ++i) r.e_[i] += b.e_[i];
        return r;
    }
    friend MultiIndex operator-(const MultiIndex& a, const MultiIndex& b) {
        a.check_arity(b);
        MultiIndex r = a;
        for (size_t i = 0; i < r.e_.size(); ++i) r.e_[i] -= b.e_[i];
        return r;
    }
    MultiIndex& operator+=(const MultiIndex& o) { return *this = *this + o; }
    MultiIndex& operator-=(const MultiIndex& o) { return *this = *this - o; }

    MultiIndex scaled(long c) const {
        MultiIndex r = *this;
        for (auto& v : r.e_) v *= c;
        return r;
    }

    friend bool operator==(const MultiIndex& a, const MultiIndex& b) {
        return a.n_ == b.n_ && a.e_ == b.e_;
    }

    // Graded-lex PBW order (IndexOrder).
    friend std::strong_ordering operator<=>(const MultiIndex& a, const MultiIndex& b) {
        a.check_arity(b);
        if (auto c = a.norm() <=> b.norm(); c != 0) return c;
        return a.e_ <=> b.e_;
    }

    std::string str() const {
        std::ostringstream os;
        os << '[';
        for (int i = -n_; i <= n_; ++i) {
            os << at(i);
            if (i == -1 || i == 0)
                os << ';';
            else if (i < n_)
                os << ',';
        }
        os << ']';
        return os.str();
    }

    // Parse the text form; throws std::invalid_argument on malformed input.
    static MultiIndex parse(const std::string& text, int n) {
        std::string s = text;
        if (s.size() < 2 || s.front() != '[' || s.back() != ']')
            throw std::invalid_argument("MultiIndex: expected [..;..;..]");
        s = s.substr(1, s.size() - 2);
        for (char& ch : s)
            if (ch == ';' || ch == ',') ch = ' ';
        std::istringstream is(s);
        std::vector<long> vals;
        long v;
        while (is >> v) vals.push_back(v);
        if (!is.eof() || vals.size() != 2 * static_cast<size_t>(n) + 1)
            throw std::invalid_argument("MultiIndex: bad entry list for n=" + std::to_string(n));
        return MultiIndex(n, std::move(vals));
    }

    void check_arity(const MultiIndex& o) const {
        if (n_ != o.n_) throw std::invalid_argument("MultiIndex: arity mismatch");
    }

  private:
    void check_label(int label) const {
        if (label < -n_ || label > n_)
            throw std::out_of_range("MultiIndex: label out of range");
    }

    int n_;
    std::vector<long> e_;
};

// alpha! = product of componentwise factorials.
inline Int mi_factorial(const MultiIndex& a) {
    Int f = 1;
    for (long v : a.entries()) f *= factorial(v);
    return f;
}

// Multinomial C(alpha+beta, alpha) = prod_i C(alpha_i+beta_i, alpha_i), over Z.
inline Int mi_binom_int(const MultiIndex& a, const MultiIndex& b) {
    a.check_arity(b);
    if (!a.nonneg() || !b.nonneg())
        throw std::invalid_argument("mi_binom: negative component");
    Int r = 1;
    for (size_t i = 0; i < a.entries().size(); ++i)
        r *= binom_int(a.entries()[i] + b.entries()[i], a.entries()[i]);
    return r;
}

inline Fp mi_binom_fp(const MultiIndex& a, const MultiIndex& b, std::int64_t p) {
    a.check_arity(b);
    if (!a.nonneg() || !b.nonneg())
        throw std::invalid_argument("mi_binom: negative component");
    Fp r(1, p);
    for (size_t i = 0; i < a.entries().size(); ++i)
        r *= binom_mod_p(a.entries()[i] + b.entries()[i], a.entries()[i], p);
    return r;
}

// All box indices 0 <= alpha <= tau, in IndexOrder.
std::vector<MultiIndex> box_indices(int n, long p);

}  // namespace cartanq

#endif  // CARTANQ_MULTIINDEX_HPP
