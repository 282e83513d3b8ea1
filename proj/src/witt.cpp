#include "cartanq/witt.hpp"

#include <sstream>

namespace cartanq {

WittMod derivation_p_power(const WittMod& D, int n, std::int64_t p) {
    // Columns of the operator: image of every box monomial under D, iterated
    // p times.  The basis is small (p^{2n+1} for desk-scale n), so a sparse
    // column representation is enough.
    std::vector<MultiIndex> basis = box_indices(n, p);
    std::vector<OElement> cols;
    cols.reserve(basis.size());
    for (const auto& b : basis) {
        OElement img = o_monomial(b, p);
        for (std::int64_t i = 0; i < p; ++i) img = derivation_apply(D, img, p);
        cols.push_back(std::move(img));
    }

    // A derivation E of O is determined by its values on the degree-one
    // coordinates: if E = sum c_{b,j} x^{(b)} D_j then E(x^{(e_j)}) =
    // sum_b c_{b,j} x^{(b)}.  Read the coefficients off those columns ...
    std::map<MultiIndex, size_t> pos;
    for (size_t i = 0; i < basis.size(); ++i) pos.emplace(basis[i], i);
    WittMod out;
    for (int j = -n; j <= n; ++j) {
        const OElement& col = cols[pos.at(MultiIndex::unit(n, j))];
        for (const auto& [b, c] : col) add_into(out, WittKey{b, j}, c);
    }

    // ... then confirm the reconstruction reproduces the operator on the
    // whole basis (it must: W(2n+1;1) is closed under the p-map).
    for (size_t i = 0; i < basis.size(); ++i) {
        OElement chk = derivation_apply(out, o_monomial(basis[i], p), p);
        if (chk != cols[i]) {
            std::ostringstream os;
            os << "derivation_p_power: p-th power not expressible in the "
                  "x^{(a)}D_j basis at column " << basis[i].str()
               << " (implementation bug)";
            throw std::logic_error(os.str());
        }
    }
    return out;
}

}  // namespace cartanq
