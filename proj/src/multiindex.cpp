#include "cartanq/multiindex.hpp"

#include <algorithm>

namespace cartanq {

std::vector<MultiIndex> box_indices(int n, long p) {
    std::vector<MultiIndex> out;
    MultiIndex cur(n);
    const size_t len = 2 * static_cast<size_t>(n) + 1;
    // odometer enumeration, then sort into IndexOrder
    while (true) {
        out.push_back(cur);
        size_t i = 0;
        for (; i < len; ++i) {
            long& v = cur.at(static_cast<int>(i) - n);
            if (v < p - 1) {
                ++v;
                break;
            }
            v = 0;
        }
        if (i == len) break;
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace cartanq
