#pragma once

// Independent brute-force references for the product engines. These stay
// deliberately naive: products over explicit orderings and explicit subset
// enumeration, sharing no code path with the signature DP they check.

#include <algorithm>
#include <functional>
#include <set>
#include <vector>

#include "zerosum/group.hpp"
#include "zerosum/sequence.hpp"

namespace zerosum::oracle {

// pi(S) by multiplying out every distinct permutation of the terms.
inline ElemMask brute_pi(const Group& g, const Sequence& s) {
    std::vector<Elem> terms = s.expanded();
    std::sort(terms.begin(), terms.end());
    ElemMask out = 0;
    if (terms.empty()) return single_mask(g.identity());
    do {
        Elem prod = g.identity();
        for (Elem e : terms) prod = g.mul(prod, e);
        out = mask_with(out, prod);
    } while (std::next_permutation(terms.begin(), terms.end()));
    return out;
}

// Pi_n(S) via all n-subsets of positions, deduplicated as multisets.
inline ElemMask brute_pi_n(const Group& g, const Sequence& s, int n) {
    std::vector<Elem> terms = s.expanded();
    const int len = static_cast<int>(terms.size());
    ElemMask out = 0;
    std::set<std::vector<Elem>> seen;
    std::vector<int> idx(static_cast<size_t>(n));
    // Lexicographic combinations of positions.
    std::function<void(int, int)> rec = [&](int start, int chosen) {
        if (chosen == n) {
            std::vector<Elem> sub;
            for (int i = 0; i < n; ++i) sub.push_back(terms[static_cast<size_t>(idx[static_cast<size_t>(i)])]);
            std::sort(sub.begin(), sub.end());
            if (seen.insert(sub).second) out |= brute_pi(g, Sequence(std::span<const Elem>(sub)));
            return;
        }
        for (int i = start; i < len; ++i) {
            idx[static_cast<size_t>(chosen)] = i;
            rec(i + 1, chosen + 1);
        }
    };
    if (n == 0) return single_mask(g.identity());
    rec(0, 0);
    return out;
}

inline ElemMask brute_pi_all(const Group& g, const Sequence& s) {
    ElemMask out = 0;
    for (int n = 1; n <= s.length(); ++n) out |= brute_pi_n(g, s, n);
    return out;
}

inline bool brute_product_one_free(const Group& g, const Sequence& s) {
    return !mask_contains(brute_pi_all(g, s), g.identity());
}

// Pi^k(A) by explicit index-ordered selection.
inline ElemMask brute_setseq_products(const Group& g, const std::vector<ElemMask>& sets, int k) {
    ElemMask out = 0;
    std::function<void(std::size_t, int, Elem)> rec = [&](std::size_t i, int chosen, Elem prod) {
        if (chosen == k) {
            out = mask_with(out, prod);
            return;
        }
        if (i == sets.size()) return;
        rec(i + 1, chosen, prod);
        mask_for_each(sets[i], [&](Elem a) { rec(i + 1, chosen + 1, g.mul(prod, a)); });
    };
    rec(0, 0, g.identity());
    return out;
}

}  // namespace zerosum::oracle
