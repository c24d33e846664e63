#pragma once

#include <compare>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "zerosum/group.hpp"

namespace zerosum {

/**
 * Unordered multiset of group elements (the free-abelian-monoid view of a
 * "sequence over G"). Canonical by construction: counts are kept sorted by
 * element index with no zero entries, so structural equality is multiset
 * equality and censuses deduplicate for free.
 */
class Sequence {
public:
    Sequence() = default;
    explicit Sequence(std::span<const Elem> elems);
    Sequence(std::initializer_list<Elem> elems) : Sequence(std::span<const Elem>(elems.begin(), elems.size())) {}
    static Sequence repeated(Elem g, int k);

    int length() const noexcept { return length_; }
    bool empty() const noexcept { return length_ == 0; }
    int multiplicity(Elem g) const;           // v_g(S)
    int max_multiplicity() const;             // h(S); 0 for the empty sequence
    int support_size() const noexcept { return static_cast<int>(counts_.size()); }
    ElemMask support_mask() const;
    const std::vector<std::pair<Elem, int>>& counts() const noexcept { return counts_; }
    std::vector<Elem> expanded() const;       // all terms, ascending

    Sequence& append(Elem g, int k = 1);

    friend bool operator==(const Sequence&, const Sequence&) = default;
    auto operator<=>(const Sequence&) const = default;

private:
    std::vector<std::pair<Elem, int>> counts_;
    int length_ = 0;
};

Sequence concat(const Sequence& s, const Sequence& t);
bool divides(const Sequence& part, const Sequence& whole);  // part | whole
// S * T^-1; throws NotASubsequence unless T | S.
Sequence remove_subsequence(const Sequence& s, const Sequence& t);
// Subsequence of terms lying in A.
Sequence restrict_to(const Sequence& s, ElemMask A);

// Text grammar (terms joined by '.'):
//   term      = "1" ["^" k]                      identity, optional multiplicity
//             | "x" ["^" a] ["*y" ["^" b]]       metacyclic x^a y^b
//             | "y" ["^" b]
//             | "g" idx                          element by index (any group kind)
//             | "(" term ")" "^" k               multiplicity for any term
// Exponents a, b reduce mod p, m. Example: x.x*y.x*y^2.1^5
std::string format_element(const Group& g, Elem e);
std::string format_sequence(const Group& g, const Sequence& s);
Sequence parse_sequence(const Group& g, std::string_view text);

enum class Visit { Continue, Prune };

struct MultisetVisitor {
    virtual ~MultisetVisitor() = default;
    // Called after extending the prefix by g; Prune skips the whole subtree.
    // Every on_push is matched by one on_pop (also when pruned), so visitors
    // can push/pop their own state unconditionally.
    virtual Visit on_push(Elem g) { (void)g; return Visit::Continue; }
    virtual void on_pop(Elem g) { (void)g; }
    virtual void on_leaf(std::span<const Elem> prefix) { (void)prefix; }
};

// Visits every length-n multiset over G exactly once, elements pushed in
// nondecreasing index order. Push/pop events let visitors maintain
// incremental state (e.g. a product DP) and prune subtrees.
void enumerate_multisets(const Group& g, int n, MultisetVisitor& visitor);

// Number of length-n multisets over q symbols: C(q+n-1, n), saturating.
unsigned long long multiset_count(int q, int n);

}  // namespace zerosum
