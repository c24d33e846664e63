#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "zerosum/errors.hpp"

namespace zerosum {

// Elements are dense indices in [0, |G|); index 0 is always the identity.
// Subsets of a group are 64-bit masks, which caps supported orders at 64.
using Elem = int;
using ElemMask = std::uint64_t;

inline constexpr int kMaxGroupOrder = 64;

inline bool mask_contains(ElemMask m, Elem g) { return (m >> g) & 1u; }
inline ElemMask mask_with(ElemMask m, Elem g) { return m | (ElemMask{1} << g); }
inline ElemMask single_mask(Elem g) { return ElemMask{1} << g; }
inline int mask_size(ElemMask m) { return std::popcount(m); }

template <typename F>
void mask_for_each(ElemMask m, F&& f) {
    while (m) {
        f(static_cast<Elem>(std::countr_zero(m)));
        m &= m - 1;
    }
}

std::vector<Elem> mask_elements(ElemMask m);
ElemMask mask_of(std::span<const Elem> elems);

// Presentation <x, y | x^p = y^m = 1, x^-1 y x = y^r>.
// Accepted only when p is the smallest prime divisor of p*m,
// gcd(p*(r-1), m) = 1 and r^p = 1 (mod m). Under those constraints
// m = 1 (mod p) and gcd(r^a - 1, m) = 1 for 0 < a < p; both are
// re-verified at construction.
struct MetacyclicSpec {
    int p = 0;  // order of x; smallest prime divisor of the group order
    int m = 0;  // order of y
    int r = 0;  // conjugation exponent; r = 0 only in the degenerate m = 1 case

    std::string to_string() const;
};

/**
 * Finite group with dense element indices and O(1) multiplication.
 *
 * Two kinds:
 *  - metacyclic(p, m, r): element (a, b) = x^a y^b has index a*m + b and
 *    (a1,b1)*(a2,b2) = (a1+a2 mod p, b1*r^a2 + b2 mod m).
 *  - Cayley-table: arbitrary group given by its multiplication table;
 *    associativity, the Latin-square property, and identity-at-0 are
 *    validated on construction (O(n^3), desk scale only).
 *
 * Immutable after construction; safe to share across threads.
 */
class Group {
public:
    static Group metacyclic(int p, int m, int r);
    static Group metacyclic(const MetacyclicSpec& spec) { return metacyclic(spec.p, spec.m, spec.r); }
    static Group from_table(const std::vector<std::vector<int>>& table, std::string origin = "cayley:<inline>");
    static Group cyclic(int n);
    // "metacyclic:p,m,r", "cyclic:n", or
    // "cayley:<path to JSON {"size": n, "table": [[...]]}>"
    static Group from_spec_string(const std::string& spec);
    static Group from_cayley_json(const std::string& json_text, std::string origin = "cayley:<inline>");

    int order() const noexcept { return order_; }
    bool is_metacyclic() const noexcept { return spec_.has_value(); }
    const std::optional<MetacyclicSpec>& metacyclic_spec() const noexcept { return spec_; }
    const std::string& spec_string() const noexcept { return origin_; }
    bool is_abelian() const noexcept { return abelian_; }

    Elem identity() const noexcept { return 0; }
    Elem mul(Elem a, Elem b) const { return table_[static_cast<size_t>(a) * order_ + b]; }
    Elem inv(Elem a) const { return inv_[a]; }
    Elem power(Elem g, long long k) const;
    int element_order(Elem g) const;

    // Metacyclic coordinate view: g = x^a y^b.
    Elem pair_element(int a, int b) const;
    int x_exponent(Elem g) const;
    int y_exponent(Elem g) const;
    // Image of g under the canonical map onto the cyclic quotient of order p
    // (the x-exponent). Throws UnsupportedQuery on Cayley-table groups.
    int quotient_class(Elem g) const;
    // r^s mod m for s in [0, p-1].
    int conj_power(int s) const;
    // Conjugacy orbit {u, u^r, ..., u^(r^(p-1))} of u in the normal cyclic part.
    ElemMask orbit_mask(Elem u) const;

    ElemMask all_mask() const { return order_ == 64 ? ~ElemMask{0} : (ElemMask{1} << order_) - 1; }
    // N = <y>, the normal cyclic subgroup (metacyclic kind only).
    ElemMask normal_subgroup_mask() const;
    // N_i = x^i N.
    ElemMask coset_mask(int i) const;
    // All subgroups of N, one per divisor of m, ascending by size.
    std::vector<ElemMask> subgroups_of_normal() const;

    ElemMask mul_mask(ElemMask A, Elem g) const;       // A g
    ElemMask mul_elem_mask(Elem g, ElemMask A) const;  // g A
    ElemMask product_mask(ElemMask A, ElemMask B) const;
    ElemMask inverse_mask(ElemMask A) const;  // {a^-1}

    // Smallest subgroup containing A; <{}> = {1}.
    ElemMask subgroup_generated(ElemMask A) const;
    // {h in H : hA = A}. H must be a subgroup; A nonempty (EmptySetError).
    ElemMask stabilizer(ElemMask A, ElemMask H) const;
    ElemMask centralizer(Elem h) const;

    // Re-index a closed subset as a standalone Cayley group (identity first).
    Group subgroup_as_group(ElemMask elems) const;

private:
    Group() = default;
    void finish(bool validate_table);

    int order_ = 0;
    std::optional<MetacyclicSpec> spec_;
    std::string origin_;
    std::vector<Elem> table_;  // row-major order_ x order_
    std::vector<Elem> inv_;
    std::vector<int> rpow_;  // metacyclic: r^s mod m, s in [0, p-1]
    bool abelian_ = false;
};

}  // namespace zerosum
