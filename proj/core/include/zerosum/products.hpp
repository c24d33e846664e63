#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "zerosum/group.hpp"
#include "zerosum/sequence.hpp"

namespace zerosum {

// pi(S) is permutation-closed, so it satisfies the exact recursion
//   pi(U) = union over h in U of pi(U \ h) * h,   pi(empty) = {1}:
// every ordering of U ends with some h. Both engines below key their states
// by sub-multiset signature (multiplicity vector over supp(S)); product sets
// are |G|-bit masks. State counts are capped: exact or refused, never
// approximate.

struct DpOptions {
    std::size_t state_budget = std::size_t{1} << 24;
};

/**
 * Layered signature table for one fixed sequence. Signatures are dense
 * mixed-radix indices with strides prod(v_i + 1), filled in one ascending
 * pass (every proper sub-signature precedes its supersets).
 */
class ProductTable {
public:
    struct Options {
        std::size_t state_budget = std::size_t{1} << 24;
        int layer_cap = -1;                   // ignore signatures heavier than this (-1: none)
        int stop_identity_min_weight = -1;    // stop filling once 1 in pi(sig), weight >= this
        int stop_identity_exact_weight = -1;  // ... weight == this
    };

    ProductTable(const Group& g, const Sequence& s, Options opt);
    ProductTable(const Group& g, const Sequence& s) : ProductTable(g, s, Options{}) {}

    bool identity_hit() const noexcept { return identity_hit_; }
    bool fill_complete() const noexcept { return fill_complete_; }

    // Queries below require a fill that was not stopped early.
    ElemMask pi() const;        // pi(S); needs layer_cap covering |S|
    ElemMask pi_n(int n) const; // union of pi over weight-n signatures
    ElemMask pi_all() const;    // union over weights >= 1

    int support_size() const noexcept { return static_cast<int>(supp_.size()); }
    Elem support_elem(int i) const { return supp_[static_cast<size_t>(i)].first; }
    int support_mult(int i) const { return supp_[static_cast<size_t>(i)].second; }
    std::size_t state_count() const noexcept { return masks_.size(); }

    // f(signature, weight, mask) over all filled signatures.
    template <typename F>
    void for_each_signature(F&& f) const {
        std::vector<int> sig(supp_.size(), 0);
        for (std::size_t idx = 0; idx < masks_.size(); ++idx) {
            f(std::span<const int>(sig), weights_[idx], masks_[idx]);
            for (std::size_t j = 0; j < supp_.size(); ++j) {
                if (++sig[j] <= supp_[j].second) break;
                sig[j] = 0;
            }
        }
    }

    ElemMask mask_at(std::span<const int> sig) const;

private:
    const Group& g_;
    std::vector<std::pair<Elem, int>> supp_;
    std::vector<std::size_t> strides_;
    std::vector<ElemMask> masks_;
    std::vector<std::int16_t> weights_;
    bool identity_hit_ = false;
    bool fill_complete_ = true;
};

ElemMask pi(const Group& g, const Sequence& s, DpOptions opt = {});
ElemMask pi_n(const Group& g, const Sequence& s, int n, DpOptions opt = {});
ElemMask pi_all(const Group& g, const Sequence& s, DpOptions opt = {});
// 1 not in Pi(S): no nonempty sub-multiset multiplies to the identity.
bool is_product_one_free(const Group& g, const Sequence& s, DpOptions opt = {});
// 1 not in Pi_{|G|}(S); vacuously true when |S| < |G|.
bool is_big_product_one_free(const Group& g, const Sequence& s, DpOptions opt = {});

// Ordered-index products of a set sequence: Pi^k(A) multiplies one element
// from each of k sets in index order (NOT permutation-closed).
ElemMask setseq_products(const Group& g, std::span<const ElemMask> sets, int k);
ElemMask setseq_all_products(const Group& g, std::span<const ElemMask> sets);

/**
 * Incremental signature DP for depth-first multiset searches. push(g)
 * extends the current multiset by one copy of g and computes pi for every
 * new signature; pop() removes them. Elements must be pushed in
 * nondecreasing index order (copies of an element stay consecutive), which
 * is exactly the order the multiset enumerator produces.
 *
 * Signatures pack into 64-bit keys: at most 12 distinct elements, each with
 * multiplicity at most 31. Exceeding either limit throws
 * StateBudgetExceeded.
 */
class ProductScan {
public:
    struct Options {
        int layer_cap = -1;    // ignore signatures heavier than this
        int flag_layer = -1;   // weight whose identity hits set the flag below
        bool stop_on_identity_any = false;   // abort a push once 1 in pi(nonempty sig)
        bool stop_on_identity_flag = false;  // abort a push once 1 in pi(sig), weight == flag_layer
        std::size_t state_budget = std::size_t{1} << 24;
    };

    struct PushResult {
        bool identity_any;   // 1 in Pi(prefix)
        bool identity_flag;  // 1 in Pi_{flag_layer}(prefix)
    };

    ProductScan(const Group& g, Options opt);
    explicit ProductScan(const Group& g) : ProductScan(g, Options{}) {}

    PushResult push(Elem g);
    void pop();
    int length() const noexcept { return length_; }
    bool identity_any() const noexcept { return id_any_frames_ > 0; }
    bool identity_flag() const noexcept { return id_flag_frames_ > 0; }
    std::size_t state_count() const noexcept { return table_.size(); }
    ElemMask pi_n(int n) const;

private:
    static constexpr int kMaxSlots = 12;
    static constexpr int kBitsPerSlot = 5;
    static constexpr int kMaxCount = 31;

    struct Entry {
        ElemMask mask;
        std::int32_t weight;
    };
    struct Frame {
        std::vector<std::uint64_t> added;  // keys created by this push, ascending weight
        bool new_slot = false;
        bool id_any = false;
        bool id_flag = false;
    };

    const Group& g_;
    Options opt_;
    int length_ = 0;
    std::vector<std::pair<Elem, int>> slots_;
    std::unordered_map<std::uint64_t, Entry> table_;
    std::vector<Frame> frames_;
    int id_any_frames_ = 0;
    int id_flag_frames_ = 0;
};

}  // namespace zerosum
