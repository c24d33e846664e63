#include "zerosum/products.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace zerosum {

ProductTable::ProductTable(const Group& g, const Sequence& s, Options opt) : g_(g) {
    supp_ = s.counts();
    strides_.resize(supp_.size());
    std::size_t total = 1;
    for (std::size_t j = 0; j < supp_.size(); ++j) {
        strides_[j] = total;
        std::size_t radix = static_cast<std::size_t>(supp_[j].second) + 1;
        if (total > opt.state_budget / radix + 1) throw StateBudgetExceeded("signature space exceeds state budget");
        total *= radix;
    }
    if (total > opt.state_budget) throw StateBudgetExceeded("signature space exceeds state budget");

    masks_.assign(total, 0);
    weights_.assign(total, 0);
    masks_[0] = single_mask(g.identity());

    // Ascending index order: every U \ h precedes U.
    std::vector<int> sig(supp_.size(), 0);
    for (std::size_t idx = 1; idx < total; ++idx) {
        for (std::size_t j = 0; j < supp_.size(); ++j) {
            if (++sig[j] <= supp_[j].second) break;
            sig[j] = 0;
        }
        int w = 0;
        for (std::size_t j = 0; j < supp_.size(); ++j) w += sig[j];
        weights_[idx] = static_cast<std::int16_t>(w);
        if (opt.layer_cap >= 0 && w > opt.layer_cap) continue;
        ElemMask m = 0;
        for (std::size_t j = 0; j < supp_.size(); ++j) {
            if (sig[j] == 0) continue;
            m |= g_.mul_mask(masks_[idx - strides_[j]], supp_[j].first);
        }
        masks_[idx] = m;
        if (mask_contains(m, g.identity())) {
            bool hit = (opt.stop_identity_min_weight >= 0 && w >= opt.stop_identity_min_weight) ||
                       (opt.stop_identity_exact_weight >= 0 && w == opt.stop_identity_exact_weight);
            if (hit) {
                identity_hit_ = true;
                fill_complete_ = false;
                return;
            }
        }
    }
}

ElemMask ProductTable::pi() const {
    if (!fill_complete_) throw std::logic_error("pi() on an early-stopped table");
    return masks_.empty() ? single_mask(g_.identity()) : masks_.back();
}

ElemMask ProductTable::pi_n(int n) const {
    if (!fill_complete_) throw std::logic_error("pi_n() on an early-stopped table");
    ElemMask out = 0;
    for (std::size_t idx = 0; idx < masks_.size(); ++idx)
        if (weights_[idx] == n) out |= masks_[idx];
    return out;
}

ElemMask ProductTable::pi_all() const {
    if (!fill_complete_) throw std::logic_error("pi_all() on an early-stopped table");
    ElemMask out = 0;
    for (std::size_t idx = 1; idx < masks_.size(); ++idx) out |= masks_[idx];
    return out;
}

ElemMask ProductTable::mask_at(std::span<const int> sig) const {
    if (sig.size() != supp_.size()) throw std::invalid_argument("signature arity mismatch");
    std::size_t idx = 0;
    for (std::size_t j = 0; j < supp_.size(); ++j) {
        if (sig[j] < 0 || sig[j] > supp_[j].second) throw std::invalid_argument("signature out of range");
        idx += static_cast<std::size_t>(sig[j]) * strides_[j];
    }
    return masks_[idx];
}

ElemMask pi(const Group& g, const Sequence& s, DpOptions opt) {
    ProductTable t(g, s, {.state_budget = opt.state_budget});
    return t.pi();
}

ElemMask pi_n(const Group& g, const Sequence& s, int n, DpOptions opt) {
    if (n < 0 || n > s.length()) throw std::invalid_argument("pi_n: n must lie in [0, |S|]");
    ProductTable t(g, s, {.state_budget = opt.state_budget, .layer_cap = n});
    return t.pi_n(n);
}

ElemMask pi_all(const Group& g, const Sequence& s, DpOptions opt) {
    ProductTable t(g, s, {.state_budget = opt.state_budget});
    return t.pi_all();
}

bool is_product_one_free(const Group& g, const Sequence& s, DpOptions opt) {
    ProductTable t(g, s, {.state_budget = opt.state_budget, .stop_identity_min_weight = 1});
    return !t.identity_hit();
}

bool is_big_product_one_free(const Group& g, const Sequence& s, DpOptions opt) {
    const int n = g.order();
    if (s.length() < n) return true;  // Pi_{|G|}(S) is empty
    ProductTable t(g, s,
                   {.state_budget = opt.state_budget, .layer_cap = n, .stop_identity_exact_weight = n});
    return !t.identity_hit();
}

ElemMask setseq_products(const Group& g, std::span<const ElemMask> sets, int k) {
    const int ell = static_cast<int>(sets.size());
    if (k < 1 || k > ell) throw std::invalid_argument("setseq_products: need 1 <= k <= l");
    for (ElemMask a : sets)
        if (a == 0) throw std::invalid_argument("setseq_products: sets must be nonempty");
    std::vector<ElemMask> chosen(static_cast<std::size_t>(k) + 1, 0);
    chosen[0] = single_mask(g.identity());
    for (int i = 0; i < ell; ++i) {
        for (int j = std::min(k, i + 1); j >= 1; --j) {
            if (chosen[static_cast<std::size_t>(j - 1)] == 0) continue;
            chosen[static_cast<std::size_t>(j)] |=
                g.product_mask(chosen[static_cast<std::size_t>(j - 1)], sets[static_cast<std::size_t>(i)]);
        }
    }
    return chosen[static_cast<std::size_t>(k)];
}

ElemMask setseq_all_products(const Group& g, std::span<const ElemMask> sets) {
    ElemMask out = 0;
    for (int k = 1; k <= static_cast<int>(sets.size()); ++k) out |= setseq_products(g, sets, k);
    return out;
}

ProductScan::ProductScan(const Group& g, Options opt) : g_(g), opt_(opt) {
    table_[0] = Entry{single_mask(g.identity()), 0};
}

ProductScan::PushResult ProductScan::push(Elem g) {
    const bool same = !slots_.empty() && slots_.back().first == g;
    int slot;
    if (same) {
        if (slots_.back().second >= kMaxCount)
            throw StateBudgetExceeded("element multiplicity exceeds scan limit");
        slot = static_cast<int>(slots_.size()) - 1;
        ++slots_.back().second;
    } else {
        if (!slots_.empty() && g < slots_.back().first)
            throw std::logic_error("ProductScan::push requires nondecreasing elements");
        if (static_cast<int>(slots_.size()) >= kMaxSlots)
            throw StateBudgetExceeded("distinct-element count exceeds scan limit");
        slot = static_cast<int>(slots_.size());
        slots_.emplace_back(g, 1);
    }
    const std::uint64_t unit = std::uint64_t{1} << (kBitsPerSlot * slot);

    // Sources: signatures whose slot count is one less than the new count.
    std::vector<std::pair<std::int32_t, std::uint64_t>> sources;
    if (same) {
        const auto& prev = frames_.back().added;
        sources.reserve(prev.size());
        for (std::uint64_t k : prev) sources.emplace_back(table_.find(k)->second.weight, k);
    } else {
        sources.reserve(table_.size());
        sources.emplace_back(0, 0);
        for (const auto& f : frames_)
            for (std::uint64_t k : f.added) sources.emplace_back(table_.find(k)->second.weight, k);
        std::stable_sort(sources.begin(), sources.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });
    }

    Frame frame;
    frame.new_slot = !same;
    frame.added.reserve(sources.size());
    bool aborted = false;
    for (const auto& [w, key] : sources) {
        if (opt_.layer_cap >= 0 && w >= opt_.layer_cap) break;  // sources ascend in weight
        const std::uint64_t key2 = key + unit;
        const std::int32_t w2 = w + 1;
        ElemMask m = g_.mul_mask(table_.find(key)->second.mask, g);
        for (std::size_t h = 0; h < slots_.size(); ++h) {
            if (static_cast<int>(h) == slot) continue;
            if (((key2 >> (kBitsPerSlot * h)) & kMaxCount) == 0) continue;
            const std::uint64_t sub = key2 - (std::uint64_t{1} << (kBitsPerSlot * h));
            auto it = table_.find(sub);
            if (it == table_.end()) throw std::logic_error("ProductScan: missing sub-signature (push after abort?)");
            m |= g_.mul_mask(it->second.mask, slots_[h].first);
        }
        table_[key2] = Entry{m, w2};
        frame.added.push_back(key2);
        if (table_.size() > opt_.state_budget) throw StateBudgetExceeded("scan state budget exceeded");
        if (mask_contains(m, g_.identity())) {
            frame.id_any = true;
            if (w2 == opt_.flag_layer) frame.id_flag = true;
            if (opt_.stop_on_identity_any || (opt_.stop_on_identity_flag && w2 == opt_.flag_layer)) {
                aborted = true;
                break;
            }
        }
    }
    (void)aborted;  // an aborted push leaves a partial frame; caller must pop

    id_any_frames_ += frame.id_any ? 1 : 0;
    id_flag_frames_ += frame.id_flag ? 1 : 0;
    frames_.push_back(std::move(frame));
    ++length_;
    return {identity_any(), identity_flag()};
}

void ProductScan::pop() {
    if (frames_.empty()) throw std::logic_error("pop on empty ProductScan");
    Frame& f = frames_.back();
    for (std::uint64_t k : f.added) table_.erase(k);
    id_any_frames_ -= f.id_any ? 1 : 0;
    id_flag_frames_ -= f.id_flag ? 1 : 0;
    if (f.new_slot)
        slots_.pop_back();
    else
        --slots_.back().second;
    frames_.pop_back();
    --length_;
}

ElemMask ProductScan::pi_n(int n) const {
    ElemMask out = 0;
    for (const auto& [key, e] : table_)
        if (e.weight == n) out |= e.mask;
    return out;
}

}  // namespace zerosum
