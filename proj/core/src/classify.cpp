#include "zerosum/classify.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <numeric>

#include "zerosum/products.hpp"

namespace zerosum {

namespace {

bool is_order6_exception(const MetacyclicSpec& s) { return s.p == 2 && s.m == 3 && s.r == 2; }

const MetacyclicSpec& require_spec(const Group& g, ExtremalFamily f) {
    if (!g.is_metacyclic())
        throw UnsupportedQuery("extremal classification applies to metacyclic presentations");
    // With m = 1 the group degenerates to C_p. The product-one free
    // characterization still holds there ((x^a)^[p-1]), but the two-block
    // characterization does not: blocks may sit in two nontrivial cosets,
    // e.g. x^[4].(x^2)^[4] over C_5 is |G|-product-one free and not of the
    // single-coset form. Refuse rather than certify a false equivalence.
    if (f == ExtremalFamily::BigProductOneFree && g.metacyclic_spec()->m == 1)
        throw UnsupportedQuery(
            "the extremal |G|-product-one free characterization needs a nontrivial normal part");
    return *g.metacyclic_spec();
}

int extremal_length(const MetacyclicSpec& s, ExtremalFamily f) {
    return f == ExtremalFamily::ProductOneFree ? metacyclic_davenport_formula(s)
                                               : metacyclic_gao_formula(s) - 1;
}

// Splits S into the coset parts: returns multiplicity-expanded y-exponents
// per x-class.
std::vector<std::vector<int>> coset_split(const Group& g, const Sequence& s) {
    const auto& spec = *g.metacyclic_spec();
    std::vector<std::vector<int>> parts(static_cast<size_t>(spec.p));
    for (const auto& [e, k] : s.counts())
        for (int i = 0; i < k; ++i)
            parts[static_cast<size_t>(g.x_exponent(e))].push_back(g.y_exponent(e));
    return parts;
}

std::optional<FormDescriptor> match_coset_block(const Group& g, ExtremalFamily f, const Sequence& s) {
    const auto& spec = *g.metacyclic_spec();
    auto parts = coset_split(g, s);

    int a = 0;
    for (int i = 1; i < spec.p; ++i) {
        if (parts[static_cast<size_t>(i)].empty()) continue;
        if (a != 0) return std::nullopt;  // terms spread over two nontrivial cosets
        a = i;
    }
    if (spec.p > 1 && a == 0) return std::nullopt;
    if (static_cast<int>(parts[static_cast<size_t>(a)].size()) != spec.p - 1) return std::nullopt;

    FormDescriptor d;
    d.family = f;
    d.clause = FormDescriptor::Clause::CosetBlock;
    d.a = a;
    d.b = parts[static_cast<size_t>(a)];
    std::sort(d.b.begin(), d.b.end());

    // Normal-part blocks.
    Sequence sn = restrict_to(s, g.normal_subgroup_mask());
    if (f == ExtremalFamily::ProductOneFree) {
        if (spec.m == 1) {
            if (!sn.empty()) return std::nullopt;
            d.c = 0;
            return d;
        }
        if (sn.support_size() != 1) return std::nullopt;
        auto [e, k] = sn.counts()[0];
        if (k != spec.m - 1) return std::nullopt;
        int c = g.y_exponent(e);
        if (c < 1 || std::gcd(c, spec.m) != 1) return std::nullopt;
        d.c = c;
        return d;
    }
    if (spec.m == 1) {
        if (sn.length() != spec.p - 1 || (sn.length() > 0 && sn.support_size() != 1)) return std::nullopt;
        d.c1 = 0;
        d.k1 = 1;
        d.c2 = 0;
        d.k2 = spec.p;
        return d;
    }
    if (sn.support_size() != 2) return std::nullopt;
    auto [e1, v1] = sn.counts()[0];
    auto [e2, v2] = sn.counts()[1];
    if ((v1 + 1) % spec.m != 0 || (v2 + 1) % spec.m != 0) return std::nullopt;
    int k1 = (v1 + 1) / spec.m, k2 = (v2 + 1) / spec.m;
    if (k1 < 1 || k2 < 1 || k1 + k2 != spec.p + 1) return std::nullopt;
    int c1 = g.y_exponent(e1), c2 = g.y_exponent(e2);
    if (std::gcd(((c1 - c2) % spec.m + spec.m) % spec.m, spec.m) != 1) return std::nullopt;
    if (std::pair{k1, c1} > std::pair{k2, c2}) {
        std::swap(k1, k2);
        std::swap(c1, c2);
    }
    d.c1 = c1;
    d.k1 = k1;
    d.c2 = c2;
    d.k2 = k2;
    return d;
}

std::optional<FormDescriptor> match_order6(const Group& g, ExtremalFamily f, const Sequence& s) {
    const auto& spec = *g.metacyclic_spec();
    auto parts = coset_split(g, s);
    const auto& np = parts[1];

    if (f == ExtremalFamily::ProductOneFree) {
        if (np.size() == 3) {
            // x . x*y . x*y^2
            std::vector<int> sorted = np;
            std::sort(sorted.begin(), sorted.end());
            if (sorted == std::vector<int>{0, 1, 2} && parts[0].empty()) {
                FormDescriptor d;
                d.family = f;
                d.clause = FormDescriptor::Clause::ExceptionalTriple;
                return d;
            }
            return std::nullopt;
        }
        if (np.size() != 1) return std::nullopt;
        Sequence sn = restrict_to(s, g.normal_subgroup_mask());
        if (sn.support_size() != 1 || sn.counts()[0].second != 2) return std::nullopt;
        int c = g.y_exponent(sn.counts()[0].first);
        if (c < 1) return std::nullopt;
        FormDescriptor d;
        d.family = f;
        d.clause = FormDescriptor::Clause::SingleCosetPair;
        d.b = {np[0]};
        d.c = c;
        return d;
    }

    if (np.size() == 3) {
        std::vector<int> sorted = np;
        std::sort(sorted.begin(), sorted.end());
        Sequence sn = restrict_to(s, g.normal_subgroup_mask());
        if (sorted == std::vector<int>{0, 1, 2} && sn == Sequence::repeated(g.identity(), 5)) {
            FormDescriptor d;
            d.family = f;
            d.clause = FormDescriptor::Clause::ExceptionalTriple;
            return d;
        }
        return std::nullopt;
    }
    if (np.size() != 1) return std::nullopt;
    Sequence sn = restrict_to(s, g.normal_subgroup_mask());
    if (sn.support_size() != 2) return std::nullopt;
    auto [e1, v1] = sn.counts()[0];
    auto [e2, v2] = sn.counts()[1];
    int c1 = g.y_exponent(e1), c2 = g.y_exponent(e2);
    if (v1 == 2 && v2 == 5) {
        std::swap(c1, c2);
    } else if (!(v1 == 5 && v2 == 2)) {
        return std::nullopt;
    }
    if (std::gcd(((c1 - c2) % spec.m + spec.m) % spec.m, spec.m) != 1) return std::nullopt;
    FormDescriptor d;
    d.family = f;
    d.clause = FormDescriptor::Clause::SingleCosetPair;
    d.b = {np[0]};
    d.c1 = c1;
    d.k1 = 2;  // block lengths 5 = 2*3-1 and 2 = 1*3-1
    d.c2 = c2;
    d.k2 = 1;
    return d;
}

// Nondecreasing exponent tuples of the given size over [0, m-1].
void for_each_sorted_tuple(int size, int m, std::vector<int>& cur,
                           const std::function<void(const std::vector<int>&)>& f) {
    if (static_cast<int>(cur.size()) == size) {
        f(cur);
        return;
    }
    int lo = cur.empty() ? 0 : cur.back();
    for (int b = lo; b < m; ++b) {
        cur.push_back(b);
        for_each_sorted_tuple(size, m, cur, f);
        cur.pop_back();
    }
}

}  // namespace

const char* family_label(ExtremalFamily f) {
    return f == ExtremalFamily::ProductOneFree ? "t11" : "t12";
}

std::optional<FormDescriptor> recognize_extremal(const Group& g, ExtremalFamily f, const Sequence& s) {
    const auto& spec = require_spec(g, f);
    if (s.length() != extremal_length(spec, f))
        throw WrongLength("sequence length " + std::to_string(s.length()) + " is not the extremal length " +
                          std::to_string(extremal_length(spec, f)));
    if (is_order6_exception(spec)) return match_order6(g, f, s);
    return match_coset_block(g, f, s);
}

std::vector<Sequence> generate_extremal(const Group& g, ExtremalFamily f) {
    const auto& spec = require_spec(g, f);
    std::vector<Sequence> out;

    auto emit_order6 = [&] {
        // x . x*y . x*y^2, optionally padded with 1^5.
        Sequence triple;
        for (int b = 0; b < 3; ++b) triple.append(g.pair_element(1, b));
        if (f == ExtremalFamily::BigProductOneFree) triple.append(g.identity(), 5);
        out.push_back(std::move(triple));
        for (int b = 0; b < 3; ++b) {
            if (f == ExtremalFamily::ProductOneFree) {
                for (int c = 1; c < 3; ++c) {
                    Sequence s;
                    s.append(g.pair_element(1, b));
                    s.append(g.pair_element(0, c), 2);
                    out.push_back(std::move(s));
                }
            } else {
                for (int c1 = 0; c1 < 3; ++c1)
                    for (int c2 = 0; c2 < 3; ++c2) {
                        if (std::gcd(((c1 - c2) % 3 + 3) % 3, 3) != 1) continue;
                        Sequence s;
                        s.append(g.pair_element(1, b));
                        s.append(g.pair_element(0, c1), 5);
                        s.append(g.pair_element(0, c2), 2);
                        out.push_back(std::move(s));
                    }
            }
        }
    };

    auto emit_coset_block = [&] {
        std::vector<int> cur;
        for (int a = 1; a < spec.p; ++a) {
            for_each_sorted_tuple(spec.p - 1, spec.m, cur, [&](const std::vector<int>& bs) {
                Sequence base;
                for (int b : bs) base.append(g.pair_element(a, b));
                if (f == ExtremalFamily::ProductOneFree) {
                    if (spec.m == 1) {
                        out.push_back(base);
                        return;
                    }
                    for (int c = 1; c < spec.m; ++c) {
                        if (std::gcd(c, spec.m) != 1) continue;
                        Sequence s = base;
                        s.append(g.pair_element(0, c), spec.m - 1);
                        out.push_back(std::move(s));
                    }
                } else {
                    if (spec.m == 1) {
                        Sequence s = base;
                        s.append(g.identity(), spec.p - 1);
                        out.push_back(std::move(s));
                        return;
                    }
                    for (int k1 = 1; k1 <= spec.p; ++k1) {
                        int k2 = spec.p + 1 - k1;
                        for (int c1 = 0; c1 < spec.m; ++c1)
                            for (int c2 = 0; c2 < spec.m; ++c2) {
                                if (std::gcd(((c1 - c2) % spec.m + spec.m) % spec.m, spec.m) != 1) continue;
                                // Canonical block order; the swapped pair is the same multiset.
                                if (std::pair{k1, c1} > std::pair{k2, c2}) continue;
                                Sequence s = base;
                                s.append(g.pair_element(0, c1), k1 * spec.m - 1);
                                s.append(g.pair_element(0, c2), k2 * spec.m - 1);
                                out.push_back(std::move(s));
                            }
                    }
                }
            });
        }
    };

    if (is_order6_exception(spec))
        emit_order6();
    else
        emit_coset_block();

    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

VerificationReport verify_theorem(const Group& g, ExtremalFamily f, const VerifyOptions& opt) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto& spec = require_spec(g, f);
    const int length = extremal_length(spec, f);

    VerificationReport rep;
    rep.group_spec = g.spec_string();
    rep.theorem = family_label(f);

    std::vector<Sequence> forms = generate_extremal(g, f);
    rep.forms_count = static_cast<long>(forms.size());
    rep.forms_are_free = true;
    for (const auto& s : forms) {
        bool free = f == ExtremalFamily::ProductOneFree ? is_product_one_free(g, s)
                                                        : is_big_product_one_free(g, s);
        if (!free) {
            rep.forms_are_free = false;
            break;
        }
    }

    if (multiset_count(g.order(), length) <= opt.census_leaf_limit) {
        CensusOptions copt;
        copt.budget = opt.budget;
        CensusResult census = f == ExtremalFamily::ProductOneFree
                                  ? census_product_one_free(g, length, copt)
                                  : census_big_product_one_free(g, length, copt);
        rep.nodes = census.stats.nodes;
        if (census.complete) {
            rep.census_count = static_cast<long>(census.members.size());
            rep.census_matches_forms = census.members == forms;
        }
    }
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

}  // namespace zerosum
