#include "zerosum/lemma_lab.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

#include "zerosum/invariants.hpp"
#include "zerosum/products.hpp"

namespace zerosum {

namespace {

// --- deterministic instance derivation -------------------------------------

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Small deterministic generator; instance i of a check depends only on
// (seed, i), so failures replay regardless of threading or platform.
struct Rng {
    std::uint64_t state;
    explicit Rng(std::uint64_t seed, std::uint64_t index) : state(splitmix64(seed ^ splitmix64(index + 1))) {}
    std::uint64_t next() { return state = splitmix64(state); }
    std::uint64_t draw(std::uint64_t n) { return next() % n; }  // n <= 2^32, bias negligible
};

ElemMask random_nonempty_submask(Rng& rng, ElemMask base) {
    const int k = mask_size(base);
    for (;;) {
        ElemMask picked = 0;
        mask_for_each(base, [&](Elem g) {
            if (rng.next() & 1) picked = mask_with(picked, g);
        });
        if (picked) return picked;
        if (k == 0) throw std::invalid_argument("empty base set");
    }
}

ElemMask random_submask_of_size(Rng& rng, ElemMask base, int size) {
    std::vector<Elem> pool = mask_elements(base);
    ElemMask out = 0;
    for (int i = 0; i < size; ++i) {
        std::size_t j = static_cast<std::size_t>(rng.draw(pool.size() - static_cast<std::size_t>(i)));
        out = mask_with(out, pool[j]);
        std::swap(pool[j], pool[pool.size() - 1 - static_cast<std::size_t>(i)]);
    }
    return out;
}

Sequence random_sequence_over(Rng& rng, const std::vector<Elem>& pool, int length) {
    Sequence s;
    for (int i = 0; i < length; ++i) s.append(pool[static_cast<std::size_t>(rng.draw(pool.size()))]);
    return s;
}

// --- exhaustive iteration helpers -------------------------------------------

template <typename F>
void for_each_multiset_rec(const std::vector<Elem>& pool, int length, std::size_t from,
                           std::vector<Elem>& cur, F& f) {
    if (static_cast<int>(cur.size()) == length) {
        f(cur);
        return;
    }
    for (std::size_t i = from; i < pool.size(); ++i) {
        cur.push_back(pool[i]);
        for_each_multiset_rec(pool, length, i, cur, f);
        cur.pop_back();
    }
}

template <typename F>
void for_each_multiset(const std::vector<Elem>& pool, int length, F f) {
    std::vector<Elem> cur;
    cur.reserve(static_cast<std::size_t>(length));
    for_each_multiset_rec(pool, length, 0, cur, f);
}

template <typename F>
void for_each_nonempty_submask(ElemMask base, F f) {
    for (ElemMask sub = base; sub; sub = (sub - 1) & base) f(sub);
}

// --- shared plumbing ---------------------------------------------------------

bool run_exhaustive(const CheckParams& p, double space) {
    switch (p.mode) {
        case CheckParams::Mode::Exhaustive: return true;
        case CheckParams::Mode::Randomized: return false;
        case CheckParams::Mode::Auto: break;
    }
    return space <= static_cast<double>(p.exhaustive_bound);
}

struct OutcomeBuilder {
    CheckOutcome out;
    explicit OutcomeBuilder(std::string id, bool exhaustive, std::uint64_t seed) {
        out.lemma_id = std::move(id);
        out.mode = exhaustive ? "exhaustive" : "randomized";
        out.seed = seed;
    }
    void instance(bool ok, const std::function<std::string()>& describe) {
        ++out.instances;
        if (!ok) {
            ++out.failures;
            if (out.counterexample.empty()) out.counterexample = describe();
        }
    }
};

std::string mask_text(const Group& g, ElemMask m) {
    std::string s = "{";
    bool first = true;
    mask_for_each(m, [&](Elem e) {
        if (!first) s += ",";
        s += format_element(g, e);
        first = false;
    });
    return s + "}";
}

int euler_phi(int n) {
    int result = n;
    for (int p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        while (n % p == 0) n /= p;
        result -= result / p;
    }
    if (n > 1) result -= result / n;
    return result;
}

const MetacyclicSpec& require_metacyclic(const Group& g, const char* what) {
    if (!g.is_metacyclic()) throw UnsupportedQuery(std::string(what) + " needs a metacyclic group");
    return *g.metacyclic_spec();
}

std::vector<ElemMask> cosets_of(const Group& g, ElemMask subgroup, ElemMask ambient) {
    std::vector<ElemMask> cosets;
    ElemMask seen = 0;
    mask_for_each(ambient, [&](Elem rep) {
        if (mask_contains(seen, rep)) return;
        ElemMask q = g.mul_elem_mask(rep, subgroup);
        cosets.push_back(q);
        seen |= q;
    });
    return cosets;
}

}  // namespace

// --- Kneser ------------------------------------------------------------------

CheckOutcome check_kneser(const Group& g, const CheckParams& params) {
    if (!g.is_abelian()) throw NonAbelianGroup("the sumset bound applies to abelian groups");
    const int n = g.order();
    const double subsets = std::pow(2.0, n) - 1;
    const bool exhaustive = run_exhaustive(params, subsets + subsets * subsets);
    OutcomeBuilder b("kneser_sumset_bound", exhaustive, params.seed);

    auto check_tuple = [&](std::span<const ElemMask> sets) {
        ElemMask prod = sets[0];
        for (std::size_t i = 1; i < sets.size(); ++i) prod = g.product_mask(prod, sets[i]);
        ElemMask h = g.stabilizer(prod, g.all_mask());
        long bound = -static_cast<long>((sets.size() - 1) * static_cast<std::size_t>(mask_size(h)));
        for (ElemMask a : sets) bound += mask_size(g.product_mask(a, h));
        bool ok = mask_size(prod) >= bound;
        b.instance(ok, [&] {
            std::string s = "sets:";
            for (ElemMask a : sets) s += " " + mask_text(g, a);
            return s;
        });
    };

    if (exhaustive) {
        for_each_nonempty_submask(g.all_mask(), [&](ElemMask a) {
            ElemMask one[] = {a};
            check_tuple(one);
        });
        for_each_nonempty_submask(g.all_mask(), [&](ElemMask a) {
            for_each_nonempty_submask(g.all_mask(), [&](ElemMask c) {
                ElemMask two[] = {a, c};
                check_tuple(two);
            });
        });
    } else {
        for (std::uint64_t i = 0; i < params.trials; ++i) {
            Rng rng(params.seed, i);
            std::size_t r = 2 + (i & 1);
            std::vector<ElemMask> sets(r);
            for (auto& a : sets) a = random_nonempty_submask(rng, g.all_mask());
            check_tuple(sets);
        }
    }
    return b.out;
}

// --- generalized sumset bound (ordered set-sequence products) -----------------

CheckOutcome check_dgm(const Group& g, const CheckParams& params) {
    if (!g.is_abelian()) throw NonAbelianGroup("the set-sequence bound applies to abelian groups");
    const double subsets = std::pow(2.0, g.order()) - 1;
    const bool exhaustive = run_exhaustive(params, subsets + subsets * subsets);
    OutcomeBuilder b("setseq_product_bound", exhaustive, params.seed);

    // One instance = one set family, with the bound checked for every k.
    auto bound_holds = [&](std::span<const ElemMask> sets, int k) {
        ElemMask p = setseq_products(g, sets, k);
        ElemMask h = g.stabilizer(p, g.all_mask());
        long inner = 1 - k;
        for (ElemMask q : cosets_of(g, h, g.all_mask())) {
            int hits = 0;
            for (ElemMask a : sets)
                if (a & q) ++hits;
            inner += std::min(k, hits);
        }
        return mask_size(p) >= static_cast<long>(mask_size(h)) * inner;
    };
    auto check_family = [&](std::span<const ElemMask> sets) {
        int bad_k = 0;
        for (int k = 1; k <= static_cast<int>(sets.size()); ++k)
            if (!bound_holds(sets, k)) {
                bad_k = k;
                break;
            }
        b.instance(bad_k == 0, [&] {
            std::ostringstream os;
            os << "k=" << bad_k << " sets:";
            for (ElemMask a : sets) os << " " << mask_text(g, a);
            return os.str();
        });
    };

    if (exhaustive) {
        for_each_nonempty_submask(g.all_mask(), [&](ElemMask a) {
            ElemMask one[] = {a};
            check_family(one);
        });
        for_each_nonempty_submask(g.all_mask(), [&](ElemMask a) {
            for_each_nonempty_submask(g.all_mask(), [&](ElemMask c) {
                ElemMask two[] = {a, c};
                check_family(two);
            });
        });
    } else {
        for (std::uint64_t i = 0; i < params.trials; ++i) {
            Rng rng(params.seed, i);
            int ell = 1 + static_cast<int>(rng.draw(5));
            std::vector<ElemMask> sets(static_cast<std::size_t>(ell));
            for (auto& a : sets)
                a = random_submask_of_size(rng, g.all_mask(),
                                           1 + static_cast<int>(rng.draw(std::min(3, g.order()))));
            check_family(sets);
        }
    }
    return b.out;
}

// --- cyclic inverse results ----------------------------------------------------

CheckOutcome check_cyclic_extremal_free(int n) {
    if (n < 3) throw std::invalid_argument("cyclic inverse result needs n >= 3");
    Group g = Group::cyclic(n);
    OutcomeBuilder b("cyclic_extremal_free(n=" + std::to_string(n) + ")", true, 0);
    std::vector<Elem> pool(static_cast<std::size_t>(n));
    std::iota(pool.begin(), pool.end(), 0);
    std::uint64_t free_count = 0;
    for_each_multiset(pool, n - 1, [&](const std::vector<Elem>& elems) {
        Sequence s(elems);
        bool free = is_product_one_free(g, s);
        bool constant_unit = s.support_size() == 1 && std::gcd(s.counts()[0].first, n) == 1;
        if (free) ++free_count;
        b.instance(free == constant_unit, [&] { return format_sequence(g, s); });
    });
    if (free_count != static_cast<std::uint64_t>(euler_phi(n))) {
        ++b.out.failures;
        b.out.counterexample = "free census size " + std::to_string(free_count) + " != phi(n)";
    }
    return b.out;
}

CheckOutcome check_cyclic_kn_products(int n, int k) {
    if (n < 3 || k < 1) throw std::invalid_argument("kn-product check needs n >= 3, k >= 1");
    Group g = Group::cyclic(n);
    OutcomeBuilder b("cyclic_kn_products(n=" + std::to_string(n) + ",k=" + std::to_string(k) + ")",
                     true, 0);
    std::vector<Elem> pool(static_cast<std::size_t>(n));
    std::iota(pool.begin(), pool.end(), 0);

    for_each_multiset(pool, k * n + n - 1, [&](const std::vector<Elem>& elems) {
        Sequence s(elems);
        bool has = mask_contains(pi_n(g, s, k * n), g.identity());
        b.instance(has, [&] { return "no kn-product-one sub-multiset in " + format_sequence(g, s); });
    });

    for_each_multiset(pool, k * n + n - 2, [&](const std::vector<Elem>& elems) {
        Sequence s(elems);
        if (mask_contains(pi_n(g, s, k * n), g.identity())) {
            b.instance(true, [] { return std::string(); });
            return;
        }
        bool shape_ok = false;
        if (s.support_size() == 2) {
            auto [a, v1] = s.counts()[0];
            auto [bb, v2] = s.counts()[1];
            shape_ok = (v1 + 1) % n == 0 && (v2 + 1) % n == 0 &&
                       (v1 + 1) / n + (v2 + 1) / n == k + 1 &&
                       std::gcd(((a - bb) % n + n) % n, n) == 1;
        }
        // The covering claim needs k >= 2: with k = 1 the two blocks expose at
        // most n-1 distinct (n-2)-products, so Pi_{n-2}(S) can never be all of
        // C_n. Every use of the claim downstream has k >= 2.
        bool covers = k < 2 || pi_n(g, s, k * n - 2) == g.all_mask();
        b.instance(shape_ok && covers, [&] { return format_sequence(g, s); });
    });
    return b.out;
}

// --- product-set bounds ---------------------------------------------------------

std::vector<CheckOutcome> check_pi_bounds(const Group& g, const CheckParams& params) {
    std::vector<CheckOutcome> out;
    const int n = g.order();

    {  // |AB| >= |A| + |B| - 1 under the trivial-solution condition (any group)
        const double space = std::pow(4.0, n - 1);
        const bool exhaustive = run_exhaustive(params, space);
        OutcomeBuilder b("product_bounds/kemperman", exhaustive, params.seed);
        auto check_pair = [&](ElemMask a, ElemMask bm) {
            ElemMask a1 = mask_with(a, 0), b1 = mask_with(bm, 0);
            if ((g.inverse_mask(a1 & ~ElemMask{1}) & (b1 & ~ElemMask{1})) != 0) return;
            bool ok = mask_size(g.product_mask(a1, b1)) >= mask_size(a1) + mask_size(b1) - 1;
            b.instance(ok, [&] { return "A=" + mask_text(g, a1) + " B=" + mask_text(g, b1); });
        };
        if (exhaustive) {
            ElemMask rest = g.all_mask() & ~ElemMask{1};
            check_pair(0, 0);
            for_each_nonempty_submask(rest, [&](ElemMask a) {
                check_pair(a, 0);
                check_pair(0, a);
                for_each_nonempty_submask(rest, [&](ElemMask c) { check_pair(a, c); });
            });
        } else {
            for (std::uint64_t i = 0; i < params.trials; ++i) {
                Rng rng(params.seed, i);
                ElemMask rest = g.all_mask() & ~ElemMask{1};
                ElemMask a = rng.next() & rest;
                ElemMask allowed = rest & ~g.inverse_mask(a);
                ElemMask bm = rng.next() & allowed;
                check_pair(a, bm);
            }
        }
        out.push_back(b.out);
    }

    {  // |A| + |B| > |W| forces AB = W on an abelian W
        ElemMask w = 0;
        if (g.is_abelian())
            w = g.all_mask();
        else if (g.is_metacyclic())
            w = g.normal_subgroup_mask();
        const int wsize = mask_size(w);
        const double space = std::pow(4.0, wsize);
        const bool exhaustive = run_exhaustive(params, space);
        OutcomeBuilder b("product_bounds/full_cover", exhaustive, params.seed);
        if (w != 0 && wsize >= 2) {
            auto check_pair = [&](ElemMask a, ElemMask bm) {
                if (mask_size(a) + mask_size(bm) <= wsize) return;
                bool ok = g.product_mask(a, bm) == w;
                b.instance(ok, [&] { return "A=" + mask_text(g, a) + " B=" + mask_text(g, bm); });
            };
            if (exhaustive) {
                for_each_nonempty_submask(w, [&](ElemMask a) {
                    for_each_nonempty_submask(w, [&](ElemMask c) { check_pair(a, c); });
                });
            } else {
                for (std::uint64_t i = 0; i < params.trials; ++i) {
                    Rng rng(params.seed, i);
                    int sa = 1 + static_cast<int>(rng.draw(static_cast<std::uint64_t>(wsize)));
                    int min_sb = std::max(1, wsize + 1 - sa);
                    int sb = min_sb + static_cast<int>(rng.draw(static_cast<std::uint64_t>(wsize - min_sb + 1)));
                    check_pair(random_submask_of_size(rng, w, sa), random_submask_of_size(rng, w, sb));
                }
            }
        }
        out.push_back(b.out);
    }

    {  // 1 not in Pi(A) => |Pi(A)| >= sum |A_i| (ordered products, any group)
        const double space = std::pow(2.0, n) * std::pow(2.0, n);
        const bool exhaustive = run_exhaustive(params, space);
        OutcomeBuilder b("product_bounds/ordered_free_lower", exhaustive, params.seed);
        auto check_family = [&](std::span<const ElemMask> sets) {
            ElemMask all = setseq_all_products(g, sets);
            if (mask_contains(all, g.identity())) return;
            long total = 0;
            for (ElemMask a : sets) total += mask_size(a);
            b.instance(mask_size(all) >= total, [&] {
                std::string s = "sets:";
                for (ElemMask a : sets) s += " " + mask_text(g, a);
                return s;
            });
        };
        if (exhaustive) {
            for_each_nonempty_submask(g.all_mask(), [&](ElemMask a) {
                ElemMask one[] = {a};
                check_family(one);
                for_each_nonempty_submask(g.all_mask(), [&](ElemMask c) {
                    ElemMask two[] = {a, c};
                    check_family(two);
                });
            });
        } else {
            for (std::uint64_t i = 0; i < params.trials; ++i) {
                Rng rng(params.seed, i);
                int ell = 1 + static_cast<int>(rng.draw(4));
                std::vector<ElemMask> sets(static_cast<std::size_t>(ell));
                for (auto& a : sets) a = random_nonempty_submask(rng, g.all_mask());
                check_family(sets);
            }
        }
        out.push_back(b.out);
    }

    {  // product-one free S => |Pi(S)| >= |S|
        const double space = multiset_count(n, 3) * 3.0;
        const bool exhaustive = run_exhaustive(params, space);
        OutcomeBuilder b("product_bounds/free_sequence_lower", exhaustive, params.seed);
        auto check_seq = [&](const Sequence& s) {
            if (!is_product_one_free(g, s)) return;
            b.instance(mask_size(pi_all(g, s)) >= s.length(), [&] { return format_sequence(g, s); });
        };
        std::vector<Elem> pool(static_cast<std::size_t>(n));
        std::iota(pool.begin(), pool.end(), 0);
        if (exhaustive) {
            for (int len = 1; len <= 3; ++len)
                for_each_multiset(pool, len, [&](const std::vector<Elem>& e) { check_seq(Sequence(e)); });
        } else {
            for (std::uint64_t i = 0; i < params.trials; ++i) {
                Rng rng(params.seed, i);
                check_seq(random_sequence_over(rng, pool, 1 + static_cast<int>(rng.draw(5))));
            }
        }
        out.push_back(b.out);
    }

    {  // maximal product-one T with |T| = |S| - d(G): supp(S) \ {1} survives removal
        const int d = small_davenport(g).value;
        const double space = static_cast<double>(multiset_count(n, d)) +
                             static_cast<double>(multiset_count(n, d + 1)) +
                             static_cast<double>(multiset_count(n, d + 2));
        const bool exhaustive = run_exhaustive(params, space);
        OutcomeBuilder b("product_bounds/max_product_one_remainder", exhaustive, params.seed);
        auto check_seq = [&](const Sequence& s) {
            ProductTable table(g, s, {});
            int tstar = 0;
            table.for_each_signature([&](std::span<const int>, int w, ElemMask m) {
                if (w > tstar && mask_contains(m, g.identity())) tstar = w;
            });
            if (tstar != s.length() - d) return;
            table.for_each_signature([&](std::span<const int> sig, int w, ElemMask m) {
                if (w != tstar || (tstar > 0 && !mask_contains(m, g.identity()))) return;
                Sequence t;
                for (int j = 0; j < table.support_size(); ++j)
                    if (sig[static_cast<std::size_t>(j)] > 0)
                        t.append(table.support_elem(j), sig[static_cast<std::size_t>(j)]);
                Sequence rest = remove_subsequence(s, t);
                bool ok = true;
                for (const auto& [e, cnt] : s.counts())
                    if (e != g.identity() && rest.multiplicity(e) == 0) ok = false;
                b.instance(ok, [&] {
                    return "S=" + format_sequence(g, s) + " T=" + format_sequence(g, t);
                });
            });
        };
        std::vector<Elem> pool(static_cast<std::size_t>(n));
        std::iota(pool.begin(), pool.end(), 0);
        if (exhaustive) {
            for (int len = d; len <= d + 2; ++len)
                for_each_multiset(pool, len, [&](const std::vector<Elem>& e) { check_seq(Sequence(e)); });
        } else {
            for (std::uint64_t i = 0; i < params.trials; ++i) {
                Rng rng(params.seed, i);
                if ((i & 1) == 0 || !g.is_metacyclic()) {
                    int len = std::max(1, d - 1) + static_cast<int>(rng.draw(4));
                    check_seq(random_sequence_over(rng, pool, len));
                } else {
                    // Structured: a known free sequence of length d plus a few
                    // inverse pairs, so the maximal-length hypothesis is
                    // actually reachable at larger orders.
                    const auto& spec = *g.metacyclic_spec();
                    Sequence s;
                    int a = 1 + static_cast<int>(rng.draw(static_cast<std::uint64_t>(spec.p - 1)));
                    for (int j = 0; j < spec.p - 1; ++j)
                        s.append(g.pair_element(a, static_cast<int>(rng.draw(static_cast<std::uint64_t>(spec.m)))));
                    if (spec.m > 1) {
                        int c;
                        do {
                            c = 1 + static_cast<int>(rng.draw(static_cast<std::uint64_t>(spec.m - 1)));
                        } while (std::gcd(c, spec.m) != 1);
                        s.append(g.pair_element(0, c), spec.m - 1);
                    }
                    int pairs = 1 + static_cast<int>(rng.draw(2));
                    for (int j = 0; j < pairs; ++j) {
                        Elem e = static_cast<Elem>(rng.draw(static_cast<std::uint64_t>(n)));
                        s.append(e);
                        s.append(g.inv(e));
                    }
                    check_seq(s);
                }
            }
        }
        out.push_back(b.out);
    }

    return out;
}

// --- conjugation-orbit facts ------------------------------------------------------

std::vector<CheckOutcome> check_conjugation_orbits(const Group& g, const CheckParams& params) {
    const auto& spec = require_metacyclic(g, "conjugation-orbit checks");
    const int p = spec.p;
    std::vector<CheckOutcome> out;
    const ElemMask nmask = g.normal_subgroup_mask();

    {  // orbit closure under subgroups of N
        OutcomeBuilder b("conjugation/orbit_closure", true, 0);
        for (ElemMask sub : g.subgroups_of_normal()) {
            mask_for_each(nmask, [&](Elem u) {
                ElemMask orbit = g.orbit_mask(u);
                for (int s = 0; s < p; ++s)
                    for (int s2 = s + 1; s2 < p; ++s2) {
                        Elem us = g.power(u, g.conj_power(s));
                        Elem us2 = g.power(u, g.conj_power(s2));
                        bool ok = true;
                        if (mask_contains(sub, us) && (orbit & ~sub)) ok = false;
                        if (mask_contains(sub, g.mul(us, g.inv(us2))) && (orbit & ~sub)) ok = false;
                        if (u != g.identity() && us == us2) ok = false;
                        b.instance(ok, [&] {
                            return "M=" + mask_text(g, sub) + " u=" + format_element(g, u) + " s=" +
                                   std::to_string(s) + " s'=" + std::to_string(s2);
                        });
                    }
                if (p == 1) b.instance(true, [] { return std::string(); });
            });
        }
        out.push_back(b.out);
    }

    {  // pi(T) contains |T| distinct conjugates when the quotient image is minimal
        OutcomeBuilder b("conjugation/minimal_lift_products", true, 0);
        std::vector<Elem> pool(static_cast<std::size_t>(g.order()));
        std::iota(pool.begin(), pool.end(), 0);
        auto quotient_minimal = [&](const Sequence& s) {
            // Minimal product-one over the cyclic quotient: total = 0 mod p and
            // no proper nonempty sub-multiset sums to 0.
            int total = 0;
            for (const auto& [e, k] : s.counts()) total += g.quotient_class(e) * k;
            if (total % p != 0) return false;
            std::vector<int> sig(s.counts().size(), 0);
            for (;;) {
                std::size_t j = 0;
                while (j < sig.size()) {
                    if (++sig[j] <= s.counts()[j].second) break;
                    sig[j] = 0;
                    ++j;
                }
                if (j == sig.size()) break;
                int sum = 0, size = 0;
                for (std::size_t i = 0; i < sig.size(); ++i) {
                    sum += sig[i] * g.quotient_class(s.counts()[i].first);
                    size += sig[i];
                }
                if (size > 0 && size < s.length() && sum % p == 0) return false;
            }
            return true;
        };
        for (int len = 1; len <= p; ++len) {
            for_each_multiset(pool, len, [&](const std::vector<Elem>& elems) {
                Sequence s(elems);
                if (!quotient_minimal(s)) return;
                ElemMask prods = pi(g, s);
                bool ok = true;
                mask_for_each(prods, [&](Elem u) {
                    if (u == g.identity()) return;
                    if (mask_size(g.orbit_mask(u) & prods) < s.length()) ok = false;
                });
                b.instance(ok, [&] { return format_sequence(g, s); });
            });
        }
        out.push_back(b.out);
    }

    {  // pi(T0 T1 ... Tt) contains pi(T0) orbit(u1) ... orbit(ut); sampled
        OutcomeBuilder b("conjugation/product_containment", false, params.seed);
        std::vector<std::vector<Elem>> coset_pools(static_cast<std::size_t>(p));
        for (int i = 1; i < p; ++i) coset_pools[static_cast<std::size_t>(i)] = mask_elements(g.coset_mask(i));
        std::vector<Elem> full_pool(static_cast<std::size_t>(g.order()));
        std::iota(full_pool.begin(), full_pool.end(), 0);
        std::vector<Elem> normal_pool = mask_elements(nmask);
        for (std::uint64_t i = 0; i < params.trials; ++i) {
            Rng rng(params.seed, i);
            if (p < 2) break;
            int coset = 1 + static_cast<int>(rng.draw(static_cast<std::uint64_t>(p - 1)));
            Sequence t0 = random_sequence_over(rng, coset_pools[static_cast<std::size_t>(coset)], p);
            int ell = 1 + static_cast<int>(rng.draw(3));
            std::vector<Sequence> blocks;
            std::vector<Elem> reps;
            for (int j = 0; j < ell; ++j) {
                Sequence tj;
                ElemMask meet = 0;
                for (int attempt = 0; attempt < 50; ++attempt) {
                    tj = random_sequence_over(rng, full_pool, 1 + static_cast<int>(rng.draw(static_cast<std::uint64_t>(p + 1))));
                    meet = pi(g, tj) & nmask;
                    if (meet) break;
                }
                if (!meet) {  // guaranteed fallback: one element of N
                    tj = Sequence{normal_pool[static_cast<std::size_t>(rng.draw(normal_pool.size()))]};
                    meet = pi(g, tj) & nmask;
                }
                std::vector<Elem> candidates = mask_elements(meet);
                reps.push_back(candidates[static_cast<std::size_t>(rng.draw(candidates.size()))]);
                blocks.push_back(std::move(tj));
            }
            Sequence acc = t0;
            ElemMask rhs = pi(g, t0);
            bool ok = true;
            for (int t = 0; t < ell && ok; ++t) {
                acc = concat(acc, blocks[static_cast<std::size_t>(t)]);
                rhs = g.product_mask(rhs, g.orbit_mask(reps[static_cast<std::size_t>(t)]));
                ElemMask lhs = pi(g, acc);
                if (rhs & ~lhs) ok = false;
            }
            b.instance(ok, [&] {
                return "T0=" + format_sequence(g, t0) + " blocks=" + std::to_string(ell);
            });
        }
        out.push_back(b.out);
    }

    {  // pi(T) = {1} on p elements outside N forces a constant sequence
        OutcomeBuilder b("conjugation/constant_power_products", true, 0);
        std::vector<Elem> outside = mask_elements(g.all_mask() & ~nmask);
        if (!outside.empty()) {
            for_each_multiset(outside, p, [&](const std::vector<Elem>& elems) {
                Sequence s(elems);
                if (pi(g, s) != single_mask(g.identity())) return;
                b.instance(s.support_size() == 1, [&] { return format_sequence(g, s); });
            });
            // Exactly the constants qualify: one sequence per coset element.
            if (b.out.instances != static_cast<std::uint64_t>(outside.size())) {
                ++b.out.failures;
                if (b.out.counterexample.empty())
                    b.out.counterexample = "expected " + std::to_string(outside.size()) +
                                           " constant sequences, saw " + std::to_string(b.out.instances);
            }
        }
        out.push_back(b.out);
    }

    return out;
}

// --- products of (2p-1)-windows inside one coset -----------------------------------

CheckOutcome check_coset_product_window(const Group& g) {
    const auto& spec = require_metacyclic(g, "coset product windows");
    const int p = spec.p;
    OutcomeBuilder b("coset_product_window", true, 0);
    const ElemMask nmask = g.normal_subgroup_mask();
    for (int a = 1; a < p; ++a) {
        std::vector<Elem> pool = mask_elements(g.coset_mask(a));
        for_each_multiset(pool, 2 * p - 1, [&](const std::vector<Elem>& elems) {
            Sequence s(elems);
            ElemMask prods = pi_n(g, s, p);
            bool ok = true;
            std::string note;
            if (mask_size(prods) == p) {
                if (p != 2) {
                    ok = false;
                    note = "|Pi_p| = p with p >= 3";
                } else {
                    ElemMask h = prods | single_mask(g.identity());
                    ok = mask_size(h) == 3 && (h & ~nmask) == 0 && g.product_mask(h, h) == h;
                    if (!ok) note = "Pi_p is not a punctured order-3 subgroup";
                }
            }
            b.instance(ok, [&] { return format_sequence(g, s) + ": " + note; });
        });
    }
    return b.out;
}

// --- orbit-family bookkeeping and bounds ----------------------------------------

OrbitFamilyAnalysis analyze_orbit_family(const Group& g, std::span<const ElemMask> sets, int v) {
    const auto& spec = require_metacyclic(g, "orbit families");
    const int p = spec.p;
    const ElemMask nmask = g.normal_subgroup_mask();
    const int ell = static_cast<int>(sets.size());
    if (v < 2 || v > ell + 1) throw std::invalid_argument("need 2 <= v <= l + 1");

    int t = 0;
    for (ElemMask a : sets) {
        if (a == 0) throw MalformedOrbitFamily("empty block");
        if (a & ~nmask) throw MalformedOrbitFamily("block leaves the normal part");
        t = std::max(t, mask_size(a));
    }
    if (t > 1) {
        // A common exponent set K (0 in K, |K| = t) must reproduce every
        // non-singleton block from one of its members; singletons must be {1}.
        std::set<std::uint32_t> common;
        bool first = true;
        for (ElemMask a : sets) {
            if (mask_size(a) == 1) {
                if (a != single_mask(g.identity()))
                    throw MalformedOrbitFamily("singleton block other than {1} in a size-t family");
                continue;
            }
            if (mask_size(a) != t) throw MalformedOrbitFamily("blocks of mixed sizes");
            std::set<std::uint32_t> candidates;
            mask_for_each(a, [&](Elem u) {
                std::uint32_t k_set = 0;
                for (int k = 0; k < p; ++k)
                    if (mask_contains(a, g.power(u, g.conj_power(k)))) k_set |= 1u << k;
                if (std::popcount(k_set) == t) candidates.insert(k_set);
            });
            if (candidates.empty()) throw MalformedOrbitFamily("block is not an orbit truncation");
            if (first) {
                common = std::move(candidates);
                first = false;
            } else {
                std::set<std::uint32_t> merged;
                std::set_intersection(common.begin(), common.end(), candidates.begin(), candidates.end(),
                                      std::inserter(merged, merged.begin()));
                common = std::move(merged);
            }
            if (common.empty()) throw MalformedOrbitFamily("no common exponent set across blocks");
        }
    }

    OrbitFamilyAnalysis an;
    an.t = t;
    an.v = v;
    an.ell = ell;
    an.pi_set = setseq_products(g, sets, v - 1);
    an.M = g.stabilizer(an.pi_set, nmask);
    for (int i = 0; i < ell; ++i)
        if ((sets[static_cast<std::size_t>(i)] & ~an.M) == 0) an.I_M.push_back(i);
    for (ElemMask q : cosets_of(g, an.M, nmask)) {
        std::vector<int> hits;
        for (int i = 0; i < ell; ++i)
            if (sets[static_cast<std::size_t>(i)] & q) hits.push_back(i);
        if (static_cast<int>(hits.size()) >= v) {
            ++an.mu;
            an.R = q;
        }
        an.V.emplace_back(q, std::move(hits));
    }
    if (an.mu != 1) an.R.reset();
    return an;
}

CheckOutcome check_orbit_family_bounds(const Group& g, const CheckParams& params) {
    const auto& spec = require_metacyclic(g, "orbit-family bounds");
    const int p = spec.p, m = spec.m;
    if (m < 2) throw std::invalid_argument("orbit-family bounds need a nontrivial normal part");
    const ElemMask nmask = g.normal_subgroup_mask();
    const double space = static_cast<double>(m) * m * m * 3 * (p + 1);
    const bool exhaustive = run_exhaustive(params, space);
    OutcomeBuilder b("orbit_family_bounds", exhaustive, params.seed);

    auto orbit_truncation = [&](Elem u, std::uint32_t k_set) {
        ElemMask a = 0;
        for (int k = 0; k < p; ++k)
            if (k_set & (1u << k)) a = mask_with(a, g.power(u, g.conj_power(k)));
        return a;
    };

    auto verify = [&](const std::vector<ElemMask>& sets, int v) {
        OrbitFamilyAnalysis an = analyze_orbit_family(g, sets, v);
        const long msize = mask_size(an.M);
        const long psize = mask_size(an.pi_set);
        bool ok = true;
        std::string why;

        std::vector<int> vm;
        for (const auto& [q, hits] : an.V) {
            if (mask_contains(q, g.identity())) vm = hits;
        }
        if (vm != an.I_M) {
            ok = false;
            why = "V_M != I_M";
        }
        for (const auto& [q, hits] : an.V) {
            if (mask_contains(q, g.identity())) continue;
            for (int i : hits) {
                if (std::find(an.I_M.begin(), an.I_M.end(), i) != an.I_M.end()) {
                    ok = false;
                    why = "V_Q meets I_M for Q != M";
                }
                int cosets_hit = 0;
                for (const auto& [q2, hits2] : an.V)
                    if (sets[static_cast<std::size_t>(i)] & q2) ++cosets_hit;
                if (cosets_hit != an.t || mask_size(sets[static_cast<std::size_t>(i)]) != an.t) {
                    ok = false;
                    why = "block off M does not spread over t cosets";
                }
            }
        }
        if (an.t == p && an.mu == 1 && an.R && (*an.R & single_mask(g.identity())) == 0) {
            ok = false;
            why = "mu = 1 with t = p but R != M";
        }

        const long im = static_cast<long>(an.I_M.size());
        long bound;
        if (an.mu == 0)
            bound = msize * (2 - v + an.ell * an.t - (an.t - 1) * im);
        else if (an.mu >= 2)
            bound = static_cast<long>(v) * msize;
        else if (an.R && mask_contains(*an.R, g.identity()))
            bound = msize * (1 + an.t * (an.ell - im));
        else
            bound = msize * (1 + (an.t - 1) * an.ell - (an.t - 2) * im);
        if (psize < bound) {
            ok = false;
            why = "case bound " + std::to_string(bound) + " exceeds |Pi^{v-1}| = " + std::to_string(psize);
        }

        b.instance(ok, [&] {
            std::string s = "v=" + std::to_string(v) + " sets:";
            for (ElemMask a : sets) s += " " + mask_text(g, a);
            return s + " (" + why + ")";
        });
    };

    const std::uint32_t full_k = (p >= 32) ? ~0u : ((1u << p) - 1);
    if (exhaustive) {
        std::vector<std::uint32_t> k_sets = {1u, full_k};
        if (p >= 3) k_sets.push_back(0b11u);
        std::vector<Elem> npool = mask_elements(nmask);
        for (std::uint32_t ks : k_sets)
            for (Elem u1 : npool)
                for (Elem u2 : npool)
                    for (int v = 2; v <= 3; ++v) {
                        std::vector<ElemMask> sets = {orbit_truncation(u1, ks), orbit_truncation(u2, ks)};
                        verify(sets, v);
                    }
    } else {
        std::vector<Elem> npool = mask_elements(nmask);
        for (std::uint64_t i = 0; i < params.trials; ++i) {
            Rng rng(params.seed, i);
            int ell = 2 + static_cast<int>(rng.draw(4));
            int t = 1 + static_cast<int>(rng.draw(static_cast<std::uint64_t>(p)));
            std::uint32_t ks = 1;
            std::vector<int> rest;
            for (int k = 1; k < p; ++k) rest.push_back(k);
            for (int picked = 1; picked < t; ++picked) {
                std::size_t j = static_cast<std::size_t>(rng.draw(rest.size()));
                ks |= 1u << rest[j];
                rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(j));
            }
            std::vector<ElemMask> sets;
            for (int j = 0; j < ell; ++j)
                sets.push_back(orbit_truncation(npool[static_cast<std::size_t>(rng.draw(npool.size()))], ks));
            int v = 2 + static_cast<int>(rng.draw(static_cast<std::uint64_t>(ell)));
            verify(sets, v);
        }
    }
    return b.out;
}

// --- completion of coset blocks by normal-part sub-multisets -------------------------

CheckOutcome check_product_one_completion(const Group& g, const CheckParams& params) {
    const auto& spec = require_metacyclic(g, "product-one completion");
    const int p = spec.p, m = spec.m;
    if (m < 2 || p < 2) throw std::invalid_argument("completion check needs a nontrivial presentation");
    const int slen = m + p - 2;
    const double per_coset = static_cast<double>(multiset_count(m, slen)) *
                             static_cast<double>(multiset_count(m, p));
    const bool exhaustive = run_exhaustive(params, per_coset * (p - 1));
    OutcomeBuilder b("product_one_completion", exhaustive, params.seed);

    std::vector<Elem> npool = mask_elements(g.normal_subgroup_mask());

    auto check_pair = [&](const Sequence& s, const Sequence& t) {
        // One table over T * S; signatures split cleanly because T's support
        // (one nontrivial coset) and S's support (the normal part) are disjoint.
        Sequence combined = concat(s, t);
        ProductTable table(g, combined, {});
        std::vector<int> is_tpos(static_cast<std::size_t>(table.support_size()));
        std::vector<int> tmult(static_cast<std::size_t>(table.support_size()));
        for (int j = 0; j < table.support_size(); ++j) {
            is_tpos[static_cast<std::size_t>(j)] = g.quotient_class(table.support_elem(j)) != 0;
            tmult[static_cast<std::size_t>(j)] = t.multiplicity(table.support_elem(j));
        }
        bool found = false;
        table.for_each_signature([&](std::span<const int> sig, int w, ElemMask mask) {
            if (found || !mask_contains(mask, g.identity())) return;
            int t_total = 0, s_total = 0;
            bool t_full = true;
            for (int j = 0; j < table.support_size(); ++j) {
                if (is_tpos[static_cast<std::size_t>(j)]) {
                    t_total += sig[static_cast<std::size_t>(j)];
                    if (sig[static_cast<std::size_t>(j)] != tmult[static_cast<std::size_t>(j)]) t_full = false;
                } else {
                    s_total += sig[static_cast<std::size_t>(j)];
                }
            }
            (void)w;
            if (s_total == 0 || s_total % p != 0) return;
            if (t_total == 0 || (t_full && t_total == t.length())) found = true;
        });
        b.instance(found, [&] {
            return "S=" + format_sequence(g, s) + " T=" + format_sequence(g, t);
        });
    };

    if (exhaustive) {
        for (int i = 1; i < p; ++i) {
            std::vector<Elem> cpool = mask_elements(g.coset_mask(i));
            for_each_multiset(npool, slen, [&](const std::vector<Elem>& se) {
                Sequence s(se);
                for_each_multiset(cpool, p, [&](const std::vector<Elem>& te) { check_pair(s, Sequence(te)); });
            });
        }
    } else {
        for (std::uint64_t i = 0; i < params.trials; ++i) {
            Rng rng(params.seed, i);
            int coset = 1 + static_cast<int>(rng.draw(static_cast<std::uint64_t>(p - 1)));
            std::vector<Elem> cpool = mask_elements(g.coset_mask(coset));
            check_pair(random_sequence_over(rng, npool, slen), random_sequence_over(rng, cpool, p));
        }
    }
    return b.out;
}

// --- structure of the extremal big-product-one-free census ---------------------------

CheckOutcome check_extremal_bigpof_structure(const Group& g, const CheckParams& params) {
    const auto& spec = require_metacyclic(g, "extremal census structure");
    const int p = spec.p;
    const int length = metacyclic_gao_formula(spec) - 1;
    if (multiset_count(g.order(), length) > params.exhaustive_bound * 10)
        throw Error("extremal census is infeasible at this order");
    OutcomeBuilder b("extremal_bigpof_structure", true, 0);

    Sequence order6_special;
    if (spec.p == 2 && spec.m == 3 && spec.r == 2) {
        for (int bb = 0; bb < 3; ++bb) order6_special.append(g.pair_element(1, bb));
        order6_special.append(g.identity(), 5);
    }

    Group quotient = Group::cyclic(p);
    CensusResult census = census_extremal_bigpof(g);
    for (const Sequence& s : census.members) {
        bool heavy_coset = false;
        for (int i = 1; i < p; ++i)
            if (restrict_to(s, g.coset_mask(i)).length() >= p) heavy_coset = true;
        bool ok;
        if (heavy_coset) {
            ok = !order6_special.empty() && s == order6_special;
        } else {
            Sequence outside = remove_subsequence(s, restrict_to(s, g.normal_subgroup_mask()));
            Sequence image;
            for (const auto& [e, k] : outside.counts()) image.append(g.quotient_class(e), k);
            ok = is_product_one_free(quotient, image);
        }
        b.instance(ok, [&] { return format_sequence(g, s); });
    }
    return b.out;
}

// --- suite ---------------------------------------------------------------------------

std::vector<CheckOutcome> run_lemma_suite(const Group& g, const CheckParams& params) {
    std::vector<CheckOutcome> out;
    auto push_all = [&](std::vector<CheckOutcome> v) {
        for (auto& o : v) out.push_back(std::move(o));
    };

    if (g.is_abelian()) {
        out.push_back(check_kneser(g, params));
        out.push_back(check_dgm(g, params));
    } else if (g.is_metacyclic() && g.metacyclic_spec()->m >= 2) {
        Group n_part = Group::cyclic(g.metacyclic_spec()->m);
        out.push_back(check_kneser(n_part, params));
        out.push_back(check_dgm(n_part, params));
    }

    std::set<int> cyclic_orders;
    if (g.is_metacyclic()) {
        cyclic_orders.insert(g.metacyclic_spec()->p);
        cyclic_orders.insert(g.metacyclic_spec()->m);
    } else if (g.is_abelian()) {
        cyclic_orders.insert(g.order());
    }
    for (int n : cyclic_orders)
        if (n >= 3 && n <= 9) out.push_back(check_cyclic_extremal_free(n));
    out.push_back(check_cyclic_kn_products(3, 1));
    out.push_back(check_cyclic_kn_products(3, 2));
    out.push_back(check_cyclic_kn_products(5, 1));

    push_all(check_pi_bounds(g, params));

    if (g.is_metacyclic() && g.metacyclic_spec()->m >= 2) {
        push_all(check_conjugation_orbits(g, params));
        const auto& spec = *g.metacyclic_spec();
        if (multiset_count(spec.m, 2 * spec.p - 1) * static_cast<unsigned long long>(spec.p - 1) <=
            params.exhaustive_bound)
            out.push_back(check_coset_product_window(g));
        out.push_back(check_orbit_family_bounds(g, params));
        CheckParams completion = params;
        if (g.order() > 10 && completion.mode == CheckParams::Mode::Auto)
            completion.mode = CheckParams::Mode::Randomized;
        out.push_back(check_product_one_completion(g, completion));
        if (multiset_count(g.order(), metacyclic_gao_formula(spec) - 1) <= params.exhaustive_bound)
            out.push_back(check_extremal_bigpof_structure(g, params));
    }
    return out;
}

}  // namespace zerosum
