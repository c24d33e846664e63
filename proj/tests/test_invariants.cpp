#include "doctest.h"

#include <tuple>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numeric>
#include <set>

#include "oracles.hpp"
#include "zerosum/invariants.hpp"
#include "zerosum/products.hpp"

using namespace zerosum;

namespace {

Group s3() { return Group::metacyclic(2, 3, 2); }

std::uint64_t mix(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

}  // namespace

TEST_CASE("davenport values match the closed form on small presentations") {
    InvariantResult r = small_davenport(s3());
    CHECK(r.value == 3);
    CHECK(r.complete);
    CHECK(r.value == metacyclic_davenport_formula(*s3().metacyclic_spec()));
    for (const auto& w : r.witnesses) CHECK(is_product_one_free(s3(), w));

    Group d5 = Group::metacyclic(2, 5, 4);
    CHECK(small_davenport(d5).value == 5);
    CHECK(metacyclic_davenport_formula(*d5.metacyclic_spec()) == 5);
}

TEST_CASE("davenport on cyclic groups is n-1 with constant-of-unit-order censuses") {
    for (int n = 3; n <= 8; ++n) {
        Group g = Group::cyclic(n);
        CHECK(small_davenport(g).value == n - 1);
        CensusResult census = census_extremal_pof(g);
        int phi = 0;
        for (int k = 1; k < n; ++k)
            if (std::gcd(k, n) == 1) ++phi;
        REQUIRE(static_cast<int>(census.members.size()) == phi);
        for (const auto& s : census.members) {
            CHECK(s.support_size() == 1);
            CHECK(std::gcd(s.counts()[0].first, n) == 1);
        }
    }
}

TEST_CASE("gao constant of the order-6 group by exhaustive search") {
    InvariantResult r = gao_constant(s3());
    CHECK(r.complete);
    CHECK_FALSE(r.lower_bound_only);
    // The exhaustive search is the oracle; the closed form must agree with it.
    CHECK(r.value == 9);
    CHECK(r.value == metacyclic_gao_formula(*s3().metacyclic_spec()));
    for (const auto& w : r.witnesses) {
        CHECK(w.length() == 8);
        CHECK(is_big_product_one_free(s3(), w));
    }
}

TEST_CASE("gao constants of small cyclic groups hit the classical 2n-1") {
    for (int n : {3, 4, 5}) {
        InvariantResult r = gao_constant(Group::cyclic(n));
        CHECK(r.complete);
        CHECK(r.value == 2 * n - 1);
        for (const auto& w : r.witnesses) CHECK(w.length() == 2 * n - 2);
    }
}

TEST_CASE("gao lower-bound mode on the order-21 group") {
    Group g = Group::metacyclic(3, 7, 2);
    InvariantResult r = gao_constant(g);
    CHECK(r.lower_bound_only);
    CHECK(r.value == 29);
    REQUIRE(r.witnesses.size() == 1);
    CHECK(r.witnesses[0].length() == 28);
    CHECK(is_big_product_one_free(g, r.witnesses[0]));
}

TEST_CASE("extremal product-one free census of the order-6 group") {
    Group g = s3();
    CensusResult census = census_extremal_pof(g);
    REQUIRE(census.complete);
    REQUIRE(census.members.size() == 7);

    std::set<Sequence> expected;
    expected.insert(Sequence{g.pair_element(1, 0), g.pair_element(1, 1), g.pair_element(1, 2)});
    for (int b = 0; b < 3; ++b)
        for (int c = 1; c < 3; ++c)
            expected.insert(concat(Sequence{g.pair_element(1, b)},
                                   Sequence::repeated(g.pair_element(0, c), 2)));
    CHECK(std::set<Sequence>(census.members.begin(), census.members.end()) == expected);
}

TEST_CASE("censuses agree with a fully independent brute-force census") {
    // Enumerate every multiset of the extremal length and filter with the
    // permutation oracle; the pruned engine must reproduce the list exactly.
    auto brute_census = [](const Group& g, int length, bool big) {
        std::vector<Sequence> out;
        std::vector<Elem> pool(static_cast<std::size_t>(g.order()));
        std::iota(pool.begin(), pool.end(), 0);
        std::function<void(std::size_t, std::vector<Elem>&)> rec = [&](std::size_t from,
                                                                       std::vector<Elem>& cur) {
            if (static_cast<int>(cur.size()) == length) {
                Sequence s{std::span<const Elem>(cur)};
                bool free = big ? !mask_contains(oracle::brute_pi_n(g, s, g.order()), g.identity())
                                : oracle::brute_product_one_free(g, s);
                if (free) out.push_back(std::move(s));
                return;
            }
            for (std::size_t i = from; i < pool.size(); ++i) {
                cur.push_back(pool[i]);
                rec(i, cur);
                cur.pop_back();
            }
        };
        std::vector<Elem> cur;
        rec(0, cur);
        std::sort(out.begin(), out.end());  // canonical census order
        return out;
    };

    Group c5 = Group::cyclic(5);
    CHECK(census_product_one_free(c5, 4, {}).members == brute_census(c5, 4, false));

    Group g6 = s3();
    CHECK(census_product_one_free(g6, 3, {}).members == brute_census(g6, 3, false));
    CHECK(census_big_product_one_free(g6, 8, {}).members == brute_census(g6, 8, true));

    Group d5 = Group::metacyclic(2, 5, 4);
    CHECK(census_product_one_free(d5, 5, {}).members == brute_census(d5, 5, false));
}

TEST_CASE("census members re-verify and sampled non-members fail") {
    Group g = s3();
    CensusResult census = census_extremal_pof(g);
    std::set<Sequence> members(census.members.begin(), census.members.end());
    for (const auto& s : census.members) REQUIRE(oracle::brute_product_one_free(g, s));

    int checked = 0;
    for (std::uint64_t trial = 0; checked < 1000; ++trial) {
        std::uint64_t state = mix(trial);
        Sequence s;
        for (int i = 0; i < 3; ++i) {
            state = mix(state);
            s.append(static_cast<Elem>(state % 6));
        }
        if (members.count(s)) continue;
        ++checked;
        REQUIRE_FALSE(is_product_one_free(g, s));
    }
}

TEST_CASE("extremal big census of the order-6 group") {
    Group g = s3();
    CensusResult census = census_extremal_bigpof(g);
    REQUIRE(census.complete);
    CHECK(census.members.size() == 19);
    for (const auto& s : census.members) {
        CHECK(s.length() == 8);
        REQUIRE(is_big_product_one_free(g, s));
    }
    // The padded triple is the only member with two or more coset terms.
    Sequence special = concat(Sequence{g.pair_element(1, 0), g.pair_element(1, 1), g.pair_element(1, 2)},
                              Sequence::repeated(g.identity(), 5));
    int heavy = 0;
    for (const auto& s : census.members)
        if (restrict_to(s, g.coset_mask(1)).length() >= 2) ++heavy;
    CHECK(heavy == 1);
    CHECK(std::count(census.members.begin(), census.members.end(), special) == 1);
}

TEST_CASE("big censuses below the group order are rejected") {
    CHECK_THROWS_AS(census_big_product_one_free(Group::cyclic(5), 3, {}), std::invalid_argument);
}

TEST_CASE("degenerate searches on the trivial group") {
    Group g = Group::cyclic(1);
    CHECK(small_davenport(g).value == 0);
    CHECK(gao_constant(g).value == 1);
    CensusResult census = census_extremal_pof(g);
    REQUIRE(census.members.size() == 1);
    CHECK(census.members[0].empty());
}

TEST_CASE("davenport monotone along subgroup chains") {
    for (auto [p, m, r] : {std::tuple{2, 3, 2}, {2, 5, 4}, {3, 7, 2}}) {
        Group g = Group::metacyclic(p, m, r);
        Group n = g.subgroup_as_group(g.normal_subgroup_mask());
        Group k = g.subgroup_as_group(g.subgroup_generated(single_mask(g.pair_element(1, 0))));
        int dg = small_davenport(g).value;
        CHECK(small_davenport(n).value <= dg);
        CHECK(small_davenport(k).value <= dg);
        CHECK(small_davenport(n).value == m - 1);
        CHECK(small_davenport(k).value == p - 1);
    }
}

TEST_CASE("budgets produce honest partial results") {
    Group g = Group::metacyclic(3, 7, 2);
    SearchBudget tiny;
    tiny.node_cap = 200;
    InvariantResult r = small_davenport(g, tiny);
    CHECK_FALSE(r.complete);
    CHECK(r.value >= 1);
    CHECK(r.value <= 8);
}

TEST_CASE("symmetry-reducer hook collapses automorphic members") {
    // y -> y^2, x -> x extends to an automorphism of the order-6 group;
    // reducing each member to the minimum over its orbit folds the 7-member
    // census into 4 representatives (the triple plus three pair classes).
    Group g = s3();
    auto apply_auto = [](const Group& grp, const Sequence& s) {
        Sequence image;
        for (const auto& [e, k] : s.counts())
            image.append(grp.pair_element(grp.x_exponent(e), (2 * grp.y_exponent(e)) % 3), k);
        return image;
    };
    CensusOptions opt;
    opt.symmetry_reducer = [&](const Group& grp, const Sequence& s) {
        return std::min(s, apply_auto(grp, s));
    };
    CensusResult reduced = census_extremal_pof(g, opt);
    CHECK(reduced.members.size() == 4);

    CensusOptions bad = opt;
    bad.checkpoint_path = "never_written.ckpt.json";
    CHECK_THROWS_AS(census_extremal_pof(g, bad), std::invalid_argument);
}

TEST_CASE("censuses are deterministic across worker counts") {
    Group g = s3();
    CensusOptions one, four;
    four.budget.workers = 4;
    CensusResult a = census_extremal_bigpof(g, one);
    CensusResult b = census_extremal_bigpof(g, four);
    CHECK(a.members == b.members);
    CHECK(a.stats.nodes == b.stats.nodes);
    CHECK(a.stats.pruned == b.stats.pruned);
}

TEST_CASE("resume reproduces the run for every interruption point") {
    Group g = s3();
    CensusResult full = census_extremal_bigpof(g, {});
    // Caps covering the edges: before any leaf, right after early leaves,
    // mid-run, and one node short of completion (total nodes = full.stats.nodes).
    std::vector<std::uint64_t> caps = {1, 3, 50, 137, 400, 997, full.stats.nodes - 1};
    for (std::uint64_t cap : caps) {
        std::string path = "sweep_resume.ckpt.json";
        CensusOptions opt;
        opt.budget.node_cap = cap;
        opt.checkpoint_path = path;
        CensusResult partial = census_extremal_bigpof(g, opt);
        REQUIRE_FALSE(partial.complete);
        ResumedCensus resumed = resume_census(path);
        INFO("cap = ", cap);
        REQUIRE(resumed.result.complete);
        CHECK(resumed.result.members == full.members);
        CHECK(resumed.result.stats.nodes == full.stats.nodes);
        CHECK(resumed.result.stats.pruned == full.stats.pruned);
        CHECK(resumed.result.stats.leaves == full.stats.leaves);
        std::remove(path.c_str());
    }
}

TEST_CASE("interrupted census resumes to the identical result") {
    Group g = s3();
    std::string path = "test_resume.ckpt.json";

    CensusResult full = census_extremal_bigpof(g, {});

    CensusOptions opt;
    opt.budget.node_cap = 400;  // interrupt partway
    opt.checkpoint_path = path;
    opt.task_label = "census-t12";
    CensusResult partial = census_extremal_bigpof(g, opt);
    REQUIRE_FALSE(partial.complete);

    ResumedCensus resumed = resume_census(path);
    CHECK(resumed.task_label == "census-t12");
    CHECK(resumed.result.complete);
    CHECK(resumed.result.members == full.members);
    CHECK(resumed.result.stats.nodes == full.stats.nodes);
    CHECK(resumed.result.stats.pruned == full.stats.pruned);
    CHECK(resumed.result.stats.leaves == full.stats.leaves);

    // Resuming the now-complete checkpoint returns immediately.
    ResumedCensus again = resume_census(path);
    CHECK(again.result.complete);
    CHECK(again.result.members == full.members);

    std::remove(path.c_str());
    std::ofstream bad(path);
    bad << "{ not json";
    bad.close();
    CHECK_THROWS_AS(resume_census(path), IncompatibleCheckpoint);
    std::remove(path.c_str());
}
