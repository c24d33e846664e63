#include "doctest.h"

#include <tuple>

#include <cstdio>
#include <fstream>

#include "zerosum/group.hpp"

using namespace zerosum;

namespace {

// S3 presented as metacyclic:2,3,2; indices 0..5 = 1, y, y^2, x, x*y, x*y^2.
Group s3() { return Group::metacyclic(2, 3, 2); }

void check_group_axioms(const Group& g) {
    const int n = g.order();
    for (int a = 0; a < n; ++a) {
        CHECK(g.mul(0, a) == a);
        CHECK(g.mul(a, 0) == a);
        CHECK(g.mul(a, g.inv(a)) == 0);
        CHECK(g.mul(g.inv(a), a) == 0);
    }
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                REQUIRE(g.mul(g.mul(a, b), c) == g.mul(a, g.mul(b, c)));
}

}  // namespace

TEST_CASE("metacyclic construction accepts valid presentations") {
    CHECK(s3().order() == 6);
    CHECK(Group::metacyclic(3, 7, 2).order() == 21);
    CHECK(Group::metacyclic(2, 5, 4).order() == 10);
    CHECK(Group::metacyclic(2, 9, 8).order() == 18);
    CHECK(Group::metacyclic(5, 1, 0).order() == 5);  // degenerate normal part
    CHECK_FALSE(s3().is_abelian());
    CHECK(Group::metacyclic(5, 1, 0).is_abelian());
}

TEST_CASE("metacyclic construction rejects broken presentations") {
    CHECK_THROWS_AS(Group::metacyclic(2, 3, 1), InvalidSpec);   // gcd(r-1, m) != 1
    CHECK_THROWS_AS(Group::metacyclic(4, 5, 1), InvalidSpec);   // p not prime
    CHECK_THROWS_AS(Group::metacyclic(2, 4, 3), InvalidSpec);   // 2 | m
    CHECK_THROWS_AS(Group::metacyclic(2, 5, 2), InvalidSpec);   // r^p != 1 mod m
    CHECK_THROWS_AS(Group::metacyclic(3, 5, 2), InvalidSpec);   // r^p != 1 mod m
    CHECK_THROWS_AS(Group::metacyclic(2, 3, 5), InvalidSpec);   // r out of range
    CHECK_THROWS_AS(Group::metacyclic(2, 33, 10), InvalidSpec); // order > 64
}

TEST_CASE("pair rule arithmetic on S3") {
    Group g = s3();
    Elem x = g.pair_element(1, 0), y = g.pair_element(0, 1);
    CHECK(g.mul(x, x) == g.identity());
    CHECK(g.mul(x, y) == g.pair_element(1, 1));
    CHECK(g.mul(y, x) == g.pair_element(1, 2));  // noncommutative
    Elem xy = g.pair_element(1, 1);
    CHECK(g.mul(xy, xy) == g.identity());
}

TEST_CASE("group axioms hold exhaustively") {
    check_group_axioms(s3());
    check_group_axioms(Group::metacyclic(2, 5, 4));
    check_group_axioms(Group::metacyclic(3, 7, 2));
    check_group_axioms(Group::cyclic(5));
}

TEST_CASE("pair-rule table agrees with the presentation") {
    for (auto [p, m, r] : {std::tuple{2, 3, 2}, {2, 5, 4}, {3, 7, 2}, {2, 9, 8}}) {
        Group g = Group::metacyclic(p, m, r);
        Elem x = g.pair_element(1, 0), y = g.pair_element(0, 1);
        CHECK(g.power(x, p) == g.identity());
        CHECK(g.power(y, m) == g.identity());
        CHECK(g.mul(g.mul(g.inv(x), y), x) == g.power(y, r));
        for (int a = 0; a < p; ++a)
            for (int b = 0; b < m; ++b)
                REQUIRE(g.pair_element(a, b) == g.mul(g.power(x, a), g.power(y, b)));
        // Latin square
        for (int a = 0; a < g.order(); ++a) {
            ElemMask row = 0, col = 0;
            for (int b = 0; b < g.order(); ++b) {
                row = mask_with(row, g.mul(a, b));
                col = mask_with(col, g.mul(b, a));
            }
            REQUIRE(row == g.all_mask());
            REQUIRE(col == g.all_mask());
        }
    }
}

TEST_CASE("element orders") {
    Group g = s3();
    CHECK(g.element_order(g.identity()) == 1);
    CHECK(g.element_order(g.pair_element(1, 1)) == 2);
    Group big = Group::metacyclic(3, 7, 2);
    CHECK(big.element_order(big.pair_element(0, 1)) == 7);
}

TEST_CASE("every element outside the normal part has order p") {
    for (auto [p, m, r] : {std::tuple{2, 3, 2}, {2, 5, 4}, {3, 7, 2}, {2, 9, 8}}) {
        Group g = Group::metacyclic(p, m, r);
        ElemMask n = g.normal_subgroup_mask();
        for (Elem e = 0; e < g.order(); ++e)
            if (!mask_contains(n, e)) REQUIRE(g.element_order(e) == p);
    }
}

TEST_CASE("conjugation orbits of nontrivial normal elements have p distinct members") {
    for (auto [p, m, r] : {std::tuple{2, 3, 2}, {2, 5, 4}, {3, 7, 2}, {2, 9, 8}}) {
        Group g = Group::metacyclic(p, m, r);
        CHECK(m % p == 1);
        mask_for_each(g.normal_subgroup_mask(), [&](Elem u) {
            if (u == g.identity()) return;
            REQUIRE(mask_size(g.orbit_mask(u)) == p);
        });
    }
}

TEST_CASE("subgroup generation") {
    Group g = s3();
    Elem x = g.pair_element(1, 0), y = g.pair_element(0, 1);
    CHECK(g.subgroup_generated(single_mask(x)) == (single_mask(0) | single_mask(x)));
    CHECK(g.subgroup_generated(single_mask(y)) == g.normal_subgroup_mask());
    CHECK(g.subgroup_generated(single_mask(x) | single_mask(y)) == g.all_mask());
    CHECK(g.subgroup_generated(0) == single_mask(0));
}

TEST_CASE("stabilizers inside the normal part") {
    Group g = s3();
    ElemMask n = g.normal_subgroup_mask();
    Elem y = g.pair_element(0, 1), y2 = g.pair_element(0, 2);
    CHECK(g.stabilizer(single_mask(y) | single_mask(y2), n) == single_mask(0));
    CHECK(g.stabilizer(n, n) == n);
    CHECK(g.stabilizer(single_mask(y), n) == single_mask(0));
    CHECK_THROWS_AS(g.stabilizer(0, n), EmptySetError);
}

TEST_CASE("centralizers") {
    Group g = s3();
    CHECK(g.centralizer(g.identity()) == g.all_mask());
    CHECK(g.centralizer(g.pair_element(0, 1)) == g.normal_subgroup_mask());
    Group big = Group::metacyclic(3, 7, 2);
    CHECK(big.centralizer(big.pair_element(0, 3)) == big.normal_subgroup_mask());
    // The centralizer of every nontrivial normal element stays inside N.
    for (auto [p, m, r] : {std::tuple{2, 5, 4}, {3, 7, 2}}) {
        Group h = Group::metacyclic(p, m, r);
        mask_for_each(h.normal_subgroup_mask(), [&](Elem u) {
            if (u == h.identity()) return;
            REQUIRE((h.centralizer(u) & ~h.normal_subgroup_mask()) == 0);
        });
    }
}

TEST_CASE("quotient classes") {
    Group g = s3();
    for (int b = 0; b < 3; ++b) CHECK(g.quotient_class(g.pair_element(0, b)) == 0);
    CHECK(g.quotient_class(g.pair_element(1, 2)) == 1);
    Group big = Group::metacyclic(3, 7, 2);
    CHECK(big.quotient_class(big.pair_element(2, 5)) == 2);
    CHECK_THROWS_AS(Group::cyclic(4).quotient_class(1), UnsupportedQuery);
}

TEST_CASE("coset masks and subgroups of the normal part") {
    Group g = s3();
    CHECK(g.coset_mask(0) == 0b000111);
    CHECK(g.coset_mask(1) == 0b111000);
    auto subs = Group::metacyclic(3, 7, 2).subgroups_of_normal();
    REQUIRE(subs.size() == 2);  // divisors 1 and 7
    CHECK(mask_size(subs[0]) == 1);
    CHECK(mask_size(subs[1]) == 7);
}

TEST_CASE("cayley-table construction validates") {
    std::vector<std::vector<int>> c4 = {{0, 1, 2, 3}, {1, 2, 3, 0}, {2, 3, 0, 1}, {3, 0, 1, 2}};
    Group g = Group::from_table(c4);
    CHECK(g.order() == 4);
    CHECK(g.is_abelian());
    CHECK_FALSE(g.is_metacyclic());

    // Break the Latin property.
    auto broken = c4;
    broken[1][1] = 1;
    CHECK_THROWS_AS(Group::from_table(broken), InvalidSpec);

    // A Latin square with identity that is not associative (an order-5 loop).
    std::vector<std::vector<int>> loop = {{0, 1, 2, 3, 4},
                                          {1, 0, 3, 4, 2},
                                          {2, 3, 4, 0, 1},
                                          {3, 4, 1, 2, 0},
                                          {4, 2, 0, 1, 3}};
    CHECK_THROWS_AS(Group::from_table(loop), InvalidSpec);

    // Identity must sit at index 0.
    std::vector<std::vector<int>> shifted = {{1, 0}, {0, 1}};
    CHECK_THROWS_AS(Group::from_table(shifted), InvalidSpec);
}

TEST_CASE("cayley JSON and spec strings") {
    Group c2 = Group::from_cayley_json(R"({"size": 2, "table": [[0, 1], [1, 0]]})");
    CHECK(c2.order() == 2);
    CHECK_THROWS_AS(Group::from_cayley_json("{broken"), InvalidSpec);
    CHECK_THROWS_AS(Group::from_cayley_json(R"({"size": 3, "table": [[0]]})"), InvalidSpec);

    CHECK(Group::from_spec_string("metacyclic:2,3,2").order() == 6);
    CHECK(Group::from_spec_string("cyclic:6").order() == 6);
    CHECK_THROWS_AS(Group::from_spec_string("metacyclic:2,3,1"), InvalidSpec);
    CHECK_THROWS_AS(Group::from_spec_string("nonsense"), InvalidSpec);
    CHECK_THROWS_AS(Group::from_spec_string("cayley:/no/such/file.json"), InvalidSpec);

    std::ofstream out("c3_table.json");
    out << R"({"size": 3, "table": [[0,1,2],[1,2,0],[2,0,1]]})";
    out.close();
    Group c3 = Group::from_spec_string("cayley:c3_table.json");
    CHECK(c3.order() == 3);
    CHECK(c3.spec_string() == "cayley:c3_table.json");
    std::remove("c3_table.json");
}

TEST_CASE("subgroup extraction re-indexes into a standalone group") {
    Group g = s3();
    Group n = g.subgroup_as_group(g.normal_subgroup_mask());
    CHECK(n.order() == 3);
    CHECK(n.is_abelian());
    CHECK_THROWS_AS(g.subgroup_as_group(single_mask(0) | single_mask(g.pair_element(1, 0)) |
                                        single_mask(g.pair_element(0, 1))),
                    std::invalid_argument);
}
