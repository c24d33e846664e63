#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "zerosum/group.hpp"
#include "zerosum/sequence.hpp"

namespace zerosum {

// Executable property checks for the supporting combinatorial facts the
// search engines rely on. Each check runs exhaustively when its instance
// space is small enough and otherwise on seeded random instances, so a
// failure is always replayable from (lemma_id, seed).

struct CheckParams {
    enum class Mode { Auto, Exhaustive, Randomized };
    Mode mode = Mode::Auto;
    std::uint64_t trials = 1000;               // randomized instance count
    std::uint64_t exhaustive_bound = 1000000;  // Auto: exhaustive iff space <= bound
    std::uint64_t seed = 0x5eedf00dULL;        // instance i derives from (seed, i)
};

struct CheckOutcome {
    std::string lemma_id;
    std::string mode;  // "exhaustive" | "randomized"
    std::uint64_t instances = 0;
    std::uint64_t failures = 0;
    std::uint64_t seed = 0;
    std::string counterexample;  // first failing instance, empty on pass
    bool passed() const { return failures == 0; }
};

// |A1...Ar| >= sum |Ai H| - (r-1)|H| with H = stab(A1...Ar), abelian only.
CheckOutcome check_kneser(const Group& g, const CheckParams& params = {});

// |Pi^k(A)| >= |H| (1 - k + sum_Q min{k, #{i : Ai meets Q}}), H = stab(Pi^k(A)).
CheckOutcome check_dgm(const Group& g, const CheckParams& params = {});

// Over C_n (n >= 3): a length-(n-1) sequence is product-one free iff it is
// a constant g^[n-1] with gcd(g, n) = 1; exactly phi(n) such sequences.
CheckOutcome check_cyclic_extremal_free(int n);

// Over C_n (n >= 3): every length-(kn+n-1) sequence has a product-one
// sub-multiset of size kn; the length-(kn+n-2) sequences without one are
// exactly the two-block shapes (g^a)^[k1 n - 1] (g^b)^[k2 n - 1] with
// k1 + k2 = k+1 and gcd(a-b, n) = 1, and for k >= 2 those satisfy
// Pi_{kn-2}(S) = C_n (with k = 1 the two blocks expose only n-1 distinct
// (n-2)-products, so the covering clause is scoped to k >= 2).
CheckOutcome check_cyclic_kn_products(int n, int k);

// Product-set bounds on general groups:
//   kemperman:   1 in A,B and ab=1 only trivially  =>  |AB| >= |A|+|B|-1
//   full_cover:  |A|+|B| > |W| over an abelian W   =>  AB = W
//   ordered_free_lower: 1 not in Pi(A)             =>  |Pi(A)| >= sum |Ai|
//   free_sequence_lower: S product-one free        =>  |Pi(S)| >= |S|
//   max_product_one_remainder: T | S product-one of maximal length with
//     |T| = |S| - d(G)  =>  every non-identity element of supp(S) survives
//     into S T^-1.
std::vector<CheckOutcome> check_pi_bounds(const Group& g, const CheckParams& params = {});

// Conjugation-orbit facts of the metacyclic family:
//   orbit_closure: an orbit element inside (or two in one coset of) a
//     subgroup M of N drags the whole orbit into M; orbits of u != 1 have
//     p distinct elements.
//   minimal_lift_products: if the quotient image of T is a minimal
//     product-one sequence, pi(T) contains |T| distinct conjugates of each
//     of its non-identity members.
//   product_containment: pi(T0 T1 ... Tt) contains
//     pi(T0) orbit(u1) ... orbit(ut) whenever uj in pi(Tj) meets N.
//   constant_power_products: T of length p inside G \ N with pi(T) = {1}
//     forces T = g^[p].
std::vector<CheckOutcome> check_conjugation_orbits(const Group& g, const CheckParams& params = {});

// Sequences T of length 2p-1 inside one nontrivial coset x^a N with
// |Pi_p(T)| = p exist only for p = 2, and then Pi_p(T) = H \ {1} for an
// order-3 subgroup H of N. Exhaustive per coset.
CheckOutcome check_coset_product_window(const Group& g);

/**
 * Bookkeeping for a family A = (A_1..A_l) of common-size conjugation-orbit
 * truncations inside N, relative to a threshold v: M = stab(Pi^{v-1}(A)),
 * the index set I_M of blocks inside M, per-coset incidence V_Q, the count
 * mu of cosets meeting at least v blocks, and the unique such coset R when
 * mu = 1. All fields recomputable from (A, v) alone.
 */
struct OrbitFamilyAnalysis {
    int t = 0;    // common truncation size
    int v = 0;
    int ell = 0;  // number of blocks
    ElemMask pi_set = 0;  // Pi^{v-1}(A)
    ElemMask M = 0;
    std::vector<int> I_M;
    std::vector<std::pair<ElemMask, std::vector<int>>> V;  // coset mask -> incident indices
    int mu = 0;
    std::optional<ElemMask> R;
};

// Throws MalformedOrbitFamily unless every A_i is {u_i^(r^k) : k in K} for
// one common exponent set K containing 0 (singletons must be {1} when the
// common size exceeds 1). Requires 2 <= v <= l + 1.
OrbitFamilyAnalysis analyze_orbit_family(const Group& g, std::span<const ElemMask> sets, int v);

// Verifies the incidence facts (V_M = I_M; blocks meeting a nontrivial
// coset spread over t distinct cosets; t = p and mu = 1 force R = M) and the
// four case-split lower bounds on |Pi^{v-1}(A)|.
CheckOutcome check_orbit_family_bounds(const Group& g, const CheckParams& params = {});

// For every S over N of length m+p-2 and T of length p inside one
// nontrivial coset, some nonempty U | S with p dividing |U| has
// 1 in pi(U) or 1 in pi(T U).
CheckOutcome check_product_one_completion(const Group& g, const CheckParams& params = {});

// Structure of the extremal |G|-product-one free census: members with a
// coset part of size >= p exist only in the order-6 group (and equal
// x.x*y.x*y^2.1^5); all other members have a product-one free quotient
// image after removing their normal part.
CheckOutcome check_extremal_bigpof_structure(const Group& g, const CheckParams& params = {});

// Applicable checks for one group, in a fixed order.
std::vector<CheckOutcome> run_lemma_suite(const Group& g, const CheckParams& params = {});

}  // namespace zerosum
