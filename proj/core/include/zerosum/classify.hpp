#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "zerosum/group.hpp"
#include "zerosum/invariants.hpp"
#include "zerosum/sequence.hpp"

namespace zerosum {

// The two extremal characterizations over the accepted metacyclic family:
// product-one free sequences of length m+p-2 and |G|-product-one free
// sequences of length mp+m+p-3. CLI/wire labels: "t11" and "t12".
enum class ExtremalFamily { ProductOneFree, BigProductOneFree };

const char* family_label(ExtremalFamily f);  // "t11" | "t12"

/**
 * Syntactic shape of an extremal sequence. Clauses:
 *  - CosetBlock: (x^a y^b1)...(x^a y^b_{p-1}) followed by one constant block
 *    (y^c)^[m-1] (ProductOneFree) or two blocks (y^c1)^[k1 m - 1] and
 *    (y^c2)^[k2 m - 1] with k1+k2 = p+1, gcd(c1-c2, m) = 1
 *    (BigProductOneFree). Big blocks are canonicalized (k1,c1) <= (k2,c2).
 *  - ExceptionalTriple: x.x*y.x*y^2 (plus 1^5 in the big family); exists
 *    only for the order-6 presentation metacyclic:2,3,2.
 *  - SingleCosetPair: the order-6 clause x*y^b.(y^c)^2, resp.
 *    x*y^b.(y^c1)^5.(y^c2)^2.
 */
struct FormDescriptor {
    enum class Clause { CosetBlock, ExceptionalTriple, SingleCosetPair };
    ExtremalFamily family;
    Clause clause;
    int a = 0;
    std::vector<int> b;  // sorted y-exponents of the coset terms
    int c = 0;           // ProductOneFree block exponent
    int c1 = 0, k1 = 0, c2 = 0, k2 = 0;
};

// Recognition is purely syntactic (multiset shape plus arithmetic side
// conditions); no freeness predicate is evaluated, so recognizers stay
// independent of the product engines they are tested against.
// Throws WrongLength unless |S| is the family's extremal length.
std::optional<FormDescriptor> recognize_extremal(const Group& g, ExtremalFamily f, const Sequence& s);

// All sequences matching the family's clauses, deduplicated and sorted.
std::vector<Sequence> generate_extremal(const Group& g, ExtremalFamily f);

struct VerificationReport {
    std::string group_spec;
    std::string theorem;  // wire label "t11" | "t12"
    long forms_count = 0;
    std::optional<long> census_count;          // nullopt: census not run / not finished
    bool forms_are_free = false;               // every generated form passes the predicate
    std::optional<bool> census_matches_forms;  // nullopt: unknown
    std::uint64_t nodes = 0;
    double seconds = 0.0;
};

struct VerifyOptions {
    SearchBudget budget;
    // Censuses whose unpruned leaf count exceeds this are reported unknown.
    std::uint64_t census_leaf_limit = 10'000'000;
};

// Checks both directions of the characterization: every generated form is
// free, and the exhaustive census of free sequences equals the generated set.
VerificationReport verify_theorem(const Group& g, ExtremalFamily f, const VerifyOptions& opt = {});

}  // namespace zerosum
