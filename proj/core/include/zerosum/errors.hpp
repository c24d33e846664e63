#pragma once

#include <stdexcept>
#include <string>

namespace zerosum {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Group presentation parameters violate a construction invariant.
struct InvalidSpec : Error {
    using Error::Error;
};

// remove_subsequence() called with T that does not divide S.
struct NotASubsequence : Error {
    using Error::Error;
};

// stabilizer() of the empty set is undefined.
struct EmptySetError : Error {
    using Error::Error;
};

// A product-set engine exceeded its configured signature budget.
// Results are exact or refused, never approximated.
struct StateBudgetExceeded : Error {
    using Error::Error;
};

// analyze_orbit_family() input is not a family of common-size orbit truncations.
struct MalformedOrbitFamily : Error {
    using Error::Error;
};

// A check that requires an abelian group was given a nonabelian one.
struct NonAbelianGroup : Error {
    using Error::Error;
};

// Query needs structure the group kind does not carry (e.g. the quotient
// map on a plain Cayley-table group).
struct UnsupportedQuery : Error {
    using Error::Error;
};

struct IncompatibleCheckpoint : Error {
    using Error::Error;
};

// Sequence/group spec text did not match the grammar.
struct TextParseError : Error {
    using Error::Error;
};

// A recognizer was handed a sequence of the wrong length.
struct WrongLength : Error {
    using Error::Error;
};

}  // namespace zerosum
