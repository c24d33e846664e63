#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "zerosum/group.hpp"
#include "zerosum/products.hpp"
#include "zerosum/sequence.hpp"

namespace zerosum {

struct SearchBudget {
    double max_seconds = std::numeric_limits<double>::infinity();
    std::uint64_t node_cap = std::numeric_limits<std::uint64_t>::max();
    int workers = 1;
};

struct SearchStats {
    std::uint64_t nodes = 0;   // push attempts
    std::uint64_t pruned = 0;  // pushes rejected by the freeness predicate
    std::uint64_t leaves = 0;  // census members emitted
    double seconds = 0.0;
};

struct InvariantResult {
    std::string invariant;  // "d" or "E"
    int value = 0;
    bool complete = true;           // false: budget ran out, value is a lower bound
    bool lower_bound_only = false;  // witness-verified bound (large metacyclic E runs)
    std::vector<Sequence> witnesses;
    SearchStats stats;
};

// Closed forms for accepted metacyclic presentations. The exhaustive searches
// are the oracle; these are cross-checked against them in the test suites.
int metacyclic_davenport_formula(const MetacyclicSpec& spec);  // m + p - 2
int metacyclic_gao_formula(const MetacyclicSpec& spec);        // mp + m + p - 2

// Cooperative cancellation for long searches/censuses, honored at node
// granularity like the budgets; async-signal-safe, so a SIGINT handler may
// call it. A cancelled run returns partial results (and a checkpoint when
// one is configured).
void request_stop() noexcept;
void clear_stop() noexcept;

// Maximal length of a product-one free sequence, by pruned depth-first
// multiset search (freeness is hereditary downward, so pruning is sound).
InvariantResult small_davenport(const Group& g, const SearchBudget& budget = {});

// Smallest t such that every length-t sequence has a product-one
// sub-multiset of size |G|, i.e. 1 + max length of a |G|-product-one free
// sequence. Exhaustive for order <= exhaustive_order_limit (and for all
// Cayley groups, budget allowing); larger metacyclic groups run in
// lower-bound-only mode: a structured witness of length mp+m+p-3 is
// verified |G|-product-one free and the bound value is reported.
InvariantResult gao_constant(const Group& g, const SearchBudget& budget = {},
                             int exhaustive_order_limit = 10);

struct CensusOptions {
    SearchBudget budget;
    std::string checkpoint_path;  // empty: no checkpointing
    std::string task_label;       // stored in the checkpoint, echoed on resume
    std::uint64_t checkpoint_every_nodes = std::uint64_t{1} << 18;
    // Optional isomorph-rejection hook, off by default: maps each member to
    // a canonical representative (e.g. the minimum over an automorphism
    // orbit) and the census keeps one sequence per representative. Not
    // serializable, so it cannot be combined with checkpointing.
    std::function<Sequence(const Group&, const Sequence&)> symmetry_reducer;
};

struct CensusResult {
    std::vector<Sequence> members;  // sorted canonically
    bool complete = true;
    SearchStats stats;
};

// All product-one free multisets of the given length.
CensusResult census_product_one_free(const Group& g, int length, const CensusOptions& opt = {});
// All |G|-product-one free multisets of the given length. Lengths below |G|
// are rejected (every sequence would qualify vacuously).
CensusResult census_big_product_one_free(const Group& g, int length, const CensusOptions& opt = {});

// The two extremal censuses: length d(G), resp. E(G) - 1 (from the closed
// forms for metacyclic groups, from the exhaustive searches otherwise).
CensusResult census_extremal_pof(const Group& g, const CensusOptions& opt = {});
CensusResult census_extremal_bigpof(const Group& g, const CensusOptions& opt = {});

struct ResumedCensus {
    CensusResult result;
    std::string task_label;
    std::string group_spec;
    std::string predicate;  // "product_one_free" | "big_product_one_free"
    int length = 0;
};

// Continue an interrupted census run. The final result is identical to an
// uninterrupted run (same members, same deterministic statistics). A
// checkpoint marked complete returns immediately.
ResumedCensus resume_census(const std::string& checkpoint_path, const SearchBudget& budget = {});

}  // namespace zerosum
