#pragma once

#include <span>
#include <string>

#include "zerosum/classify.hpp"
#include "zerosum/group.hpp"
#include "zerosum/invariants.hpp"
#include "zerosum/lemma_lab.hpp"

namespace zerosum {

// Deterministic JSON payloads (sorted keys, no timing fields): identical
// configurations and seeds produce byte-identical strings, so payloads can
// be golden-tested; wall-clock data lives in the report envelope's meta
// section instead.

std::string invariant_payload_json(const Group& g, const std::string& task, const InvariantResult& r);

std::string census_payload_json(const Group& g, const std::string& task, int length,
                                const std::string& predicate, const CensusResult& r);

// Matching the wire shape {group, theorem, forms_count, census_count|null,
// forms_are_free, census_matches_forms|"unknown", nodes, seconds}; timing is
// included only when requested.
std::string verification_payload_json(const VerificationReport& r, bool include_timing);

std::string lemma_payload_json(const Group& g, std::span<const CheckOutcome> outcomes);

std::string census_csv(const Group& g, const CensusResult& r);

// JSON-lines form: one {"sequence": "<text>"} object per member, then a
// summary record {count, group, predicate, complete, seconds}.
std::string census_jsonl(const Group& g, const std::string& predicate, const CensusResult& r);

}  // namespace zerosum
