#include "zerosum/report.hpp"

#include "json.hpp"
#include "zerosum/sequence.hpp"

namespace zerosum {

namespace {

using nlohmann::json;

json stats_json(const SearchStats& s) {
    return json{{"nodes", s.nodes}, {"pruned", s.pruned}, {"leaves", s.leaves}};
}

}  // namespace

std::string invariant_payload_json(const Group& g, const std::string& task, const InvariantResult& r) {
    json witnesses = json::array();
    for (const auto& w : r.witnesses) witnesses.push_back(format_sequence(g, w));
    json doc{{"task", task},
             {"group", g.spec_string()},
             {"invariant", r.invariant},
             {"value", r.value},
             {"complete", r.complete},
             {"lower_bound_only", r.lower_bound_only},
             {"witnesses", std::move(witnesses)},
             {"stats", stats_json(r.stats)}};
    return doc.dump(2);
}

std::string census_payload_json(const Group& g, const std::string& task, int length,
                                const std::string& predicate, const CensusResult& r) {
    json members = json::array();
    for (const auto& s : r.members) members.push_back(format_sequence(g, s));
    json doc{{"task", task},
             {"group", g.spec_string()},
             {"length", length},
             {"predicate", predicate},
             {"count", r.members.size()},
             {"complete", r.complete},
             {"members", std::move(members)},
             {"stats", stats_json(r.stats)}};
    return doc.dump(2);
}

std::string verification_payload_json(const VerificationReport& r, bool include_timing) {
    json doc{{"group", r.group_spec},
             {"theorem", r.theorem},
             {"forms_count", r.forms_count},
             {"census_count", r.census_count ? json(*r.census_count) : json(nullptr)},
             {"forms_are_free", r.forms_are_free},
             {"census_matches_forms",
              r.census_matches_forms ? json(*r.census_matches_forms) : json("unknown")},
             {"nodes", r.nodes}};
    if (include_timing) doc["seconds"] = r.seconds;
    return doc.dump(2);
}

std::string lemma_payload_json(const Group& g, std::span<const CheckOutcome> outcomes) {
    json checks = json::array();
    for (const auto& o : outcomes) {
        json c{{"lemma_id", o.lemma_id},
               {"mode", o.mode},
               {"instances", o.instances},
               {"failures", o.failures},
               {"seed", o.seed},
               {"counterexample", o.counterexample.empty() ? json(nullptr) : json(o.counterexample)}};
        checks.push_back(std::move(c));
    }
    json doc{{"task", "lemmas"}, {"group", g.spec_string()}, {"checks", std::move(checks)}};
    return doc.dump(2);
}

std::string census_csv(const Group& g, const CensusResult& r) {
    std::string out = "index,length,sequence\n";
    std::size_t i = 0;
    for (const auto& s : r.members) {
        out += std::to_string(i++) + "," + std::to_string(s.length()) + "," + format_sequence(g, s) + "\n";
    }
    return out;
}

std::string census_jsonl(const Group& g, const std::string& predicate, const CensusResult& r) {
    std::string out;
    for (const auto& s : r.members) {
        out += json{{"sequence", format_sequence(g, s)}}.dump() + "\n";
    }
    out += json{{"count", r.members.size()},
                {"group", g.spec_string()},
                {"predicate", predicate},
                {"complete", r.complete},
                {"seconds", r.stats.seconds}}
               .dump() +
           "\n";
    return out;
}

}  // namespace zerosum
