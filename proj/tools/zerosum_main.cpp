// zerosum: compute zero-sum invariants and product sets over small finite
// groups, run extremal-form censuses and verifications, and check the
// supporting lemma suite. Reports are JSON with a deterministic payload
// section (golden-testable) and a separate meta section for timings.

#include <chrono>
#include <csignal>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "zerosum/classify.hpp"
#include "zerosum/errors.hpp"
#include "zerosum/group.hpp"
#include "zerosum/invariants.hpp"
#include "zerosum/lemma_lab.hpp"
#include "zerosum/products.hpp"
#include "zerosum/report.hpp"
#include "zerosum/sequence.hpp"

namespace {

using nlohmann::json;
using namespace zerosum;

constexpr const char* kVersion = "0.1.0";

constexpr int kExitComplete = 0;
constexpr int kExitInternal = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInvalidSpec = 3;
constexpr int kExitPartial = 4;

struct CommonOptions {
    std::string group_spec;
    double budget_seconds = 0;  // 0: unlimited
    std::uint64_t node_cap = 0;
    int workers = 1;
    std::uint64_t seed = CheckParams{}.seed;
    std::string out_path;
    std::string checkpoint_dir;

    SearchBudget budget() const {
        SearchBudget b;
        if (budget_seconds > 0) b.max_seconds = budget_seconds;
        if (node_cap > 0) b.node_cap = node_cap;
        b.workers = workers;
        return b;
    }
};

void add_common(CLI::App* cmd, CommonOptions& opt, bool needs_group) {
    auto* g = cmd->add_option("--group", opt.group_spec,
                              "group spec: metacyclic:p,m,r | cyclic:n | cayley:<table.json>");
    if (needs_group) g->required();
    cmd->add_option("--budget-seconds", opt.budget_seconds, "wall-clock budget (0 = unlimited)");
    cmd->add_option("--node-cap", opt.node_cap, "search node budget (0 = unlimited)");
    cmd->add_option("--workers", opt.workers, "worker threads for searches and censuses")
        ->check(CLI::Range(1, 256));
    cmd->add_option("--seed", opt.seed, "seed for randomized checks");
    cmd->add_option("--out", opt.out_path, "write the JSON report here instead of stdout");
    cmd->add_option("--checkpoint-dir", opt.checkpoint_dir, "directory for resumable checkpoints");
}

std::string slugify(const std::string& s) {
    std::string out;
    for (char c : s) out += (std::isalnum(static_cast<unsigned char>(c)) != 0) ? c : '-';
    return out;
}

json config_echo(const std::string& task, const CommonOptions& opt) {
    return json{{"task", task},
                {"group", opt.group_spec},
                {"budget_seconds", opt.budget_seconds > 0 ? json(opt.budget_seconds) : json(nullptr)},
                {"node_cap", opt.node_cap > 0 ? json(opt.node_cap) : json(nullptr)},
                {"workers", opt.workers},
                {"seed", opt.seed},
                {"checkpoint_dir", opt.checkpoint_dir.empty() ? json(nullptr) : json(opt.checkpoint_dir)}};
}

int emit(const json& config, const std::string& payload_json, bool partial, double seconds,
         const std::string& out_path) {
    json doc{{"config", config},
             {"status", partial ? "partial" : "complete"},
             {"payload", json::parse(payload_json)},
             {"meta", json{{"seconds", seconds}, {"version", kVersion}}}};
    std::string text = doc.dump(2) + "\n";
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_path);
        if (!out) throw Error("cannot write report to " + out_path);
        out << text;
    }
    return partial ? kExitPartial : kExitComplete;
}

std::string checkpoint_path_for(const CommonOptions& opt, const std::string& task) {
    if (opt.checkpoint_dir.empty()) return {};
    return opt.checkpoint_dir + "/" + task + "." + slugify(opt.group_spec) + ".ckpt.json";
}

int run_invariant(const std::string& task, const CommonOptions& opt) {
    auto t0 = std::chrono::steady_clock::now();
    Group g = Group::from_spec_string(opt.group_spec);
    InvariantResult r = task == "davenport" ? small_davenport(g, opt.budget())
                                            : gao_constant(g, opt.budget());
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return emit(config_echo(task, opt), invariant_payload_json(g, task, r), !r.complete, secs,
                opt.out_path);
}

int run_census(const std::string& task, const CommonOptions& opt, const std::string& csv_path,
               const std::string& jsonl_path) {
    auto t0 = std::chrono::steady_clock::now();
    Group g = Group::from_spec_string(opt.group_spec);
    CensusOptions copt;
    copt.budget = opt.budget();
    copt.checkpoint_path = checkpoint_path_for(opt, task);
    copt.task_label = task;

    const bool big = task == "census-t12";
    CensusResult r = big ? census_extremal_bigpof(g, copt) : census_extremal_pof(g, copt);
    int length = -1;  // extremal censuses are nonempty by definition of d/E
    if (g.is_metacyclic())
        length = big ? metacyclic_gao_formula(*g.metacyclic_spec()) - 1
                     : metacyclic_davenport_formula(*g.metacyclic_spec());
    else if (!r.members.empty())
        length = r.members.front().length();

    std::string predicate = big ? "big_product_one_free" : "product_one_free";
    if (!csv_path.empty()) {
        std::ofstream csv(csv_path);
        if (!csv) throw Error("cannot write CSV to " + csv_path);
        csv << census_csv(g, r);
    }
    if (!jsonl_path.empty()) {
        std::ofstream jsonl(jsonl_path);
        if (!jsonl) throw Error("cannot write JSONL to " + jsonl_path);
        jsonl << census_jsonl(g, predicate, r);
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return emit(config_echo(task, opt), census_payload_json(g, task, length, predicate, r),
                !r.complete, secs, opt.out_path);
}

int run_verify(const std::string& task, const CommonOptions& opt) {
    auto t0 = std::chrono::steady_clock::now();
    Group g = Group::from_spec_string(opt.group_spec);
    ExtremalFamily family =
        task == "verify-t11" ? ExtremalFamily::ProductOneFree : ExtremalFamily::BigProductOneFree;
    VerifyOptions vopt;
    vopt.budget = opt.budget();
    VerificationReport rep = verify_theorem(g, family, vopt);
    json payload{{"task", task},
                 {"report", json::parse(verification_payload_json(rep, false))}};
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return emit(config_echo(task, opt), payload.dump(2), false, secs, opt.out_path);
}

int run_lemmas(const CommonOptions& opt) {
    auto t0 = std::chrono::steady_clock::now();
    Group g = Group::from_spec_string(opt.group_spec);
    CheckParams params;
    params.seed = opt.seed;
    auto outcomes = run_lemma_suite(g, params);
    bool all_pass = true;
    for (const auto& o : outcomes) {
        std::cerr << o.lemma_id << ": " << (o.passed() ? "pass" : "FAIL") << " (" << o.instances
                  << " instances, " << o.mode << ")\n";
        all_pass = all_pass && o.passed();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    int code = emit(config_echo("lemmas", opt), lemma_payload_json(g, outcomes), false, secs,
                    opt.out_path);
    return all_pass ? code : kExitInternal;
}

int run_products(const CommonOptions& opt, const std::string& sequence_text,
                 std::optional<int> n) {
    auto t0 = std::chrono::steady_clock::now();
    Group g = Group::from_spec_string(opt.group_spec);
    Sequence s = parse_sequence(g, sequence_text);

    auto mask_list = [&](ElemMask m) {
        json arr = json::array();
        mask_for_each(m, [&](Elem e) { arr.push_back(format_element(g, e)); });
        return arr;
    };
    json payload{{"task", "products"},
                 {"group", g.spec_string()},
                 {"sequence", format_sequence(g, s)},
                 {"length", s.length()},
                 {"pi", mask_list(pi(g, s))},
                 {"pi_all", mask_list(pi_all(g, s))},
                 {"product_one_free", is_product_one_free(g, s)},
                 {"big_product_one_free", is_big_product_one_free(g, s)}};
    if (n) payload["pi_n"] = json{{"n", *n}, {"elements", mask_list(pi_n(g, s, *n))}};
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return emit(config_echo("products", opt), payload.dump(2), false, secs, opt.out_path);
}

int run_resume(const CommonOptions& opt, const std::string& path) {
    auto t0 = std::chrono::steady_clock::now();
    ResumedCensus res = resume_census(path, opt.budget());
    Group g = Group::from_spec_string(res.group_spec);
    CommonOptions echo = opt;
    echo.group_spec = res.group_spec;
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return emit(config_echo(res.task_label, echo),
                census_payload_json(g, res.task_label, res.length, res.predicate, res.result),
                !res.result.complete, secs, opt.out_path);
}

}  // namespace

int main(int argc, char** argv) {
    // First SIGINT stops searches cooperatively (partial report, checkpoint
    // if configured); a second one terminates as usual.
    std::signal(SIGINT, [](int) {
        request_stop();
        std::signal(SIGINT, SIG_DFL);
    });

    CLI::App app{"zero-sum invariants, product-set engines, and extremal censuses over small groups"};
    app.require_subcommand(1);

    CommonOptions opt;
    std::string csv_path;
    std::string jsonl_path;
    std::string sequence_text;
    std::optional<int> pi_n_arg;
    std::string resume_path;

    auto* davenport = app.add_subcommand("davenport", "maximal product-one free length d(G)");
    add_common(davenport, opt, true);
    auto* gao = app.add_subcommand("gao", "least t forcing a product-one sub-multiset of size |G|");
    add_common(gao, opt, true);
    auto* ct11 = app.add_subcommand("census-t11", "census of extremal product-one free sequences");
    add_common(ct11, opt, true);
    ct11->add_option("--csv", csv_path, "also export the census as CSV");
    ct11->add_option("--jsonl", jsonl_path, "also export the census as JSON lines");
    auto* ct12 = app.add_subcommand("census-t12", "census of extremal |G|-product-one free sequences");
    add_common(ct12, opt, true);
    ct12->add_option("--csv", csv_path, "also export the census as CSV");
    ct12->add_option("--jsonl", jsonl_path, "also export the census as JSON lines");
    auto* vt11 = app.add_subcommand("verify-t11", "verify the extremal product-one free characterization");
    add_common(vt11, opt, true);
    auto* vt12 = app.add_subcommand("verify-t12", "verify the extremal |G|-product-one free characterization");
    add_common(vt12, opt, true);
    auto* lemmas = app.add_subcommand("lemmas", "run the supporting lemma checks");
    add_common(lemmas, opt, true);
    auto* products = app.add_subcommand("products", "product sets of one sequence");
    add_common(products, opt, true);
    products->add_option("--sequence", sequence_text, "sequence in text form, e.g. x.x*y.(y^2)^3")
        ->required();
    int n_value = -1;
    products->add_option("--n", n_value, "also report the n-product set");
    auto* resume = app.add_subcommand("resume", "continue an interrupted census from a checkpoint");
    add_common(resume, opt, false);
    resume->add_option("checkpoint", resume_path, "checkpoint file")->required(false);
    resume->add_option("--resume", resume_path, "checkpoint file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (davenport->parsed()) return run_invariant("davenport", opt);
        if (gao->parsed()) return run_invariant("gao", opt);
        if (ct11->parsed()) return run_census("census-t11", opt, csv_path, jsonl_path);
        if (ct12->parsed()) return run_census("census-t12", opt, csv_path, jsonl_path);
        if (vt11->parsed()) return run_verify("verify-t11", opt);
        if (vt12->parsed()) return run_verify("verify-t12", opt);
        if (lemmas->parsed()) return run_lemmas(opt);
        if (products->parsed())
            return run_products(opt, sequence_text,
                                n_value >= 0 ? std::optional<int>(n_value) : std::nullopt);
        if (resume->parsed()) {
            if (resume_path.empty()) {
                std::cerr << "resume needs a checkpoint path\n";
                return kExitUsage;
            }
            return run_resume(opt, resume_path);
        }
    } catch (const InvalidSpec& e) {
        std::cerr << "invalid group spec: " << e.what() << "\n";
        return kExitInvalidSpec;
    } catch (const IncompatibleCheckpoint& e) {
        std::cerr << "incompatible checkpoint: " << e.what() << "\n";
        return kExitInternal;
    } catch (const TextParseError& e) {
        std::cerr << "bad sequence text: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "unusable arguments: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitUsage;
}
