#include "zerosum/invariants.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace zerosum {

namespace {

using Clock = std::chrono::steady_clock;

std::atomic<bool> g_stop_requested{false};

constexpr const char* kCheckpointVersion = "zerosum-census-ckpt-1";

enum class Predicate { ProductOneFree, BigProductOneFree };

const char* predicate_name(Predicate p) {
    return p == Predicate::ProductOneFree ? "product_one_free" : "big_product_one_free";
}

ProductScan::Options scan_options_for(Predicate p, const Group& g) {
    ProductScan::Options o;
    if (p == Predicate::BigProductOneFree) {
        o.layer_cap = g.order();
        o.flag_layer = g.order();
        o.stop_on_identity_flag = true;
    } else {
        o.stop_on_identity_any = true;
    }
    return o;
}

bool violates(Predicate p, const ProductScan::PushResult& r) {
    return p == Predicate::ProductOneFree ? r.identity_any : r.identity_flag;
}

struct SharedBudget {
    std::atomic<std::uint64_t> nodes{0};
    std::atomic<std::uint64_t> pruned{0};
    std::atomic<bool> stop{false};
    std::uint64_t node_cap;
    bool timed;
    Clock::time_point deadline;

    explicit SharedBudget(const SearchBudget& b)
        : node_cap(b.node_cap), timed(std::isfinite(b.max_seconds)) {
        if (timed)
            deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                          std::chrono::duration<double>(b.max_seconds));
    }

    // Returns false once the run should stop. Time is polled coarsely.
    bool tick(std::uint64_t& local_nodes) {
        std::uint64_t n = nodes.fetch_add(1, std::memory_order_relaxed) + 1;
        ++local_nodes;
        if (n > node_cap || g_stop_requested.load(std::memory_order_relaxed)) {
            stop.store(true, std::memory_order_relaxed);
            return false;
        }
        if (timed && (local_nodes & 0x3FF) == 0 && Clock::now() > deadline) {
            stop.store(true, std::memory_order_relaxed);
            return false;
        }
        return stop.load(std::memory_order_relaxed) == false;
    }
};

// ---------------------------------------------------------------------------
// Census enumeration. Soundness of the subtree pruning, per predicate:
//  - product-one free: if 1 in Pi(prefix) then 1 in Pi of every extension
//    (sub-multisets of the prefix stay sub-multisets), so nothing below the
//    pruned node can be free.
//  - |G|-product-one free: a size-|G| sub-multiset of the prefix with
//    product one remains one in every extension, so the defect is permanent.
//    Prefixes shorter than |G| have no size-|G| sub-multisets and are never
//    pruned. Every census member's prefix passes the partial predicate, so
//    no member is missed.
// ---------------------------------------------------------------------------

struct CensusCheckpointState {
    std::vector<Elem> resume_path;       // last completed leaf; empty = fresh run
    std::vector<Sequence> members;       // members collected up to that leaf
    std::uint64_t nodes = 0, pruned = 0, leaves = 0;
};

struct CensusJob {
    const Group& g;
    Predicate predicate;
    int length;
    CensusOptions opt;
};

void write_census_checkpoint(const CensusJob& job, const CensusCheckpointState& st, bool complete) {
    nlohmann::json doc;
    doc["version"] = kCheckpointVersion;
    doc["task"] = job.opt.task_label;
    doc["group"] = job.g.spec_string();
    doc["predicate"] = predicate_name(job.predicate);
    doc["length"] = job.length;
    doc["complete"] = complete;
    doc["path"] = st.resume_path;
    nlohmann::json members = nlohmann::json::array();
    for (const auto& s : st.members) members.push_back(format_sequence(job.g, s));
    doc["members"] = std::move(members);
    doc["nodes"] = st.nodes;
    doc["pruned"] = st.pruned;
    doc["leaves"] = st.leaves;
    std::ofstream out(job.opt.checkpoint_path);
    if (!out) throw Error("cannot write checkpoint file: " + job.opt.checkpoint_path);
    out << doc.dump(2) << "\n";
}

class CensusWorker {
public:
    CensusWorker(const CensusJob& job, SharedBudget& budget)
        : job_(job), budget_(budget), scan_(job.g, scan_options_for(job.predicate, job.g)) {
        path_.reserve(static_cast<size_t>(job.length));
    }

    // Runs the subtree of sequences starting with root (workers partition roots).
    void run_root(Elem root) {
        if (!budget_.tick(ticks_)) return;
        auto pr = scan_.push(root);
        if (violates(job_.predicate, pr)) {
            budget_.pruned.fetch_add(1, std::memory_order_relaxed);
            scan_.pop();
            return;
        }
        path_.push_back(root);
        descend(root);
        path_.pop_back();
        scan_.pop();
    }

    // Single-worker entry with checkpoint/resume support.
    void run_all_with_checkpoints(CensusCheckpointState& st) {
        checkpoint_ = &st;
        members_ = std::move(st.members);
        local_nodes_ = st.nodes;
        local_pruned_ = st.pruned;
        local_leaves_ = st.leaves;
        resume_path_ = st.resume_path;
        last_leaf_ = resume_path_;
        snapshot_at_leaf();
        resuming_ = !resume_path_.empty();
        next_checkpoint_ = local_nodes_ + job_.opt.checkpoint_every_nodes;
        descend_from(0, 0);
        st.nodes = local_nodes_;
        st.pruned = local_pruned_;
        st.leaves = local_leaves_;
        st.members = std::move(members_);
        st.resume_path = last_leaf_;
    }

    // Counters as of the last completed leaf: the state a resumed run can
    // reproduce exactly (work past that leaf gets redone, not recounted).
    CensusCheckpointState leaf_snapshot() const {
        CensusCheckpointState snap;
        snap.resume_path = last_leaf_;
        snap.members = members_;
        snap.nodes = snap_nodes_;
        snap.pruned = snap_pruned_;
        snap.leaves = snap_leaves_;
        return snap;
    }

    std::vector<Sequence> take_members() { return std::move(members_); }

private:
    void leaf() {
        members_.emplace_back(std::span<const Elem>(path_));
        if (checkpoint_) {
            ++local_leaves_;
            last_leaf_ = path_;
            snapshot_at_leaf();
            if (local_nodes_ >= next_checkpoint_) {
                write_census_checkpoint(job_, leaf_snapshot(), false);
                next_checkpoint_ = local_nodes_ + job_.opt.checkpoint_every_nodes;
            }
        }
    }

    void snapshot_at_leaf() {
        snap_nodes_ = local_nodes_;
        snap_pruned_ = local_pruned_;
        snap_leaves_ = local_leaves_;
    }

    void descend(Elem min_elem) {
        if (static_cast<int>(path_.size()) == job_.length) {
            leaf();
            return;
        }
        for (Elem e = min_elem; e < job_.g.order(); ++e) {
            if (!budget_.tick(ticks_)) return;
            auto pr = scan_.push(e);
            if (violates(job_.predicate, pr)) {
                budget_.pruned.fetch_add(1, std::memory_order_relaxed);
                scan_.pop();
                continue;
            }
            path_.push_back(e);
            descend(e);
            path_.pop_back();
            scan_.pop();
        }
    }

    // Checkpoint-aware DFS: skips everything at or before the resume path.
    void descend_from(int depth, Elem min_elem) {
        if (static_cast<int>(path_.size()) == job_.length) {
            leaf();
            return;
        }
        Elem start = min_elem;
        if (resuming_) start = resume_path_[static_cast<size_t>(depth)];
        for (Elem e = start; e < job_.g.order(); ++e) {
            bool on_resume_path = resuming_ && e == resume_path_[static_cast<size_t>(depth)];
            if (!on_resume_path) {
                if (!budget_.tick(local_nodes_)) return;
            }
            auto pr = scan_.push(e);
            if (violates(job_.predicate, pr)) {
                if (on_resume_path) throw IncompatibleCheckpoint("recorded path fails the predicate");
                ++local_pruned_;
                scan_.pop();
                continue;
            }
            path_.push_back(e);
            if (on_resume_path && depth + 1 == static_cast<int>(resume_path_.size())) {
                // This is the recorded leaf itself: already emitted before the
                // interruption, so do not re-emit; run resumes after it.
                resuming_ = false;
            } else {
                descend_from(depth + 1, e);
            }
            path_.pop_back();
            scan_.pop();
        }
    }

    const CensusJob& job_;
    SharedBudget& budget_;
    ProductScan scan_;
    std::vector<Elem> path_;
    std::vector<Sequence> members_;
    std::uint64_t ticks_ = 0;

    CensusCheckpointState* checkpoint_ = nullptr;
    std::vector<Elem> resume_path_;
    std::vector<Elem> last_leaf_;
    bool resuming_ = false;
    std::uint64_t local_nodes_ = 0, local_pruned_ = 0, local_leaves_ = 0;
    std::uint64_t snap_nodes_ = 0, snap_pruned_ = 0, snap_leaves_ = 0;
    std::uint64_t next_checkpoint_ = 0;

    friend CensusResult run_census(const CensusJob& job, const CensusCheckpointState* resume);
};

CensusResult run_census(const CensusJob& job, const CensusCheckpointState* resume) {
    if (job.length < 0) throw std::invalid_argument("census length must be >= 0");
    const auto t0 = Clock::now();
    SharedBudget budget(job.opt.budget);
    CensusResult result;

    const bool with_checkpoints = !job.opt.checkpoint_path.empty() || resume != nullptr;
    if (with_checkpoints && job.opt.budget.workers != 1)
        throw std::invalid_argument("checkpointing requires workers = 1");
    if (with_checkpoints && job.opt.symmetry_reducer)
        throw std::invalid_argument("the symmetry reducer cannot be checkpointed");

    if (with_checkpoints) {
        CensusCheckpointState st;
        if (resume) st = *resume;
        CensusWorker worker(job, budget);
        worker.run_all_with_checkpoints(st);
        result.complete = !budget.stop.load();
        if (!job.opt.checkpoint_path.empty()) {
            // Incomplete runs checkpoint the last-leaf snapshot so a resumed
            // run reproduces the uninterrupted statistics exactly; complete
            // runs store the final totals.
            CensusCheckpointState snap = result.complete ? st : worker.leaf_snapshot();
            snap.members = st.members;  // every member sits at or before the last leaf
            write_census_checkpoint(job, snap, result.complete);
        }
        result.members = std::move(st.members);
        result.stats.nodes = st.nodes;
        result.stats.pruned = st.pruned;
        result.stats.leaves = st.leaves;
    } else if (job.length == 0) {
        // The empty sequence is the unique member (the predicate is vacuous).
        result.members.emplace_back();
        result.stats.leaves = 1;
    } else {
        const int workers = std::max(1, job.opt.budget.workers);
        std::vector<std::vector<Sequence>> per_root(static_cast<size_t>(job.g.order()));
        auto run_range = [&](int w) {
            CensusWorker worker(job, budget);
            for (Elem root = w; root < job.g.order(); root += workers) {
                worker.run_root(root);
                per_root[static_cast<size_t>(root)] = worker.take_members();
            }
        };
        if (workers == 1) {
            run_range(0);
        } else {
            std::vector<std::thread> pool;
            pool.reserve(static_cast<size_t>(workers));
            for (int w = 0; w < workers; ++w) pool.emplace_back(run_range, w);
            for (auto& t : pool) t.join();
        }
        std::size_t total = 0;
        for (const auto& v : per_root) total += v.size();
        result.members.reserve(total);
        for (auto& v : per_root)
            for (auto& s : v) result.members.push_back(std::move(s));
        result.complete = !budget.stop.load();
        result.stats.nodes = budget.nodes.load();
        result.stats.pruned = budget.pruned.load();
        result.stats.leaves = total;
    }

    if (job.opt.symmetry_reducer) {
        for (auto& s : result.members) s = job.opt.symmetry_reducer(job.g, s);
        std::sort(result.members.begin(), result.members.end());
        result.members.erase(std::unique(result.members.begin(), result.members.end()),
                             result.members.end());
    } else {
        std::sort(result.members.begin(), result.members.end());
    }
    result.stats.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    return result;
}

// ---------------------------------------------------------------------------
// Maximal-length searches (davenport, exhaustive gao).
// ---------------------------------------------------------------------------

struct SearchOutcome {
    int best = 0;
    std::vector<Sequence> witnesses;  // up to 3, deterministic across worker counts
};

class DepthWorker {
public:
    DepthWorker(const Group& g, Predicate p, int depth_cap, SharedBudget& budget)
        : g_(g), predicate_(p), depth_cap_(depth_cap), budget_(budget),
          scan_(g, scan_options_for(p, g)) {}

    SearchOutcome run_root(Elem root) {
        out_ = SearchOutcome{};
        if (!budget_.tick(ticks_)) return out_;
        auto pr = scan_.push(root);
        if (violates(predicate_, pr)) {
            budget_.pruned.fetch_add(1, std::memory_order_relaxed);
            scan_.pop();
            return out_;
        }
        path_.push_back(root);
        note_depth();
        descend(root);
        path_.pop_back();
        scan_.pop();
        return out_;
    }

private:
    void note_depth() {
        int d = static_cast<int>(path_.size());
        if (d > out_.best) {
            out_.best = d;
            out_.witnesses.clear();
        }
        if (d == out_.best && out_.witnesses.size() < 3)
            out_.witnesses.emplace_back(std::span<const Elem>(path_));
    }

    void descend(Elem min_elem) {
        if (static_cast<int>(path_.size()) >= depth_cap_) return;
        for (Elem e = min_elem; e < g_.order(); ++e) {
            if (!budget_.tick(ticks_)) return;
            auto pr = scan_.push(e);
            if (violates(predicate_, pr)) {
                budget_.pruned.fetch_add(1, std::memory_order_relaxed);
                scan_.pop();
                continue;
            }
            path_.push_back(e);
            note_depth();
            descend(e);
            path_.pop_back();
            scan_.pop();
        }
    }

    const Group& g_;
    Predicate predicate_;
    int depth_cap_;
    SharedBudget& budget_;
    ProductScan scan_;
    std::vector<Elem> path_;
    SearchOutcome out_;
    std::uint64_t ticks_ = 0;
};

InvariantResult run_depth_search(const Group& g, Predicate p, int depth_cap,
                                 const SearchBudget& budget_in, const char* invariant) {
    const auto t0 = Clock::now();
    SharedBudget budget(budget_in);
    const int workers = std::max(1, budget_in.workers);
    std::vector<SearchOutcome> per_root(static_cast<size_t>(g.order()));

    auto run_range = [&](int w) {
        DepthWorker worker(g, p, depth_cap, budget);
        for (Elem root = w; root < g.order(); root += workers)
            per_root[static_cast<size_t>(root)] = worker.run_root(root);
    };
    if (workers == 1) {
        run_range(0);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(run_range, w);
        for (auto& t : pool) t.join();
    }

    InvariantResult res;
    res.invariant = invariant;
    for (const auto& o : per_root) res.value = std::max(res.value, o.best);
    for (const auto& o : per_root) {
        if (o.best != res.value) continue;
        for (const auto& w : o.witnesses)
            if (res.witnesses.size() < 3) res.witnesses.push_back(w);
    }
    res.complete = !budget.stop.load();
    // The caps sit strictly above what any group admits; hitting one means
    // the value is a truncated bound, not an exact answer.
    if (res.value >= depth_cap) res.complete = false;
    res.stats.nodes = budget.nodes.load();
    res.stats.pruned = budget.pruned.load();
    res.stats.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    return res;
}

}  // namespace

void request_stop() noexcept { g_stop_requested.store(true, std::memory_order_relaxed); }

void clear_stop() noexcept { g_stop_requested.store(false, std::memory_order_relaxed); }

int metacyclic_davenport_formula(const MetacyclicSpec& spec) { return spec.m + spec.p - 2; }

int metacyclic_gao_formula(const MetacyclicSpec& spec) {
    return spec.m * spec.p + spec.m + spec.p - 2;
}

InvariantResult small_davenport(const Group& g, const SearchBudget& budget) {
    // d(G) <= |G| - 1: with |S| >= |G| some ordering has two equal prefix
    // products, giving a product-one consecutive block.
    return run_depth_search(g, Predicate::ProductOneFree, g.order(), budget, "d");
}

InvariantResult gao_constant(const Group& g, const SearchBudget& budget, int exhaustive_order_limit) {
    if (g.order() > exhaustive_order_limit && g.is_metacyclic()) {
        const auto t0 = Clock::now();
        const auto& spec = *g.metacyclic_spec();
        // Structured witness: x^[p-1] . y^[m-1] . 1^[pm-1], one block per
        // clause of the extremal family (a=1, b_i=0, c1=1, k1=1, c2=0, k2=p).
        Sequence witness;
        witness.append(g.pair_element(1, 0), spec.p - 1);
        if (spec.m > 1) witness.append(g.pair_element(0, 1), spec.m - 1);
        witness.append(g.identity(), spec.p * spec.m - 1);
        if (!is_big_product_one_free(g, witness))
            throw Error("internal: structured witness failed |G|-product-one freeness");
        InvariantResult res;
        res.invariant = "E";
        res.value = metacyclic_gao_formula(spec);
        res.complete = true;
        res.lower_bound_only = true;
        res.witnesses.push_back(std::move(witness));
        res.stats.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
        return res;
    }
    // Exhaustive: E(G) = 1 + max length of a |G|-product-one free sequence.
    // Depth cap 2|G| sits above the universal bound E(G) <= 2|G| - 1.
    InvariantResult res = run_depth_search(g, Predicate::BigProductOneFree, 2 * g.order(), budget, "E");
    res.value += 1;
    return res;
}

CensusResult census_product_one_free(const Group& g, int length, const CensusOptions& opt) {
    CensusJob job{g, Predicate::ProductOneFree, length, opt};
    if (job.opt.task_label.empty()) job.opt.task_label = "census-pof";
    return run_census(job, nullptr);
}

CensusResult census_big_product_one_free(const Group& g, int length, const CensusOptions& opt) {
    if (length < g.order())
        throw std::invalid_argument(
            "censusing |G|-product-one free sequences shorter than |G| is degenerate "
            "(every sequence qualifies vacuously)");
    CensusJob job{g, Predicate::BigProductOneFree, length, opt};
    if (job.opt.task_label.empty()) job.opt.task_label = "census-bigpof";
    return run_census(job, nullptr);
}

CensusResult census_extremal_pof(const Group& g, const CensusOptions& opt) {
    int length;
    if (g.is_metacyclic()) {
        length = metacyclic_davenport_formula(*g.metacyclic_spec());
    } else {
        InvariantResult d = small_davenport(g, opt.budget);
        if (!d.complete) throw Error("davenport search exhausted its budget; extremal length unknown");
        length = d.value;
    }
    return census_product_one_free(g, length, opt);
}

CensusResult census_extremal_bigpof(const Group& g, const CensusOptions& opt) {
    int length;
    if (g.is_metacyclic()) {
        length = metacyclic_gao_formula(*g.metacyclic_spec()) - 1;
    } else {
        InvariantResult e = gao_constant(g, opt.budget);
        if (!e.complete) throw Error("gao search exhausted its budget; extremal length unknown");
        length = e.value - 1;
    }
    return census_big_product_one_free(g, length, opt);
}

ResumedCensus resume_census(const std::string& checkpoint_path, const SearchBudget& budget) {
    std::ifstream in(checkpoint_path);
    if (!in) throw IncompatibleCheckpoint("cannot open checkpoint: " + checkpoint_path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw IncompatibleCheckpoint(std::string("unreadable checkpoint: ") + e.what());
    }
    ResumedCensus out;
    try {
        if (doc.at("version").get<std::string>() != kCheckpointVersion)
            throw IncompatibleCheckpoint("checkpoint version mismatch");
        out.task_label = doc.at("task").get<std::string>();
        out.group_spec = doc.at("group").get<std::string>();
        out.predicate = doc.at("predicate").get<std::string>();
        out.length = doc.at("length").get<int>();
    } catch (const nlohmann::json::exception& e) {
        throw IncompatibleCheckpoint(std::string("malformed checkpoint: ") + e.what());
    }
    if (out.predicate != "product_one_free" && out.predicate != "big_product_one_free")
        throw IncompatibleCheckpoint("unknown predicate in checkpoint");

    Group g = Group::from_spec_string(out.group_spec);
    CensusCheckpointState st;
    try {
        bool complete = doc.at("complete").get<bool>();
        st.resume_path = doc.at("path").get<std::vector<Elem>>();
        for (const auto& text : doc.at("members"))
            st.members.push_back(parse_sequence(g, text.get<std::string>()));
        st.nodes = doc.at("nodes").get<std::uint64_t>();
        st.pruned = doc.at("pruned").get<std::uint64_t>();
        st.leaves = doc.at("leaves").get<std::uint64_t>();
        if (complete) {
            out.result.members = std::move(st.members);
            std::sort(out.result.members.begin(), out.result.members.end());
            out.result.complete = true;
            out.result.stats.nodes = st.nodes;
            out.result.stats.pruned = st.pruned;
            out.result.stats.leaves = st.leaves;
            return out;
        }
    } catch (const nlohmann::json::exception& e) {
        throw IncompatibleCheckpoint(std::string("malformed checkpoint: ") + e.what());
    }
    for (Elem e : st.resume_path)
        if (e < 0 || e >= g.order()) throw IncompatibleCheckpoint("checkpoint path element out of range");
    if (static_cast<int>(st.resume_path.size()) != out.length && !st.resume_path.empty())
        throw IncompatibleCheckpoint("checkpoint path length mismatch");

    CensusOptions opt;
    opt.budget = budget;
    opt.budget.workers = 1;
    opt.checkpoint_path = checkpoint_path;
    opt.task_label = out.task_label;
    Predicate p = out.predicate == "product_one_free" ? Predicate::ProductOneFree
                                                      : Predicate::BigProductOneFree;
    CensusJob job{g, p, out.length, opt};
    out.result = run_census(job, &st);
    return out;
}

}  // namespace zerosum
