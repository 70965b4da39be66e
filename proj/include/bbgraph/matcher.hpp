#pragma once

#include <cassert>
#include <chrono>
#include <compare>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "bbgraph/errors.hpp"
#include "bbgraph/graph.hpp"

namespace bbgraph {

/// One exact match: total injective maps from query nodes and edges into the
/// database, indexed by the dense query ids.
struct Embedding {
    std::vector<NodeId> node_map;
    std::vector<EdgeId> edge_map;

    auto operator<=>(const Embedding&) const = default;
};

struct Counters {
    std::uint64_t checks = 0;
    std::uint64_t backtracks = 0;
    std::uint64_t max_recursion_depth = 0;
    std::uint64_t peak_candidate_cells = 0;
    std::uint64_t snapshot_mismatches = 0;

    bool operator==(const Counters&) const = default;
};

enum class StartStrategy { FirstNode, RarestLabel };

struct SearchConfig {
    StartStrategy start_strategy = StartStrategy::FirstNode;
    std::optional<std::uint64_t> result_limit;
    bool collect_counters = false;
    /// Wall-clock cutoff checked periodically inside the search; exceeding it
    /// raises Error(Timeout). Used by the benchmark harness.
    std::optional<std::chrono::steady_clock::time_point> deadline;
    /// Deterministic cutoff on conflict checks; exceeding it raises
    /// Error(BudgetExceeded). Unlike the deadline, two runs agree on whether
    /// it fires.
    std::optional<std::uint64_t> check_budget;
    /// Cross-checks every undo-log restore against a wholesale copy of the
    /// stack and node matches, counting mismatches. Test instrumentation.
    bool verify_snapshots = false;
};

struct MatchResult {
    std::vector<Embedding> embeddings;
    Counters counters;
};

/// Mutable search state: the stack of node matches awaiting branching plus
/// bidirectional node and edge match maps. Restoration works through an undo
/// log recording pushes, pops, and node-match inserts since a snapshot mark;
/// rolling it back is observationally identical to restoring wholesale copies
/// of the stack and the node-match map.
class MatchState {
public:
    MatchState(const QueryGraph& q, const Graph& g)
        : q_(&q),
          g_(&g),
          bridge_(q.graph(), g),
          node_q2d_(q.graph().node_count(), kNoNode),
          node_d2q_(g.node_count(), kNoNode),
          edge_q2d_(q.graph().edge_count(), kNoEdge),
          edge_d2q_(g.edge_count(), kNoEdge) {}

    const QueryGraph& query() const { return *q_; }
    const Graph& target() const { return *g_; }
    const LabelBridge& bridge() const { return bridge_; }

    bool stack_empty() const { return stack_.empty(); }
    std::size_t stack_size() const { return stack_.size(); }
    std::pair<NodeId, NodeId> stack_top() const { return stack_.back(); }

    NodeId node_match_of(NodeId u) const { return node_q2d_[u]; }
    NodeId node_match_rev(NodeId u_prime) const { return node_d2q_[u_prime]; }
    EdgeId edge_match_of(EdgeId r) const { return edge_q2d_[r]; }
    bool db_edge_matched(EdgeId r_prime) const { return edge_d2q_[r_prime] != kNoEdge; }

    std::size_t matched_node_count() const { return matched_nodes_; }
    std::size_t matched_edge_count() const { return matched_edges_; }

    bool empty() const { return stack_.empty() && matched_nodes_ == 0 && matched_edges_ == 0; }

    Counters& counters() { return counters_; }
    const Counters& counters() const { return counters_; }

    void reset() {
        stack_.clear();
        undo_log_.clear();
        verify_copies_.clear();
        std::fill(node_q2d_.begin(), node_q2d_.end(), kNoNode);
        std::fill(node_d2q_.begin(), node_d2q_.end(), kNoNode);
        std::fill(edge_q2d_.begin(), edge_q2d_.end(), kNoEdge);
        std::fill(edge_d2q_.begin(), edge_d2q_.end(), kNoEdge);
        matched_nodes_ = 0;
        matched_edges_ = 0;
    }

    /// Seeds one candidate search region: pushes the starting pair and records
    /// the node match. Not covered by any snapshot; unseed() or reset() clears it.
    void seed(NodeId u, NodeId u_prime) {
        stack_.push_back({u, u_prime});
        set_node_match(u, u_prime);
    }

    /// Reverses seed() after a fully unwound region search. O(1), unlike
    /// reset(): with thousands of starting candidates on a large target,
    /// wholesale re-fills between seeds would dominate the whole search.
    void unseed(NodeId u, NodeId u_prime) {
        assert(stack_.empty());
        assert(matched_edges_ == 0);
        assert(node_q2d_[u] == u_prime);
        node_q2d_[u] = kNoNode;
        node_d2q_[u_prime] = kNoNode;
        --matched_nodes_;
        undo_log_.clear();
    }

    // -- operations recorded in the undo log --

    void push_pair(NodeId u, NodeId u_prime) {
        stack_.push_back({u, u_prime});
        undo_log_.push_back({UndoKind::PushedPair, u, u_prime});
    }

    std::pair<NodeId, NodeId> pop_pair() {
        auto pair = stack_.back();
        stack_.pop_back();
        undo_log_.push_back({UndoKind::PoppedPair, pair.first, pair.second});
        return pair;
    }

    void match_nodes(NodeId u, NodeId u_prime) {
        set_node_match(u, u_prime);
        undo_log_.push_back({UndoKind::MatchedNode, u, u_prime});
    }

    // -- edge matches are paired add/remove, outside the log --

    void add_edge_match(EdgeId r, EdgeId r_prime) {
        edge_q2d_[r] = r_prime;
        edge_d2q_[r_prime] = r;
        ++matched_edges_;
    }

    void remove_edge_match(EdgeId r, EdgeId r_prime) {
        edge_q2d_[r] = kNoEdge;
        edge_d2q_[r_prime] = kNoEdge;
        --matched_edges_;
    }

    // -- snapshot / restore --

    using Snapshot = std::size_t;

    Snapshot snapshot(bool verify = false) {
        if (verify) verify_copies_.push_back({undo_log_.size(), stack_, node_q2d_});
        return undo_log_.size();
    }

    void restore(Snapshot mark) {
        while (undo_log_.size() > mark) {
            const UndoOp& op = undo_log_.back();
            switch (op.kind) {
                case UndoKind::PushedPair:
                    assert(!stack_.empty() && stack_.back().first == op.u);
                    stack_.pop_back();
                    break;
                case UndoKind::PoppedPair:
                    stack_.push_back({op.u, op.u_prime});
                    break;
                case UndoKind::MatchedNode:
                    node_q2d_[op.u] = kNoNode;
                    node_d2q_[op.u_prime] = kNoNode;
                    --matched_nodes_;
                    break;
            }
            undo_log_.pop_back();
        }
        if (!verify_copies_.empty() && verify_copies_.back().mark == mark) {
            const VerifyCopy& copy = verify_copies_.back();
            if (copy.stack != stack_ || copy.node_q2d != node_q2d_)
                ++counters_.snapshot_mismatches;
            verify_copies_.pop_back();
        }
    }

private:
    struct VerifyCopy {
        std::size_t mark;
        std::vector<std::pair<NodeId, NodeId>> stack;
        std::vector<NodeId> node_q2d;
    };

    enum class UndoKind : std::uint8_t { PushedPair, PoppedPair, MatchedNode };
    struct UndoOp {
        UndoKind kind;
        NodeId u;
        NodeId u_prime;
    };

    void set_node_match(NodeId u, NodeId u_prime) {
        node_q2d_[u] = u_prime;
        node_d2q_[u_prime] = u;
        ++matched_nodes_;
    }

    const QueryGraph* q_;
    const Graph* g_;
    LabelBridge bridge_;
    std::vector<std::pair<NodeId, NodeId>> stack_;
    std::vector<NodeId> node_q2d_;
    std::vector<NodeId> node_d2q_;
    std::vector<EdgeId> edge_q2d_;
    std::vector<EdgeId> edge_d2q_;
    std::size_t matched_nodes_ = 0;
    std::size_t matched_edges_ = 0;
    std::vector<UndoOp> undo_log_;
    std::vector<VerifyCopy> verify_copies_;
    Counters counters_;
};

/// End-point conflict detection for a prospective edge match <r, r'> at the
/// matched anchor pair <u, u'>. With v / v' the endpoints other than the
/// anchors (the anchor itself for a self-loop): rejects if either endpoint is
/// already matched elsewhere; if both are unmatched, tests the matching node
/// principal and on success pushes <v, v'> and records the node match.
inline bool check(MatchState& state, EdgeId r, EdgeId r_prime, NodeId u, NodeId u_prime) {
    ++state.counters().checks;
    NodeId v = state.query().graph().other_endpoint(r, u);
    NodeId v_prime = state.target().other_endpoint(r_prime, u_prime);

    NodeId owner_of_vprime = state.node_match_rev(v_prime);
    if (owner_of_vprime != kNoNode && owner_of_vprime != v) return false;
    NodeId image_of_v = state.node_match_of(v);
    if (image_of_v != kNoNode && image_of_v != v_prime) return false;

    if (image_of_v == kNoNode) {
        if (!detail::mnp_impl(state.query().graph(), v, state.target(), v_prime, state.bridge()))
            return false;
        state.push_pair(v, v_prime);
        state.match_nodes(v, v_prime);
    }
    return true;
}

namespace detail {

/// Distinct edges incident to a node, ascending by edge id. Adjacency lists
/// the two directions of a self-loop consecutively, so deduping neighbors
/// suffices.
inline void distinct_incident_edges(const Graph& g, NodeId v, std::vector<EdgeId>& out) {
    out.clear();
    for (const AdjEntry& entry : g.adjacency(v)) {
        if (!out.empty() && out.back() == entry.edge) continue;
        out.push_back(entry.edge);
    }
}

inline void edge_candidates_impl(const Graph& qg, EdgeId r, NodeId u, const Graph& g,
                                 NodeId u_prime, const LabelBridge& bridge,
                                 std::vector<EdgeId>& out) {
    out.clear();
    for (const AdjEntry& entry : g.adjacency(u_prime)) {
        if (!out.empty() && out.back() == entry.edge) continue;
        if (mrp_impl(qg, r, u, g, entry.edge, u_prime, bridge)) out.push_back(entry.edge);
    }
}

}  // namespace detail

/// Candidate list C_r for a query edge r anchored at the matched pair
/// (u, u'): the distinct edges incident to u' passing the matching
/// relationship principal, ascending by edge id. Already-matched edges are
/// skipped at iteration time, not here.
inline std::vector<EdgeId> edge_candidates(const QueryGraph& q, EdgeId r, NodeId u, const Graph& g,
                                           NodeId u_prime) {
    LabelBridge bridge(q.graph(), g);
    std::vector<EdgeId> out;
    detail::edge_candidates_impl(q.graph(), r, u, g, u_prime, bridge, out);
    return out;
}

/// Exact number of database nodes whose labels contain all of u's labels,
/// computed from the label index.
inline std::uint64_t label_candidate_count(const QueryGraph& q, NodeId u, const Graph& g,
                                           const LabelBridge& bridge) {
    const LabelSet& labels = q.graph().node(u).labels;
    if (labels.empty()) return g.node_count();

    std::vector<LabelId> translated;
    translated.reserve(labels.size());
    for (LabelId id : labels.ids()) {
        LabelId t = bridge.translate(id);
        if (t == kNoLabel) return 0;
        translated.push_back(t);
    }
    LabelId scan = translated.front();
    for (LabelId t : translated)
        if (g.nodes_with_label(t).size() < g.nodes_with_label(scan).size()) scan = t;

    std::uint64_t n = 0;
    for (NodeId v : g.nodes_with_label(scan)) {
        bool all = true;
        for (LabelId t : translated)
            if (!g.node(v).labels.contains(t)) { all = false; break; }
        if (all) ++n;
    }
    return n;
}

/// Starting-node choice. FirstNode returns the query's designated start (the
/// first node in input order); RarestLabel returns the query node with the
/// fewest label-compatible database nodes, ties broken by smallest id.
inline NodeId choose_start(const QueryGraph& q, StartStrategy strategy, const Graph& g) {
    if (strategy == StartStrategy::FirstNode) return q.start_node();

    LabelBridge bridge(q.graph(), g);
    NodeId best = 0;
    std::uint64_t best_count = label_candidate_count(q, 0, g, bridge);
    for (NodeId u = 1; u < q.graph().node_count(); ++u) {
        std::uint64_t c = label_candidate_count(q, u, g, bridge);
        if (c < best_count) {
            best = u;
            best_count = c;
        }
    }
    return best;
}

/// All database nodes satisfying the matching node principal against
/// u_start, ascending by node id. Enumerates via the label index on one of
/// u_start's labels when it has any, else scans every node.
inline std::vector<NodeId> candidates_for_start(const QueryGraph& q, NodeId u_start,
                                                const Graph& g) {
    LabelBridge bridge(q.graph(), g);
    const LabelSet& labels = q.graph().node(u_start).labels;
    std::vector<NodeId> out;

    if (!labels.empty()) {
        LabelId scan = kNoLabel;
        for (LabelId id : labels.ids()) {
            LabelId t = bridge.translate(id);
            if (t == kNoLabel) return out;
            if (scan == kNoLabel || g.nodes_with_label(t).size() < g.nodes_with_label(scan).size())
                scan = t;
        }
        for (NodeId v : g.nodes_with_label(scan))
            if (detail::mnp_impl(q.graph(), u_start, g, v, bridge)) out.push_back(v);
    } else {
        for (NodeId v = 0; v < g.node_count(); ++v)
            if (detail::mnp_impl(q.graph(), u_start, g, v, bridge)) out.push_back(v);
    }
    return out;
}

/// The branch-and-bound backtracking search. One instance runs one query
/// against one database graph; the state is inspectable afterwards, which the
/// tests use to pin the restoration invariants.
class Searcher {
public:
    Searcher(const QueryGraph& q, const Graph& g, SearchConfig cfg = {})
        : q_(q), g_(g), cfg_(cfg), state_(q, g) {}

    MatchResult run() {
        state_.reset();
        state_.counters() = Counters{};
        embeddings_.clear();
        stop_ = false;
        steps_ = 0;
        depth_ = 0;
        live_cells_ = 0;

        NodeId u_start = choose_start(q_, cfg_.start_strategy, g_);
        std::vector<NodeId> candidates = candidates_for_start(q_, u_start, g_);
        for (NodeId u_prime : candidates) {
            state_.seed(u_start, u_prime);
            search();
            if (stop_) break;  // interrupted mid-region: state is deliberately dirty
            assert(state_.stack_empty());
            assert(state_.matched_edge_count() == 0);
            assert(state_.matched_node_count() == 1);
            state_.unseed(u_start, u_prime);
        }
        state_.reset();

        MatchResult result;
        result.embeddings = std::move(embeddings_);
        result.counters = state_.counters();
        embeddings_.clear();
        return result;
    }

    const MatchState& state() const { return state_; }

private:
    struct DepthGuard {
        Searcher& s;
        explicit DepthGuard(Searcher& searcher) : s(searcher) {
            ++s.depth_;
            s.state_.counters().max_recursion_depth =
                std::max<std::uint64_t>(s.state_.counters().max_recursion_depth, s.depth_);
        }
        ~DepthGuard() { --s.depth_; }
    };

    void tick() {
        if (!cfg_.deadline) return;
        if ((++steps_ & 1023u) != 0) return;
        if (std::chrono::steady_clock::now() > *cfg_.deadline)
            throw Error(ErrorCode::Timeout, "search deadline exceeded");
    }

    void search() {
        DepthGuard guard(*this);
        tick();
        if (stop_) return;
        if (!state_.stack_empty()) {
            auto [u, u_prime] = state_.pop_pair();
            if (has_unmatched_incident(u))
                branch_nodes(u, u_prime);
            else
                search();
        } else {
            record_embedding();
        }
    }

    bool has_unmatched_incident(NodeId u) const {
        for (const AdjEntry& entry : q_.graph().adjacency(u))
            if (state_.edge_match_of(entry.edge) == kNoEdge) return true;
        return false;
    }

    void branch_nodes(NodeId u, NodeId u_prime) {
        std::vector<EdgeId> pending;
        detail::distinct_incident_edges(q_.graph(), u, pending);
        std::erase_if(pending, [&](EdgeId r) { return state_.edge_match_of(r) != kNoEdge; });
        if (pending.empty()) {
            search();
            return;
        }

        std::vector<std::vector<EdgeId>> lists(pending.size());
        std::size_t cells = 0;
        for (std::size_t i = 0; i < pending.size(); ++i) {
            detail::edge_candidates_impl(q_.graph(), pending[i], u, g_, u_prime, state_.bridge(),
                                         lists[i]);
            cells += lists[i].size();
        }
        live_cells_ += cells;
        state_.counters().peak_candidate_cells =
            std::max<std::uint64_t>(state_.counters().peak_candidate_cells, live_cells_);

        match_relationship(pending, lists, 0, u, u_prime);

        live_cells_ -= cells;
    }

    void match_relationship(const std::vector<EdgeId>& pending,
                            const std::vector<std::vector<EdgeId>>& lists, std::size_t level,
                            NodeId u, NodeId u_prime) {
        DepthGuard guard(*this);
        EdgeId r = pending[level];
        for (EdgeId r_prime : lists[level]) {
            if (stop_) return;
            tick();
            if (state_.db_edge_matched(r_prime)) continue;
            if (cfg_.check_budget && state_.counters().checks >= *cfg_.check_budget)
                throw Error(ErrorCode::BudgetExceeded, "search exceeded the check budget");
            MatchState::Snapshot snap = state_.snapshot(cfg_.verify_snapshots);
            if (check(state_, r, r_prime, u, u_prime)) {
                state_.add_edge_match(r, r_prime);
                if (level + 1 < pending.size())
                    match_relationship(pending, lists, level + 1, u, u_prime);
                else
                    search();
                state_.remove_edge_match(r, r_prime);
                ++state_.counters().backtracks;
            }
            state_.restore(snap);
        }
    }

    void record_embedding() {
        Embedding emb;
        emb.node_map.resize(q_.graph().node_count());
        emb.edge_map.resize(q_.graph().edge_count());
        for (NodeId u = 0; u < q_.graph().node_count(); ++u) {
            assert(state_.node_match_of(u) != kNoNode);
            emb.node_map[u] = state_.node_match_of(u);
        }
        for (EdgeId r = 0; r < q_.graph().edge_count(); ++r) {
            assert(state_.edge_match_of(r) != kNoEdge);
            emb.edge_map[r] = state_.edge_match_of(r);
        }
        embeddings_.push_back(std::move(emb));
        if (cfg_.result_limit && embeddings_.size() >= *cfg_.result_limit) stop_ = true;
    }

    const QueryGraph& q_;
    const Graph& g_;
    SearchConfig cfg_;
    MatchState state_;
    std::vector<Embedding> embeddings_;
    bool stop_ = false;
    std::uint64_t steps_ = 0;
    std::uint64_t depth_ = 0;
    std::uint64_t live_cells_ = 0;
};

/// Every distinct embedding of q in g, in a fully deterministic discovery
/// order: starting candidates ascending by node id, query edges ascending by
/// edge id, candidate edges ascending by edge id.
inline MatchResult match_all(const QueryGraph& q, const Graph& g, const SearchConfig& cfg = {}) {
    if (q.graph().node_count() == 0) throw Error(ErrorCode::EmptyQuery, "query graph has no nodes");
    Searcher searcher(q, g, cfg);
    return searcher.run();
}

}  // namespace bbgraph
