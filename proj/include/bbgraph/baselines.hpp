#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <vector>

#include "bbgraph/errors.hpp"
#include "bbgraph/graph.hpp"
#include "bbgraph/matcher.hpp"

namespace bbgraph {

/// Caps the brute-force reference so a hostile instance fails loudly instead
/// of hanging. One mapping explored = one candidate tried at any level of
/// either the node or the edge enumeration.
struct OracleBudget {
    std::uint64_t max_mappings_explored = 200'000'000;
    std::optional<std::chrono::steady_clock::time_point> deadline;
};

namespace detail {

inline std::optional<LabelSet> translate_by_name(const Graph& from, const LabelSet& labels,
                                                 const Graph& to) {
    std::vector<LabelId> ids;
    ids.reserve(labels.size());
    for (LabelId id : labels.ids()) {
        std::optional<LabelId> t = to.labels().find(from.labels().name(id));
        if (!t) return std::nullopt;
        ids.push_back(*t);
    }
    return LabelSet(std::move(ids));
}

/// Brute-force enumeration straight from the embedding definition: every
/// injective node map passing the label-containment clause, then every
/// injective edge map with exact endpoints and directions. No candidate
/// filtering, no shared machinery with the search engine.
struct OracleRun {
    const Graph& qg;
    const Graph& g;
    const OracleBudget& budget;
    std::vector<std::optional<LabelSet>> node_labels;
    std::vector<std::optional<LabelSet>> edge_labels;
    std::vector<NodeId> f;
    std::vector<char> used_node;
    std::vector<EdgeId> fe;
    std::vector<char> used_edge;
    std::uint64_t attempts = 0;
    std::vector<Embedding> out;

    OracleRun(const Graph& query_graph, const Graph& db, const OracleBudget& b)
        : qg(query_graph), g(db), budget(b) {
        node_labels.reserve(qg.node_count());
        for (NodeId u = 0; u < qg.node_count(); ++u)
            node_labels.push_back(translate_by_name(qg, qg.node(u).labels, g));
        edge_labels.reserve(qg.edge_count());
        for (EdgeId r = 0; r < qg.edge_count(); ++r)
            edge_labels.push_back(translate_by_name(qg, qg.edge(r).labels, g));
        f.assign(qg.node_count(), kNoNode);
        used_node.assign(g.node_count(), 0);
        fe.assign(qg.edge_count(), kNoEdge);
        used_edge.assign(g.edge_count(), 0);
    }

    void bump() {
        if (++attempts > budget.max_mappings_explored)
            throw Error(ErrorCode::BudgetExceeded,
                        "oracle exceeded " + std::to_string(budget.max_mappings_explored) +
                            " explored mappings");
        if (budget.deadline && (attempts & 1023u) == 0 &&
            std::chrono::steady_clock::now() > *budget.deadline)
            throw Error(ErrorCode::Timeout, "oracle deadline exceeded");
    }

    void assign_nodes(NodeId u) {
        if (u == qg.node_count()) {
            assign_edges(0);
            return;
        }
        if (!node_labels[u]) return;
        for (NodeId v = 0; v < g.node_count(); ++v) {
            bump();
            if (used_node[v]) continue;
            if (!node_labels[u]->subset_of(g.node(v).labels)) continue;
            f[u] = v;
            used_node[v] = 1;
            assign_nodes(u + 1);
            used_node[v] = 0;
        }
        f[u] = kNoNode;
    }

    void assign_edges(EdgeId r) {
        if (r == qg.edge_count()) {
            out.push_back({f, fe});
            return;
        }
        if (!edge_labels[r]) return;
        const Edge& qe = qg.edge(r);
        NodeId a = f[qe.src];
        NodeId b = f[qe.dst];
        for (const AdjEntry& entry : g.adjacency(a)) {
            if (entry.dir != Direction::Outgoing || entry.other != b) continue;
            bump();
            if (used_edge[entry.edge]) continue;
            if (!edge_labels[r]->subset_of(g.edge(entry.edge).labels)) continue;
            fe[r] = entry.edge;
            used_edge[entry.edge] = 1;
            assign_edges(r + 1);
            used_edge[entry.edge] = 0;
        }
        fe[r] = kNoEdge;
    }
};

}  // namespace detail

/// Reference answer set, enumerated directly from the embedding definition.
/// Order of results is an implementation detail; compare as sets.
inline std::vector<Embedding> oracle_enumerate(const QueryGraph& q, const Graph& g,
                                               const OracleBudget& budget = {}) {
    detail::OracleRun run(q.graph(), g, budget);
    run.assign_nodes(0);
    return run.out;
}

struct GlobalConfig {
    std::optional<std::uint64_t> result_limit;
    std::optional<std::chrono::steady_clock::time_point> deadline;
};

namespace detail {

inline bool compatible_edge_exists(const Graph& g, NodeId a, NodeId b, const LabelSet& query_labels,
                                   const LabelBridge& bridge) {
    for (const AdjEntry& entry : g.adjacency(a)) {
        if (entry.dir != Direction::Outgoing || entry.other != b) continue;
        if (bridge.labels_subset(query_labels, g.edge(entry.edge).labels)) return true;
    }
    return false;
}

/// The strategy the branch-and-bound engine is benchmarked against: materialize
/// a candidate list for every query node up front, then backtrack over query
/// nodes in id order with an edge-existence prune, enumerating injective edge
/// maps once all nodes are placed.
struct GlobalRun {
    const Graph& qg;
    const Graph& g;
    const GlobalConfig& cfg;
    LabelBridge bridge;
    std::vector<std::vector<NodeId>> cand;
    std::vector<NodeId> f;
    std::vector<char> used_node;
    std::vector<EdgeId> fe;
    std::vector<char> used_edge;
    std::uint64_t ticks = 0;
    bool stop = false;
    MatchResult result;

    GlobalRun(const QueryGraph& q, const Graph& db, const GlobalConfig& c)
        : qg(q.graph()), g(db), cfg(c), bridge(q.graph(), db) {
        cand.reserve(qg.node_count());
        std::uint64_t cells = 0;
        for (NodeId u = 0; u < qg.node_count(); ++u) {
            cand.push_back(candidates_for_start(q, u, db));
            cells += cand.back().size();
        }
        result.counters.peak_candidate_cells = cells;
        f.assign(qg.node_count(), kNoNode);
        used_node.assign(g.node_count(), 0);
        fe.assign(qg.edge_count(), kNoEdge);
        used_edge.assign(g.edge_count(), 0);
    }

    void tick() {
        if (!cfg.deadline) return;
        if ((++ticks & 1023u) != 0) return;
        if (std::chrono::steady_clock::now() > *cfg.deadline)
            throw Error(ErrorCode::Timeout, "search deadline exceeded");
    }

    /// True when every query edge between u and an already-placed node (nodes
    /// with smaller id, or u itself for a self-loop) has at least one
    /// label-compatible database edge with the right endpoints. Injectivity of
    /// the edge map is settled later.
    bool edges_satisfiable(NodeId u, NodeId v) {
        EdgeId prev = kNoEdge;
        for (const AdjEntry& entry : qg.adjacency(u)) {
            if (entry.edge == prev) continue;
            prev = entry.edge;
            NodeId w = entry.other;
            if (w > u) continue;
            const Edge& qe = qg.edge(entry.edge);
            NodeId a = qe.src == u ? v : f[qe.src];
            NodeId b = qe.dst == u ? v : f[qe.dst];
            ++result.counters.checks;
            if (!compatible_edge_exists(g, a, b, qe.labels, bridge)) return false;
        }
        return true;
    }

    void assign_nodes(NodeId u) {
        result.counters.max_recursion_depth =
            std::max<std::uint64_t>(result.counters.max_recursion_depth, u + 1);
        if (u == qg.node_count()) {
            assign_edges(0);
            return;
        }
        for (NodeId v : cand[u]) {
            if (stop) return;
            tick();
            if (used_node[v]) continue;
            if (!edges_satisfiable(u, v)) continue;
            f[u] = v;
            used_node[v] = 1;
            assign_nodes(u + 1);
            used_node[v] = 0;
            ++result.counters.backtracks;
        }
        f[u] = kNoNode;
    }

    void assign_edges(EdgeId r) {
        if (r == qg.edge_count()) {
            result.embeddings.push_back({f, fe});
            if (cfg.result_limit && result.embeddings.size() >= *cfg.result_limit) stop = true;
            return;
        }
        const Edge& qe = qg.edge(r);
        NodeId a = f[qe.src];
        NodeId b = f[qe.dst];
        for (const AdjEntry& entry : g.adjacency(a)) {
            if (stop) return;
            tick();
            if (entry.dir != Direction::Outgoing || entry.other != b) continue;
            if (used_edge[entry.edge]) continue;
            if (!bridge.labels_subset(qe.labels, g.edge(entry.edge).labels)) continue;
            fe[r] = entry.edge;
            used_edge[entry.edge] = 1;
            assign_edges(r + 1);
            used_edge[entry.edge] = 0;
        }
        fe[r] = kNoEdge;
    }
};

}  // namespace detail

/// Global-candidate baseline matcher. Same answer set as the branch-and-bound
/// engine, different search organization: all candidate lists are built before
/// any matching starts.
inline MatchResult global_candidate_match(const QueryGraph& q, const Graph& g,
                                          const GlobalConfig& cfg = {}) {
    detail::GlobalRun run(q, g, cfg);
    run.assign_nodes(0);
    return std::move(run.result);
}

}  // namespace bbgraph
