#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bbgraph/errors.hpp"

namespace bbgraph {

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;
using LabelId = std::uint32_t;

inline constexpr NodeId kNoNode = static_cast<NodeId>(-1);
inline constexpr EdgeId kNoEdge = static_cast<EdgeId>(-1);
inline constexpr LabelId kNoLabel = static_cast<LabelId>(-1);

/// Direction of an edge relative to an anchor node. A self-loop realizes
/// both directions at its node.
enum class Direction : std::uint8_t { Outgoing = 0, Incoming = 1 };

inline constexpr std::size_t direction_index(Direction d) {
    return static_cast<std::size_t>(d);
}

inline constexpr Direction opposite(Direction d) {
    return d == Direction::Outgoing ? Direction::Incoming : Direction::Outgoing;
}

/// Interns label strings to dense ids, one table per graph. Comparisons
/// inside the engine are id-based; strings appear only at the API boundary.
class LabelTable {
public:
    LabelId intern(std::string_view name) {
        auto it = ids_.find(std::string(name));
        if (it != ids_.end()) return it->second;
        LabelId id = static_cast<LabelId>(names_.size());
        names_.emplace_back(name);
        ids_.emplace(names_.back(), id);
        return id;
    }

    std::optional<LabelId> find(std::string_view name) const {
        auto it = ids_.find(std::string(name));
        if (it == ids_.end()) return std::nullopt;
        return it->second;
    }

    const std::string& name(LabelId id) const { return names_.at(id); }
    std::size_t size() const { return names_.size(); }

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, LabelId> ids_;
};

/// A set of interned label ids, kept sorted and duplicate-free.
class LabelSet {
public:
    LabelSet() = default;
    explicit LabelSet(std::vector<LabelId> ids) : ids_(std::move(ids)) {
        std::sort(ids_.begin(), ids_.end());
        ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
    }

    bool contains(LabelId id) const {
        return std::binary_search(ids_.begin(), ids_.end(), id);
    }

    /// Exact set containment: every label of *this occurs in other.
    bool subset_of(const LabelSet& other) const {
        return std::includes(other.ids_.begin(), other.ids_.end(), ids_.begin(), ids_.end());
    }

    bool empty() const { return ids_.empty(); }
    std::size_t size() const { return ids_.size(); }
    std::span<const LabelId> ids() const { return ids_; }

    bool operator==(const LabelSet&) const = default;

private:
    std::vector<LabelId> ids_;
};

struct Node {
    NodeId id = kNoNode;
    LabelSet labels;
};

struct Edge {
    EdgeId id = kNoEdge;
    NodeId src = kNoNode;
    NodeId dst = kNoNode;
    LabelSet labels;
};

/// One incidence record: the edge, its direction relative to the owning
/// node, and the endpoint on the far side (the node itself for self-loops).
struct AdjEntry {
    EdgeId edge = kNoEdge;
    Direction dir = Direction::Outgoing;
    NodeId other = kNoNode;
};

/// Per-node counts of incident edges grouped by (edge label, direction).
/// An edge is counted once under every label it carries, per direction it
/// realizes; totals count each incident edge once per realized direction,
/// so a self-loop contributes to both totals.
class DegreeSignature {
public:
    using Key = std::pair<LabelId, Direction>;

    std::uint32_t count(LabelId label, Direction dir) const {
        auto it = lookup(label, dir);
        return it == counts_.end() ? 0u : it->second;
    }

    std::uint32_t total(Direction dir) const { return totals_[direction_index(dir)]; }

    std::span<const std::pair<Key, std::uint32_t>> counts() const { return counts_; }

    void add_incidence(const LabelSet& edge_labels, Direction dir) {
        ++totals_[direction_index(dir)];
        for (LabelId label : edge_labels.ids()) bump(label, dir);
    }

    bool operator==(const DegreeSignature&) const = default;

private:
    std::vector<std::pair<Key, std::uint32_t>>::const_iterator lookup(LabelId label,
                                                                      Direction dir) const {
        Key key{label, dir};
        auto it = std::lower_bound(counts_.begin(), counts_.end(), key,
                                   [](const auto& entry, const Key& k) { return entry.first < k; });
        if (it == counts_.end() || it->first != key) return counts_.end();
        return it;
    }

    void bump(LabelId label, Direction dir) {
        Key key{label, dir};
        auto it = std::lower_bound(counts_.begin(), counts_.end(), key,
                                   [](const auto& entry, const Key& k) { return entry.first < k; });
        if (it != counts_.end() && it->first == key) {
            ++it->second;
        } else {
            counts_.insert(it, {key, 1u});
        }
    }

    std::vector<std::pair<Key, std::uint32_t>> counts_;
    std::array<std::uint32_t, 2> totals_{0u, 0u};
};

/// Node/edge descriptions as they arrive from files or callers: dense ids
/// plus label names.
struct NodeSpec {
    NodeId id = kNoNode;
    std::vector<std::string> labels;

    bool operator==(const NodeSpec&) const = default;
};

struct EdgeSpec {
    EdgeId id = kNoEdge;
    NodeId src = kNoNode;
    NodeId dst = kNoNode;
    std::vector<std::string> labels;

    bool operator==(const EdgeSpec&) const = default;
};

/// Immutable labeled directed multigraph with per-node adjacency, per-label
/// node index, and precomputed degree signatures. Safe to share among
/// concurrent readers once built.
class Graph {
public:
    Graph() = default;

    std::size_t node_count() const { return nodes_.size(); }
    std::size_t edge_count() const { return edges_.size(); }

    const Node& node(NodeId id) const {
        require_node(id);
        return nodes_[id];
    }

    const Edge& edge(EdgeId id) const {
        if (id >= edges_.size())
            throw Error(ErrorCode::UnknownEdge, "edge id " + std::to_string(id));
        return edges_[id];
    }

    std::span<const AdjEntry> adjacency(NodeId id) const {
        require_node(id);
        return adjacency_[id];
    }

    const DegreeSignature& signature(NodeId id) const {
        require_node(id);
        return signatures_[id];
    }

    /// Node ids carrying the given label, ascending.
    std::span<const NodeId> nodes_with_label(LabelId label) const {
        if (label >= label_index_.size()) return {};
        return label_index_[label];
    }

    const LabelTable& labels() const { return labels_; }

    /// Maximum adjacency-entry count over all nodes (a self-loop counts
    /// twice at its node). Zero on an edgeless graph.
    std::uint32_t max_degree() const { return max_degree_; }

    /// Endpoint of an edge other than the anchor; for a self-loop the
    /// "other" endpoint is the anchor itself.
    NodeId other_endpoint(EdgeId edge_id, NodeId anchor) const {
        const Edge& e = edge(edge_id);
        if (e.src == e.dst) {
            if (anchor != e.src)
                throw Error(ErrorCode::EdgeNotIncident,
                            "edge " + std::to_string(edge_id) + " is not incident to node " +
                                std::to_string(anchor));
            return anchor;
        }
        if (anchor == e.src) return e.dst;
        if (anchor == e.dst) return e.src;
        throw Error(ErrorCode::EdgeNotIncident, "edge " + std::to_string(edge_id) +
                                                    " is not incident to node " +
                                                    std::to_string(anchor));
    }

    bool has_node(NodeId id) const { return id < nodes_.size(); }
    bool has_edge(EdgeId id) const { return id < edges_.size(); }

    friend Graph build_graph(const std::vector<NodeSpec>& nodes,
                             const std::vector<EdgeSpec>& edges);

private:
    void require_node(NodeId id) const {
        if (id >= nodes_.size())
            throw Error(ErrorCode::UnknownNode, "node id " + std::to_string(id));
    }

    std::vector<Node> nodes_;
    std::vector<Edge> edges_;
    std::vector<std::vector<AdjEntry>> adjacency_;
    std::vector<DegreeSignature> signatures_;
    std::vector<std::vector<NodeId>> label_index_;
    LabelTable labels_;
    std::uint32_t max_degree_ = 0;
};

namespace detail {

template <typename Spec>
void check_dense_ids(const std::vector<Spec>& specs, const char* what) {
    std::vector<bool> seen(specs.size(), false);
    for (const Spec& s : specs) {
        if (s.id >= specs.size())
            throw Error(ErrorCode::NonDenseIds, std::string(what) + " id " + std::to_string(s.id) +
                                                    " outside dense range [0, " +
                                                    std::to_string(specs.size()) + ")");
        if (seen[s.id])
            throw Error(ErrorCode::DuplicateId,
                        std::string(what) + " id " + std::to_string(s.id) + " occurs twice");
        seen[s.id] = true;
    }
}

}  // namespace detail

/// Builds an immutable Graph from node/edge descriptions. Ids must be dense
/// and unique; endpoints must name existing nodes. Construction is
/// deterministic: label ids are interned in (node id, then edge id) order.
inline Graph build_graph(const std::vector<NodeSpec>& nodes, const std::vector<EdgeSpec>& edges) {
    detail::check_dense_ids(nodes, "node");
    detail::check_dense_ids(edges, "edge");

    Graph g;
    g.nodes_.resize(nodes.size());
    for (const NodeSpec& spec : nodes) {
        std::vector<LabelId> ids;
        ids.reserve(spec.labels.size());
        for (const std::string& name : spec.labels) ids.push_back(g.labels_.intern(name));
        g.nodes_[spec.id] = Node{spec.id, LabelSet(std::move(ids))};
    }

    g.edges_.resize(edges.size());
    for (const EdgeSpec& spec : edges) {
        if (spec.src >= nodes.size())
            throw Error(ErrorCode::DanglingEndpoint, "edge " + std::to_string(spec.id) +
                                                         " src references missing node " +
                                                         std::to_string(spec.src));
        if (spec.dst >= nodes.size())
            throw Error(ErrorCode::DanglingEndpoint, "edge " + std::to_string(spec.id) +
                                                         " dst references missing node " +
                                                         std::to_string(spec.dst));
        std::vector<LabelId> ids;
        ids.reserve(spec.labels.size());
        for (const std::string& name : spec.labels) ids.push_back(g.labels_.intern(name));
        g.edges_[spec.id] = Edge{spec.id, spec.src, spec.dst, LabelSet(std::move(ids))};
    }

    g.adjacency_.resize(nodes.size());
    g.signatures_.resize(nodes.size());
    for (const Edge& e : g.edges_) {
        g.adjacency_[e.src].push_back({e.id, Direction::Outgoing, e.dst});
        g.adjacency_[e.dst].push_back({e.id, Direction::Incoming, e.src});
        g.signatures_[e.src].add_incidence(e.labels, Direction::Outgoing);
        g.signatures_[e.dst].add_incidence(e.labels, Direction::Incoming);
    }

    g.label_index_.resize(g.labels_.size());
    for (const Node& n : g.nodes_)
        for (LabelId label : n.labels.ids()) g.label_index_[label].push_back(n.id);

    for (const auto& adj : g.adjacency_)
        g.max_degree_ = std::max<std::uint32_t>(g.max_degree_, static_cast<std::uint32_t>(adj.size()));

    return g;
}

/// Pure recount of one node's signature; Graph::signature returns the same
/// values from the precomputed table.
inline DegreeSignature degree_signature(const Graph& g, NodeId v) {
    DegreeSignature sig;
    for (const AdjEntry& entry : g.adjacency(v)) sig.add_incidence(g.edge(entry.edge).labels, entry.dir);
    return sig;
}

/// A small validated pattern graph with a designated starting node.
/// Weak connectivity (one component ignoring direction) is enforced at
/// construction; Algorithm-style search only reaches nodes connected to
/// the start through the stack mechanism.
class QueryGraph {
public:
    const Graph& graph() const { return graph_; }
    NodeId start_node() const { return start_; }

    friend QueryGraph build_query(const std::vector<NodeSpec>& nodes,
                                  const std::vector<EdgeSpec>& edges,
                                  std::optional<NodeId> start);

private:
    QueryGraph(Graph g, NodeId start) : graph_(std::move(g)), start_(start) {}

    Graph graph_;
    NodeId start_ = 0;
};

inline QueryGraph build_query(const std::vector<NodeSpec>& nodes,
                              const std::vector<EdgeSpec>& edges,
                              std::optional<NodeId> start = std::nullopt) {
    Graph g = build_graph(nodes, edges);
    if (g.node_count() == 0) throw Error(ErrorCode::EmptyQuery, "query graph has no nodes");

    // Weak connectivity: BFS from node 0 ignoring edge direction.
    std::vector<bool> seen(g.node_count(), false);
    std::vector<NodeId> frontier{0};
    seen[0] = true;
    std::size_t reached = 1;
    while (!frontier.empty()) {
        NodeId v = frontier.back();
        frontier.pop_back();
        for (const AdjEntry& entry : g.adjacency(v)) {
            if (!seen[entry.other]) {
                seen[entry.other] = true;
                ++reached;
                frontier.push_back(entry.other);
            }
        }
    }
    if (reached != g.node_count()) {
        NodeId missing = 0;
        for (NodeId v = 0; v < g.node_count(); ++v)
            if (!seen[v]) { missing = v; break; }
        throw Error(ErrorCode::DisconnectedQuery,
                    "query node " + std::to_string(missing) + " is not connected to node 0");
    }

    NodeId s = start.value_or(0);
    if (s >= g.node_count())
        throw Error(ErrorCode::UnknownNode, "start node id " + std::to_string(s));
    return QueryGraph(std::move(g), s);
}

/// Translates one graph's label ids into another's. Labels absent from the
/// target map to kNoLabel, which makes every subset test against the target
/// fail for elements carrying them.
class LabelBridge {
public:
    LabelBridge(const Graph& from, const Graph& to) {
        map_.resize(from.labels().size(), kNoLabel);
        for (LabelId id = 0; id < map_.size(); ++id)
            if (auto target = to.labels().find(from.labels().name(id))) map_[id] = *target;
    }

    LabelId translate(LabelId from_id) const { return map_[from_id]; }

    bool labels_subset(const LabelSet& from, const LabelSet& to) const {
        for (LabelId id : from.ids()) {
            LabelId t = translate(id);
            if (t == kNoLabel || !to.contains(t)) return false;
        }
        return true;
    }

private:
    std::vector<LabelId> map_;
};

namespace detail {

inline bool mnp_impl(const Graph& qg, NodeId u, const Graph& g, NodeId u_prime,
                     const LabelBridge& bridge) {
    const Node& qn = qg.node(u);
    const Node& dn = g.node(u_prime);
    if (!bridge.labels_subset(qn.labels, dn.labels)) return false;

    const DegreeSignature& qs = qg.signature(u);
    const DegreeSignature& ds = g.signature(u_prime);
    if (qs.total(Direction::Outgoing) > ds.total(Direction::Outgoing)) return false;
    if (qs.total(Direction::Incoming) > ds.total(Direction::Incoming)) return false;
    for (const auto& [key, count] : qs.counts()) {
        LabelId t = bridge.translate(key.first);
        if (t == kNoLabel || count > ds.count(t, key.second)) return false;
    }
    return true;
}

/// Directions an edge realizes relative to an anchor; both for self-loops.
inline std::pair<bool, bool> realized_directions(const Edge& e, NodeId anchor) {
    bool out = e.src == anchor;
    bool in = e.dst == anchor;
    if (!out && !in)
        throw Error(ErrorCode::EdgeNotIncident, "edge " + std::to_string(e.id) +
                                                    " is not incident to node " +
                                                    std::to_string(anchor));
    return {out, in};
}

inline bool mrp_impl(const Graph& qg, EdgeId r, NodeId u, const Graph& g, EdgeId r_prime,
                     NodeId u_prime, const LabelBridge& bridge) {
    const Edge& qe = qg.edge(r);
    const Edge& de = g.edge(r_prime);
    auto [q_out, q_in] = realized_directions(qe, u);
    auto [d_out, d_in] = realized_directions(de, u_prime);
    if (!((q_out && d_out) || (q_in && d_in))) return false;
    return bridge.labels_subset(qe.labels, de.labels);
}

}  // namespace detail

/// Matching node principal: necessary compatibility of query node u with
/// database node u'. Label subset plus per-(label,direction) and per-direction
/// degree dominance. Never false for a pair mapped by a true embedding.
inline bool mnp(const QueryGraph& q, NodeId u, const Graph& g, NodeId u_prime) {
    LabelBridge bridge(q.graph(), g);
    return detail::mnp_impl(q.graph(), u, g, u_prime, bridge);
}

/// Matching relationship principal: necessary compatibility of query edge r
/// (anchored at u) with database edge r' (anchored at u'). Label subset plus
/// equal direction relative to the anchors; a self-loop realizes both
/// directions, so either direction of the query edge is accepted against it.
inline bool mrp(const QueryGraph& q, EdgeId r, NodeId u, const Graph& g, EdgeId r_prime,
                NodeId u_prime) {
    LabelBridge bridge(q.graph(), g);
    return detail::mrp_impl(q.graph(), r, u, g, r_prime, u_prime, bridge);
}

}  // namespace bbgraph
