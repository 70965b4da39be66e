#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "bbgraph/graph.hpp"
#include "bbgraph/matcher.hpp"

namespace bbgraph {

namespace detail {

inline std::set<std::string> label_names(const Graph& g, const LabelSet& labels) {
    std::set<std::string> out;
    for (LabelId id : labels.ids()) out.insert(g.labels().name(id));
    return out;
}

inline bool names_subset(const std::set<std::string>& a, const std::set<std::string>& b) {
    for (const std::string& name : a)
        if (!b.count(name)) return false;
    return true;
}

}  // namespace detail

/// Checks every clause of the embedding definition: map sizes and ranges,
/// node-label containment, injectivity of both maps, and per-edge endpoint,
/// direction, and edge-label containment. Returns a description of the first
/// violation found, or nullopt for a valid embedding.
inline std::optional<std::string> validate_embedding(const QueryGraph& q, const Graph& g,
                                                     const Embedding& emb) {
    const Graph& qg = q.graph();

    if (emb.node_map.size() != qg.node_count())
        return "node map covers " + std::to_string(emb.node_map.size()) + " of " +
               std::to_string(qg.node_count()) + " query nodes";
    if (emb.edge_map.size() != qg.edge_count())
        return "edge map covers " + std::to_string(emb.edge_map.size()) + " of " +
               std::to_string(qg.edge_count()) + " query edges";

    for (NodeId u = 0; u < qg.node_count(); ++u) {
        NodeId v = emb.node_map[u];
        if (v == kNoNode || !g.has_node(v))
            return "query node " + std::to_string(u) + " maps outside the database";
        if (!detail::names_subset(detail::label_names(qg, qg.node(u).labels),
                                  detail::label_names(g, g.node(v).labels)))
            return "labels of query node " + std::to_string(u) +
                   " are not contained in labels of node " + std::to_string(v);
    }

    std::set<NodeId> node_images;
    for (NodeId u = 0; u < qg.node_count(); ++u)
        if (!node_images.insert(emb.node_map[u]).second)
            return "node map is not injective at database node " +
                   std::to_string(emb.node_map[u]);

    std::set<EdgeId> edge_images;
    for (EdgeId r = 0; r < qg.edge_count(); ++r) {
        EdgeId r_prime = emb.edge_map[r];
        if (r_prime == kNoEdge || !g.has_edge(r_prime))
            return "query edge " + std::to_string(r) + " maps outside the database";
        if (!edge_images.insert(r_prime).second)
            return "edge map is not injective at database edge " + std::to_string(r_prime);

        const Edge& qe = qg.edge(r);
        const Edge& ge = g.edge(r_prime);
        if (emb.node_map[qe.src] != ge.src || emb.node_map[qe.dst] != ge.dst)
            return "query edge " + std::to_string(r) +
                   " does not map onto the endpoints of database edge " + std::to_string(r_prime);
        if (!detail::names_subset(detail::label_names(qg, qe.labels),
                                  detail::label_names(g, ge.labels)))
            return "labels of query edge " + std::to_string(r) +
                   " are not contained in labels of edge " + std::to_string(r_prime);
    }
    return std::nullopt;
}

}  // namespace bbgraph
