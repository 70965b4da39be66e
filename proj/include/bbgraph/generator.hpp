#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <unordered_set>
#include <vector>

#include "bbgraph/errors.hpp"
#include "bbgraph/graph.hpp"

namespace bbgraph {

namespace detail {

/// Unbiased draw from [0, n). The raw mt19937_64 stream is pinned by the
/// standard, and this mapping avoids std::uniform_int_distribution, whose
/// output differs across library implementations; together they make every
/// generated artifact byte-reproducible.
inline std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
    std::uint64_t threshold = (0 - n) % n;
    for (;;) {
        std::uint64_t r = rng();
        if (r >= threshold) return r % n;
    }
}

inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace detail

enum class LabelDistribution { Uniform, Zipf };

struct GenSpec {
    std::uint32_t node_count = 0;
    std::uint32_t edge_count = 0;
    std::uint32_t node_label_alphabet = 14;
    std::uint32_t edge_label_alphabet = 18;
    LabelDistribution label_distribution = LabelDistribution::Uniform;
    /// Zipf exponent; rank k of K drawn with probability proportional to k^-s.
    double zipf_s = 1.0;
    std::uint64_t seed = 0;
    bool allow_self_loops = true;
    bool allow_parallel_edges = true;
};

namespace detail {

class LabelSampler {
public:
    LabelSampler(LabelDistribution dist, std::uint32_t alphabet, double s)
        : dist_(dist), alphabet_(alphabet) {
        if (dist_ == LabelDistribution::Zipf) {
            cumulative_.reserve(alphabet);
            double total = 0.0;
            for (std::uint32_t k = 1; k <= alphabet; ++k) {
                total += std::pow(static_cast<double>(k), -s);
                cumulative_.push_back(total);
            }
        }
    }

    /// 1-based rank.
    std::uint32_t draw(std::mt19937_64& rng) const {
        if (dist_ == LabelDistribution::Uniform)
            return static_cast<std::uint32_t>(bounded(rng, alphabet_)) + 1;
        double u = uniform01(rng) * cumulative_.back();
        auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
        if (it == cumulative_.end()) --it;
        return static_cast<std::uint32_t>(it - cumulative_.begin()) + 1;
    }

private:
    LabelDistribution dist_;
    std::uint32_t alphabet_;
    std::vector<double> cumulative_;
};

}  // namespace detail

/// Seeded random directed multigraph: endpoints uniform, one label per node
/// and per edge drawn from the configured distribution. Node labels are named
/// N1..Nk, edge labels R1..Rk. A fixed spec fixes every byte of the output.
inline Graph generate_graph(const GenSpec& spec) {
    const std::uint64_t n = spec.node_count;
    if (n == 0) throw Error(ErrorCode::InfeasibleSpec, "node_count must be positive");
    if (spec.node_label_alphabet == 0 || spec.edge_label_alphabet == 0)
        throw Error(ErrorCode::InfeasibleSpec, "label alphabets must be positive");

    const std::uint64_t pair_space = spec.allow_self_loops ? n * n : n * (n - 1);
    if (spec.edge_count > 0 && pair_space == 0)
        throw Error(ErrorCode::InfeasibleSpec, "no admissible endpoint pair exists");
    if (!spec.allow_parallel_edges && spec.edge_count > pair_space)
        throw Error(ErrorCode::InfeasibleSpec,
                    "edge_count " + std::to_string(spec.edge_count) + " exceeds the " +
                        std::to_string(pair_space) + " distinct endpoint pairs");

    std::mt19937_64 rng(spec.seed);
    detail::LabelSampler node_labels(spec.label_distribution, spec.node_label_alphabet,
                                     spec.zipf_s);
    detail::LabelSampler edge_labels(spec.label_distribution, spec.edge_label_alphabet,
                                     spec.zipf_s);

    std::vector<NodeSpec> nodes;
    nodes.reserve(n);
    for (std::uint32_t id = 0; id < n; ++id)
        nodes.push_back({id, {"N" + std::to_string(node_labels.draw(rng))}});

    auto decode = [&](std::uint64_t index) -> std::pair<NodeId, NodeId> {
        if (spec.allow_self_loops)
            return {static_cast<NodeId>(index / n), static_cast<NodeId>(index % n)};
        NodeId src = static_cast<NodeId>(index / (n - 1));
        std::uint64_t off = index % (n - 1);
        NodeId dst = static_cast<NodeId>(off >= src ? off + 1 : off);
        return {src, dst};
    };

    std::vector<std::pair<NodeId, NodeId>> endpoints;
    endpoints.reserve(spec.edge_count);
    if (spec.allow_parallel_edges) {
        for (std::uint32_t i = 0; i < spec.edge_count; ++i)
            endpoints.push_back(decode(detail::bounded(rng, pair_space)));
    } else {
        // Floyd's sampling: edge_count distinct indices from the pair space,
        // uniformly, in O(edge_count) draws.
        std::unordered_set<std::uint64_t> chosen;
        chosen.reserve(spec.edge_count * 2);
        for (std::uint64_t j = pair_space - spec.edge_count; j < pair_space; ++j) {
            std::uint64_t t = detail::bounded(rng, j + 1);
            if (!chosen.insert(t).second) chosen.insert(j);
        }
        std::vector<std::uint64_t> indices(chosen.begin(), chosen.end());
        std::sort(indices.begin(), indices.end());
        for (std::uint64_t index : indices) endpoints.push_back(decode(index));
    }

    std::vector<EdgeSpec> edges;
    edges.reserve(spec.edge_count);
    for (std::uint32_t id = 0; id < spec.edge_count; ++id)
        edges.push_back({id, endpoints[id].first, endpoints[id].second,
                         {"R" + std::to_string(edge_labels.draw(rng))}});

    return build_graph(nodes, edges);
}

enum class QueryKind { Path, Complex };

struct WorkloadSpec {
    QueryKind kind = QueryKind::Path;
    /// Path: number of nodes on the path (edges = length - 1).
    std::uint32_t path_length = 5;
    /// Complex: nodes in the connected subset; edges = nodes - 1 + extra.
    std::uint32_t complex_nodes = 4;
    std::uint32_t complex_extra_edges = 1;
    std::uint32_t count = 1;
    std::uint64_t seed = 0;
    /// Relabels one node with a random label from the graph's alphabet after
    /// extraction, so the query may have no embedding at all.
    bool perturb = false;
};

namespace detail {

struct Extracted {
    std::vector<NodeId> nodes;   // db ids, discovery order; query id = position
    std::vector<EdgeId> edges;   // db ids, ascending
};

/// Directed path of `length` distinct nodes: uniform start, then a uniform
/// outgoing edge to an unvisited node at each step. Returns false on a dead
/// end.
inline bool try_extract_path(const Graph& g, std::uint32_t length, std::mt19937_64& rng,
                             Extracted& out) {
    out.nodes.clear();
    out.edges.clear();
    std::unordered_set<NodeId> visited;
    NodeId cur = static_cast<NodeId>(bounded(rng, g.node_count()));
    out.nodes.push_back(cur);
    visited.insert(cur);
    while (out.nodes.size() < length) {
        std::vector<const AdjEntry*> options;
        for (const AdjEntry& entry : g.adjacency(cur))
            if (entry.dir == Direction::Outgoing && !visited.count(entry.other))
                options.push_back(&entry);
        if (options.empty()) return false;
        const AdjEntry* step = options[bounded(rng, options.size())];
        out.edges.push_back(step->edge);
        cur = step->other;
        out.nodes.push_back(cur);
        visited.insert(cur);
    }
    std::sort(out.edges.begin(), out.edges.end());
    return true;
}

/// Connected subset grown one uniform frontier edge at a time (the spanning
/// tree), then `extra` additional distinct induced edges. nodes-1+extra edges
/// on `nodes` nodes guarantee a cycle in the underlying multigraph once
/// extra >= 1.
inline bool try_extract_complex(const Graph& g, std::uint32_t nodes, std::uint32_t extra,
                                std::mt19937_64& rng, Extracted& out) {
    out.nodes.clear();
    out.edges.clear();
    std::unordered_set<NodeId> visited;
    std::unordered_set<EdgeId> tree;
    NodeId start = static_cast<NodeId>(bounded(rng, g.node_count()));
    out.nodes.push_back(start);
    visited.insert(start);
    while (out.nodes.size() < nodes) {
        std::vector<std::pair<EdgeId, NodeId>> frontier;
        for (NodeId v : out.nodes)
            for (const AdjEntry& entry : g.adjacency(v))
                if (!visited.count(entry.other)) frontier.push_back({entry.edge, entry.other});
        if (frontier.empty()) return false;
        auto [edge, node] = frontier[bounded(rng, frontier.size())];
        tree.insert(edge);
        out.nodes.push_back(node);
        visited.insert(node);
    }

    std::vector<EdgeId> pool;
    for (NodeId v : out.nodes)
        for (const AdjEntry& entry : g.adjacency(v))
            if (entry.dir == Direction::Outgoing && visited.count(entry.other) &&
                !tree.count(entry.edge))
                pool.push_back(entry.edge);
    std::sort(pool.begin(), pool.end());
    if (pool.size() < extra) return false;
    for (std::uint32_t i = 0; i < extra; ++i) {
        std::size_t j = i + bounded(rng, pool.size() - i);
        std::swap(pool[i], pool[j]);
    }

    out.edges.assign(tree.begin(), tree.end());
    out.edges.insert(out.edges.end(), pool.begin(), pool.begin() + extra);
    std::sort(out.edges.begin(), out.edges.end());
    return true;
}

inline std::vector<std::string> label_names_of(const Graph& g, const LabelSet& labels) {
    std::vector<std::string> names;
    names.reserve(labels.size());
    for (LabelId id : labels.ids()) names.push_back(g.labels().name(id));
    std::sort(names.begin(), names.end());
    return names;
}

inline QueryGraph materialize(const Graph& g, const Extracted& ex, bool perturb,
                              std::mt19937_64& rng) {
    std::vector<NodeId> relabel(g.node_count(), kNoNode);
    std::vector<NodeSpec> nodes;
    nodes.reserve(ex.nodes.size());
    for (std::size_t i = 0; i < ex.nodes.size(); ++i) {
        relabel[ex.nodes[i]] = static_cast<NodeId>(i);
        nodes.push_back({static_cast<NodeId>(i), label_names_of(g, g.node(ex.nodes[i]).labels)});
    }
    std::vector<EdgeSpec> edges;
    edges.reserve(ex.edges.size());
    for (std::size_t i = 0; i < ex.edges.size(); ++i) {
        const Edge& e = g.edge(ex.edges[i]);
        edges.push_back({static_cast<EdgeId>(i), relabel[e.src], relabel[e.dst],
                         label_names_of(g, e.labels)});
    }
    if (perturb) {
        std::vector<std::string> alphabet;
        for (NodeId v = 0; v < g.node_count(); ++v)
            for (LabelId id : g.node(v).labels.ids()) alphabet.push_back(g.labels().name(id));
        std::sort(alphabet.begin(), alphabet.end());
        alphabet.erase(std::unique(alphabet.begin(), alphabet.end()), alphabet.end());
        if (!alphabet.empty()) {
            std::size_t victim = bounded(rng, nodes.size());
            nodes[victim].labels = {alphabet[bounded(rng, alphabet.size())]};
        }
    }
    return build_query(nodes, edges);
}

}  // namespace detail

/// Extracts `spec.count` queries from g, seeded by spec.seed. Each query is a
/// copied subgraph with dense ids in discovery order and full label sets, so
/// without perturbation the identity placement is an embedding and match_all
/// finds at least one result. Gives up after bounded retries per query.
inline std::vector<QueryGraph> extract_workload(const Graph& g, const WorkloadSpec& spec) {
    if (g.node_count() == 0)
        throw Error(ErrorCode::ExtractionFailed, "cannot extract from an empty graph");
    std::uint32_t want_nodes =
        spec.kind == QueryKind::Path ? spec.path_length : spec.complex_nodes;
    if (want_nodes == 0) throw Error(ErrorCode::ExtractionFailed, "query size must be positive");
    if (want_nodes > g.node_count())
        throw Error(ErrorCode::ExtractionFailed, "query larger than the graph");

    std::mt19937_64 rng(spec.seed);
    std::vector<QueryGraph> out;
    out.reserve(spec.count);
    detail::Extracted ex;
    constexpr int kMaxAttempts = 2000;
    for (std::uint32_t i = 0; i < spec.count; ++i) {
        bool got = false;
        for (int attempt = 0; attempt < kMaxAttempts && !got; ++attempt) {
            if (spec.kind == QueryKind::Path)
                got = detail::try_extract_path(g, spec.path_length, rng, ex);
            else
                got = detail::try_extract_complex(g, spec.complex_nodes, spec.complex_extra_edges,
                                                  rng, ex);
        }
        if (!got)
            throw Error(ErrorCode::ExtractionFailed,
                        "no suitable subgraph found for query " + std::to_string(i) + " after " +
                            std::to_string(kMaxAttempts) + " attempts");
        out.push_back(detail::materialize(g, ex, spec.perturb, rng));
    }
    return out;
}

inline QueryGraph extract_query(const Graph& g, const WorkloadSpec& spec) {
    WorkloadSpec one = spec;
    one.count = 1;
    return std::move(extract_workload(g, one).front());
}

}  // namespace bbgraph
