#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bbgraph/errors.hpp"
#include "bbgraph/graph.hpp"
#include "bbgraph/matcher.hpp"

namespace bbgraph {

using ordered_json = nlohmann::ordered_json;

namespace detail {

inline ordered_json parse_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
    try {
        return ordered_json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
    }
}

inline void write_file(const std::filesystem::path& path, const ordered_json& doc) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
    out << doc.dump(2) << '\n';
    if (!out) throw Error(ErrorCode::IoError, "write failed on " + path.string());
}

inline std::uint32_t require_uint(const ordered_json& value, const std::string& what) {
    if (!value.is_number_unsigned())
        throw Error(ErrorCode::ValidationError, what + " must be a non-negative integer");
    std::uint64_t n = value.get<std::uint64_t>();
    if (n >= static_cast<std::uint64_t>(kNoNode))
        throw Error(ErrorCode::ValidationError, what + " is out of range");
    return static_cast<std::uint32_t>(n);
}

inline std::vector<std::string> parse_labels(const ordered_json& obj, const std::string& what) {
    std::vector<std::string> labels;
    if (!obj.contains("labels")) return labels;
    const ordered_json& arr = obj.at("labels");
    if (!arr.is_array()) throw Error(ErrorCode::ValidationError, what + ".labels must be an array");
    for (const ordered_json& item : arr) {
        if (!item.is_string())
            throw Error(ErrorCode::ValidationError, what + ".labels entries must be strings");
        labels.push_back(item.get<std::string>());
    }
    return labels;
}

struct ParsedGraphFile {
    std::vector<NodeSpec> nodes;
    std::vector<EdgeSpec> edges;
    std::optional<NodeId> start;
};

inline ParsedGraphFile parse_graph_doc(const ordered_json& doc, const std::string& origin) {
    if (!doc.is_object())
        throw Error(ErrorCode::ValidationError, origin + ": top level must be an object");
    if (!doc.contains("nodes") || !doc.at("nodes").is_array())
        throw Error(ErrorCode::ValidationError, origin + ": missing \"nodes\" array");
    if (!doc.contains("edges") || !doc.at("edges").is_array())
        throw Error(ErrorCode::ValidationError, origin + ": missing \"edges\" array");

    ParsedGraphFile out;
    for (const ordered_json& item : doc.at("nodes")) {
        if (!item.is_object() || !item.contains("id"))
            throw Error(ErrorCode::ValidationError, origin + ": node entries need an \"id\"");
        NodeSpec spec;
        spec.id = require_uint(item.at("id"), origin + ": node id");
        spec.labels = parse_labels(item, origin + ": node " + std::to_string(spec.id));
        out.nodes.push_back(std::move(spec));
    }
    for (const ordered_json& item : doc.at("edges")) {
        if (!item.is_object() || !item.contains("id") || !item.contains("src") ||
            !item.contains("dst"))
            throw Error(ErrorCode::ValidationError,
                        origin + ": edge entries need \"id\", \"src\", \"dst\"");
        EdgeSpec spec;
        spec.id = require_uint(item.at("id"), origin + ": edge id");
        spec.src = require_uint(item.at("src"), origin + ": edge src");
        spec.dst = require_uint(item.at("dst"), origin + ": edge dst");
        spec.labels = parse_labels(item, origin + ": edge " + std::to_string(spec.id));
        out.edges.push_back(std::move(spec));
    }
    if (doc.contains("start")) out.start = require_uint(doc.at("start"), origin + ": start");
    return out;
}

inline ordered_json labels_json(const Graph& g, const LabelSet& labels) {
    std::vector<std::string> names;
    names.reserve(labels.size());
    for (LabelId id : labels.ids()) names.push_back(g.labels().name(id));
    std::sort(names.begin(), names.end());
    return ordered_json(names);
}

}  // namespace detail

/// Canonical serialization: nodes and edges ascending by id, labels sorted
/// lexicographically, two-space indent. Identical graphs produce identical
/// bytes.
inline ordered_json graph_to_json(const Graph& g, std::string_view kind = "graph",
                                  std::optional<NodeId> start = std::nullopt) {
    ordered_json doc;
    doc["kind"] = kind;
    if (start) doc["start"] = *start;
    doc["nodes"] = ordered_json::array();
    for (NodeId id = 0; id < g.node_count(); ++id) {
        ordered_json item;
        item["id"] = id;
        item["labels"] = detail::labels_json(g, g.node(id).labels);
        doc["nodes"].push_back(std::move(item));
    }
    doc["edges"] = ordered_json::array();
    for (EdgeId id = 0; id < g.edge_count(); ++id) {
        const Edge& e = g.edge(id);
        ordered_json item;
        item["id"] = id;
        item["src"] = e.src;
        item["dst"] = e.dst;
        item["labels"] = detail::labels_json(g, e.labels);
        doc["edges"].push_back(std::move(item));
    }
    return doc;
}

inline Graph load_graph(const std::filesystem::path& path) {
    detail::ParsedGraphFile parsed = detail::parse_graph_doc(detail::parse_file(path), path.string());
    return build_graph(parsed.nodes, parsed.edges);
}

/// Connectivity is enforced here, through build_query. An absent "start"
/// defaults to the node with the smallest id.
inline QueryGraph load_query(const std::filesystem::path& path) {
    detail::ParsedGraphFile parsed = detail::parse_graph_doc(detail::parse_file(path), path.string());
    return build_query(parsed.nodes, parsed.edges, parsed.start);
}

inline void write_graph(const Graph& g, const std::filesystem::path& path) {
    detail::write_file(path, graph_to_json(g));
}

inline void write_query(const QueryGraph& q, const std::filesystem::path& path) {
    detail::write_file(path, graph_to_json(q.graph(), "query", q.start_node()));
}

struct ResultMeta {
    std::string graph_file;
    std::string query_file;
    std::string matcher = "bbgraph";
    double elapsed_ms = 0.0;
};

/// Embeddings in matcher emission order; map keys are decimal query ids in
/// ascending order. With include_timing=false the output is a pure function
/// of the inputs, which the determinism tests compare byte for byte.
inline ordered_json results_to_json(const MatchResult& result, const ResultMeta& meta,
                                    bool include_timing = true) {
    ordered_json doc;
    doc["kind"] = "results";
    doc["graph"] = meta.graph_file;
    doc["query"] = meta.query_file;
    doc["matcher"] = meta.matcher;
    if (include_timing) doc["elapsed_ms"] = meta.elapsed_ms;
    doc["embedding_count"] = result.embeddings.size();
    doc["counters"] = {
        {"checks", result.counters.checks},
        {"backtracks", result.counters.backtracks},
        {"max_recursion_depth", result.counters.max_recursion_depth},
        {"peak_candidate_cells", result.counters.peak_candidate_cells},
        {"snapshot_mismatches", result.counters.snapshot_mismatches},
    };
    doc["embeddings"] = ordered_json::array();
    for (const Embedding& emb : result.embeddings) {
        ordered_json item;
        item["nodes"] = ordered_json::object();
        for (NodeId u = 0; u < emb.node_map.size(); ++u)
            item["nodes"][std::to_string(u)] = emb.node_map[u];
        item["edges"] = ordered_json::object();
        for (EdgeId r = 0; r < emb.edge_map.size(); ++r)
            item["edges"][std::to_string(r)] = emb.edge_map[r];
        doc["embeddings"].push_back(std::move(item));
    }
    return doc;
}

inline void write_results(const MatchResult& result, const ResultMeta& meta,
                          const std::filesystem::path& path) {
    detail::write_file(path, results_to_json(result, meta));
}

/// Collapses embeddings that cover the same database nodes and edges, keeping
/// the first of each group in emission order. Query automorphisms produce
/// distinct mappings over one database subgraph; reporting can optionally
/// fold them with this.
inline std::vector<Embedding> dedup_by_matched_elements(const std::vector<Embedding>& embeddings) {
    std::set<std::pair<std::vector<NodeId>, std::vector<EdgeId>>> seen;
    std::vector<Embedding> out;
    for (const Embedding& emb : embeddings) {
        std::vector<NodeId> nodes = emb.node_map;
        std::vector<EdgeId> edges = emb.edge_map;
        std::sort(nodes.begin(), nodes.end());
        std::sort(edges.begin(), edges.end());
        if (seen.insert({std::move(nodes), std::move(edges)}).second) out.push_back(emb);
    }
    return out;
}

/// Reads back the embeddings of a ResultDocument. Sizes come from the largest
/// key present; gaps surface as out-of-range ids for the validator to reject.
inline std::vector<Embedding> load_results(const std::filesystem::path& path) {
    ordered_json doc = detail::parse_file(path);
    if (!doc.is_object() || !doc.contains("embeddings") || !doc.at("embeddings").is_array())
        throw Error(ErrorCode::ValidationError, path.string() + ": missing \"embeddings\" array");

    std::vector<Embedding> out;
    for (const ordered_json& item : doc.at("embeddings")) {
        if (!item.is_object() || !item.contains("nodes") || !item.contains("edges"))
            throw Error(ErrorCode::ValidationError,
                        path.string() + ": embedding entries need \"nodes\" and \"edges\"");
        auto parse_key = [&](const std::string& key) -> std::uint32_t {
            if (key.empty() || key.find_first_not_of("0123456789") != std::string::npos)
                throw Error(ErrorCode::ValidationError,
                            path.string() + ": map key \"" + key + "\" is not an id");
            unsigned long long n = std::stoull(key);
            if (n >= static_cast<unsigned long long>(kNoNode))
                throw Error(ErrorCode::ValidationError, path.string() + ": map key out of range");
            return static_cast<std::uint32_t>(n);
        };
        Embedding emb;
        for (const auto& [key, value] : item.at("nodes").items()) {
            std::uint32_t u = parse_key(key);
            std::uint32_t v = detail::require_uint(value, path.string() + ": node image");
            if (u >= emb.node_map.size()) emb.node_map.resize(u + 1, kNoNode);
            emb.node_map[u] = v;
        }
        for (const auto& [key, value] : item.at("edges").items()) {
            std::uint32_t r = parse_key(key);
            std::uint32_t e = detail::require_uint(value, path.string() + ": edge image");
            if (r >= emb.edge_map.size()) emb.edge_map.resize(r + 1, kNoEdge);
            emb.edge_map[r] = e;
        }
        out.push_back(std::move(emb));
    }
    return out;
}

/// Minimal CSV import for third-party edge lists: one "src,dst[,label]" per
/// line, node labels in a sidecar of "id,label" lines. Lines that are empty
/// or start with '#' are skipped. Edge ids follow line order.
inline Graph load_csv_graph(const std::filesystem::path& edges_path,
                            const std::filesystem::path& nodes_path) {
    auto fail = [](const std::filesystem::path& p, std::size_t line, const std::string& msg) {
        throw Error(ErrorCode::ParseError,
                    p.string() + ":" + std::to_string(line) + ": " + msg);
    };
    auto parse_id = [&](const std::string& field, const std::filesystem::path& p,
                        std::size_t line) -> std::uint32_t {
        if (field.empty() || field.find_first_not_of("0123456789") != std::string::npos)
            fail(p, line, "expected a non-negative integer, got \"" + field + "\"");
        unsigned long long n = std::stoull(field);
        if (n >= static_cast<unsigned long long>(kNoNode)) fail(p, line, "id out of range");
        return static_cast<std::uint32_t>(n);
    };
    auto split = [](const std::string& line) {
        std::vector<std::string> fields;
        std::string cur;
        std::stringstream ss(line);
        while (std::getline(ss, cur, ',')) fields.push_back(cur);
        if (!line.empty() && line.back() == ',') fields.push_back("");
        return fields;
    };
    std::map<std::uint32_t, std::vector<std::string>> node_labels;
    {
        std::ifstream in(nodes_path);
        if (!in) throw Error(ErrorCode::IoError, "cannot open " + nodes_path.string());
        std::string raw;
        std::size_t lineno = 0;
        while (std::getline(in, raw)) {
            ++lineno;
            if (!raw.empty() && raw.back() == '\r') raw.pop_back();
            if (raw.empty() || raw[0] == '#') continue;
            std::vector<std::string> fields = split(raw);
            if (fields.size() != 2) fail(nodes_path, lineno, "expected \"id,label\"");
            std::uint32_t id = parse_id(fields[0], nodes_path, lineno);
            if (!fields[1].empty()) node_labels[id].push_back(fields[1]);
            else node_labels[id];
        }
    }

    std::vector<EdgeSpec> edges;
    {
        std::ifstream in(edges_path);
        if (!in) throw Error(ErrorCode::IoError, "cannot open " + edges_path.string());
        std::string raw;
        std::size_t lineno = 0;
        while (std::getline(in, raw)) {
            ++lineno;
            if (!raw.empty() && raw.back() == '\r') raw.pop_back();
            if (raw.empty() || raw[0] == '#') continue;
            std::vector<std::string> fields = split(raw);
            if (fields.size() != 2 && fields.size() != 3)
                fail(edges_path, lineno, "expected \"src,dst[,label]\"");
            EdgeSpec spec;
            spec.id = static_cast<EdgeId>(edges.size());
            spec.src = parse_id(fields[0], edges_path, lineno);
            spec.dst = parse_id(fields[1], edges_path, lineno);
            if (fields.size() == 3 && !fields[2].empty()) spec.labels.push_back(fields[2]);
            edges.push_back(std::move(spec));
            node_labels[edges.back().src];
            node_labels[edges.back().dst];
        }
    }

    std::vector<NodeSpec> nodes;
    nodes.reserve(node_labels.size());
    for (auto& [id, labels] : node_labels) nodes.push_back({id, std::move(labels)});
    return build_graph(nodes, edges);
}

}  // namespace bbgraph
