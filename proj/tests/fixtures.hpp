#pragma once

#include <vector>

#include "bbgraph/graph.hpp"
#include "bbgraph/matcher.hpp"

// Shared reference instance: a 4-node query whose underlying undirected graph
// contains one triangle, against a 10-node database in which it embeds
// exactly twice. Mirrors tests/data/sample_graph.json and sample_query.json.
namespace fixtures {

inline std::vector<bbgraph::NodeSpec> sample_query_nodes() {
    return {{0, {"A"}}, {1, {"B"}}, {2, {"B"}}, {3, {"D"}}};
}

inline std::vector<bbgraph::EdgeSpec> sample_query_edges() {
    return {{0, 0, 2, {}}, {1, 1, 0, {}}, {2, 1, 2, {}}, {3, 2, 3, {}}};
}

inline std::vector<bbgraph::NodeSpec> sample_graph_nodes() {
    return {{0, {"B"}}, {1, {"A"}}, {2, {"B"}}, {3, {"B"}}, {4, {"D"}},
            {5, {"C"}}, {6, {"A"}}, {7, {"B"}}, {8, {"D"}}, {9, {"A"}}};
}

inline std::vector<bbgraph::EdgeSpec> sample_graph_edges() {
    return {{0, 0, 1, {}}, {1, 0, 3, {}},  {2, 0, 5, {}},  {3, 1, 3, {}},
            {4, 2, 1, {}}, {5, 2, 3, {}},  {6, 3, 4, {}},  {7, 6, 0, {}},
            {8, 7, 0, {}}, {9, 7, 6, {}},  {10, 7, 8, {}}, {11, 7, 9, {}}};
}

inline bbgraph::Graph sample_graph() {
    return bbgraph::build_graph(sample_graph_nodes(), sample_graph_edges());
}

inline bbgraph::QueryGraph sample_query() {
    return bbgraph::build_query(sample_query_nodes(), sample_query_edges());
}

/// The two embeddings of the sample query, in the matcher's emission order.
inline std::vector<bbgraph::Embedding> sample_embeddings() {
    return {
        {{1, 0, 3, 4}, {3, 0, 1, 6}},
        {{1, 2, 3, 4}, {3, 4, 5, 6}},
    };
}

}  // namespace fixtures
