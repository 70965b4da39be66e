#include <algorithm>
#include <chrono>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "bbgraph/baselines.hpp"
#include "bbgraph/generator.hpp"
#include "bbgraph/validate.hpp"
#include "fixtures.hpp"

using namespace bbgraph;

namespace {

std::vector<Embedding> sorted(std::vector<Embedding> embs) {
    std::sort(embs.begin(), embs.end());
    return embs;
}

struct Instance {
    Graph g;
    QueryGraph q;
};

Instance random_instance(std::uint64_t seed) {
    GenSpec gen;
    gen.node_count = 8;
    gen.edge_count = 14;
    gen.node_label_alphabet = 3;
    gen.edge_label_alphabet = 2;
    gen.seed = seed;
    Graph g = generate_graph(gen);

    WorkloadSpec w;
    w.kind = seed % 2 ? QueryKind::Path : QueryKind::Complex;
    w.path_length = 2 + seed % 3;
    w.complex_nodes = 3 + seed % 2;
    w.complex_extra_edges = 1;
    w.seed = seed * 131 + 5;
    w.perturb = seed % 4 == 0;
    QueryGraph q = extract_query(g, w);
    return {std::move(g), std::move(q)};
}

}  // namespace

TEST_CASE("brute force agrees with the reference instance's answer set") {
    Graph g = fixtures::sample_graph();
    QueryGraph q = fixtures::sample_query();
    REQUIRE(sorted(oracle_enumerate(q, g)) == sorted(fixtures::sample_embeddings()));
}

TEST_CASE("global-candidate matching agrees and reports its table size") {
    Graph g = fixtures::sample_graph();
    QueryGraph q = fixtures::sample_query();
    MatchResult res = global_candidate_match(q, g);
    REQUIRE(sorted(res.embeddings) == sorted(fixtures::sample_embeddings()));
    // Candidate lists: two A-starts, three B-fanouts, two B-joins, two D-sinks.
    REQUIRE(res.counters.peak_candidate_cells == 9);
    REQUIRE(res.counters.checks > 0);
    REQUIRE(res.counters.backtracks > 0);
    REQUIRE(res.counters.max_recursion_depth == 5);
}

TEST_CASE("all three matchers return the same answer set on seeded instances") {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        Instance inst = random_instance(seed);
        INFO("seed " << seed);
        std::vector<Embedding> reference = sorted(oracle_enumerate(inst.q, inst.g));
        REQUIRE(sorted(match_all(inst.q, inst.g).embeddings) == reference);
        REQUIRE(sorted(global_candidate_match(inst.q, inst.g).embeddings) == reference);
    }
}

TEST_CASE("every brute-force embedding passes the standalone validator") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        Instance inst = random_instance(seed);
        for (const Embedding& emb : oracle_enumerate(inst.q, inst.g)) {
            INFO("seed " << seed);
            REQUIRE_FALSE(validate_embedding(inst.q, inst.g, emb).has_value());
        }
    }
}

TEST_CASE("a query label absent from the database yields no embeddings anywhere") {
    Graph g = fixtures::sample_graph();
    QueryGraph q = build_query({{0, {"A"}}, {1, {"Zq"}}}, {{0, 0, 1, {}}});
    REQUIRE(oracle_enumerate(q, g).empty());
    REQUIRE(match_all(q, g).embeddings.empty());
    REQUIRE(global_candidate_match(q, g).embeddings.empty());
}

TEST_CASE("removing the only bridge edge empties the answer set") {
    // Same database as the reference instance minus the edge into the first
    // D-labeled sink; the remaining D node is only reachable from a source
    // whose in-degree is too small for the join position.
    std::vector<NodeSpec> nodes = fixtures::sample_graph_nodes();
    std::vector<EdgeSpec> edges;
    for (const EdgeSpec& e : fixtures::sample_graph_edges()) {
        if (e.src == 3 && e.dst == 4) continue;
        EdgeSpec copy = e;
        copy.id = static_cast<EdgeId>(edges.size());
        edges.push_back(copy);
    }
    Graph g = build_graph(nodes, edges);
    QueryGraph q = fixtures::sample_query();
    REQUIRE(oracle_enumerate(q, g).empty());
    REQUIRE(match_all(q, g).embeddings.empty());
    REQUIRE(global_candidate_match(q, g).embeddings.empty());
}

TEST_CASE("the brute-force mapping budget trips deterministically") {
    Graph g = fixtures::sample_graph();
    QueryGraph q = fixtures::sample_query();
    OracleBudget tiny;
    tiny.max_mappings_explored = 3;
    try {
        oracle_enumerate(q, g, tiny);
        FAIL("expected BudgetExceeded");
    } catch (const Error& e) {
        REQUIRE(e.code() == ErrorCode::BudgetExceeded);
    }

    OracleBudget roomy;
    roomy.max_mappings_explored = 1'000'000;
    REQUIRE(oracle_enumerate(q, g, roomy).size() == 2);
}

TEST_CASE("expired deadlines abort both baselines with a timeout error") {
    // Large enough that both enumerations pass the deadline-polling interval.
    GenSpec gen;
    gen.node_count = 400;
    gen.edge_count = 1600;
    gen.node_label_alphabet = 2;
    gen.edge_label_alphabet = 1;
    gen.seed = 11;
    Graph g = generate_graph(gen);
    WorkloadSpec w;
    w.kind = QueryKind::Path;
    w.path_length = 4;
    w.seed = 3;
    QueryGraph q = extract_query(g, w);

    auto past = std::chrono::steady_clock::now() - std::chrono::seconds(1);

    OracleBudget ob;
    ob.deadline = past;
    try {
        oracle_enumerate(q, g, ob);
        FAIL("expected Timeout");
    } catch (const Error& e) {
        REQUIRE(e.code() == ErrorCode::Timeout);
    }

    GlobalConfig gc;
    gc.deadline = past;
    try {
        global_candidate_match(q, g, gc);
        FAIL("expected Timeout");
    } catch (const Error& e) {
        REQUIRE(e.code() == ErrorCode::Timeout);
    }
}

TEST_CASE("the global matcher honors its result limit") {
    Graph g = fixtures::sample_graph();
    QueryGraph q = fixtures::sample_query();
    GlobalConfig cfg;
    cfg.result_limit = 1;
    MatchResult res = global_candidate_match(q, g, cfg);
    REQUIRE(res.embeddings.size() == 1);
    std::vector<Embedding> full = sorted(fixtures::sample_embeddings());
    REQUIRE(std::binary_search(full.begin(), full.end(), res.embeddings[0]));
}

TEST_CASE("baselines handle self-loops and parallel edges like the engine") {
    Graph g = build_graph({{0, {"A"}}, {1, {"A"}}},
                          {{0, 0, 0, {"x"}}, {1, 0, 1, {"x"}}, {2, 0, 1, {"x"}}});

    QueryGraph loop = build_query({{0, {"A"}}}, {{0, 0, 0, {"x"}}});
    std::vector<Embedding> expect_loop = {{{0}, {0}}};
    REQUIRE(sorted(oracle_enumerate(loop, g)) == expect_loop);
    REQUIRE(sorted(match_all(loop, g).embeddings) == expect_loop);
    REQUIRE(sorted(global_candidate_match(loop, g).embeddings) == expect_loop);

    QueryGraph twin = build_query({{0, {"A"}}, {1, {"A"}}},
                                  {{0, 0, 1, {"x"}}, {1, 0, 1, {"x"}}});
    std::vector<Embedding> expect_twin = {{{0, 1}, {1, 2}}, {{0, 1}, {2, 1}}};
    REQUIRE(sorted(oracle_enumerate(twin, g)) == expect_twin);
    REQUIRE(sorted(match_all(twin, g).embeddings) == expect_twin);
    REQUIRE(sorted(global_candidate_match(twin, g).embeddings) == expect_twin);
}
