// End-to-end acceptance checks. Each criterion prints exactly one
// [PASS]/[FAIL] line on stdout; the exit code is the number of failures.
// Progress chatter goes to stderr.

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "bbgraph/bbgraph.hpp"
#include "fixtures.hpp"

using namespace bbgraph;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<Embedding> sorted(std::vector<Embedding> embs) {
    std::sort(embs.begin(), embs.end());
    return embs;
}

struct Criterion {
    bool pass = false;
    std::string detail;
};

// Aggregates fed by the corpus criteria and reported by criteria 4, 5, and 8.
struct RunAudit {
    std::uint64_t state_runs = 0;
    std::uint64_t state_clean = 0;
    std::uint64_t verified_runs = 0;
    std::uint64_t snapshot_mismatches = 0;
    std::uint64_t bound_runs = 0;
    std::uint64_t bound_ok = 0;
    std::uint64_t strategy_pairs = 0;
    std::uint64_t strategy_equal = 0;

    void observe_run(const Searcher& searcher, const MatchResult& res, const QueryGraph& q,
                     const Graph& g, bool verified) {
        ++state_runs;
        if (searcher.state().empty()) ++state_clean;
        if (verified) {
            ++verified_runs;
            snapshot_mismatches += res.counters.snapshot_mismatches;
        }
        ++bound_runs;
        std::uint64_t bound =
            std::uint64_t{q.graph().edge_count()} * std::uint64_t{g.max_degree()};
        if (res.counters.peak_candidate_cells <= bound) ++bound_ok;
    }
};

Criterion golden_instance(RunAudit& audit) {
    Graph g = load_graph(std::filesystem::path(TEST_DATA_DIR) / "sample_graph.json");
    QueryGraph q = load_query(std::filesystem::path(TEST_DATA_DIR) / "sample_query.json");

    SearchConfig cfg;
    cfg.verify_snapshots = true;
    Searcher searcher(q, g, cfg);
    auto t0 = Clock::now();
    MatchResult res = searcher.run();
    double elapsed = seconds_since(t0);
    audit.observe_run(searcher, res, q, g, true);

    bool pass = res.embeddings == fixtures::sample_embeddings() && elapsed < 1.0;
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "reference instance produced %zu embeddings (want the 2 golden) in %.3f ms",
                  res.embeddings.size(), elapsed * 1e3);
    return {pass, buf};
}

struct SmallCorpusOutcome {
    Criterion agreement;
    std::uint64_t instances = 0;
};

SmallCorpusOutcome small_corpus(RunAudit& audit) {
    constexpr std::uint64_t kWanted = 520;
    std::uint64_t agree = 0;
    std::uint64_t built = 0;
    auto t0 = Clock::now();

    for (std::uint64_t s = 0; built < kWanted && s < 5000; ++s) {
        GenSpec gen;
        gen.node_count = static_cast<std::uint32_t>(4 + s % 9);
        gen.edge_count = static_cast<std::uint32_t>(6 + (s * 7) % 15);
        gen.node_label_alphabet = static_cast<std::uint32_t>(2 + s % 3);
        gen.edge_label_alphabet = static_cast<std::uint32_t>(1 + s % 3);
        gen.seed = 9000 + s;
        Graph g = generate_graph(gen);

        WorkloadSpec w;
        if (s % 2) {
            w.kind = QueryKind::Path;
            w.path_length = static_cast<std::uint32_t>(1 + (s / 2) % 5);
        } else {
            w.kind = QueryKind::Complex;
            w.complex_nodes = static_cast<std::uint32_t>(3 + (s / 2) % 3);
            w.complex_extra_edges = 1;
        }
        w.seed = 100 + s;
        w.perturb = s % 3 == 0;

        std::optional<QueryGraph> extracted;
        try {
            extracted = extract_query(g, w);
        } catch (const Error&) {
            continue;  // no suitable subgraph under this seed; try the next
        }
        const QueryGraph& q = *extracted;
        ++built;

        std::vector<Embedding> reference = sorted(oracle_enumerate(q, g));

        SearchConfig first;
        first.verify_snapshots = true;
        Searcher s_first(q, g, first);
        MatchResult r_first = s_first.run();
        audit.observe_run(s_first, r_first, q, g, true);

        SearchConfig rare;
        rare.start_strategy = StartStrategy::RarestLabel;
        Searcher s_rare(q, g, rare);
        MatchResult r_rare = s_rare.run();
        audit.observe_run(s_rare, r_rare, q, g, false);

        MatchResult r_global = global_candidate_match(q, g);

        ++audit.strategy_pairs;
        std::vector<Embedding> engine = sorted(r_first.embeddings);
        if (engine == sorted(r_rare.embeddings)) ++audit.strategy_equal;
        if (engine == reference && sorted(r_global.embeddings) == reference) ++agree;
    }
    double elapsed = seconds_since(t0);

    SmallCorpusOutcome out;
    out.instances = built;
    bool pass = built >= 500 && agree == built && elapsed < 60.0;
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "%llu/%llu small instances agree across engine, global, and brute force "
                  "in %.2f s",
                  static_cast<unsigned long long>(agree),
                  static_cast<unsigned long long>(built), elapsed);
    out.agreement = {pass, buf};
    return out;
}

Criterion large_corpus(RunAudit& audit) {
    constexpr int kInstances = 100;
    int clean = 0;
    for (int i = 0; i < kInstances; ++i) {
        GenSpec gen;
        gen.node_count = 10000;
        gen.edge_count = 30000;
        gen.node_label_alphabet = 8;
        gen.edge_label_alphabet = 5;
        gen.seed = 20000 + static_cast<std::uint64_t>(i);
        Graph g = generate_graph(gen);

        WorkloadSpec w;
        if (i % 2) {
            w.kind = QueryKind::Path;
            w.path_length = static_cast<std::uint32_t>(4 + i % 3);
        } else {
            w.kind = QueryKind::Complex;
            w.complex_nodes = static_cast<std::uint32_t>(4 + i % 3);
            w.complex_extra_edges = static_cast<std::uint32_t>(1 + i % 2);
        }

        std::optional<QueryGraph> extracted;
        for (std::uint64_t bump = 0; bump < 50 && !extracted; ++bump) {
            w.seed = 500 + static_cast<std::uint64_t>(i) * 100 + bump;
            try {
                extracted = extract_query(g, w);
            } catch (const Error&) {
            }
        }
        if (!extracted) {
            std::fprintf(stderr, "  large instance %d: extraction failed\n", i);
            continue;
        }
        const QueryGraph& q = *extracted;

        SearchConfig cfg;
        cfg.result_limit = 20000;
        cfg.deadline = Clock::now() + std::chrono::seconds(60);
        Searcher searcher(q, g, cfg);
        MatchResult res = searcher.run();
        audit.observe_run(searcher, res, q, g, false);

        bool ok = !res.embeddings.empty();
        for (const Embedding& emb : res.embeddings)
            if (validate_embedding(q, g, emb)) ok = false;
        if (ok) ++clean;
        if (i % 20 == 19) std::fprintf(stderr, "  large corpus: %d/%d done\n", i + 1, kInstances);
    }
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "%d/%d large instances returned only validator-clean embeddings", clean,
                  kInstances);
    return {clean == kInstances, buf};
}

// The skewed benchmark graph plus its 20-query workload: 10 five-node paths
// and 10 cyclic subgraphs of 4..7 nodes. Queries whose full enumeration would
// exceed the screening caps are rejected and the extraction seed advances;
// everything here is a pure function of the constants, which is what the
// byte-reproducibility criterion leans on.
struct ZipfPass {
    Graph graph;
    std::vector<WorkloadItem> items;
    std::vector<std::string> documents;  // per query, timing stripped
    bool complete = false;
};

ZipfPass build_zipf_pass() {
    ZipfPass pass;
    GenSpec gen;
    gen.node_count = 50000;
    gen.edge_count = 150000;
    gen.node_label_alphabet = 12;
    gen.edge_label_alphabet = 17;
    gen.label_distribution = LabelDistribution::Zipf;
    gen.zipf_s = 1.0;
    gen.seed = 77;
    pass.graph = generate_graph(gen);

    pass.complete = true;
    for (int slot = 0; slot < 20; ++slot) {
        WorkloadSpec w;
        if (slot < 10) {
            w.kind = QueryKind::Path;
            w.path_length = 5;
        } else {
            w.kind = QueryKind::Complex;
            w.complex_nodes = static_cast<std::uint32_t>(4 + (slot - 10) % 4);
            w.complex_extra_edges = 1;
        }

        bool accepted = false;
        for (std::uint64_t bump = 0; bump < 200 && !accepted; ++bump) {
            w.seed = 1000 * static_cast<std::uint64_t>(slot + 1) + bump;
            try {
                QueryGraph q = extract_query(pass.graph, w);
                SearchConfig screen;
                screen.result_limit = 200000;
                screen.check_budget = 20'000'000;
                MatchResult res = match_all(q, pass.graph, screen);
                if (res.embeddings.size() >= 200000) continue;

                char id[8];
                std::snprintf(id, sizeof id, "q%02d", slot);
                ResultMeta meta;
                meta.graph_file = "zipf_graph.json";
                meta.query_file = std::string("workload_") + id + ".json";
                pass.documents.push_back(results_to_json(res, meta, false).dump());
                pass.items.push_back({id, std::move(q)});
                accepted = true;
            } catch (const Error&) {
                // extraction dead end or screening budget: advance the seed
            }
        }
        if (!accepted) {
            std::fprintf(stderr, "  workload slot %d: no acceptable query in 200 seeds\n", slot);
            pass.complete = false;
        }
    }
    return pass;
}

Criterion zipf_bench(const ZipfPass& pass) {
    if (!pass.complete || pass.items.size() != 20)
        return {false, "workload construction fell short of 20 queries"};

    BenchOptions opts;
    opts.matchers = {MatcherKind::BbGraph, MatcherKind::Global};
    opts.repetitions = 3;
    opts.timeout_seconds = 60.0;
    BenchResult bench = run_bench(pass.graph, "zipf_graph", pass.items, opts);

    int wins = 0;
    int engine_ok = 0;
    bool agreement = true;
    for (const BenchQuery& row : bench.queries) {
        const BenchCell& engine = row.cells[0];
        const BenchCell& global = row.cells[1];
        if (engine.status == CellStatus::Ok) ++engine_ok;
        if (engine.mean_seconds <= global.mean_seconds) ++wins;
        if (!row.agreement) agreement = false;
    }

    bool pass_ok = wins * 5 >= static_cast<int>(bench.queries.size()) * 4 &&
                   engine_ok == static_cast<int>(bench.queries.size()) && agreement;
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "engine mean <= global mean on %d/%zu skewed queries; %d/%zu engine runs ok",
                  wins, bench.queries.size(), engine_ok, bench.queries.size());
    return {pass_ok, buf};
}

Criterion zipf_reproducibility(const ZipfPass& first) {
    if (!first.complete) return {false, "first workload pass incomplete"};
    ZipfPass second = build_zipf_pass();
    if (!second.complete || second.documents.size() != first.documents.size())
        return {false, "second workload pass incomplete"};

    std::size_t identical = 0;
    for (std::size_t i = 0; i < first.documents.size(); ++i)
        if (first.documents[i] == second.documents[i]) ++identical;

    char buf[160];
    std::snprintf(buf, sizeof buf, "%zu/%zu regenerated result documents are byte-identical",
                  identical, first.documents.size());
    return {identical == first.documents.size(), buf};
}

}  // namespace

int main() {
    std::array<Criterion, 8> results;
    RunAudit audit;

    auto guard = [&](int idx, auto&& fn) {
        try {
            results[idx] = fn();
        } catch (const std::exception& e) {
            results[idx] = {false, std::string("unexpected exception: ") + e.what()};
        }
    };

    std::fprintf(stderr, "running golden instance...\n");
    guard(0, [&] { return golden_instance(audit); });

    std::fprintf(stderr, "running small-instance agreement corpus...\n");
    std::uint64_t small_count = 0;
    guard(1, [&] {
        SmallCorpusOutcome out = small_corpus(audit);
        small_count = out.instances;
        return out.agreement;
    });

    std::fprintf(stderr, "running large-instance validation corpus...\n");
    guard(2, [&] { return large_corpus(audit); });

    guard(3, [&] {
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "state empty after %llu/%llu runs; %llu snapshot mismatches across "
                      "%llu verified runs",
                      static_cast<unsigned long long>(audit.state_clean),
                      static_cast<unsigned long long>(audit.state_runs),
                      static_cast<unsigned long long>(audit.snapshot_mismatches),
                      static_cast<unsigned long long>(audit.verified_runs));
        bool ok = audit.state_runs > 0 && audit.state_clean == audit.state_runs &&
                  audit.verified_runs > 500 && audit.snapshot_mismatches == 0;
        return Criterion{ok, buf};
    });

    guard(4, [&] {
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "peak candidate cells within the query-edges x max-degree bound on "
                      "%llu/%llu runs",
                      static_cast<unsigned long long>(audit.bound_ok),
                      static_cast<unsigned long long>(audit.bound_runs));
        return Criterion{audit.bound_runs > 0 && audit.bound_ok == audit.bound_runs, buf};
    });

    std::fprintf(stderr, "building skewed benchmark workload (first pass)...\n");
    ZipfPass zipf;
    guard(5, [&] {
        zipf = build_zipf_pass();
        return zipf_bench(zipf);
    });

    std::fprintf(stderr, "rebuilding workload for the reproducibility check...\n");
    guard(6, [&] { return zipf_reproducibility(zipf); });

    guard(7, [&] {
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "start strategies returned equal sets on %llu/%llu instances",
                      static_cast<unsigned long long>(audit.strategy_equal),
                      static_cast<unsigned long long>(audit.strategy_pairs));
        bool ok = audit.strategy_pairs >= 500 && audit.strategy_equal == audit.strategy_pairs;
        (void)small_count;
        return Criterion{ok, buf};
    });

    int fails = 0;
    for (std::size_t i = 0; i < results.size(); ++i) {
        if (!results[i].pass) ++fails;
        std::printf("[%s] criterion %zu: %s\n", results[i].pass ? "PASS" : "FAIL", i + 1,
                    results[i].detail.c_str());
    }
    return fails;
}
