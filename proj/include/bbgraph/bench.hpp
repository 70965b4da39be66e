#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "bbgraph/baselines.hpp"
#include "bbgraph/errors.hpp"
#include "bbgraph/graph.hpp"
#include "bbgraph/io.hpp"
#include "bbgraph/matcher.hpp"

namespace bbgraph {

enum class MatcherKind { BbGraph, Global, Oracle };
enum class CellStatus { Ok, Timeout, Error };

inline std::string_view matcher_name(MatcherKind kind) {
    switch (kind) {
        case MatcherKind::BbGraph: return "bbgraph";
        case MatcherKind::Global: return "global";
        case MatcherKind::Oracle: return "oracle";
    }
    return "?";
}

inline std::optional<MatcherKind> matcher_from_name(std::string_view name) {
    if (name == "bbgraph") return MatcherKind::BbGraph;
    if (name == "global") return MatcherKind::Global;
    if (name == "oracle") return MatcherKind::Oracle;
    return std::nullopt;
}

inline std::string_view status_name(CellStatus status) {
    switch (status) {
        case CellStatus::Ok: return "ok";
        case CellStatus::Timeout: return "timeout";
        case CellStatus::Error: return "error";
    }
    return "?";
}

struct BenchCell {
    MatcherKind matcher = MatcherKind::BbGraph;
    CellStatus status = CellStatus::Ok;
    /// Mean over repetitions; for Timeout cells this is the cutoff itself,
    /// following the "> cutoff" censoring convention.
    double mean_seconds = 0.0;
    std::uint64_t embedding_count = 0;
    Counters counters;
    std::string error;
};

struct BenchQuery {
    std::string id;
    std::uint32_t nodes = 0;
    std::uint32_t edges = 0;
    /// True iff every matcher that finished Ok returned the same embedding
    /// set. Timed-out or failed matchers don't vote.
    bool agreement = true;
    std::vector<BenchCell> cells;
};

struct BenchResult {
    std::string graph_id;
    std::uint32_t repetitions = 0;
    double timeout_seconds = 0.0;
    std::vector<BenchQuery> queries;
};

struct WorkloadItem {
    std::string id;
    QueryGraph query;
};

struct BenchOptions {
    std::vector<MatcherKind> matchers{MatcherKind::BbGraph, MatcherKind::Global};
    std::uint32_t repetitions = 10;
    double timeout_seconds = 1800.0;
    std::uint64_t oracle_budget = 200'000'000;
    StartStrategy start_strategy = StartStrategy::FirstNode;
};

namespace detail {

struct TimedRun {
    std::vector<Embedding> embeddings;
    Counters counters;
    double seconds = 0.0;
};

inline TimedRun run_matcher_once(MatcherKind kind, const QueryGraph& q, const Graph& g,
                                 const BenchOptions& opts) {
    auto deadline = std::chrono::steady_clock::now() +
                    std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                        std::chrono::duration<double>(opts.timeout_seconds));
    TimedRun run;
    auto t0 = std::chrono::steady_clock::now();
    switch (kind) {
        case MatcherKind::BbGraph: {
            SearchConfig cfg;
            cfg.start_strategy = opts.start_strategy;
            cfg.deadline = deadline;
            MatchResult res = match_all(q, g, cfg);
            run.embeddings = std::move(res.embeddings);
            run.counters = res.counters;
            break;
        }
        case MatcherKind::Global: {
            GlobalConfig cfg;
            cfg.deadline = deadline;
            MatchResult res = global_candidate_match(q, g, cfg);
            run.embeddings = std::move(res.embeddings);
            run.counters = res.counters;
            break;
        }
        case MatcherKind::Oracle: {
            OracleBudget budget;
            budget.max_mappings_explored = opts.oracle_budget;
            budget.deadline = deadline;
            run.embeddings = oracle_enumerate(q, g, budget);
            break;
        }
    }
    run.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return run;
}

}  // namespace detail

/// Times every (query, matcher) cell over opts.repetitions runs, serially, on
/// already-built graphs; construction and file I/O are outside the clock.
/// Timeouts and matcher failures land in the cell status instead of
/// propagating.
inline BenchResult run_bench(const Graph& g, const std::string& graph_id,
                             const std::vector<WorkloadItem>& workload,
                             const BenchOptions& opts) {
    BenchResult result;
    result.graph_id = graph_id;
    result.repetitions = std::max<std::uint32_t>(1, opts.repetitions);
    result.timeout_seconds = opts.timeout_seconds;

    for (const WorkloadItem& item : workload) {
        BenchQuery row;
        row.id = item.id;
        row.nodes = static_cast<std::uint32_t>(item.query.graph().node_count());
        row.edges = static_cast<std::uint32_t>(item.query.graph().edge_count());

        std::vector<std::vector<Embedding>> ok_sets;
        for (MatcherKind kind : opts.matchers) {
            BenchCell cell;
            cell.matcher = kind;
            double total = 0.0;
            std::vector<Embedding> first_run;
            for (std::uint32_t rep = 0; rep < result.repetitions; ++rep) {
                try {
                    detail::TimedRun run = detail::run_matcher_once(kind, item.query, g, opts);
                    total += run.seconds;
                    if (rep == 0) {
                        cell.embedding_count = run.embeddings.size();
                        cell.counters = run.counters;
                        std::sort(run.embeddings.begin(), run.embeddings.end());
                        first_run = std::move(run.embeddings);
                    }
                } catch (const Error& e) {
                    if (e.code() == ErrorCode::Timeout) {
                        cell.status = CellStatus::Timeout;
                        cell.mean_seconds = opts.timeout_seconds;
                    } else {
                        cell.status = CellStatus::Error;
                        cell.error = e.what();
                    }
                    cell.embedding_count = 0;
                    break;
                } catch (const std::exception& e) {
                    cell.status = CellStatus::Error;
                    cell.error = e.what();
                    cell.embedding_count = 0;
                    break;
                }
            }
            if (cell.status == CellStatus::Ok) {
                cell.mean_seconds = total / result.repetitions;
                ok_sets.push_back(std::move(first_run));
            }
            row.cells.push_back(std::move(cell));
        }

        row.agreement = true;
        for (std::size_t i = 1; i < ok_sets.size(); ++i)
            if (ok_sets[i] != ok_sets[0]) row.agreement = false;

        result.queries.push_back(std::move(row));
    }
    return result;
}

inline ordered_json report_to_json(const BenchResult& result) {
    ordered_json doc;
    doc["kind"] = "bench_report";
    doc["graph"] = result.graph_id;
    doc["repetitions"] = result.repetitions;
    doc["timeout_seconds"] = result.timeout_seconds;
    doc["queries"] = ordered_json::array();
    for (const BenchQuery& row : result.queries) {
        ordered_json q;
        q["query"] = row.id;
        q["nodes"] = row.nodes;
        q["edges"] = row.edges;
        q["agreement"] = row.agreement;
        q["cells"] = ordered_json::array();
        for (const BenchCell& cell : row.cells) {
            ordered_json c;
            c["matcher"] = matcher_name(cell.matcher);
            c["status"] = status_name(cell.status);
            c["mean_seconds"] = cell.mean_seconds;
            c["embedding_count"] = cell.embedding_count;
            c["counters"] = {
                {"checks", cell.counters.checks},
                {"backtracks", cell.counters.backtracks},
                {"max_recursion_depth", cell.counters.max_recursion_depth},
                {"peak_candidate_cells", cell.counters.peak_candidate_cells},
            };
            if (!cell.error.empty()) c["error"] = cell.error;
            q["cells"].push_back(std::move(c));
        }
        doc["queries"].push_back(std::move(q));
    }
    return doc;
}

/// One row per (query, matcher) cell, tab-separated:
/// query, graph, nodes, edges, matcher, mean_seconds, embedding_count, status.
inline std::string report_table(const BenchResult& result) {
    std::string out = "query\tgraph\tnodes\tedges\tmatcher\tmean_seconds\tembedding_count\tstatus\n";
    char buf[64];
    for (const BenchQuery& row : result.queries) {
        for (const BenchCell& cell : row.cells) {
            std::snprintf(buf, sizeof buf, "%.6f", cell.mean_seconds);
            out += row.id + '\t' + result.graph_id + '\t' + std::to_string(row.nodes) + '\t' +
                   std::to_string(row.edges) + '\t' + std::string(matcher_name(cell.matcher)) +
                   '\t' + buf + '\t' + std::to_string(cell.embedding_count) + '\t' +
                   std::string(status_name(cell.status)) + '\n';
        }
    }
    return out;
}

/// Writes the structured document to json_path and the table to table_path.
inline void write_report(const BenchResult& result, const std::filesystem::path& json_path,
                         const std::filesystem::path& table_path) {
    detail::write_file(json_path, report_to_json(result));
    std::ofstream table(table_path, std::ios::binary | std::ios::trunc);
    if (!table) throw Error(ErrorCode::IoError, "cannot open " + table_path.string());
    table << report_table(result);
    if (!table) throw Error(ErrorCode::IoError, "write failed on " + table_path.string());
}

}  // namespace bbgraph
