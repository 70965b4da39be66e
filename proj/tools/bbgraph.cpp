#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bbgraph/bbgraph.hpp"

namespace fs = std::filesystem;
using namespace bbgraph;

namespace {

// Exit codes are a stable contract: 2 unreadable input, 3 invalid input,
// 4 runtime failure, 5 invalid embedding. Usage errors follow CLI11.
int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::ParseError:
        case ErrorCode::IoError:
            return 2;
        case ErrorCode::DuplicateId:
        case ErrorCode::NonDenseIds:
        case ErrorCode::DanglingEndpoint:
        case ErrorCode::UnknownNode:
        case ErrorCode::UnknownEdge:
        case ErrorCode::EdgeNotIncident:
        case ErrorCode::EmptyQuery:
        case ErrorCode::DisconnectedQuery:
        case ErrorCode::ValidationError:
        case ErrorCode::InfeasibleSpec:
            return 3;
        case ErrorCode::InvalidEmbedding:
            return 5;
        case ErrorCode::Timeout:
        case ErrorCode::BudgetExceeded:
        case ErrorCode::ExtractionFailed:
            return 4;
    }
    return 4;
}

struct MatchArgs {
    std::string graph;
    std::string query;
    std::string start = "first";
    std::optional<std::uint64_t> limit;
    std::string out;
    bool counters = false;
    bool dedup = false;
};

struct OracleArgs {
    std::string graph;
    std::string query;
    std::uint64_t budget = 200'000'000;
    std::string out;
};

struct GenerateArgs {
    std::uint32_t nodes = 0;
    std::uint32_t edges = 0;
    std::uint32_t node_labels = 14;
    std::uint32_t edge_labels = 18;
    std::string dist = "uniform";
    double zipf_s = 1.0;
    std::uint64_t seed = 0;
    bool no_self_loops = false;
    bool no_parallel = false;
    std::string out;
};

struct ExtractArgs {
    std::string graph;
    std::string kind = "path";
    std::uint32_t length = 5;
    std::uint32_t nodes = 4;
    std::uint32_t extra = 1;
    std::uint32_t count = 1;
    std::uint64_t seed = 0;
    bool perturb = false;
    std::string out;
    std::string manifest;
};

struct BenchArgs {
    std::string graph;
    std::string workload;
    std::string matchers = "bbgraph,global";
    std::uint32_t reps = 10;
    double timeout = 1800.0;
    std::string start = "first";
    std::uint64_t oracle_budget = 200'000'000;
    std::string out = "report.json";
};

struct ValidateArgs {
    std::string graph;
    std::string query;
    std::string results;
};

StartStrategy parse_start(const std::string& name) {
    if (name == "first") return StartStrategy::FirstNode;
    if (name == "rarest") return StartStrategy::RarestLabel;
    throw Error(ErrorCode::ValidationError, "unknown start strategy \"" + name + "\"");
}

void print_summary(const char* matcher, const MatchResult& result, double elapsed_ms,
                   bool with_counters) {
    std::printf("%s: embeddings=%zu elapsed_ms=%.3f", matcher, result.embeddings.size(),
                elapsed_ms);
    if (with_counters) {
        const Counters& c = result.counters;
        std::printf(" checks=%llu backtracks=%llu max_depth=%llu peak_cells=%llu",
                    (unsigned long long)c.checks, (unsigned long long)c.backtracks,
                    (unsigned long long)c.max_recursion_depth,
                    (unsigned long long)c.peak_candidate_cells);
    }
    std::printf("\n");
}

int cmd_match(const MatchArgs& args) {
    Graph g = load_graph(args.graph);
    QueryGraph q = load_query(args.query);
    SearchConfig cfg;
    cfg.start_strategy = parse_start(args.start);
    cfg.result_limit = args.limit;
    cfg.collect_counters = args.counters;

    auto t0 = std::chrono::steady_clock::now();
    MatchResult result = match_all(q, g, cfg);
    double elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

    if (args.dedup) result.embeddings = dedup_by_matched_elements(result.embeddings);
    print_summary("bbgraph", result, elapsed_ms, args.counters);
    if (!args.out.empty())
        write_results(result, {args.graph, args.query, "bbgraph", elapsed_ms}, args.out);
    return 0;
}

int cmd_oracle(const OracleArgs& args) {
    Graph g = load_graph(args.graph);
    QueryGraph q = load_query(args.query);
    OracleBudget budget;
    budget.max_mappings_explored = args.budget;

    auto t0 = std::chrono::steady_clock::now();
    MatchResult result;
    result.embeddings = oracle_enumerate(q, g, budget);
    double elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

    print_summary("oracle", result, elapsed_ms, false);
    if (!args.out.empty())
        write_results(result, {args.graph, args.query, "oracle", elapsed_ms}, args.out);
    return 0;
}

int cmd_global(const MatchArgs& args) {
    Graph g = load_graph(args.graph);
    QueryGraph q = load_query(args.query);
    GlobalConfig cfg;
    cfg.result_limit = args.limit;

    auto t0 = std::chrono::steady_clock::now();
    MatchResult result = global_candidate_match(q, g, cfg);
    double elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

    print_summary("global", result, elapsed_ms, args.counters);
    if (!args.out.empty())
        write_results(result, {args.graph, args.query, "global", elapsed_ms}, args.out);
    return 0;
}

int cmd_generate(const GenerateArgs& args) {
    GenSpec spec;
    spec.node_count = args.nodes;
    spec.edge_count = args.edges;
    spec.node_label_alphabet = args.node_labels;
    spec.edge_label_alphabet = args.edge_labels;
    if (args.dist == "uniform")
        spec.label_distribution = LabelDistribution::Uniform;
    else if (args.dist == "zipf")
        spec.label_distribution = LabelDistribution::Zipf;
    else
        throw Error(ErrorCode::ValidationError, "unknown distribution \"" + args.dist + "\"");
    spec.zipf_s = args.zipf_s;
    spec.seed = args.seed;
    spec.allow_self_loops = !args.no_self_loops;
    spec.allow_parallel_edges = !args.no_parallel;

    Graph g = generate_graph(spec);
    write_graph(g, args.out);
    std::printf("generate: nodes=%zu edges=%zu -> %s\n", g.node_count(), g.edge_count(),
                args.out.c_str());
    return 0;
}

int cmd_extract(const ExtractArgs& args) {
    Graph g = load_graph(args.graph);
    WorkloadSpec spec;
    if (args.kind == "path")
        spec.kind = QueryKind::Path;
    else if (args.kind == "complex")
        spec.kind = QueryKind::Complex;
    else
        throw Error(ErrorCode::ValidationError, "unknown query kind \"" + args.kind + "\"");
    spec.path_length = args.length;
    spec.complex_nodes = args.nodes;
    spec.complex_extra_edges = args.extra;
    spec.count = args.count;
    spec.seed = args.seed;
    spec.perturb = args.perturb;

    std::vector<QueryGraph> queries = extract_workload(g, spec);

    fs::path base(args.out);
    std::vector<std::string> written;
    for (std::size_t i = 0; i < queries.size(); ++i) {
        fs::path target = base;
        if (queries.size() > 1) {
            fs::path named = base.parent_path() /
                             (base.stem().string() + "_" + std::to_string(i));
            named += base.extension();
            target = named;
        }
        write_query(queries[i], target);
        written.push_back(target.string());
    }
    if (!args.manifest.empty()) {
        ordered_json doc;
        doc["kind"] = "workload";
        doc["queries"] = written;
        detail::write_file(args.manifest, doc);
    }
    std::printf("extract: queries=%zu -> %s\n", queries.size(),
                queries.size() == 1 ? written.front().c_str() : base.c_str());
    return 0;
}

std::vector<WorkloadItem> load_workload(const fs::path& manifest_path) {
    ordered_json doc = detail::parse_file(manifest_path);
    if (!doc.is_object() || !doc.contains("queries") || !doc.at("queries").is_array())
        throw Error(ErrorCode::ValidationError,
                    manifest_path.string() + ": missing \"queries\" array");
    std::vector<WorkloadItem> items;
    for (const ordered_json& entry : doc.at("queries")) {
        if (!entry.is_string())
            throw Error(ErrorCode::ValidationError,
                        manifest_path.string() + ": query entries must be file paths");
        fs::path p = entry.get<std::string>();
        if (p.is_relative()) p = manifest_path.parent_path() / p;
        items.push_back({p.stem().string(), load_query(p)});
    }
    return items;
}

int cmd_bench(const BenchArgs& args) {
    Graph g = load_graph(args.graph);
    std::vector<WorkloadItem> workload = load_workload(args.workload);

    BenchOptions opts;
    opts.matchers.clear();
    std::stringstream ss(args.matchers);
    std::string name;
    while (std::getline(ss, name, ',')) {
        std::optional<MatcherKind> kind = matcher_from_name(name);
        if (!kind) throw Error(ErrorCode::ValidationError, "unknown matcher \"" + name + "\"");
        opts.matchers.push_back(*kind);
    }
    if (opts.matchers.empty())
        throw Error(ErrorCode::ValidationError, "matcher list is empty");
    opts.repetitions = args.reps;
    opts.timeout_seconds = args.timeout;
    opts.start_strategy = parse_start(args.start);
    opts.oracle_budget = args.oracle_budget;

    BenchResult result = run_bench(g, fs::path(args.graph).stem().string(), workload, opts);

    fs::path json_path(args.out);
    fs::path table_path = json_path;
    table_path.replace_extension(".tsv");
    write_report(result, json_path, table_path);

    std::size_t agree = 0;
    for (const BenchQuery& row : result.queries) agree += row.agreement ? 1 : 0;
    std::printf("bench: queries=%zu agreement=%zu/%zu -> %s, %s\n", result.queries.size(), agree,
                result.queries.size(), json_path.c_str(), table_path.c_str());
    return 0;
}

int cmd_validate(const ValidateArgs& args) {
    Graph g = load_graph(args.graph);
    QueryGraph q = load_query(args.query);
    std::vector<Embedding> embeddings = load_results(args.results);
    for (std::size_t i = 0; i < embeddings.size(); ++i) {
        std::optional<std::string> violation = validate_embedding(q, g, embeddings[i]);
        if (violation)
            throw Error(ErrorCode::InvalidEmbedding,
                        "embedding " + std::to_string(i) + ": " + *violation);
    }
    std::printf("validate: embeddings=%zu all valid\n", embeddings.size());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact subgraph matching on labeled directed multigraphs"};
    app.require_subcommand(1);

    MatchArgs match_args;
    CLI::App* match = app.add_subcommand("match", "Enumerate embeddings of a query in a graph");
    match->add_option("--graph", match_args.graph, "Graph file")->required();
    match->add_option("--query", match_args.query, "Query file")->required();
    match->add_option("--start", match_args.start, "Start strategy: first|rarest")
        ->default_val("first");
    match->add_option("--limit", match_args.limit, "Stop after N embeddings");
    match->add_option("--out", match_args.out, "Write ResultDocument here");
    match->add_flag("--counters", match_args.counters, "Print search counters");
    match->add_flag("--dedup", match_args.dedup,
                    "Collapse embeddings covering the same database elements");

    OracleArgs oracle_args;
    CLI::App* oracle = app.add_subcommand("oracle", "Brute-force reference enumeration");
    oracle->add_option("--graph", oracle_args.graph, "Graph file")->required();
    oracle->add_option("--query", oracle_args.query, "Query file")->required();
    oracle->add_option("--budget", oracle_args.budget, "Max assignment attempts");
    oracle->add_option("--out", oracle_args.out, "Write ResultDocument here");

    MatchArgs global_args;
    CLI::App* global = app.add_subcommand("global", "Global-candidate baseline matcher");
    global->add_option("--graph", global_args.graph, "Graph file")->required();
    global->add_option("--query", global_args.query, "Query file")->required();
    global->add_option("--limit", global_args.limit, "Stop after N embeddings");
    global->add_option("--out", global_args.out, "Write ResultDocument here");

    GenerateArgs gen_args;
    CLI::App* generate = app.add_subcommand("generate", "Generate a seeded random graph");
    generate->add_option("--nodes", gen_args.nodes, "Node count")->required();
    generate->add_option("--edges", gen_args.edges, "Edge count")->required();
    generate->add_option("--node-labels", gen_args.node_labels, "Node label alphabet size");
    generate->add_option("--edge-labels", gen_args.edge_labels, "Edge label alphabet size");
    generate->add_option("--dist", gen_args.dist, "Label distribution: uniform|zipf");
    generate->add_option("--zipf-s", gen_args.zipf_s, "Zipf exponent");
    generate->add_option("--seed", gen_args.seed, "Random seed");
    generate->add_flag("--no-self-loops", gen_args.no_self_loops, "Forbid self-loops");
    generate->add_flag("--no-parallel", gen_args.no_parallel, "Forbid parallel edges");
    generate->add_option("--out", gen_args.out, "Output graph file")->required();

    ExtractArgs extract_args;
    CLI::App* extract = app.add_subcommand("extract", "Extract query subgraphs from a graph");
    extract->add_option("--graph", extract_args.graph, "Graph file")->required();
    extract->add_option("--kind", extract_args.kind, "Query kind: path|complex");
    extract->add_option("--length", extract_args.length, "Path: node count");
    extract->add_option("--nodes", extract_args.nodes, "Complex: node count");
    extract->add_option("--extra", extract_args.extra, "Complex: extra edges beyond the tree");
    extract->add_option("--count", extract_args.count, "Number of queries");
    extract->add_option("--seed", extract_args.seed, "Random seed");
    extract->add_flag("--perturb", extract_args.perturb, "Relabel one node after extraction");
    extract->add_option("--out", extract_args.out,
                        "Output query file; with --count > 1, files get _0.._k suffixes")
        ->required();
    extract->add_option("--manifest", extract_args.manifest,
                        "Also write a workload manifest listing the query files");

    BenchArgs bench_args;
    CLI::App* bench = app.add_subcommand("bench", "Time matchers over a workload");
    bench->add_option("--graph", bench_args.graph, "Graph file")->required();
    bench->add_option("--workload", bench_args.workload, "Workload manifest file")->required();
    bench->add_option("--matchers", bench_args.matchers,
                      "Comma list of bbgraph|global|oracle");
    bench->add_option("--reps", bench_args.reps, "Repetitions per cell")->default_val(10);
    bench->add_option("--timeout", bench_args.timeout, "Per-run timeout in seconds")
        ->default_val(1800.0);
    bench->add_option("--start", bench_args.start, "Start strategy: first|rarest");
    bench->add_option("--oracle-budget", bench_args.oracle_budget, "Oracle assignment budget");
    bench->add_option("--out", bench_args.out, "Report file (a .tsv sibling is written too)");

    ValidateArgs validate_args;
    CLI::App* validate = app.add_subcommand("validate", "Re-verify a ResultDocument");
    validate->add_option("--graph", validate_args.graph, "Graph file")->required();
    validate->add_option("--query", validate_args.query, "Query file")->required();
    validate->add_option("--results", validate_args.results, "ResultDocument file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (match->parsed()) return cmd_match(match_args);
        if (oracle->parsed()) return cmd_oracle(oracle_args);
        if (global->parsed()) return cmd_global(global_args);
        if (generate->parsed()) return cmd_generate(gen_args);
        if (extract->parsed()) return cmd_extract(extract_args);
        if (bench->parsed()) return cmd_bench(bench_args);
        if (validate->parsed()) return cmd_validate(validate_args);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
