#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "speedpart/centrality.hpp"
#include "speedpart/errors.hpp"
#include "speedpart/graph_io.hpp"
#include "speedpart/metrics.hpp"
#include "speedpart/pac_sim.hpp"
#include "speedpart/partitioner.hpp"
#include "speedpart/types.hpp"

using ordered_json = nlohmann::ordered_json;
using namespace speedpart;

namespace {

EdgeStream read_stream(const std::string& input, bool assume_sorted) {
    if (input == "-") return load_edges(std::cin, assume_sorted);
    return load_edges(input, assume_sorted);
}

void write_text(const std::string& path, const std::string& text) {
    if (path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("FileNotFound", "cannot open output file " + path);
    out << text;
}

void emit_json(const std::string& path, const ordered_json& j) {
    write_text(path, j.dump() + "\n");
}

// Flags shared by every subcommand that consumes an edge CSV.
struct StreamFlags {
    std::string input;
    bool assume_sorted = false;
    double train_frac = 0.7;
    double val_frac = 0.15;

    void attach(CLI::App* cmd) {
        cmd->add_option("--input", input, "edge CSV (src,dst,ts), - for stdin")->required();
        cmd->add_flag("--assume-sorted", assume_sorted, "trust the input's timestamp order");
        cmd->add_option("--train-frac", train_frac, "chronological train fraction");
        cmd->add_option("--val-frac", val_frac, "chronological validation fraction");
    }
};

struct PartitionFlags {
    StreamFlags stream;
    int parts = 0;
    double topk = 0.05;
    double beta = 0.5;
    double lambda = 1.0;
    double epsilon = 1.0;
    std::string mode = "sep";
    std::string partition_on = "all";
    std::uint64_t seed = 1;
    std::string output = "-";
};

ordered_json partition_config_json(const PartitionFlags& f) {
    return ordered_json{{"subcommand", "partition"},
                        {"input", f.stream.input},
                        {"assume_sorted", f.stream.assume_sorted},
                        {"train_frac", f.stream.train_frac},
                        {"val_frac", f.stream.val_frac},
                        {"partition_on", f.partition_on},
                        {"parts", f.parts},
                        {"topk", f.topk},
                        {"beta", f.beta},
                        {"lambda", f.lambda},
                        {"epsilon", f.epsilon},
                        {"mode", f.mode},
                        {"seed", f.seed},
                        {"output", f.output}};
}

int run_partition(const PartitionFlags& f) {
    EdgeStream full = read_stream(f.stream.input, f.stream.assume_sorted);
    EdgeStream part_stream = full;
    if (f.partition_on == "train")
        part_stream = chrono_split(full, f.stream.train_frac, f.stream.val_frac).train;

    PartitionAssignment pa;
    if (f.mode == "random") {
        pa = partition_random(part_stream, f.parts, f.seed);
        pa.k_eff = f.topk;
    } else {
        PartitionerConfig cfg;
        cfg.num_parts = f.parts;
        cfg.lambda = f.lambda;
        cfg.epsilon = f.epsilon;
        cfg.centrality = compute_centrality(part_stream, f.beta);
        cfg.hub_set = select_hubs(cfg.centrality, f.topk);
        pa = f.mode == "unrestricted" ? partition_unrestricted(part_stream, cfg)
                                      : partition_stream(part_stream, cfg);
    }

    ordered_json node_parts = ordered_json::object();
    for (NodeId i = 0; i < part_stream.node_count; ++i)
        node_parts[std::to_string(i)] = pa.node_parts[i];

    ordered_json out{{"config", partition_config_json(f)},
                     {"edge_part", pa.edge_part},
                     {"node_parts", node_parts},
                     {"shared", pa.shared},
                     {"discards", pa.discard_count}};
    emit_json(f.output, out);
    return 0;
}

struct LoadedAssignment {
    PartitionAssignment pa;
    ordered_json config;
};

const ordered_json& need(const ordered_json& j, const char* key, const char* what) {
    auto it = j.find(key);
    if (it == j.end())
        throw DataError("ParseError", std::string(what) + " is missing '" + key + "'");
    return *it;
}

LoadedAssignment load_assignment(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("FileNotFound", "cannot open assignment " + path);
    ordered_json j;
    try {
        j = ordered_json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw DataError("ParseError", std::string("assignment: ") + e.what());
    }

    LoadedAssignment la;
    la.config = need(j, "config", "assignment");
    const auto& np = need(j, "node_parts", "assignment");
    la.pa.node_parts.resize(np.size());
    NodeId idx = 0;
    for (const auto& [key, val] : np.items()) {
        NodeId id = 0;
        try {
            id = static_cast<NodeId>(std::stoul(key));
        } catch (const std::exception&) {
            throw DataError("ParseError", "node_parts key '" + key + "' is not a node id");
        }
        if (id >= la.pa.node_parts.size()) la.pa.node_parts.resize(id + 1);
        la.pa.node_parts[id] = val.get<std::vector<PartId>>();
        ++idx;
    }
    la.pa.edge_part = need(j, "edge_part", "assignment").get<std::vector<PartId>>();
    la.pa.shared = need(j, "shared", "assignment").get<std::vector<NodeId>>();
    la.pa.discard_count = need(j, "discards", "assignment").get<std::size_t>();
    la.pa.num_parts = need(la.config, "parts", "assignment config").get<int>();
    la.pa.k_eff = need(la.config, "topk", "assignment config").get<double>();
    return la;
}

// Rebuild the exact sub-stream an assignment was computed on.
EdgeStream stream_for_assignment(const std::string& input, const ordered_json& cfg) {
    bool sorted = need(cfg, "assume_sorted", "assignment config").get<bool>();
    EdgeStream full = read_stream(input, sorted);
    if (need(cfg, "partition_on", "assignment config").get<std::string>() == "train")
        return chrono_split(full,
                            need(cfg, "train_frac", "assignment config").get<double>(),
                            need(cfg, "val_frac", "assignment config").get<double>())
            .train;
    return full;
}

struct MetricsFlags {
    std::string assignment;
    std::string input;
    bool table = false;
    std::string output = "-";
};

int run_metrics(const MetricsFlags& f) {
    LoadedAssignment la = load_assignment(f.assignment);
    EdgeStream s = stream_for_assignment(f.input, la.config);
    QualityReport q = quality(la.pa, s);

    if (f.table) {
        std::ostringstream t;
        char line[160];
        std::snprintf(line, sizeof line, "%-14s %-12s %-20s %-12s\n", "Total Cut %",
                      "edge Std.", "Avg. node Portion %", "node Std.");
        t << line;
        std::snprintf(line, sizeof line, "%-14.2f %-12.2f %-20.2f %-12.2f\n", 100.0 * q.ec,
                      q.edge_std, 100.0 * q.rf / la.pa.num_parts, q.node_std);
        t << line;
        write_text(f.output, t.str());
        return 0;
    }

    ordered_json out{{"config", ordered_json{{"subcommand", "metrics"},
                                             {"assignment", f.assignment},
                                             {"input", f.input},
                                             {"format", "json"},
                                             {"partition", la.config}}},
                     {"rf", q.rf},
                     {"ec", q.ec},
                     {"rf_bound", q.rf_bound},
                     {"ec_bound", q.ec_bound ? ordered_json(*q.ec_bound) : ordered_json(nullptr)},
                     {"edge_sizes", q.edge_sizes},
                     {"node_sizes", q.node_sizes},
                     {"edge_std", q.edge_std},
                     {"node_std", q.node_std},
                     {"discards", la.pa.discard_count}};
    emit_json(f.output, out);
    return 0;
}

struct VerifyFlags {
    int trials = 100;
    std::uint64_t seed = 1;
    std::string output = "-";
};

int run_verify(const VerifyFlags& f) {
    BoundTrialConfig cfg;
    cfg.trials = f.trials;
    cfg.seed = f.seed;
    VerificationReport rep = verify_bounds(cfg);

    ordered_json runs = ordered_json::array();
    for (const auto& r : rep.runs)
        runs.push_back(ordered_json{{"trial", r.trial},
                                    {"alpha", r.alpha},
                                    {"nodes", r.nodes},
                                    {"edges", r.edges},
                                    {"parts", r.parts},
                                    {"k", r.k},
                                    {"min_degree", r.min_degree},
                                    {"rf", r.rf},
                                    {"rf_limit", r.rf_limit},
                                    {"ec", r.ec},
                                    {"ec_limit", r.ec_limit},
                                    {"rf_ok", r.rf_ok},
                                    {"ec_ok", r.ec_ok}});
    ordered_json out{{"config", ordered_json{{"subcommand", "verify-bounds"},
                                             {"trials", cfg.trials},
                                             {"seed", cfg.seed},
                                             {"parts_grid", cfg.parts_grid},
                                             {"k_grid", cfg.k_grid},
                                             {"alpha_grid", cfg.alpha_grid},
                                             {"min_nodes", cfg.min_nodes},
                                             {"max_nodes", cfg.max_nodes},
                                             {"min_edges", cfg.min_edges},
                                             {"max_edges", cfg.max_edges},
                                             {"lambda", cfg.lambda},
                                             {"epsilon", cfg.epsilon}}},
                     {"violations", rep.violations},
                     {"trend_violations", rep.trend_violations},
                     {"max_rf_ratio", rep.max_rf_ratio},
                     {"max_ec_ratio", rep.max_ec_ratio},
                     {"worst_rf_config", rep.worst_rf_config},
                     {"worst_ec_config", rep.worst_ec_config},
                     {"runs", runs}};
    emit_json(f.output, out);

    if (rep.violations > 0 || rep.trend_violations > 0)
        throw InternalError("BoundViolation",
                            std::to_string(rep.violations) + " bound and " +
                                std::to_string(rep.trend_violations) +
                                " trend violations (see report)");
    return 0;
}

struct SimulateFlags {
    std::string input;
    std::string assignment;
    int workers = 1;
    int small_parts = 0; // 0: same as workers
    bool shuffle = false;
    std::string sync = "max-ts";
    std::uint64_t batch_size = 1;
    int epochs = 1;
    int dim = 8;
    std::uint64_t model_seed = 0;
    bool model_seed_set = false;
    std::uint64_t seed = 1;
    std::string report = "-";
};

int run_simulate(const SimulateFlags& f) {
    LoadedAssignment la = load_assignment(f.assignment);
    EdgeStream s = stream_for_assignment(f.input, la.config);

    SimConfig cfg;
    cfg.num_workers = f.workers;
    cfg.num_small_parts = f.small_parts > 0 ? f.small_parts : f.workers;
    cfg.shuffle = f.shuffle;
    cfg.sync = f.sync == "avg" ? SyncStrategy::Average : SyncStrategy::MaxTimestamp;
    cfg.batch_size = f.batch_size;
    cfg.epochs = f.epochs;
    cfg.d = f.dim;
    cfg.model_seed = f.model_seed_set ? f.model_seed : f.seed;
    cfg.shuffle_seed = f.seed;
    SimReport rep = simulate(s, la.pa, cfg);

    ordered_json epochs = ordered_json::array();
    for (const auto& ep : rep.epochs)
        epochs.push_back(ordered_json{{"batches", ep.batches},
                                      {"loops", ep.loops},
                                      {"recovered", ep.recovered},
                                      {"digests", ep.digests}});
    ordered_json out{{"config", ordered_json{{"subcommand", "simulate"},
                                             {"input", f.input},
                                             {"assignment", f.assignment},
                                             {"workers", cfg.num_workers},
                                             {"small_parts", cfg.num_small_parts},
                                             {"shuffle", cfg.shuffle},
                                             {"sync", f.sync},
                                             {"batch_size", cfg.batch_size},
                                             {"epochs", cfg.epochs},
                                             {"dim", cfg.d},
                                             {"model_seed", cfg.model_seed},
                                             {"seed", f.seed}}},
                     {"epochs", epochs},
                     {"sync_events", rep.sync_events}};
    emit_json(f.report, out);
    return 0;
}

struct GenerateFlags {
    NodeId nodes = 0;
    std::size_t edges = 0;
    double alpha = 2.5;
    std::uint64_t seed = 1;
    std::string output = "-";
};

int run_generate(const GenerateFlags& f) {
    EdgeStream s = gen_powerlaw(f.nodes, f.edges, f.alpha, f.seed);
    if (f.output == "-") {
        write_edges(s, std::cout);
    } else {
        write_edges(s, f.output);
    }
    // keep stdout a clean CSV pipe; the resolved config goes to stderr
    ordered_json cfg{{"subcommand", "generate"}, {"gen_nodes", f.nodes},
                     {"gen_edges", f.edges},    {"gen_alpha", f.alpha},
                     {"seed", f.seed},          {"output", f.output}};
    std::cerr << ordered_json{{"config", cfg}}.dump() << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app("speedpart: streaming edge partitioning and multi-worker "
                 "training simulation for temporal interaction graphs");
    app.require_subcommand(1);

    GenerateFlags gf;
    auto* gen = app.add_subcommand("generate", "synthesize a power-law temporal edge stream");
    gen->add_option("--gen-nodes", gf.nodes, "node count")->required();
    gen->add_option("--gen-edges", gf.edges, "edge count")->required();
    gen->add_option("--gen-alpha", gf.alpha, "degree tail exponent (> 1)");
    gen->add_option("--seed", gf.seed, "generator seed");
    gen->add_option("--output", gf.output, "CSV destination, - for stdout");

    PartitionFlags pf;
    auto* part = app.add_subcommand("partition", "stream the edges into partitions");
    pf.stream.attach(part);
    part->add_option("--parts", pf.parts, "number of partitions")->required()
        ->check(CLI::PositiveNumber);
    part->add_option("--topk", pf.topk, "hub fraction k in [0,1]");
    part->add_option("--beta", pf.beta, "time-decay rate in (0,1)");
    part->add_option("--lambda", pf.lambda, "balance weight");
    part->add_option("--epsilon", pf.epsilon, "balance smoothing");
    part->add_option("--mode", pf.mode, "assignment strategy")
        ->check(CLI::IsMember({"sep", "unrestricted", "random"}));
    part->add_option("--partition-on", pf.partition_on, "partition the train split or everything")
        ->check(CLI::IsMember({"train", "all"}));
    part->add_option("--seed", pf.seed, "seed for random mode");
    part->add_option("--output", pf.output, "assignment JSON destination, - for stdout");

    MetricsFlags mf;
    auto* met = app.add_subcommand("metrics", "score an assignment against its stream");
    met->add_option("--assignment", mf.assignment, "assignment JSON from partition")->required();
    met->add_option("--input", mf.input, "edge CSV the assignment was built from, - for stdin")
        ->required();
    auto* tbl = met->add_flag("--table", mf.table, "human-readable columns");
    met->add_flag("--json", "machine-readable report (default)")->excludes(tbl);
    met->add_option("--output", mf.output, "report destination, - for stdout");

    VerifyFlags vf;
    auto* ver = app.add_subcommand("verify-bounds",
                                   "check the replication and cut ceilings on random streams");
    ver->add_option("--trials", vf.trials, "number of generated streams")
        ->check(CLI::PositiveNumber);
    ver->add_option("--seed", vf.seed, "trial seed");
    ver->add_option("--output", vf.output, "report destination, - for stdout");

    SimulateFlags sf;
    auto* sim = app.add_subcommand("simulate", "deterministic multi-worker training replay");
    sim->add_option("--input", sf.input, "edge CSV, - for stdin")->required();
    sim->add_option("--assignment", sf.assignment, "assignment JSON from partition")->required();
    sim->add_option("--workers", sf.workers, "worker count")->check(CLI::PositiveNumber);
    sim->add_option("--small-parts", sf.small_parts,
                    "partition count behind shuffle-combine (default: workers)")
        ->check(CLI::PositiveNumber);
    sim->add_flag("--shuffle", sf.shuffle, "regroup small partitions every epoch");
    sim->add_option("--sync", sf.sync, "shared-node reconciliation")
        ->check(CLI::IsMember({"max-ts", "avg"}));
    sim->add_option("--batch-size", sf.batch_size, "edges per batch")
        ->check(CLI::PositiveNumber);
    sim->add_option("--epochs", sf.epochs, "training epochs")
        ->check(CLI::NonNegativeNumber);
    sim->add_option("--dim", sf.dim, "memory dimension")->check(CLI::PositiveNumber);
    auto* ms = sim->add_option("--model-seed", sf.model_seed, "surrogate weight seed");
    sim->add_option("--seed", sf.seed, "global seed (shuffle; model unless --model-seed)");
    sim->add_option("--report", sf.report, "report destination, - for stdout");

    try {
        app.parse(argc, argv);
        sf.model_seed_set = ms->count() > 0;
        if (gen->parsed()) return run_generate(gf);
        if (part->parsed()) return run_partition(pf);
        if (met->parsed()) return run_metrics(mf);
        if (ver->parsed()) return run_verify(vf);
        if (sim->parsed()) return run_simulate(sf);
        return 1; // unreachable: require_subcommand
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << ordered_json{{"error", "UsageError"}, {"detail", e.what()}}.dump() << "\n";
        return 1;
    } catch (const DataError& e) {
        std::cerr << ordered_json{{"error", e.code()}, {"detail", e.what()}}.dump() << "\n";
        return 2;
    } catch (const InternalError& e) {
        std::cerr << ordered_json{{"error", e.code()}, {"detail", e.what()}}.dump() << "\n";
        return 3;
    }
}
