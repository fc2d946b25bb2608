#include "speedpart/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "speedpart/centrality.hpp"
#include "speedpart/errors.hpp"
#include "speedpart/graph_io.hpp"
#include "speedpart/rng.hpp"

namespace speedpart {

namespace {

constexpr double kTol = 1e-9; // ceiling checks compare computed reals

double population_std(const std::vector<std::uint64_t>& xs) {
    if (xs.empty()) return 0.0;
    double mean = 0.0;
    for (auto x : xs) mean += static_cast<double>(x);
    mean /= static_cast<double>(xs.size());
    double var = 0.0;
    for (auto x : xs) {
        double d = static_cast<double>(x) - mean;
        var += d * d;
    }
    return std::sqrt(var / static_cast<double>(xs.size()));
}

} // namespace

QualityReport quality(const PartitionAssignment& pa, const EdgeStream& s) {
    if (pa.edge_part.size() != s.size())
        throw DataError("MismatchedInput",
                        "assignment covers " + std::to_string(pa.edge_part.size()) +
                            " edges, stream has " + std::to_string(s.size()));

    QualityReport q;
    q.edge_sizes.assign(static_cast<std::size_t>(pa.num_parts), 0);
    q.node_sizes.assign(static_cast<std::size_t>(pa.num_parts), 0);

    for (PartId p : pa.edge_part)
        if (p != kDiscarded) ++q.edge_sizes[static_cast<std::size_t>(p)];

    std::vector<std::uint8_t> active(s.node_count, 0);
    for (const TemporalEdge& e : s.edges) active[e.src] = active[e.dst] = 1;
    std::size_t n_active = 0;
    std::size_t replicas = 0;
    for (NodeId i = 0; i < s.node_count; ++i) {
        n_active += active[i];
        if (i < pa.node_parts.size()) {
            replicas += pa.node_parts[i].size();
            for (PartId p : pa.node_parts[i])
                ++q.node_sizes[static_cast<std::size_t>(p)];
        }
    }

    q.rf = n_active > 0 ? static_cast<double>(replicas) / static_cast<double>(n_active)
                        : 0.0;
    q.ec = s.empty() ? 0.0
                     : static_cast<double>(pa.discard_count) /
                           static_cast<double>(s.size());
    q.edge_std = population_std(q.edge_sizes);
    q.node_std = population_std(q.node_sizes);
    q.rf_bound = rf_bound(pa.k_eff, pa.num_parts);
    return q;
}

double rf_bound(double k, int num_parts) {
    if (!(k >= 0.0 && k <= 1.0) || num_parts < 1)
        throw DataError("InvalidParams", "need 0 <= k <= 1 and num_parts >= 1");
    return k * static_cast<double>(num_parts) + (1.0 - k);
}

double ec_bound(std::uint64_t nodes, std::uint64_t edges, double k, std::uint64_t m,
                double alpha) {
    if (!(alpha > 1.0))
        throw DataError("InvalidAlpha", "the exponent 1/(1-alpha) needs alpha > 1");
    if (nodes < 1 || edges < 1 || m < 1 || !(k > 0.0 && k <= 1.0))
        throw DataError("InvalidParams",
                        "need nodes, edges, m >= 1 and 0 < k <= 1 (k = 0 diverges)");

    const double v = static_cast<double>(nodes);
    // floor with a nudge: exact-integer products like 10 * (1 - 0.5) must
    // not fall to the next term count down through fp noise.
    const auto terms =
        static_cast<std::uint64_t>(std::floor(v * (1.0 - k) + 1e-9));
    const double expo = 1.0 / (1.0 - alpha);
    double sum = 0.0;
    for (std::uint64_t q = 0; q < terms; ++q)
        sum += static_cast<double>(m) *
               std::pow(k + static_cast<double>(q) / v, expo);
    return std::min(1.0, sum / static_cast<double>(edges));
}

VerificationReport verify_bounds(const BoundTrialConfig& cfg) {
    if (cfg.trials < 1) throw DataError("InvalidParams", "need trials >= 1");
    if (cfg.parts_grid.empty() || cfg.k_grid.empty() || cfg.alpha_grid.empty())
        throw DataError("InvalidParams", "empty parameter grid");
    if (cfg.min_nodes < 2 || cfg.max_nodes < cfg.min_nodes ||
        cfg.max_edges < cfg.min_edges)
        throw DataError("InvalidParams", "bad node or edge range");

    VerificationReport rep;
    rep.config = cfg;
    std::vector<double> ks = cfg.k_grid;
    std::sort(ks.begin(), ks.end());

    std::mt19937_64 rng(cfg.seed);
    for (int trial = 0; trial < cfg.trials; ++trial) {
        const double alpha =
            cfg.alpha_grid[static_cast<std::size_t>(trial) % cfg.alpha_grid.size()];
        const NodeId nodes = static_cast<NodeId>(
            cfg.min_nodes + draw_below(rng, cfg.max_nodes - cfg.min_nodes + 1));
        // edges >= nodes keeps every node active (the generator gives each
        // node at least edges/nodes interactions).
        const std::uint64_t lo = std::max<std::uint64_t>(cfg.min_edges, nodes);
        const std::uint64_t edges = lo + draw_below(rng, cfg.max_edges - lo + 1);
        const std::uint64_t stream_seed = rng();

        const EdgeStream s =
            gen_powerlaw(nodes, static_cast<std::size_t>(edges), alpha, stream_seed);
        // The cut ceiling is derived for degree-as-centrality; use it for both checks.
        const CentralityTable deg = compute_degree_centrality(s);
        std::uint64_t min_deg = 0;
        for (double c : deg.cent) {
            const auto d = static_cast<std::uint64_t>(c);
            if (d > 0 && (min_deg == 0 || d < min_deg)) min_deg = d;
        }

        for (int parts : cfg.parts_grid) {
            double prev_rf = -1.0;
            double prev_ec = 2.0;
            for (double k : ks) {
                PartitionerConfig pc;
                pc.num_parts = parts;
                pc.lambda = cfg.lambda;
                pc.epsilon = cfg.epsilon;
                pc.centrality = deg;
                pc.hub_set = select_hubs(deg, k);
                const PartitionAssignment pa = partition_stream(s, pc);
                const QualityReport q = quality(pa, s);

                BoundRun run;
                run.trial = trial;
                run.alpha = alpha;
                run.nodes = nodes;
                run.edges = edges;
                run.parts = parts;
                run.k = k;
                run.min_degree = min_deg;
                run.rf = q.rf;
                run.rf_limit = rf_bound(k, parts);
                run.ec = q.ec;
                run.ec_limit =
                    k > 0.0 ? ec_bound(nodes, edges, k, min_deg, alpha) : 1.0;
                run.rf_ok = run.rf <= run.rf_limit + kTol;
                run.ec_ok = run.ec <= run.ec_limit + kTol;

                if (!run.rf_ok || !run.ec_ok) ++rep.violations;
                if (run.rf < prev_rf - kTol || run.ec > prev_ec + kTol)
                    ++rep.trend_violations;
                prev_rf = run.rf;
                prev_ec = run.ec;

                const double rf_ratio = run.rf / run.rf_limit;
                if (rf_ratio > rep.max_rf_ratio) {
                    rep.max_rf_ratio = rf_ratio;
                    rep.worst_rf_config =
                        "trial=" + std::to_string(trial) + " alpha=" +
                        std::to_string(alpha) + " nodes=" + std::to_string(nodes) +
                        " edges=" + std::to_string(edges) + " parts=" +
                        std::to_string(parts) + " k=" + std::to_string(k);
                }
                if (run.k > 0.0 && run.ec_limit > 0.0) { // k = 0 has no finite cut ceiling
                    const double ec_ratio = run.ec / run.ec_limit;
                    if (ec_ratio > rep.max_ec_ratio) {
                        rep.max_ec_ratio = ec_ratio;
                        rep.worst_ec_config =
                            "trial=" + std::to_string(trial) + " alpha=" +
                            std::to_string(alpha) + " nodes=" + std::to_string(nodes) +
                            " edges=" + std::to_string(edges) + " parts=" +
                            std::to_string(parts) + " k=" + std::to_string(k);
                    }
                }
                rep.runs.push_back(run);
            }
        }
    }
    return rep;
}

} // namespace speedpart
