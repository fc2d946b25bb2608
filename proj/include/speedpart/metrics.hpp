#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "speedpart/partitioner.hpp"
#include "speedpart/types.hpp"

namespace speedpart {

struct QualityReport {
    double rf = 0.0;
    double ec = 0.0;
    std::vector<std::uint64_t> edge_sizes;
    std::vector<std::uint64_t> node_sizes;
    double edge_std = 0.0;
    double node_std = 0.0;
    double rf_bound = 0.0;
    std::optional<double> ec_bound; // only meaningful in degree-centrality mode
};

// RF = sum_i |node_parts(i)| / |V_active|, EC = discards / |E|, stds are
// population standard deviations over partitions.
QualityReport quality(const PartitionAssignment& pa, const EdgeStream& s);

// Replication-factor ceiling k*|P| + (1-k).
double rf_bound(double k, int num_parts);

// Edge-cut ceiling (1/|E|) * sum_{q=0}^{floor(nodes*(1-k))-1} m*(k+q/nodes)^{1/(1-alpha)},
// clamped to 1. Requires alpha > 1; k = 0 diverges and is rejected.
double ec_bound(std::uint64_t nodes, std::uint64_t edges, double k, std::uint64_t m,
                double alpha);

struct BoundTrialConfig {
    int trials = 100;
    std::uint64_t seed = 1;
    std::vector<int> parts_grid = {2, 4, 8};
    std::vector<double> k_grid = {0.0, 0.01, 0.05, 0.10};
    std::vector<double> alpha_grid = {2.2, 2.5, 3.0};
    NodeId min_nodes = 100;
    NodeId max_nodes = 2000;
    std::uint64_t min_edges = 1000;
    std::uint64_t max_edges = 50000;
    double lambda = 1.0;
    double epsilon = 1.0;
};

struct BoundRun {
    int trial = 0;
    double alpha = 0.0;
    NodeId nodes = 0;
    std::uint64_t edges = 0;
    int parts = 0;
    double k = 0.0;
    std::uint64_t min_degree = 0;
    double rf = 0.0;
    double rf_limit = 0.0;
    double ec = 0.0;
    double ec_limit = 1.0;
    bool rf_ok = true;
    bool ec_ok = true;
};

struct VerificationReport {
    BoundTrialConfig config;
    std::vector<BoundRun> runs;
    std::size_t violations = 0;       // bound breaches (replication or cut ceiling)
    std::size_t trend_violations = 0; // RF/EC not monotone along the k grid
    double max_rf_ratio = 0.0; // max over runs of rf / rf_limit
    double max_ec_ratio = 0.0; // max over runs with ec_limit > 0
    std::string worst_rf_config;
    std::string worst_ec_config;
};

// Generates `trials` power-law streams, partitions each across the
// k x parts grid in degree-centrality mode, and checks every run against
// the two ceilings. A k of 0 makes the EC check vacuous (ceiling 1).
// Trend violations (RF decreasing or EC increasing along the sorted
// k grid per trial/parts pair) count as violations too. The report is
// always returned in full; callers decide how hard to fail.
VerificationReport verify_bounds(const BoundTrialConfig& cfg);

} // namespace speedpart
