#pragma once

#include <cstdint>
#include <vector>

#include "speedpart/centrality.hpp"
#include "speedpart/types.hpp"

namespace speedpart {

struct PartitionerConfig {
    int num_parts = 1;
    double lambda = 1.0;
    double epsilon = 1.0;
    HubSet hub_set;
    CentralityTable centrality;
};

// Streaming assignment state. A(i) is the set of partitions node i has
// been assigned to; non-hubs never hold more than one entry.
struct PartitionState {
    std::vector<std::uint64_t> sizes;
    std::vector<std::vector<PartId>> assigned;
    std::uint64_t maxsize = 0;
    std::uint64_t minsize = 0;

    PartitionState() = default;
    PartitionState(NodeId node_count, int num_parts)
        : sizes(static_cast<std::size_t>(num_parts), 0),
          assigned(node_count) {}

    bool in_a(NodeId i, PartId p) const;
    void add_to_a(NodeId i, PartId p);
    void add_edge_to(PartId p);
};

struct PartitionAssignment {
    std::vector<PartId> edge_part;              // kDiscarded for dropped edges
    std::vector<std::vector<PartId>> node_parts; // final sets; shared nodes hold all partitions
    std::vector<NodeId> shared;                  // ascending
    std::size_t discard_count = 0;
    int num_parts = 1;
    double k_eff = 0.0; // replication budget this assignment was built under
};

// Greedy score C(i,j,p) = h(i,p) + h(j,p) + lambda*(maxsize - sizes[p]) /
// (epsilon + maxsize - minsize), with h(x,p) = 1 + (1 - theta(x)) when
// p is in A(x) and 0 otherwise. theta(x) is x's centrality normalized by
// the pair's total, 0.5 when both centralities are zero.
double score(NodeId i, NodeId j, PartId p, const PartitionState& st,
             const PartitionerConfig& cfg);

// Single streaming pass over the time-sorted edges:
//   both endpoints assigned:
//     exactly one is a hub  -> the non-hub's home partition
//     both hubs             -> argmax score
//     neither               -> shared home or discard
//   otherwise               -> argmax score, restricted to an already
//                              assigned non-hub endpoint's home
// Afterwards nodes in more than one partition form the shared list and
// join every partition's node set.
PartitionAssignment partition_stream(const EdgeStream& s, const PartitionerConfig& cfg);

// partition_stream with every active node treated as a hub; no edge is
// ever discarded.
PartitionAssignment partition_unrestricted(const EdgeStream& s, const PartitionerConfig& cfg);

// Baseline: uniform choice among the partitions that can hold both
// endpoints under single residency; discard when none can.
PartitionAssignment partition_random(const EdgeStream& s, int num_parts, std::uint64_t seed);

// Eval-edge routing: a val/test edge goes to every partition containing
// both endpoints; edges with no co-resident partition are unroutable.
struct EvalRouting {
    std::vector<std::vector<std::size_t>> val_edges;  // per partition, indices into split.val
    std::vector<std::vector<std::size_t>> test_edges; // per partition, indices into split.test
    std::size_t val_unroutable = 0;
    std::size_t test_unroutable = 0;
};

EvalRouting assign_eval_edges(const ChronoSplit& split, const PartitionAssignment& pa);

} // namespace speedpart
