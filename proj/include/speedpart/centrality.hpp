#pragma once

#include <vector>

#include "speedpart/types.hpp"

namespace speedpart {

// Per-node centrality scores, dense over [0, node_count).
// cent(i) > 0 iff node i appears in at least one edge, and
// cent(i) <= number of incident edge roles of i.
struct CentralityTable {
    std::vector<double> cent;
    double beta = 0.0; // 0 marks degree mode
    double t_max = 0.0;

    double of(NodeId i) const { return i < cent.size() ? cent[i] : 0.0; }
    std::size_t active_count() const;
};

// Top-fraction-by-centrality node set. Only these nodes may replicate
// across partitions.
struct HubSet {
    std::vector<NodeId> hubs; // ascending
    std::vector<std::uint8_t> is_hub; // dense over [0, node_count)
    double k = 0.0;

    bool contains(NodeId i) const { return i < is_hub.size() && is_hub[i]; }
    static HubSet from_ids(std::vector<NodeId> ids, NodeId node_count, double k);
};

enum class HubBase {
    Active, // k counts against nodes with at least one edge (default)
    All,    // k counts against the declared node_count
};

// Exponential time-decay centrality: cent(i) = sum over i's incident edge
// roles of exp(beta * (t - t_max)). With normalize_ts, timestamps are
// rescaled to [0,1] first (identity when the stream spans a single
// instant) so beta is unit-independent.
CentralityTable compute_centrality(const EdgeStream& s, double beta, bool normalize_ts = true);

// Degree as centrality (a self-loop contributes two roles).
CentralityTable compute_degree_centrality(const EdgeStream& s);

// The floor(k * base) nodes with largest centrality; ties broken toward
// the smaller node id.
HubSet select_hubs(const CentralityTable& c, double k, HubBase base = HubBase::Active);

} // namespace speedpart
