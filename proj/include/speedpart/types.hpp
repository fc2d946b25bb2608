#pragma once

#include <cstdint>
#include <vector>

namespace speedpart {

using NodeId = std::uint32_t;
using PartId = std::int32_t;

// Sentinel partition id for edges dropped during streaming assignment.
inline constexpr PartId kDiscarded = -1;

// One timestamped interaction event.
struct TemporalEdge {
    NodeId src = 0;
    NodeId dst = 0;
    double ts = 0.0;

    friend bool operator==(const TemporalEdge&, const TemporalEdge&) = default;
};

// A time-sorted sequence of interactions. Sorting is stable: edges with
// equal timestamps keep their input order.
struct EdgeStream {
    std::vector<TemporalEdge> edges;
    NodeId node_count = 0;
    double t_max = 0.0;

    bool empty() const { return edges.empty(); }
    std::size_t size() const { return edges.size(); }
};

// Chronological train/val/test split by position in the time-sorted stream.
struct ChronoSplit {
    EdgeStream train;
    EdgeStream val;
    EdgeStream test;
    double f_train = 0.0;
    double f_val = 0.0;
    double f_test = 0.0;
};

} // namespace speedpart
