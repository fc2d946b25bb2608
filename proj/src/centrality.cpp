#include "speedpart/centrality.hpp"

#include <algorithm>
#include <cmath>

#include "speedpart/errors.hpp"

namespace speedpart {

std::size_t CentralityTable::active_count() const {
    std::size_t n = 0;
    for (double c : cent)
        if (c > 0.0) ++n;
    return n;
}

HubSet HubSet::from_ids(std::vector<NodeId> ids, NodeId node_count, double k) {
    HubSet h;
    std::sort(ids.begin(), ids.end());
    h.hubs = std::move(ids);
    h.is_hub.assign(node_count, 0);
    for (NodeId i : h.hubs) h.is_hub[i] = 1;
    h.k = k;
    return h;
}

CentralityTable compute_centrality(const EdgeStream& s, double beta, bool normalize_ts) {
    if (!(beta > 0.0 && beta < 1.0))
        throw DataError("BetaOutOfRange", "beta must lie in (0,1)");

    CentralityTable t;
    t.beta = beta;
    t.cent.assign(s.node_count, 0.0);
    if (s.empty()) return t;

    double t_min = s.edges.front().ts;
    double t_max = s.t_max;
    double span = t_max - t_min;
    auto scaled = [&](double ts) {
        if (!normalize_ts || span <= 0.0) return ts; // identity for single-instant streams
        return (ts - t_min) / span;
    };
    const double top = scaled(t_max);
    t.t_max = top;

    for (const TemporalEdge& e : s.edges) {
        const double w = std::exp(beta * (scaled(e.ts) - top));
        t.cent[e.src] += w;
        t.cent[e.dst] += w; // self-loops contribute both endpoint roles
    }
    return t;
}

CentralityTable compute_degree_centrality(const EdgeStream& s) {
    CentralityTable t;
    t.beta = 0.0;
    t.t_max = s.t_max;
    t.cent.assign(s.node_count, 0.0);
    for (const TemporalEdge& e : s.edges) {
        t.cent[e.src] += 1.0;
        t.cent[e.dst] += 1.0;
    }
    return t;
}

HubSet select_hubs(const CentralityTable& c, double k, HubBase base) {
    if (!(k >= 0.0 && k <= 1.0))
        throw DataError("InvalidParams", "k must lie in [0,1]");

    std::vector<NodeId> active;
    active.reserve(c.cent.size());
    for (NodeId i = 0; i < c.cent.size(); ++i)
        if (c.cent[i] > 0.0) active.push_back(i);

    const std::size_t pool =
        base == HubBase::Active ? active.size() : c.cent.size();
    const auto want = static_cast<std::size_t>(
        std::floor(k * static_cast<double>(pool)));
    const std::size_t take = std::min(want, active.size());

    std::partial_sort(active.begin(), active.begin() + take, active.end(),
                      [&](NodeId a, NodeId b) {
                          if (c.cent[a] != c.cent[b]) return c.cent[a] > c.cent[b];
                          return a < b;
                      });
    active.resize(take);
    return HubSet::from_ids(std::move(active), static_cast<NodeId>(c.cent.size()), k);
}

} // namespace speedpart
