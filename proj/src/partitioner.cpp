#include "speedpart/partitioner.hpp"

#include <algorithm>
#include <string>

#include "speedpart/errors.hpp"
#include "speedpart/rng.hpp"

namespace speedpart {

bool PartitionState::in_a(NodeId i, PartId p) const {
    for (PartId q : assigned[i])
        if (q == p) return true;
    return false;
}

void PartitionState::add_to_a(NodeId i, PartId p) {
    if (!in_a(i, p)) assigned[i].push_back(p);
}

void PartitionState::add_edge_to(PartId p) {
    ++sizes[p];
    maxsize = *std::max_element(sizes.begin(), sizes.end());
    minsize = *std::min_element(sizes.begin(), sizes.end());
}

double score(NodeId i, NodeId j, PartId p, const PartitionState& st,
             const PartitionerConfig& cfg) {
    const double ci = cfg.centrality.of(i);
    const double cj = cfg.centrality.of(j);
    const double sum = ci + cj;
    const double theta_i = sum > 0.0 ? ci / sum : 0.5;
    const double theta_j = sum > 0.0 ? cj / sum : 0.5;

    double h = 0.0;
    if (st.in_a(i, p)) h += 1.0 + (1.0 - theta_i);
    if (st.in_a(j, p)) h += 1.0 + (1.0 - theta_j);

    const double spread = static_cast<double>(st.maxsize - st.minsize);
    const double slack = static_cast<double>(st.maxsize - st.sizes[p]);
    return h + cfg.lambda * slack / (cfg.epsilon + spread);
}

namespace {

void validate(const EdgeStream& s, const PartitionerConfig& cfg) {
    if (cfg.num_parts < 1 || !(cfg.lambda > 0.0) || !(cfg.epsilon > 0.0))
        throw DataError("InvalidParams",
                        "need num_parts >= 1, lambda > 0, epsilon > 0");
    for (std::size_t e = 1; e < s.edges.size(); ++e)
        if (s.edges[e].ts < s.edges[e - 1].ts)
            throw DataError("UnsortedStream",
                            "edge " + std::to_string(e) + " is out of order");
}

PartId argmax_all(NodeId i, NodeId j, const PartitionState& st,
                  const PartitionerConfig& cfg) {
    PartId best = 0;
    double best_score = score(i, j, 0, st, cfg);
    for (PartId p = 1; p < cfg.num_parts; ++p) {
        double sc = score(i, j, p, st, cfg);
        if (sc > best_score) {
            best = p;
            best_score = sc;
        }
    }
    return best;
}

PartitionAssignment finish(const EdgeStream& s, const PartitionerConfig& cfg,
                           PartitionState&& st, std::vector<PartId>&& edge_part,
                           std::size_t discards, double k_eff) {
    PartitionAssignment pa;
    pa.edge_part = std::move(edge_part);
    pa.node_parts = std::move(st.assigned);
    pa.num_parts = cfg.num_parts;
    pa.discard_count = discards;
    pa.k_eff = k_eff;
    for (NodeId i = 0; i < s.node_count; ++i) {
        if (pa.node_parts[i].size() > 1) {
            pa.shared.push_back(i);
            pa.node_parts[i].clear();
            for (PartId p = 0; p < cfg.num_parts; ++p) pa.node_parts[i].push_back(p);
        } else {
            std::sort(pa.node_parts[i].begin(), pa.node_parts[i].end());
        }
    }
    return pa;
}

PartitionAssignment run_stream(const EdgeStream& s, const PartitionerConfig& cfg,
                               double k_eff) {
    validate(s, cfg);
    PartitionState st(s.node_count, cfg.num_parts);
    std::vector<PartId> edge_part(s.size(), kDiscarded);
    std::size_t discards = 0;

    for (std::size_t e = 0; e < s.edges.size(); ++e) {
        const NodeId i = s.edges[e].src;
        const NodeId j = s.edges[e].dst;
        const bool ai = !st.assigned[i].empty();
        const bool aj = !st.assigned[j].empty();
        PartId target;

        if (!ai || !aj) {
            // Cases 4/5: at least one endpoint unassigned. An assigned
            // non-hub pins the edge to its home; otherwise greedy argmax.
            if (ai && !cfg.hub_set.contains(i))
                target = st.assigned[i].front();
            else if (aj && !cfg.hub_set.contains(j))
                target = st.assigned[j].front();
            else
                target = argmax_all(i, j, st, cfg);
        } else {
            const bool hi = cfg.hub_set.contains(i);
            const bool hj = cfg.hub_set.contains(j);
            if (hi != hj) {
                // Case 1: follow the non-hub; the hub replicates to it.
                target = hi ? st.assigned[j].front() : st.assigned[i].front();
            } else if (hi) {
                // Case 2: two hubs, free greedy choice.
                target = argmax_all(i, j, st, cfg);
            } else {
                // Case 3: two resident non-hubs must already share a home.
                const PartId pi = st.assigned[i].front();
                const PartId pj = st.assigned[j].front();
                if (pi != pj) {
                    ++discards;
                    continue; // edge_part stays kDiscarded
                }
                target = pi;
            }
        }

        edge_part[e] = target;
        st.add_to_a(i, target);
        st.add_to_a(j, target);
        if (!cfg.hub_set.contains(i) && st.assigned[i].size() > 1)
            throw InternalError("ResidencyViolation",
                                "non-hub " + std::to_string(i) + " replicated");
        if (!cfg.hub_set.contains(j) && st.assigned[j].size() > 1)
            throw InternalError("ResidencyViolation",
                                "non-hub " + std::to_string(j) + " replicated");
        st.add_edge_to(target);
    }

    return finish(s, cfg, std::move(st), std::move(edge_part), discards, k_eff);
}

} // namespace

PartitionAssignment partition_stream(const EdgeStream& s, const PartitionerConfig& cfg) {
    return run_stream(s, cfg, cfg.hub_set.k);
}

PartitionAssignment partition_unrestricted(const EdgeStream& s,
                                           const PartitionerConfig& cfg) {
    PartitionerConfig open = cfg;
    std::vector<NodeId> all(s.node_count);
    for (NodeId i = 0; i < s.node_count; ++i) all[i] = i;
    open.hub_set = HubSet::from_ids(std::move(all), s.node_count, 1.0);
    return run_stream(s, open, 1.0);
}

PartitionAssignment partition_random(const EdgeStream& s, int num_parts,
                                     std::uint64_t seed) {
    if (num_parts < 1) throw DataError("InvalidParams", "need num_parts >= 1");
    std::mt19937_64 rng(seed);
    PartitionState st(s.node_count, num_parts);
    std::vector<PartId> edge_part(s.size(), kDiscarded);
    std::size_t discards = 0;

    for (std::size_t e = 0; e < s.edges.size(); ++e) {
        const NodeId i = s.edges[e].src;
        const NodeId j = s.edges[e].dst;
        const bool ai = !st.assigned[i].empty();
        const bool aj = !st.assigned[j].empty();
        PartId target;
        if (ai && aj) {
            const PartId pi = st.assigned[i].front();
            const PartId pj = st.assigned[j].front();
            if (pi != pj) {
                ++discards;
                continue;
            }
            target = pi;
        } else if (ai) {
            target = st.assigned[i].front();
        } else if (aj) {
            target = st.assigned[j].front();
        } else {
            target = num_parts == 1
                         ? 0
                         : static_cast<PartId>(draw_below(
                               rng, static_cast<std::uint64_t>(num_parts)));
        }
        edge_part[e] = target;
        st.add_to_a(i, target);
        st.add_to_a(j, target);
        st.add_edge_to(target);
    }

    PartitionAssignment pa;
    pa.edge_part = std::move(edge_part);
    pa.node_parts = std::move(st.assigned);
    pa.discard_count = discards;
    pa.num_parts = num_parts;
    pa.k_eff = 0.0;
    return pa;
}

EvalRouting assign_eval_edges(const ChronoSplit& split, const PartitionAssignment& pa) {
    EvalRouting r;
    r.val_edges.resize(static_cast<std::size_t>(pa.num_parts));
    r.test_edges.resize(static_cast<std::size_t>(pa.num_parts));

    auto route = [&](const EdgeStream& es,
                     std::vector<std::vector<std::size_t>>& out,
                     std::size_t& unroutable) {
        for (std::size_t e = 0; e < es.edges.size(); ++e) {
            const NodeId i = es.edges[e].src;
            const NodeId j = es.edges[e].dst;
            bool routed = false;
            if (i < pa.node_parts.size() && j < pa.node_parts.size()) {
                for (PartId p = 0; p < pa.num_parts; ++p) {
                    auto has = [&](NodeId n) {
                        const auto& v = pa.node_parts[n];
                        return std::find(v.begin(), v.end(), p) != v.end();
                    };
                    if (has(i) && has(j)) {
                        out[static_cast<std::size_t>(p)].push_back(e);
                        routed = true;
                    }
                }
            }
            if (!routed) ++unroutable;
        }
    };
    route(split.val, r.val_edges, r.val_unroutable);
    route(split.test, r.test_edges, r.test_unroutable);
    return r;
}

} // namespace speedpart
