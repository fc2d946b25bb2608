#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "speedpart/centrality.hpp"
#include "speedpart/errors.hpp"
#include "speedpart/graph_io.hpp"
#include "speedpart/partitioner.hpp"

using namespace speedpart;

namespace {

EdgeStream make_stream(std::vector<TemporalEdge> edges, NodeId node_count) {
    EdgeStream s;
    s.edges = std::move(edges);
    s.node_count = node_count;
    for (const auto& e : s.edges) s.t_max = std::max(s.t_max, e.ts);
    return s;
}

CentralityTable table_of(std::vector<double> cent) {
    CentralityTable t;
    t.cent = std::move(cent);
    t.beta = 0.5;
    return t;
}

PartitionerConfig config_for(const EdgeStream& s, int parts, double k,
                             double lambda = 1.0) {
    PartitionerConfig cfg;
    cfg.num_parts = parts;
    cfg.lambda = lambda;
    cfg.centrality = compute_centrality(s, 0.5);
    cfg.hub_set = select_hubs(cfg.centrality, k);
    return cfg;
}

// Straight-line replay of the five-case dispatch, kept deliberately naive
// (maps and sets, fresh score arithmetic) so it shares no code with the
// library's streaming state machine.
struct ReplayResult {
    std::map<std::size_t, PartId> edge_part; // discarded edges absent
    std::map<NodeId, std::set<PartId>> a_sets;
    std::vector<int> case_taken; // per edge, 1..5 (4 stands for 4/5)
    std::size_t discards = 0;
};

ReplayResult replay(const EdgeStream& s, int parts, const std::set<NodeId>& hubs,
                    const std::vector<double>& cent, double lambda, double eps) {
    ReplayResult r;
    std::vector<long long> sizes(parts, 0);
    auto theta = [&](NodeId x, NodeId y) {
        double cx = cent[x], cy = cent[y];
        return cx + cy > 0 ? cx / (cx + cy) : 0.5;
    };
    auto calc = [&](NodeId i, NodeId j, PartId p) {
        long long mx = *std::max_element(sizes.begin(), sizes.end());
        long long mn = *std::min_element(sizes.begin(), sizes.end());
        double sc = lambda * double(mx - sizes[p]) / (eps + double(mx - mn));
        if (r.a_sets[i].count(p)) sc += 1 + (1 - theta(i, j));
        if (r.a_sets[j].count(p)) sc += 1 + (1 - theta(j, i));
        return sc;
    };
    auto greedy = [&](NodeId i, NodeId j) {
        PartId best = 0;
        for (PartId p = 1; p < parts; ++p)
            if (calc(i, j, p) > calc(i, j, best)) best = p;
        return best;
    };

    for (std::size_t e = 0; e < s.edges.size(); ++e) {
        NodeId i = s.edges[e].src, j = s.edges[e].dst;
        bool ai = !r.a_sets[i].empty(), aj = !r.a_sets[j].empty();
        bool hi = hubs.count(i) > 0, hj = hubs.count(j) > 0;
        PartId p;
        if (ai && aj) {
            if (hi && !hj) {
                p = *r.a_sets[j].begin();
                r.case_taken.push_back(1);
            } else if (!hi && hj) {
                p = *r.a_sets[i].begin();
                r.case_taken.push_back(1);
            } else if (hi && hj) {
                p = greedy(i, j);
                r.case_taken.push_back(2);
            } else {
                PartId pi = *r.a_sets[i].begin(), pj = *r.a_sets[j].begin();
                r.case_taken.push_back(3);
                if (pi != pj) {
                    ++r.discards;
                    continue;
                }
                p = pi;
            }
        } else {
            r.case_taken.push_back(4);
            if (ai && !hi)
                p = *r.a_sets[i].begin();
            else if (aj && !hj)
                p = *r.a_sets[j].begin();
            else
                p = greedy(i, j);
        }
        r.edge_part[e] = p;
        r.a_sets[i].insert(p);
        r.a_sets[j].insert(p);
        ++sizes[p];
    }
    return r;
}

void check_against_replay(const EdgeStream& s, const PartitionerConfig& cfg) {
    PartitionAssignment pa = partition_stream(s, cfg);
    std::set<NodeId> hubs(cfg.hub_set.hubs.begin(), cfg.hub_set.hubs.end());
    ReplayResult r =
        replay(s, cfg.num_parts, hubs, cfg.centrality.cent, cfg.lambda, cfg.epsilon);

    REQUIRE(pa.edge_part.size() == s.size());
    CHECK(pa.discard_count == r.discards);
    std::size_t case3_mismatched = 0;
    for (std::size_t e = 0; e < s.size(); ++e) {
        if (auto it = r.edge_part.find(e); it != r.edge_part.end())
            CHECK(pa.edge_part[e] == it->second);
        else {
            CHECK(pa.edge_part[e] == kDiscarded);
            CHECK(r.case_taken[e] == 3); // discards come from Case 3 alone
            ++case3_mismatched;
        }
    }
    CHECK(case3_mismatched == pa.discard_count);

    // A-sets match, and the shared list is exactly the multi-resident hubs.
    std::vector<NodeId> shared_oracle;
    for (NodeId i = 0; i < s.node_count; ++i) {
        auto it = r.a_sets.find(i);
        std::set<PartId> oracle = it == r.a_sets.end() ? std::set<PartId>{} : it->second;
        if (oracle.size() > 1) {
            shared_oracle.push_back(i);
            CHECK(hubs.count(i) == 1);
            CHECK(pa.node_parts[i].size() == static_cast<std::size_t>(cfg.num_parts));
        } else {
            std::set<PartId> got(pa.node_parts[i].begin(), pa.node_parts[i].end());
            CHECK(got == oracle);
        }
    }
    CHECK(pa.shared == shared_oracle);

    // Edge-partition consistency on the final node sets.
    for (std::size_t e = 0; e < s.size(); ++e) {
        PartId p = pa.edge_part[e];
        if (p == kDiscarded) continue;
        const auto& vi = pa.node_parts[s.edges[e].src];
        const auto& vj = pa.node_parts[s.edges[e].dst];
        CHECK(std::find(vi.begin(), vi.end(), p) != vi.end());
        CHECK(std::find(vj.begin(), vj.end(), p) != vj.end());
    }
}

// Toy fixture: a=0, b=1, c=2, d=3, h=4; six edges, two partitions, h the
// only hub. Centralities are fixed by hand so the greedy scores are easy
// to verify on paper.
EdgeStream toy_stream() {
    return make_stream({{0, 4, 1}, {1, 4, 2}, {0, 1, 3}, {2, 4, 4}, {2, 3, 5}, {1, 3, 6}},
                       5);
}

PartitionerConfig toy_config(double lambda) {
    PartitionerConfig cfg;
    cfg.num_parts = 2;
    cfg.lambda = lambda;
    cfg.epsilon = 1.0;
    cfg.centrality = table_of({1.0, 1.0, 1.0, 1.0, 4.0});
    cfg.hub_set = HubSet::from_ids({4}, 5, 0.2);
    return cfg;
}

} // namespace

TEST_CASE("score matches the worked hand evaluation") {
    PartitionerConfig cfg;
    cfg.num_parts = 2;
    cfg.centrality = table_of({1.0, 3.0}); // theta(0) = 0.25
    cfg.hub_set = HubSet::from_ids({}, 2, 0.0);
    PartitionState st(2, 2);
    st.sizes = {2, 4};
    st.maxsize = 4;
    st.minsize = 2;
    st.assigned[0] = {0};
    st.assigned[1] = {1};
    CHECK(score(0, 1, 0, st, cfg) == doctest::Approx(1.75 + 2.0 / 3.0).epsilon(1e-9));

    // Empty partitions, nobody resident: pure balance term, which is 0.
    PartitionState fresh(2, 2);
    CHECK(score(0, 1, 0, fresh, cfg) == doctest::Approx(0.0));
    CHECK(score(0, 1, 1, fresh, cfg) == doctest::Approx(0.0));
}

TEST_CASE("theta falls back to one half for a zero-centrality pair") {
    PartitionerConfig cfg;
    cfg.num_parts = 1;
    cfg.centrality = table_of({0.0, 0.0});
    cfg.hub_set = HubSet::from_ids({}, 2, 0.0);
    PartitionState st(2, 1);
    st.assigned[0] = {0};
    st.assigned[1] = {0};
    // h(i,p) + h(j,p) = (1 + 0.5) * 2
    CHECK(score(0, 1, 0, st, cfg) == doctest::Approx(3.0));
}

TEST_CASE("single edge lands in partition 0 on a fresh state") {
    EdgeStream s = make_stream({{0, 1, 1.0}}, 2);
    PartitionerConfig cfg = config_for(s, 2, 0.0);
    PartitionAssignment pa = partition_stream(s, cfg);
    CHECK(pa.edge_part == std::vector<PartId>{0});
    CHECK(pa.node_parts[0] == std::vector<PartId>{0});
    CHECK(pa.node_parts[1] == std::vector<PartId>{0});
    CHECK(pa.discard_count == 0);
    CHECK(pa.shared.empty());
}

TEST_CASE("six-edge golden trace with lambda 2") {
    EdgeStream s = toy_stream();
    PartitionAssignment pa = partition_stream(s, toy_config(2.0));

    CHECK(pa.edge_part == std::vector<PartId>{0, 0, 0, 1, 1, kDiscarded});
    CHECK(pa.discard_count == 1);
    CHECK(pa.shared == std::vector<NodeId>{4});
    CHECK(pa.node_parts[0] == std::vector<PartId>{0});
    CHECK(pa.node_parts[1] == std::vector<PartId>{0});
    CHECK(pa.node_parts[2] == std::vector<PartId>{1});
    CHECK(pa.node_parts[3] == std::vector<PartId>{1});
    CHECK(pa.node_parts[4] == std::vector<PartId>{0, 1}); // shared: every partition

    check_against_replay(s, toy_config(2.0));
}

TEST_CASE("six-edge toy with lambda 1 keeps everything in one partition") {
    // With lambda 1 the balance term never outweighs a resident hub, so the
    // stream collapses into partition 0 and nothing is discarded.
    EdgeStream s = toy_stream();
    PartitionAssignment pa = partition_stream(s, toy_config(1.0));
    CHECK(pa.edge_part == std::vector<PartId>{0, 0, 0, 0, 0, 0});
    CHECK(pa.discard_count == 0);
    CHECK(pa.shared.empty());
    check_against_replay(s, toy_config(1.0));
}

TEST_CASE("an assigned non-hub pins the edge even when the hub is new") {
    // d(3) is resident in p1; hub 4 is unassigned. Literal dispatch sends
    // this through Cases 4/5 and the residency guard forces p1.
    EdgeStream s = make_stream({{2, 3, 1}, {3, 4, 2}}, 5);
    PartitionerConfig cfg;
    cfg.num_parts = 2;
    cfg.lambda = 100.0; // huge balance pressure tries to pull it to p1... p0
    cfg.centrality = table_of({1, 1, 1, 1, 4});
    cfg.hub_set = HubSet::from_ids({4}, 5, 0.2);
    PartitionAssignment pa = partition_stream(s, cfg);
    CHECK(pa.edge_part[1] == pa.edge_part[0]);
    CHECK(pa.discard_count == 0);
}

TEST_CASE("library agrees with the naive replay across random streams") {
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        EdgeStream s = gen_powerlaw(60, 400, 2.3, seed);
        for (int parts : {2, 3, 4})
            for (double k : {0.0, 0.05, 0.2, 1.0})
                check_against_replay(s, config_for(s, parts, k));
    }
}

TEST_CASE("k 0 never replicates") {
    EdgeStream s = gen_powerlaw(80, 600, 2.5, 17);
    PartitionAssignment pa = partition_stream(s, config_for(s, 4, 0.0));
    CHECK(pa.shared.empty());
    for (const auto& parts : pa.node_parts) CHECK(parts.size() <= 1);
}

TEST_CASE("self-loops are assigned and never discarded") {
    EdgeStream s = make_stream({{0, 1, 1}, {2, 2, 2}, {0, 0, 3}, {2, 2, 4}}, 3);
    PartitionerConfig cfg = config_for(s, 2, 0.0);
    PartitionAssignment pa = partition_stream(s, cfg);
    CHECK(pa.discard_count == 0);
    for (PartId p : pa.edge_part) CHECK(p != kDiscarded);
    check_against_replay(s, cfg);
}

TEST_CASE("unrestricted mode never discards and matches on one edge") {
    EdgeStream s = gen_powerlaw(50, 500, 2.2, 23);
    PartitionerConfig cfg = config_for(s, 4, 0.05);
    PartitionAssignment open = partition_unrestricted(s, cfg);
    CHECK(open.discard_count == 0);
    CHECK(open.k_eff == 1.0);

    EdgeStream one = make_stream({{0, 1, 1.0}}, 2);
    PartitionerConfig c1 = config_for(one, 3, 0.0);
    CHECK(partition_unrestricted(one, c1).edge_part ==
          partition_stream(one, c1).edge_part);
}

TEST_CASE("balance pressure keeps sizes within one") {
    std::vector<TemporalEdge> edges;
    for (NodeId i = 0; i < 20; ++i)
        edges.push_back({2 * i, 2 * i + 1, static_cast<double>(i + 1)});
    EdgeStream s = make_stream(std::move(edges), 40);
    PartitionerConfig cfg = config_for(s, 4, 0.0, /*lambda=*/100.0);
    PartitionAssignment pa = partition_stream(s, cfg);
    std::vector<std::size_t> sizes(4, 0);
    for (PartId p : pa.edge_part) ++sizes[static_cast<std::size_t>(p)];
    CHECK(*std::max_element(sizes.begin(), sizes.end()) -
              *std::min_element(sizes.begin(), sizes.end()) <=
          1);
    CHECK(pa.discard_count == 0);
}

TEST_CASE("streaming requires sorted input and valid parameters") {
    EdgeStream bad = make_stream({{0, 1, 5.0}}, 2);
    bad.edges.push_back({1, 0, 1.0}); // deliberately out of order
    PartitionerConfig cfg = config_for(toy_stream(), 2, 0.0);
    CHECK_THROWS_AS(partition_stream(bad, cfg), DataError);

    PartitionerConfig zero_lambda = cfg;
    zero_lambda.lambda = 0.0;
    CHECK_THROWS_AS(partition_stream(toy_stream(), zero_lambda), DataError);
}

TEST_CASE("partitioning is deterministic") {
    EdgeStream s = gen_powerlaw(70, 700, 2.4, 29);
    PartitionerConfig cfg = config_for(s, 4, 0.05);
    PartitionAssignment a = partition_stream(s, cfg);
    PartitionAssignment b = partition_stream(s, cfg);
    CHECK(a.edge_part == b.edge_part);
    CHECK(a.node_parts == b.node_parts);
    CHECK(a.shared == b.shared);
}

TEST_CASE("random baseline basics") {
    EdgeStream s = gen_powerlaw(50, 300, 2.5, 7);
    PartitionAssignment one = partition_random(s, 1, 9);
    CHECK(one.discard_count == 0);
    for (PartId p : one.edge_part) CHECK(p == 0);

    PartitionAssignment a = partition_random(s, 4, 9);
    PartitionAssignment b = partition_random(s, 4, 9);
    CHECK(a.edge_part == b.edge_part);
    CHECK(a.discard_count == b.discard_count);
    for (const auto& parts : a.node_parts) CHECK(parts.size() <= 1);
}

TEST_CASE("random baseline discards more than the greedy at k 0.05") {
    EdgeStream s = gen_powerlaw(1000, 10000, 2.5, 41);
    PartitionerConfig cfg = config_for(s, 4, 0.05);
    PartitionAssignment sep = partition_stream(s, cfg);
    PartitionAssignment rnd = partition_random(s, 4, 41);
    CHECK(rnd.discard_count > sep.discard_count);
}

TEST_CASE("eval edges route to co-resident partitions") {
    // Train: the toy trace at lambda 2; a=0,b=1 live in p0, c=2,d=3 in p1,
    // h=4 shared across both.
    EdgeStream train = toy_stream();
    PartitionAssignment pa = partition_stream(train, toy_config(2.0));

    ChronoSplit split;
    split.train = train;
    split.val = make_stream({{4, 4, 7}, {0, 1, 8}, {0, 2, 9}}, 5);
    split.test = make_stream({{9, 0, 10}, {2, 4, 11}}, 10);

    EvalRouting r = assign_eval_edges(split, pa);
    CHECK(r.val_edges[0] == std::vector<std::size_t>{0, 1}); // (4,4) and (0,1)
    CHECK(r.val_edges[1] == std::vector<std::size_t>{0});    // shared-shared goes everywhere
    CHECK(r.val_unroutable == 1);                            // (0,2) never co-resident
    CHECK(r.test_edges[1] == std::vector<std::size_t>{1});   // (2,4) in p1
    CHECK(r.test_unroutable == 1);                           // node 9 unseen

    std::size_t routed = 0;
    for (std::size_t e = 0; e < split.val.size(); ++e) {
        bool in_any = false;
        for (const auto& lst : r.val_edges)
            in_any |= std::find(lst.begin(), lst.end(), e) != lst.end();
        routed += in_any;
    }
    CHECK(routed + r.val_unroutable == split.val.size());
}
