#include "speedpart/pac_sim.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "speedpart/digest.hpp"
#include "speedpart/errors.hpp"
#include "speedpart/rng.hpp"

namespace speedpart {

void MemoryStore::reset() {
    std::fill(state.begin(), state.end(), 0.0);
    std::fill(last_ts.begin(), last_ts.end(), 0.0);
}

std::string MemoryStore::digest() const {
    Fnv1a64 h;
    for (NodeId i = 0; i < node_count; ++i) {
        const double* s = row(i);
        for (int r = 0; r < d; ++r) h.absorb_double(s[r]);
        h.absorb_double(last_ts[i]);
    }
    return h.hex();
}

ModelParams ModelParams::seeded(int d, std::uint64_t seed) {
    if (d < 1) throw DataError("InvalidParams", "need memory dimension >= 1");
    ModelParams m;
    m.d = d;
    std::mt19937_64 rng(seed);
    const std::size_t cols = 3 * static_cast<std::size_t>(d);
    m.w_m.resize(static_cast<std::size_t>(d) * cols);
    const double scale = 1.0 / std::sqrt(static_cast<double>(cols));
    for (double& w : m.w_m) w = draw_normal(rng) * scale;
    // Log-spaced over three decades, with a seeded overall scale so the
    // frequencies still derive from the seed.
    const double f = draw_range(rng, 0.5, 1.5);
    m.omega.resize(static_cast<std::size_t>(d));
    const double steps = d > 1 ? static_cast<double>(d - 1) : 1.0;
    for (int r = 0; r < d; ++r)
        m.omega[static_cast<std::size_t>(r)] =
            f * std::pow(10.0, -3.0 * static_cast<double>(r) / steps);
    return m;
}

namespace {

void message(const ModelParams& model, const double* sx, const double* sy, double dt,
             double* out) {
    const int d = model.d;
    const std::size_t cols = 3 * static_cast<std::size_t>(d);
    for (int r = 0; r < d; ++r) {
        const double* wr = model.w_m.data() + static_cast<std::size_t>(r) * cols;
        double acc = 0.0;
        for (int c = 0; c < d; ++c) acc += wr[c] * sx[c];
        for (int c = 0; c < d; ++c) acc += wr[d + c] * sy[c];
        for (int c = 0; c < d; ++c)
            acc += wr[2 * d + c] *
                   std::cos(model.omega[static_cast<std::size_t>(c)] * dt);
        out[r] = std::tanh(acc);
    }
}

} // namespace

void model_update(MemoryStore& mem, const TemporalEdge& e, const ModelParams& model) {
    if (mem.d != model.d)
        throw InternalError("DimMismatch", "memory and model dimensions differ");
    const NodeId i = e.src;
    const NodeId j = e.dst;
    if (e.ts < mem.last_ts[i] || e.ts < mem.last_ts[j])
        throw DataError("NonChronological",
                        "edge at t=" + std::to_string(e.ts) +
                            " is older than an endpoint's last update");

    const int d = model.d;
    const double g = model.gamma;
    if (i == j) {
        std::vector<double> m(static_cast<std::size_t>(d));
        double* si = mem.row(i);
        message(model, si, si, e.ts - mem.last_ts[i], m.data());
        for (int r = 0; r < d; ++r) si[r] = (1.0 - g) * si[r] + g * m[r];
        mem.last_ts[i] = e.ts;
        return;
    }

    // Both messages read the pre-interaction states.
    std::vector<double> si_old(mem.row(i), mem.row(i) + d);
    std::vector<double> sj_old(mem.row(j), mem.row(j) + d);
    std::vector<double> mi(static_cast<std::size_t>(d));
    std::vector<double> mj(static_cast<std::size_t>(d));
    message(model, si_old.data(), sj_old.data(), e.ts - mem.last_ts[i], mi.data());
    message(model, sj_old.data(), si_old.data(), e.ts - mem.last_ts[j], mj.data());
    double* si = mem.row(i);
    double* sj = mem.row(j);
    for (int r = 0; r < d; ++r) {
        si[r] = (1.0 - g) * si_old[static_cast<std::size_t>(r)] + g * mi[static_cast<std::size_t>(r)];
        sj[r] = (1.0 - g) * sj_old[static_cast<std::size_t>(r)] + g * mj[static_cast<std::size_t>(r)];
    }
    mem.last_ts[i] = e.ts;
    mem.last_ts[j] = e.ts;
}

std::vector<SubGraph> induce_subgraphs(const EdgeStream& s,
                                       const std::vector<std::vector<PartId>>& node_parts,
                                       int num_parts) {
    if (num_parts < 1) throw DataError("InvalidParams", "need num_parts >= 1");
    std::vector<std::vector<std::uint8_t>> member(
        static_cast<std::size_t>(num_parts),
        std::vector<std::uint8_t>(s.node_count, 0));
    for (NodeId i = 0; i < node_parts.size() && i < s.node_count; ++i)
        for (PartId p : node_parts[i]) {
            if (p < 0 || p >= num_parts)
                throw DataError("InvalidPartition",
                                "node " + std::to_string(i) + " lists partition " +
                                    std::to_string(p));
            member[static_cast<std::size_t>(p)][i] = 1;
        }

    std::vector<SubGraph> subs(static_cast<std::size_t>(num_parts));
    for (int p = 0; p < num_parts; ++p) {
        const auto& in = member[static_cast<std::size_t>(p)];
        for (NodeId i = 0; i < s.node_count; ++i)
            if (in[i]) subs[static_cast<std::size_t>(p)].nodes.push_back(i);
        for (const TemporalEdge& e : s.edges)
            if (in[e.src] && in[e.dst])
                subs[static_cast<std::size_t>(p)].edges.push_back(e);
    }
    return subs;
}

std::vector<std::vector<NodeId>> shuffle_combine(
    const std::vector<std::vector<NodeId>>& small, int num_workers,
    std::uint64_t epoch_seed) {
    if (num_workers < 1 || small.empty() ||
        small.size() % static_cast<std::size_t>(num_workers) != 0)
        throw DataError("IndivisibleParts",
                        std::to_string(small.size()) + " parts cannot combine into " +
                            std::to_string(num_workers) + " groups");

    std::vector<std::size_t> perm(small.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    std::mt19937_64 rng(epoch_seed);
    fisher_yates(rng, perm);

    const std::size_t group_size = small.size() / static_cast<std::size_t>(num_workers);
    std::vector<std::vector<NodeId>> combined(static_cast<std::size_t>(num_workers));
    for (std::size_t g = 0; g < combined.size(); ++g) {
        auto& nodes = combined[g];
        for (std::size_t r = 0; r < group_size; ++r) {
            const auto& part = small[perm[g * group_size + r]];
            nodes.insert(nodes.end(), part.begin(), part.end());
        }
        std::sort(nodes.begin(), nodes.end());
        nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    }
    return combined;
}

void sync_shared(std::vector<MemoryStore>& mems, const std::vector<NodeId>& shared,
                 SyncStrategy strategy) {
    if (mems.size() < 2 || shared.empty()) return;
    const int d = mems.front().d;
    for (NodeId n : shared) {
        if (strategy == SyncStrategy::MaxTimestamp) {
            std::size_t best = 0;
            for (std::size_t w = 1; w < mems.size(); ++w)
                if (mems[w].last_ts[n] > mems[best].last_ts[n]) best = w;
            const std::vector<double> src(mems[best].row(n), mems[best].row(n) + d);
            const double ts = mems[best].last_ts[n];
            for (auto& mem : mems) {
                std::copy(src.begin(), src.end(), mem.row(n));
                mem.last_ts[n] = ts;
            }
        } else {
            // Mean of values that already coincide is the value itself;
            // skipping the arithmetic keeps double application bit-identical
            // for any worker count (naive re-averaging rounds when the count
            // is not a power of two).
            bool agree = true;
            for (std::size_t w = 1; w < mems.size() && agree; ++w) {
                agree = mems[w].last_ts[n] == mems[0].last_ts[n];
                for (int c = 0; c < d && agree; ++c)
                    agree = mems[w].row(n)[c] == mems[0].row(n)[c];
            }
            if (agree) continue;
            std::vector<double> mean(static_cast<std::size_t>(d), 0.0);
            double ts = 0.0;
            for (auto& mem : mems) {
                const double* r = mem.row(n);
                for (int c = 0; c < d; ++c) mean[static_cast<std::size_t>(c)] += r[c];
                ts = std::max(ts, mem.last_ts[n]);
            }
            for (double& v : mean) v /= static_cast<double>(mems.size());
            for (auto& mem : mems) {
                std::copy(mean.begin(), mean.end(), mem.row(n));
                mem.last_ts[n] = ts;
            }
        }
    }
}

EpochReport run_epoch(const std::vector<SubGraph>& subgraphs,
                      std::vector<MemoryStore>& mems, const ModelParams& model,
                      const std::vector<NodeId>& shared, SyncStrategy sync,
                      std::uint64_t batch_size, StepLog* log) {
    const std::size_t W = subgraphs.size();
    if (mems.size() != W)
        throw DataError("ConfigMismatch", "one memory store per worker required");
    if (batch_size < 1) throw DataError("InvalidParams", "need batch_size >= 1");

    EpochReport er;
    er.batches.assign(W, 0);
    er.loops.assign(W, 0);

    std::vector<std::uint64_t> pos(W, 0);
    std::vector<MemoryStore> snap(W);
    std::vector<std::uint8_t> done(W, 0);
    for (std::size_t w = 0; w < W; ++w) {
        const std::size_t n_edges = subgraphs[w].edges.size();
        er.batches[w] = (n_edges + batch_size - 1) / batch_size;
        if (er.batches[w] == 0) {
            // Nothing to traverse: vacuously complete at step 0.
            er.loops[w] = 1;
            snap[w] = mems[w];
            done[w] = 1;
            if (log) log->snapshots.emplace_back(static_cast<int>(w), mems[w].digest());
        }
    }

    std::uint64_t step = 0;
    while (!std::all_of(done.begin(), done.end(), [](std::uint8_t f) { return f != 0; })) {
        ++step;
        for (std::size_t w = 0; w < W; ++w) {
            if (er.batches[w] == 0) continue;
            if (pos[w] == 0) mems[w].reset(); // loop_start
            const auto& edges = subgraphs[w].edges;
            const std::size_t lo = static_cast<std::size_t>(pos[w] * batch_size);
            const std::size_t hi =
                std::min(edges.size(), static_cast<std::size_t>((pos[w] + 1) * batch_size));
            for (std::size_t e = lo; e < hi; ++e) model_update(mems[w], edges[e], model);
            if (log)
                log->steps.push_back(
                    {step, static_cast<int>(w), er.loops[w] + 1, pos[w] + 1});
            ++pos[w];
            if (pos[w] == er.batches[w]) { // loop_end
                ++er.loops[w];
                snap[w] = mems[w];
                done[w] = 1;
                pos[w] = 0;
                if (log)
                    log->snapshots.emplace_back(static_cast<int>(w), mems[w].digest());
            }
        }
    }

    for (std::size_t w = 0; w < W; ++w) mems[w] = snap[w]; // drop partial loops
    sync_shared(mems, shared, sync);
    er.sync_events = W >= 2 ? shared.size() : 0;
    for (const auto& mem : mems) er.digests.push_back(mem.digest());
    return er;
}

SimReport simulate(const EdgeStream& s, const PartitionAssignment& pa,
                   const SimConfig& cfg) {
    const int needed = cfg.shuffle ? cfg.num_small_parts : cfg.num_workers;
    if (pa.num_parts != needed)
        throw DataError("ConfigMismatch",
                        "assignment has " + std::to_string(pa.num_parts) +
                            " partitions, run needs " + std::to_string(needed));
    if (cfg.num_workers < 1 || cfg.epochs < 0)
        throw DataError("InvalidParams", "need workers >= 1 and epochs >= 0");
    if (cfg.shuffle && cfg.num_small_parts % cfg.num_workers != 0)
        throw DataError("IndivisibleParts",
                        "small parts must divide evenly across workers");

    const ModelParams model = ModelParams::seeded(cfg.d, cfg.model_seed);
    const std::vector<SubGraph> small = induce_subgraphs(s, pa.node_parts, pa.num_parts);

    // An edge "recovers" in an epoch when some combined group induces it
    // even though no small part does.
    std::vector<std::uint8_t> in_any_small(s.size(), 0);
    {
        std::vector<std::vector<std::uint8_t>> member(
            small.size(), std::vector<std::uint8_t>(s.node_count, 0));
        for (std::size_t p = 0; p < small.size(); ++p)
            for (NodeId n : small[p].nodes) member[p][n] = 1;
        for (std::size_t e = 0; e < s.size(); ++e)
            for (std::size_t p = 0; p < small.size(); ++p)
                if (member[p][s.edges[e].src] && member[p][s.edges[e].dst]) {
                    in_any_small[e] = 1;
                    break;
                }
    }
    std::vector<std::vector<NodeId>> small_nodes;
    small_nodes.reserve(small.size());
    for (const SubGraph& sub : small) small_nodes.push_back(sub.nodes);

    std::vector<MemoryStore> mems(
        static_cast<std::size_t>(cfg.num_workers),
        MemoryStore(s.node_count, cfg.d));

    SimReport rep;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::vector<SubGraph> subs;
        std::uint64_t recovered = 0;
        if (cfg.shuffle) {
            const std::vector<std::vector<NodeId>> groups = shuffle_combine(
                small_nodes, cfg.num_workers,
                cfg.shuffle_seed + static_cast<std::uint64_t>(epoch));
            subs.resize(groups.size());
            std::vector<std::uint8_t> in_any_group(s.size(), 0);
            for (std::size_t g = 0; g < groups.size(); ++g) {
                std::vector<std::uint8_t> member(s.node_count, 0);
                for (NodeId n : groups[g]) member[n] = 1;
                subs[g].nodes = groups[g];
                for (std::size_t e = 0; e < s.size(); ++e)
                    if (member[s.edges[e].src] && member[s.edges[e].dst]) {
                        subs[g].edges.push_back(s.edges[e]);
                        in_any_group[e] = 1;
                    }
            }
            for (std::size_t e = 0; e < s.size(); ++e)
                if (in_any_group[e] && !in_any_small[e]) ++recovered;
        } else {
            subs = small;
        }

        EpochReport er = run_epoch(subs, mems, model, pa.shared, cfg.sync,
                                   cfg.batch_size);
        er.recovered = recovered;
        rep.sync_events += er.sync_events;
        rep.epochs.push_back(std::move(er));
    }
    return rep;
}

} // namespace speedpart
