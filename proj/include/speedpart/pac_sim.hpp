#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "speedpart/partitioner.hpp"
#include "speedpart/types.hpp"

namespace speedpart {

struct SubGraph {
    std::vector<NodeId> nodes;        // ascending
    std::vector<TemporalEdge> edges;  // time-sorted, induced on nodes
};

// Dense per-worker memory: node_count rows of d reals plus a last-update
// timestamp per node. Rows for nodes a worker never touches stay zero.
struct MemoryStore {
    NodeId node_count = 0;
    int d = 0;
    std::vector<double> state;   // node_count * d, row-major
    std::vector<double> last_ts; // node_count

    MemoryStore() = default;
    MemoryStore(NodeId node_count_, int d_)
        : node_count(node_count_), d(d_),
          state(static_cast<std::size_t>(node_count_) * d_, 0.0),
          last_ts(node_count_, 0.0) {}

    double* row(NodeId i) { return state.data() + static_cast<std::size_t>(i) * d; }
    const double* row(NodeId i) const {
        return state.data() + static_cast<std::size_t>(i) * d;
    }
    void reset();
    // FNV-1a over the little-endian image of every node's state row
    // followed by its timestamp, in id order.
    std::string digest() const;
};

// Fixed surrogate for the learned message/update modules: for an edge
// (i,j,t) each endpoint x with counterpart y gets
//   m = tanh(W_m * [s'_x || s'_y || cos(omega * (t - last_ts(x)))])
//   s_x = (1 - gamma) * s'_x + gamma * m
// with both messages computed from pre-edge states. W_m is d x 3d with
// seeded N(0,1)/sqrt(3d) entries; omega is a log-spaced grid over three
// decades with a seeded scale factor; gamma is 0.5.
struct ModelParams {
    int d = 8;
    double gamma = 0.5;
    std::vector<double> w_m;   // d rows x 3d cols, row-major
    std::vector<double> omega; // d frequencies

    static ModelParams seeded(int d, std::uint64_t seed);
};

// Applies one interaction to both endpoint rows (once for a self-loop).
// Rejects edges older than an endpoint's last_ts.
void model_update(MemoryStore& mem, const TemporalEdge& e, const ModelParams& model);

enum class SyncStrategy { MaxTimestamp, Average };

struct SimConfig {
    int num_workers = 1;
    int num_small_parts = 1;
    bool shuffle = false;
    SyncStrategy sync = SyncStrategy::MaxTimestamp;
    std::uint64_t batch_size = 1;
    int epochs = 1;
    int d = 8;
    std::uint64_t model_seed = 0;
    std::uint64_t shuffle_seed = 0; // epoch e permutes with shuffle_seed + e
};

struct EpochReport {
    std::vector<std::uint64_t> batches; // per worker: batches in one traversal
    std::vector<std::uint64_t> loops;   // per worker: traversals completed
    std::uint64_t recovered = 0;        // edges absent from every small part
    std::uint64_t sync_events = 0;      // shared nodes synced this epoch
    std::vector<std::string> digests;   // per worker, after restore + sync
};

struct SimReport {
    std::vector<EpochReport> epochs;
    std::uint64_t sync_events = 0;
};

// Optional instrumentation for run_epoch.
struct StepRecord {
    std::uint64_t global_step = 0; // 1-based
    int worker = 0;
    std::uint64_t loop = 0;          // 1-based traversal number
    std::uint64_t batch_in_loop = 0; // 1-based position within the traversal
};

struct StepLog {
    std::vector<StepRecord> steps;
    // (worker, digest) captured at each loop_end snapshot, in event order.
    std::vector<std::pair<int, std::string>> snapshots;
};

std::vector<SubGraph> induce_subgraphs(const EdgeStream& s,
                                       const std::vector<std::vector<PartId>>& node_parts,
                                       int num_parts);

// Seed-deterministic permutation of the small parts, grouped consecutively
// into num_workers unions of node sets.
std::vector<std::vector<NodeId>> shuffle_combine(
    const std::vector<std::vector<NodeId>>& small, int num_workers,
    std::uint64_t epoch_seed);

// One epoch of lockstep training: every global step each unfinished worker
// consumes one mini-batch; a worker that exhausts its traversal snapshots
// its memory (loop_end), resets, and restarts (loop_start). The epoch ends
// once every worker has at least one complete traversal; memories are then
// restored to the latest snapshot and shared nodes are synchronized.
EpochReport run_epoch(const std::vector<SubGraph>& subgraphs,
                      std::vector<MemoryStore>& mems, const ModelParams& model,
                      const std::vector<NodeId>& shared, SyncStrategy sync,
                      std::uint64_t batch_size, StepLog* log = nullptr);

// Overwrites every worker's copy of each shared node: max_timestamp takes
// the copy with the largest last_ts (tie -> lowest worker), average takes
// the element-wise mean and the max timestamp.
void sync_shared(std::vector<MemoryStore>& mems, const std::vector<NodeId>& shared,
                 SyncStrategy strategy);

// Full protocol over cfg.epochs epochs. With shuffle on, each epoch
// re-groups the small parts (seed shuffle_seed + epoch) and re-induces the
// combined subgraphs; recovered counts the edges those unions gain over
// all small parts together.
SimReport simulate(const EdgeStream& s, const PartitionAssignment& pa,
                   const SimConfig& cfg);

} // namespace speedpart
