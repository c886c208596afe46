#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "smart/topology.hpp"

namespace smart {

// One aggregation statistic applied to a raw feature over a time window.
struct FeatureStat {
  enum class Kind { Min, Max, Mean, Quantile };
  Kind kind = Kind::Mean;
  double q = 0.5;

  static FeatureStat parse(const std::string& text);
  std::string name() const;
  double apply(const std::vector<double>& sorted_values) const;
};

std::vector<FeatureStat> parse_stats(const std::vector<std::string>& names);

// Port-level counter snapshots keyed by (router_id, port_slot).
struct SnapshotTable {
  struct Series {
    std::vector<int64_t> time_ns;  // strictly increasing
    std::vector<Vector> values;    // one row per snapshot, schema order
  };

  std::vector<std::string> feature_names;
  int64_t cadence_ns = 250'000;
  std::map<std::pair<int, int>, Series> by_port;

  bool empty() const { return by_port.empty(); }
  const Series* series(int router_id, int port_slot) const;
};

struct IterationRecord {
  std::string app;
  int rank = 0;  // 1-based
  int iter = 0;  // 1-based
  int64_t start_ns = 0;
  int64_t end_ns = 0;

  int64_t duration_ns() const { return end_ns - start_ns; }
};

struct IterationTable {
  std::vector<IterationRecord> records;
  // (app, rank) -> records ordered and contiguous in iter
  std::map<std::pair<std::string, int>, std::vector<const IterationRecord*>>
      by_rank;

  void index();  // builds by_rank; validates ordering/overlap per rank
  const IterationRecord* find(const std::string& app, int rank,
                              int iter) const;
  int max_iter(const std::string& app) const;
  std::vector<int> ranks_of(const std::string& app) const;
};

struct PlacementMap {
  std::map<std::pair<std::string, int>, int> rank_to_node;  // (app,rank)->compute
  std::map<int, std::string> node_app;  // compute node -> app or "background"

  std::optional<std::pair<std::string, int>> rank_at(int compute_node) const;
  void validate(const DragonflyConfig& config) const;
};

// Per-iteration node features over a fixed topology, with the active mask and
// targets for the app under prediction.
struct TemporalGraphSequence {
  std::shared_ptr<const GraphTopology> topology;
  std::string target_app;
  std::vector<std::string> feature_names;  // raw x stat, d_f entries
  std::vector<Matrix> features;            // X^(t): |V| x d_f, index t-1
  std::vector<int> active_nodes;           // sorted port-node ids (V_a)
  Matrix targets;                          // T x |V_a|, nanoseconds
  int empty_window_count = 0;

  int num_iterations() const { return static_cast<int>(features.size()); }
  int num_active() const { return static_cast<int>(active_nodes.size()); }
  int d_f() const {
    return features.empty() ? 0 : static_cast<int>(features[0].cols());
  }
};

void save_sequence(const TemporalGraphSequence& seq, const std::string& path);
TemporalGraphSequence load_sequence(const std::string& path);

// One training/inference example. Histories are contiguous and end at
// iteration t; the target is y_{t+1} per active node. Raw nanoseconds.
struct WindowSample {
  int t = 0;                      // 1-based iteration the histories end at
  Matrix y_history;               // L_y x |V_a|
  std::vector<Matrix> x_history;  // L_x matrices of |V| x d_f
  Vector target;                  // |V_a|
};

// Resolves the three-case aggregation bounds rule against a fixed topology,
// iteration table, and placement. Nearest-active lookups are cached.
class AggregationContext {
 public:
  AggregationContext(std::shared_ptr<const GraphTopology> topology,
                     const IterationTable& iterations,
                     const PlacementMap& placement, std::string target_app);

  const std::vector<int>& active_nodes() const { return active_nodes_; }
  bool is_active(int node_id) const { return rank_of_node_.count(node_id) > 0; }

  // [lb, ub) for one node at one iteration.
  std::pair<int64_t, int64_t> bounds(int node_id, int iter) const;

  // BFS hop distance, ties broken by lowest active-node id.
  int nearest_active(int node_id) const;

 private:
  std::pair<int64_t, int64_t> own_bounds(int node_id, int iter) const;

  std::shared_ptr<const GraphTopology> topology_;
  const IterationTable& iterations_;
  std::string target_app_;
  std::vector<int> active_nodes_;
  std::map<int, int> rank_of_node_;  // active port node -> rank
  mutable std::vector<int> nearest_cache_;
};

std::pair<int64_t, int64_t> aggregation_bounds(const AggregationContext& ctx,
                                               int node_id, int iter);

// One output component per (raw feature, statistic) over snapshots with
// lb <= time < ub. An empty window falls back to the last value before lb
// (0 if none); *empty_flag reports that this happened.
Vector aggregate_features(const SnapshotTable::Series& series, int64_t lb,
                          int64_t ub, const std::vector<FeatureStat>& stats,
                          bool* empty_flag = nullptr);

TemporalGraphSequence build_sequence(
    std::shared_ptr<const GraphTopology> topology,
    const SnapshotTable& snapshots, const IterationTable& iterations,
    const PlacementMap& placement, const std::string& target_app,
    const std::vector<FeatureStat>& stats);

std::vector<WindowSample> window_stream(const TemporalGraphSequence& seq,
                                        int l_y, int l_x);

// --- file formats -------------------------------------------------------

struct SnapshotColumnMap {
  std::string time = "time_ns";
  std::string router = "router_id";
  std::string port = "port_id";
};

struct DatasetManifest {
  std::string snapshots_path = "snapshots.csv";
  std::string iterations_path = "iterations.csv";
  std::string placement_path = "placement.csv";
  int64_t cadence_ns = 250'000;
  DragonflyConfig topology;
  std::vector<std::string> feature_columns;
  std::vector<std::string> stats = {"mean", "max"};
  SnapshotColumnMap columns;

  static DatasetManifest load(const std::string& path);
  void save(const std::string& path) const;
};

struct Dataset {
  DatasetManifest manifest;
  std::shared_ptr<const GraphTopology> topology;
  SnapshotTable snapshots;
  IterationTable iterations;
  PlacementMap placement;
};

SnapshotTable load_snapshots_csv(const std::string& path,
                                 const std::vector<std::string>& features,
                                 const SnapshotColumnMap& columns,
                                 int64_t cadence_ns);
IterationTable load_iterations_csv(const std::string& path);
PlacementMap load_placement_csv(const std::string& path);

// Loads all three trace files named by a manifest (paths relative to it).
Dataset load_dataset(const std::string& manifest_path);

TemporalGraphSequence ingest(const Dataset& dataset,
                             const std::string& target_app);

}  // namespace smart
