#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "smart/common.hpp"

namespace smart {

// Structural parameters of a 1D Dragonfly system: routers within a group are
// fully connected by local links, groups are all-to-all connected by global
// links, and compute nodes attach through terminal ports.
struct DragonflyConfig {
  int num_groups = 33;
  int routers_per_group = 8;
  int terminals_per_router = 4;
  int global_ports_per_router = 4;

  int local_ports_per_router() const { return routers_per_group - 1; }
  int ports_per_router() const {
    return terminals_per_router + local_ports_per_router() +
           global_ports_per_router;
  }
  int num_routers() const { return num_groups * routers_per_group; }
  int num_ports() const { return num_routers() * ports_per_router(); }
  int num_compute_nodes() const {
    return num_routers() * terminals_per_router;
  }

  // Throws ConfigError (ConfigInvalid / ConfigInfeasible).
  void validate() const;

  bool operator==(const DragonflyConfig&) const = default;
};

enum class PortKind { Terminal, Local, Global };

std::string to_string(PortKind kind);
PortKind port_kind_from_string(const std::string& s);

struct PortNode {
  int node_id = -1;
  int router_id = -1;
  int group_id = -1;
  PortKind kind = PortKind::Terminal;
  int attached_compute_node = -1;  // terminal ports only, else -1
};

// Immutable port-level graph of a Dragonfly system. Node ids are a pure
// function of the config: group-major, router-minor, ports ordered
// terminal < local < global within a router.
class GraphTopology {
 public:
  GraphTopology() = default;
  GraphTopology(DragonflyConfig config, std::vector<PortNode> nodes,
                std::vector<std::pair<int, int>> edges);

  const DragonflyConfig& config() const { return config_; }
  const std::vector<PortNode>& nodes() const { return nodes_; }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  int num_nodes() const { return static_cast<int>(nodes_.size()); }

  // Cached D^{-1/2} (A + I) D^{-1/2}.
  const Matrix& adjacency_norm() const { return adjacency_norm_; }

  int node_of_port(int router_id, int port_slot) const {
    return router_id * config_.ports_per_router() + port_slot;
  }
  int port_slot(int node_id) const {
    return node_id % config_.ports_per_router();
  }
  // Terminal port node attached to a compute node.
  int node_of_compute(int compute_node) const;

  const std::vector<std::vector<int>>& neighbors() const { return adj_list_; }

 private:
  DragonflyConfig config_;
  std::vector<PortNode> nodes_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<int>> adj_list_;
  Matrix adjacency_norm_;
};

// Deterministic node/edge enumeration for a validated config. Global links
// are assigned round-robin: the link between groups g < h occupies port slot
// (h-g-1) on g's side and (g-h-1) mod G on h's side, slots mapped onto
// (router, port) pairs in order.
GraphTopology build_topology(const DragonflyConfig& config);

// Symmetric-normalized adjacency with self-loops over the topology's nodes.
Matrix normalized_adjacency(const GraphTopology& topology);

std::string topology_to_json(const GraphTopology& topology);
GraphTopology topology_from_json(const std::string& text);
void save_topology(const GraphTopology& topology, const std::string& path);
GraphTopology load_topology(const std::string& path);

}  // namespace smart
