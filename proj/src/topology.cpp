#include "smart/topology.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace smart {

using nlohmann::json;

void DragonflyConfig::validate() const {
  if (num_groups < 1 || routers_per_group < 1 || terminals_per_router < 1 ||
      global_ports_per_router < 0) {
    throw ConfigError(
        "ConfigInvalid: counts must be positive "
        "(global ports may be zero for a single group)");
  }
  if (num_groups > 1) {
    if (global_ports_per_router < 1) {
      throw ConfigError(
          "ConfigInvalid: multi-group system needs global ports");
    }
    long long slots =
        static_cast<long long>(routers_per_group) * global_ports_per_router;
    if (slots < num_groups - 1) {
      throw ConfigError(
          "ConfigInfeasible: group all-to-all needs routers_per_group x "
          "global_ports_per_router >= num_groups - 1");
    }
  }
}

std::string to_string(PortKind kind) {
  switch (kind) {
    case PortKind::Terminal: return "terminal";
    case PortKind::Local: return "local";
    case PortKind::Global: return "global";
  }
  return "terminal";
}

PortKind port_kind_from_string(const std::string& s) {
  if (s == "terminal") return PortKind::Terminal;
  if (s == "local") return PortKind::Local;
  if (s == "global") return PortKind::Global;
  throw DataError("unknown port kind: " + s);
}

namespace {

Matrix compute_adjacency_norm(int n,
                              const std::vector<std::pair<int, int>>& edges) {
  Matrix a = Matrix::Identity(n, n);  // self-loops
  for (const auto& [u, v] : edges) {
    a(u, v) = 1.0;
    a(v, u) = 1.0;
  }
  Vector deg = a.rowwise().sum();
  Vector inv_sqrt = deg.array().sqrt().inverse();
  return inv_sqrt.asDiagonal() * a * inv_sqrt.asDiagonal();
}

}  // namespace

GraphTopology::GraphTopology(DragonflyConfig config,
                             std::vector<PortNode> nodes,
                             std::vector<std::pair<int, int>> edges)
    : config_(config), nodes_(std::move(nodes)), edges_(std::move(edges)) {
  adj_list_.assign(nodes_.size(), {});
  for (const auto& [u, v] : edges_) {
    adj_list_[u].push_back(v);
    adj_list_[v].push_back(u);
  }
  for (auto& nb : adj_list_) std::sort(nb.begin(), nb.end());
  adjacency_norm_ =
      compute_adjacency_norm(static_cast<int>(nodes_.size()), edges_);
}

int GraphTopology::node_of_compute(int compute_node) const {
  int router = compute_node / config_.terminals_per_router;
  int slot = compute_node % config_.terminals_per_router;
  return node_of_port(router, slot);
}

GraphTopology build_topology(const DragonflyConfig& config) {
  config.validate();

  const int groups = config.num_groups;
  const int rpg = config.routers_per_group;
  const int tpr = config.terminals_per_router;
  const int lpr = config.local_ports_per_router();
  const int gpr = config.global_ports_per_router;
  const int ppr = config.ports_per_router();

  std::vector<PortNode> nodes;
  nodes.reserve(static_cast<size_t>(config.num_ports()));
  for (int g = 0; g < groups; ++g) {
    for (int r = 0; r < rpg; ++r) {
      int router = g * rpg + r;
      for (int slot = 0; slot < ppr; ++slot) {
        PortNode n;
        n.node_id = router * ppr + slot;
        n.router_id = router;
        n.group_id = g;
        if (slot < tpr) {
          n.kind = PortKind::Terminal;
          n.attached_compute_node = router * tpr + slot;
        } else if (slot < tpr + lpr) {
          n.kind = PortKind::Local;
        } else {
          n.kind = PortKind::Global;
        }
        nodes.push_back(n);
      }
    }
  }

  std::vector<std::pair<int, int>> edges;

  // Ports of one router form a complete subgraph.
  for (int router = 0; router < config.num_routers(); ++router) {
    int base = router * ppr;
    for (int i = 0; i < ppr; ++i) {
      for (int j = i + 1; j < ppr; ++j) {
        edges.emplace_back(base + i, base + j);
      }
    }
  }

  // Local links: intra-group all-to-all between routers. Router r's local
  // port for peer q is indexed by q with r itself skipped.
  auto local_port_node = [&](int g, int r, int peer) {
    int slot = tpr + (peer < r ? peer : peer - 1);
    return (g * rpg + r) * ppr + slot;
  };
  for (int g = 0; g < groups; ++g) {
    for (int r = 0; r < rpg; ++r) {
      for (int q = r + 1; q < rpg; ++q) {
        edges.emplace_back(local_port_node(g, r, q), local_port_node(g, q, r));
      }
    }
  }

  // Global links, canonical round-robin over port slots.
  auto global_port_node = [&](int g, int slot) {
    int r = slot / gpr;
    int p = slot % gpr;
    return (g * rpg + r) * ppr + tpr + lpr + p;
  };
  for (int g = 0; g < groups; ++g) {
    for (int h = g + 1; h < groups; ++h) {
      int slot_g = h - g - 1;
      int slot_h = ((g - h - 1) % groups + groups) % groups;
      edges.emplace_back(global_port_node(g, slot_g),
                         global_port_node(h, slot_h));
    }
  }

  for (auto& e : edges) {
    if (e.first > e.second) std::swap(e.first, e.second);
  }
  std::sort(edges.begin(), edges.end());

  return GraphTopology(config, std::move(nodes), std::move(edges));
}

Matrix normalized_adjacency(const GraphTopology& topology) {
  return topology.adjacency_norm();
}

namespace {

json config_to_json(const DragonflyConfig& c) {
  return json{{"num_groups", c.num_groups},
              {"routers_per_group", c.routers_per_group},
              {"terminals_per_router", c.terminals_per_router},
              {"global_ports_per_router", c.global_ports_per_router}};
}

DragonflyConfig config_from_json(const json& j) {
  DragonflyConfig c;
  c.num_groups = j.at("num_groups").get<int>();
  c.routers_per_group = j.at("routers_per_group").get<int>();
  c.terminals_per_router = j.at("terminals_per_router").get<int>();
  c.global_ports_per_router = j.at("global_ports_per_router").get<int>();
  return c;
}

}  // namespace

std::string topology_to_json(const GraphTopology& topology) {
  json doc;
  doc["config"] = config_to_json(topology.config());
  json nodes = json::array();
  for (const auto& n : topology.nodes()) {
    json jn{{"id", n.node_id},
            {"router", n.router_id},
            {"group", n.group_id},
            {"kind", to_string(n.kind)}};
    if (n.kind == PortKind::Terminal) jn["compute"] = n.attached_compute_node;
    nodes.push_back(jn);
  }
  doc["nodes"] = nodes;
  json edges = json::array();
  for (const auto& [u, v] : topology.edges()) {
    edges.push_back(json::array({u, v}));
  }
  doc["edges"] = edges;
  return doc.dump(2);
}

GraphTopology topology_from_json(const std::string& text) {
  json doc = json::parse(text);
  DragonflyConfig config = config_from_json(doc.at("config"));
  std::vector<PortNode> nodes;
  for (const auto& jn : doc.at("nodes")) {
    PortNode n;
    n.node_id = jn.at("id").get<int>();
    n.router_id = jn.at("router").get<int>();
    n.group_id = jn.at("group").get<int>();
    n.kind = port_kind_from_string(jn.at("kind").get<std::string>());
    n.attached_compute_node =
        jn.contains("compute") ? jn.at("compute").get<int>() : -1;
    nodes.push_back(n);
  }
  std::vector<std::pair<int, int>> edges;
  for (const auto& je : doc.at("edges")) {
    edges.emplace_back(je.at(0).get<int>(), je.at(1).get<int>());
  }
  return GraphTopology(config, std::move(nodes), std::move(edges));
}

void save_topology(const GraphTopology& topology, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  out << topology_to_json(topology) << "\n";
}

GraphTopology load_topology(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return topology_from_json(ss.str());
}

}  // namespace smart
