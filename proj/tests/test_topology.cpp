#include "smart/topology.hpp"

#include <algorithm>
#include <filesystem>
#include <set>
#include <vector>

#include "doctest.h"

using namespace smart;

namespace {

using EdgeSet = std::set<std::pair<int, int>>;

// Brute-force edge enumerator: re-derives the wiring rules from node
// attributes with plain loops, independent of build_topology's enumeration.
EdgeSet oracle_edges(const DragonflyConfig& c) {
  EdgeSet out;
  const int tpr = c.terminals_per_router;
  const int lpr = c.local_ports_per_router();
  const int gpr = c.global_ports_per_router;
  const int ppr = c.ports_per_router();
  const int n = c.num_ports();

  auto router_of = [&](int node) { return node / ppr; };
  auto slot_of = [&](int node) { return node % ppr; };

  // clique pairs: any two ports of the same router
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (router_of(u) == router_of(v)) out.insert({u, v});
    }
  }

  // local links: router a's local port indexed toward b pairs with router
  // b's local port indexed toward a, within one group
  for (int g = 0; g < c.num_groups; ++g) {
    for (int a = 0; a < c.routers_per_group; ++a) {
      for (int b = 0; b < c.routers_per_group; ++b) {
        if (a == b) continue;
        int slot_a = tpr + (b < a ? b : b - 1);
        int slot_b = tpr + (a < b ? a : a - 1);
        int u = (g * c.routers_per_group + a) * ppr + slot_a;
        int v = (g * c.routers_per_group + b) * ppr + slot_b;
        out.insert({std::min(u, v), std::max(u, v)});
      }
    }
  }

  // global links: pair {g,h} uses slot (h-g-1) mod G on g's side
  for (int g = 0; g < c.num_groups; ++g) {
    for (int h = 0; h < c.num_groups; ++h) {
      if (g == h) continue;
      int slot = ((h - g - 1) % c.num_groups + c.num_groups) % c.num_groups;
      int peer_slot =
          ((g - h - 1) % c.num_groups + c.num_groups) % c.num_groups;
      int u = (g * c.routers_per_group + slot / gpr) * ppr + tpr + lpr +
              slot % gpr;
      int v = (h * c.routers_per_group + peer_slot / gpr) * ppr + tpr + lpr +
              peer_slot % gpr;
      out.insert({std::min(u, v), std::max(u, v)});
    }
  }
  return out;
}

// Loop-based recomputation of D^{-1/2}(A+I)D^{-1/2}, no Eigen arithmetic.
std::vector<std::vector<double>> oracle_norm_adjacency(
    int n, const std::vector<std::pair<int, int>>& edges) {
  std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) a[i][i] = 1.0;
  for (const auto& [u, v] : edges) a[u][v] = a[v][u] = 1.0;
  std::vector<double> deg(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) deg[i] += a[i][j];
  std::vector<std::vector<double>> out(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out[i][j] = a[i][j] / std::sqrt(deg[i] * deg[j]);
  return out;
}

EdgeSet edge_set(const GraphTopology& t) {
  return EdgeSet(t.edges().begin(), t.edges().end());
}

}  // namespace

TEST_CASE("degenerate single-port config") {
  auto topo = build_topology({1, 1, 1, 0});
  CHECK(topo.num_nodes() == 1);
  CHECK(topo.edges().empty());
  CHECK(topo.adjacency_norm().rows() == 1);
  CHECK(topo.adjacency_norm()(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("3-group toy system matches enumeration oracle") {
  DragonflyConfig c{3, 2, 1, 1};
  auto topo = build_topology(c);
  CHECK(topo.num_nodes() == 18);
  CHECK(topo.edges().size() == 24);

  int clique = 0, local_link = 0, global_link = 0;
  for (const auto& [u, v] : topo.edges()) {
    const auto& a = topo.nodes()[u];
    const auto& b = topo.nodes()[v];
    if (a.router_id == b.router_id) {
      ++clique;
    } else if (a.group_id == b.group_id) {
      ++local_link;
    } else {
      ++global_link;
    }
  }
  CHECK(clique == 18);
  CHECK(local_link == 3);
  CHECK(global_link == 3);

  CHECK(edge_set(topo) == oracle_edges(c));
}

TEST_CASE("canonical 1056-node system") {
  DragonflyConfig c{33, 8, 4, 4};
  auto topo = build_topology(c);
  CHECK(c.num_compute_nodes() == 1056);
  CHECK(c.num_routers() == 264);
  CHECK(topo.num_nodes() == 3960);
  CHECK(edge_set(topo) == oracle_edges(c));

  // every global port used exactly once: 33 choose 2 links
  int global_link = 0;
  for (const auto& [u, v] : topo.edges()) {
    if (topo.nodes()[u].group_id != topo.nodes()[v].group_id) ++global_link;
  }
  CHECK(global_link == 33 * 32 / 2);
}

TEST_CASE("edge sets match oracle across feasible configs") {
  std::vector<DragonflyConfig> configs = {
      {1, 1, 1, 0}, {1, 4, 2, 0}, {2, 1, 1, 1}, {2, 2, 1, 1},
      {4, 3, 1, 1}, {5, 2, 2, 2}, {6, 5, 1, 1}, {3, 2, 3, 2},
  };
  for (const auto& c : configs) {
    CAPTURE(c.num_groups);
    CAPTURE(c.routers_per_group);
    auto topo = build_topology(c);
    CHECK(edge_set(topo) == oracle_edges(c));
  }
}

TEST_CASE("invalid and infeasible configs are rejected") {
  CHECK_THROWS_AS(build_topology({0, 1, 1, 1}), ConfigError);
  CHECK_THROWS_AS(build_topology({2, 1, 0, 1}), ConfigError);
  CHECK_THROWS_WITH_AS(build_topology({8, 2, 1, 3}),
                       doctest::Contains("ConfigInfeasible"), ConfigError);
  CHECK_THROWS_WITH_AS(build_topology({3, 1, 1, 0}),
                       doctest::Contains("ConfigInvalid"), ConfigError);
}

TEST_CASE("two builds are identical") {
  DragonflyConfig c{4, 3, 2, 1};
  auto a = build_topology(c);
  auto b = build_topology(c);
  CHECK(a.edges() == b.edges());
  REQUIRE(a.num_nodes() == b.num_nodes());
  for (int i = 0; i < a.num_nodes(); ++i) {
    CHECK(a.nodes()[i].router_id == b.nodes()[i].router_id);
    CHECK(a.nodes()[i].kind == b.nodes()[i].kind);
    CHECK(a.nodes()[i].attached_compute_node ==
          b.nodes()[i].attached_compute_node);
  }
}

TEST_CASE("normalized adjacency hand-checked values") {
  // two ports on one router: both degrees 2 with self-loops
  auto pair_topo = build_topology({1, 1, 2, 0});
  REQUIRE(pair_topo.num_nodes() == 2);
  const auto& m = pair_topo.adjacency_norm();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) CHECK(m(i, j) == doctest::Approx(0.5));

  // path of 3 nodes, built directly
  std::vector<PortNode> nodes(3);
  for (int i = 0; i < 3; ++i) nodes[i].node_id = i;
  GraphTopology path({1, 1, 3, 0}, nodes, {{0, 1}, {1, 2}});
  const auto& p = path.adjacency_norm();
  double inv_sqrt6 = 1.0 / std::sqrt(6.0);
  CHECK(p(0, 0) == doctest::Approx(0.5));
  CHECK(p(1, 1) == doctest::Approx(1.0 / 3.0));
  CHECK(p(2, 2) == doctest::Approx(0.5));
  CHECK(p(0, 1) == doctest::Approx(inv_sqrt6));
  CHECK(p(1, 0) == doctest::Approx(inv_sqrt6));
  CHECK(p(0, 2) == doctest::Approx(0.0));
}

TEST_CASE("normalized adjacency properties on small instances") {
  std::vector<DragonflyConfig> configs = {{2, 2, 1, 1}, {3, 2, 1, 1},
                                          {2, 3, 1, 1}, {1, 2, 2, 0}};
  for (const auto& c : configs) {
    auto topo = build_topology(c);
    REQUIRE(topo.num_nodes() <= 50);
    const auto& m = topo.adjacency_norm();

    CHECK((m - m.transpose()).cwiseAbs().maxCoeff() == doctest::Approx(0.0));

    Eigen::SelfAdjointEigenSolver<Matrix> es(m);
    CHECK(es.eigenvalues().cwiseAbs().maxCoeff() <= 1.0 + 1e-9);

    auto oracle = oracle_norm_adjacency(topo.num_nodes(), topo.edges());
    for (int i = 0; i < topo.num_nodes(); ++i)
      for (int j = 0; j < topo.num_nodes(); ++j)
        CHECK(m(i, j) == doctest::Approx(oracle[i][j]).epsilon(1e-12));
  }
}

TEST_CASE("json round-trip") {
  namespace fs = std::filesystem;
  fs::create_directories(SMART_TEST_TMPDIR);
  auto topo = build_topology({3, 2, 1, 1});
  std::string path = std::string(SMART_TEST_TMPDIR) + "/topo.json";
  save_topology(topo, path);
  auto back = load_topology(path);
  CHECK(back.edges() == topo.edges());
  CHECK(back.config() == topo.config());
  CHECK(back.nodes()[0].attached_compute_node == 0);
  CHECK((back.adjacency_norm() - topo.adjacency_norm())
            .cwiseAbs()
            .maxCoeff() == doctest::Approx(0.0));
}
