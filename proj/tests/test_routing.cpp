#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "dsroq/routing.hpp"

using namespace dsroq;

namespace {

// rows x cols lattice with uniform arc delay; matches region_topology's arc
// ordering (down pair then right pair per region, forward then reverse).
RegionTopology lattice(int rows, int cols, double delay_s = 5e-3) {
  RegionTopology topo;
  topo.rows = rows;
  topo.cols = cols;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const int u = r * cols + c;
      if (r + 1 < rows) {
        topo.arcs.emplace_back(u, u + cols);
        topo.arcs.emplace_back(u + cols, u);
        topo.arc_delay_s.push_back(delay_s);
        topo.arc_delay_s.push_back(delay_s);
      }
      if (c + 1 < cols) {
        topo.arcs.emplace_back(u, u + 1);
        topo.arcs.emplace_back(u + 1, u);
        topo.arc_delay_s.push_back(delay_s);
        topo.arc_delay_s.push_back(delay_s);
      }
    }
  }
  return topo;
}

bool loop_free(const RouteCandidate& r) {
  std::set<int> nodes(r.node_ids.begin(), r.node_ids.end());
  return nodes.size() == r.node_ids.size();
}

}  // namespace

TEST_CASE("a two-region topology has exactly one candidate") {
  const auto topo = lattice(1, 2);
  const auto routes = k_shortest_routes(topo, 0, 1, 4, 1e-3);
  REQUIRE(routes.size() == 1);
  CHECK(routes[0].hop_count() == 1);
  CHECK(routes[0].node_ids == std::vector<int>{0, 1});
  CHECK(routes[0].total_prop_delay_s == Catch::Approx(5e-3));
}

TEST_CASE("diagonal of a 2x2 lattice has two two-hop candidates") {
  const auto topo = lattice(2, 2);
  const auto routes = k_shortest_routes(topo, 0, 3, 4, 1e-3);
  REQUIRE(routes.size() == 2);
  CHECK(routes[0].hop_count() == 2);
  CHECK(routes[1].hop_count() == 2);
  CHECK(routes[0].node_ids != routes[1].node_ids);
  for (const auto& r : routes) {
    CHECK(r.node_ids.front() == 0);
    CHECK(r.node_ids.back() == 3);
    CHECK(loop_free(r));
  }
}

TEST_CASE("corner-to-corner candidates on a 4x4 lattice are six hops") {
  const auto topo = lattice(4, 4);
  const auto routes = k_shortest_routes(topo, 0, 15, 3, 1e-3);
  REQUIRE(routes.size() == 3);
  for (const auto& r : routes) {
    CHECK(r.hop_count() >= 6);  // Manhattan distance between opposite corners
    CHECK(loop_free(r));
    CHECK(r.node_ids.front() == 0);
    CHECK(r.node_ids.back() == 15);
  }
}

TEST_CASE("candidates come out in nondecreasing cost order without duplicates") {
  const auto topo = lattice(3, 4);
  const auto routes = k_shortest_routes(topo, 0, 11, 8, 1e-3);
  REQUIRE(routes.size() >= 2);
  std::set<std::vector<int>> distinct;
  for (size_t i = 0; i < routes.size(); ++i) {
    REQUIRE(distinct.insert(routes[i].arc_ids).second);
    if (i > 0) REQUIRE(routes[i].total_cost >= routes[i - 1].total_cost - 1e-15);
  }
}

TEST_CASE("route cost counts one transmission slot per hop") {
  const auto topo = lattice(1, 3, 2e-3);
  const auto routes = k_shortest_routes(topo, 0, 2, 1, 1e-3);
  REQUIRE(routes.size() == 1);
  CHECK(routes[0].hop_count() == 2);
  CHECK(routes[0].total_prop_delay_s == Catch::Approx(4e-3));
  CHECK(routes[0].total_cost == Catch::Approx(6e-3));
}

TEST_CASE("invalid route queries are rejected") {
  const auto topo = lattice(2, 2);
  CHECK_THROWS_AS(k_shortest_routes(topo, 0, 0, 4, 1e-3), std::invalid_argument);
  CHECK_THROWS_AS(k_shortest_routes(topo, -1, 3, 4, 1e-3), std::invalid_argument);
  CHECK_THROWS_AS(k_shortest_routes(topo, 0, 4, 4, 1e-3), std::invalid_argument);
  CHECK_THROWS_AS(k_shortest_routes(topo, 0, 3, 0, 1e-3), std::invalid_argument);

  RegionTopology disconnected;
  disconnected.rows = 1;
  disconnected.cols = 4;  // two islands: 0-1 and 2-3
  disconnected.arcs = {{0, 1}, {1, 0}, {2, 3}, {3, 2}};
  disconnected.arc_delay_s = {1e-3, 1e-3, 1e-3, 1e-3};
  CHECK_THROWS_AS(k_shortest_routes(disconnected, 0, 3, 2, 1e-3), NoRouteError);
}

TEST_CASE("route enumeration is deterministic") {
  const auto topo = lattice(4, 4);
  const auto a = k_shortest_routes(topo, 1, 14, 6, 1e-3);
  const auto b = k_shortest_routes(topo, 1, 14, 6, 1e-3);
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) REQUIRE(a[i].arc_ids == b[i].arc_ids);
}

TEST_CASE("bandwidth grid spans the requested interval") {
  const auto grid = bandwidth_grid(0.1, 0.5, 5);
  REQUIRE(grid.size() == 5);
  const double expected[] = {0.1, 0.2, 0.3, 0.4, 0.5};
  for (size_t i = 0; i < 5; ++i) CHECK(grid[i] == Catch::Approx(expected[i]).epsilon(1e-12));

  const auto single = bandwidth_grid(0.3, 0.9, 1);
  REQUIRE(single.size() == 1);
  CHECK(single[0] == 0.3);

  CHECK_THROWS_AS(bandwidth_grid(0.1, 0.5, 0), std::invalid_argument);
  CHECK_THROWS_AS(bandwidth_grid(-0.1, 0.5, 3), std::invalid_argument);
  CHECK_THROWS_AS(bandwidth_grid(0.5, 0.1, 3), std::invalid_argument);
}
