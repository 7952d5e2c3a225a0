#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <numbers>

#include "dsroq/constellation.hpp"

using namespace dsroq;

namespace {

ShellParams default_shell() { return {}; }  // 72 planes x 22 sats, 550 km, 53 deg

}  // namespace

TEST_CASE("orbit radius is earth radius plus altitude") {
  CHECK(default_shell().orbit_radius_km() == Catch::Approx(6921.0).epsilon(1e-12));
}

TEST_CASE("positions repeat after one orbital period") {
  const ShellParams shell = default_shell();
  const double period = shell.orbital_period_s();
  REQUIRE(period > 5000.0);
  REQUIRE(period < 6500.0);
  const auto p0 = propagate_positions(shell, 0.0);
  const auto p1 = propagate_positions(shell, period);
  REQUIRE(p0.size() == static_cast<size_t>(shell.node_count()));
  for (size_t i = 0; i < p0.size(); ++i) {
    REQUIRE(distance_km(p0[i], p1[i]) < 1e-6);
  }
}

TEST_CASE("all satellites sit on the orbital sphere") {
  const ShellParams shell = default_shell();
  const double r = shell.orbit_radius_km();
  for (const Vec3& p : propagate_positions(shell, 137.5)) {
    REQUIRE(distance_km(p, {0, 0, 0}) == Catch::Approx(r).epsilon(1e-12));
  }
}

TEST_CASE("intra-plane neighbor distance equals the ring chord") {
  const ShellParams shell = default_shell();
  const auto pos = propagate_positions(shell, 0.0);
  const double expected =
      2.0 * shell.orbit_radius_km() * std::sin(std::numbers::pi / shell.sats_per_plane);
  const double actual = distance_km(pos[static_cast<size_t>(shell.node_id(0, 0))],
                                    pos[static_cast<size_t>(shell.node_id(0, 1))]);
  CHECK(actual == Catch::Approx(expected).epsilon(1e-9));
  CHECK(actual > 1969.0);
  CHECK(actual < 1971.0);
}

TEST_CASE("intra-plane propagation delay matches distance over light speed") {
  const ShellParams shell = default_shell();
  const auto pos = propagate_positions(shell, 0.0);
  const auto snap = build_isl_graph(pos, {shell.plane_count, shell.sats_per_plane});
  const double chord =
      2.0 * shell.orbit_radius_km() * std::sin(std::numbers::pi / shell.sats_per_plane);
  const double expected = chord / kSpeedOfLightKmPerS;
  bool found = false;
  for (const IslEdge& e : snap.edges) {
    if (e.from == shell.node_id(0, 0) && e.to == shell.node_id(0, 1)) {
      CHECK(e.propagation_delay_s == Catch::Approx(expected).epsilon(1e-9));
      CHECK(e.propagation_delay_s == Catch::Approx(6.570e-3).margin(2e-5));
      found = true;
    }
  }
  REQUIRE(found);
}

TEST_CASE("grid graph degree never exceeds four") {
  const ShellParams shell = default_shell();
  const auto snap =
      build_isl_graph(propagate_positions(shell, 0.0), {shell.plane_count, shell.sats_per_plane});
  std::map<int, int> out_degree;
  for (const IslEdge& e : snap.edges) out_degree[e.from]++;
  REQUIRE(out_degree.size() == static_cast<size_t>(shell.node_count()));
  for (const auto& [node, deg] : out_degree) REQUIRE(deg == 4);
}

TEST_CASE("every ISL delay is positive and below 50 ms") {
  const ShellParams shell = default_shell();
  for (double t : {0.0, 300.0, 2900.0}) {
    const auto snap =
        build_isl_graph(propagate_positions(shell, t), {shell.plane_count, shell.sats_per_plane});
    for (const IslEdge& e : snap.edges) {
      REQUIRE(e.propagation_delay_s > 0.0);
      REQUIRE(e.propagation_delay_s < 0.050);
    }
  }
}

TEST_CASE("propagation is deterministic") {
  const ShellParams shell = default_shell();
  const auto a = propagate_positions(shell, 1234.5);
  const auto b = propagate_positions(shell, 1234.5);
  for (size_t i = 0; i < a.size(); ++i) {
    REQUIRE(a[i].x == b[i].x);
    REQUIRE(a[i].y == b[i].y);
    REQUIRE(a[i].z == b[i].z);
  }
}

TEST_CASE("subgrid extraction yields the expected lattice sizes") {
  const ShellParams shell = default_shell();
  const auto full =
      build_isl_graph(propagate_positions(shell, 0.0), {shell.plane_count, shell.sats_per_plane});

  const auto four_by_four = extract_subgrid(full, 4, 4, {0, 0});
  CHECK(four_by_four.node_ids.size() == 16);
  CHECK(four_by_four.edges.size() == 48);  // 24 lattice edges, both directions

  const auto one_by_two = extract_subgrid(full, 1, 2, {0, 0});
  CHECK(one_by_two.node_ids.size() == 2);
  CHECK(one_by_two.edges.size() == 2);

  const auto two_by_two = extract_subgrid(full, 2, 2, {0, 0});
  CHECK(two_by_two.node_ids.size() == 4);
  CHECK(two_by_two.edges.size() == 8);
}

TEST_CASE("subgrid node order is region-major from the anchor") {
  const ShellParams shell = default_shell();
  const auto full =
      build_isl_graph(propagate_positions(shell, 0.0), {shell.plane_count, shell.sats_per_plane});
  const auto sub = extract_subgrid(full, 2, 3, {5, 7});
  // region (r, c) -> satellite (plane 5 + c, index 7 + r)
  REQUIRE(sub.node_ids.size() == 6);
  CHECK(sub.node_ids[0] == shell.node_id(5, 7));
  CHECK(sub.node_ids[1] == shell.node_id(6, 7));
  CHECK(sub.node_ids[2] == shell.node_id(7, 7));
  CHECK(sub.node_ids[3] == shell.node_id(5, 8));
  CHECK(sub.node_ids[4] == shell.node_id(6, 8));
  CHECK(sub.node_ids[5] == shell.node_id(7, 8));
}

TEST_CASE("subgrid bounds are validated") {
  const ShellParams shell = default_shell();
  const auto full =
      build_isl_graph(propagate_positions(shell, 0.0), {shell.plane_count, shell.sats_per_plane});
  CHECK_THROWS_AS(extract_subgrid(full, 0, 4, {0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(extract_subgrid(full, 23, 4, {0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(extract_subgrid(full, 4, 73, {0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(extract_subgrid(full, 4, 4, {72, 0}), std::invalid_argument);
}

TEST_CASE("snapshot count is duration over interval") {
  const ShellParams shell = default_shell();
  const auto seq = snapshot_sequence(shell, 4, 4, {0, 0}, 60.0, 15.0);
  CHECK(seq.snapshots.size() == 4);
  CHECK(seq.virtual_nodes.assignment.size() == 4);

  const auto single = snapshot_sequence(shell, 4, 4, {0, 0}, 15.0, 15.0);
  CHECK(single.snapshots.size() == 1);

  CHECK_THROWS_AS(snapshot_sequence(shell, 4, 4, {0, 0}, 10.0, 15.0), std::invalid_argument);
  CHECK_THROWS_AS(snapshot_sequence(shell, 4, 4, {0, 0}, 60.0, 0.0), std::invalid_argument);
}

TEST_CASE("handover shifts each region to the incoming satellite") {
  const ShellParams shell = default_shell();
  const auto seq = snapshot_sequence(shell, 4, 4, {0, 0}, 60.0, 15.0);
  for (int k = 0; k < 4; ++k) {
    // region 0 is (r=0, c=0): plane 0, in-plane index k after k handovers
    CHECK(seq.virtual_nodes.assignment[static_cast<size_t>(k)][0] == shell.node_id(0, k));
  }
  CHECK(seq.snapshots[0].timestamp_s == 0.0);
  CHECK(seq.snapshots[3].timestamp_s == Catch::Approx(45.0));
}

TEST_CASE("region topology matches the subgrid lattice") {
  const ShellParams shell = default_shell();
  const auto seq = snapshot_sequence(shell, 4, 4, {0, 0}, 60.0, 15.0);
  const RegionTopology topo = region_topology(seq.snapshots[0], 4, 4);
  CHECK(topo.region_count() == 16);
  CHECK(topo.arc_count() == 48);
  for (const auto& [u, v] : topo.arcs) {
    REQUIRE(u >= 0);
    REQUIRE(u < 16);
    REQUIRE(v >= 0);
    REQUIRE(v < 16);
    const int ur = u / 4, uc = u % 4, vr = v / 4, vc = v % 4;
    REQUIRE(std::abs(ur - vr) + std::abs(uc - vc) == 1);  // lattice neighbors only
  }
  for (double d : topo.arc_delay_s) {
    REQUIRE(d > 0.0);
    REQUIRE(d < 0.050);
  }
}

TEST_CASE("arc delays can be refreshed from a later snapshot") {
  const ShellParams shell = default_shell();
  const auto seq = snapshot_sequence(shell, 4, 4, {0, 0}, 60.0, 15.0);
  const RegionTopology topo = region_topology(seq.snapshots[0], 4, 4);
  for (size_t k = 0; k < seq.snapshots.size(); ++k) {
    const auto delays = region_arc_delays(seq.snapshots[k], topo);
    REQUIRE(delays.size() == topo.arcs.size());
    for (double d : delays) {
      REQUIRE(d > 0.0);
      REQUIRE(d < 0.050);
    }
  }
  // delays at snapshot 0 must round-trip exactly
  const auto same = region_arc_delays(seq.snapshots[0], topo);
  for (size_t a = 0; a < same.size(); ++a) REQUIRE(same[a] == topo.arc_delay_s[a]);
}

TEST_CASE("shell validation rejects out-of-range parameters") {
  ShellParams bad = default_shell();
  bad.plane_count = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = default_shell();
  bad.sats_per_plane = 1;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = default_shell();
  bad.altitude_km = -5.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = default_shell();
  bad.inclination_deg = 200.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
