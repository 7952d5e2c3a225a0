#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

// Walker-style constellation geometry and the ISL grid graph. Orbits are
// circular with uniform angular velocity; geometry exists only to supply
// propagation delays, so no perturbation model is applied. The experiment
// operates on a non-wrapping subgrid whose regions are reassigned to the
// incoming satellite at every snapshot boundary (virtual node handover).

namespace dsroq {

inline constexpr double kEarthMuKm3PerS2 = 398600.4418;
inline constexpr double kSpeedOfLightKmPerS = 299792.458;

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;
};

inline double distance_km(const Vec3& a, const Vec3& b) {
  const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

struct ShellParams {
  int plane_count = 72;
  int sats_per_plane = 22;
  double altitude_km = 550.0;
  double inclination_deg = 53.0;
  int phasing_offset = 17;
  double earth_radius_km = 6371.0;

  void validate() const {
    if (plane_count < 1) throw std::invalid_argument("ShellParams: plane_count must be >= 1");
    if (sats_per_plane < 2) throw std::invalid_argument("ShellParams: sats_per_plane must be >= 2");
    if (!(altitude_km > 0.0)) throw std::invalid_argument("ShellParams: altitude must be positive");
    if (inclination_deg < 0.0 || inclination_deg > 180.0) {
      throw std::invalid_argument("ShellParams: inclination must lie in [0, 180] degrees");
    }
    if (!(earth_radius_km > 0.0)) throw std::invalid_argument("ShellParams: earth radius must be positive");
  }

  double orbit_radius_km() const { return earth_radius_km + altitude_km; }

  double orbital_period_s() const {
    const double r = orbit_radius_km();
    return 2.0 * std::numbers::pi * std::sqrt(r * r * r / kEarthMuKm3PerS2);
  }

  int node_count() const { return plane_count * sats_per_plane; }
  int node_id(int plane, int index) const { return plane * sats_per_plane + index; }
};

// Satellite positions at time t. Node id = plane * sats_per_plane + index.
inline std::vector<Vec3> propagate_positions(const ShellParams& shell, double t_s) {
  shell.validate();
  if (t_s < 0.0) throw std::invalid_argument("propagate_positions: t must be nonnegative");

  const double pi2 = 2.0 * std::numbers::pi;
  const double radius = shell.orbit_radius_km();
  const double mean_motion = std::sqrt(kEarthMuKm3PerS2 / (radius * radius * radius));
  const double incl = shell.inclination_deg * std::numbers::pi / 180.0;
  const double cos_i = std::cos(incl), sin_i = std::sin(incl);
  const int planes = shell.plane_count;
  const int per_plane = shell.sats_per_plane;

  std::vector<Vec3> out;
  out.reserve(static_cast<size_t>(shell.node_count()));
  for (int p = 0; p < planes; ++p) {
    const double raan = pi2 * static_cast<double>(p) / planes;
    const double cos_r = std::cos(raan), sin_r = std::sin(raan);
    for (int s = 0; s < per_plane; ++s) {
      const double phase = pi2 * (static_cast<double>(s) / per_plane +
                                  static_cast<double>(shell.phasing_offset) * p /
                                      (static_cast<double>(planes) * per_plane)) +
                           mean_motion * t_s;
      const double xo = radius * std::cos(phase);
      const double yo = radius * std::sin(phase);
      // rotate by inclination about x, then by RAAN about z
      const double x1 = xo;
      const double y1 = yo * cos_i;
      const double z1 = yo * sin_i;
      out.push_back({x1 * cos_r - y1 * sin_r, x1 * sin_r + y1 * cos_r, z1});
    }
  }
  return out;
}

struct IslEdge {
  int from = 0;
  int to = 0;
  double propagation_delay_s = 0.0;
};

struct GridSpec {
  int plane_count = 0;
  int sats_per_plane = 0;
};

struct TopologySnapshot {
  double timestamp_s = 0.0;
  GridSpec grid;                  // shell layout the node ids refer to
  std::vector<int> node_ids;
  std::vector<Vec3> positions;    // aligned with node_ids
  std::vector<IslEdge> edges;     // directed; both directions present
  double link_capacity_pps = 1.0; // slot is the time to transmit one packet

  int index_of(int node_id) const {
    for (size_t i = 0; i < node_ids.size(); ++i) {
      if (node_ids[i] == node_id) return static_cast<int>(i);
    }
    return -1;
  }
};

// Grid ISL graph over the full shell: each satellite links to its two
// intra-plane ring neighbors and the same-index satellites of the two
// adjacent planes, capped at four bidirectional ISLs per node.
inline TopologySnapshot build_isl_graph(const std::vector<Vec3>& positions, const GridSpec& grid,
                                        double timestamp_s = 0.0) {
  if (positions.empty()) throw std::invalid_argument("build_isl_graph: positions must be nonempty");
  if (static_cast<int>(positions.size()) != grid.plane_count * grid.sats_per_plane) {
    throw std::invalid_argument("build_isl_graph: positions do not match grid shape");
  }

  TopologySnapshot snap;
  snap.timestamp_s = timestamp_s;
  snap.grid = grid;
  snap.positions = positions;
  snap.node_ids.resize(positions.size());
  for (size_t i = 0; i < positions.size(); ++i) snap.node_ids[i] = static_cast<int>(i);

  auto add_pair = [&](int a, int b) {
    const double delay = distance_km(positions[static_cast<size_t>(a)],
                                     positions[static_cast<size_t>(b)]) /
                         kSpeedOfLightKmPerS;
    snap.edges.push_back({a, b, delay});
    snap.edges.push_back({b, a, delay});
  };

  const int planes = grid.plane_count;
  const int per_plane = grid.sats_per_plane;
  for (int p = 0; p < planes; ++p) {
    for (int s = 0; s < per_plane; ++s) {
      const int a = p * per_plane + s;
      // intra-plane ring; a 2-satellite ring collapses to a single pair
      if (per_plane > 2 || s == 0) {
        add_pair(a, p * per_plane + (s + 1) % per_plane);
      }
      // inter-plane ring at the same in-plane index
      if (planes >= 2 && (planes > 2 || p == 0)) {
        add_pair(a, ((p + 1) % planes) * per_plane + s);
      }
    }
  }
  return snap;
}

struct SubgridAnchor {
  int plane = 0;
  int index = 0;
};

// Induced non-wrapping rows x cols lattice. Region (r, c) is served by
// satellite (anchor.plane + c, anchor.index + r); node order is region-major,
// so node_ids[region_id] is the serving satellite.
inline TopologySnapshot extract_subgrid(const TopologySnapshot& snap, int rows, int cols,
                                        const SubgridAnchor& anchor) {
  const int planes = snap.grid.plane_count;
  const int per_plane = snap.grid.sats_per_plane;
  if (rows < 1 || cols < 1) throw std::invalid_argument("extract_subgrid: rows/cols must be >= 1");
  if (rows > per_plane || cols > planes) {
    throw std::invalid_argument("extract_subgrid: subgrid exceeds constellation dimensions");
  }
  if (anchor.plane < 0 || anchor.plane >= planes || anchor.index < 0 || anchor.index >= per_plane) {
    throw std::invalid_argument("extract_subgrid: anchor outside constellation bounds");
  }

  TopologySnapshot out;
  out.timestamp_s = snap.timestamp_s;
  out.grid = snap.grid;
  out.link_capacity_pps = snap.link_capacity_pps;

  auto sat_of = [&](int r, int c) {
    const int plane = (anchor.plane + c) % planes;
    const int index = (anchor.index + r) % per_plane;
    return plane * per_plane + index;
  };

  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const int id = sat_of(r, c);
      out.node_ids.push_back(id);
      out.positions.push_back(snap.positions[static_cast<size_t>(id)]);
    }
  }
  auto add_pair = [&](int ra, int ca, int rb, int cb) {
    const int a = sat_of(ra, ca);
    const int b = sat_of(rb, cb);
    const double delay = distance_km(snap.positions[static_cast<size_t>(a)],
                                     snap.positions[static_cast<size_t>(b)]) /
                         kSpeedOfLightKmPerS;
    out.edges.push_back({a, b, delay});
    out.edges.push_back({b, a, delay});
  };
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (r + 1 < rows) add_pair(r, c, r + 1, c);
      if (c + 1 < cols) add_pair(r, c, r, c + 1);
    }
  }
  return out;
}

// region_id -> serving satellite, one assignment vector per snapshot.
struct VirtualNodeMap {
  int rows = 0;
  int cols = 0;
  double interval_s = 0.0;
  std::vector<std::vector<int>> assignment;

  int region_count() const { return rows * cols; }
};

struct SnapshotSequence {
  std::vector<TopologySnapshot> snapshots;  // subgrid snapshots, region-major node order
  VirtualNodeMap virtual_nodes;
};

// One subgrid snapshot per interval. At each boundary every region is handed
// over to the incoming satellite (next in-plane index), so the region-level
// adjacency pattern is identical across snapshots while per-edge delays track
// the orbital geometry.
inline SnapshotSequence snapshot_sequence(const ShellParams& shell, int rows, int cols,
                                          const SubgridAnchor& anchor, double duration_s,
                                          double interval_s) {
  shell.validate();
  if (!(interval_s > 0.0)) throw std::invalid_argument("snapshot_sequence: interval must be positive");
  if (duration_s < interval_s) {
    throw std::invalid_argument("snapshot_sequence: duration must be at least one interval");
  }
  const int count = static_cast<int>(std::floor(duration_s / interval_s + 1e-9));

  SnapshotSequence seq;
  seq.virtual_nodes.rows = rows;
  seq.virtual_nodes.cols = cols;
  seq.virtual_nodes.interval_s = interval_s;
  for (int k = 0; k < count; ++k) {
    const double t = k * interval_s;
    const auto positions = propagate_positions(shell, t);
    const auto full = build_isl_graph(positions, {shell.plane_count, shell.sats_per_plane}, t);
    SubgridAnchor shifted{anchor.plane, (anchor.index + k) % shell.sats_per_plane};
    TopologySnapshot sub = extract_subgrid(full, rows, cols, shifted);
    seq.virtual_nodes.assignment.push_back(sub.node_ids);
    seq.snapshots.push_back(std::move(sub));
  }
  return seq;
}

// Region-level lattice the simulator and router operate on. Arc order is
// fixed: lattice edges in region-major order, each immediately followed by
// its reverse.
struct RegionTopology {
  int rows = 0;
  int cols = 0;
  std::vector<std::pair<int, int>> arcs;  // directed (from_region, to_region)
  std::vector<double> arc_delay_s;        // aligned with arcs
  double link_capacity_pps = 1.0;

  int region_count() const { return rows * cols; }
  int arc_count() const { return static_cast<int>(arcs.size()); }
};

inline RegionTopology region_topology(const TopologySnapshot& subgrid, int rows, int cols) {
  if (static_cast<int>(subgrid.node_ids.size()) != rows * cols) {
    throw std::invalid_argument("region_topology: snapshot is not a rows x cols subgrid");
  }
  RegionTopology topo;
  topo.rows = rows;
  topo.cols = cols;
  topo.link_capacity_pps = subgrid.link_capacity_pps;
  auto add_pair = [&](int u, int v) {
    const double delay = distance_km(subgrid.positions[static_cast<size_t>(u)],
                                     subgrid.positions[static_cast<size_t>(v)]) /
                         kSpeedOfLightKmPerS;
    topo.arcs.emplace_back(u, v);
    topo.arc_delay_s.push_back(delay);
    topo.arcs.emplace_back(v, u);
    topo.arc_delay_s.push_back(delay);
  };
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const int u = r * cols + c;
      if (r + 1 < rows) add_pair(u, u + cols);
      if (c + 1 < cols) add_pair(u, u + 1);
    }
  }
  return topo;
}

// Delays for the fixed region arc order, recomputed from a later snapshot of
// the same subgrid shape.
inline std::vector<double> region_arc_delays(const TopologySnapshot& subgrid, const RegionTopology& topo) {
  std::vector<double> delays;
  delays.reserve(topo.arcs.size());
  for (const auto& [u, v] : topo.arcs) {
    delays.push_back(distance_km(subgrid.positions[static_cast<size_t>(u)],
                                 subgrid.positions[static_cast<size_t>(v)]) /
                     kSpeedOfLightKmPerS);
  }
  return delays;
}

}  // namespace dsroq
