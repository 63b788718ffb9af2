#pragma once

// Brute-force reference solve for the wetted-network flow problem. Kept
// deliberately independent of the production solver: its own reachability
// walk, its own dense assembly with explicit Dirichlet front rows, and a
// full-pivot dense factorisation. Used only by the validation suite and the
// unit tests.

#include <vector>

#include <Eigen/Dense>

#include "receptosim/vascular_network.hpp"

namespace receptosim::vasc::oracle {

struct DenseSolution {
  std::vector<double> node_pressure_pa;  // indexed like net.nodes; 0 if dry
  std::vector<double> segment_flow_m3s;  // oriented from -> to
  std::vector<double> zone_flow_m3s;     // into the zone
};

inline DenseSolution dense_reference_solve(const VascularNetwork& net, const FluidSpec& fluid,
                                           double q_pump) {
  const std::size_t n_nodes = net.nodes.size();
  std::vector<int> pos_of_id;
  {
    int max_id = 0;
    for (const auto& n : net.nodes) max_id = std::max(max_id, n.id);
    pos_of_id.assign(static_cast<std::size_t>(max_id) + 1, -1);
    for (std::size_t i = 0; i < n_nodes; ++i) pos_of_id[net.nodes[i].id] = static_cast<int>(i);
  }
  int inlet = -1;
  for (std::size_t i = 0; i < n_nodes; ++i) {
    if (net.nodes[i].kind == NodeKind::inlet) inlet = static_cast<int>(i);
  }

  // Wetted set: fixed-point sweep over fully filled segments.
  std::vector<bool> wet(n_nodes, false);
  wet[inlet] = true;
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& s : net.segments) {
      if (s.filled_fraction < 1.0) continue;
      const int a = pos_of_id[s.from];
      const int b = pos_of_id[s.to];
      if (wet[a] != wet[b]) {
        wet[a] = wet[b] = true;
        changed = true;
      }
    }
  }

  struct Front {
    bool is_zone;
    int index;
    int feed;  // node position
    double resistance;
    double p_front;
    bool pinned = false;
    double flow = 0.0;
  };
  std::vector<Front> fronts;
  for (std::size_t s = 0; s < net.segments.size(); ++s) {
    const auto& seg = net.segments[s];
    if (seg.filled_fraction >= 1.0) continue;
    const int a = pos_of_id[seg.from];
    const int b = pos_of_id[seg.to];
    if (!wet[a] && !wet[b]) continue;
    const int feed = (wet[a] && wet[b]) ? (seg.from <= seg.to ? a : b) : (wet[a] ? a : b);
    const double r_full = hydraulic_resistance(seg, fluid);
    if (r_full <= 0.0) continue;
    fronts.push_back({false, static_cast<int>(s), feed,
                      r_full * std::max(seg.filled_fraction, 1e-3),
                      -capillary_pressure_segment(seg, fluid)});
  }
  for (std::size_t z = 0; z < net.zones.size(); ++z) {
    const auto& zone = net.zones[z];
    if (zone.saturation >= 1.0) continue;
    const int a = pos_of_id[zone.attached_node];
    if (!wet[a]) continue;
    fronts.push_back({true, static_cast<int>(z), a,
                      zone_hydraulic_resistance(zone, fluid) * std::max(zone.saturation, 1e-3),
                      -capillary_pressure_zone(zone, fluid)});
  }

  DenseSolution out;
  out.node_pressure_pa.assign(n_nodes, 0.0);
  out.segment_flow_m3s.assign(net.segments.size(), 0.0);
  out.zone_flow_m3s.assign(net.zones.size(), 0.0);
  if (fronts.empty()) return out;

  // Unknown pressures at all wetted nodes; KCL row per node with explicit
  // resistor stamps. Iterate the no-receding-front condition.
  std::vector<int> eq(n_nodes, -1);
  int n_eq = 0;
  for (std::size_t i = 0; i < n_nodes; ++i) {
    if (wet[i]) eq[i] = n_eq++;
  }
  Eigen::VectorXd p = Eigen::VectorXd::Zero(n_eq);
  for (std::size_t round = 0; round <= fronts.size(); ++round) {
    Eigen::MatrixXd a_mat = Eigen::MatrixXd::Zero(n_eq, n_eq);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n_eq);
    rhs[eq[inlet]] = q_pump;
    for (const auto& s : net.segments) {
      if (s.filled_fraction < 1.0) continue;
      const int a = eq[pos_of_id[s.from]];
      const int b = eq[pos_of_id[s.to]];
      const double g = 1.0 / hydraulic_resistance(s, fluid);
      a_mat(a, a) += g;
      a_mat(b, b) += g;
      a_mat(a, b) -= g;
      a_mat(b, a) -= g;
    }
    bool any_active = false;
    for (const auto& f : fronts) {
      if (f.pinned) continue;
      any_active = true;
      const int a = eq[f.feed];
      a_mat(a, a) += 1.0 / f.resistance;
      rhs[a] += f.p_front / f.resistance;
    }
    if (!any_active) {
      p.setZero();
      for (auto& f : fronts) f.flow = 0.0;
      break;
    }
    p = Eigen::FullPivLU<Eigen::MatrixXd>(a_mat).solve(rhs);
    double scale = std::abs(q_pump);
    for (auto& f : fronts) {
      f.flow = f.pinned ? 0.0 : (p[eq[f.feed]] - f.p_front) / f.resistance;
      scale = std::max(scale, std::abs(f.flow));
    }
    bool pinned_new = false;
    for (auto& f : fronts) {
      if (!f.pinned && f.flow < -1e-14 * std::max(scale, 1e-30)) {
        f.pinned = true;
        pinned_new = true;
      }
    }
    if (!pinned_new) break;
  }

  for (std::size_t i = 0; i < n_nodes; ++i) {
    if (wet[i]) out.node_pressure_pa[i] = p[eq[i]];
  }
  for (std::size_t s = 0; s < net.segments.size(); ++s) {
    const auto& seg = net.segments[s];
    if (seg.filled_fraction < 1.0) continue;
    const int a = pos_of_id[seg.from];
    const int b = pos_of_id[seg.to];
    if (!wet[a] || !wet[b]) continue;
    out.segment_flow_m3s[s] =
        (out.node_pressure_pa[a] - out.node_pressure_pa[b]) / hydraulic_resistance(seg, fluid);
  }
  for (const auto& f : fronts) {
    const double q = std::max(f.flow, 0.0);
    if (f.is_zone) {
      out.zone_flow_m3s[f.index] = q;
    } else {
      const auto& seg = net.segments[f.index];
      out.segment_flow_m3s[f.index] = (f.feed == pos_of_id[seg.from]) ? q : -q;
    }
  }
  return out;
}

}  // namespace receptosim::vasc::oracle
