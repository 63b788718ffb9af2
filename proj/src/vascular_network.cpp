#include "receptosim/vascular_network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

namespace receptosim::vasc {

namespace {

constexpr double kMinFrontFraction = 1e-3;  // resistance floor for empty fronts
constexpr double kFull = 1.0;

double deg2rad(double d) { return d * units::pi / 180.0; }

}  // namespace

// ---------------------------------------------------------------------------
// PumpSchedule

PumpSchedule::PumpSchedule(std::vector<Interval> intervals) : intervals_(std::move(intervals)) {
  std::sort(intervals_.begin(), intervals_.end(),
            [](const Interval& a, const Interval& b) { return a.t_start < b.t_start; });
  for (const auto& iv : intervals_) {
    if (iv.q_m3s < 0.0) throw std::invalid_argument("pump flow must be >= 0");
    if (iv.t_end < iv.t_start) throw std::invalid_argument("pump interval end before start");
  }
  for (std::size_t i = 1; i < intervals_.size(); ++i) {
    if (intervals_[i].t_start < intervals_[i - 1].t_end) {
      throw std::invalid_argument("pump intervals overlap");
    }
  }
}

double PumpSchedule::flow_at(double t) const {
  for (const auto& iv : intervals_) {
    if (t >= iv.t_start && t < iv.t_end) return iv.q_m3s;
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// VascularNetwork

int VascularNetwork::inlet_id() const {
  int found = -1;
  for (const auto& n : nodes) {
    if (n.kind == NodeKind::inlet) {
      if (found >= 0) throw TopologyError("network has more than one inlet");
      found = n.id;
    }
  }
  if (found < 0) throw TopologyError("network has no inlet");
  return found;
}

namespace {
template <typename T>
const T& lookup(const std::vector<T>& v, int id, const char* what) {
  for (const auto& e : v) {
    if (e.id == id) return e;
  }
  throw std::invalid_argument(std::string("unknown ") + what + " id " + std::to_string(id));
}
template <typename T>
T& lookup_mut(std::vector<T>& v, int id, const char* what) {
  return const_cast<T&>(lookup(v, id, what));
}
}  // namespace

const Node& VascularNetwork::node(int id) const { return lookup(nodes, id, "node"); }
VeinSegment& VascularNetwork::segment(int id) { return lookup_mut(segments, id, "segment"); }
const VeinSegment& VascularNetwork::segment(int id) const { return lookup(segments, id, "segment"); }
PorousZone& VascularNetwork::zone(int id) { return lookup_mut(zones, id, "zone"); }
const PorousZone& VascularNetwork::zone(int id) const { return lookup(zones, id, "zone"); }

double VascularNetwork::total_capacity_m3() const {
  double v = 0.0;
  for (const auto& s : segments) v += s.lumen_volume_m3();
  for (const auto& z : zones) v += z.pore_volume_m3();
  return v;
}

double VascularNetwork::total_porous_footprint_mm2() const {
  double a = 0.0;
  for (const auto& z : zones) a += z.footprint_mm2;
  return a;
}

namespace {

std::vector<int> node_index_map(const VascularNetwork& net) {
  int max_id = 0;
  for (const auto& n : net.nodes) max_id = std::max(max_id, n.id);
  std::vector<int> idx(static_cast<std::size_t>(max_id) + 1, -1);
  for (std::size_t i = 0; i < net.nodes.size(); ++i) idx[net.nodes[i].id] = static_cast<int>(i);
  return idx;
}

std::vector<bool> reachability(const VascularNetwork& net, bool filled_only) {
  const auto idx = node_index_map(net);
  std::vector<bool> seen(net.nodes.size(), false);
  std::queue<int> q;
  const int inlet = idx[net.inlet_id()];
  seen[inlet] = true;
  q.push(inlet);
  while (!q.empty()) {
    const int u = q.front();
    q.pop();
    for (const auto& s : net.segments) {
      if (filled_only && s.filled_fraction < kFull) continue;
      const int a = idx[s.from];
      const int b = idx[s.to];
      if (a < 0 || b < 0) throw TopologyError("segment references unknown node");
      int v = -1;
      if (a == u && !seen[b]) v = b;
      if (b == u && !seen[a]) v = a;
      if (v >= 0) {
        seen[v] = true;
        q.push(v);
      }
    }
  }
  return seen;
}

}  // namespace

std::vector<bool> VascularNetwork::wetted_nodes() const { return reachability(*this, true); }

bool VascularNetwork::connected_from_inlet() const {
  const auto seen = reachability(*this, false);
  return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

// ---------------------------------------------------------------------------
// Element laws

double hydraulic_resistance(const VeinSegment& seg, const FluidSpec& fluid) {
  if (seg.width_mm <= 0.0 || seg.height_mm <= 0.0) {
    throw std::invalid_argument("vein cross-section dimensions must be positive");
  }
  if (seg.length_mm < 0.0) throw std::invalid_argument("vein length must be non-negative");
  if (fluid.viscosity_pas <= 0.0) throw std::invalid_argument("viscosity must be positive");
  const double w = std::max(seg.width_mm, seg.height_mm) * units::mm;
  const double h = std::min(seg.width_mm, seg.height_mm) * units::mm;
  const double L = seg.length_mm * units::mm;
  const double a = h / w;
  // Fifth-order aspect correction keeps the closed form within the series
  // solution across square to slender ducts.
  const double shape = 1.0 - 0.63 * a + 0.052 * a * a * a * a * a;
  return 12.0 * fluid.viscosity_pas * L / (w * h * h * h * shape);
}

double capillary_pressure_segment(const VeinSegment& seg, const FluidSpec& fluid) {
  const double w = seg.width_mm * units::mm;
  const double h = seg.height_mm * units::mm;
  const double r_h = (w * h) / (2.0 * (w + h));
  return 2.0 * fluid.surface_tension_npm * std::cos(deg2rad(fluid.contact_angle_deg)) / r_h;
}

double capillary_pressure_zone(const PorousZone& zone, const FluidSpec& fluid) {
  const double r_h = 0.5 * zone.layer_height_mm * units::mm;
  return 2.0 * fluid.surface_tension_npm * std::cos(deg2rad(fluid.contact_angle_deg)) / r_h;
}

double zone_hydraulic_resistance(const PorousZone& zone, const FluidSpec& fluid) {
  if (zone.footprint_mm2 <= 0.0 || zone.layer_count <= 0 || zone.layer_height_mm <= 0.0 ||
      zone.porosity <= 0.0) {
    throw std::invalid_argument("porous zone geometry must be positive");
  }
  const double h_layer = zone.layer_height_mm * units::mm;
  const double k = zone.porosity * h_layer * h_layer / 12.0;  // parallel-plate permeability
  const double height = zone.layer_count * h_layer;
  return fluid.viscosity_pas / (k * height);
}

// ---------------------------------------------------------------------------
// Flow solve

namespace {

struct FrontBranch {
  bool is_zone = false;
  int index = 0;      // index into net.segments or net.zones
  int feed_node = 0;  // dense node index feeding the front
  double conductance = 0.0;
  double front_pressure = 0.0;  // -p_cap
  bool pinned = false;
  double flow = 0.0;  // into the front
};

}  // namespace

FlowSolution solve_pressures(const VascularNetwork& net, const FluidSpec& fluid,
                             const PumpSchedule& pump, double t) {
  if (net.nodes.empty()) throw TopologyError("empty network");
  if (!net.connected_from_inlet()) throw TopologyError("network is not connected to the inlet");

  const auto idx = node_index_map(net);
  const auto wetted = net.wetted_nodes();
  const int inlet = idx[net.inlet_id()];
  const double q_pump = pump.flow_at(t);

  FlowSolution sol;
  sol.node_pressure_pa.assign(net.nodes.size(), 0.0);
  sol.segment_flow_m3s.assign(net.segments.size(), 0.0);
  sol.zone_flow_m3s.assign(net.zones.size(), 0.0);
  sol.pump_flow_m3s = q_pump;

  // Dense numbering of wetted nodes.
  std::vector<int> sys_index(net.nodes.size(), -1);
  int n_sys = 0;
  for (std::size_t i = 0; i < net.nodes.size(); ++i) {
    if (wetted[i]) sys_index[i] = n_sys++;
  }

  // Conducting interior edges and front branches.
  struct Edge {
    int seg_index;
    int a, b;  // dense indices
    double g;
  };
  std::vector<Edge> edges;
  std::vector<FrontBranch> fronts;

  for (std::size_t s = 0; s < net.segments.size(); ++s) {
    const auto& seg = net.segments[s];
    const int a = idx[seg.from];
    const int b = idx[seg.to];
    const double r_full = hydraulic_resistance(seg, fluid);
    if (seg.filled_fraction >= kFull) {
      if (wetted[a] && wetted[b] && r_full > 0.0) {
        edges.push_back({static_cast<int>(s), sys_index[a], sys_index[b], 1.0 / r_full});
      }
      continue;
    }
    const bool wa = wetted[a];
    const bool wb = wetted[b];
    if (!wa && !wb) continue;
    const int feed = (wa && wb) ? (net.segments[s].from <= net.segments[s].to ? a : b)
                                : (wa ? a : b);
    if (r_full <= 0.0) continue;  // zero-length stub cannot meter flow
    FrontBranch fb;
    fb.is_zone = false;
    fb.index = static_cast<int>(s);
    fb.feed_node = sys_index[feed];
    fb.conductance = 1.0 / (r_full * std::max(seg.filled_fraction, kMinFrontFraction));
    fb.front_pressure = -capillary_pressure_segment(seg, fluid);
    fronts.push_back(fb);
  }
  for (std::size_t z = 0; z < net.zones.size(); ++z) {
    const auto& zone = net.zones[z];
    if (zone.saturation >= kFull) continue;
    const int a = idx[zone.attached_node];
    if (a < 0) throw TopologyError("zone references unknown node");
    if (!wetted[a]) continue;
    FrontBranch fb;
    fb.is_zone = true;
    fb.index = static_cast<int>(z);
    fb.feed_node = sys_index[a];
    fb.conductance =
        1.0 / (zone_hydraulic_resistance(zone, fluid) * std::max(zone.saturation, kMinFrontFraction));
    fb.front_pressure = -capillary_pressure_zone(zone, fluid);
    fronts.push_back(fb);
  }

  if (fronts.empty()) {
    // Completely filled (or isolated) network: the pump is stalled, nothing moves.
    sol.pump_flow_m3s = 0.0;
    return sol;
  }

  // Solve, pinning fronts whose flow would be negative (fronts never recede).
  Eigen::VectorXd p;
  const int max_pin_rounds = static_cast<int>(fronts.size()) + 1;
  for (int round = 0; round < max_pin_rounds; ++round) {
    std::vector<Eigen::Triplet<double>> trip;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n_sys);
    rhs[sys_index[inlet]] += q_pump;
    for (const auto& e : edges) {
      trip.emplace_back(e.a, e.a, e.g);
      trip.emplace_back(e.b, e.b, e.g);
      trip.emplace_back(e.a, e.b, -e.g);
      trip.emplace_back(e.b, e.a, -e.g);
    }
    bool any_active = false;
    for (const auto& f : fronts) {
      if (f.pinned) continue;
      any_active = true;
      trip.emplace_back(f.feed_node, f.feed_node, f.conductance);
      rhs[f.feed_node] += f.conductance * f.front_pressure;
    }
    if (!any_active) {
      if (q_pump > 0.0) {
        throw NumericalError("degenerate network: pump flow has no admissible front");
      }
      for (auto& f : fronts) f.flow = 0.0;
      p = Eigen::VectorXd::Zero(n_sys);
      break;
    }
    Eigen::SparseMatrix<double> A(n_sys, n_sys);
    A.setFromTriplets(trip.begin(), trip.end());
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(A);
    if (solver.info() != Eigen::Success) {
      throw NumericalError("degenerate network: singular flow system");
    }
    p = solver.solve(rhs);
    if (solver.info() != Eigen::Success) {
      throw NumericalError("degenerate network: flow solve failed");
    }

    double flow_scale = q_pump;
    for (auto& f : fronts) {
      f.flow = f.pinned ? 0.0 : f.conductance * (p[f.feed_node] - f.front_pressure);
      flow_scale = std::max(flow_scale, std::abs(f.flow));
    }
    const double tol = 1e-14 * std::max(flow_scale, 1e-30);
    bool pinned_new = false;
    for (auto& f : fronts) {
      if (!f.pinned && f.flow < -tol) {
        f.pinned = true;
        pinned_new = true;
      }
    }
    if (!pinned_new) break;
  }

  // Scatter solution.
  for (std::size_t i = 0; i < net.nodes.size(); ++i) {
    if (sys_index[i] >= 0) sol.node_pressure_pa[i] = p[sys_index[i]];
  }
  for (const auto& e : edges) {
    sol.segment_flow_m3s[e.seg_index] = e.g * (p[e.a] - p[e.b]);
  }
  for (const auto& f : fronts) {
    const double q = std::max(f.flow, 0.0);
    if (f.is_zone) {
      sol.zone_flow_m3s[f.index] = q;
    } else {
      const auto& seg = net.segments[f.index];
      const int a = idx[seg.from];
      // Oriented from->to; a front fed from `to` carries negative oriented flow.
      sol.segment_flow_m3s[f.index] = (f.feed_node == sys_index[a]) ? q : -q;
    }
  }

  // Kirchhoff residual per wetted node, relative to the pump flow.
  std::vector<double> residual(n_sys, 0.0);
  residual[sys_index[inlet]] += q_pump;
  for (const auto& e : edges) {
    const double q = e.g * (p[e.a] - p[e.b]);
    residual[e.a] -= q;
    residual[e.b] += q;
  }
  for (const auto& f : fronts) {
    if (!f.pinned) residual[f.feed_node] -= f.flow;
  }
  double max_res = 0.0;
  for (const double r : residual) max_res = std::max(max_res, std::abs(r));
  sol.max_kcl_residual_rel = (q_pump > 0.0) ? max_res / q_pump : max_res;
  return sol;
}

// ---------------------------------------------------------------------------
// Front advancement

FrontAdvance advance_front(VascularNetwork& net, const FlowSolution& sol, double dt) {
  if (dt <= 0.0) throw std::invalid_argument("advance_front: dt must be positive");
  FrontAdvance out;
  double capacity_left = 0.0;
  for (std::size_t s = 0; s < net.segments.size(); ++s) {
    auto& seg = net.segments[s];
    if (seg.filled_fraction >= kFull) continue;
    const double v_lumen = seg.lumen_volume_m3();
    if (v_lumen <= 0.0) {
      seg.filled_fraction = kFull;
      continue;
    }
    const double q_in = std::abs(sol.segment_flow_m3s[s]);
    if (q_in > 0.0) {
      const double before = seg.filled_fraction;
      seg.filled_fraction = std::min(kFull, before + q_in * dt / v_lumen);
      out.delivered_m3 += (seg.filled_fraction - before) * v_lumen;
    }
    capacity_left += (kFull - seg.filled_fraction) * v_lumen;
  }
  for (std::size_t z = 0; z < net.zones.size(); ++z) {
    auto& zone = net.zones[z];
    if (zone.saturation >= kFull) continue;
    const double v_pore = zone.pore_volume_m3();
    if (v_pore <= 0.0) {
      zone.saturation = kFull;
      continue;
    }
    const double q_in = sol.zone_flow_m3s[z];
    if (q_in > 0.0) {
      const double before = zone.saturation;
      zone.saturation = std::min(kFull, before + q_in * dt / v_pore);
      out.delivered_m3 += (zone.saturation - before) * v_pore;
    }
    capacity_left += (kFull - zone.saturation) * v_pore;
  }
  out.any_capacity_left = capacity_left > 1e-18;
  return out;
}

namespace {
double remaining_capacity_m3(const VascularNetwork& net) {
  double cap = 0.0;
  for (const auto& s : net.segments) cap += (kFull - s.filled_fraction) * s.lumen_volume_m3();
  for (const auto& z : net.zones) cap += (kFull - z.saturation) * z.pore_volume_m3();
  return cap;
}
}  // namespace

FrontAdvance advance_fill(VascularNetwork& net, const FluidSpec& fluid,
                          const PumpSchedule& pump, double t, double dt) {
  if (dt <= 0.0) throw std::invalid_argument("advance_fill: dt must be positive");
  FrontAdvance total;
  double t_cur = t;
  const double t_stop = t + dt;
  int guard = 0;
  while (t_cur < t_stop) {
    if (++guard > 100000) {
      throw NumericalError("advance_fill: sub-step limit exceeded at t=" + std::to_string(t_cur));
    }
    const FlowSolution sol = solve_pressures(net, fluid, pump, t_cur);

    // Largest admissible step: 10% of any compartment, no completion overshoot.
    double dt_sub = t_stop - t_cur;
    bool any_motion = false;
    auto restrict_dt = [&](double q_in, double remaining_volume, double full_volume) {
      if (q_in <= 0.0) return;
      any_motion = true;
      dt_sub = std::min(dt_sub, 0.1 * full_volume / q_in);
      if (remaining_volume > 0.0) dt_sub = std::min(dt_sub, remaining_volume / q_in);
    };
    for (std::size_t s = 0; s < net.segments.size(); ++s) {
      const auto& seg = net.segments[s];
      if (seg.filled_fraction >= kFull) continue;
      const double v = seg.lumen_volume_m3();
      restrict_dt(std::abs(sol.segment_flow_m3s[s]), (kFull - seg.filled_fraction) * v, v);
    }
    for (std::size_t z = 0; z < net.zones.size(); ++z) {
      const auto& zone = net.zones[z];
      if (zone.saturation >= kFull) continue;
      const double v = zone.pore_volume_m3();
      restrict_dt(sol.zone_flow_m3s[z], (kFull - zone.saturation) * v, v);
    }
    if (!any_motion) {
      // Nothing moves under the current pump setting; jump to the next
      // schedule change inside the window, or finish.
      double t_next = t_stop;
      for (const auto& iv : pump.intervals()) {
        if (iv.t_start > t_cur && iv.t_start < t_next) t_next = iv.t_start;
      }
      total.any_capacity_left = remaining_capacity_m3(net) > 1e-18;
      if (t_next >= t_stop) break;
      t_cur = t_next;
      continue;
    }
    dt_sub = std::max(dt_sub, 1e-12);
    const FrontAdvance step = advance_front(net, sol, dt_sub);
    total.delivered_m3 += step.delivered_m3;
    total.any_capacity_left = step.any_capacity_left;
    t_cur += dt_sub;
  }
  return total;
}

double total_filled_volume(const VascularNetwork& net) {
  double v = 0.0;
  for (const auto& s : net.segments) v += s.filled_fraction * s.lumen_volume_m3();
  for (const auto& z : net.zones) v += z.saturation * z.pore_volume_m3();
  return v;
}

// ---------------------------------------------------------------------------
// Demo network

VascularNetwork build_demo_network() {
  // Layout in design units; uniformly rescaled below so lumen + pore volume
  // lands exactly on 3.0 mL with a 175 cm^2 porous footprint.
  struct N {
    int id;
    double x, y;
    NodeKind kind;
  };
  const NodeKind in = NodeKind::inlet, ju = NodeKind::junction, te = NodeKind::terminal;
  const std::vector<N> raw_nodes = {
      {0, 0, 0, in},      {1, 0, 22, ju},     {2, -14, 40, te},  {3, 14, 40, te},
      {4, 0, -35, ju},    {5, 0, -70, te},
      {6, -32, 12, ju},   {7, -72, 26, ju},   {8, -108, 38, te}, {9, -52, 46, te},
      {10, -88, 56, te},  {11, -60, 6, te},
      {12, 32, 12, ju},   {13, 72, 26, ju},   {14, 108, 38, te}, {15, 52, 46, te},
      {16, 88, 56, te},   {17, 60, 6, te},
      {18, -26, -28, ju}, {19, -62, -46, ju}, {20, -92, -62, te}, {21, -40, -64, te},
      {22, -70, -24, te},
      {23, 26, -28, ju},  {24, 62, -46, ju},  {25, 92, -62, te}, {26, 40, -64, te},
      {27, 70, -24, te},
  };
  const std::vector<std::pair<int, int>> raw_segments = {
      {0, 1},   {1, 2},   {1, 3},   {0, 4},   {4, 5},
      {0, 6},   {6, 7},   {7, 8},   {6, 9},   {7, 10},  {6, 11},
      {0, 12},  {12, 13}, {13, 14}, {12, 15}, {13, 16}, {12, 17},
      {0, 18},  {18, 19}, {19, 20}, {18, 21}, {19, 22},
      {0, 23},  {23, 24}, {24, 25}, {23, 26}, {24, 27},
  };
  struct Z {
    int id;
    int node;
    double footprint;
  };
  const std::vector<Z> raw_zones = {
      {1, 0, 500.0},  {2, 1, 400.0},   {3, 4, 500.0},   {4, 5, 500.0},
      {5, 7, 3000.0}, {6, 10, 2250.0}, {7, 13, 3000.0}, {8, 16, 2250.0},
      {9, 19, 2550.0}, {10, 24, 2550.0},
  };

  VascularNetwork net;
  for (const auto& n : raw_nodes) {
    net.nodes.push_back({n.id, Eigen::Vector2d(n.x, n.y), n.kind});
  }
  double total_len = 0.0;
  int seg_id = 1;
  for (const auto& [a, b] : raw_segments) {
    const double len = (net.node(a).position_mm - net.node(b).position_mm).norm();
    net.segments.push_back({seg_id++, a, b, len, 1.0, 1.4, 0.0});
    total_len += len;
  }

  const double footprint_mm2 = 17500.0;  // 175 cm^2
  const double pore_mm3 = footprint_mm2 * 3 * 0.1 * 0.25;
  const double target_len = (3000.0 - pore_mm3) / (1.0 * 1.4);  // 3.0 mL total
  const double scale = target_len / total_len;
  for (auto& n : net.nodes) n.position_mm *= scale;
  for (auto& s : net.segments) s.length_mm *= scale;

  for (const auto& z : raw_zones) {
    PorousZone zone;
    zone.id = z.id;
    zone.attached_node = z.node;
    zone.footprint_mm2 = z.footprint;
    net.zones.push_back(zone);
  }
  return net;
}

}  // namespace receptosim::vasc
