#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "receptosim/errors.hpp"
#include "receptosim/units.hpp"

namespace receptosim::vasc {

enum class NodeKind { inlet, junction, terminal };

struct Node {
  int id = 0;
  Eigen::Vector2d position_mm = Eigen::Vector2d::Zero();
  NodeKind kind = NodeKind::junction;
};

/// A printed vein with rectangular lumen. `length_mm` is the hydraulic
/// length; node positions are only used for layout and plotting.
struct VeinSegment {
  int id = 0;
  int from = 0;
  int to = 0;
  double length_mm = 0.0;
  double width_mm = 1.0;
  double height_mm = 1.4;
  double filled_fraction = 0.0;  // in [0,1]

  double lumen_volume_m3() const {
    return length_mm * width_mm * height_mm * units::mm3;
  }
};

/// Lumped infill region fed from one node. The microchannel maze is not
/// resolved; a single saturation state tracks its liquid content.
struct PorousZone {
  int id = 0;
  int attached_node = 0;
  double footprint_mm2 = 0.0;
  int layer_count = 3;
  double layer_height_mm = 0.1;
  double porosity = 0.25;
  double saturation = 0.0;  // in [0,1]
  std::vector<int> cell_ids;

  double pore_volume_m3() const {
    return footprint_mm2 * layer_count * layer_height_mm * porosity * units::mm3;
  }
};

struct FluidSpec {
  double viscosity_pas = 2.4e-3;
  double surface_tension_npm = 0.0;
  double contact_angle_deg = 0.0;
  double precursor_concentration = 1.0;
};

/// Piecewise-constant pump flow. Intervals must not overlap; outside any
/// interval the flow is zero.
class PumpSchedule {
 public:
  struct Interval {
    double t_start = 0.0;
    double t_end = 0.0;
    double q_m3s = 0.0;
  };

  PumpSchedule() = default;
  explicit PumpSchedule(std::vector<Interval> intervals);

  double flow_at(double t) const;
  const std::vector<Interval>& intervals() const { return intervals_; }

 private:
  std::vector<Interval> intervals_;
};

struct VascularNetwork {
  std::vector<Node> nodes;
  std::vector<VeinSegment> segments;
  std::vector<PorousZone> zones;

  int inlet_id() const;
  const Node& node(int id) const;
  VeinSegment& segment(int id);
  const VeinSegment& segment(int id) const;
  PorousZone& zone(int id);
  const PorousZone& zone(int id) const;

  double total_capacity_m3() const;
  double total_porous_footprint_mm2() const;

  /// Nodes reachable from the inlet through completely filled segments.
  /// Element i corresponds to nodes[i].
  std::vector<bool> wetted_nodes() const;

  /// True when every node can be reached from the inlet over the segment
  /// graph (ignoring fill state).
  bool connected_from_inlet() const;
};

/// Quasi-static solution of the wetted subnetwork. Segment flow is signed
/// positive from `from` to `to`; zone flow is positive into the zone.
struct FlowSolution {
  std::vector<double> node_pressure_pa;   // indexed like net.nodes; 0 if dry
  std::vector<double> segment_flow_m3s;   // indexed like net.segments
  std::vector<double> zone_flow_m3s;      // indexed like net.zones
  double pump_flow_m3s = 0.0;
  /// Largest Kirchhoff residual across wetted nodes, relative to pump flow.
  double max_kcl_residual_rel = 0.0;
};

/// Pressure drop per unit flow of a rectangular duct, low-Reynolds laminar
/// regime. Closed form with the fifth-order aspect correction; agrees with
/// the exact series solution to <0.3% for any aspect ratio.
double hydraulic_resistance(const VeinSegment& seg, const FluidSpec& fluid);

/// Capillary pressure 2*gamma*cos(theta)/r_h of a duct cross-section,
/// using the hydraulic radius r_h = A/P.
double capillary_pressure_segment(const VeinSegment& seg, const FluidSpec& fluid);
double capillary_pressure_zone(const PorousZone& zone, const FluidSpec& fluid);

/// Darcy resistance of a porous zone lumped as a parallel-plate slab,
/// k = phi * h_layer^2 / 12, path length sqrt(footprint).
double zone_hydraulic_resistance(const PorousZone& zone, const FluidSpec& fluid);

/// Solves Kirchhoff flow on the wetted subnetwork at time t. The pump flow
/// is injected at the inlet; every advancing front (partially filled
/// segment reached from a wetted node, unsaturated zone on a wetted node)
/// is a boundary at pressure -p_cap. Fronts whose solution flow would be
/// negative are pinned at zero flow (fronts do not recede).
FlowSolution solve_pressures(const VascularNetwork& net, const FluidSpec& fluid,
                             const PumpSchedule& pump, double t);

struct FrontAdvance {
  double delivered_m3 = 0.0;  // liquid volume moved into the network
  bool any_capacity_left = true;
};

/// Explicit Euler update of fill fractions and zone saturations from a flow
/// solution. Fractions clamp at 1; fill is monotone non-decreasing.
FrontAdvance advance_front(VascularNetwork& net, const FlowSolution& sol, double dt);

/// Advances filling over [t, t+dt], sub-stepping so that no front crosses a
/// completion boundary or more than 10% of its compartment per solve.
FrontAdvance advance_fill(VascularNetwork& net, const FluidSpec& fluid,
                          const PumpSchedule& pump, double t, double dt);

double total_filled_volume(const VascularNetwork& net);

/// Moth-shaped reference network: one thorax inlet, symmetric wing venation,
/// porous footprint 175 cm^2 and total internal volume 3.0 mL by
/// construction (vein lengths are scaled uniformly to hit the volume).
VascularNetwork build_demo_network();

}  // namespace receptosim::vasc
