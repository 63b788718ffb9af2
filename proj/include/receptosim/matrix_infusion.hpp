#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

namespace receptosim::infusion {

/// Saturation depth of the infused surface layer. Two independent readings
/// of the print geometry agree on 10 um, so it is a constant, not a knob.
inline constexpr double kMaxDepthUm = 10.0;

/// A sampled patch of printed polymer. Conversion and polaron density live
/// here; infusion state is kept as depth^2 so sub-step composition is exact.
struct MatrixCell {
  int id = 0;
  int zone_id = 0;
  Eigen::Vector2d position_mm = Eigen::Vector2d::Zero();
  double depth_sq_um2 = 0.0;       // infusion depth squared, capped at 100
  bool precursor_present = false;
  double conversion = 0.0;         // x in [0,1]
  double polaron_density = 0.0;    // p >= 0

  double infusion_depth_um() const { return std::sqrt(depth_sq_um2); }
};

/// Diffusive infiltration coefficient, m^2/s. Calibrated so the sqrt-law
/// depth reaches 10 um after 20 s of wet contact.
inline double infusion_coefficient() {
  const double depth_m = kMaxDepthUm * 1e-6;
  return depth_m * depth_m / 20.0;
}

/// One infiltration step. While wetted the depth follows
/// depth' = sqrt(depth^2 + D*dt) up to the cap and the cell is marked as
/// holding precursor; a dry cell keeps both (storage survives drying).
inline void advance_infusion(MatrixCell& cell, bool wetted, double dt) {
  if (dt <= 0.0) throw std::invalid_argument("advance_infusion: dt must be positive");
  if (!wetted) return;
  const double d_um2_per_s = infusion_coefficient() * 1e12;  // um^2/s
  cell.depth_sq_um2 = std::min(kMaxDepthUm * kMaxDepthUm, cell.depth_sq_um2 + d_um2_per_s * dt);
  cell.precursor_present = true;
}

/// Lays a per-zone sampling grid of cells over a square patch of the zone's
/// footprint, centred on the attached node.
std::vector<MatrixCell> make_cell_grid(int zone_id, const Eigen::Vector2d& centre_mm,
                                       double footprint_mm2, int per_side, int first_id);

}  // namespace receptosim::infusion
