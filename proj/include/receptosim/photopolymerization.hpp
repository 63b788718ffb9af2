#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "receptosim/matrix_infusion.hpp"

namespace receptosim::photo {

/// A UV LED as seen by the target plane. The irradiance is a calibrated
/// scalar; nominal power and distance are descriptive only (beam geometry
/// is not recoverable from them).
struct UvSource {
  int id = 0;
  std::string label;
  double nominal_power_w = 0.0;
  double distance_mm = 0.0;
  double calibrated_irradiance_wm2 = 0.0;
  double wavelength_nm = 365.0;
  std::vector<std::pair<double, double>> schedule;  // [t_on, t_off) intervals

  bool active_at(double t) const {
    for (const auto& [on, off] : schedule) {
      if (t >= on && t < off) return true;
    }
    return false;
  }
};

/// Contact mask: opaque polygons in target-plane mm coordinates, combined
/// with the even-odd rule (a polygon inside another cuts a clear window).
/// Scattering at the mask edge is a Gaussian blur of width blur_sigma.
struct MaskPattern {
  std::vector<std::vector<Eigen::Vector2d>> opaque_polygons_mm;
  double blur_sigma_mm = 0.117;
};

/// Kinetic constants of the receptor chemistry. alpha_p/tau_p belong to the
/// polaron response and are consumed by the receptor model.
struct SynthesisParams {
  double k_p = 2.4e-4;    // (W/m^2)^-1 s^-1 effective conversion rate
  double i_syn = 50.0;    // W/m^2 synthesis threshold irradiance
  double t_inf = 0.25;    // residual 580 nm transmittance
  double alpha_p = 0.02;  // polaron generation coefficient, per (W/m^2 * s)
  double tau_p = 5.0;     // polaron lifetime, s

  void validate() const;
};

/// Blurred transmission of one mask at a point: the clear fraction of a
/// Gaussian of width blur_sigma centred there (1 = fully clear).
double mask_transmission(const MaskPattern& mask, const Eigen::Vector2d& point_mm);

/// Irradiance at a target-plane point: sum over sources active at t of
/// calibrated irradiance times the product of all mask transmissions.
double irradiance_at(const Eigen::Vector2d& point_mm, const std::vector<UvSource>& sources,
                     const std::vector<MaskPattern>& masks, double t);

/// Self-inhibiting conversion step, exact exponential form
/// x' = 1 - (1-x) exp(-k_p I dt). Runs only where precursor is stored and
/// the irradiance clears the synthesis threshold; conversion never reverses.
void advance_conversion(infusion::MatrixCell& cell, double irradiance_wm2,
                        const SynthesisParams& params, double dt);

/// 580 nm transmittance of converted material, T = T_inf + (1-T_inf)(1-x).
double transmittance_580(double conversion, const SynthesisParams& params);

/// Chooses k_p so that the initial transmittance slope under I_ref equals
/// target_slope (which must be negative).
SynthesisParams calibrate_kinetics(double target_slope_per_s, double t_inf, double i_ref_wm2);

/// 10-90 width of a Gaussian edge profile is 2.5631 sigma; used to translate
/// the optical resolution target into a blur width.
inline constexpr double kEdgeWidthPerSigma = 2.563103131089201;

}  // namespace receptosim::photo
