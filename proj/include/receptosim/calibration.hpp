#pragma once

#include <string>
#include <vector>

#include "receptosim/photopolymerization.hpp"

namespace receptosim::sim {

struct CalibrationTargets {
  double slope_per_s = -0.018;   // initial 580 nm transmittance slope
  double resolution_mm = 0.3;    // 10-90 lithographic edge width
  double t_inf = 0.25;           // residual transmittance
  double i_ref_wm2 = 100.0;      // synthesis-source irradiance
};

struct CalibrationResult {
  photo::SynthesisParams params;
  double blur_sigma_mm = 0.0;
  double measured_slope_per_s = 0.0;
  double measured_width_mm = 0.0;
  double slope_residual_rel = 0.0;
  double width_residual_rel = 0.0;
};

/// Simulates an unmasked exposure of a fresh infused cell and returns the
/// (t, T) transmittance trace, sample 0 at t = 0.
std::vector<std::pair<double, double>> simulate_transmittance_trace(
    const photo::SynthesisParams& params, double irradiance_wm2, double duration_s, double dt_s);

/// Least-squares fit of T = c + A exp(-k t) over samples with t <= window_s.
/// Returns {A, k, c}; the fitted initial slope is -A*k and the fitted
/// plateau is c.
struct ExponentialFit {
  double amplitude = 0.0;
  double rate = 0.0;
  double asymptote = 0.0;
  double initial_slope() const { return -amplitude * rate; }
};
ExponentialFit fit_exponential(const std::vector<std::pair<double, double>>& trace,
                               double window_s);

/// Resolution probe: a straight-edge contact mask exposed at low dose with
/// irradiance far above the synthesis threshold, so the conversion edge
/// reports the optical blur rather than kinetic saturation or thresholding.
struct EdgeProbe {
  double irradiance_wm2 = 1000.0;
  double dose = 0.12;  // k_p * I * t, kept small for a linear response
};

/// 10-90 width (mm) of the conversion profile across a blurred straight
/// mask edge, normalised to the far-field plateau.
double measure_edge_width_mm(const photo::SynthesisParams& params, double blur_sigma_mm,
                             const EdgeProbe& probe = {});

/// Full calibration: closed-form parameter choice plus re-simulation of both
/// observables. Throws CalibrationError when a residual exceeds its bound
/// (slope 1%, width 2%).
CalibrationResult calibrate(const CalibrationTargets& targets);

/// JSON calibration report (written by the CLI).
std::string calibration_report_json(const CalibrationTargets& targets,
                                    const CalibrationResult& result);

}  // namespace receptosim::sim
