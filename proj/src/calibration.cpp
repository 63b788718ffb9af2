#include "receptosim/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "receptosim/errors.hpp"
#include "receptosim/matrix_infusion.hpp"

namespace receptosim::sim {

std::vector<std::pair<double, double>> simulate_transmittance_trace(
    const photo::SynthesisParams& params, double irradiance_wm2, double duration_s, double dt_s) {
  if (duration_s <= 0.0 || dt_s <= 0.0) {
    throw std::invalid_argument("trace duration and dt must be positive");
  }
  infusion::MatrixCell cell;
  cell.precursor_present = true;
  cell.depth_sq_um2 = infusion::kMaxDepthUm * infusion::kMaxDepthUm;
  std::vector<std::pair<double, double>> trace;
  trace.emplace_back(0.0, photo::transmittance_580(cell.conversion, params));
  const long n = std::lround(duration_s / dt_s);
  for (long i = 0; i < n; ++i) {
    photo::advance_conversion(cell, irradiance_wm2, params, dt_s);
    trace.emplace_back((i + 1) * dt_s, photo::transmittance_580(cell.conversion, params));
  }
  return trace;
}

namespace {

/// Sum of squared residuals of the best (A, c) for a fixed decay rate.
double sse_for_rate(const std::vector<std::pair<double, double>>& pts, double k, double* a_out,
                    double* c_out) {
  // Linear least squares in (A, c) against basis {exp(-k t), 1}.
  double s_ee = 0.0, s_e1 = 0.0, s_11 = 0.0, s_ey = 0.0, s_1y = 0.0;
  for (const auto& [t, y] : pts) {
    const double e = std::exp(-k * t);
    s_ee += e * e;
    s_e1 += e;
    s_11 += 1.0;
    s_ey += e * y;
    s_1y += y;
  }
  const double det = s_ee * s_11 - s_e1 * s_e1;
  if (std::abs(det) < 1e-300) return std::numeric_limits<double>::infinity();
  const double a = (s_ey * s_11 - s_1y * s_e1) / det;
  const double c = (s_ee * s_1y - s_e1 * s_ey) / det;
  double sse = 0.0;
  for (const auto& [t, y] : pts) {
    const double r = y - (c + a * std::exp(-k * t));
    sse += r * r;
  }
  if (a_out) *a_out = a;
  if (c_out) *c_out = c;
  return sse;
}

}  // namespace

ExponentialFit fit_exponential(const std::vector<std::pair<double, double>>& trace,
                               double window_s) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& p : trace) {
    if (p.first <= window_s + 1e-12) pts.push_back(p);
  }
  if (pts.size() < 3) throw CalibrationError("too few samples for an exponential fit");

  // Golden-section search for the rate on a log grid bracket.
  double lo = 1e-5, hi = 10.0;
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - phi * (hi - lo);
  double x2 = lo + phi * (hi - lo);
  double f1 = sse_for_rate(pts, x1, nullptr, nullptr);
  double f2 = sse_for_rate(pts, x2, nullptr, nullptr);
  for (int it = 0; it < 200; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = sse_for_rate(pts, x1, nullptr, nullptr);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = sse_for_rate(pts, x2, nullptr, nullptr);
    }
    if (hi - lo < 1e-12) break;
  }
  ExponentialFit fit;
  fit.rate = 0.5 * (lo + hi);
  sse_for_rate(pts, fit.rate, &fit.amplitude, &fit.asymptote);
  return fit;
}

double measure_edge_width_mm(const photo::SynthesisParams& params, double blur_sigma_mm,
                             const EdgeProbe& probe) {
  if (blur_sigma_mm <= 0.0) throw std::invalid_argument("blur sigma must be positive");
  // Straight vertical mask edge at x = 0; opaque half-plane on x > 0,
  // represented as a rectangle much larger than the blur window.
  photo::MaskPattern mask;
  mask.blur_sigma_mm = blur_sigma_mm;
  const double big = 1000.0;
  mask.opaque_polygons_mm = {{{0.0, -big}, {big, -big}, {big, big}, {0.0, big}}};

  const double dose_time = probe.dose / (params.k_p * probe.irradiance_wm2);
  const double span = 8.0 * blur_sigma_mm;
  const int n_samples = 801;
  std::vector<double> xs(n_samples), conv(n_samples);
  for (int i = 0; i < n_samples; ++i) {
    const double x = -span + 2.0 * span * i / (n_samples - 1);
    xs[i] = x;
    infusion::MatrixCell cell;
    cell.precursor_present = true;
    cell.depth_sq_um2 = infusion::kMaxDepthUm * infusion::kMaxDepthUm;
    const double irradiance =
        probe.irradiance_wm2 * photo::mask_transmission(mask, Eigen::Vector2d(x, 0.0));
    photo::advance_conversion(cell, irradiance, params, dose_time);
    conv[i] = cell.conversion;
  }
  const double plateau = *std::max_element(conv.begin(), conv.end());
  if (plateau <= 0.0) throw CalibrationError("edge probe produced no conversion");

  // The profile falls monotonically across the edge; locate the normalised
  // 0.9 and 0.1 crossings by linear interpolation.
  auto crossing = [&](double level) {
    const double target = level * plateau;
    for (int i = 0; i + 1 < n_samples; ++i) {
      if ((conv[i] >= target) && (conv[i + 1] < target)) {
        const double f = (conv[i] - target) / (conv[i] - conv[i + 1]);
        return xs[i] + f * (xs[i + 1] - xs[i]);
      }
    }
    throw CalibrationError("edge probe profile does not cross the requested level");
  };
  return crossing(0.1) - crossing(0.9);
}

CalibrationResult calibrate(const CalibrationTargets& targets) {
  if (targets.slope_per_s >= 0.0) {
    throw CalibrationError("slope target must be negative");
  }
  if (targets.resolution_mm <= 0.0) {
    throw CalibrationError("resolution target must be positive");
  }
  CalibrationResult result;
  result.params = photo::calibrate_kinetics(targets.slope_per_s, targets.t_inf, targets.i_ref_wm2);
  result.blur_sigma_mm = targets.resolution_mm / photo::kEdgeWidthPerSigma;

  // Re-simulate both observables and check the residuals.
  const auto trace =
      simulate_transmittance_trace(result.params, targets.i_ref_wm2, 60.0, 0.1);
  const auto fit = fit_exponential(trace, 5.0);
  result.measured_slope_per_s = fit.initial_slope();
  result.slope_residual_rel =
      std::abs(result.measured_slope_per_s - targets.slope_per_s) / std::abs(targets.slope_per_s);

  result.measured_width_mm = measure_edge_width_mm(result.params, result.blur_sigma_mm);
  result.width_residual_rel =
      std::abs(result.measured_width_mm - targets.resolution_mm) / targets.resolution_mm;

  if (result.slope_residual_rel > 0.01) {
    throw CalibrationError("calibration failed: slope residual " +
                           std::to_string(result.slope_residual_rel) + " exceeds 1%");
  }
  if (result.width_residual_rel > 0.02) {
    throw CalibrationError("calibration failed: width residual " +
                           std::to_string(result.width_residual_rel) + " exceeds 2%");
  }
  return result;
}

std::string calibration_report_json(const CalibrationTargets& targets,
                                    const CalibrationResult& result) {
  nlohmann::json j;
  j["targets"] = {{"slope", targets.slope_per_s},
                  {"resolution", targets.resolution_mm},
                  {"t_inf", targets.t_inf},
                  {"i_ref", targets.i_ref_wm2}};
  j["params"] = {{"k_p", result.params.k_p},
                 {"i_syn", result.params.i_syn},
                 {"t_inf", result.params.t_inf},
                 {"alpha_p", result.params.alpha_p},
                 {"tau_p", result.params.tau_p}};
  j["blur_sigma"] = result.blur_sigma_mm;
  j["measured"] = {{"slope", result.measured_slope_per_s},
                   {"width", result.measured_width_mm},
                   {"slope_residual_rel", result.slope_residual_rel},
                   {"width_residual_rel", result.width_residual_rel}};
  return j.dump(2) + "\n";
}

}  // namespace receptosim::sim
