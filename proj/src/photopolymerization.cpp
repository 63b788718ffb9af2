#include "receptosim/photopolymerization.hpp"

#include <algorithm>
#include <cmath>

#include "receptosim/errors.hpp"
#include "receptosim/units.hpp"

namespace receptosim::photo {

void SynthesisParams::validate() const {
  if (k_p <= 0.0 || i_syn <= 0.0 || alpha_p <= 0.0 || tau_p <= 0.0) {
    throw ConfigError("synthesis parameters must be positive");
  }
  if (t_inf <= 0.0 || t_inf >= 1.0) {
    throw ConfigError("residual transmittance must lie in (0,1)");
  }
}

namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

/// Gauss-Legendre nodes/weights on [-1,1], computed once per order.
struct GaussLegendre {
  std::vector<double> x, w;
  explicit GaussLegendre(int n) : x(n), w(n) {
    for (int i = 0; i < (n + 1) / 2; ++i) {
      double xi = std::cos(units::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = xi;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * xi * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (xi * p1 - p0) / (xi * xi - 1.0);
        const double dx = p1 / dp;
        xi -= dx;
        if (std::abs(dx) < 1e-15) break;
      }
      x[i] = -xi;
      x[n - 1 - i] = xi;
      w[i] = w[n - 1 - i] = 2.0 / ((1.0 - xi * xi) * dp * dp);
    }
  }
};

const GaussLegendre& quadrature64() {
  static const GaussLegendre gl(64);
  return gl;
}

/// Opaque x-intervals cut by the horizontal scanline y across all polygons
/// (even-odd rule). Returns sorted crossing abscissae; consecutive pairs
/// bound opaque runs.
std::vector<double> scanline_crossings(const MaskPattern& mask, double y) {
  std::vector<double> xs;
  for (const auto& poly : mask.opaque_polygons_mm) {
    const std::size_t n = poly.size();
    if (n < 3) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const Eigen::Vector2d& a = poly[i];
      const Eigen::Vector2d& b = poly[(i + 1) % n];
      if ((a.y() > y) != (b.y() > y)) {
        xs.push_back(a.x() + (y - a.y()) * (b.x() - a.x()) / (b.y() - a.y()));
      }
    }
  }
  std::sort(xs.begin(), xs.end());
  return xs;
}

}  // namespace

double mask_transmission(const MaskPattern& mask, const Eigen::Vector2d& point_mm) {
  if (mask.opaque_polygons_mm.empty()) return 1.0;
  if (mask.blur_sigma_mm <= 0.0) throw ConfigError("mask blur_sigma must be positive");
  const double sigma = mask.blur_sigma_mm;
  const double half_window = 6.0 * sigma;
  const auto& gl = quadrature64();

  // 2D Gaussian integral over the opaque set: exact erf in x along each
  // scanline, Gauss-Legendre in y.
  double opaque = 0.0;
  const double inv_norm = 1.0 / (std::sqrt(2.0 * units::pi) * sigma);
  for (std::size_t k = 0; k < gl.x.size(); ++k) {
    const double y = point_mm.y() + half_window * gl.x[k];
    const auto xs = scanline_crossings(mask, y);
    double run_mass = 0.0;
    for (std::size_t i = 0; i + 1 < xs.size(); i += 2) {
      run_mass += normal_cdf((xs[i + 1] - point_mm.x()) / sigma) -
                  normal_cdf((xs[i] - point_mm.x()) / sigma);
    }
    const double gy = inv_norm * std::exp(-0.5 * std::pow((y - point_mm.y()) / sigma, 2));
    opaque += gl.w[k] * half_window * gy * run_mass;
  }
  return std::clamp(1.0 - opaque, 0.0, 1.0);
}

double irradiance_at(const Eigen::Vector2d& point_mm, const std::vector<UvSource>& sources,
                     const std::vector<MaskPattern>& masks, double t) {
  double transmission = 1.0;
  for (const auto& m : masks) transmission *= mask_transmission(m, point_mm);
  double irradiance = 0.0;
  for (const auto& s : sources) {
    if (s.active_at(t)) irradiance += s.calibrated_irradiance_wm2;
  }
  return irradiance * transmission;
}

void advance_conversion(infusion::MatrixCell& cell, double irradiance_wm2,
                        const SynthesisParams& params, double dt) {
  if (dt <= 0.0) throw std::invalid_argument("advance_conversion: dt must be positive");
  if (!cell.precursor_present) return;
  if (irradiance_wm2 < params.i_syn) return;
  cell.conversion = 1.0 - (1.0 - cell.conversion) * std::exp(-params.k_p * irradiance_wm2 * dt);
}

double transmittance_580(double conversion, const SynthesisParams& params) {
  if (conversion < 0.0 || conversion > 1.0) {
    throw std::invalid_argument("conversion must lie in [0,1]");
  }
  return params.t_inf + (1.0 - params.t_inf) * (1.0 - conversion);
}

SynthesisParams calibrate_kinetics(double target_slope_per_s, double t_inf, double i_ref_wm2) {
  if (target_slope_per_s >= 0.0) {
    throw CalibrationError("transmittance slope target must be negative");
  }
  if (t_inf <= 0.0 || t_inf >= 1.0) {
    throw CalibrationError("residual transmittance must lie in (0,1)");
  }
  if (i_ref_wm2 <= 0.0) {
    throw CalibrationError("reference irradiance must be positive");
  }
  SynthesisParams p;
  p.t_inf = t_inf;
  p.k_p = -target_slope_per_s / ((1.0 - t_inf) * i_ref_wm2);
  return p;
}

}  // namespace receptosim::photo
