#include "receptosim/receptor.hpp"

#include <algorithm>
#include <cmath>

#include "receptosim/errors.hpp"
#include "receptosim/units.hpp"

namespace receptosim::receptor {

void ReceptorElectrical::validate() const {
  if (r_py_ohm <= 0.0 || r_ppy_ohm <= 0.0 || c_py_f <= 0.0 || c_ppy_f <= 0.0 || beta <= 0.0) {
    throw ConfigError("receptor electrical parameters must be positive");
  }
  if (r_ppy_ohm >= r_py_ohm) {
    throw ConfigError("converted receptor must be more conductive (R_ppy < R_py)");
  }
  if (c_ppy_f <= c_py_f) {
    throw ConfigError("converted receptor must be more capacitive (C_ppy > C_py)");
  }
  if (noise_sigma_v < 0.0) throw ConfigError("noise sigma must be >= 0");
}

double polaron_step(double p, double irradiance_wm2, const photo::SynthesisParams& params,
                    double conversion, double dt) {
  if (dt <= 0.0) throw std::invalid_argument("polaron_step: dt must be positive");
  if (p < 0.0) throw std::invalid_argument("polaron_step: density must be >= 0");
  const double steady = params.alpha_p * conversion * irradiance_wm2 * params.tau_p;
  const double decay = std::exp(-dt / params.tau_p);
  return p * decay + steady * (1.0 - decay);
}

double effective_resistance(const ReceptorElectrical& elec, double mean_conversion,
                            double mean_polaron) {
  if (mean_conversion < 0.0 || mean_conversion > 1.0) {
    throw std::invalid_argument("mean conversion must lie in [0,1]");
  }
  const double g = mean_conversion / elec.r_ppy_ohm + (1.0 - mean_conversion) / elec.r_py_ohm;
  const double r_base = 1.0 / g;
  return r_base / (1.0 + elec.beta * std::max(mean_polaron, 0.0));
}

double effective_capacitance(const ReceptorElectrical& elec, double mean_conversion) {
  return mean_conversion * elec.c_ppy_f + (1.0 - mean_conversion) * elec.c_py_f;
}

namespace {

int quantize10(double v, double vcc) {
  // Round half up, as the firmware does; clamp to the converter range.
  const double code = std::floor(1023.0 * v / vcc + 0.5);
  return static_cast<int>(std::clamp(code, 0.0, 1023.0));
}

double averaged_pulse_voltage(double r_eff, double c_eff, const PulseReadoutConfig& cfg) {
  const double divider = (std::isinf(r_eff)) ? 1.0 : r_eff / (cfg.divider_r_ohm + r_eff);
  const double v_final = cfg.vcc_v * divider;
  const double pulse_s = cfg.pulse_ms * 1e-3;
  const double r_par = std::isinf(r_eff)
                           ? cfg.divider_r_ohm
                           : (cfg.divider_r_ohm * r_eff) / (cfg.divider_r_ohm + r_eff);
  const double tau = r_par * c_eff;
  // n_avg samples spread uniformly over the final half of the pulse; the
  // last sample lands on the trailing edge.
  double sum = 0.0;
  for (int i = 0; i < cfg.n_avg; ++i) {
    const double t_i = pulse_s * (0.5 + 0.5 * (i + 1) / cfg.n_avg);
    const double transient = (tau > 0.0) ? std::exp(-t_i / tau) : 0.0;
    sum += v_final * (1.0 - transient);
  }
  return sum / cfg.n_avg;
}

}  // namespace

std::pair<AdcSample, AdcSample> pulse_readout(double r_eff_ohm, double c_eff_f,
                                              const PulseReadoutConfig& cfg, double t,
                                              double noise_v_plus, double noise_v_minus) {
  if (cfg.vcc_v <= 0.0 || cfg.divider_r_ohm <= 0.0 || cfg.pulse_ms <= 0.0 || cfg.n_avg <= 0) {
    throw ConfigError("pulse readout configuration must be positive");
  }
  if (r_eff_ohm < 0.0 || c_eff_f < 0.0) {
    throw std::invalid_argument("receptor R and C must be >= 0");
  }
  const double v_avg = averaged_pulse_voltage(r_eff_ohm, c_eff_f, cfg);
  const double pulse_s = cfg.pulse_ms * 1e-3;
  AdcSample pos;
  pos.t = t;
  pos.polarity = '+';
  pos.code = quantize10(v_avg + noise_v_plus, cfg.vcc_v);
  // The negative pulse drives -Vcc through the same divider; the ADC reads
  // the magnitude, so a linear receptor repeats the code.
  AdcSample neg;
  neg.t = t + pulse_s;
  neg.polarity = '-';
  neg.code = quantize10(v_avg + noise_v_minus, cfg.vcc_v);
  return {pos, neg};
}

ImpedanceEstimate estimate_impedance(int code, double divider_r_ohm) {
  if (code < 0 || code > 1023) throw std::invalid_argument("ADC code out of range");
  if (divider_r_ohm <= 0.0) throw std::invalid_argument("divider resistance must be positive");
  ImpedanceEstimate est;
  if (code == 1023) {
    est.saturated = true;
    est.ohms = std::numeric_limits<double>::infinity();
    return est;
  }
  est.ohms = divider_r_ohm * static_cast<double>(code) / static_cast<double>(1023 - code);
  return est;
}

double peis_reference_magnitude(double r_eff_ohm, double c_eff_f, double freq_hz) {
  if (freq_hz <= 0.0) throw std::invalid_argument("frequency must be positive");
  const double w_rc = 2.0 * units::pi * freq_hz * r_eff_ohm * c_eff_f;
  return r_eff_ohm / std::sqrt(1.0 + w_rc * w_rc);
}

}  // namespace receptosim::receptor
