#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "receptosim/photopolymerization.hpp"

namespace receptosim::receptor {

enum class Site { thorax, wing };

/// Embedded gold-wire electrode pair and the cells it senses.
struct ElectrodePair {
  int id = 0;
  Eigen::Vector2d location_mm = Eigen::Vector2d::Zero();
  double gap_um = 130.0;
  double wire_diameter_um = 30.0;
  std::vector<int> region_cell_ids;
  Site site = Site::thorax;
};

/// Lumped parallel-RC electrical model of the receptive area. The paper
/// fixes only the orderings (converted material is more conductive and more
/// capacitive); absolute values are scenario knobs placed so the ADC works
/// mid-range against the 460 kOhm divider.
struct ReceptorElectrical {
  double r_py_ohm = 5e6;
  double r_ppy_ohm = 4e5;
  double c_py_f = 1e-9;
  double c_ppy_f = 1e-8;
  double beta = 0.05;          // polaron sensitivity, per unit p
  double noise_sigma_v = 0.0;  // additive readout noise hook, off by default

  void validate() const;
};

struct AdcSample {
  double t = 0.0;
  int code = 0;  // 10-bit, [0,1023]
  char polarity = '+';
};

/// Exact relaxation step for the photo-excited polaron population:
/// decay with lifetime tau_p toward the steady state alpha_p * x * I * tau_p.
/// Unconverted material (x = 0) holds no polarons.
double polaron_step(double p, double irradiance_wm2, const photo::SynthesisParams& params,
                    double conversion, double dt);

/// Parallel conductance mix of converted/unconverted material, reduced by
/// the transient polaron population: R = R_mix / (1 + beta * p).
double effective_resistance(const ReceptorElectrical& elec, double mean_conversion,
                            double mean_polaron);

/// Linear capacitance mix (converted material is more capacitive).
double effective_capacitance(const ReceptorElectrical& elec, double mean_conversion);

struct PulseReadoutConfig {
  double divider_r_ohm = 460e3;
  double vcc_v = 4.2;
  double pulse_ms = 200.0;
  int n_avg = 8;
};

/// Bipolar constant-voltage pulse pair through the divider. Each pulse is
/// the closed-form RC divider transient sampled n_avg times over its final
/// half, averaged, and quantised with round-half-up to a 10-bit code. The
/// optional noise hook perturbs the averaged voltage before quantisation.
std::pair<AdcSample, AdcSample> pulse_readout(double r_eff_ohm, double c_eff_f,
                                              const PulseReadoutConfig& cfg, double t,
                                              double noise_v_plus = 0.0,
                                              double noise_v_minus = 0.0);

struct ImpedanceEstimate {
  double ohms = 0.0;
  bool saturated = false;  // code 1023: open circuit
};

/// Divider inversion Z = R_div * code / (1023 - code).
ImpedanceEstimate estimate_impedance(int code, double divider_r_ohm);

/// |Z| of the parallel-RC model at a reference frequency; mirrors bench
/// impedance-analyzer traces for the validation suite.
double peis_reference_magnitude(double r_eff_ohm, double c_eff_f, double freq_hz = 115.0);

}  // namespace receptosim::receptor
