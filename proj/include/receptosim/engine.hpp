#pragma once

#include <map>
#include <string>
#include <vector>

#include "receptosim/controller.hpp"
#include "receptosim/matrix_infusion.hpp"
#include "receptosim/scenario.hpp"

namespace receptosim::sim {

struct FillRow {
  double t = 0.0;
  double filled_m3 = 0.0;
  double delivered_m3 = 0.0;
};

struct ChemRow {
  double t = 0.0;
  double mean_conversion = 0.0;
  double max_conversion = 0.0;
  double mean_polaron = 0.0;
};

struct TransmittanceRow {
  double t = 0.0;
  double transmittance = 0.0;
};

struct ImpedanceRow {
  double t = 0.0;
  char polarity = '+';
  int code = 0;
  double z_ohm = 0.0;
};

struct PeisRow {
  double t = 0.0;
  double z_mag_ohm = 0.0;
};

struct ReceptorTrace {
  int receptor_id = 0;
  std::string site;
  std::vector<TransmittanceRow> transmittance;
  std::vector<ImpedanceRow> impedance;
  std::vector<PeisRow> peis;
  std::vector<control::OutputEvent> events;  // time-ordered
  double first_decrease_t = -1.0;
  double first_red_blink_t = -1.0;
  double first_flap_t = -1.0;
  int reaction_count = 0;
};

struct RunOutput {
  std::vector<FillRow> fill;
  std::vector<ChemRow> chem;
  std::vector<ReceptorTrace> receptors;
  std::vector<infusion::MatrixCell> final_cells;
  double fill_complete_t = -1.0;
  double synthesis_onset_t = -1.0;
  double delivered_m3 = 0.0;
  double capacity_m3 = 0.0;
};

/// Runs a scenario deterministically: fluid, infusion, chemistry, polaron
/// relaxation, pulse readout and controller, interleaved in that order on
/// their configured cadences.
RunOutput run_scenario(const Scenario& scenario);

/// Renders every output file (CSV series, per-receptor event logs,
/// summary.json) as filename -> content. Byte-stable for a fixed scenario.
std::map<std::string, std::string> render_run_output(const Scenario& scenario,
                                                     const RunOutput& out);

/// Writes the rendered outputs into `dir`, creating it if needed.
void write_run_output(const std::string& dir, const Scenario& scenario, const RunOutput& out);

}  // namespace receptosim::sim
