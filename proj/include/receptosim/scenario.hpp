#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "receptosim/controller.hpp"
#include "receptosim/photopolymerization.hpp"
#include "receptosim/receptor.hpp"
#include "receptosim/vascular_network.hpp"

namespace receptosim::sim {

struct TimedFluid {
  double t_start = 0.0;
  vasc::FluidSpec fluid;
};

struct ReceptorSpec {
  receptor::ElectrodePair pair;
  receptor::ReceptorElectrical electrical;
  receptor::PulseReadoutConfig readout;
  control::Config controller;
  int region_zone = -1;  // all cells of this zone, unless explicit ids given
};

/// A complete simulation configuration. Parsed from the structured-text
/// scenario file (JSON, schema version 1) or built programmatically.
struct Scenario {
  int schema = 1;
  double t_end_s = 0.0;
  std::uint64_t seed = 0;
  double dt_fluid_s = 0.1;
  double dt_chem_s = 0.1;
  double dt_electrical_s = 0.001;
  bool demo_network = true;
  vasc::VascularNetwork network;  // resolved network (demo or inline)
  int cells_per_side = 5;
  std::vector<TimedFluid> fluids;
  vasc::PumpSchedule pump;
  std::vector<photo::UvSource> sources;
  std::vector<photo::MaskPattern> masks;
  std::vector<ReceptorSpec> receptors;
  photo::SynthesisParams synthesis;

  void validate() const;
  const vasc::FluidSpec& fluid_at(double t) const;
};

/// Parses a scenario from JSON text. Errors carry the offending field path.
Scenario parse_scenario(const std::string& json_text);
Scenario load_scenario_file(const std::string& path);

/// Serialises a scenario back to schema-1 JSON (used to generate the
/// shipped scenario files and for round-trip tests).
std::string scenario_to_json(const Scenario& s);

/// The closed-loop demonstration scenario: pump-driven fill, masked
/// synthesis exposure over the thorax window, then the weak test source.
Scenario make_fig4_scenario();

/// Same timeline with the synthesis exposure removed; the receptor stays
/// unconverted and must not react.
Scenario make_fig4_no_synthesis_scenario();

}  // namespace receptosim::sim
