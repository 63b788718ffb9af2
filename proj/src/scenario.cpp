#include "receptosim/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "receptosim/errors.hpp"

namespace receptosim::sim {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Validation

void Scenario::validate() const {
  if (schema != 1) throw ConfigError("/schema: unsupported schema version");
  if (t_end_s < 0.0) throw ConfigError("/t_end: must be >= 0");
  if (dt_fluid_s <= 0.0) throw ConfigError("/dt_fluid: must be > 0");
  if (dt_chem_s <= 0.0) throw ConfigError("/dt_chem: must be > 0");
  if (dt_electrical_s <= 0.0) throw ConfigError("/dt_electrical: must be > 0");
  const double fluid_ratio = dt_fluid_s / dt_chem_s;
  if (std::abs(fluid_ratio - std::round(fluid_ratio)) > 1e-9 || fluid_ratio < 1.0 - 1e-9) {
    throw ConfigError("/dt_fluid: must be a positive integer multiple of dt_chem");
  }
  if (fluids.empty()) throw ConfigError("/fluids: at least one fluid is required");
  for (std::size_t i = 1; i < fluids.size(); ++i) {
    if (fluids[i].t_start < fluids[i - 1].t_start) {
      throw ConfigError("/fluids: entries must be ordered by t_start");
    }
  }
  if (network.nodes.empty()) throw ConfigError("/network: empty network");
  network.inlet_id();  // throws TopologyError when missing/duplicated
  if (cells_per_side <= 0) throw ConfigError("/cells_per_side: must be >= 1");
  synthesis.validate();
  for (std::size_t i = 0; i < receptors.size(); ++i) {
    const auto& r = receptors[i];
    const std::string at = "/receptors/" + std::to_string(i);
    if (r.pair.gap_um <= 0.0) throw ConfigError(at + "/gap: must be > 0");
    if (r.region_zone < 0 && r.pair.region_cell_ids.empty()) {
      throw ConfigError(at + ": region_zone or an explicit region is required");
    }
    r.electrical.validate();
    r.controller.validate();
    const double tick_ratio = r.controller.tick_interval_s / dt_chem_s;
    if (std::abs(tick_ratio - std::round(tick_ratio)) > 1e-9 || tick_ratio < 1.0 - 1e-9) {
      throw ConfigError(at + "/controller/tick_interval: must be an integer multiple of dt_chem");
    }
  }
}

const vasc::FluidSpec& Scenario::fluid_at(double t) const {
  const vasc::FluidSpec* found = &fluids.front().fluid;
  for (const auto& f : fluids) {
    if (f.t_start <= t) found = &f.fluid;
  }
  return *found;
}

// ---------------------------------------------------------------------------
// JSON parsing helpers

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw ConfigError(path + ": " + msg);
}

const json& member(const json& j, const char* key, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(path + "/" + key, "missing required field");
  return *it;
}

double num(const json& j, const char* key, const std::string& path) {
  const json& v = member(j, key, path);
  if (!v.is_number()) fail(path + "/" + key, "expected a number");
  return v.get<double>();
}

double num_or(const json& j, const char* key, const std::string& path, double def) {
  if (!j.is_object() || !j.contains(key)) return def;
  return num(j, key, path);
}

int integer(const json& j, const char* key, const std::string& path) {
  const json& v = member(j, key, path);
  if (!v.is_number_integer()) fail(path + "/" + key, "expected an integer");
  return v.get<int>();
}

int integer_or(const json& j, const char* key, const std::string& path, int def) {
  if (!j.is_object() || !j.contains(key)) return def;
  return integer(j, key, path);
}

std::string str_or(const json& j, const char* key, const std::string& path,
                   const std::string& def) {
  if (!j.is_object() || !j.contains(key)) return def;
  const json& v = j.at(key);
  if (!v.is_string()) fail(path + "/" + key, "expected a string");
  return v.get<std::string>();
}

const json& array(const json& j, const char* key, const std::string& path) {
  const json& v = member(j, key, path);
  if (!v.is_array()) fail(path + "/" + key, "expected an array");
  return v;
}

vasc::VascularNetwork parse_network(const json& j, const std::string& path) {
  vasc::VascularNetwork net;
  for (std::size_t i = 0; i < array(j, "nodes", path).size(); ++i) {
    const json& n = j["nodes"][i];
    const std::string at = path + "/nodes/" + std::to_string(i);
    vasc::Node node;
    node.id = integer(n, "id", at);
    node.position_mm = {num(n, "x", at), num(n, "y", at)};
    const std::string kind = str_or(n, "kind", at, "junction");
    if (kind == "inlet") {
      node.kind = vasc::NodeKind::inlet;
    } else if (kind == "junction") {
      node.kind = vasc::NodeKind::junction;
    } else if (kind == "terminal") {
      node.kind = vasc::NodeKind::terminal;
    } else {
      fail(at + "/kind", "expected inlet|junction|terminal");
    }
    net.nodes.push_back(node);
  }
  for (std::size_t i = 0; i < array(j, "segments", path).size(); ++i) {
    const json& s = j["segments"][i];
    const std::string at = path + "/segments/" + std::to_string(i);
    vasc::VeinSegment seg;
    seg.id = integer(s, "id", at);
    seg.from = integer(s, "from", at);
    seg.to = integer(s, "to", at);
    seg.length_mm = num(s, "length", at);
    seg.width_mm = num_or(s, "width", at, 1.0);
    seg.height_mm = num_or(s, "height", at, 1.4);
    seg.filled_fraction = num_or(s, "filled_fraction", at, 0.0);
    if (seg.length_mm < 0.0) fail(at + "/length", "must be >= 0");
    if (seg.width_mm <= 0.0 || seg.height_mm <= 0.0) fail(at, "cross-section must be positive");
    if (seg.filled_fraction < 0.0 || seg.filled_fraction > 1.0) {
      fail(at + "/filled_fraction", "must lie in [0,1]");
    }
    net.segments.push_back(seg);
  }
  if (j.contains("zones")) {
    for (std::size_t i = 0; i < array(j, "zones", path).size(); ++i) {
      const json& z = j["zones"][i];
      const std::string at = path + "/zones/" + std::to_string(i);
      vasc::PorousZone zone;
      zone.id = integer(z, "id", at);
      zone.attached_node = integer(z, "node", at);
      zone.footprint_mm2 = num(z, "footprint_area", at);
      zone.layer_count = integer_or(z, "layer_count", at, 3);
      zone.layer_height_mm = num_or(z, "layer_height", at, 0.1);
      zone.porosity = num_or(z, "porosity", at, 0.25);
      zone.saturation = num_or(z, "saturation", at, 0.0);
      if (zone.footprint_mm2 <= 0.0) fail(at + "/footprint_area", "must be > 0");
      if (zone.saturation < 0.0 || zone.saturation > 1.0) {
        fail(at + "/saturation", "must lie in [0,1]");
      }
      net.zones.push_back(zone);
    }
  }
  return net;
}

}  // namespace

Scenario parse_scenario(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("/: not valid JSON (") + e.what() + ")");
  }
  const std::string root = "";
  Scenario s;
  s.schema = integer(j, "schema", root);
  if (s.schema != 1) fail("/schema", "unsupported schema version (expected 1)");
  s.t_end_s = num(j, "t_end", root);
  s.seed = static_cast<std::uint64_t>(integer_or(j, "seed", root, 0));
  s.dt_fluid_s = num_or(j, "dt_fluid", root, 0.1);
  s.dt_chem_s = num_or(j, "dt_chem", root, 0.1);
  s.dt_electrical_s = num_or(j, "dt_electrical", root, 0.001);
  s.cells_per_side = integer_or(j, "cells_per_side", root, 5);

  const json& net = member(j, "network", root);
  if (net.is_string()) {
    if (net.get<std::string>() != "demo") fail("/network", "expected \"demo\" or an object");
    s.demo_network = true;
    s.network = vasc::build_demo_network();
  } else {
    s.demo_network = false;
    s.network = parse_network(net, "/network");
  }

  for (std::size_t i = 0; i < array(j, "fluids", root).size(); ++i) {
    const json& f = j["fluids"][i];
    const std::string at = "/fluids/" + std::to_string(i);
    TimedFluid tf;
    tf.t_start = num_or(f, "t_start", at, 0.0);
    tf.fluid.viscosity_pas = num(f, "viscosity", at);
    tf.fluid.surface_tension_npm = num_or(f, "surface_tension", at, 0.0);
    tf.fluid.contact_angle_deg = num_or(f, "contact_angle", at, 0.0);
    tf.fluid.precursor_concentration = num_or(f, "precursor_concentration", at, 1.0);
    if (tf.fluid.viscosity_pas <= 0.0) fail(at + "/viscosity", "must be > 0");
    if (tf.fluid.precursor_concentration < 0.0 || tf.fluid.precursor_concentration > 1.0) {
      fail(at + "/precursor_concentration", "must lie in [0,1]");
    }
    s.fluids.push_back(tf);
  }

  std::vector<vasc::PumpSchedule::Interval> pump_intervals;
  for (std::size_t i = 0; i < array(j, "pump", root).size(); ++i) {
    const json& p = j["pump"][i];
    const std::string at = "/pump/" + std::to_string(i);
    vasc::PumpSchedule::Interval iv;
    iv.t_start = num(p, "t_start", at);
    iv.t_end = num(p, "t_end", at);
    iv.q_m3s = num(p, "q", at);
    if (iv.q_m3s < 0.0) fail(at + "/q", "must be >= 0");
    pump_intervals.push_back(iv);
  }
  try {
    s.pump = vasc::PumpSchedule(pump_intervals);
  } catch (const std::invalid_argument& e) {
    fail("/pump", e.what());
  }

  if (j.contains("sources")) {
    for (std::size_t i = 0; i < array(j, "sources", root).size(); ++i) {
      const json& u = j["sources"][i];
      const std::string at = "/sources/" + std::to_string(i);
      photo::UvSource src;
      src.id = integer_or(u, "id", at, static_cast<int>(i) + 1);
      src.label = str_or(u, "label", at, "");
      src.nominal_power_w = num_or(u, "nominal_power", at, 0.0);
      src.distance_mm = num_or(u, "distance", at, 0.0);
      src.calibrated_irradiance_wm2 = num(u, "calibrated_irradiance", at);
      src.wavelength_nm = num_or(u, "wavelength", at, 365.0);
      if (src.calibrated_irradiance_wm2 < 0.0) {
        fail(at + "/calibrated_irradiance", "must be >= 0");
      }
      for (std::size_t k = 0; k < array(u, "schedule", at).size(); ++k) {
        const json& iv = u["schedule"][k];
        if (!iv.is_array() || iv.size() != 2 || !iv[0].is_number() || !iv[1].is_number()) {
          fail(at + "/schedule/" + std::to_string(k), "expected [t_on, t_off]");
        }
        const double on = iv[0].get<double>();
        const double off = iv[1].get<double>();
        if (off < on) fail(at + "/schedule/" + std::to_string(k), "t_off before t_on");
        src.schedule.emplace_back(on, off);
      }
      s.sources.push_back(src);
    }
  }

  if (j.contains("masks")) {
    for (std::size_t i = 0; i < array(j, "masks", root).size(); ++i) {
      const json& m = j["masks"][i];
      const std::string at = "/masks/" + std::to_string(i);
      photo::MaskPattern mask;
      mask.blur_sigma_mm = num(m, "blur_sigma", at);
      if (mask.blur_sigma_mm <= 0.0) fail(at + "/blur_sigma", "must be > 0");
      for (std::size_t k = 0; k < array(m, "opaque", at).size(); ++k) {
        const json& poly = m["opaque"][k];
        const std::string pat = at + "/opaque/" + std::to_string(k);
        if (!poly.is_array() || poly.size() < 3) fail(pat, "polygon needs >= 3 vertices");
        std::vector<Eigen::Vector2d> verts;
        for (std::size_t v = 0; v < poly.size(); ++v) {
          const json& pt = poly[v];
          if (!pt.is_array() || pt.size() != 2 || !pt[0].is_number() || !pt[1].is_number()) {
            fail(pat + "/" + std::to_string(v), "expected [x, y]");
          }
          verts.emplace_back(pt[0].get<double>(), pt[1].get<double>());
        }
        mask.opaque_polygons_mm.push_back(std::move(verts));
      }
      s.masks.push_back(mask);
    }
  }

  if (j.contains("receptors")) {
    for (std::size_t i = 0; i < array(j, "receptors", root).size(); ++i) {
      const json& r = j["receptors"][i];
      const std::string at = "/receptors/" + std::to_string(i);
      ReceptorSpec spec;
      spec.pair.id = integer_or(r, "id", at, static_cast<int>(i) + 1);
      const std::string site = str_or(r, "site", at, "thorax");
      if (site == "thorax") {
        spec.pair.site = receptor::Site::thorax;
        spec.controller.site = control::Site::thorax;
      } else if (site == "wing") {
        spec.pair.site = receptor::Site::wing;
        spec.controller.site = control::Site::wing;
      } else {
        fail(at + "/site", "expected thorax|wing");
      }
      if (r.contains("location")) {
        const json& loc = r.at("location");
        if (!loc.is_array() || loc.size() != 2) fail(at + "/location", "expected [x, y]");
        spec.pair.location_mm = {loc[0].get<double>(), loc[1].get<double>()};
      }
      spec.pair.gap_um = num_or(r, "gap", at, 130.0);
      spec.pair.wire_diameter_um = num_or(r, "wire_diameter", at, 30.0);
      spec.region_zone = integer_or(r, "region_zone", at, -1);
      if (r.contains("region")) {
        for (const auto& cid : array(r, "region", at)) {
          spec.pair.region_cell_ids.push_back(cid.get<int>());
        }
      }
      if (r.contains("electrical")) {
        const json& e = r.at("electrical");
        const std::string eat = at + "/electrical";
        spec.electrical.r_py_ohm = num_or(e, "r_py", eat, 5e6);
        spec.electrical.r_ppy_ohm = num_or(e, "r_ppy", eat, 4e5);
        spec.electrical.c_py_f = num_or(e, "c_py", eat, 1e-9);
        spec.electrical.c_ppy_f = num_or(e, "c_ppy", eat, 1e-8);
        spec.electrical.beta = num_or(e, "beta", eat, 0.05);
        spec.electrical.noise_sigma_v = num_or(e, "noise_sigma_v", eat, 0.0);
      }
      if (r.contains("readout")) {
        const json& d = r.at("readout");
        const std::string dat = at + "/readout";
        spec.readout.divider_r_ohm = num_or(d, "divider_r", dat, 460e3);
        spec.readout.vcc_v = num_or(d, "vcc", dat, 4.2);
        spec.readout.n_avg = integer_or(d, "n_avg", dat, 8);
        if (spec.readout.divider_r_ohm <= 0.0) fail(dat + "/divider_r", "must be > 0");
        if (spec.readout.vcc_v <= 0.0) fail(dat + "/vcc", "must be > 0");
        if (spec.readout.n_avg <= 0) fail(dat + "/n_avg", "must be >= 1");
      }
      if (r.contains("controller")) {
        const json& c = r.at("controller");
        const std::string cat = at + "/controller";
        auto& cc = spec.controller;
        cc.tick_interval_s = num_or(c, "tick_interval", cat, 1.4);
        cc.pulse_ms = num_or(c, "pulse_ms", cat, 200.0);
        cc.buffer_span_s = num_or(c, "buffer_span", cat, 3.0);
        cc.rate_threshold_ohm = num_or(c, "rate_threshold", cat, 2000.0);
        cc.glitch_count = integer_or(c, "glitch_count", cat, 5);
        cc.reaction_duration_s = num_or(c, "reaction_duration", cat, 65.0);
        cc.flap_on_s = num_or(c, "flap_on", cat, 5.0);
        cc.flap_power_w = num_or(c, "flap_power", cat, 6.6);
        cc.flap_cooldown_s = num_or(c, "flap_cooldown", cat, 60.0);
      }
      s.receptors.push_back(spec);
    }
  }

  if (j.contains("synthesis")) {
    const json& y = j.at("synthesis");
    const std::string at = "/synthesis";
    s.synthesis.k_p = num_or(y, "k_p", at, s.synthesis.k_p);
    s.synthesis.i_syn = num_or(y, "i_syn", at, s.synthesis.i_syn);
    s.synthesis.t_inf = num_or(y, "t_inf", at, s.synthesis.t_inf);
    s.synthesis.alpha_p = num_or(y, "alpha_p", at, s.synthesis.alpha_p);
    s.synthesis.tau_p = num_or(y, "tau_p", at, s.synthesis.tau_p);
  }

  s.validate();
  return s;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

// ---------------------------------------------------------------------------
// Serialisation

std::string scenario_to_json(const Scenario& s) {
  json j;
  j["schema"] = s.schema;
  j["t_end"] = s.t_end_s;
  j["seed"] = s.seed;
  j["dt_fluid"] = s.dt_fluid_s;
  j["dt_chem"] = s.dt_chem_s;
  j["dt_electrical"] = s.dt_electrical_s;
  j["cells_per_side"] = s.cells_per_side;
  if (s.demo_network) {
    j["network"] = "demo";
  } else {
    json net;
    net["nodes"] = json::array();
    for (const auto& n : s.network.nodes) {
      const char* kind = n.kind == vasc::NodeKind::inlet
                             ? "inlet"
                             : (n.kind == vasc::NodeKind::junction ? "junction" : "terminal");
      net["nodes"].push_back(
          {{"id", n.id}, {"x", n.position_mm.x()}, {"y", n.position_mm.y()}, {"kind", kind}});
    }
    net["segments"] = json::array();
    for (const auto& seg : s.network.segments) {
      net["segments"].push_back({{"id", seg.id},
                                 {"from", seg.from},
                                 {"to", seg.to},
                                 {"length", seg.length_mm},
                                 {"width", seg.width_mm},
                                 {"height", seg.height_mm},
                                 {"filled_fraction", seg.filled_fraction}});
    }
    net["zones"] = json::array();
    for (const auto& z : s.network.zones) {
      net["zones"].push_back({{"id", z.id},
                              {"node", z.attached_node},
                              {"footprint_area", z.footprint_mm2},
                              {"layer_count", z.layer_count},
                              {"layer_height", z.layer_height_mm},
                              {"porosity", z.porosity},
                              {"saturation", z.saturation}});
    }
    j["network"] = net;
  }
  j["fluids"] = json::array();
  for (const auto& f : s.fluids) {
    j["fluids"].push_back({{"t_start", f.t_start},
                           {"viscosity", f.fluid.viscosity_pas},
                           {"surface_tension", f.fluid.surface_tension_npm},
                           {"contact_angle", f.fluid.contact_angle_deg},
                           {"precursor_concentration", f.fluid.precursor_concentration}});
  }
  j["pump"] = json::array();
  for (const auto& iv : s.pump.intervals()) {
    j["pump"].push_back({{"t_start", iv.t_start}, {"t_end", iv.t_end}, {"q", iv.q_m3s}});
  }
  j["sources"] = json::array();
  for (const auto& src : s.sources) {
    json u = {{"id", src.id},
              {"label", src.label},
              {"nominal_power", src.nominal_power_w},
              {"distance", src.distance_mm},
              {"calibrated_irradiance", src.calibrated_irradiance_wm2},
              {"wavelength", src.wavelength_nm}};
    u["schedule"] = json::array();
    for (const auto& [on, off] : src.schedule) u["schedule"].push_back({on, off});
    j["sources"].push_back(u);
  }
  j["masks"] = json::array();
  for (const auto& m : s.masks) {
    json poly_list = json::array();
    for (const auto& poly : m.opaque_polygons_mm) {
      json pl = json::array();
      for (const auto& v : poly) pl.push_back({v.x(), v.y()});
      poly_list.push_back(pl);
    }
    j["masks"].push_back({{"blur_sigma", m.blur_sigma_mm}, {"opaque", poly_list}});
  }
  j["receptors"] = json::array();
  for (const auto& r : s.receptors) {
    json rr = {{"id", r.pair.id},
               {"site", r.pair.site == receptor::Site::thorax ? "thorax" : "wing"},
               {"location", {r.pair.location_mm.x(), r.pair.location_mm.y()}},
               {"gap", r.pair.gap_um},
               {"wire_diameter", r.pair.wire_diameter_um},
               {"electrical",
                {{"r_py", r.electrical.r_py_ohm},
                 {"r_ppy", r.electrical.r_ppy_ohm},
                 {"c_py", r.electrical.c_py_f},
                 {"c_ppy", r.electrical.c_ppy_f},
                 {"beta", r.electrical.beta},
                 {"noise_sigma_v", r.electrical.noise_sigma_v}}},
               {"readout",
                {{"divider_r", r.readout.divider_r_ohm},
                 {"vcc", r.readout.vcc_v},
                 {"n_avg", r.readout.n_avg}}},
               {"controller",
                {{"tick_interval", r.controller.tick_interval_s},
                 {"pulse_ms", r.controller.pulse_ms},
                 {"buffer_span", r.controller.buffer_span_s},
                 {"rate_threshold", r.controller.rate_threshold_ohm},
                 {"glitch_count", r.controller.glitch_count},
                 {"reaction_duration", r.controller.reaction_duration_s},
                 {"flap_on", r.controller.flap_on_s},
                 {"flap_power", r.controller.flap_power_w},
                 {"flap_cooldown", r.controller.flap_cooldown_s}}}};
    if (r.region_zone >= 0) rr["region_zone"] = r.region_zone;
    if (!r.pair.region_cell_ids.empty()) rr["region"] = r.pair.region_cell_ids;
    j["receptors"].push_back(rr);
  }
  j["synthesis"] = {{"k_p", s.synthesis.k_p},
                    {"i_syn", s.synthesis.i_syn},
                    {"t_inf", s.synthesis.t_inf},
                    {"alpha_p", s.synthesis.alpha_p},
                    {"tau_p", s.synthesis.tau_p}};
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Built-in demonstration scenarios

Scenario make_fig4_scenario() {
  Scenario s;
  s.schema = 1;
  s.t_end_s = 300.0;
  s.seed = 1;
  s.demo_network = true;
  s.network = vasc::build_demo_network();
  s.cells_per_side = 5;

  TimedFluid precursor;
  precursor.t_start = 0.0;
  precursor.fluid.viscosity_pas = 2.4e-3;
  precursor.fluid.surface_tension_npm = 0.037;
  precursor.fluid.contact_angle_deg = 30.0;
  precursor.fluid.precursor_concentration = 1.0;
  s.fluids.push_back(precursor);

  s.pump = vasc::PumpSchedule({{0.0, 60.0, 5e-8}});  // 0.05 mL/s fills 3 mL in 60 s

  photo::UvSource synth;
  synth.id = 1;
  synth.label = "synthesis";
  synth.nominal_power_w = 1.6;
  synth.distance_mm = 43.0;
  synth.calibrated_irradiance_wm2 = 100.0;
  synth.schedule = {{90.0, 150.0}};
  s.sources.push_back(synth);

  photo::UvSource test;
  test.id = 2;
  test.label = "test";
  test.nominal_power_w = 0.9;
  test.distance_mm = 20.0;
  test.calibrated_irradiance_wm2 = 30.0;
  test.schedule = {{200.0, 260.0}};
  s.sources.push_back(test);

  // Contact mask opening a window over the thorax zone (even-odd: the inner
  // rectangle cuts a clear hole in the outer opaque sheet).
  photo::MaskPattern mask;
  mask.blur_sigma_mm = 0.3 / photo::kEdgeWidthPerSigma;
  mask.opaque_polygons_mm = {
      {{-250.0, -250.0}, {250.0, -250.0}, {250.0, 250.0}, {-250.0, 250.0}},
      {{-15.0, -15.0}, {15.0, -15.0}, {15.0, 15.0}, {-15.0, 15.0}},
  };
  s.masks.push_back(mask);

  ReceptorSpec thorax;
  thorax.pair.id = 1;
  thorax.pair.site = receptor::Site::thorax;
  thorax.pair.location_mm = {0.0, 0.0};
  thorax.region_zone = 1;
  thorax.controller.site = control::Site::thorax;
  s.receptors.push_back(thorax);

  ReceptorSpec wing;
  wing.pair.id = 2;
  wing.pair.site = receptor::Site::wing;
  wing.pair.location_mm = s.network.node(7).position_mm;
  wing.region_zone = 5;
  wing.controller.site = control::Site::wing;
  s.receptors.push_back(wing);

  s.synthesis = photo::SynthesisParams{};  // calibrated defaults
  return s;
}

Scenario make_fig4_no_synthesis_scenario() {
  Scenario s = make_fig4_scenario();
  s.sources.erase(s.sources.begin());  // drop the synthesis LED, keep the test LED
  return s;
}

}  // namespace receptosim::sim
