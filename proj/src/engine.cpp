#include "receptosim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>

#include <json.hpp>

#include "receptosim/errors.hpp"
#include "receptosim/photopolymerization.hpp"

namespace receptosim::sim {

namespace {

constexpr double kTimeEps = 1e-9;

std::string fmt6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

struct ReceptorRuntime {
  const ReceptorSpec* spec = nullptr;
  control::Controller controller;
  std::vector<std::size_t> region;  // cell indexes
  long next_tick = 1;

  explicit ReceptorRuntime(const ReceptorSpec& s) : spec(&s), controller(s.controller) {}
};

}  // namespace

RunOutput run_scenario(const Scenario& scenario) {
  scenario.validate();
  vasc::VascularNetwork net = scenario.network;  // run on a private copy
  RunOutput out;
  out.capacity_m3 = net.total_capacity_m3();

  // Sampling cells per zone, ids assigned sequentially in zone-id order.
  std::vector<infusion::MatrixCell> cells;
  std::vector<std::size_t> cell_zone_index;  // cell -> zone index in net.zones
  {
    std::vector<std::size_t> zone_order(net.zones.size());
    for (std::size_t i = 0; i < zone_order.size(); ++i) zone_order[i] = i;
    std::sort(zone_order.begin(), zone_order.end(), [&net](std::size_t a, std::size_t b) {
      return net.zones[a].id < net.zones[b].id;
    });
    int next_id = 1;
    for (const std::size_t zi : zone_order) {
      auto& zone = net.zones[zi];
      auto grid = infusion::make_cell_grid(zone.id, net.node(zone.attached_node).position_mm,
                                           zone.footprint_mm2, scenario.cells_per_side, next_id);
      next_id += static_cast<int>(grid.size());
      for (auto& c : grid) {
        zone.cell_ids.push_back(c.id);
        cell_zone_index.push_back(zi);
        cells.push_back(std::move(c));
      }
    }
  }

  // Static per-cell mask transmission (masks do not move).
  std::vector<double> mask_transmission_cache(cells.size(), 1.0);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    double trans = 1.0;
    for (const auto& m : scenario.masks) {
      trans *= photo::mask_transmission(m, cells[i].position_mm);
    }
    mask_transmission_cache[i] = trans;
  }

  // Receptor runtimes with resolved cell regions.
  std::map<int, std::size_t> cell_index_by_id;
  for (std::size_t i = 0; i < cells.size(); ++i) cell_index_by_id[cells[i].id] = i;
  std::vector<ReceptorRuntime> receptors;
  receptors.reserve(scenario.receptors.size());
  for (const auto& spec : scenario.receptors) {
    ReceptorRuntime rt(spec);
    if (!spec.pair.region_cell_ids.empty()) {
      for (const int cid : spec.pair.region_cell_ids) {
        auto it = cell_index_by_id.find(cid);
        if (it == cell_index_by_id.end()) {
          throw ConfigError("receptor " + std::to_string(spec.pair.id) +
                            " references unknown cell id " + std::to_string(cid));
        }
        rt.region.push_back(it->second);
      }
    } else {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (cells[i].zone_id == spec.region_zone) rt.region.push_back(i);
      }
      if (rt.region.empty()) {
        throw ConfigError("receptor " + std::to_string(spec.pair.id) +
                          " region_zone has no cells");
      }
    }
    receptors.push_back(std::move(rt));
    ReceptorTrace trace;
    trace.receptor_id = spec.pair.id;
    trace.site = spec.pair.site == receptor::Site::thorax ? "thorax" : "wing";
    out.receptors.push_back(std::move(trace));
  }

  std::mt19937_64 rng(scenario.seed);
  std::normal_distribution<double> unit_normal(0.0, 1.0);

  const long n_chem = std::lround(std::floor(scenario.t_end_s / scenario.dt_chem_s + kTimeEps));
  const long fluid_stride = std::lround(scenario.dt_fluid_s / scenario.dt_chem_s);
  bool capacity_left = true;

  for (long i = 0; i < n_chem; ++i) {
    const double t0 = static_cast<double>(i) * scenario.dt_chem_s;
    const double t1 = static_cast<double>(i + 1) * scenario.dt_chem_s;
    const vasc::FluidSpec& fluid = scenario.fluid_at(t0);

    // fluid transport
    if (i % fluid_stride == 0 && capacity_left) {
      const auto adv = vasc::advance_fill(net, fluid, scenario.pump, t0, scenario.dt_fluid_s);
      out.delivered_m3 += adv.delivered_m3;
      capacity_left = adv.any_capacity_left;
      const double t_fluid = t0 + scenario.dt_fluid_s;
      out.fill.push_back({t_fluid, vasc::total_filled_volume(net), out.delivered_m3});
      if (out.fill_complete_t < 0.0 &&
          vasc::total_filled_volume(net) >= 0.999 * out.capacity_m3) {
        out.fill_complete_t = t_fluid;
      }
    }

    // infusion, chemistry, polaron relaxation (irradiance held over the step)
    const bool carries_precursor = fluid.precursor_concentration > 0.0;
    double active_irradiance = 0.0;
    for (const auto& src : scenario.sources) {
      if (src.active_at(t0)) active_irradiance += src.calibrated_irradiance_wm2;
    }
    double sum_x = 0.0, max_x = 0.0, sum_p = 0.0;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      auto& cell = cells[c];
      const bool wetted = carries_precursor && net.zones[cell_zone_index[c]].saturation > 0.0;
      infusion::advance_infusion(cell, wetted, scenario.dt_chem_s);
      const double irradiance = active_irradiance * mask_transmission_cache[c];
      photo::advance_conversion(cell, irradiance, scenario.synthesis, scenario.dt_chem_s);
      cell.polaron_density = receptor::polaron_step(cell.polaron_density, irradiance,
                                                    scenario.synthesis, cell.conversion,
                                                    scenario.dt_chem_s);
      sum_x += cell.conversion;
      max_x = std::max(max_x, cell.conversion);
      sum_p += cell.polaron_density;
    }
    if (!cells.empty()) {
      out.chem.push_back({t1, sum_x / cells.size(), max_x, sum_p / cells.size()});
      if (out.synthesis_onset_t < 0.0 && max_x > 1e-3) out.synthesis_onset_t = t1;
    }

    // readout + controller on each receptor whose tick lands on this step
    for (std::size_t r = 0; r < receptors.size(); ++r) {
      auto& rt = receptors[r];
      auto& trace = out.receptors[r];
      const double mean_x = [&] {
        double s = 0.0;
        for (const std::size_t c : rt.region) s += cells[c].conversion;
        return s / rt.region.size();
      }();
      trace.transmittance.push_back({t1, photo::transmittance_580(mean_x, scenario.synthesis)});

      const double tick_t = static_cast<double>(rt.next_tick) * rt.spec->controller.tick_interval_s;
      if (std::abs(t1 - tick_t) > kTimeEps) continue;
      ++rt.next_tick;

      double mean_p = 0.0;
      for (const std::size_t c : rt.region) mean_p += cells[c].polaron_density;
      mean_p /= rt.region.size();

      const double r_eff = receptor::effective_resistance(rt.spec->electrical, mean_x, mean_p);
      const double c_eff = receptor::effective_capacitance(rt.spec->electrical, mean_x);
      double noise_plus = 0.0, noise_minus = 0.0;
      if (rt.spec->electrical.noise_sigma_v > 0.0) {
        noise_plus = rt.spec->electrical.noise_sigma_v * unit_normal(rng);
        noise_minus = rt.spec->electrical.noise_sigma_v * unit_normal(rng);
      }
      receptor::PulseReadoutConfig readout_cfg = rt.spec->readout;
      readout_cfg.pulse_ms = rt.spec->controller.pulse_ms;
      const auto [pos, neg] = receptor::pulse_readout(r_eff, c_eff, readout_cfg, tick_t,
                                                      noise_plus, noise_minus);
      const auto est_pos = receptor::estimate_impedance(pos.code, readout_cfg.divider_r_ohm);
      const auto est_neg = receptor::estimate_impedance(neg.code, readout_cfg.divider_r_ohm);
      trace.impedance.push_back({pos.t, pos.polarity, pos.code, est_pos.ohms});
      trace.impedance.push_back({neg.t, neg.polarity, neg.code, est_neg.ohms});
      trace.peis.push_back({tick_t, receptor::peis_reference_magnitude(r_eff, c_eff)});

      const auto result = rt.controller.tick(est_pos.ohms, tick_t);
      if (result.classification == control::Classification::decrease &&
          trace.first_decrease_t < 0.0) {
        trace.first_decrease_t = tick_t;
      }
      for (int e = 0; e < result.count; ++e) {
        const auto& ev = result.events[e];
        trace.events.push_back(ev);
        if (!ev.is_flap && ev.color == control::LedColor::red &&
            ev.pattern == control::LedPattern::blink4 && trace.first_red_blink_t < 0.0) {
          trace.first_red_blink_t = ev.t;
        }
        if (ev.is_flap && ev.flap_active && trace.first_flap_t < 0.0) trace.first_flap_t = ev.t;
        if (ev.pattern == control::LedPattern::rapid10) ++trace.reaction_count;
      }
    }
  }

  for (auto& trace : out.receptors) {
    std::stable_sort(trace.events.begin(), trace.events.end(),
                     [](const control::OutputEvent& a, const control::OutputEvent& b) {
                       return a.t < b.t;
                     });
  }
  out.final_cells = std::move(cells);
  return out;
}

// ---------------------------------------------------------------------------
// Flat-file output

std::map<std::string, std::string> render_run_output(const Scenario& scenario,
                                                     const RunOutput& out) {
  std::map<std::string, std::string> files;
  {
    std::string s = "t,filled_m3,delivered_m3\n";
    for (const auto& row : out.fill) {
      s += fmt6(row.t) + ',' + fmt6(row.filled_m3) + ',' + fmt6(row.delivered_m3) + '\n';
    }
    files["fill.csv"] = std::move(s);
  }
  {
    std::string s = "t,mean_conversion,max_conversion,mean_polaron\n";
    for (const auto& row : out.chem) {
      s += fmt6(row.t) + ',' + fmt6(row.mean_conversion) + ',' + fmt6(row.max_conversion) + ',' +
           fmt6(row.mean_polaron) + '\n';
    }
    files["chem.csv"] = std::move(s);
  }
  {
    std::string s = "cell_id,depth_um,precursor,conversion,polaron\n";
    for (const auto& c : out.final_cells) {
      s += std::to_string(c.id) + ',' + fmt6(c.infusion_depth_um()) + ',' +
           (c.precursor_present ? "1" : "0") + ',' + fmt6(c.conversion) + ',' +
           fmt6(c.polaron_density) + '\n';
    }
    files["cells.csv"] = std::move(s);
  }
  for (const auto& trace : out.receptors) {
    const std::string rid = std::to_string(trace.receptor_id);
    {
      std::string s = "t,transmittance\n";
      for (const auto& row : trace.transmittance) {
        s += fmt6(row.t) + ',' + fmt6(row.transmittance) + '\n';
      }
      files["transmittance_" + rid + ".csv"] = std::move(s);
    }
    {
      std::string s = "t,polarity,code,z_ohm\n";
      for (const auto& row : trace.impedance) {
        s += fmt6(row.t) + ',' + row.polarity + ',' + std::to_string(row.code) + ',' +
             fmt6(row.z_ohm) + '\n';
      }
      files["impedance_" + rid + ".csv"] = std::move(s);
    }
    {
      std::string s = "t,z_mag_ohm\n";
      for (const auto& row : trace.peis) {
        s += fmt6(row.t) + ',' + fmt6(row.z_mag_ohm) + '\n';
      }
      files["peis_" + rid + ".csv"] = std::move(s);
    }
    {
      std::string s;
      for (const auto& ev : trace.events) s += control::format_event(ev) + '\n';
      files["events_" + rid + ".log"] = std::move(s);
    }
  }
  {
    nlohmann::json summary;
    summary["fill_complete_t"] = out.fill_complete_t;
    summary["synthesis_onset_t"] = out.synthesis_onset_t;
    summary["delivered_m3"] = out.delivered_m3;
    summary["capacity_m3"] = out.capacity_m3;
    summary["t_end"] = scenario.t_end_s;
    summary["receptors"] = nlohmann::json::array();
    for (const auto& trace : out.receptors) {
      summary["receptors"].push_back({{"id", trace.receptor_id},
                                      {"site", trace.site},
                                      {"first_decrease_t", trace.first_decrease_t},
                                      {"first_red_blink_t", trace.first_red_blink_t},
                                      {"first_flap_t", trace.first_flap_t},
                                      {"reaction_count", trace.reaction_count},
                                      {"event_count", trace.events.size()}});
    }
    files["summary.json"] = summary.dump(2) + '\n';
  }
  return files;
}

void write_run_output(const std::string& dir, const Scenario& scenario, const RunOutput& out) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  for (const auto& [name, content] : render_run_output(scenario, out)) {
    std::ofstream f(fs::path(dir) / name, std::ios::binary);
    if (!f) throw NumericalError("cannot write output file " + name);
    f << content;
  }
}

}  // namespace receptosim::sim
