#include "lamsa/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <deque>
#include <fstream>
#include <functional>
#include <sstream>

#include "lamsa/sha256.hpp"
#include "lamsa/sim_error.hpp"

namespace lamsa {

namespace {

enum class FieldType { Real, Integer, Boolean, Seed };

struct FieldDesc {
  const char* section;
  const char* key;
  FieldType type;
  std::function<double(const ScenarioParams&)> get;
  std::function<void(ScenarioParams&, double)> set;
};

// Registry order defines the canonical serialization order.
const std::vector<FieldDesc>& registry() {
  static const std::vector<FieldDesc> fields = [] {
    std::vector<FieldDesc> f;
    auto real = [&f](const char* sec, const char* key, auto getter, auto setter) {
      f.push_back({sec, key, FieldType::Real,
                   [getter](const ScenarioParams& p) { return getter(p); },
                   [setter](ScenarioParams& p, double v) { setter(p, v); }});
    };
    auto integer = [&f](const char* sec, const char* key, auto getter, auto setter) {
      f.push_back({sec, key, FieldType::Integer,
                   [getter](const ScenarioParams& p) { return getter(p); },
                   [setter](ScenarioParams& p, double v) { setter(p, v); }});
    };
    auto boolean = [&f](const char* sec, const char* key, auto getter, auto setter) {
      f.push_back({sec, key, FieldType::Boolean,
                   [getter](const ScenarioParams& p) { return getter(p); },
                   [setter](ScenarioParams& p, double v) { setter(p, v); }});
    };

    real("geometry", "d1_mm", [](const ScenarioParams& p) { return p.geometry.d1_mm; },
         [](ScenarioParams& p, double v) { p.geometry.d1_mm = v; });
    real("geometry", "h_mm", [](const ScenarioParams& p) { return p.geometry.h_mm; },
         [](ScenarioParams& p, double v) { p.geometry.h_mm = v; });
    real("geometry", "crank_radius_mm",
         [](const ScenarioParams& p) { return p.geometry.crank_radius_mm; },
         [](ScenarioParams& p, double v) { p.geometry.crank_radius_mm = v; });
    real("geometry", "rod_length_mm",
         [](const ScenarioParams& p) { return p.geometry.rod_length_mm; },
         [](ScenarioParams& p, double v) { p.geometry.rod_length_mm = v; });
    real("geometry", "latch_fraction",
         [](const ScenarioParams& p) { return p.geometry.latch_fraction; },
         [](ScenarioParams& p, double v) { p.geometry.latch_fraction = v; });
    boolean("geometry", "limited_block",
            [](const ScenarioParams& p) { return p.geometry.limited_block ? 1.0 : 0.0; },
            [](ScenarioParams& p, double v) { p.geometry.limited_block = v != 0.0; });

    real("beam", "length_mm", [](const ScenarioParams& p) { return p.beam.length_mm; },
         [](ScenarioParams& p, double v) { p.beam.length_mm = v; });
    real("beam", "thickness_mm", [](const ScenarioParams& p) { return p.beam.thickness_mm; },
         [](ScenarioParams& p, double v) { p.beam.thickness_mm = v; });
    real("beam", "width_mm", [](const ScenarioParams& p) { return p.beam.width_mm; },
         [](ScenarioParams& p, double v) { p.beam.width_mm = v; });
    real("beam", "e_mod_mpa", [](const ScenarioParams& p) { return p.beam.e_mod_mpa; },
         [](ScenarioParams& p, double v) { p.beam.e_mod_mpa = v; });
    real("beam", "stiffness_scale",
         [](const ScenarioParams& p) { return p.beam.stiffness_scale; },
         [](ScenarioParams& p, double v) { p.beam.stiffness_scale = v; });
    real("beam", "torsion_gain_per_rad2",
         [](const ScenarioParams& p) { return p.beam.torsion_gain; },
         [](ScenarioParams& p, double v) { p.beam.torsion_gain = v; });
    real("beam", "torsion_kill_per_rad2",
         [](const ScenarioParams& p) { return p.beam.torsion_kill; },
         [](ScenarioParams& p, double v) { p.beam.torsion_kill = v; });
    real("beam", "critical_compression_ratio",
         [](const ScenarioParams& p) { return p.beam.critical_compression_ratio; },
         [](ScenarioParams& p, double v) { p.beam.critical_compression_ratio = v; });

    real("connector", "stiffness_nmm_per_rad",
         [](const ScenarioParams& p) { return p.connector.stiffness_nmm_per_rad; },
         [](ScenarioParams& p, double v) { p.connector.stiffness_nmm_per_rad = v; });
    real("connector", "damping_nmm_s_per_rad",
         [](const ScenarioParams& p) { return p.connector.damping_nmm_s_per_rad; },
         [](ScenarioParams& p, double v) { p.connector.damping_nmm_s_per_rad = v; });
    real("connector", "lever_mm",
         [](const ScenarioParams& p) { return p.connector.lever_mm; },
         [](ScenarioParams& p, double v) { p.connector.lever_mm = v; });

    real("drive", "rpm", [](const ScenarioParams& p) { return p.drive.rpm; },
         [](ScenarioParams& p, double v) { p.drive.rpm = v; });
    real("drive", "speed_scale", [](const ScenarioParams& p) { return p.drive.speed_scale; },
         [](ScenarioParams& p, double v) { p.drive.speed_scale = v; });
    real("drive", "dt_s", [](const ScenarioParams& p) { return p.drive.dt_s; },
         [](ScenarioParams& p, double v) { p.drive.dt_s = v; });
    real("drive", "latch_stiffness_n_per_mm",
         [](const ScenarioParams& p) { return p.latch.stiffness_n_per_mm; },
         [](ScenarioParams& p, double v) { p.latch.stiffness_n_per_mm = v; });
    real("drive", "snap_target_fraction",
         [](const ScenarioParams& p) { return p.latch.snap_target_fraction; },
         [](ScenarioParams& p, double v) { p.latch.snap_target_fraction = v; });
    real("drive", "block_zone_fraction",
         [](const ScenarioParams& p) { return p.block.zone_fraction; },
         [](ScenarioParams& p, double v) { p.block.zone_fraction = v; });
    real("drive", "block_stiffness_n_per_mm",
         [](const ScenarioParams& p) { return p.block.stiffness_n_per_mm; },
         [](ScenarioParams& p, double v) { p.block.stiffness_n_per_mm = v; });
    real("drive", "beam_modal_mass_g",
         [](const ScenarioParams& p) { return p.beam_dyn.modal_mass_g; },
         [](ScenarioParams& p, double v) { p.beam_dyn.modal_mass_g = v; });
    real("drive", "beam_damping_n_s_per_mm",
         [](const ScenarioParams& p) { return p.beam_dyn.damping_n_s_per_mm; },
         [](ScenarioParams& p, double v) { p.beam_dyn.damping_n_s_per_mm = v; });

    real("fin", "area_mm2", [](const ScenarioParams& p) { return p.fin.area_mm2; },
         [](ScenarioParams& p, double v) { p.fin.area_mm2 = v; });
    real("fin", "aspect_ratio", [](const ScenarioParams& p) { return p.fin_aspect_ratio; },
         [](ScenarioParams& p, double v) { p.fin_aspect_ratio = v; });
    real("fin", "taper", [](const ScenarioParams& p) { return p.fin_taper; },
         [](ScenarioParams& p, double v) { p.fin_taper = v; });
    real("fin", "c_n", [](const ScenarioParams& p) { return p.fin.c_n; },
         [](ScenarioParams& p, double v) { p.fin.c_n = v; });
    real("fin", "c_a", [](const ScenarioParams& p) { return p.fin.c_a; },
         [](ScenarioParams& p, double v) { p.fin.c_a = v; });
    real("fin", "areal_density_g_mm2",
         [](const ScenarioParams& p) { return p.fin.areal_density_g_mm2; },
         [](ScenarioParams& p, double v) { p.fin.areal_density_g_mm2 = v; });
    real("fin", "servo_torsion_gain",
         [](const ScenarioParams& p) { return p.servo_torsion_gain; },
         [](ScenarioParams& p, double v) { p.servo_torsion_gain = v; });

    real("fluid", "rho_kg_m3", [](const ScenarioParams& p) { return p.fluid.rho_kg_m3; },
         [](ScenarioParams& p, double v) { p.fluid.rho_kg_m3 = v; });
    real("fluid", "g_m_s2", [](const ScenarioParams& p) { return p.fluid.g_m_s2; },
         [](ScenarioParams& p, double v) { p.fluid.g_m_s2 = v; });

    real("body", "mass_g", [](const ScenarioParams& p) { return p.body.mass_g; },
         [](ScenarioParams& p, double v) { p.body.mass_g = v; });
    real("body", "drag_cd", [](const ScenarioParams& p) { return p.body.drag_cd; },
         [](ScenarioParams& p, double v) { p.body.drag_cd = v; });
    real("body", "ref_area_mm2", [](const ScenarioParams& p) { return p.body.ref_area_mm2; },
         [](ScenarioParams& p, double v) { p.body.ref_area_mm2 = v; });
    real("body", "buoyancy_offset_n",
         [](const ScenarioParams& p) { return p.body.buoyancy_offset_n; },
         [](ScenarioParams& p, double v) { p.body.buoyancy_offset_n = v; });
    real("body", "yaw_inertia_g_mm2",
         [](const ScenarioParams& p) { return p.body.yaw_inertia_g_mm2; },
         [](ScenarioParams& p, double v) { p.body.yaw_inertia_g_mm2 = v; });
    real("body", "yaw_drag_nmm_s2",
         [](const ScenarioParams& p) { return p.body.yaw_drag_nmm_s2; },
         [](ScenarioParams& p, double v) { p.body.yaw_drag_nmm_s2 = v; });
    real("body", "pitch_inertia_g_mm2",
         [](const ScenarioParams& p) { return p.body.pitch_inertia_g_mm2; },
         [](ScenarioParams& p, double v) { p.body.pitch_inertia_g_mm2 = v; });
    real("body", "pitch_drag_nmm_s2",
         [](const ScenarioParams& p) { return p.body.pitch_drag_nmm_s2; },
         [](ScenarioParams& p, double v) { p.body.pitch_drag_nmm_s2 = v; });
    real("body", "mount_radius_mm",
         [](const ScenarioParams& p) { return p.body.mount_radius_mm; },
         [](ScenarioParams& p, double v) { p.body.mount_radius_mm = v; });

    integer("sim", "cycles", [](const ScenarioParams& p) { return double(p.sim.cycles); },
            [](ScenarioParams& p, double v) { p.sim.cycles = int(v); });
    real("sim", "output_dt_s", [](const ScenarioParams& p) { return p.sim.output_dt_s; },
         [](ScenarioParams& p, double v) { p.sim.output_dt_s = v; });

    static std::deque<std::string> generated_keys;  // stable c_str storage
    auto target = [&](const char* key_value, TargetSpec CalibrationTargets::* member) {
      const std::string base(key_value);
      // value key carries the unit suffix; weight/tol are dimensionless
      f.push_back({"calibration_targets", key_value, FieldType::Real,
                   [member](const ScenarioParams& p) { return (p.targets.*member).value; },
                   [member](ScenarioParams& p, double v) { (p.targets.*member).value = v; }});
      generated_keys.push_back(base + "_weight");
      f.push_back({"calibration_targets", generated_keys.back().c_str(), FieldType::Real,
                   [member](const ScenarioParams& p) { return (p.targets.*member).weight; },
                   [member](ScenarioParams& p, double v) { (p.targets.*member).weight = v; }});
      generated_keys.push_back(base + "_tol");
      f.push_back({"calibration_targets", generated_keys.back().c_str(), FieldType::Real,
                   [member](const ScenarioParams& p) { return (p.targets.*member).tol; },
                   [member](ScenarioParams& p, double v) { (p.targets.*member).tol = v; }});
    };
    target("peak_thrust_n", &CalibrationTargets::peak_thrust_n);
    target("impulse_ns", &CalibrationTargets::impulse_ns);
    target("rise_mm", &CalibrationTargets::rise_mm);
    target("dip_mm", &CalibrationTargets::dip_mm);
    target("net_rise_mm", &CalibrationTargets::net_rise_mm);
    target("load_release_ratio", &CalibrationTargets::load_release_ratio);
    target("optimum_area_mm2", &CalibrationTargets::optimum_area_mm2);

    f.push_back({"seed", "value", FieldType::Seed,
                 [](const ScenarioParams& p) { return double(p.seed); },
                 [](ScenarioParams& p, double v) { p.seed = std::uint64_t(v); }});
    return f;
  }();
  return fields;
}

std::string trim(std::string s) {
  const auto issp = [](unsigned char c) { return std::isspace(c); };
  while (!s.empty() && issp(s.front())) s.erase(s.begin());
  while (!s.empty() && issp(s.back())) s.pop_back();
  return s;
}

std::string format_value(const FieldDesc& fd, double v) {
  char buf[40];
  switch (fd.type) {
    case FieldType::Boolean:
      return v != 0.0 ? "true" : "false";
    case FieldType::Integer:
    case FieldType::Seed:
      std::snprintf(buf, sizeof buf, "%.0f", v);
      return buf;
    case FieldType::Real:
      std::snprintf(buf, sizeof buf, "%.17g", v);
      return buf;
  }
  return {};
}

double parse_value(const FieldDesc& fd, const std::string& text, int line_no) {
  if (fd.type == FieldType::Boolean) {
    if (text == "true" || text == "1") return 1.0;
    if (text == "false" || text == "0") return 0.0;
    throw ConfigError("expected true/false for key '" + std::string(fd.key) + "'", line_no);
  }
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last)
    throw ConfigError("cannot parse numeric value '" + text + "'", line_no);
  if (fd.type == FieldType::Integer || fd.type == FieldType::Seed) {
    if (v != std::floor(v) || v < 0.0)
      throw ConfigError("expected a non-negative integer for key '" +
                            std::string(fd.key) + "'",
                        line_no);
  }
  return v;
}

// Suffix-aware unknown-key diagnosis: typing `length = 40` where `length_mm`
// is expected gets a targeted message rather than a generic unknown-key one.
std::string unknown_key_message(const std::string& section, const std::string& key) {
  for (const auto& fd : registry()) {
    if (section != fd.section) continue;
    const std::string known(fd.key);
    const auto underscore = known.rfind('_');
    if (underscore != std::string::npos && known.substr(0, underscore) == key)
      return "key '" + key + "' is missing its unit suffix; did you mean '" + known + "'?";
    if (key.rfind(known + "_", 0) == 0)
      return "key '" + key + "' has an unexpected unit suffix; did you mean '" + known + "'?";
  }
  return "unknown key '" + key + "' in section [" + section + "]";
}

}  // namespace

ScenarioParams default_params() {
  ScenarioParams p;
  p.fin = make_fin(p.fin.area_mm2, p.fin_aspect_ratio, p.fin_taper, p.fin.c_n, p.fin.c_a);
  return p;
}

ScenarioConfig parse_config_text(const std::string& text) {
  ScenarioParams params = default_params();
  std::istringstream in(text);
  std::string line, section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto comment = line.find_first_of("#;");
    if (comment != std::string::npos) line.erase(comment);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("malformed section header", line_no);
      section = trim(line.substr(1, line.size() - 2));
      bool known = false;
      for (const auto& fd : registry()) known = known || section == fd.section;
      if (!known) throw ConfigError("unknown section [" + section + "]", line_no);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line_no);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty()) throw ConfigError("key outside any section", line_no);

    const FieldDesc* match = nullptr;
    for (const auto& fd : registry()) {
      if (section == fd.section && key == fd.key) {
        match = &fd;
        break;
      }
    }
    if (!match) throw ConfigError(unknown_key_message(section, key), line_no);
    match->set(params, parse_value(*match, value, line_no));
  }

  // Rebuild derived fin shape from (area, aspect, taper) and check everything.
  try {
    const double density = params.fin.areal_density_g_mm2;
    const double beta = params.fin.deflection_beta_deg;
    params.fin = make_fin(params.fin.area_mm2, params.fin_aspect_ratio, params.fin_taper,
                          params.fin.c_n, params.fin.c_a, beta);
    params.fin.areal_density_g_mm2 = density;
    params.validate();
  } catch (const DomainError& e) {
    throw ConfigError(std::string("invariant violation: ") + e.what());
  }
  return {params, config_hash(params)};
}

ScenarioConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::string serialize_config(const ScenarioParams& params) {
  std::ostringstream out;
  std::string current;
  for (const auto& fd : registry()) {
    if (current != fd.section) {
      if (!current.empty()) out << "\n";
      current = fd.section;
      out << "[" << current << "]\n";
    }
    out << fd.key << " = " << format_value(fd, fd.get(params)) << "\n";
  }
  return out.str();
}

std::string config_hash(const ScenarioParams& params) {
  return sha256_hex(serialize_config(params));
}

}  // namespace lamsa
