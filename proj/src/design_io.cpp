#include "dmcs/design_io.hpp"

#include "json.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace dmcs {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw io_error(where + ": " + what);
}

const json& require_key(const json& obj, const std::string& path,
                        const char* key) {
  if (!obj.is_object()) fail(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(path + "." + key, "missing");
  return *it;
}

double as_number(const json& value, const std::string& path) {
  if (!value.is_number()) fail(path, "expected a number");
  return value.get<double>();
}

double number_at(const json& obj, const std::string& path, const char* key) {
  return as_number(require_key(obj, path, key), path + "." + key);
}

double number_or(const json& obj, const std::string& path, const char* key,
                 double fallback) {
  if (!obj.is_object()) fail(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  return as_number(*it, path + "." + key);
}

Design design_from(const json& node, const std::string& path) {
  Design d;
  if (!node.is_object()) fail(path, "expected an object");
  if (auto it = node.find("name"); it != node.end()) {
    if (!it->is_string()) fail(path + ".name", "expected a string");
    d.name = it->get<std::string>();
  }
  d.work_temperature_c =
      number_or(node, path, "work_temperature_c", d.work_temperature_c);
  const json& segs = require_key(node, path, "segments");
  if (!segs.is_array() || segs.empty())
    fail(path + ".segments", "expected a non-empty array");
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const std::string spath = path + ".segments[" + std::to_string(i) + "]";
    const json& s = segs[i];
    Segment seg;
    seg.omega = number_at(s, spath, "omega_rad_per_m");
    seg.delta_k = number_at(s, spath, "delta_k_rad_per_m");
    seg.length = number_at(s, spath, "length_m");
    d.segments.push_back(seg);
  }
  if (auto it = node.find("metadata"); it != node.end()) {
    if (!it->is_object()) fail(path + ".metadata", "expected an object");
    for (const auto& [k, v] : it->items()) {
      if (!v.is_string())
        fail(path + ".metadata." + k, "expected a string");
      d.metadata[k] = v.get<std::string>();
    }
  }
  return d;
}

SensitivityCoefficients sensitivity_from(const json& node,
                                         const std::string& path) {
  SensitivityCoefficients c;
  c.dk_dT = number_at(node, path, "dk_dT_rad_per_m_per_c");
  c.dk_dlambda = number_at(node, path, "dk_dlambda_rad_per_m_per_nm");
  c.dk_dtheta = number_at(node, path, "dk_dtheta_rad_per_m_per_deg");
  return c;
}

PumpPhysics pump_from(const json& node, const std::string& path) {
  PumpPhysics p;
  p.chi2 = number_at(node, path, "chi2_m_per_v");
  p.n_s = number_at(node, path, "n_s");
  p.n_i = number_at(node, path, "n_i");
  p.n_p = number_at(node, path, "n_p");
  p.omega_s = number_at(node, path, "omega_s_rad_per_s");
  p.omega_i = number_at(node, path, "omega_i_rad_per_s");
  p.omega_p = number_at(node, path, "omega_p_rad_per_s");
  p.pump_amplitude = number_at(node, path, "pump_amplitude");
  p.hbar = number_or(node, path, "hbar_j_s", p.hbar);
  p.c = number_or(node, path, "c_m_per_s", p.c);
  return p;
}

DesignConstraints constraints_from(const json& node, const std::string& path) {
  DesignConstraints c;
  c.efficiency_floor =
      number_or(node, path, "efficiency_floor", c.efficiency_floor);
  c.flatness_threshold =
      number_or(node, path, "flatness_threshold", c.flatness_threshold);
  c.window_half_width_c =
      number_or(node, path, "window_half_width_c", c.window_half_width_c);
  c.max_total_length =
      number_or(node, path, "max_total_length_m", c.max_total_length);
  if (node.is_object()) {
    if (auto it = node.find("min_domain_width_m"); it != node.end())
      c.min_domain_width = as_number(*it, path + ".min_domain_width_m");
    if (auto it = node.find("material_mismatch_rad_per_m"); it != node.end())
      c.material_mismatch =
          as_number(*it, path + ".material_mismatch_rad_per_m");
    if (auto it = node.find("flatness_points"); it != node.end()) {
      if (!it->is_number_integer())
        fail(path + ".flatness_points", "expected an integer");
      c.flatness_points = it->get<int>();
    }
  } else {
    fail(path, "expected an object");
  }
  return c;
}

json to_json(const Design& d) {
  json segs = json::array();
  for (const auto& s : d.segments) {
    segs.push_back(json{{"omega_rad_per_m", s.omega},
                        {"delta_k_rad_per_m", s.delta_k},
                        {"length_m", s.length}});
  }
  json node{{"name", d.name},
            {"work_temperature_c", d.work_temperature_c},
            {"segments", std::move(segs)}};
  if (!d.metadata.empty()) {
    json meta = json::object();
    for (const auto& [k, v] : d.metadata) meta[k] = v;
    node["metadata"] = std::move(meta);
  }
  return node;
}

json to_json(const SensitivityCoefficients& c) {
  return json{{"dk_dT_rad_per_m_per_c", c.dk_dT},
              {"dk_dlambda_rad_per_m_per_nm", c.dk_dlambda},
              {"dk_dtheta_rad_per_m_per_deg", c.dk_dtheta}};
}

json to_json(const PumpPhysics& p) {
  return json{{"chi2_m_per_v", p.chi2},
              {"n_s", p.n_s},
              {"n_i", p.n_i},
              {"n_p", p.n_p},
              {"omega_s_rad_per_s", p.omega_s},
              {"omega_i_rad_per_s", p.omega_i},
              {"omega_p_rad_per_s", p.omega_p},
              {"pump_amplitude", p.pump_amplitude},
              {"hbar_j_s", p.hbar},
              {"c_m_per_s", p.c}};
}

json to_json(const DesignConstraints& c) {
  json node{{"efficiency_floor", c.efficiency_floor},
            {"flatness_threshold", c.flatness_threshold},
            {"window_half_width_c", c.window_half_width_c},
            {"max_total_length_m", c.max_total_length},
            {"flatness_points", c.flatness_points}};
  if (c.min_domain_width) node["min_domain_width_m"] = *c.min_domain_width;
  if (c.material_mismatch)
    node["material_mismatch_rad_per_m"] = *c.material_mismatch;
  return node;
}

json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw io_error(std::string("JSON parse failure: ") + e.what());
  }
}

}  // namespace

DesignFile design_file_from_json(const std::string& text) {
  const json root = parse_text(text);
  if (!root.is_object()) fail("$", "expected a top-level object");

  const json& version = require_key(root, "$", "schema_version");
  if (!version.is_number_integer() || version.get<int>() != kSchemaVersion)
    fail("$.schema_version",
         "unsupported (expected " + std::to_string(kSchemaVersion) + ")");

  DesignFile file;
  file.design = design_from(require_key(root, "$", "design"), "$.design");
  if (auto it = root.find("sensitivity"); it != root.end())
    file.sensitivity = sensitivity_from(*it, "$.sensitivity");
  if (auto it = root.find("pump"); it != root.end())
    file.pump = pump_from(*it, "$.pump");
  if (auto it = root.find("constraints"); it != root.end())
    file.constraints = constraints_from(*it, "$.constraints");

  try {
    ensure_valid(file.design);
    if (file.pump) ensure_valid(*file.pump);
  } catch (const invalid_input& e) {
    fail("$.design", e.what());
  }
  return file;
}

DesignFile load_design_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw io_error("cannot read " + path);
  try {
    return design_file_from_json(buf.str());
  } catch (const io_error& e) {
    throw io_error(path + ": " + e.what());
  }
}

DesignConstraints constraints_from_json(const std::string& text) {
  return constraints_from(parse_text(text), "$");
}

DesignConstraints load_constraints_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw io_error("cannot read " + path);
  try {
    return constraints_from_json(buf.str());
  } catch (const io_error& e) {
    throw io_error(path + ": " + e.what());
  }
}

std::string to_canonical_json(const DesignFile& file) {
  json root{{"schema_version", kSchemaVersion},
            {"design", to_json(file.design)}};
  if (file.sensitivity) root["sensitivity"] = to_json(*file.sensitivity);
  if (file.pump) root["pump"] = to_json(*file.pump);
  if (file.constraints) root["constraints"] = to_json(*file.constraints);
  return root.dump(2) + "\n";
}

void save_design_file(const DesignFile& file, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open " + path + " for writing");
  out << to_canonical_json(file);
  out.flush();
  if (!out) throw io_error("cannot write " + path);
}

std::string format_sig12(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

}  // namespace dmcs
