#include "rydholo/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace rydholo {

namespace {

struct IniEntry {
  std::string value;
  int line = 0;
  mutable bool used = false;
};

struct Ini {
  std::map<std::string, std::map<std::string, IniEntry>> sections;

  static Ini parse(const std::string& text) {
    Ini ini;
    std::istringstream is(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(is, line)) {
      ++lineno;
      size_t h = line.find('#');
      if (h != std::string::npos) line = line.substr(0, h);
      size_t a = line.find_first_not_of(" \t\r");
      if (a == std::string::npos) continue;
      size_t b = line.find_last_not_of(" \t\r");
      line = line.substr(a, b - a + 1);
      if (line.front() == '[') {
        if (line.back() != ']')
          throw ConfigError("line " + std::to_string(lineno) + ": unterminated section");
        section = line.substr(1, line.size() - 2);
        continue;
      }
      size_t eq = line.find('=');
      if (eq == std::string::npos)
        throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
      std::string key = line.substr(0, eq);
      std::string value = line.substr(eq + 1);
      auto trim = [](std::string s) {
        size_t x = s.find_first_not_of(" \t");
        size_t y = s.find_last_not_of(" \t");
        return x == std::string::npos ? std::string() : s.substr(x, y - x + 1);
      };
      key = trim(key);
      value = trim(value);
      if (key.empty() || value.empty())
        throw ConfigError("line " + std::to_string(lineno) + ": empty key or value");
      if (ini.sections[section].count(key))
        throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
      ini.sections[section][key] = IniEntry{value, lineno, false};
    }
    return ini;
  }

  const IniEntry* find(const std::string& section, const std::string& key) const {
    auto s = sections.find(section);
    if (s == sections.end()) return nullptr;
    auto k = s->second.find(key);
    if (k == s->second.end()) return nullptr;
    k->second.used = true;
    return &k->second;
  }

  double number(const std::string& section, const std::string& key, double def) const {
    const IniEntry* e = find(section, key);
    if (!e) return def;
    try {
      size_t pos = 0;
      double v = std::stod(e->value, &pos);
      if (pos != e->value.size()) throw std::invalid_argument("trailing");
      return v;
    } catch (...) {
      throw ConfigError("line " + std::to_string(e->line) + ": field '" + key +
                        "' is not a number");
    }
  }

  int integer(const std::string& section, const std::string& key, int def) const {
    double v = number(section, key, def);
    if (v != std::floor(v))
      throw ConfigError("field '" + key + "' must be an integer");
    return static_cast<int>(v);
  }

  bool boolean(const std::string& section, const std::string& key, bool def) const {
    const IniEntry* e = find(section, key);
    if (!e) return def;
    if (e->value == "true") return true;
    if (e->value == "false") return false;
    throw ConfigError("line " + std::to_string(e->line) + ": field '" + key +
                      "' must be true or false");
  }

  std::string text(const std::string& section, const std::string& key,
                   const std::string& def) const {
    const IniEntry* e = find(section, key);
    return e ? e->value : def;
  }

  void reject_unused() const {
    for (const auto& [sec, keys] : sections)
      for (const auto& [key, e] : keys)
        if (!e.used)
          throw ConfigError("line " + std::to_string(e.line) + ": unknown field '" + key +
                            "' in section [" + sec + "]");
  }
};

cxd parse_pair(const std::string& s, const std::string& field) {
  size_t comma = s.find(',');
  if (comma == std::string::npos)
    throw ConfigError("field '" + field + "' expects 're,im' or 'a,b'");
  try {
    return cxd(std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1)));
  } catch (...) {
    throw ConfigError("field '" + field + "' has non-numeric parts");
  }
}

}  // namespace

RunConfig RunConfig::from_text(const std::string& text) {
  Ini ini = Ini::parse(text);
  RunConfig cfg;

  bool x2pi = ini.boolean("system", "x2pi", true);
  double unit = (x2pi ? 2.0 * M_PI : 1.0) * 1e6;
  cfg.system.omega11_peak = ini.number("system", "omega11_mhz", 4.5) * unit;
  cfg.system.omega21_peak = ini.number("system", "omega21_mhz", 14.0) * unit;
  cfg.system.omega22_peak = ini.number("system", "omega22_mhz", 14.0) * unit;
  cfg.system.delta1 = ini.number("system", "delta1_mhz", 50.0) * unit;
  cfg.system.delta2 = ini.number("system", "delta2_mhz", 300.0) * unit;
  cfg.system.gamma_decay = ini.number("system", "gamma_khz", 2.4) * 1e3;
  cfg.system.stark_terms = ini.boolean("system", "stark_terms", true);
  double v_mhz = ini.number("system", "v_mhz", -1.0);
  cfg.system.V = 1.0;  // placeholder so validate() passes before resolution
  cfg.system.validate();
  cfg.v_solver = solve_antiblockade_V(cfg.system);
  if (v_mhz >= 0) {
    cfg.v_given = true;
    cfg.system.V = v_mhz * unit;
  } else {
    cfg.system.V = cfg.v_solver;
  }

  cfg.gate_name = ini.text("gate", "preset", "CNOT");
  if (ini.find("gate", "gamma") || ini.find("gate", "theta") || ini.find("gate", "phi")) {
    cfg.gate_name = "custom";
    cfg.gate.gamma = ini.number("gate", "gamma", M_PI);
    cfg.gate.theta = ini.number("gate", "theta", M_PI / 2);
    cfg.gate.phi = ini.number("gate", "phi", 0.0);
  } else {
    cfg.gate = gate_preset(cfg.gate_name).params;
  }
  double t_us = ini.number("gate", "T_us", -1.0);
  if (t_us > 0) {
    cfg.t_given = true;
    cfg.gate.T = t_us * 1e-6;
  }

  std::string frame = ini.text("simulation", "frame", "rotating");
  if (frame == "rotating") cfg.frame = Frame::rotating;
  else if (frame == "interaction") cfg.frame = Frame::interaction;
  else throw ConfigError("field 'frame' must be rotating or interaction");
  std::string dressed = ini.text("simulation", "dressed_endpoints", "auto");
  if (dressed == "auto") cfg.dressed_endpoints = !cfg.system.stark_terms;
  else if (dressed == "true") cfg.dressed_endpoints = true;
  else if (dressed == "false") cfg.dressed_endpoints = false;
  else throw ConfigError("field 'dressed_endpoints' must be auto, true or false");
  cfg.schedule_samples = ini.integer("simulation", "schedule_samples", 4000);
  cfg.rtol = ini.number("simulation", "rtol", 1e-10);
  cfg.atol = ini.number("simulation", "atol", 1e-12);
  cfg.quadrature_n = ini.integer("simulation", "quadrature_n", 16);
  cfg.trajectory_samples = ini.integer("simulation", "trajectory_samples", 201);

  cfg.eps_min = ini.number("sweep", "eps_min", -0.1);
  cfg.eps_max = ini.number("sweep", "eps_max", 0.1);
  cfg.eps_steps = ini.integer("sweep", "eps_steps", 11);
  cfg.gamma_min = ini.number("sweep", "gamma_min_khz", 0.2) * 1e3;
  cfg.gamma_max = ini.number("sweep", "gamma_max_khz", 5.0) * 1e3;
  cfg.gamma_steps = ini.integer("sweep", "gamma_steps", 9);
  cfg.scale_physical = ini.boolean("sweep", "scale_physical", false);
  cfg.sweep_quadrature_n = ini.integer("sweep", "quadrature_n", 16);

  cfg.chain_atoms = ini.integer("transfer", "n_atoms", 6);
  cfg.chain_omega = ini.number("transfer", "omega_mhz", 1.0) * unit;

  cfg.teleport_mode = ini.text("teleport", "mode", "ideal");
  if (cfg.teleport_mode != "ideal" && cfg.teleport_mode != "physical")
    throw ConfigError("field 'mode' must be ideal or physical");
  cfg.teleport_cu_name = ini.text("teleport", "cu", "CNOT");
  cfg.teleport_runs = ini.integer("teleport", "runs", 100);
  if (const auto* e = ini.find("teleport", "control")) {
    cxd pair = parse_pair(e->value, "control");
    double n = std::sqrt(std::norm(pair.real()) + std::norm(pair.imag()));
    if (n < 1e-12) throw ConfigError("field 'control' must be nonzero");
    cfg.control0 = pair.real() / n;
    cfg.control1 = pair.imag() / n;
  }
  if (const auto* e = ini.find("teleport", "target")) {
    cxd pair = parse_pair(e->value, "target");
    double n = std::sqrt(std::norm(pair.real()) + std::norm(pair.imag()));
    if (n < 1e-12) throw ConfigError("field 'target' must be nonzero");
    cfg.target0 = pair.real() / n;
    cfg.target1 = pair.imag() / n;
  }

  std::string formats = ini.text("output", "formats", "csv,json");
  cfg.output_formats.clear();
  std::istringstream fs(formats);
  std::string f;
  while (std::getline(fs, f, ',')) {
    if (f != "csv" && f != "json") throw ConfigError("unknown output format '" + f + "'");
    cfg.output_formats.push_back(f);
  }

  ini.reject_unused();

  if (!cfg.t_given) {
    cfg.gate.T = 1e-6;
    cfg.gate.T = min_feasible_T(cfg.gate, cfg.system, cfg.schedule_samples);
  }
  return cfg;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return from_text(ss.str());
}

ojson RunConfig::snapshot() const {
  ojson j;
  j["system"] = {{"omega11_rad_s", system.omega11_peak},
                 {"omega21_rad_s", system.omega21_peak},
                 {"omega22_rad_s", system.omega22_peak},
                 {"delta1_rad_s", system.delta1},
                 {"delta2_rad_s", system.delta2},
                 {"V_rad_s", system.V},
                 {"V_given", v_given},
                 {"V_solver_rad_s", v_solver},
                 {"gamma_1_s", system.gamma_decay},
                 {"stark_terms", system.stark_terms}};
  j["gate"] = {{"name", gate_name},
               {"gamma", gate.gamma},
               {"theta", gate.theta},
               {"phi", gate.phi},
               {"T_s", gate.T},
               {"T_given", t_given}};
  j["simulation"] = {{"frame", frame == Frame::rotating ? "rotating" : "interaction"},
                     {"dressed_endpoints", dressed_endpoints},
                     {"schedule_samples", schedule_samples},
                     {"rtol", rtol},
                     {"atol", atol},
                     {"quadrature_n", quadrature_n},
                     {"trajectory_samples", trajectory_samples}};
  return j;
}

GateModel make_gate_model(const RunConfig& cfg) {
  GateModel model(cfg.system, cfg.gate, cfg.schedule_samples);
  model.frame = cfg.frame;
  model.dressed_endpoints = cfg.dressed_endpoints;
  model.integ.rtol = cfg.rtol;
  model.integ.atol = cfg.atol;
  return model;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void CsvWriter::add_row(const std::vector<double>& row) {
  if (row.size() != columns_.size())
    throw std::invalid_argument("csv row width mismatch");
  std::vector<std::string> cells;
  cells.reserve(row.size());
  for (double v : row) cells.push_back(format_double(v));
  rows_.push_back(std::move(cells));
}

void CsvWriter::add_row_text(const std::vector<std::string>& row) {
  if (row.size() != columns_.size())
    throw std::invalid_argument("csv row width mismatch");
  rows_.push_back(row);
}

void CsvWriter::write(const std::string& path) const {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot open " + path);
  if (!provenance_.empty()) std::fprintf(f, "# config %s\n", provenance_.c_str());
  for (size_t i = 0; i < columns_.size(); ++i)
    std::fprintf(f, "%s%s", columns_[i].c_str(), i + 1 < columns_.size() ? "," : "\n");
  for (const auto& row : rows_) {
    for (size_t i = 0; i < row.size(); ++i)
      std::fprintf(f, "%s%s", row[i].c_str(), i + 1 < row.size() ? "," : "\n");
  }
  std::fclose(f);
}

void write_json(const ojson& j, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot open " + path);
  std::string s = j.dump(2);
  std::fwrite(s.data(), 1, s.size(), f);
  std::fputc('\n', f);
  std::fclose(f);
}

}  // namespace rydholo
