#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rydholo/metrics.hpp"
#include "rydholo/nonlocal.hpp"

#include <nlohmann/json.hpp>

namespace rydholo {

using ojson = nlohmann::ordered_json;

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Parsed, fully defaulted run configuration. Frequencies are entered in MHz
/// (decay in kHz) with an explicit x2pi flag; everything is stored in rad/s
/// and 1/s internally.
struct RunConfig {
  SystemConfig system;
  bool v_given = false;
  double v_solver = 0;

  std::string gate_name = "CNOT";
  GateParams gate;
  bool t_given = false;

  Frame frame = Frame::rotating;
  bool dressed_endpoints = false;
  int schedule_samples = 4000;
  double rtol = 1e-10;
  double atol = 1e-12;
  int quadrature_n = 16;
  int trajectory_samples = 201;

  // sweep
  double eps_min = -0.1, eps_max = 0.1;
  int eps_steps = 11;
  double gamma_min = 2.0 * M_PI * 0;  // set from kHz inputs
  double gamma_max = 0;
  int gamma_steps = 9;
  bool scale_physical = false;
  int sweep_quadrature_n = 16;

  // transfer
  int chain_atoms = 6;
  double chain_omega = 0;

  // teleport
  std::string teleport_mode = "ideal";
  std::string teleport_cu_name = "CNOT";
  int teleport_runs = 100;
  cxd control0{1, 0}, control1{0, 0};
  cxd target0{1, 0}, target1{0, 0};

  std::vector<std::string> output_formats{"csv", "json"};

  ojson snapshot() const;  // resolved values, for provenance embedding

  static RunConfig load(const std::string& path);
  static RunConfig from_text(const std::string& text);
};

GateModel make_gate_model(const RunConfig& cfg);

/// CSV with '#'-prefixed provenance lines, then a header row; cells printed
/// with %.17g so identical runs are byte-identical.
class CsvWriter {
 public:
  CsvWriter(std::vector<std::string> columns) : columns_(std::move(columns)) {}
  void set_provenance(const ojson& snapshot) { provenance_ = snapshot.dump(); }
  void add_row(const std::vector<double>& row);
  void add_row_text(const std::vector<std::string>& row);
  void write(const std::string& path) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
  std::string provenance_;
};

void write_json(const ojson& j, const std::string& path);
std::string format_double(double v);

}  // namespace rydholo
