#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace gravsim::cli {

inline constexpr const char* kVersion = "0.1.0";

// Raw flag values as parsed; nullopt / empty string means "not given".
// Precedence everywhere: flag > config file > built-in default.
struct CommonArgs {
  std::string config_path;
  std::string convention;
  bool exact = false;
  std::optional<std::uint64_t> shots;
  std::optional<std::uint64_t> seed;
  std::string noise;
  bool damping = false;
  bool decomposed = false;
};

struct PhasesArgs {
  std::string config_path;
  std::string convention;
};

struct RunArgs {
  CommonArgs common;
  std::optional<double> a;
  std::optional<double> b;
  std::string output;  // empty = stdout, no manifest
};

struct SweepArgs {
  CommonArgs common;
  double s_from = 0;
  double s_to = 0;
  double step = 0;
  bool physical = false;  // force the tau column even without a config file
  std::string output;
  std::string svg;
};

struct IntervalArgs {
  CommonArgs common;
  double s_from = 0;
  double s_to = 0;
  double grid = 0;
  double tol = 0;
  std::string report;  // "" or "tau"
  std::string output;  // empty = stdout, no manifest
};

struct QasmArgs {
  std::string config_path;
  std::string convention;
  std::string setting;  // "xz" or "yy"
  std::optional<double> a;
  std::optional<double> b;
  std::string output;
};

int exec_phases(const PhasesArgs& args);
int exec_run(const RunArgs& args);
int exec_sweep(const SweepArgs& args);
int exec_interval(const IntervalArgs& args);
int exec_qasm(const QasmArgs& args);
int exec_rerun(const std::string& manifest_path);

}  // namespace gravsim::cli
