#include <iostream>
#include <numbers>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"
#include "gravsim/errors.hpp"

namespace cli = gravsim::cli;

namespace {

void add_common(CLI::App* sub, cli::CommonArgs& c) {
  sub->add_option("--config", c.config_path, "key=value config file");
  sub->add_option("--convention", c.convention, "signed-physical | magnitudes | single-branch");
  sub->add_flag("--exact", c.exact, "exact expectations (the default)");
  sub->add_option("--shots", c.shots, "sample this many shots per basis setting");
  sub->add_option("--seed", c.seed, "base RNG seed (default 0)");
  sub->add_option("--noise", c.noise, "off | builtin | calibration csv path");
  sub->add_flag("--damping", c.damping, "add T1/T2 damping after each gate (needs --noise)");
  sub->add_flag("--decomposed", c.decomposed, "use the gate-decomposed phase block");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"entanglement-witness simulator for a gravitationally coupled mass pair"};
  app.set_version_flag("--version", std::string("gravsim ") + cli::kVersion);
  app.require_subcommand(1);

  cli::PhasesArgs phases_args;
  CLI::App* phases = app.add_subcommand("phases", "print the accumulated phases as JSON");
  phases->add_option("--config", phases_args.config_path, "key=value config file");
  phases->add_option("--convention", phases_args.convention,
                     "signed-physical | magnitudes | single-branch");

  cli::RunArgs run_args;
  CLI::App* run = app.add_subcommand("run", "estimate the witness once and print JSON");
  add_common(run, run_args.common);
  run->add_option("--a", run_args.a, "branch phase a (rad); overrides the configured geometry");
  run->add_option("--b", run_args.b, "branch phase b (rad); overrides the configured geometry");
  run->add_option("-o,--output", run_args.output, "write the JSON here plus a .manifest.json");

  cli::SweepArgs sweep_args;
  CLI::App* sweep = app.add_subcommand("sweep", "sweep the phase sum and write a CSV");
  add_common(sweep, sweep_args.common);
  sweep->add_option("--s-from", sweep_args.s_from, "sweep start (rad)")->required();
  sweep->add_option("--s-to", sweep_args.s_to, "sweep end (rad)")->required();
  sweep->add_option("--step", sweep_args.step, "grid step (rad)")->required();
  sweep->add_flag("--physical", sweep_args.physical,
                  "fill the tau column even without a config file");
  sweep->add_option("-o,--output", sweep_args.output, "CSV output path")->required();
  sweep->add_option("--svg", sweep_args.svg, "also draw the curve to this SVG file");

  cli::IntervalArgs interval_args;
  interval_args.s_to = 2.0 * std::numbers::pi;
  interval_args.grid = 0.02;
  interval_args.tol = 1e-6;
  CLI::App* interval = app.add_subcommand("interval", "locate W>1 intervals by bisection");
  add_common(interval, interval_args.common);
  interval->add_option("--s-from", interval_args.s_from, "scan start (rad, default 0)");
  interval->add_option("--s-to", interval_args.s_to, "scan end (rad, default 2*pi)");
  interval->add_option("--grid", interval_args.grid, "bracketing grid step (rad, default 0.02)");
  interval->add_option("--tol", interval_args.tol, "bisection tolerance (rad, default 1e-6)");
  interval->add_option("--report", interval_args.report, "'tau' adds coherence-time bounds");
  interval->add_option("-o,--output", interval_args.output,
                       "write the JSON here plus a .manifest.json");

  cli::QasmArgs qasm_args;
  CLI::App* qasm = app.add_subcommand("qasm", "emit the experiment circuit as OpenQASM 2.0");
  qasm->add_option("--config", qasm_args.config_path, "key=value config file");
  qasm->add_option("--convention", qasm_args.convention,
                   "signed-physical | magnitudes | single-branch");
  qasm->add_option("--setting", qasm_args.setting, "xz | yy")->required();
  qasm->add_option("--a", qasm_args.a, "branch phase a (rad); overrides the configured geometry");
  qasm->add_option("--b", qasm_args.b, "branch phase b (rad); overrides the configured geometry");
  qasm->add_option("-o,--output", qasm_args.output, "QASM output path (stdout when absent)");

  std::string manifest_path;
  CLI::App* rerun = app.add_subcommand("rerun", "re-execute a manifest, rewriting its outputs");
  rerun->add_option("manifest", manifest_path, "path to a .manifest.json")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (phases->parsed()) return cli::exec_phases(phases_args);
    if (run->parsed()) return cli::exec_run(run_args);
    if (sweep->parsed()) return cli::exec_sweep(sweep_args);
    if (interval->parsed()) return cli::exec_interval(interval_args);
    if (qasm->parsed()) return cli::exec_qasm(qasm_args);
    if (rerun->parsed()) return cli::exec_rerun(manifest_path);
  } catch (const gravsim::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
