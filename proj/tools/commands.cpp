#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "gravsim/config.hpp"
#include "gravsim/errors.hpp"
#include "gravsim/experiment.hpp"
#include "gravsim/qasm.hpp"
#include "json.hpp"

namespace gravsim::cli {

namespace {

using nlohmann::ordered_json;

constexpr const char* kTauNote =
    "tau bounds divide the phase sum by the rate at which the configured geometry accumulates "
    "it; coherence-time windows quoted elsewhere for the same masses and separations are larger "
    "by a factor of about 2.02, and that discrepancy is left visible rather than calibrated "
    "away. The 1/(m1*m2) scaling of tau is unaffected.";

std::string format_float(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void atomic_write(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << content;
    out.flush();
    if (!out) {
      std::remove(tmp.c_str());
      throw IoError("write failed: " + path);
    }
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw IoError("cannot replace: " + path);
  }
}

void emit_or_print(const std::string& path, const std::string& content) {
  if (path.empty())
    std::cout << content;
  else
    atomic_write(path, content);
}

// Effective settings after merging flags over the config file over defaults.
struct Resolved {
  FileConfig cfg;
  bool have_config = false;
  Convention convention = Convention::SignedPhysical;
  Mode mode = Mode::Exact;
  std::uint64_t shots = 8192;
  std::uint64_t seed = 0;
  std::string noise = "off";
  bool damping = false;
  bool decomposed = false;
  CalibrationTable table;  // populated when noise is on

  bool noisy() const { return noise != "off"; }
};

Resolved resolve(const CommonArgs& args, Convention default_convention) {
  Resolved r;
  if (!args.config_path.empty()) {
    r.cfg = load_config(args.config_path);
    r.have_config = true;
  }
  r.shots = r.cfg.shots;
  r.seed = r.cfg.seed;
  r.noise = r.cfg.noise;

  if (!args.convention.empty())
    r.convention = convention_from_string(args.convention);
  else if (r.cfg.convention)
    r.convention = *r.cfg.convention;
  else
    r.convention = default_convention;

  if (args.exact && args.shots) throw ConfigError("--exact conflicts with --shots");
  if (args.shots) {
    r.mode = Mode::Shots;
    r.shots = *args.shots;
  }
  if (args.seed) r.seed = *args.seed;
  if (!args.noise.empty()) r.noise = args.noise;
  r.damping = args.damping;
  r.decomposed = args.decomposed;
  if (r.damping && !r.noisy())
    throw ConfigError("--damping needs a calibration table (--noise builtin or a csv path)");
  if (r.noisy())
    r.table = (r.noise == "builtin") ? builtin_ibmqx4_table() : load_calibration_csv(r.noise);
  if (r.damping) {
    for (std::size_t q = 0; q < r.table.per_qubit.size(); ++q) {
      const auto& cal = r.table.per_qubit[q];
      if (cal.t2_us > 2.0 * cal.t1_us)
        std::cerr << "warning: qubit " << q << ": t2 " << cal.t2_us
                  << " us exceeds 2*t1; damping clamps it to " << 2.0 * cal.t1_us << " us\n";
    }
  }
  return r;
}

ExperimentSpec base_spec(const Resolved& r) {
  ExperimentSpec s;
  s.mode = r.mode;
  s.shots = r.shots;
  s.seed = r.seed;
  s.noise = r.noisy();
  if (s.noise) s.table = r.table;
  s.damping = r.damping;
  s.decomposition = r.decomposed ? Decomposition::GateDecomposed : Decomposition::DiagonalBlock;
  return s;
}

ordered_json physical_json(const PhysicalConfig& p) {
  ordered_json j;
  j["m1_kg"] = p.m1;
  j["m2_kg"] = p.m2;
  j["d_m"] = p.d;
  j["delta_x_m"] = p.delta_x;
  j["tau_s"] = p.tau;
  j["G"] = p.G;
  j["hbar"] = p.hbar;
  return j;
}

PhysicalConfig physical_from_json(const ordered_json& j) {
  PhysicalConfig p;
  p.m1 = j.at("m1_kg").get<double>();
  p.m2 = j.at("m2_kg").get<double>();
  p.d = j.at("d_m").get<double>();
  p.delta_x = j.at("delta_x_m").get<double>();
  p.tau = j.at("tau_s").get<double>();
  p.G = j.at("G").get<double>();
  p.hbar = j.at("hbar").get<double>();
  return p;
}

ordered_json table_json(const CalibrationTable& t) {
  ordered_json per = ordered_json::array();
  for (const auto& q : t.per_qubit) {
    ordered_json e;
    e["t1_us"] = q.t1_us;
    e["t2_us"] = q.t2_us;
    e["gate_error"] = q.gate_error;
    e["readout_error"] = q.readout_error;
    per.push_back(e);
  }
  ordered_json j;
  j["per_qubit"] = per;
  j["single_qubit_gate_ns"] = t.single_qubit_gate_ns;
  j["two_qubit_gate_ns"] = t.two_qubit_gate_ns;
  return j;
}

CalibrationTable table_from_json(const ordered_json& j) {
  CalibrationTable t;
  for (const auto& e : j.at("per_qubit")) {
    QubitCalibration cal;
    cal.t1_us = e.at("t1_us").get<double>();
    cal.t2_us = e.at("t2_us").get<double>();
    cal.gate_error = e.at("gate_error").get<double>();
    cal.readout_error = e.at("readout_error").get<double>();
    t.per_qubit.push_back(cal);
  }
  t.single_qubit_gate_ns = j.at("single_qubit_gate_ns").get<double>();
  t.two_qubit_gate_ns = j.at("two_qubit_gate_ns").get<double>();
  return t;
}

ordered_json counts_json(const CountTable& t) {
  ordered_json j;
  for (const auto& [bits, count] : t.entries) j[bits] = count;
  return j;
}

const char* mode_name(Mode m) { return m == Mode::Shots ? "shots" : "exact"; }

ordered_json manifest_base(const std::string& command, const Resolved& r) {
  ordered_json m;
  m["tool"] = "gravsim";
  m["tool_version"] = kVersion;
  m["created_utc"] = utc_now();
  m["command"] = command;
  m["convention"] = to_string(r.convention);
  m["mode"] = mode_name(r.mode);
  m["shots"] = r.shots;
  m["seed"] = r.seed;
  m["noise_source"] = r.noise;
  if (r.noisy()) m["noise_table"] = table_json(r.table);
  m["damping"] = r.damping;
  m["decomposed"] = r.decomposed;
  return m;
}

void write_manifest(const std::string& primary_output, const ordered_json& m) {
  atomic_write(primary_output + ".manifest.json", m.dump(2) + "\n");
}

void run_and_write(const Resolved& r, double phi, double a, double b,
                   const std::optional<PhysicalConfig>& physical, const std::string& output) {
  ExperimentSpec spec = base_spec(r);
  spec.phi = phi;
  spec.a = a;
  spec.b = b;
  const WitnessResult wr = run_witness(spec);

  ordered_json out;
  out["e_xz"] = wr.e_xz;
  out["e_yy"] = wr.e_yy;
  out["w"] = wr.w;
  out["stderr"] = wr.std_err;
  if (wr.counts_xz) out["counts_xz"] = counts_json(*wr.counts_xz);
  if (wr.counts_yy) out["counts_yy"] = counts_json(*wr.counts_yy);
  out["mode"] = mode_name(r.mode);
  if (r.mode == Mode::Shots) {
    out["shots"] = r.shots;
    out["seed"] = r.seed;
  }
  out["phi"] = phi;
  out["a"] = a;
  out["b"] = b;
  out["convention"] = to_string(r.convention);
  out["noise"] = r.noise;
  emit_or_print(output, out.dump(2) + "\n");

  if (!output.empty()) {
    ordered_json m = manifest_base("run", r);
    m["physical"] = physical ? physical_json(*physical) : ordered_json(nullptr);
    m["phi"] = phi;
    m["a"] = a;
    m["b"] = b;
    ordered_json outputs;
    outputs["primary"] = output;
    m["outputs"] = outputs;
    write_manifest(output, m);
  }
}

std::string render_sweep_svg(const std::vector<SweepRow>& rows) {
  constexpr double left = 60, right = 780, top = 20, bottom = 455;
  const double s0 = rows.front().s;
  const double s1 = rows.back().s;
  double wmax = 2.0;
  for (const auto& r : rows) wmax = std::max(wmax, r.w);
  const double span = (s1 > s0) ? (s1 - s0) : 1.0;
  const auto sx = [&](double s) { return left + (s - s0) / span * (right - left); };
  const auto sy = [&](double w) { return bottom - w / wmax * (bottom - top); };
  const auto f2 = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return std::string(buf);
  };

  std::string out;
  out +=
      "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"800\" height=\"500\" "
      "viewBox=\"0 0 800 500\">\n";
  out += "  <line class=\"axis\" x1=\"" + f2(left) + "\" y1=\"" + f2(sy(0)) + "\" x2=\"" +
         f2(right) + "\" y2=\"" + f2(sy(0)) + "\" stroke=\"#333333\"/>\n";
  out += "  <line class=\"axis\" x1=\"" + f2(left) + "\" y1=\"" + f2(top) + "\" x2=\"" + f2(left) +
         "\" y2=\"" + f2(bottom) + "\" stroke=\"#333333\"/>\n";

  for (int t = static_cast<int>(std::ceil(s0)); t <= static_cast<int>(std::floor(s1)); ++t) {
    const double x = sx(t);
    out += "  <line class=\"tick\" x1=\"" + f2(x) + "\" y1=\"" + f2(bottom) + "\" x2=\"" + f2(x) +
           "\" y2=\"" + f2(bottom + 5) + "\" stroke=\"#333333\"/>\n";
    out += "  <text x=\"" + f2(x) + "\" y=\"" + f2(bottom + 18) +
           "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">" +
           std::to_string(t) + "</text>\n";
  }
  for (double t = 0.0; t <= wmax + 1e-9; t += 0.5) {
    const double y = sy(t);
    out += "  <line class=\"tick\" x1=\"" + f2(left - 5) + "\" y1=\"" + f2(y) + "\" x2=\"" +
           f2(left) + "\" y2=\"" + f2(y) + "\" stroke=\"#333333\"/>\n";
    out += "  <text x=\"" + f2(left - 9) + "\" y=\"" + f2(y + 4) +
           "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" + f2(t).substr(0, 3) +
           "</text>\n";
  }

  out += "  <polyline class=\"curve\" fill=\"none\" stroke=\"#1f6fb4\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i) out += ' ';
    out += f2(sx(rows[i].s)) + "," + f2(sy(rows[i].w));
  }
  out += "\"/>\n";

  out += "  <line class=\"ref\" x1=\"" + f2(left) + "\" y1=\"" + f2(sy(1.0)) + "\" x2=\"" +
         f2(right) + "\" y2=\"" + f2(sy(1.0)) +
         "\" stroke=\"#c0392b\" stroke-dasharray=\"5 4\"/>\n";

  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    const double f0 = rows[i].w - 1.0;
    const double f1 = rows[i + 1].w - 1.0;
    if (!(f0 * f1 < 0.0)) continue;
    const double s = rows[i].s + (rows[i + 1].s - rows[i].s) * (-f0) / (f1 - f0);
    const double x = sx(s);
    out += "  <line class=\"crossing\" x1=\"" + f2(x) + "\" y1=\"" + f2(top) + "\" x2=\"" + f2(x) +
           "\" y2=\"" + f2(bottom) + "\" stroke=\"#27ae60\"/>\n";
  }

  out += "  <text x=\"" + f2((left + right) / 2) + "\" y=\"" + f2(bottom + 38) +
         "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">s (rad)</text>\n";
  out += "  <text x=\"16\" y=\"" + f2((top + bottom) / 2) +
         "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\" "
         "transform=\"rotate(-90 16 " +
         f2((top + bottom) / 2) + ")\">W</text>\n";
  out += "</svg>\n";
  return out;
}

void sweep_and_write(const Resolved& r, const std::optional<PhysicalConfig>& physical, double s0,
                     double s1, double step, const std::string& output, const std::string& svg) {
  SweepSpec spec;
  spec.base = base_spec(r);
  spec.convention = r.convention;
  spec.physical = physical;
  const std::vector<SweepRow> rows = sweep(spec, s0, s1, step);

  std::string csv = "s_rad,tau_s,e_xz,e_yy,w,stderr\n";
  for (const auto& row : rows) {
    csv += format_float(row.s);
    csv += ',';
    if (row.tau) csv += format_float(*row.tau);
    csv += ',';
    csv += format_float(row.e_xz);
    csv += ',';
    csv += format_float(row.e_yy);
    csv += ',';
    csv += format_float(row.w);
    csv += ',';
    csv += format_float(row.std_err);
    csv += '\n';
  }
  atomic_write(output, csv);
  if (!svg.empty()) atomic_write(svg, render_sweep_svg(rows));

  ordered_json m = manifest_base("sweep", r);
  m["physical"] = physical ? physical_json(*physical) : ordered_json(nullptr);
  m["s_from"] = s0;
  m["s_to"] = s1;
  m["step"] = step;
  ordered_json outputs;
  outputs["primary"] = output;
  if (!svg.empty()) outputs["svg"] = svg;
  m["outputs"] = outputs;
  write_manifest(output, m);
}

void interval_and_write(const Resolved& r, const std::optional<PhysicalConfig>& physical,
                        double s0, double s1, double grid, double tol, bool report_tau,
                        const std::string& output) {
  SweepSpec spec;
  spec.base = base_spec(r);
  spec.convention = r.convention;
  spec.physical = physical;
  const auto intervals = find_witness_interval(spec, s0, s1, grid, tol);

  ordered_json out;
  out["convention"] = to_string(r.convention);
  out["s_from"] = s0;
  out["s_to"] = s1;
  out["grid"] = grid;
  out["tol"] = tol;
  out["noise"] = r.noise;
  ordered_json list = ordered_json::array();
  for (const auto& [lo, hi] : intervals) {
    ordered_json item;
    item["s_low"] = lo;
    item["s_high"] = hi;
    if (report_tau) {
      const PhysicalConfig pc = physical.value_or(PhysicalConfig{});
      item["tau_low_s"] = tau_from_phase_sum(pc, lo, r.convention);
      item["tau_high_s"] = tau_from_phase_sum(pc, hi, r.convention);
    }
    list.push_back(item);
  }
  out["intervals"] = list;
  if (report_tau) out["note"] = kTauNote;
  emit_or_print(output, out.dump(2) + "\n");

  if (!output.empty()) {
    ordered_json m = manifest_base("interval", r);
    m["physical"] = physical ? physical_json(*physical) : ordered_json(nullptr);
    m["s_from"] = s0;
    m["s_to"] = s1;
    m["grid"] = grid;
    m["tol"] = tol;
    m["report_tau"] = report_tau;
    ordered_json outputs;
    outputs["primary"] = output;
    m["outputs"] = outputs;
    write_manifest(output, m);
  }
}

void qasm_and_write(const Resolved& r, const std::string& setting, double phi, double a, double b,
                    const std::optional<PhysicalConfig>& physical, const std::string& output) {
  if (setting != "xz" && setting != "yy") throw ConfigError("--setting must be xz or yy");
  ExperimentSpec spec = base_spec(r);
  spec.phi = phi;
  spec.a = a;
  spec.b = b;
  spec.decomposition = Decomposition::GateDecomposed;
  const Circuit c =
      build_circuit(spec, setting == "xz" ? BasisSetting::XZ : BasisSetting::YY);
  const std::string text = emit_qasm(c);
  emit_or_print(output, text);

  if (!output.empty()) {
    ordered_json m = manifest_base("qasm", r);
    m["physical"] = physical ? physical_json(*physical) : ordered_json(nullptr);
    m["setting"] = setting;
    m["phi"] = phi;
    m["a"] = a;
    m["b"] = b;
    ordered_json outputs;
    outputs["primary"] = output;
    m["outputs"] = outputs;
    write_manifest(output, m);
  }
}

// Shared by run and qasm: explicit --a/--b beats the physical configuration.
struct PhasePick {
  double phi = 0, a = 0, b = 0;
  std::optional<PhysicalConfig> physical;
};

PhasePick pick_phases(const Resolved& r, const std::optional<double>& flag_a,
                      const std::optional<double>& flag_b) {
  if (flag_a.has_value() != flag_b.has_value())
    throw ConfigError("--a and --b must be given together");
  PhasePick p;
  if (flag_a) {
    p.a = *flag_a;
    p.b = *flag_b;
    return p;
  }
  const PhysicalConfig& pc = r.cfg.physical;
  const PhaseSet ps = compute_phases(pc);
  for (const auto& w : validate_regime(pc, ps)) std::cerr << "warning: " << w << "\n";
  const ResolvedAB ab = resolve_ab(ps, r.convention);
  p.phi = ps.phi;
  p.a = ab.a;
  p.b = ab.b;
  p.physical = pc;
  return p;
}

}  // namespace

int exec_phases(const PhasesArgs& args) {
  CommonArgs common;
  common.config_path = args.config_path;
  common.convention = args.convention;
  const Resolved r = resolve(common, Convention::SignedPhysical);

  const PhysicalConfig& pc = r.cfg.physical;
  const PhaseSet ps = compute_phases(pc);
  const std::vector<std::string> warnings = validate_regime(pc, ps);
  const ResolvedAB ab = resolve_ab(ps, r.convention);

  ordered_json out;
  out["physical"] = physical_json(pc);
  out["phi"] = ps.phi;
  out["phi_lr"] = ps.phi_lr;
  out["phi_rl"] = ps.phi_rl;
  out["d_phi_lr"] = ps.d_phi_lr;
  out["d_phi_rl"] = ps.d_phi_rl;
  out["d_phi_sum"] = ps.sum();
  out["interaction_energy_j"] = ps.interaction_energy;
  out["convention"] = to_string(r.convention);
  out["a"] = ab.a;
  out["b"] = ab.b;
  out["s"] = ab.s;
  out["warnings"] = warnings;
  std::cout << out.dump(2) << "\n";
  return 0;
}

int exec_run(const RunArgs& args) {
  const Resolved r = resolve(args.common, Convention::SignedPhysical);
  const PhasePick p = pick_phases(r, args.a, args.b);
  run_and_write(r, p.phi, p.a, p.b, p.physical, args.output);
  return 0;
}

int exec_sweep(const SweepArgs& args) {
  const Resolved r = resolve(args.common, Convention::SingleBranch);
  std::optional<PhysicalConfig> physical;
  if (args.physical || r.have_config) physical = r.cfg.physical;
  sweep_and_write(r, physical, args.s_from, args.s_to, args.step, args.output, args.svg);
  return 0;
}

int exec_interval(const IntervalArgs& args) {
  if (args.common.shots)
    throw ConfigError("interval extraction runs exactly; --shots is not supported");
  if (!args.report.empty() && args.report != "tau")
    throw ConfigError("--report only understands 'tau'");
  const Resolved r = resolve(args.common, Convention::SingleBranch);
  const bool report_tau = args.report == "tau";
  std::optional<PhysicalConfig> physical;
  if (report_tau || r.have_config) physical = r.cfg.physical;
  interval_and_write(r, physical, args.s_from, args.s_to, args.grid, args.tol, report_tau,
                     args.output);
  return 0;
}

int exec_qasm(const QasmArgs& args) {
  CommonArgs common;
  common.config_path = args.config_path;
  common.convention = args.convention;
  const Resolved r = resolve(common, Convention::SignedPhysical);
  const PhasePick p = pick_phases(r, args.a, args.b);
  qasm_and_write(r, args.setting, p.phi, p.a, p.b, p.physical, args.output);
  return 0;
}

int exec_rerun(const std::string& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw ConfigError("cannot read manifest: " + manifest_path);
  ordered_json m;
  try {
    m = ordered_json::parse(in);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("manifest is not valid JSON: ") + e.what());
  }

  try {
    Resolved r;
    r.convention = convention_from_string(m.at("convention").get<std::string>());
    r.mode = m.at("mode").get<std::string>() == "shots" ? Mode::Shots : Mode::Exact;
    r.shots = m.at("shots").get<std::uint64_t>();
    r.seed = m.at("seed").get<std::uint64_t>();
    r.noise = m.at("noise_source").get<std::string>();
    if (m.contains("noise_table")) r.table = table_from_json(m.at("noise_table"));
    r.damping = m.at("damping").get<bool>();
    r.decomposed = m.at("decomposed").get<bool>();

    std::optional<PhysicalConfig> physical;
    if (m.contains("physical") && !m.at("physical").is_null())
      physical = physical_from_json(m.at("physical"));

    const std::string command = m.at("command").get<std::string>();
    const ordered_json& outputs = m.at("outputs");
    const std::string primary = outputs.at("primary").get<std::string>();

    if (command == "run") {
      run_and_write(r, m.at("phi").get<double>(), m.at("a").get<double>(),
                    m.at("b").get<double>(), physical, primary);
    } else if (command == "sweep") {
      const std::string svg =
          outputs.contains("svg") ? outputs.at("svg").get<std::string>() : std::string{};
      sweep_and_write(r, physical, m.at("s_from").get<double>(), m.at("s_to").get<double>(),
                      m.at("step").get<double>(), primary, svg);
    } else if (command == "interval") {
      interval_and_write(r, physical, m.at("s_from").get<double>(), m.at("s_to").get<double>(),
                         m.at("grid").get<double>(), m.at("tol").get<double>(),
                         m.at("report_tau").get<bool>(), primary);
    } else if (command == "qasm") {
      qasm_and_write(r, m.at("setting").get<std::string>(), m.at("phi").get<double>(),
                     m.at("a").get<double>(), m.at("b").get<double>(), physical, primary);
    } else {
      throw ConfigError("manifest has unknown command '" + command + "'");
    }
  } catch (const ordered_json::exception& e) {
    throw ConfigError(std::string("malformed manifest: ") + e.what());
  }
  return 0;
}

}  // namespace gravsim::cli
