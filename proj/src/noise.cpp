#include "gravsim/noise.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

#include "gravsim/errors.hpp"
#include "gravsim/rng.hpp"

namespace gravsim {

namespace {

const QubitCalibration& entry_for(const CalibrationTable& table, int qubit) {
  if (qubit < 0 || static_cast<std::size_t>(qubit) >= table.per_qubit.size())
    throw ConfigError("no calibration entry for qubit " + std::to_string(qubit));
  return table.per_qubit[static_cast<std::size_t>(qubit)];
}

// Applies k on the ket index and conj(k) on the bra index of a density
// matrix stored as a 2n-qubit amplitude vector.
void conjugate_by(MixedState& st, const CMat& k, int qubit) {
  apply_local_matrix(st.data, 2 * st.num_qubits, k, {qubit});
  apply_local_matrix(st.data, 2 * st.num_qubits, conj_elements(k), {qubit + st.num_qubits});
}

CMat pauli_x() {
  CMat m(2, 2);
  m.at(0, 1) = 1.0;
  m.at(1, 0) = 1.0;
  return m;
}

CMat pauli_y() {
  CMat m(2, 2);
  m.at(0, 1) = cd(0.0, -1.0);
  m.at(1, 0) = cd(0.0, 1.0);
  return m;
}

CMat pauli_z() {
  CMat m(2, 2);
  m.at(0, 0) = 1.0;
  m.at(1, 1) = -1.0;
  return m;
}

double parse_field(const std::string& text, const std::string& origin, int line) {
  const char* begin = text.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || !std::isfinite(v)) {
    std::ostringstream os;
    os << origin << ":" << line << ": not a number: '" << text << "'";
    throw ConfigError(os.str());
  }
  return v;
}

}  // namespace

CalibrationTable builtin_ibmqx4_table() {
  CalibrationTable t;
  t.per_qubit = {
      {50.81, 14.70, 0.86e-3, 4.80e-2},
      {50.00, 64.60, 1.46e-3, 5.30e-2},
      {47.90, 45.00, 1.29e-3, 9.80e-2},
      {37.40, 15.10, 3.44e-3, 5.70e-2},
  };
  return t;
}

CalibrationTable homogeneous_table(int num_qubits, double gate_error) {
  if (num_qubits < 1) throw std::invalid_argument("num_qubits must be >= 1");
  if (!(gate_error >= 0.0 && gate_error <= 1.0))
    throw std::invalid_argument("gate_error must lie in [0, 1]");
  CalibrationTable t;
  const double inf = std::numeric_limits<double>::infinity();
  t.per_qubit.assign(static_cast<std::size_t>(num_qubits),
                     QubitCalibration{inf, inf, gate_error, 0.0});
  return t;
}

CalibrationTable parse_calibration_csv(std::istream& in, const std::string& origin) {
  static const std::string header = "qubit,t1_us,t2_us,gate_error,readout_error";
  std::string line;
  if (!std::getline(in, line)) throw ConfigError(origin + ": empty calibration file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != header)
    throw ConfigError(origin + ": expected header '" + header + "', got '" + line + "'");

  CalibrationTable t;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (fields.size() != 5) {
      std::ostringstream os;
      os << origin << ":" << line_no << ": expected 5 comma-separated fields, got "
         << fields.size();
      throw ConfigError(os.str());
    }
    const double qubit = parse_field(fields[0], origin, line_no);
    if (qubit != static_cast<double>(t.per_qubit.size())) {
      std::ostringstream os;
      os << origin << ":" << line_no << ": qubit rows must be 0,1,2,... in order";
      throw ConfigError(os.str());
    }
    QubitCalibration cal;
    cal.t1_us = parse_field(fields[1], origin, line_no);
    cal.t2_us = parse_field(fields[2], origin, line_no);
    cal.gate_error = parse_field(fields[3], origin, line_no);
    cal.readout_error = parse_field(fields[4], origin, line_no);
    if (!(cal.t1_us > 0.0) || !(cal.t2_us > 0.0)) {
      std::ostringstream os;
      os << origin << ":" << line_no << ": t1_us and t2_us must be strictly positive";
      throw ConfigError(os.str());
    }
    if (!(cal.gate_error >= 0.0 && cal.gate_error <= 1.0) ||
        !(cal.readout_error >= 0.0 && cal.readout_error <= 1.0)) {
      std::ostringstream os;
      os << origin << ":" << line_no << ": error rates must lie in [0, 1]";
      throw ConfigError(os.str());
    }
    t.per_qubit.push_back(cal);
  }
  if (t.per_qubit.empty()) throw ConfigError(origin + ": no calibration rows");
  return t;
}

CalibrationTable load_calibration_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read calibration file: " + path);
  return parse_calibration_csv(in, path);
}

void apply_depolarizing(MixedState& st, int qubit, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("depolarizing p must lie in [0, 1]");
  if (qubit < 0 || qubit >= st.num_qubits) throw std::out_of_range("qubit index out of range");
  if (p == 0.0) return;

  const std::vector<cd> original = st.data;
  std::vector<cd> acc(original.size());
  for (std::size_t i = 0; i < original.size(); ++i) acc[i] = (1.0 - p) * original[i];

  const CMat paulis[3] = {pauli_x(), pauli_y(), pauli_z()};
  for (const CMat& pm : paulis) {
    st.data = original;
    conjugate_by(st, pm, qubit);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += (p / 3.0) * st.data[i];
  }
  st.data = std::move(acc);
}

void apply_depolarizing_after_gate(MixedState& st, const std::vector<int>& targets,
                                   const CalibrationTable& table) {
  for (int q : targets) apply_depolarizing(st, q, entry_for(table, q).gate_error);
}

std::vector<double> apply_readout_analytic(std::vector<double> probs,
                                           const std::vector<int>& measured,
                                           const CalibrationTable& table) {
  for (std::size_t j = 0; j < measured.size(); ++j) {
    const double r = entry_for(table, measured[j]).readout_error;
    if (!(r >= 0.0 && r <= 1.0))
      throw std::invalid_argument("readout error rate must lie in [0, 1]");
    if (r == 0.0) continue;
    std::vector<double> next(probs.size());
    const std::size_t mask = std::size_t{1} << j;
    for (std::size_t o = 0; o < probs.size(); ++o)
      next[o] = (1.0 - r) * probs[o] + r * probs[o ^ mask];
    probs = std::move(next);
  }
  return probs;
}

CountTable apply_readout_stochastic(const CountTable& counts, const std::vector<int>& measured,
                                    const CalibrationTable& table, std::uint64_t seed) {
  std::vector<double> rates(measured.size());
  for (std::size_t j = 0; j < measured.size(); ++j)
    rates[j] = entry_for(table, measured[j]).readout_error;

  SplitMix64 rng{seed};
  CountTable out;
  out.shots = counts.shots;
  for (const auto& [bits, count] : counts.entries) {
    for (std::uint64_t shot = 0; shot < count; ++shot) {
      std::string flipped = bits;
      for (std::size_t j = 0; j < measured.size(); ++j) {
        if (rates[j] == 0.0) continue;
        if (rng.next_double() < rates[j]) {
          // leftmost character is the highest measured slot
          const std::size_t pos = flipped.size() - 1 - j;
          flipped[pos] = (flipped[pos] == '0') ? '1' : '0';
        }
      }
      ++out.entries[flipped];
    }
  }
  return out;
}

void apply_damping(MixedState& st, int qubit, double dt_ns, const QubitCalibration& cal,
                   std::vector<std::string>* warnings) {
  if (dt_ns == 0.0) return;
  if (!(dt_ns > 0.0) || !std::isfinite(dt_ns))
    throw std::invalid_argument("gate duration must be >= 0");
  const double t1_ns = cal.t1_us * 1e3;
  double t2_ns = cal.t2_us * 1e3;
  if (t2_ns > 2.0 * t1_ns) {
    if (warnings) {
      std::ostringstream os;
      os << "t2 " << cal.t2_us << " us exceeds 2*t1 " << 2.0 * cal.t1_us
         << " us; clamping t2 to 2*t1";
      warnings->push_back(os.str());
    }
    t2_ns = 2.0 * t1_ns;
  }

  const double gamma = 1.0 - std::exp(-dt_ns / t1_ns);
  // amplitude damping already shrinks coherences by exp(-dt/(2 t1));
  // the remaining decay toward exp(-dt/t2) comes from a phase flip
  const double residual = std::exp(-dt_ns / t2_ns + dt_ns / (2.0 * t1_ns));
  const double pz = (1.0 - residual) / 2.0;

  CMat k0(2, 2);
  k0.at(0, 0) = 1.0;
  k0.at(1, 1) = std::sqrt(1.0 - gamma);
  CMat k1(2, 2);
  k1.at(0, 1) = std::sqrt(gamma);

  const std::vector<cd> original = st.data;
  std::vector<cd> acc(original.size());
  conjugate_by(st, k0, qubit);
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] = st.data[i];
  st.data = original;
  conjugate_by(st, k1, qubit);
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += st.data[i];
  st.data = std::move(acc);

  if (pz > 0.0) {
    const std::vector<cd> damped = st.data;
    conjugate_by(st, pauli_z(), qubit);
    for (std::size_t i = 0; i < st.data.size(); ++i)
      st.data[i] = (1.0 - pz) * damped[i] + pz * st.data[i];
  }
}

void apply_damping_after_gate(MixedState& st, const std::vector<int>& targets,
                              const CalibrationTable& table, bool two_qubit,
                              std::vector<std::string>* warnings) {
  const double dt = two_qubit ? table.two_qubit_gate_ns : table.single_qubit_gate_ns;
  for (int q : targets) apply_damping(st, q, dt, entry_for(table, q), warnings);
}

}  // namespace gravsim
