#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "gravsim/state.hpp"

namespace gravsim {

struct QubitCalibration {
  double t1_us = 0;
  double t2_us = 0;
  double gate_error = 0;     // probability
  double readout_error = 0;  // probability
};

struct CalibrationTable {
  std::vector<QubitCalibration> per_qubit;
  // Gate durations only matter for the optional T1/T2 damping mode. These
  // defaults are representative transmon values, not measured ones.
  double single_qubit_gate_ns = 60.0;
  double two_qubit_gate_ns = 300.0;
};

// The four-qubit device table this project ships with.
CalibrationTable builtin_ibmqx4_table();

// Equal gate error on every qubit, readout errors zero. Used by the noise
// sanity properties.
CalibrationTable homogeneous_table(int num_qubits, double gate_error);

// CSV with header `qubit,t1_us,t2_us,gate_error,readout_error`.
CalibrationTable load_calibration_csv(const std::string& path);
CalibrationTable parse_calibration_csv(std::istream& in, const std::string& origin);

// rho -> (1-p) rho + (p/3)(X rho X + Y rho Y + Z rho Z)
void apply_depolarizing(MixedState& st, int qubit, double p);

// One depolarizing channel per target qubit at that qubit's gate error rate.
void apply_depolarizing_after_gate(MixedState& st, const std::vector<int>& targets,
                                   const CalibrationTable& table);

// Symmetric readout confusion applied analytically to a marginal
// distribution; outcome bit j corresponds to measured[j].
std::vector<double> apply_readout_analytic(std::vector<double> probs,
                                           const std::vector<int>& measured,
                                           const CalibrationTable& table);

// Per-shot stochastic bit flips on sampled counts.
CountTable apply_readout_stochastic(const CountTable& counts, const std::vector<int>& measured,
                                    const CalibrationTable& table, std::uint64_t seed);

// Amplitude damping gamma = 1 - exp(-dt/T1) plus the extra pure dephasing
// that brings total coherence decay to exp(-dt/T2). T2 is clamped to 2*T1
// with a warning when the table violates that bound.
void apply_damping(MixedState& st, int qubit, double dt_ns, const QubitCalibration& cal,
                   std::vector<std::string>* warnings);
void apply_damping_after_gate(MixedState& st, const std::vector<int>& targets,
                              const CalibrationTable& table, bool two_qubit_gate,
                              std::vector<std::string>* warnings);

}  // namespace gravsim
