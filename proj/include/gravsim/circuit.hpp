#pragma once

#include <string>
#include <vector>

#include "gravsim/gate.hpp"
#include "gravsim/state.hpp"

namespace gravsim {

struct CircuitOp {
  Gate gate;
  std::vector<int> targets;
  std::string label;
};

struct Measurement {
  int qubit = 0;
  int cbit = 0;
};

struct Circuit {
  int num_qubits = 0;
  std::vector<CircuitOp> ops;
  std::vector<Measurement> measurements;
  // Builders that synthesize a unitary only up to a scalar record that scalar
  // here (radians), so equality checks can be exact instead of fuzzy.
  double global_phase = 0.0;

  Circuit() = default;
  explicit Circuit(int n);

  void append(const Gate& g, std::vector<int> targets, std::string label = "");
  void measure(int qubit, int cbit);
};

// Four controlled-phase blocks, one per basis state, each conjugated by the X
// gates that map its state to |11>. Output alphabet is {X, CX, Rz} only. With
// Rz = diag(1, e^{i theta}) the construction is exact, so the recorded global
// phase is zero.
Circuit decompose_diag4(double p00, double p01, double p10, double p11);

// Product of the gate matrices in application order. Oracle support for
// equivalence tests; refuses more than 6 qubits.
CMat composed_unitary(const Circuit& c);

// basis 'x' appends H, 'y' appends Sdg then H, 'z' appends nothing; a
// Z-basis readout of the qubit afterwards measures the requested Pauli.
void append_basis_change(Circuit& c, int qubit, char basis);

void apply_circuit(const Circuit& c, PureState& st);
void apply_circuit(const Circuit& c, MixedState& st);

// Splices src into dst with src qubit j mapped to qubit_map[j].
void append_circuit(Circuit& dst, const Circuit& src, const std::vector<int>& qubit_map);

}  // namespace gravsim
