#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "gravsim/complexmat.hpp"
#include "gravsim/gate.hpp"

namespace gravsim {

// Bit-ordering convention used everywhere: qubit k is bit k of the amplitude
// index, so q0 is least significant. Printed bitstrings run q_{n-1}..q0.

struct PureState {
  int num_qubits = 0;
  std::vector<cd> amps;
};

// Density operator. Entry (ket i, bra j) lives at data[i + (j << num_qubits)],
// which lets gate kernels treat it as a 2n-qubit amplitude vector: the ket
// index occupies bits [0, n), the bra index bits [n, 2n).
struct MixedState {
  int num_qubits = 0;
  std::vector<cd> data;

  cd entry(int i, int j) const { return data[static_cast<std::size_t>(i) + (static_cast<std::size_t>(j) << num_qubits)]; }
  CMat to_matrix() const;
};

struct PauliString {
  std::string factors;      // chars from "IXYZ", one per entry of qubits
  std::vector<int> qubits;
};

struct CountTable {
  std::uint64_t shots = 0;
  std::map<std::string, std::uint64_t> entries;
};

PureState init_zero(int num_qubits);
MixedState init_zero_mixed(int num_qubits);
MixedState to_mixed(const PureState& psi);

void apply_gate(PureState& st, const Gate& g, const std::vector<int>& targets);
void apply_gate(MixedState& st, const Gate& g, const std::vector<int>& targets);

// Applies a 2^k x 2^k matrix to target qubits of a 2^num_qubits amplitude
// vector, targets[0] as the high bit of the local index. k <= 2. Shared by
// gates and noise channels (the matrix need not be unitary).
void apply_local_matrix(std::vector<cd>& amps, int num_qubits, const CMat& u,
                        const std::vector<int>& targets);

double norm_sq(const PureState& st);
double trace_real(const MixedState& st);
double purity(const MixedState& st);

double expectation(const PureState& st, const PauliString& obs);
double expectation(const MixedState& st, const PauliString& obs);

// Born distribution of the measured qubits (unmeasured ones marginalized);
// outcome bit j corresponds to measured[j].
std::vector<double> marginal_probabilities(const PureState& st, const std::vector<int>& measured);
std::vector<double> marginal_probabilities(const MixedState& st, const std::vector<int>& measured);

CountTable sample_counts(const PureState& st, const std::vector<int>& measured,
                         std::uint64_t shots, std::uint64_t seed);
CountTable sample_counts(const MixedState& st, const std::vector<int>& measured,
                         std::uint64_t shots, std::uint64_t seed);
CountTable sample_from_probabilities(const std::vector<double>& probs,
                                     const std::vector<int>& measured,
                                     std::uint64_t shots, std::uint64_t seed);

// |<a|b>|
double fidelity_up_to_global_phase(const PureState& a, const PureState& b);

// Partial trace onto `keep`; result qubit j is the original keep[j].
MixedState reduced_state(const PureState& st, const std::vector<int>& keep);
MixedState reduced_state(const MixedState& st, const std::vector<int>& keep);

// Bitstring key for an outcome index: leftmost character is the highest
// measured slot, matching the q_{n-1}..q0 print convention.
std::string outcome_bitstring(std::size_t outcome, std::size_t num_measured);

}  // namespace gravsim
