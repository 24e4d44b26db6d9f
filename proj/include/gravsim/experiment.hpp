#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "gravsim/circuit.hpp"
#include "gravsim/gravity.hpp"
#include "gravsim/noise.hpp"

namespace gravsim {

enum class BasisSetting { XZ, YY };
enum class Mode { Exact, Shots };
enum class Decomposition { DiagonalBlock, GateDecomposed };

// One witness evaluation: the circuit phases (phi, a, b), how to estimate
// (exact expectations or sampled counts), and what noise to apply.
struct ExperimentSpec {
  double phi = 0.0;  // common phase on the |00> and |11> branches
  double a = 0.0;    // d_phi_lr
  double b = 0.0;    // d_phi_rl
  Mode mode = Mode::Exact;
  std::uint64_t shots = 8192;
  std::uint64_t seed = 0;
  bool noise = false;
  CalibrationTable table;  // consulted only when noise is on
  bool damping = false;
  Decomposition decomposition = Decomposition::DiagonalBlock;
};

struct WitnessResult {
  double e_xz = 0;    // <sigma_x (x) sigma_z> estimate
  double e_yy = 0;    // <sigma_y (x) sigma_y> estimate
  double w = 0;       // |e_xz + e_yy|
  double std_err = 0; // 0 in exact mode
  std::optional<CountTable> counts_xz;
  std::optional<CountTable> counts_yy;
};

struct SweepRow {
  double s = 0;
  std::optional<double> tau;
  double e_xz = 0;
  double e_yy = 0;
  double w = 0;
  double std_err = 0;
};

// Sweep template: per-point phases are resolved from s via the convention;
// the physical config supplies the geometry-locked split between a and b and
// the tau column. signed-physical and magnitudes require it; single-branch
// runs fine without (tau column absent, phi = 0).
struct SweepSpec {
  ExperimentSpec base;
  Convention convention = Convention::SingleBranch;
  std::optional<PhysicalConfig> physical;
};

// Four-qubit circuit: q0/q2 are the mass qubits, q1/q3 the spin qubits.
// H on q0,q2; CX(q0->q1), CX(q2->q3); Diag4(phi, phi+a, phi+b, phi) on
// (q0,q2); CX(q1->q0), CX(q3->q2); basis change on q1/q3; measure q1->c0,
// q3->c1.
Circuit build_circuit(const ExperimentSpec& spec, BasisSetting setting);

// Parity average of a 2-bit count table.
double estimate_correlator(const CountTable& counts);

WitnessResult run_witness(const ExperimentSpec& spec);

std::vector<SweepRow> sweep(const SweepSpec& spec, double s0, double s1, double step);

// Grid scan for sign changes of W - 1, then bisection to tol. Exact (or
// noisy-exact) evaluation only; sampling noise would make bisection lie.
std::vector<std::pair<double, double>> find_witness_interval(const SweepSpec& spec, double s0,
                                                             double s1, double grid_step,
                                                             double tol);

}  // namespace gravsim
