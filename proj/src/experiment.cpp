#include "gravsim/experiment.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace gravsim {

namespace {

constexpr std::uint64_t kBasisSeedOffset = 1000000;   // YY sampling stream
constexpr std::uint64_t kReadoutSeedOffset = 2000000; // readout flip streams

std::vector<int> measured_qubits(const Circuit& c) {
  std::vector<int> by_slot(c.measurements.size(), 0);
  for (const auto& m : c.measurements) by_slot[static_cast<std::size_t>(m.cbit)] = m.qubit;
  return by_slot;
}

// +1/-1 parity average of a probability vector indexed by outcome bits.
double parity(const std::vector<double>& probs) {
  double sum = 0.0;
  for (std::size_t o = 0; o < probs.size(); ++o)
    sum += (std::popcount(o) % 2 == 0) ? probs[o] : -probs[o];
  return sum;
}

MixedState evolve_noisy(const Circuit& c, const ExperimentSpec& spec) {
  MixedState st = init_zero_mixed(c.num_qubits);
  for (const auto& op : c.ops) {
    apply_gate(st, op.gate, op.targets);
    apply_depolarizing_after_gate(st, op.targets, spec.table);
    if (spec.damping)
      apply_damping_after_gate(st, op.targets, spec.table, op.gate.arity() == 2, nullptr);
  }
  return st;
}

struct BasisRun {
  double correlator = 0.0;
  std::optional<CountTable> counts;
};

BasisRun run_basis(const ExperimentSpec& spec, BasisSetting setting) {
  const Circuit c = build_circuit(spec, setting);
  const std::vector<int> measured = measured_qubits(c);
  const std::uint64_t stream = (setting == BasisSetting::YY) ? kBasisSeedOffset : 0;

  BasisRun out;
  if (!spec.noise && spec.mode == Mode::Exact) {
    PureState st = init_zero(c.num_qubits);
    apply_circuit(c, st);
    out.correlator = expectation(st, PauliString{"ZZ", measured});
    return out;
  }

  std::vector<double> probs;
  if (spec.noise) {
    const MixedState st = evolve_noisy(c, spec);
    probs = marginal_probabilities(st, measured);
  } else {
    PureState st = init_zero(c.num_qubits);
    apply_circuit(c, st);
    probs = marginal_probabilities(st, measured);
  }

  if (spec.mode == Mode::Exact) {
    if (spec.noise) probs = apply_readout_analytic(std::move(probs), measured, spec.table);
    out.correlator = parity(probs);
    return out;
  }

  CountTable counts = sample_from_probabilities(probs, measured, spec.shots, spec.seed + stream);
  if (spec.noise)
    counts = apply_readout_stochastic(counts, measured, spec.table,
                                      spec.seed + kReadoutSeedOffset + stream);
  out.correlator = estimate_correlator(counts);
  out.counts = std::move(counts);
  return out;
}

}  // namespace

Circuit build_circuit(const ExperimentSpec& spec, BasisSetting setting) {
  Circuit c(4);
  c.append(Gate::h(), {0}, "a");
  c.append(Gate::h(), {2}, "a");
  c.append(Gate::cx(), {0, 1}, "b");
  c.append(Gate::cx(), {2, 3}, "b");

  const double phi = spec.phi;
  if (spec.decomposition == Decomposition::GateDecomposed) {
    const Circuit block = decompose_diag4(phi, phi + spec.a, phi + spec.b, phi);
    append_circuit(c, block, {0, 2});
  } else {
    c.append(Gate::diag4(phi, phi + spec.a, phi + spec.b, phi), {0, 2}, "phase");
  }

  c.append(Gate::cx(), {1, 0}, "g");
  c.append(Gate::cx(), {3, 2}, "g");

  if (setting == BasisSetting::XZ) {
    append_basis_change(c, 1, 'x');
    append_basis_change(c, 3, 'z');
  } else {
    append_basis_change(c, 1, 'y');
    append_basis_change(c, 3, 'y');
  }
  c.measure(1, 0);
  c.measure(3, 1);
  return c;
}

double estimate_correlator(const CountTable& counts) {
  if (counts.shots == 0 || counts.entries.empty())
    throw std::invalid_argument("empty count table");
  double sum = 0.0;
  for (const auto& [bits, count] : counts.entries) {
    int ones = 0;
    for (char ch : bits)
      if (ch == '1') ++ones;
    const double signed_count =
        (ones % 2 == 0) ? static_cast<double>(count) : -static_cast<double>(count);
    sum += signed_count;
  }
  return sum / static_cast<double>(counts.shots);
}

WitnessResult run_witness(const ExperimentSpec& spec) {
  if (spec.mode == Mode::Shots && spec.shots < 1)
    throw std::invalid_argument("shots must be >= 1");

  BasisRun xz = run_basis(spec, BasisSetting::XZ);
  BasisRun yy = run_basis(spec, BasisSetting::YY);

  WitnessResult r;
  r.e_xz = xz.correlator;
  r.e_yy = yy.correlator;
  r.w = std::abs(r.e_xz + r.e_yy);
  if (spec.mode == Mode::Shots) {
    const double n = static_cast<double>(spec.shots);
    r.std_err = std::sqrt((1.0 - r.e_xz * r.e_xz) / n + (1.0 - r.e_yy * r.e_yy) / n);
    r.counts_xz = std::move(xz.counts);
    r.counts_yy = std::move(yy.counts);
  }
  return r;
}

std::vector<SweepRow> sweep(const SweepSpec& spec, double s0, double s1, double step) {
  if (!std::isfinite(s0) || !std::isfinite(s1) || s0 > s1)
    throw std::invalid_argument("sweep range must satisfy s0 <= s1");
  if (!(step > 0.0) || !std::isfinite(step)) throw std::invalid_argument("step must be > 0");

  const std::size_t rows =
      (s0 == s1) ? 1 : static_cast<std::size_t>(std::floor((s1 - s0) / step + 1e-9)) + 1;

  const PhysicalConfig physical = spec.physical.value_or(PhysicalConfig{});
  const auto [fa, fb] = convention_fractions(physical, spec.convention);

  std::vector<SweepRow> out;
  out.reserve(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    const double s = s0 + static_cast<double>(i) * step;
    ExperimentSpec point = spec.base;
    point.a = fa * s;
    point.b = fb * s;
    point.seed = spec.base.seed + i;

    SweepRow row;
    row.s = s;
    if (spec.physical) {
      const double tau = tau_from_phase_sum(physical, s, spec.convention);
      PhysicalConfig at_point = physical;
      at_point.tau = tau;
      point.phi = compute_phases(at_point).phi;
      row.tau = tau;
    }

    const WitnessResult wr = run_witness(point);
    row.e_xz = wr.e_xz;
    row.e_yy = wr.e_yy;
    row.w = wr.w;
    row.std_err = wr.std_err;
    out.push_back(row);
  }
  return out;
}

std::vector<std::pair<double, double>> find_witness_interval(const SweepSpec& spec, double s0,
                                                             double s1, double grid_step,
                                                             double tol) {
  if (spec.base.mode == Mode::Shots)
    throw std::invalid_argument("interval extraction requires exact evaluation");
  if (!(tol > 0.0) || !(grid_step > 0.0) || !(s0 < s1))
    throw std::invalid_argument("need s0 < s1, gridStep > 0, tol > 0");

  const PhysicalConfig physical = spec.physical.value_or(PhysicalConfig{});
  const auto [fa, fb] = convention_fractions(physical, spec.convention);

  const auto excess = [&](double s) {
    ExperimentSpec point = spec.base;
    point.a = fa * s;
    point.b = fb * s;
    if (spec.physical) {
      const double tau = tau_from_phase_sum(physical, s, spec.convention);
      PhysicalConfig at_point = physical;
      at_point.tau = tau;
      point.phi = compute_phases(at_point).phi;
    }
    return run_witness(point).w - 1.0;
  };

  std::vector<double> grid;
  for (std::size_t i = 0;; ++i) {
    const double s = s0 + static_cast<double>(i) * grid_step;
    if (s >= s1) break;
    grid.push_back(s);
  }
  grid.push_back(s1);

  const auto refine = [&](double lo, double hi, bool lo_inside) {
    while (hi - lo > tol) {
      const double mid = 0.5 * (lo + hi);
      if ((excess(mid) > 0.0) == lo_inside)
        lo = mid;
      else
        hi = mid;
    }
    return 0.5 * (lo + hi);
  };

  std::vector<std::pair<double, double>> intervals;
  bool inside = excess(grid[0]) > 0.0;
  double open_at = inside ? grid[0] : 0.0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const bool next_inside = excess(grid[i]) > 0.0;
    if (next_inside == inside) continue;
    const double crossing = refine(grid[i - 1], grid[i], inside);
    if (next_inside)
      open_at = crossing;
    else
      intervals.emplace_back(open_at, crossing);
    inside = next_inside;
  }
  if (inside) intervals.emplace_back(open_at, s1);
  return intervals;
}

}  // namespace gravsim
