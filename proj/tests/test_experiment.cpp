#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "gravsim/experiment.hpp"
#include "gravsim/rng.hpp"

using namespace gravsim;

namespace {

constexpr double kPi = std::numbers::pi;

double closed_e_xz(double a, double b) { return (std::cos(b) - std::cos(a)) / 2.0; }
double closed_e_yy(double a, double b) { return (std::cos(b - a) - 1.0) / 2.0; }
double closed_w(double a, double b) { return std::abs(closed_e_xz(a, b) + closed_e_yy(a, b)); }

// the two spin qubits just before the basis change, index = q1 + 2*q3
std::vector<cd> contract_amps(double phi, double a, double b) {
  return {0.5 * std::exp(cd{0, phi}), 0.5 * std::exp(cd{0, phi + b}),
          0.5 * std::exp(cd{0, phi + a}), 0.5 * std::exp(cd{0, phi})};
}

MixedState spin_state_before_basis_change(const ExperimentSpec& spec) {
  const Circuit full = build_circuit(spec, BasisSetting::XZ);
  Circuit prefix(full.num_qubits);
  for (const CircuitOp& op : full.ops) {
    if (op.label == "basis") break;
    prefix.ops.push_back(op);
  }
  PureState st = init_zero(full.num_qubits);
  apply_circuit(prefix, st);
  return reduced_state(st, {1, 3});
}

double overlap(const MixedState& rho, const std::vector<cd>& psi) {
  cd acc = 0;
  const int dim = 1 << rho.num_qubits;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) acc += std::conj(psi[i]) * rho.entry(i, j) * psi[j];
  return acc.real();
}

}  // namespace

TEST_CASE("the spin pair ends up in the advertised two-qubit state") {
  ExperimentSpec spec;
  spec.phi = 0.7;
  spec.a = -0.3;
  spec.b = 1.1;
  const MixedState rho = spin_state_before_basis_change(spec);
  CHECK(purity(rho) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(overlap(rho, contract_amps(0.7, -0.3, 1.1)) == doctest::Approx(1.0).epsilon(1e-10));

  ExperimentSpec idle;
  const MixedState plus = spin_state_before_basis_change(idle);
  CHECK(overlap(plus, contract_amps(0, 0, 0)) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("circuit structure") {
  ExperimentSpec spec;
  spec.a = 0.2;
  spec.b = 0.9;

  const Circuit xz = build_circuit(spec, BasisSetting::XZ);
  CHECK(xz.num_qubits == 4);
  REQUIRE(xz.measurements.size() == 2);
  CHECK(xz.measurements[0].qubit == 1);
  CHECK(xz.measurements[0].cbit == 0);
  CHECK(xz.measurements[1].qubit == 3);
  CHECK(xz.measurements[1].cbit == 1);

  // superpose, entangle, phase, disentangle, basis change
  REQUIRE(xz.ops.size() == 8);
  CHECK(xz.ops[0].gate.kind == GateKind::H);
  CHECK(xz.ops[1].gate.kind == GateKind::H);
  CHECK(xz.ops[2].targets == std::vector<int>{0, 1});
  CHECK(xz.ops[3].targets == std::vector<int>{2, 3});
  CHECK(xz.ops[4].gate.kind == GateKind::Diag4);
  CHECK(xz.ops[4].targets == std::vector<int>{0, 2});
  CHECK(xz.ops[5].targets == std::vector<int>{1, 0});
  CHECK(xz.ops[6].targets == std::vector<int>{3, 2});
  // x basis on the first spin only; the second is read in z directly
  CHECK(xz.ops[7].gate.kind == GateKind::H);
  CHECK(xz.ops[7].targets == std::vector<int>{1});

  const Circuit yy = build_circuit(spec, BasisSetting::YY);
  REQUIRE(yy.ops.size() == 11);
  CHECK(yy.ops[7].gate.kind == GateKind::Sdg);
  CHECK(yy.ops[8].gate.kind == GateKind::H);
  CHECK(yy.ops[9].gate.kind == GateKind::Sdg);
  CHECK(yy.ops[10].gate.kind == GateKind::H);

  ExperimentSpec dec = spec;
  dec.decomposition = Decomposition::GateDecomposed;
  const Circuit flat = build_circuit(dec, BasisSetting::XZ);
  for (const CircuitOp& op : flat.ops) CHECK(op.gate.kind != GateKind::Diag4);
}

TEST_CASE("exact witness matches the closed form") {
  SplitMix64 rng{4242};
  double worst = 0;
  for (int i = 0; i < 200; ++i) {
    ExperimentSpec spec;
    spec.a = (rng.next_double() * 2 - 1) * 2 * kPi;
    spec.b = (rng.next_double() * 2 - 1) * 2 * kPi;
    spec.phi = (rng.next_double() * 2 - 1) * kPi;
    const WitnessResult wr = run_witness(spec);
    worst = std::max(worst, std::abs(wr.e_xz - closed_e_xz(spec.a, spec.b)));
    worst = std::max(worst, std::abs(wr.e_yy - closed_e_yy(spec.a, spec.b)));
    worst = std::max(worst, std::abs(wr.w - closed_w(spec.a, spec.b)));
    CHECK(wr.std_err == 0.0);
    CHECK(!wr.counts_xz.has_value());
    CHECK(!wr.counts_yy.has_value());
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("witness symmetries") {
  SplitMix64 rng{17};
  for (int i = 0; i < 10; ++i) {
    const double a = (rng.next_double() * 2 - 1) * 2 * kPi;
    const double b = (rng.next_double() * 2 - 1) * 2 * kPi;

    ExperimentSpec equal;
    equal.a = a;
    equal.b = a;
    CHECK(run_witness(equal).w < 1e-10);

    ExperimentSpec base;
    base.a = a;
    base.b = b;
    ExperimentSpec shifted = base;
    shifted.a = a + 2 * kPi;
    CHECK(run_witness(shifted).w == doctest::Approx(run_witness(base).w).epsilon(1e-10));

    ExperimentSpec phased = base;
    phased.phi = rng.next_double() * 6;
    CHECK(run_witness(phased).w == doctest::Approx(run_witness(base).w).epsilon(1e-10));
  }
}

TEST_CASE("the half-turn point is maximally witnessed") {
  ExperimentSpec spec;
  spec.a = 0;
  spec.b = kPi;
  const WitnessResult wr = run_witness(spec);
  CHECK(std::abs(wr.e_xz + 1.0) < 1e-10);
  CHECK(std::abs(wr.e_yy + 1.0) < 1e-10);
  CHECK(std::abs(wr.w - 2.0) < 1e-10);
}

TEST_CASE("gate-decomposed runs agree with the diagonal block") {
  SplitMix64 rng{88};
  for (int i = 0; i < 50; ++i) {
    ExperimentSpec spec;
    spec.a = (rng.next_double() * 2 - 1) * 2 * kPi;
    spec.b = (rng.next_double() * 2 - 1) * 2 * kPi;
    spec.phi = rng.next_double();
    ExperimentSpec dec = spec;
    dec.decomposition = Decomposition::GateDecomposed;
    CHECK(std::abs(run_witness(spec).w - run_witness(dec).w) < 1e-10);
  }
}

TEST_CASE("estimate_correlator averages the parity") {
  CountTable t;
  t.shots = 100;
  t.entries = {{"00", 100}};
  CHECK(estimate_correlator(t) == doctest::Approx(1.0));

  t.entries = {{"01", 50}, {"10", 50}};
  CHECK(estimate_correlator(t) == doctest::Approx(-1.0));

  t.entries = {{"00", 25}, {"01", 25}, {"10", 25}, {"11", 25}};
  CHECK(estimate_correlator(t) == doctest::Approx(0.0));

  t.entries = {{"11", 100}};
  CHECK(estimate_correlator(t) == doctest::Approx(1.0));

  CountTable empty;
  CHECK_THROWS_AS(estimate_correlator(empty), std::invalid_argument);
}

TEST_CASE("sampled estimates are seeded and carry honest error bars") {
  ExperimentSpec spec;
  spec.a = 0;
  spec.b = 2.0;
  spec.mode = Mode::Shots;
  spec.shots = 8192;
  spec.seed = 3;

  const WitnessResult first = run_witness(spec);
  const WitnessResult second = run_witness(spec);
  REQUIRE(first.counts_xz.has_value());
  REQUIRE(first.counts_yy.has_value());
  CHECK(first.counts_xz->entries == second.counts_xz->entries);
  CHECK(first.counts_yy->entries == second.counts_yy->entries);
  CHECK(first.w == second.w);
  CHECK(first.counts_xz->shots == 8192);

  const double expected_err = std::sqrt(
      ((1.0 - first.e_xz * first.e_xz) + (1.0 - first.e_yy * first.e_yy)) / 8192.0);
  CHECK(first.std_err == doctest::Approx(expected_err).epsilon(1e-12));

  ExperimentSpec exact = spec;
  exact.mode = Mode::Exact;
  const double truth = run_witness(exact).w;
  CHECK(std::abs(first.w - truth) < 5.0 * first.std_err + 1e-12);

  ExperimentSpec reseeded = spec;
  reseeded.seed = 4;
  const WitnessResult third = run_witness(reseeded);
  CHECK(third.counts_xz->entries != first.counts_xz->entries);

  ExperimentSpec hopeless = spec;
  hopeless.shots = 0;
  CHECK_THROWS_AS(run_witness(hopeless), std::invalid_argument);
}

TEST_CASE("device noise shrinks the witness to a known value") {
  ExperimentSpec spec;
  spec.a = 0;
  spec.b = kPi;
  spec.noise = true;
  spec.table = builtin_ibmqx4_table();
  const WitnessResult wr = run_witness(spec);
  CHECK(wr.e_xz == doctest::Approx(-0.7762416412498009).epsilon(1e-12));
  CHECK(wr.e_yy == doctest::Approx(-0.765001583682397).epsilon(1e-12));
  CHECK(wr.w == doctest::Approx(1.541243224932198).epsilon(1e-12));
  CHECK(wr.w < 2.0);
}

TEST_CASE("zero-rate noise is indistinguishable from the ideal run") {
  SplitMix64 rng{55};
  for (int i = 0; i < 10; ++i) {
    ExperimentSpec spec;
    spec.a = (rng.next_double() * 2 - 1) * 2 * kPi;
    spec.b = (rng.next_double() * 2 - 1) * 2 * kPi;
    ExperimentSpec quiet = spec;
    quiet.noise = true;
    quiet.table = homogeneous_table(4, 0.0);
    CHECK(std::abs(run_witness(spec).w - run_witness(quiet).w) < 1e-10);
  }
}

TEST_CASE("homogeneous depolarizing never helps") {
  SweepSpec ideal;
  SweepSpec noisy;
  noisy.base.noise = true;
  noisy.base.table = homogeneous_table(4, 0.03);
  const auto clean_rows = sweep(ideal, 0, 2 * kPi, 0.1);
  const auto noisy_rows = sweep(noisy, 0, 2 * kPi, 0.1);
  REQUIRE(clean_rows.size() == noisy_rows.size());
  for (std::size_t i = 0; i < clean_rows.size(); ++i)
    CHECK(noisy_rows[i].w <= clean_rows[i].w + 1e-9);
}

TEST_CASE("relaxation during gates weakens the witness further") {
  ExperimentSpec spec;
  spec.a = 0;
  spec.b = kPi;
  spec.noise = true;
  spec.table = builtin_ibmqx4_table();
  const double without = run_witness(spec).w;
  spec.damping = true;
  const double with = run_witness(spec).w;
  CHECK(with < without);
  CHECK(with > 0.0);
}

TEST_CASE("sweep produces the documented grid") {
  SweepSpec spec;
  const auto rows = sweep(spec, 0, 2 * kPi, kPi / 2);
  REQUIRE(rows.size() == 5);
  const double expected[5] = {0, 1, 2, 1, 0};
  for (int i = 0; i < 5; ++i) {
    CHECK(rows[i].s == doctest::Approx(i * kPi / 2));
    CHECK(std::abs(rows[i].w - expected[i]) < 1e-10);
    CHECK(!rows[i].tau.has_value());
  }

  CHECK(sweep(spec, 0, 2 * kPi, 0.02).size() == 315);
  CHECK(sweep(spec, 1.3, 1.3, 0.5).size() == 1);

  CHECK_THROWS_AS(sweep(spec, 1.0, 0.0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(sweep(spec, 0.0, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(sweep(spec, 0.0, 1.0, -0.1), std::invalid_argument);
}

TEST_CASE("a geometry-locked sweep reports the matching interaction time") {
  SweepSpec spec;
  spec.convention = Convention::SignedPhysical;
  spec.physical = PhysicalConfig{};
  const auto rows = sweep(spec, 0.0, 0.5, 0.1);
  REQUIRE(rows.size() == 6);
  const double rate = phase_sum_rate(*spec.physical, Convention::SignedPhysical);
  for (const auto& row : rows) {
    REQUIRE(row.tau.has_value());
    CHECK(*row.tau == doctest::Approx(row.s / rate).epsilon(1e-12));
  }
  // the split between the two branch phases follows the geometry
  const auto [fa, fb] = convention_fractions(*spec.physical, Convention::SignedPhysical);
  ExperimentSpec probe;
  probe.a = fa * rows[3].s;
  probe.b = fb * rows[3].s;
  CHECK(rows[3].w == doctest::Approx(run_witness(probe).w).epsilon(1e-10));
}

TEST_CASE("single-point sweep equals a direct run") {
  SweepSpec spec;
  spec.base.mode = Mode::Shots;
  spec.base.shots = 4096;
  spec.base.seed = 5;
  const auto rows = sweep(spec, 1.3, 1.3, 0.5);
  REQUIRE(rows.size() == 1);

  ExperimentSpec direct = spec.base;
  direct.a = 0;
  direct.b = 1.3;
  const WitnessResult wr = run_witness(direct);
  CHECK(rows[0].w == wr.w);
  CHECK(rows[0].e_xz == wr.e_xz);

  const auto rows_again = sweep(spec, 1.3, 1.3, 0.5);
  CHECK(rows_again[0].w == rows[0].w);
}

TEST_CASE("interval extraction finds the ideal window") {
  SweepSpec spec;
  const auto intervals = find_witness_interval(spec, 0, 2 * kPi, 0.02, 1e-6);
  REQUIRE(intervals.size() == 1);
  CHECK(std::abs(intervals[0].first - kPi / 2) < 1e-6);
  CHECK(std::abs(intervals[0].second - 3 * kPi / 2) < 1e-6);
}

TEST_CASE("interval extraction under device noise") {
  SweepSpec noisy;
  noisy.base.noise = true;
  noisy.base.table = builtin_ibmqx4_table();
  const auto intervals = find_witness_interval(noisy, 0, 2 * kPi, 0.02, 1e-6);
  REQUIRE(intervals.size() == 1);
  CHECK(std::abs(intervals[0].first - 1.8730303561961377) < 2e-6);
  CHECK(std::abs(intervals[0].second - 4.410154950983237) < 2e-6);
  // strictly inside the noiseless window
  CHECK(intervals[0].first > kPi / 2);
  CHECK(intervals[0].second < 3 * kPi / 2);
}

TEST_CASE("strong uniform depolarizing closes the window entirely") {
  SweepSpec heavy;
  heavy.base.noise = true;
  heavy.base.table = homogeneous_table(4, 0.05);
  CHECK(find_witness_interval(heavy, 0, 2 * kPi, 0.02, 1e-6).empty());

  SweepSpec mild;
  mild.base.noise = true;
  mild.base.table = homogeneous_table(4, 0.01);
  const auto intervals = find_witness_interval(mild, 0, 2 * kPi, 0.02, 1e-6);
  REQUIRE(intervals.size() == 1);
  CHECK(std::abs(intervals[0].first - 1.737831674309227) < 2e-6);
  CHECK(std::abs(intervals[0].second - 4.545353632870369) < 2e-6);
}

TEST_CASE("interval extraction under the geometry conventions") {
  SweepSpec sgn;
  sgn.convention = Convention::SignedPhysical;
  sgn.physical = PhysicalConfig{};
  const auto si = find_witness_interval(sgn, 0, 2 * kPi, 0.02, 1e-6);
  REQUIRE(si.size() == 1);
  CHECK(std::abs(si[0].first - 1.0072962012277467) < 2e-6);
  CHECK(std::abs(si[0].second - 2.742571956424548) < 2e-6);

  SweepSpec mag;
  mag.convention = Convention::Magnitudes;
  mag.physical = PhysicalConfig{};
  const auto mi = find_witness_interval(mag, 0, 2 * kPi, 0.02, 1e-6);
  REQUIRE(mi.size() == 1);
  CHECK(std::abs(mi[0].first - 2.470839755247536) < 2e-6);
  CHECK(std::abs(mi[0].second - 6.231622594855321) < 2e-6);
}

TEST_CASE("interval extraction rejects bad requests") {
  SweepSpec spec;
  spec.base.mode = Mode::Shots;
  CHECK_THROWS_AS(find_witness_interval(spec, 0, 2 * kPi, 0.02, 1e-6), std::invalid_argument);

  SweepSpec ok;
  CHECK_THROWS_AS(find_witness_interval(ok, 1.0, 0.0, 0.02, 1e-6), std::invalid_argument);
  CHECK_THROWS_AS(find_witness_interval(ok, 0.0, 1.0, 0.0, 1e-6), std::invalid_argument);
  CHECK_THROWS_AS(find_witness_interval(ok, 0.0, 1.0, 0.02, 0.0), std::invalid_argument);
}

TEST_CASE("a range that never crosses threshold yields nothing") {
  SweepSpec spec;
  CHECK(find_witness_interval(spec, 0.0, 0.5, 0.02, 1e-6).empty());
}
