#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "gravsim/errors.hpp"
#include "gravsim/noise.hpp"
#include "gravsim/rng.hpp"
#include "gravsim/state.hpp"

using namespace gravsim;

namespace {

MixedState plus_state() {
  MixedState st = init_zero_mixed(1);
  apply_gate(st, Gate::h(), {0});
  return st;
}

MixedState random_mixture(int n, std::uint64_t seed) {
  SplitMix64 rng{seed};
  MixedState acc;
  acc.num_qubits = n;
  acc.data.assign(std::size_t(1) << (2 * n), cd{});
  for (int term = 0; term < 3; ++term) {
    PureState psi = init_zero(n);
    double nrm = 0;
    for (auto& a : psi.amps) {
      a = cd{rng.next_double() * 2 - 1, rng.next_double() * 2 - 1};
      nrm += std::norm(a);
    }
    for (auto& a : psi.amps) a /= std::sqrt(nrm);
    const double weight = (term == 0) ? 0.5 : 0.25;
    const MixedState rho = to_mixed(psi);
    for (std::size_t i = 0; i < acc.data.size(); ++i) acc.data[i] += weight * rho.data[i];
  }
  return acc;
}

}  // namespace

TEST_CASE("builtin calibration table carries the device values") {
  const CalibrationTable t = builtin_ibmqx4_table();
  REQUIRE(t.per_qubit.size() == 4);

  CHECK(t.per_qubit[0].t1_us == 50.81);
  CHECK(t.per_qubit[0].t2_us == 14.70);
  CHECK(t.per_qubit[0].gate_error == 0.86e-3);
  CHECK(t.per_qubit[0].readout_error == 4.80e-2);

  CHECK(t.per_qubit[1].t1_us == 50.00);
  CHECK(t.per_qubit[1].t2_us == 64.60);
  CHECK(t.per_qubit[1].gate_error == 1.46e-3);
  CHECK(t.per_qubit[1].readout_error == 5.30e-2);

  CHECK(t.per_qubit[2].t1_us == 47.90);
  CHECK(t.per_qubit[2].t2_us == 45.00);
  CHECK(t.per_qubit[2].gate_error == 1.29e-3);
  CHECK(t.per_qubit[2].readout_error == 9.80e-2);

  CHECK(t.per_qubit[3].t1_us == 37.40);
  CHECK(t.per_qubit[3].t2_us == 15.10);
  CHECK(t.per_qubit[3].gate_error == 3.44e-3);
  CHECK(t.per_qubit[3].readout_error == 5.70e-2);

  CHECK(t.single_qubit_gate_ns == 60.0);
  CHECK(t.two_qubit_gate_ns == 300.0);
}

TEST_CASE("depolarizing shrinks coherences by 1 - 4p/3") {
  for (const double p : {0.0, 0.01, 0.05, 0.3, 0.75}) {
    MixedState st = plus_state();
    apply_depolarizing(st, 0, p);
    const double sx = expectation(st, PauliString{"X", {0}});
    CHECK(sx == doctest::Approx(1.0 - 4.0 * p / 3.0).epsilon(1e-12));
    CHECK(trace_real(st) == doctest::Approx(1.0).epsilon(1e-12));
  }

  MixedState st = plus_state();
  CHECK_THROWS_AS(apply_depolarizing(st, 0, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(apply_depolarizing(st, 0, 1.1), std::invalid_argument);
  CHECK_THROWS_AS(apply_depolarizing(st, 3, 0.1), std::out_of_range);
}

TEST_CASE("depolarizing at p=0 is exactly the identity channel") {
  MixedState st = random_mixture(3, 21);
  MixedState copy = st;
  apply_depolarizing(copy, 1, 0.0);
  CHECK(max_abs_diff(st.to_matrix(), copy.to_matrix()) < 1e-15);
}

TEST_CASE("channels preserve trace and positivity and never raise purity") {
  MixedState st = random_mixture(2, 5);
  double last_purity = purity(st);
  for (int round = 0; round < 10; ++round) {
    apply_depolarizing(st, round % 2, 0.04);
    CHECK(trace_real(st) == doctest::Approx(1.0).epsilon(1e-10));
    const double pur = purity(st);
    CHECK(pur <= last_purity + 1e-12);
    last_purity = pur;
  }
  const auto eigs = hermitian_eigenvalues(st.to_matrix());
  for (const double e : eigs) CHECK(e >= -1e-8);
}

TEST_CASE("gate-error hook hits every target once") {
  const CalibrationTable table = homogeneous_table(2, 0.05);

  MixedState a = init_zero_mixed(2);
  apply_gate(a, Gate::h(), {0});
  apply_gate(a, Gate::h(), {1});
  apply_depolarizing_after_gate(a, {0, 1}, table);

  MixedState b = init_zero_mixed(2);
  apply_gate(b, Gate::h(), {0});
  apply_gate(b, Gate::h(), {1});
  apply_depolarizing(b, 0, 0.05);
  apply_depolarizing(b, 1, 0.05);

  CHECK(max_abs_diff(a.to_matrix(), b.to_matrix()) < 1e-14);

  MixedState c = init_zero_mixed(2);
  CHECK_THROWS_AS(apply_depolarizing_after_gate(c, {1}, homogeneous_table(1, 0.0)), ConfigError);
}

TEST_CASE("analytic readout confusion") {
  CalibrationTable table = homogeneous_table(2, 0.0);

  SUBCASE("zero rate is the identity") {
    const auto out = apply_readout_analytic({0.1, 0.2, 0.3, 0.4}, {0, 1}, table);
    CHECK(out == std::vector<double>{0.1, 0.2, 0.3, 0.4});
  }

  SUBCASE("a deterministic bit degrades to 1 - 2r") {
    table.per_qubit[0].readout_error = 0.048;
    const auto out = apply_readout_analytic({1.0, 0.0}, {0}, table);
    CHECK(out[0] == doctest::Approx(0.952).epsilon(1e-15));
    CHECK(out[1] == doctest::Approx(0.048).epsilon(1e-15));
    CHECK(out[0] - out[1] == doctest::Approx(0.904).epsilon(1e-14));
  }

  SUBCASE("rate one inverts the bit deterministically") {
    table.per_qubit[1].readout_error = 1.0;
    // outcome bit 0 reads qubit 1
    const auto out = apply_readout_analytic({1.0, 0.0}, {1}, table);
    CHECK(out[0] == doctest::Approx(0.0));
    CHECK(out[1] == doctest::Approx(1.0));
  }

  SUBCASE("each outcome bit uses its own qubit's rate") {
    table.per_qubit[0].readout_error = 0.1;
    table.per_qubit[1].readout_error = 0.0;
    const auto out = apply_readout_analytic({1.0, 0.0, 0.0, 0.0}, {0, 1}, table);
    CHECK(out[0] == doctest::Approx(0.9));
    CHECK(out[1] == doctest::Approx(0.1));
    CHECK(out[2] == doctest::Approx(0.0));
    CHECK(out[3] == doctest::Approx(0.0));
  }

  SUBCASE("probability mass is conserved") {
    table.per_qubit[0].readout_error = 0.07;
    table.per_qubit[1].readout_error = 0.12;
    const auto out = apply_readout_analytic({0.4, 0.3, 0.2, 0.1}, {0, 1}, table);
    double sum = 0;
    for (const double p : out) sum += p;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("stochastic readout flips are seeded and conserve shots") {
  CountTable counts;
  counts.shots = 2000;
  counts.entries = {{"00", 1000}, {"11", 1000}};

  CalibrationTable quiet = homogeneous_table(2, 0.0);
  const CountTable same = apply_readout_stochastic(counts, {0, 1}, quiet, 42);
  CHECK(same.entries == counts.entries);

  CalibrationTable noisy = quiet;
  noisy.per_qubit[0].readout_error = 0.2;
  noisy.per_qubit[1].readout_error = 0.2;
  const CountTable a = apply_readout_stochastic(counts, {0, 1}, noisy, 42);
  const CountTable b = apply_readout_stochastic(counts, {0, 1}, noisy, 42);
  CHECK(a.entries == b.entries);
  std::uint64_t total = 0;
  for (const auto& [key, n] : a.entries) total += n;
  CHECK(total == 2000);
  CHECK(a.entries != counts.entries);

  CalibrationTable certain = quiet;
  certain.per_qubit[0].readout_error = 1.0;
  certain.per_qubit[1].readout_error = 1.0;
  const CountTable flipped = apply_readout_stochastic(counts, {0, 1}, certain, 7);
  CHECK(flipped.entries.at("11") == 1000);
  CHECK(flipped.entries.at("00") == 1000);

  CalibrationTable half = quiet;
  half.per_qubit[1].readout_error = 1.0;
  // outcome bit 1 (left character) reads qubit 1
  const CountTable left = apply_readout_stochastic(counts, {0, 1}, half, 7);
  CHECK(left.entries.at("10") == 1000);
  CHECK(left.entries.at("01") == 1000);
}

TEST_CASE("amplitude damping follows the T1 exponential") {
  QubitCalibration cal;
  cal.t1_us = 50.0;
  cal.t2_us = 70.0;

  MixedState st = init_zero_mixed(1);
  apply_gate(st, Gate::x(), {0});
  // dwell for exactly T1
  apply_damping(st, 0, 50.0 * 1000.0, cal, nullptr);
  CHECK(st.entry(1, 1).real() == doctest::Approx(std::exp(-1.0)).epsilon(1e-6));
  CHECK(trace_real(st) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("coherence decays on the T2 exponential") {
  QubitCalibration cal;
  cal.t1_us = 1000.0;
  cal.t2_us = 50.0;

  MixedState st = plus_state();
  apply_damping(st, 0, 50.0 * 1000.0, cal, nullptr);
  const double sx = expectation(st, PauliString{"X", {0}});
  CHECK(std::abs(sx) == doctest::Approx(std::exp(-1.0)).epsilon(1e-6));
}

TEST_CASE("t2 is clamped to twice t1") {
  QubitCalibration cal;
  cal.t1_us = 10.0;
  cal.t2_us = 100.0;  // unphysical

  std::vector<std::string> warnings;
  MixedState st = plus_state();
  apply_damping(st, 0, 5000.0, cal, &warnings);
  REQUIRE(warnings.size() == 1);

  QubitCalibration clamped = cal;
  clamped.t2_us = 20.0;
  MixedState ref = plus_state();
  apply_damping(ref, 0, 5000.0, clamped, nullptr);
  CHECK(max_abs_diff(st.to_matrix(), ref.to_matrix()) < 1e-14);
}

TEST_CASE("damping for zero time is the identity") {
  QubitCalibration cal;
  cal.t1_us = 50.0;
  cal.t2_us = 60.0;
  MixedState st = random_mixture(2, 9);
  MixedState copy = st;
  apply_damping(copy, 0, 0.0, cal, nullptr);
  CHECK(max_abs_diff(st.to_matrix(), copy.to_matrix()) < 1e-14);
}

TEST_CASE("damping preserves trace and positivity") {
  QubitCalibration cal;
  cal.t1_us = 40.0;
  cal.t2_us = 30.0;
  MixedState st = random_mixture(2, 77);
  apply_damping(st, 0, 111.0, cal, nullptr);
  apply_damping(st, 1, 222.0, cal, nullptr);
  CHECK(trace_real(st) == doctest::Approx(1.0).epsilon(1e-10));
  for (const double e : hermitian_eigenvalues(st.to_matrix())) CHECK(e >= -1e-8);
}

TEST_CASE("damping hook picks the duration by gate width") {
  CalibrationTable table = builtin_ibmqx4_table();

  MixedState a = init_zero_mixed(4);
  apply_gate(a, Gate::x(), {2});
  apply_damping_after_gate(a, {2}, table, false, nullptr);

  MixedState b = init_zero_mixed(4);
  apply_gate(b, Gate::x(), {2});
  apply_damping(b, 2, table.single_qubit_gate_ns, table.per_qubit[2], nullptr);
  CHECK(max_abs_diff(a.to_matrix(), b.to_matrix()) < 1e-14);

  MixedState c = init_zero_mixed(4);
  apply_gate(c, Gate::x(), {2});
  apply_damping_after_gate(c, {2}, table, true, nullptr);
  // the two-qubit duration damps harder
  CHECK(c.entry(4, 4).real() < b.entry(4, 4).real());
}

TEST_CASE("calibration csv parsing") {
  const std::string good =
      "qubit,t1_us,t2_us,gate_error,readout_error\n"
      "0,50.0,60.0,0.001,0.02\n"
      "1,40.0,30.0,0.002,0.03\n";
  std::istringstream in(good);
  const CalibrationTable t = parse_calibration_csv(in, "test.csv");
  REQUIRE(t.per_qubit.size() == 2);
  CHECK(t.per_qubit[0].t1_us == 50.0);
  CHECK(t.per_qubit[1].readout_error == 0.03);

  const auto expect_config_error = [](const std::string& text) {
    std::istringstream bad(text);
    CHECK_THROWS_AS(parse_calibration_csv(bad, "bad.csv"), ConfigError);
  };

  expect_config_error("");
  expect_config_error("qubit,t1,t2,ge,re\n0,1,2,3,4\n");
  expect_config_error("qubit,t1_us,t2_us,gate_error,readout_error\n");
  expect_config_error("qubit,t1_us,t2_us,gate_error,readout_error\n0,50,60,0.001\n");
  expect_config_error("qubit,t1_us,t2_us,gate_error,readout_error\n1,50,60,0.001,0.02\n");
  expect_config_error("qubit,t1_us,t2_us,gate_error,readout_error\n0,abc,60,0.001,0.02\n");
  expect_config_error("qubit,t1_us,t2_us,gate_error,readout_error\n0,50,60,1.5,0.02\n");
  expect_config_error("qubit,t1_us,t2_us,gate_error,readout_error\n0,50,60,0.001,-0.1\n");

  // line numbers land in the message
  std::istringstream bad_line("qubit,t1_us,t2_us,gate_error,readout_error\n0,50,60,x,0.02\n");
  try {
    parse_calibration_csv(bad_line, "cal.csv");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("cal.csv") != std::string::npos);
    CHECK(msg.find("2") != std::string::npos);
  }

  CHECK_THROWS_AS(load_calibration_csv("/nonexistent/cal.csv"), ConfigError);
}

TEST_CASE("homogeneous table has quiet readout and unlimited coherence") {
  const CalibrationTable t = homogeneous_table(4, 0.02);
  REQUIRE(t.per_qubit.size() == 4);
  for (const auto& q : t.per_qubit) {
    CHECK(q.gate_error == 0.02);
    CHECK(q.readout_error == 0.0);
  }
}
