#include "gravsim/state.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "gravsim/rng.hpp"

namespace gravsim {

namespace {

void check_qubit_count(int num_qubits) {
  if (num_qubits < 1 || num_qubits > 12)
    throw std::invalid_argument("qubit count must be between 1 and 12");
}

void check_indices(int num_qubits, const std::vector<int>& qs, const char* what) {
  if (qs.empty()) throw std::invalid_argument(std::string(what) + ": no qubits given");
  for (std::size_t i = 0; i < qs.size(); ++i) {
    if (qs[i] < 0 || qs[i] >= num_qubits)
      throw std::invalid_argument(std::string(what) + ": qubit index out of range");
    for (std::size_t j = 0; j < i; ++j)
      if (qs[i] == qs[j]) throw std::invalid_argument(std::string(what) + ": duplicate qubit index");
  }
}

std::vector<int> shift_indices(const std::vector<int>& qs, int offset) {
  std::vector<int> out(qs.size());
  for (std::size_t i = 0; i < qs.size(); ++i) out[i] = qs[i] + offset;
  return out;
}

// Evaluates P|j> = c |m(j)> for a Pauli string in one pass over the factors.
void pauli_action(const PauliString& obs, std::size_t j, std::size_t& mj, cd& c) {
  mj = j;
  c = cd(1.0, 0.0);
  for (std::size_t i = 0; i < obs.qubits.size(); ++i) {
    const std::size_t bit = (j >> obs.qubits[i]) & 1u;
    switch (obs.factors[i]) {
      case 'I':
        break;
      case 'X':
        mj ^= std::size_t(1) << obs.qubits[i];
        break;
      case 'Y':
        mj ^= std::size_t(1) << obs.qubits[i];
        c *= bit ? cd(0.0, -1.0) : cd(0.0, 1.0);
        break;
      case 'Z':
        if (bit) c = -c;
        break;
      default:
        throw std::invalid_argument("PauliString factors must be from IXYZ");
    }
  }
}

void check_pauli(const PauliString& obs, int num_qubits) {
  if (obs.factors.size() != obs.qubits.size())
    throw std::invalid_argument("PauliString: factor count must equal index count");
  check_indices(num_qubits, obs.qubits, "expectation");
  for (char f : obs.factors)
    if (f != 'I' && f != 'X' && f != 'Y' && f != 'Z')
      throw std::invalid_argument("PauliString factors must be from IXYZ");
}

// Places bit j of `value` at position list[j] of the index.
std::size_t place_bits(std::size_t value, const std::vector<int>& list) {
  std::size_t out = 0;
  for (std::size_t j = 0; j < list.size(); ++j)
    if ((value >> j) & 1u) out |= std::size_t(1) << list[j];
  return out;
}

std::vector<int> complement_qubits(int num_qubits, const std::vector<int>& keep) {
  std::vector<bool> kept(num_qubits, false);
  for (int q : keep) kept[q] = true;
  std::vector<int> env;
  for (int q = 0; q < num_qubits; ++q)
    if (!kept[q]) env.push_back(q);
  return env;
}

}  // namespace

CMat MixedState::to_matrix() const {
  const int dim = 1 << num_qubits;
  CMat m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m.at(i, j) = entry(i, j);
  return m;
}

PureState init_zero(int num_qubits) {
  check_qubit_count(num_qubits);
  PureState st;
  st.num_qubits = num_qubits;
  st.amps.assign(std::size_t(1) << num_qubits, cd(0.0, 0.0));
  st.amps[0] = 1.0;
  return st;
}

MixedState init_zero_mixed(int num_qubits) {
  check_qubit_count(num_qubits);
  MixedState st;
  st.num_qubits = num_qubits;
  st.data.assign(std::size_t(1) << (2 * num_qubits), cd(0.0, 0.0));
  st.data[0] = 1.0;
  return st;
}

MixedState to_mixed(const PureState& psi) {
  MixedState st;
  st.num_qubits = psi.num_qubits;
  const std::size_t dim = psi.amps.size();
  st.data.assign(dim * dim, cd(0.0, 0.0));
  for (std::size_t j = 0; j < dim; ++j) {
    const cd bra = std::conj(psi.amps[j]);
    for (std::size_t i = 0; i < dim; ++i) st.data[i + (j << psi.num_qubits)] = psi.amps[i] * bra;
  }
  return st;
}

void apply_local_matrix(std::vector<cd>& amps, int num_qubits, const CMat& u,
                        const std::vector<int>& targets) {
  const int k = static_cast<int>(targets.size());
  if (k < 1 || k > 2) throw std::invalid_argument("apply_local_matrix: 1 or 2 targets supported");
  const int dl = 1 << k;
  if (u.rows != dl || u.cols != dl)
    throw std::invalid_argument("apply_local_matrix: matrix size does not match target count");
  const std::size_t dim = std::size_t(1) << num_qubits;
  if (amps.size() != dim) throw std::invalid_argument("apply_local_matrix: state size mismatch");

  std::size_t tmask = 0;
  for (int t : targets) tmask |= std::size_t(1) << t;
  // offs[L]: local index L scattered onto the target bit positions
  // (targets[0] is the high bit of L).
  std::array<std::size_t, 4> offs{};
  for (int L = 0; L < dl; ++L) {
    std::size_t o = 0;
    for (int j = 0; j < k; ++j)
      if ((L >> (k - 1 - j)) & 1) o |= std::size_t(1) << targets[j];
    offs[L] = o;
  }

  std::array<cd, 4> in{}, out{};
  for (std::size_t base = 0; base < dim; ++base) {
    if (base & tmask) continue;
    for (int L = 0; L < dl; ++L) in[L] = amps[base | offs[L]];
    for (int r = 0; r < dl; ++r) {
      cd acc = 0;
      for (int c = 0; c < dl; ++c) acc += u.at(r, c) * in[c];
      out[r] = acc;
    }
    for (int L = 0; L < dl; ++L) amps[base | offs[L]] = out[L];
  }
}

void apply_gate(PureState& st, const Gate& g, const std::vector<int>& targets) {
  if (static_cast<int>(targets.size()) != g.arity())
    throw std::invalid_argument("applyGate: target count does not match gate arity");
  check_indices(st.num_qubits, targets, "applyGate");
  apply_local_matrix(st.amps, st.num_qubits, g.matrix(), targets);
}

void apply_gate(MixedState& st, const Gate& g, const std::vector<int>& targets) {
  if (static_cast<int>(targets.size()) != g.arity())
    throw std::invalid_argument("applyGate: target count does not match gate arity");
  check_indices(st.num_qubits, targets, "applyGate");
  const CMat u = g.matrix();
  // U rho U^dagger: U on the ket bits, conj(U) on the bra bits.
  apply_local_matrix(st.data, 2 * st.num_qubits, u, targets);
  apply_local_matrix(st.data, 2 * st.num_qubits, conj_elements(u),
                     shift_indices(targets, st.num_qubits));
}

double norm_sq(const PureState& st) {
  double n = 0;
  for (const cd& a : st.amps) n += std::norm(a);
  return n;
}

double trace_real(const MixedState& st) {
  double t = 0;
  const int dim = 1 << st.num_qubits;
  for (int i = 0; i < dim; ++i) t += st.entry(i, i).real();
  return t;
}

double purity(const MixedState& st) {
  // tr(rho^2) = sum_ij rho_ij rho_ji
  const int dim = 1 << st.num_qubits;
  cd acc = 0;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) acc += st.entry(i, j) * st.entry(j, i);
  return acc.real();
}

double expectation(const PureState& st, const PauliString& obs) {
  check_pauli(obs, st.num_qubits);
  cd acc = 0;
  for (std::size_t j = 0; j < st.amps.size(); ++j) {
    if (st.amps[j].real() == 0.0 && st.amps[j].imag() == 0.0) continue;
    std::size_t mj;
    cd c;
    pauli_action(obs, j, mj, c);
    acc += std::conj(st.amps[mj]) * c * st.amps[j];
  }
  return acc.real();
}

double expectation(const MixedState& st, const PauliString& obs) {
  check_pauli(obs, st.num_qubits);
  // P = sum_k c_k |m(k)><k|, so tr(rho P) = sum_k c_k rho[k][m(k)]
  const std::size_t dim = std::size_t(1) << st.num_qubits;
  cd acc = 0;
  for (std::size_t k = 0; k < dim; ++k) {
    std::size_t mk;
    cd c;
    pauli_action(obs, k, mk, c);
    acc += c * st.data[k + (mk << st.num_qubits)];
  }
  return acc.real();
}

std::vector<double> marginal_probabilities(const PureState& st, const std::vector<int>& measured) {
  check_indices(st.num_qubits, measured, "marginal_probabilities");
  std::vector<double> probs(std::size_t(1) << measured.size(), 0.0);
  for (std::size_t i = 0; i < st.amps.size(); ++i) {
    std::size_t o = 0;
    for (std::size_t j = 0; j < measured.size(); ++j)
      if ((i >> measured[j]) & 1u) o |= std::size_t(1) << j;
    probs[o] += std::norm(st.amps[i]);
  }
  return probs;
}

std::vector<double> marginal_probabilities(const MixedState& st, const std::vector<int>& measured) {
  check_indices(st.num_qubits, measured, "marginal_probabilities");
  std::vector<double> probs(std::size_t(1) << measured.size(), 0.0);
  const std::size_t dim = std::size_t(1) << st.num_qubits;
  for (std::size_t i = 0; i < dim; ++i) {
    std::size_t o = 0;
    for (std::size_t j = 0; j < measured.size(); ++j)
      if ((i >> measured[j]) & 1u) o |= std::size_t(1) << j;
    // clamp tiny negative diagonal noise from finite arithmetic
    probs[o] += std::max(0.0, st.data[i + (i << st.num_qubits)].real());
  }
  return probs;
}

std::string outcome_bitstring(std::size_t outcome, std::size_t num_measured) {
  std::string s(num_measured, '0');
  for (std::size_t p = 0; p < num_measured; ++p)
    if ((outcome >> (num_measured - 1 - p)) & 1u) s[p] = '1';
  return s;
}

CountTable sample_from_probabilities(const std::vector<double>& probs,
                                     const std::vector<int>& measured,
                                     std::uint64_t shots, std::uint64_t seed) {
  if (shots < 1) throw std::invalid_argument("sampleCounts: shots must be >= 1");
  if (probs.size() != (std::size_t(1) << measured.size()))
    throw std::invalid_argument("sample_from_probabilities: size mismatch");

  std::vector<double> cum(probs.size());
  double total = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    total += probs[i];
    cum[i] = total;
  }

  std::vector<std::uint64_t> tally(probs.size(), 0);
  SplitMix64 rng(seed);
  for (std::uint64_t s = 0; s < shots; ++s) {
    const double u = rng.next_double() * total;
    auto it = std::upper_bound(cum.begin(), cum.end(), u);
    std::size_t idx = static_cast<std::size_t>(it - cum.begin());
    if (idx >= tally.size()) idx = tally.size() - 1;
    ++tally[idx];
  }

  CountTable table;
  table.shots = shots;
  for (std::size_t o = 0; o < tally.size(); ++o)
    if (tally[o] > 0) table.entries[outcome_bitstring(o, measured.size())] = tally[o];
  return table;
}

CountTable sample_counts(const PureState& st, const std::vector<int>& measured,
                         std::uint64_t shots, std::uint64_t seed) {
  return sample_from_probabilities(marginal_probabilities(st, measured), measured, shots, seed);
}

CountTable sample_counts(const MixedState& st, const std::vector<int>& measured,
                         std::uint64_t shots, std::uint64_t seed) {
  return sample_from_probabilities(marginal_probabilities(st, measured), measured, shots, seed);
}

double fidelity_up_to_global_phase(const PureState& a, const PureState& b) {
  if (a.num_qubits != b.num_qubits || a.amps.size() != b.amps.size())
    throw std::invalid_argument("fidelity: dimension mismatch");
  cd ip = 0;
  for (std::size_t i = 0; i < a.amps.size(); ++i) ip += std::conj(a.amps[i]) * b.amps[i];
  return std::abs(ip);
}

MixedState reduced_state(const PureState& st, const std::vector<int>& keep) {
  check_indices(st.num_qubits, keep, "reducedState");
  const int k = static_cast<int>(keep.size());
  const std::vector<int> env = complement_qubits(st.num_qubits, keep);
  MixedState out;
  out.num_qubits = k;
  out.data.assign(std::size_t(1) << (2 * k), cd(0.0, 0.0));
  const std::size_t env_dim = std::size_t(1) << env.size();
  const std::size_t keep_dim = std::size_t(1) << k;
  for (std::size_t e = 0; e < env_dim; ++e) {
    const std::size_t ebits = place_bits(e, env);
    for (std::size_t r = 0; r < keep_dim; ++r) {
      const cd ar = st.amps[ebits | place_bits(r, keep)];
      if (ar.real() == 0.0 && ar.imag() == 0.0) continue;
      for (std::size_t rp = 0; rp < keep_dim; ++rp)
        out.data[r + (rp << k)] += ar * std::conj(st.amps[ebits | place_bits(rp, keep)]);
    }
  }
  return out;
}

MixedState reduced_state(const MixedState& st, const std::vector<int>& keep) {
  check_indices(st.num_qubits, keep, "reducedState");
  const int k = static_cast<int>(keep.size());
  const std::vector<int> env = complement_qubits(st.num_qubits, keep);
  MixedState out;
  out.num_qubits = k;
  out.data.assign(std::size_t(1) << (2 * k), cd(0.0, 0.0));
  const std::size_t env_dim = std::size_t(1) << env.size();
  const std::size_t keep_dim = std::size_t(1) << k;
  for (std::size_t e = 0; e < env_dim; ++e) {
    const std::size_t ebits = place_bits(e, env);
    for (std::size_t r = 0; r < keep_dim; ++r) {
      const std::size_t ir = ebits | place_bits(r, keep);
      for (std::size_t rp = 0; rp < keep_dim; ++rp) {
        const std::size_t irp = ebits | place_bits(rp, keep);
        out.data[r + (rp << k)] += st.data[ir + (irp << st.num_qubits)];
      }
    }
  }
  return out;
}

}  // namespace gravsim
