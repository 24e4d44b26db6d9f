#include "gravsim/circuit.hpp"

#include <cmath>
#include <stdexcept>

namespace gravsim {

Circuit::Circuit(int n) : num_qubits(n) {
  if (n < 1) throw std::invalid_argument("Circuit: qubit count must be positive");
}

void Circuit::append(const Gate& g, std::vector<int> targets, std::string label) {
  if (static_cast<int>(targets.size()) != g.arity())
    throw std::invalid_argument("Circuit::append: target count does not match gate arity");
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (targets[i] < 0 || targets[i] >= num_qubits)
      throw std::invalid_argument("Circuit::append: target out of range");
    for (std::size_t j = 0; j < i; ++j)
      if (targets[i] == targets[j])
        throw std::invalid_argument("Circuit::append: duplicate target");
  }
  ops.push_back(CircuitOp{g, std::move(targets), std::move(label)});
}

void Circuit::measure(int qubit, int cbit) {
  if (qubit < 0 || qubit >= num_qubits)
    throw std::invalid_argument("Circuit::measure: qubit out of range");
  if (cbit < 0) throw std::invalid_argument("Circuit::measure: classical bit must be >= 0");
  measurements.push_back(Measurement{qubit, cbit});
}

Circuit decompose_diag4(double p00, double p01, double p10, double p11) {
  for (double p : {p00, p01, p10, p11})
    if (!std::isfinite(p)) throw std::invalid_argument("decompose_diag4: phases must be finite");

  Circuit c(2);
  // Exactness of each block: with Rz = diag(1, e^{i t}) the sequence
  // Rz(p/2) on control, Rz(p/2) on target, CX, Rz(-p/2) on target, CX equals
  // diag(1,1,1,e^{i p}) with no scalar left over, so the accumulated global
  // phase of the whole decomposition is zero.
  c.global_phase = 0.0;

  struct Block {
    int x;  // bit of qubit 0 the block phases
    int y;  // bit of qubit 1
    double p;
    const char* label;
  };
  const Block blocks[4] = {
      {0, 0, p00, "c"}, {0, 1, p01, "d"}, {1, 0, p10, "e"}, {1, 1, p11, "f"}};

  for (const Block& blk : blocks) {
    const auto conjugate = [&] {
      if (blk.x == 0) c.append(Gate::x(), {0}, blk.label);
      if (blk.y == 0) c.append(Gate::x(), {1}, blk.label);
    };
    conjugate();
    c.append(Gate::rz(blk.p / 2), {0}, blk.label);
    c.append(Gate::rz(blk.p / 2), {1}, blk.label);
    c.append(Gate::cx(), {0, 1}, blk.label);
    c.append(Gate::rz(-blk.p / 2), {1}, blk.label);
    c.append(Gate::cx(), {0, 1}, blk.label);
    conjugate();
  }
  return c;
}

namespace {

CMat embed_gate(const CMat& u, const std::vector<int>& targets, int num_qubits) {
  const int k = static_cast<int>(targets.size());
  const int dl = 1 << k;
  const int dim = 1 << num_qubits;
  CMat out(dim, dim);
  for (int i = 0; i < dim; ++i) {
    int local = 0;
    int base = i;
    for (int j = 0; j < k; ++j) {
      if ((i >> targets[j]) & 1) {
        local |= 1 << (k - 1 - j);
        base &= ~(1 << targets[j]);
      }
    }
    for (int lp = 0; lp < dl; ++lp) {
      int ip = base;
      for (int j = 0; j < k; ++j)
        if ((lp >> (k - 1 - j)) & 1) ip |= 1 << targets[j];
      out.at(ip, i) += u.at(lp, local);
    }
  }
  return out;
}

}  // namespace

CMat composed_unitary(const Circuit& c) {
  if (c.num_qubits > 6)
    throw std::invalid_argument("composed_unitary: unsupported above 6 qubits");
  CMat u = CMat::identity(1 << c.num_qubits);
  for (const CircuitOp& op : c.ops)
    u = mul(embed_gate(op.gate.matrix(), op.targets, c.num_qubits), u);
  return u;
}

void append_basis_change(Circuit& c, int qubit, char basis) {
  if (qubit < 0 || qubit >= c.num_qubits)
    throw std::invalid_argument("append_basis_change: qubit out of range");
  switch (basis) {
    case 'x':
      c.append(Gate::h(), {qubit}, "basis");
      break;
    case 'y':
      c.append(Gate::sdg(), {qubit}, "basis");
      c.append(Gate::h(), {qubit}, "basis");
      break;
    case 'z':
      break;
    default:
      throw std::invalid_argument("append_basis_change: basis must be x, y or z");
  }
}

void apply_circuit(const Circuit& c, PureState& st) {
  if (st.num_qubits != c.num_qubits)
    throw std::invalid_argument("apply_circuit: qubit count mismatch");
  for (const CircuitOp& op : c.ops) apply_gate(st, op.gate, op.targets);
}

void apply_circuit(const Circuit& c, MixedState& st) {
  if (st.num_qubits != c.num_qubits)
    throw std::invalid_argument("apply_circuit: qubit count mismatch");
  for (const CircuitOp& op : c.ops) apply_gate(st, op.gate, op.targets);
}

void append_circuit(Circuit& dst, const Circuit& src, const std::vector<int>& qubit_map) {
  if (static_cast<int>(qubit_map.size()) != src.num_qubits)
    throw std::invalid_argument("append_circuit: qubit map size mismatch");
  for (const CircuitOp& op : src.ops) {
    std::vector<int> mapped(op.targets.size());
    for (std::size_t i = 0; i < op.targets.size(); ++i) mapped[i] = qubit_map[op.targets[i]];
    dst.append(op.gate, std::move(mapped), op.label);
  }
  for (const Measurement& m : src.measurements) dst.measure(qubit_map[m.qubit], m.cbit);
  dst.global_phase += src.global_phase;
}

}  // namespace gravsim
