#pragma once

#include <array>

#include "gravsim/complexmat.hpp"

namespace gravsim {

enum class GateKind { H, X, S, Sdg, Rz, CX, Diag4 };

// Fixed gate alphabet. Rz(theta) = diag(1, e^{i theta}).
//
// Two-qubit matrices index the basis as |t0 t1> = 00,01,10,11 with the FIRST
// target as the high bit; CX has targets (control, target), Diag4 carries its
// four phases in that same slot order.
struct Gate {
  GateKind kind = GateKind::H;
  double theta = 0.0;              // Rz
  std::array<double, 4> phases{};  // Diag4

  int arity() const;
  CMat matrix() const;

  static Gate h();
  static Gate x();
  static Gate s();
  static Gate sdg();
  static Gate rz(double theta);
  static Gate cx();
  static Gate diag4(double p00, double p01, double p10, double p11);
};

}  // namespace gravsim
