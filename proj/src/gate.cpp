#include "gravsim/gate.hpp"

#include <cmath>
#include <stdexcept>

namespace gravsim {

namespace {

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw std::invalid_argument(std::string(what) + " must be finite");
}

}  // namespace

int Gate::arity() const {
  switch (kind) {
    case GateKind::CX:
    case GateKind::Diag4:
      return 2;
    default:
      return 1;
  }
}

CMat Gate::matrix() const {
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  switch (kind) {
    case GateKind::H: {
      CMat m(2, 2);
      m.at(0, 0) = inv_sqrt2;
      m.at(0, 1) = inv_sqrt2;
      m.at(1, 0) = inv_sqrt2;
      m.at(1, 1) = -inv_sqrt2;
      return m;
    }
    case GateKind::X: {
      CMat m(2, 2);
      m.at(0, 1) = 1.0;
      m.at(1, 0) = 1.0;
      return m;
    }
    case GateKind::S: {
      CMat m(2, 2);
      m.at(0, 0) = 1.0;
      m.at(1, 1) = cd(0.0, 1.0);
      return m;
    }
    case GateKind::Sdg: {
      CMat m(2, 2);
      m.at(0, 0) = 1.0;
      m.at(1, 1) = cd(0.0, -1.0);
      return m;
    }
    case GateKind::Rz: {
      CMat m(2, 2);
      m.at(0, 0) = 1.0;
      m.at(1, 1) = std::polar(1.0, theta);
      return m;
    }
    case GateKind::CX: {
      CMat m(4, 4);
      m.at(0, 0) = 1.0;
      m.at(1, 1) = 1.0;
      m.at(2, 3) = 1.0;
      m.at(3, 2) = 1.0;
      return m;
    }
    case GateKind::Diag4: {
      CMat m(4, 4);
      for (int i = 0; i < 4; ++i) m.at(i, i) = std::polar(1.0, phases[i]);
      return m;
    }
  }
  throw std::logic_error("unreachable gate kind");
}

Gate Gate::h() { return Gate{GateKind::H, 0.0, {}}; }
Gate Gate::x() { return Gate{GateKind::X, 0.0, {}}; }
Gate Gate::s() { return Gate{GateKind::S, 0.0, {}}; }
Gate Gate::sdg() { return Gate{GateKind::Sdg, 0.0, {}}; }

Gate Gate::rz(double theta) {
  require_finite(theta, "Rz angle");
  return Gate{GateKind::Rz, theta, {}};
}

Gate Gate::cx() { return Gate{GateKind::CX, 0.0, {}}; }

Gate Gate::diag4(double p00, double p01, double p10, double p11) {
  require_finite(p00, "Diag4 phase");
  require_finite(p01, "Diag4 phase");
  require_finite(p10, "Diag4 phase");
  require_finite(p11, "Diag4 phase");
  return Gate{GateKind::Diag4, 0.0, {p00, p01, p10, p11}};
}

}  // namespace gravsim
