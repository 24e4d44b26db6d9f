#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace gravsim {

using cd = std::complex<double>;

// Dense row-major complex matrix. Everything in this project is at most
// 64x64 (6 qubits), so no attempt is made to be clever.
struct CMat {
  int rows = 0;
  int cols = 0;
  std::vector<cd> a;

  CMat() = default;
  CMat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c) {}

  cd& at(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
  const cd& at(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }

  static CMat identity(int n);
};

CMat mul(const CMat& x, const CMat& y);
CMat adjoint(const CMat& m);
CMat conj_elements(const CMat& m);
CMat kron(const CMat& x, const CMat& y);
cd trace(const CMat& m);
double max_abs_diff(const CMat& x, const CMat& y);

// Eigenvalues of a Hermitian matrix, ascending. Cyclic complex Jacobi.
std::vector<double> hermitian_eigenvalues(CMat m);

}  // namespace gravsim
