#include "gravsim/complexmat.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gravsim {

CMat CMat::identity(int n) {
  CMat m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
  return m;
}

CMat mul(const CMat& x, const CMat& y) {
  if (x.cols != y.rows) throw std::invalid_argument("mul: dimension mismatch");
  CMat out(x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i) {
    for (int k = 0; k < x.cols; ++k) {
      const cd v = x.at(i, k);
      if (v.real() == 0.0 && v.imag() == 0.0) continue;
      for (int j = 0; j < y.cols; ++j) out.at(i, j) += v * y.at(k, j);
    }
  }
  return out;
}

CMat adjoint(const CMat& m) {
  CMat out(m.cols, m.rows);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) out.at(j, i) = std::conj(m.at(i, j));
  return out;
}

CMat conj_elements(const CMat& m) {
  CMat out(m.rows, m.cols);
  for (std::size_t i = 0; i < m.a.size(); ++i) out.a[i] = std::conj(m.a[i]);
  return out;
}

CMat kron(const CMat& x, const CMat& y) {
  CMat out(x.rows * y.rows, x.cols * y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int j = 0; j < x.cols; ++j)
      for (int k = 0; k < y.rows; ++k)
        for (int l = 0; l < y.cols; ++l)
          out.at(i * y.rows + k, j * y.cols + l) = x.at(i, j) * y.at(k, l);
  return out;
}

cd trace(const CMat& m) {
  if (m.rows != m.cols) throw std::invalid_argument("trace: square matrix required");
  cd t = 0;
  for (int i = 0; i < m.rows; ++i) t += m.at(i, i);
  return t;
}

double max_abs_diff(const CMat& x, const CMat& y) {
  if (x.rows != y.rows || x.cols != y.cols)
    throw std::invalid_argument("max_abs_diff: dimension mismatch");
  double worst = 0;
  for (std::size_t i = 0; i < x.a.size(); ++i) worst = std::max(worst, std::abs(x.a[i] - y.a[i]));
  return worst;
}

std::vector<double> hermitian_eigenvalues(CMat m) {
  if (m.rows != m.cols) throw std::invalid_argument("hermitian_eigenvalues: square matrix required");
  const int n = m.rows;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0;
    double scale = 0;
    for (int p = 0; p < n; ++p) {
      scale += std::abs(m.at(p, p));
      for (int q = p + 1; q < n; ++q) off += std::norm(m.at(p, q));
    }
    if (off <= 1e-30 * std::max(1.0, scale * scale)) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const cd apq = m.at(p, q);
        const double abs_apq = std::abs(apq);
        if (abs_apq < 1e-300) continue;
        // Absorb the pivot's phase into the rotation so the remaining 2x2
        // problem is real symmetric, then a classic Jacobi rotation.
        const cd f = apq / abs_apq;
        const double app = m.at(p, p).real();
        const double aqq = m.at(q, q).real();
        const double tau = (aqq - app) / (2.0 * abs_apq);
        const double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // J columns: (f c, -s) and (f s, c); m <- J^H m J
        for (int k = 0; k < n; ++k) {
          const cd mkp = m.at(k, p), mkq = m.at(k, q);
          m.at(k, p) = mkp * (f * c) - mkq * s;
          m.at(k, q) = mkp * (f * s) + mkq * c;
        }
        for (int k = 0; k < n; ++k) {
          const cd mpk = m.at(p, k), mqk = m.at(q, k);
          m.at(p, k) = std::conj(f) * c * mpk - s * mqk;
          m.at(q, k) = std::conj(f) * s * mpk + c * mqk;
        }
      }
    }
  }
  std::vector<double> ev(n);
  for (int i = 0; i < n; ++i) ev[i] = m.at(i, i).real();
  std::sort(ev.begin(), ev.end());
  return ev;
}

}  // namespace gravsim
