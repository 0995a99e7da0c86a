#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "hkpot/types.hpp"

namespace hkpot {

template <typename Real = double>
struct HermitianEigen {
  Eigen::Matrix<Real, Eigen::Dynamic, 1> values;  ///< descending
  CMatrixT<Real> vectors;                         ///< columns match `values`
  int sweeps = 0;
  bool converged = false;
};

/// Cyclic Jacobi diagonalization of a Hermitian matrix.
///
/// Each rotation first removes the phase of the pivot h_pq with a diagonal
/// unitary, then applies the real symmetric Jacobi rotation. Stops when the
/// off-diagonal Frobenius norm drops below 1e-14 times the initial norm, or
/// after `max_sweeps` sweeps. Only the upper triangle is trusted; the
/// input is symmetrized first.
template <typename Real = double>
HermitianEigen<Real> jacobi_eigen(const CMatrixT<Real>& h, bool want_vectors = true,
                                  int max_sweeps = 100, Real rel_tol = Real(1e-14)) {
  using Cx = std::complex<Real>;
  const Eigen::Index n = h.rows();
  CMatrixT<Real> a = (h + h.adjoint()) / Real(2);
  CMatrixT<Real> v = CMatrixT<Real>::Identity(n, n);

  auto off_norm = [&]() {
    Real s = 0;
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index i = 0; i < n; ++i)
        if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
  };

  HermitianEigen<Real> out;
  const Real initial = a.norm();
  const Real target = rel_tol * initial;
  out.converged = true;
  if (initial > 0 && off_norm() > target) {
    out.converged = false;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
      for (Eigen::Index p = 0; p < n - 1; ++p) {
        for (Eigen::Index q = p + 1; q < n; ++q) {
          const Real mag = std::abs(a(p, q));
          if (mag == Real(0)) continue;
          const Cx phase = a(p, q) / mag;  // e^{i phi}
          const Real app = a(p, p).real();
          const Real aqq = a(q, q).real();
          const Real theta = (aqq - app) / (Real(2) * mag);
          const Real t = (theta >= 0 ? Real(1) : Real(-1)) /
                         (std::abs(theta) + std::sqrt(theta * theta + Real(1)));
          const Real c = Real(1) / std::sqrt(t * t + Real(1));
          const Real s = t * c;
          // V on (p, q): [[c, s], [-s conj(phase), c conj(phase)]]
          const Cx vqp = -s * std::conj(phase);
          const Cx vqq = c * std::conj(phase);
          for (Eigen::Index k = 0; k < n; ++k) {  // a <- a V
            const Cx akp = a(k, p);
            const Cx akq = a(k, q);
            a(k, p) = akp * c + akq * vqp;
            a(k, q) = akp * s + akq * vqq;
          }
          for (Eigen::Index k = 0; k < n; ++k) {  // a <- V^* a
            const Cx apk = a(p, k);
            const Cx aqk = a(q, k);
            a(p, k) = c * apk + std::conj(vqp) * aqk;
            a(q, k) = s * apk + std::conj(vqq) * aqk;
          }
          a(p, q) = Cx(0);
          a(q, p) = Cx(0);
          a(p, p) = Cx(a(p, p).real(), 0);
          a(q, q) = Cx(a(q, q).real(), 0);
          if (want_vectors) {
            for (Eigen::Index k = 0; k < n; ++k) {
              const Cx vkp = v(k, p);
              const Cx vkq = v(k, q);
              v(k, p) = vkp * c + vkq * vqp;
              v(k, q) = vkp * s + vkq * vqq;
            }
          }
        }
      }
      out.sweeps = sweep + 1;
      if (off_norm() <= target) {
        out.converged = true;
        break;
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
    return a(i, i).real() > a(j, j).real();
  });
  out.values.resize(n);
  if (want_vectors) out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = a(order[k], order[k]).real();
    if (want_vectors) out.vectors.col(k) = v.col(order[k]);
  }
  return out;
}

}  // namespace hkpot
