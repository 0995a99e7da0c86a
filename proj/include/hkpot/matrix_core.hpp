#pragma once

#include <vector>

#include "hkpot/forms.hpp"
#include "hkpot/jacobi.hpp"
#include "hkpot/types.hpp"

namespace hkpot {

/// Conjugate transpose, evaluated.
template <typename Derived>
auto adjoint(const Eigen::MatrixBase<Derived>& m) {
  return m.adjoint().eval();
}

/// Adjoint of m : (C^a, src) -> (C^b, dst) with respect to the two forms:
/// dst(m v, w) = src(v, m^dagger w). Complex-linear (a transpose, not a
/// conjugate transpose).
CMatrix dagger_adjoint(const CMatrix& m, const BilinearForm& src, const BilinearForm& dst);

struct SpectrumGroup {
  double value = 0.0;
  int multiplicity = 0;
};

/// Eigenvalues of a positive semi-definite Hermitian matrix, grouped.
struct HermitianSpectrum {
  std::vector<SpectrumGroup> groups;  ///< strictly decreasing values
  double grouping_tol = 0.0;          ///< absolute gap used for grouping
  bool has_negative = false;          ///< an eigenvalue below -grouping_tol was kept as-is
  double min_eigenvalue = 0.0;        ///< before clamping

  int dimension() const;
  double trace() const;
  /// Groups with a strictly positive value.
  std::vector<SpectrumGroup> nonzero() const;
  /// sum_i k_i sqrt(mu_i)
  double weighted_sqrt_sum() const;
};

/// Groups descending eigenvalues: consecutive values join a group when
/// their gap is at most tol.eig_group * max(1, largest). Values within the
/// same distance of zero snap to exactly 0.
HermitianSpectrum group_eigenvalues(const RVector& descending, const Tolerances& tol);

/// Throws InputError for non-square or non-Hermitian input (asymmetry
/// beyond tol.check_tol * |m|).
HermitianSpectrum hermitian_spectrum(const CMatrix& m, const Tolerances& tol = {});

/// x with x x^T = m for complex-symmetric m of rank <= 1.
///
/// Sign convention: the first entry of largest modulus has positive real
/// part, or zero real part and non-negative imaginary part. "Zero" and
/// "largest" are judged with a relative slack of 1e-12 so the choice is
/// stable under rounding.
CVector rank1_symmetric_factor(const CMatrix& m, const Tolerances& tol = {});

/// Number of singular values above tol.rank_cut * sigma_max.
int matrix_rank(const CMatrix& m, const Tolerances& tol = {});

/// m^k, k >= 0.
CMatrix matrix_power(const CMatrix& m, int k);

/// Max over entries of |a - b| divided by max(1, |b|_max).
double relative_max_diff(const CMatrix& a, const CMatrix& b);

}  // namespace hkpot
