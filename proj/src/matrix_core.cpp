#include "hkpot/matrix_core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hkpot {

void Tolerances::validate() const {
  if (!(eig_group > 0 && rank_cut > 0 && solve_tol > 0 && check_tol > 0))
    throw InputError("tolerances must be strictly positive");
}

// ---------------------------------------------------------------------------
// BilinearForm

BilinearForm BilinearForm::identity(int dim) {
  if (dim < 0) throw InputError("form dimension must be non-negative");
  CMatrix m = CMatrix::Identity(dim, dim);
  return BilinearForm(FormKind::Identity, 1, m, m);
}

BilinearForm BilinearForm::anti_diagonal(int dim) {
  if (dim < 0) throw InputError("form dimension must be non-negative");
  CMatrix m = CMatrix::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) m(i, dim - 1 - i) = 1.0;
  return BilinearForm(FormKind::AntiDiagonal, 1, m, m);
}

BilinearForm BilinearForm::standard_symplectic(int dim) {
  if (dim < 0 || dim % 2 != 0) throw InputError("symplectic form needs an even dimension");
  const int m = dim / 2;
  CMatrix j = CMatrix::Zero(dim, dim);
  j.topRightCorner(m, m).setIdentity();
  j.bottomLeftCorner(m, m) = -CMatrix::Identity(m, m);
  CMatrix inv = -j;
  return BilinearForm(FormKind::StandardSymplectic, -1, j, inv);
}

BilinearForm BilinearForm::explicit_form(CMatrix matrix, int symmetry) {
  if (matrix.rows() != matrix.cols()) throw InputError("form matrix must be square");
  if (symmetry != 1 && symmetry != -1) throw InputError("form symmetry must be +1 or -1");
  const double scale = std::max(1.0, matrix.norm());
  if ((matrix.transpose() - static_cast<double>(symmetry) * matrix).norm() > 1e-12 * scale)
    throw InputError("form matrix does not have the stated symmetry");
  Eigen::FullPivLU<CMatrix> lu(matrix);
  if (!lu.isInvertible()) throw InputError("form matrix is singular");
  CMatrix inv = lu.inverse();
  return BilinearForm(FormKind::Explicit, symmetry, std::move(matrix), std::move(inv));
}

std::string BilinearForm::name() const {
  switch (kind_) {
    case FormKind::Identity: return "identity";
    case FormKind::AntiDiagonal: return "antidiagonal";
    case FormKind::StandardSymplectic: return "symplectic";
    case FormKind::Explicit: return "explicit";
  }
  return "unknown";
}

Complex BilinearForm::operator()(const CVector& v, const CVector& w) const {
  return (v.transpose() * matrix_ * w)(0, 0);
}

// ---------------------------------------------------------------------------

CMatrix dagger_adjoint(const CMatrix& m, const BilinearForm& src, const BilinearForm& dst) {
  if (m.cols() != src.dim() || m.rows() != dst.dim()) {
    std::ostringstream os;
    os << "dagger_adjoint: map is " << m.rows() << "x" << m.cols() << " but forms have dims "
       << src.dim() << " -> " << dst.dim();
    throw InputError(os.str());
  }
  if (src.kind() == FormKind::Identity && dst.kind() == FormKind::Identity) return m.transpose();
  return src.inverse() * m.transpose() * dst.matrix();
}

int HermitianSpectrum::dimension() const {
  int d = 0;
  for (const auto& g : groups) d += g.multiplicity;
  return d;
}

double HermitianSpectrum::trace() const {
  double t = 0;
  for (const auto& g : groups) t += g.value * g.multiplicity;
  return t;
}

std::vector<SpectrumGroup> HermitianSpectrum::nonzero() const {
  std::vector<SpectrumGroup> out;
  for (const auto& g : groups)
    if (g.value > 0) out.push_back(g);
  return out;
}

double HermitianSpectrum::weighted_sqrt_sum() const {
  double s = 0;
  for (const auto& g : groups)
    if (g.value > 0) s += g.multiplicity * std::sqrt(g.value);
  return s;
}

HermitianSpectrum group_eigenvalues(const RVector& values, const Tolerances& tol) {
  HermitianSpectrum spec;
  const Eigen::Index n = values.size();
  if (n == 0) return spec;
  const double scale = std::max(1.0, values.maxCoeff());
  spec.grouping_tol = tol.eig_group * scale;
  spec.min_eigenvalue = values.minCoeff();

  std::vector<std::pair<double, int>> raw;  // (sum, count)
  double prev = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double v = values(i);
    if (raw.empty() || prev - v > spec.grouping_tol) {
      raw.push_back({v, 1});
    } else {
      raw.back().first += v;
      raw.back().second += 1;
    }
    prev = v;
  }
  for (const auto& [sum, count] : raw) {
    double mean = sum / count;
    if (std::abs(mean) <= spec.grouping_tol) mean = 0.0;
    if (mean < 0) spec.has_negative = true;
    if (!spec.groups.empty() && spec.groups.back().value == mean) {
      spec.groups.back().multiplicity += count;  // two groups both snapped to zero
    } else {
      spec.groups.push_back({mean, count});
    }
  }
  return spec;
}

HermitianSpectrum hermitian_spectrum(const CMatrix& m, const Tolerances& tol) {
  if (m.rows() != m.cols()) throw InputError("hermitian_spectrum: matrix is not square");
  const double norm = m.norm();
  if ((m - m.adjoint()).norm() > tol.check_tol * norm)
    throw InputError("hermitian_spectrum: matrix is not Hermitian");
  const auto eig = jacobi_eigen<double>(m, false);
  return group_eigenvalues(eig.values, tol);
}

CVector rank1_symmetric_factor(const CMatrix& m, const Tolerances& tol) {
  if (m.rows() != m.cols()) throw InputError("rank1_symmetric_factor: matrix is not square");
  const Eigen::Index n = m.rows();
  const double norm = m.norm();
  if ((m - m.transpose()).norm() > tol.check_tol * std::max(1.0, norm))
    throw InputError("rank1_symmetric_factor: matrix is not complex-symmetric");
  if (norm == 0.0) return CVector::Zero(n);
  if (matrix_rank(m, tol) > 1) throw NumericalError("rank1_symmetric_factor: rank exceeds 1");

  // Column j of x x^T is x_j x, and its norm is |x_j| |x|, so the column of
  // largest norm carries the largest |x_j| and m_jj = x_j^2 is well away from 0.
  Eigen::Index j = 0;
  m.colwise().norm().maxCoeff(&j);
  const Complex xj = std::sqrt(m(j, j));
  CVector x = m.col(j) / xj;

  const double big = x.cwiseAbs().maxCoeff();
  Eigen::Index lead = 0;
  while (std::abs(x(lead)) < big * (1.0 - 1e-12)) ++lead;
  const Complex z = x(lead);
  const double slack = 1e-12 * big;
  const bool flip = (std::abs(z.real()) > slack) ? z.real() < 0 : z.imag() < 0;
  if (flip) x = -x;

  if ((x * x.transpose() - m).norm() > tol.check_tol * std::max(1.0, norm))
    throw NumericalError("rank1_symmetric_factor: reconstruction residual too large");
  return x;
}

int matrix_rank(const CMatrix& m, const Tolerances& tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<CMatrix> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  const double cut = tol.rank_cut * s(0);
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cut) ++r;
  return r;
}

CMatrix matrix_power(const CMatrix& m, int k) {
  if (m.rows() != m.cols()) throw InputError("matrix_power: matrix is not square");
  if (k < 0) throw InputError("matrix_power: negative exponent");
  CMatrix out = CMatrix::Identity(m.rows(), m.cols());
  for (int i = 0; i < k; ++i) out = out * m;
  return out;
}

double relative_max_diff(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return INFINITY;
  if (a.size() == 0) return 0.0;
  const double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
  return (a - b).cwiseAbs().maxCoeff() / scale;
}

}  // namespace hkpot
