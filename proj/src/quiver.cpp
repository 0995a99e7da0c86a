#include "hkpot/quiver.hpp"

#include <cmath>
#include <sstream>

#include "hkpot/matrix_core.hpp"

namespace hkpot {

Diagram Diagram::make(std::vector<int> dims, AlgebraKind alg) {
  if (dims.empty()) throw InputError("diagram needs at least one node");
  for (int d : dims)
    if (d <= 0) throw InputError("diagram node dimensions must be positive");
  if (dims.back() != alg.n) throw InputError("last diagram node must be C^n");
  Diagram d{std::move(dims), alg, {}};
  if (d.self_dual()) {
    const int k = d.length();
    for (int i = 1; i <= k; ++i) {
      const int dim = d.dims[i - 1];
      const bool antisymmetric = (k - i + alg.delta()) % 2 != 0;
      if (antisymmetric) {
        if (dim % 2 != 0) {
          std::ostringstream os;
          os << "diagram node V_" << i << " carries a symplectic form but has odd dimension " << dim;
          throw InputError(os.str());
        }
        d.forms.push_back(BilinearForm::standard_symplectic(dim));
      } else {
        d.forms.push_back(BilinearForm::identity(dim));
      }
    }
  }
  return d;
}

Diagram Diagram::image_flag(const JordanType& jt, AlgebraKind alg) {
  const int k = std::max(jt.longest(), 1);
  std::vector<int> dims;
  for (int i = 1; i <= k; ++i) dims.push_back(jt.rank_of_power(k - i));
  return make(std::move(dims), alg);
}

DiagramPoint DiagramPoint::zero(const Diagram& d) {
  DiagramPoint p;
  for (int i = 0; i + 1 < d.length(); ++i) {
    p.alphas.push_back(CMatrix::Zero(d.dims[i + 1], d.dims[i]));
    p.betas.push_back(CMatrix::Zero(d.dims[i], d.dims[i + 1]));
  }
  return p;
}

DiagramPoint DiagramPoint::from_alphas(const Diagram& d, std::vector<CMatrix> alphas) {
  if (!d.self_dual()) throw InputError("from_alphas: diagram is not self-dual");
  if (static_cast<int>(alphas.size()) != d.length() - 1) throw InputError("from_alphas: wrong arrow count");
  DiagramPoint p;
  p.alphas = std::move(alphas);
  for (std::size_t i = 0; i < p.alphas.size(); ++i)
    p.betas.push_back(dagger_adjoint(p.alphas[i], d.forms[i], d.forms[i + 1]));
  return p;
}

void check_shapes(const Diagram& d, const DiagramPoint& p) {
  const std::size_t arrows = static_cast<std::size_t>(std::max(d.length() - 1, 0));
  if (p.alphas.size() != arrows || p.betas.size() != arrows)
    throw InputError("diagram point has the wrong number of arrows");
  for (std::size_t i = 0; i < arrows; ++i) {
    if (p.alphas[i].rows() != d.dims[i + 1] || p.alphas[i].cols() != d.dims[i] ||
        p.betas[i].rows() != d.dims[i] || p.betas[i].cols() != d.dims[i + 1]) {
      std::ostringstream os;
      os << "arrow " << i + 1 << " has the wrong shape";
      throw InputError(os.str());
    }
  }
}

MomentResidual moment_map(const Diagram& d, const DiagramPoint& p) {
  check_shapes(d, p);
  MomentResidual out;
  const int k = d.length();
  for (int t = 0; t + 1 < k; ++t) {
    const int dim = d.dims[t];
    CMatrix mc = CMatrix::Zero(dim, dim);
    CMatrix mr = CMatrix::Zero(dim, dim);
    if (t > 0) {
      const CMatrix& a = p.alphas[t - 1];
      const CMatrix& b = p.betas[t - 1];
      mc += a * b;
      mr += a * a.adjoint() - b.adjoint() * b;
    }
    const CMatrix& a = p.alphas[t];
    const CMatrix& b = p.betas[t];
    mc -= b * a;
    mr += b * b.adjoint() - a.adjoint() * a;
    out.total += mc.squaredNorm() + mr.squaredNorm();
    out.complex_parts.push_back(std::move(mc));
    out.real_parts.push_back(std::move(mr));
  }
  return out;
}

double radial_norm(const DiagramPoint& p) {
  double r2 = 0.0;
  for (const auto& a : p.alphas) r2 += a.squaredNorm();
  for (const auto& b : p.betas) r2 += b.squaredNorm();
  return r2;
}

CMatrix psi(const DiagramPoint& p) {
  if (p.alphas.empty()) throw InputError("psi: diagram point has no arrows");
  return p.alphas.back() * p.betas.back();
}

DiagramPoint apply_gauge(const Diagram& d, const DiagramPoint& p, const std::vector<CMatrix>& gauge) {
  check_shapes(d, p);
  const int k = d.length();
  if (static_cast<int>(gauge.size()) != k - 1) throw InputError("apply_gauge: one element per gauged node");
  for (int t = 0; t + 1 < k; ++t) {
    const CMatrix& g = gauge[t];
    const int dim = d.dims[t];
    if (g.rows() != dim || g.cols() != dim) throw InputError("apply_gauge: gauge element has the wrong size");
    const CMatrix id = CMatrix::Identity(dim, dim);
    if ((g.adjoint() * g - id).norm() > 1e-10 * std::sqrt(static_cast<double>(dim)))
      throw InputError("apply_gauge: gauge element is not unitary");
    if (d.self_dual()) {
      const CMatrix gd = dagger_adjoint(g, d.forms[t], d.forms[t]);
      if ((gd * g - id).norm() > 1e-10 * std::sqrt(static_cast<double>(dim)))
        throw InputError("apply_gauge: gauge element does not preserve the node form");
    }
  }
  DiagramPoint out;
  for (int i = 0; i + 1 < k; ++i) {
    const CMatrix& gi = gauge[i];
    CMatrix a = p.alphas[i] * gi.adjoint();
    CMatrix b = gi * p.betas[i];
    if (i + 1 < k - 1) {
      const CMatrix& gn = gauge[i + 1];
      a = (gn * a).eval();
      b = (b * gn.adjoint()).eval();
    }
    out.alphas.push_back(std::move(a));
    out.betas.push_back(std::move(b));
  }
  return out;
}

std::vector<CMatrix> random_gauge(const Diagram& d, Rng& rng) {
  std::vector<CMatrix> g;
  for (int t = 0; t + 1 < d.length(); ++t) {
    const int dim = d.dims[t];
    if (!d.self_dual()) {
      CMatrix u = haar_unitary(dim, rng);
      u *= std::polar(1.0, rng.uniform(0.0, 6.283185307179586));  // full U(n), not just SU(n)
      g.push_back(std::move(u));
    } else if (d.forms[t].kind() == FormKind::StandardSymplectic) {
      g.push_back(haar_compact_symplectic(dim, rng));
    } else {
      CMatrix o = haar_orthogonal(dim, rng);
      if (rng.uniform() < 0.5) o.col(0) *= -1.0;  // O(n) has two components
      g.push_back(std::move(o));
    }
  }
  return g;
}

Length2Factorization length2_factorize(const OrbitElement& x, const Tolerances& tol) {
  const CMatrix& m = x.matrix;
  const int n = static_cast<int>(m.rows());
  if (m.rows() != m.cols()) throw InputError("length2_factorize: matrix is not square");
  const double norm = m.norm();
  if ((m * m).norm() > tol.check_tol * std::max(1.0, norm * norm))
    throw InputError("length2_factorize: X^2 != 0");

  Length2Factorization out;
  const AlgebraKind gl{Family::SL, n};
  if (norm == 0.0) {
    out.trivial = true;
    out.diagram = Diagram::make({n}, gl);
    out.point = DiagramPoint::zero(out.diagram);
    return out;
  }
  const auto eig = jacobi_eigen<double>(m.adjoint() * m, true);
  const double cut = tol.eig_group * std::max(1.0, eig.values(0));
  int k = 0;
  while (k < n && eig.values(k) > cut) ++k;

  // In the basis e_i (eigenvectors), f_i = mu_i^{-1/2} X e_i, X = sum a_i f_i e_i^*
  // with a_i = sqrt(mu_i); alpha = sum sqrt(a_i) f_i eps_i^T, beta = sum sqrt(a_i) eps_i e_i^*.
  CMatrix alpha(n, k);
  CMatrix beta(k, n);
  for (int i = 0; i < k; ++i) {
    const double mu = eig.values(i);
    const double a = std::sqrt(mu);
    const CVector e = eig.vectors.col(i);
    const CVector f = m * e / a;
    alpha.col(i) = std::sqrt(a) * f;
    beta.row(i) = std::sqrt(a) * e.adjoint();
    out.lambdas.push_back(a);
  }
  out.diagram = Diagram::make({k, n}, gl);
  out.point.alphas.push_back(std::move(alpha));
  out.point.betas.push_back(std::move(beta));
  return out;
}

}  // namespace hkpot
