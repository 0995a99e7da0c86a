#include "hkpot/moment_solver.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "hkpot/matrix_core.hpp"

namespace hkpot {

namespace {

void put(RVector& out, Eigen::Index& at, const CMatrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      out(at++) = m(i, j).real();
      out(at++) = m(i, j).imag();
    }
}

CMatrix take(const RVector& x, Eigen::Index& at, Eigen::Index rows, Eigen::Index cols) {
  CMatrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) {
      m(i, j) = Complex(x(at), x(at + 1));
      at += 2;
    }
  return m;
}

}  // namespace

MomentProblem::MomentProblem(Diagram d, CMatrix target) : diagram_(std::move(d)), target_(std::move(target)) {
  const int k = diagram_.length();
  if (k < 2) throw InputError("moment problem needs a diagram of length at least 2");
  const int n = diagram_.n();
  if (target_.rows() != n || target_.cols() != n) throw InputError("target size does not match the diagram");
  for (int i = 0; i + 1 < k; ++i) {
    const Eigen::Index entries = 2 * Eigen::Index(diagram_.dims[i]) * diagram_.dims[i + 1];
    num_params_ += diagram_.self_dual() ? entries : 2 * entries;
    num_residuals_ += 4 * Eigen::Index(diagram_.dims[i]) * diagram_.dims[i];
  }
  num_residuals_ += 2 * Eigen::Index(n) * n;
}

DiagramPoint MomentProblem::unpack(const RVector& x) const {
  if (x.size() != num_params_) throw InputError("parameter vector has the wrong length");
  Eigen::Index at = 0;
  const int k = diagram_.length();
  std::vector<CMatrix> alphas;
  for (int i = 0; i + 1 < k; ++i) alphas.push_back(take(x, at, diagram_.dims[i + 1], diagram_.dims[i]));
  if (diagram_.self_dual()) return DiagramPoint::from_alphas(diagram_, std::move(alphas));
  DiagramPoint p;
  p.alphas = std::move(alphas);
  for (int i = 0; i + 1 < k; ++i) p.betas.push_back(take(x, at, diagram_.dims[i], diagram_.dims[i + 1]));
  return p;
}

RVector MomentProblem::pack(const DiagramPoint& p) const {
  check_shapes(diagram_, p);
  RVector x(num_params_);
  Eigen::Index at = 0;
  for (const auto& a : p.alphas) put(x, at, a);
  if (!diagram_.self_dual())
    for (const auto& b : p.betas) put(x, at, b);
  return x;
}

RVector MomentProblem::polar(const DiagramPoint& p, const DiagramPoint& q) const {
  RVector out(num_residuals_);
  Eigen::Index at = 0;
  const int k = diagram_.length();
  for (int t = 0; t + 1 < k; ++t) {
    const int dim = diagram_.dims[t];
    CMatrix mc = CMatrix::Zero(dim, dim);
    CMatrix mr = CMatrix::Zero(dim, dim);
    if (t > 0) {
      mc += p.alphas[t - 1] * q.betas[t - 1];
      mr += p.alphas[t - 1] * q.alphas[t - 1].adjoint() - p.betas[t - 1].adjoint() * q.betas[t - 1];
    }
    mc -= p.betas[t] * q.alphas[t];
    mr += p.betas[t] * q.betas[t].adjoint() - p.alphas[t].adjoint() * q.alphas[t];
    put(out, at, mc);
    put(out, at, mr);
  }
  put(out, at, p.alphas.back() * q.betas.back());
  return out;
}

RVector MomentProblem::residual(const RVector& x) const {
  const DiagramPoint p = unpack(x);
  RVector r = polar(p, p);
  Eigen::Index at = num_residuals_ - 2 * target_.size();
  for (Eigen::Index j = 0; j < target_.cols(); ++j)
    for (Eigen::Index i = 0; i < target_.rows(); ++i) {
      r(at++) -= target_(i, j).real();
      r(at++) -= target_(i, j).imag();
    }
  return r;
}

RVector MomentProblem::jvp(const RVector& x, const RVector& dx) const {
  const DiagramPoint p = unpack(x);
  const DiagramPoint d = unpack(dx);
  return polar(d, p) + polar(p, d);
}

RMatrix MomentProblem::jacobian(const RVector& x) const {
  const DiagramPoint p = unpack(x);
  RMatrix jac(num_residuals_, num_params_);
  RVector e = RVector::Zero(num_params_);
  for (Eigen::Index c = 0; c < num_params_; ++c) {
    e(c) = 1.0;
    const DiagramPoint d = unpack(e);
    jac.col(c) = polar(d, p) + polar(p, d);
    e(c) = 0.0;
  }
  return jac;
}

std::string SolveDiagnostics::describe() const {
  std::ostringstream os;
  os << "residual " << residual << " (tolerance " << tolerance << "), " << iterations << " iterations, "
     << restarts << " restarts, seed " << seed;
  return os.str();
}

namespace {

struct Attempt {
  RVector x;
  double residual = std::numeric_limits<double>::infinity();
  int iterations = 0;
};

Attempt levenberg_marquardt(const MomentProblem& prob, RVector x, const SolveOptions& opts, double target_res) {
  Attempt out;
  RVector r = prob.residual(x);
  double cost = r.squaredNorm();
  double lambda = opts.initial_damping;
  const Eigen::Index np = prob.num_params();
  for (int it = 0; it < opts.max_iterations; ++it) {
    if (std::sqrt(cost) <= target_res) break;
    out.iterations = it + 1;
    const RMatrix jac = prob.jacobian(x);
    const RMatrix jtj = jac.transpose() * jac;
    const RVector grad = jac.transpose() * r;
    const double scale = std::max(jtj.diagonal().sum() / static_cast<double>(np), 1e-300);
    bool accepted = false;
    while (!accepted && lambda < 1e16) {
      RMatrix damped = jtj;
      damped.diagonal().array() += lambda * scale;
      const RVector step = damped.ldlt().solve(-grad);
      const RVector xn = x + step;
      const RVector rn = prob.residual(xn);
      const double cn = rn.squaredNorm();
      if (std::isfinite(cn) && cn < cost) {
        x = xn;
        r = rn;
        cost = cn;
        lambda = std::max(lambda / 10.0, 1e-15);
        accepted = true;
      } else {
        lambda *= 10.0;
      }
    }
    if (!accepted) break;
  }
  out.x = std::move(x);
  out.residual = std::sqrt(cost);
  return out;
}

}  // namespace

SolveResult solve_moment(const Diagram& d, const OrbitElement& target, const SolveOptions& opts,
                         const Tolerances& tol) {
  tol.validate();
  if (opts.max_restarts < 0 || opts.max_iterations <= 0) throw InputError("solver options out of range");
  if (target.algebra.family != d.algebra.family || target.algebra.n != d.n())
    throw InputError("target does not belong to the diagram's algebra");
  OrbitElement x = target;
  if (d.self_dual()) {
    x = to_standard_form(target, tol);
    if (x.form.kind() != d.forms.back().kind())
      throw InputError("target form " + x.form.name() + " does not match the diagram");
  }
  const double xnorm = x.matrix.norm();

  SolveResult res;
  auto& diag = res.diagnostics;
  diag.seed = opts.seed;
  diag.tolerance = tol.solve_tol * std::max(1.0, xnorm);
  {
    const JordanType jt = jordan_type_of(x.matrix, tol);
    std::vector<int> flag;
    const int k = d.length();
    for (int i = 1; i <= k; ++i) flag.push_back(jt.rank_of_power(k - i));
    diag.boundary_stratum = flag != d.dims;
  }
  if (xnorm == 0.0) {
    diag.trivial = true;
    res.point = DiagramPoint::zero(d);
    return res;
  }
  if (d.length() < 2) throw InputError("a nonzero target needs a diagram of length at least 2");

  const MomentProblem prob(d, x.matrix);
  const Rng root(opts.seed);
  const double r2_init = 2.0 * d.length() * xnorm;
  Attempt best;
  for (int attempt = 0; attempt <= opts.max_restarts; ++attempt) {
    Rng rng = root.split(static_cast<std::uint64_t>(attempt));
    RVector x0(prob.num_params());
    for (Eigen::Index i = 0; i < x0.size(); ++i) x0(i) = rng.normal();
    const double r2 = radial_norm(prob.unpack(x0));
    x0 *= std::sqrt(r2_init / std::max(r2, 1e-300));
    Attempt a = levenberg_marquardt(prob, std::move(x0), opts, diag.tolerance);
    diag.iterations += a.iterations;
    diag.restarts = attempt;
    if (a.residual < best.residual) best = std::move(a);
    if (best.residual <= diag.tolerance) break;
  }
  diag.residual = best.residual;
  if (!(best.residual <= diag.tolerance))
    throw ConvergenceError("moment-map solver did not converge: " + diag.describe(), diag);
  res.point = prob.unpack(best.x);
  res.r2 = radial_norm(res.point);
  return res;
}

SolveResult solve_moment(const OrbitElement& target, const SolveOptions& opts, const Tolerances& tol) {
  const JordanType jt = jordan_type_of(target.matrix, tol);
  return solve_moment(Diagram::image_flag(jt, target.algebra), target, opts, tol);
}

}  // namespace hkpot
