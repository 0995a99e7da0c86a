#include "hkpot/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace hkpot {

namespace {

using Notes = std::vector<std::string>;

void note(Notes* notes, const std::string& s) {
  if (notes && std::find(notes->begin(), notes->end(), s) == notes->end()) notes->push_back(s);
}

// Negative radicands within check_tol * scale are rounding; beyond that the
// invariants are wrong and we refuse to return a number.
double clamp_radicand(double value, double scale, const Tolerances& tol, const char* what, Notes* notes) {
  if (value >= 0.0) return value;
  if (value >= -tol.check_tol * std::max(scale, 1e-300)) {
    note(notes, "radicand_clamped");
    return 0.0;
  }
  std::ostringstream os;
  os << what << ": radicand " << value << " is negative (scale " << scale << ")";
  throw NumericalError(os.str());
}

double real_trace(const CMatrix& m) {
  const Complex t = m.trace();
  if (std::abs(t.imag()) > 1e-12 * std::max(1.0, std::abs(t)))
    throw NumericalError("trace invariant has a non-negligible imaginary part");
  return t.real();
}

OrbitElement standardized(const OrbitElement& x, const Tolerances& tol) {
  return x.algebra.family == Family::SO ? to_standard_form(x, tol) : x;
}

Classification classification_of(const OrbitElement& x, const Tolerances& tol) {
  return classify(jordan_type_of(x.matrix, tol), x.algebra);
}

double length2_impl(const OrbitElement& x, const Tolerances& tol, HermitianSpectrum* out) {
  const CMatrix& m = x.matrix;
  if (m.rows() != m.cols()) throw InputError("potential_length2: matrix is not square");
  const double norm = m.norm();
  if ((m * m).norm() > tol.check_tol * norm * norm) throw InputError("potential_length2: X^2 != 0");
  const HermitianSpectrum spec = hermitian_spectrum(m.adjoint() * m, tol);
  if (out) *out = spec;
  return 2.0 * spec.weighted_sqrt_sum();
}

double coh2_impl(const OrbitElement& x, const Tolerances& tol, Notes* notes) {
  const Classification cls = classification_of(x, tol);
  if (!cls.is_coh2 && !cls.is_zero) throw InputError("potential_coh2: element is not in a cohomogeneity-two orbit");
  const Invariants inv = invariants(x);
  const double k = inv.kappa;
  const double rad = clamp_radicand(2.0 * inv.c1 * inv.c1 - k * inv.c2, inv.c1 * inv.c1, tol, "potential_coh2", notes);
  return std::sqrt(4.0 * k * inv.c1 + 4.0 * k * std::sqrt(rad));
}

double lift32k_impl(const OrbitElement& x, const Tolerances& tol, HermitianSpectrum* out) {
  const LiftResult lift = border_lift(x, tol);
  const int n1 = static_cast<int>(lift.x_prime.rows());
  const OrbitElement xp{lift.x_prime, AlgebraKind::make(Family::SO, n1), BilinearForm::identity(n1)};
  HermitianSpectrum spec;
  const double rho = length2_impl(xp, tol, &spec);
  for (const auto& g : spec.nonzero())
    if (g.multiplicity % 2 != 0) {
      std::ostringstream os;
      os << "potential_32k: eigenvalue " << g.value << " of X'X'^* has odd multiplicity " << g.multiplicity;
      throw NumericalError(os.str());
    }
  if (out) *out = spec;
  return rho;
}

double closed322_impl(const OrbitElement& x, const Tolerances& tol, Notes* notes) {
  if (x.algebra.family != Family::SO) throw InputError("potential_322_closed: so(n) only");
  const JordanType jt = jordan_type_of(x.matrix, tol);
  const bool zero = jt.longest() <= 1;
  if (!zero && !(jt.count(3) == 1 && jt.count(2) == 2 && jt.longest() == 3))
    throw InputError("potential_322_closed: Jordan type (" + jt.str() + ") is not (3,2,2,1,...)");
  const Invariants inv = invariants(x);
  const double scale = inv.c1 * inv.c1;
  const double rad = clamp_radicand(inv.c1 * inv.c1 - inv.c2 - 2.0 * inv.c21, scale, tol, "potential_322_closed", notes);
  return std::sqrt(8.0 * inv.c1 + 16.0 * std::sqrt(inv.c21) + 16.0 * std::sqrt(rad));
}

}  // namespace

Invariants invariants(const OrbitElement& x) {
  const CMatrix& m = x.matrix;
  const CMatrix ms = m.adjoint();
  const CMatrix y = m * ms - ms * m;
  const CMatrix m2 = m * m;
  Invariants inv;
  inv.c1 = real_trace(m * ms);
  inv.c2 = real_trace(y * y.adjoint());
  inv.c21 = real_trace(m2 * m2.adjoint());
  inv.kappa = x.algebra.kappa();
  return inv;
}

double potential_length2(const OrbitElement& x, const Tolerances& tol) { return length2_impl(x, tol, nullptr); }

double potential_minimal(const OrbitElement& x, const Tolerances& tol) {
  const Classification cls = classification_of(x, tol);
  if (cls.is_zero) return 0.0;
  if (!cls.is_minimal) throw InputError("potential_minimal: element is not in the minimal orbit");
  const HermitianSpectrum spec = hermitian_spectrum(x.matrix.adjoint() * x.matrix, tol);
  const auto nz = spec.nonzero();
  const int kappa = x.algebra.kappa();
  if (nz.size() != 1 || nz.front().multiplicity != kappa) {
    std::ostringstream os;
    os << "potential_minimal: expected one nonzero eigenvalue of multiplicity " << kappa << ", found " << nz.size()
       << " group(s)";
    if (!nz.empty()) os << ", first of multiplicity " << nz.front().multiplicity;
    throw NumericalError(os.str());
  }
  return std::sqrt(4.0 * kappa * invariants(x).c1);
}

double potential_coh2(const OrbitElement& x, const Tolerances& tol) { return coh2_impl(x, tol, nullptr); }

LiftResult border_lift(const OrbitElement& x, const Tolerances& tol, bool negate) {
  if (x.algebra.family != Family::SO) throw InputError("border_lift: so(n) only");
  const OrbitElement s = to_standard_form(x, tol);
  const CMatrix& m = s.matrix;
  const Eigen::Index n = m.rows();
  const double norm = m.norm();
  if ((m + m.transpose()).norm() > tol.check_tol * std::max(1.0, norm))
    throw InputError("border_lift: X is not skew-symmetric");
  const CMatrix m2 = m * m;
  if ((m2 * m).norm() > tol.check_tol * std::max(1.0, norm * norm * norm))
    throw InputError("border_lift: X^3 != 0");

  LiftResult out;
  if (m2.norm() <= 1e-13 * norm * norm) {
    out.x = CVector::Zero(n);
  } else {
    if (matrix_rank(m2, tol) > 1) throw InputError("border_lift: rank X^2 > 1 (more than one block of size 3)");
    out.x = rank1_symmetric_factor(m2, tol);
    if (negate) out.x = -out.x;
  }
  out.x_prime = CMatrix::Zero(n + 1, n + 1);
  out.x_prime.topLeftCorner(n, n) = m;
  out.x_prime.topRightCorner(n, 1) = out.x;
  out.x_prime.bottomLeftCorner(1, n) = -out.x.transpose();
  out.residual = (out.x * out.x.transpose() - m2).norm() / std::max(1.0, norm * norm);
  return out;
}

double potential_32k(const OrbitElement& x, const Tolerances& tol) { return lift32k_impl(x, tol, nullptr); }

double potential_322_closed(const OrbitElement& x, const Tolerances& tol) { return closed322_impl(x, tol, nullptr); }

CubicCoeffs cubic_coefficients(const CanonicalFiberParams& params) {
  const double a2 = std::norm(params.a);
  const double b2 = std::norm(params.b);
  const double v2 = params.v_norm2();
  const double w2 = params.w_norm2();
  const double z2 = std::norm(params.zeta());
  return {2.0 * a2 + b2 + v2 + w2, z2 + b2 * w2 + 2.0 * a2 * (v2 + w2), 2.0 * a2 * z2};
}

std::array<double, 3> cubic_roots(const CubicCoeffs& c, const Tolerances& tol) {
  if (!(c.p >= 0.0)) throw InputError("cubic_roots: p must be non-negative");
  std::array<double, 3> roots{0.0, 0.0, 0.0};
  if (c.p == 0.0) return roots;
  Eigen::Matrix3d companion;
  companion << c.p, -c.q, c.r, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0;
  const Eigen::EigenSolver<Eigen::Matrix3d> es(companion, false);
  const auto f = [&](double z) { return ((z - c.p) * z + c.q) * z - c.r; };
  const auto df = [&](double z) { return (3.0 * z - 2.0 * c.p) * z + c.q; };
  for (int i = 0; i < 3; ++i) {
    const std::complex<double> z = es.eigenvalues()(i);
    if (std::abs(z.imag()) > 1e-8 * c.p) {
      std::ostringstream os;
      os << "cubic_roots: complex root " << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
      throw NumericalError(os.str());
    }
    double x = z.real();
    for (int it = 0; it < 4; ++it) {
      const double d = df(x);
      if (d == 0.0) break;
      const double xn = x - f(x) / d;
      if (!(std::abs(f(xn)) < std::abs(f(x)))) break;
      x = xn;
    }
    if (x < 0.0) {
      if (x < -tol.check_tol * c.p) throw NumericalError("cubic_roots: negative root");
      x = 0.0;
    }
    roots[i] = x;
  }
  std::sort(roots.begin(), roots.end(), std::greater<>());
  return roots;
}

double potential_324_cubic(const CanonicalFiberParams& params, const Tolerances& tol) {
  if (!params.w) throw InputError("potential_324_cubic: parameters need w");
  const auto roots = cubic_roots(cubic_coefficients(params), tol);
  return 4.0 * (std::sqrt(roots[0]) + std::sqrt(roots[1]) + std::sqrt(roots[2]));
}

double potential_sl3_regular(Complex a, Complex b, Complex c) {
  const double s = std::cbrt(std::norm(a)) + std::cbrt(std::norm(c));
  return 2.0 * std::sqrt(s * s * s + std::norm(b));
}

UpperTriangular3 sl3_triangularize(const CMatrix& x, const Tolerances& tol) {
  if (x.rows() != 3 || x.cols() != 3) throw InputError("sl3_triangularize: matrix must be 3x3");
  UpperTriangular3 out;
  const int rank = matrix_rank(x, tol);
  if (rank == 0) {
    out.basis = CMatrix::Identity(3, 3);
    out.a = out.b = out.c = 0.0;
    return out;
  }
  // Invariant flag V1 c V2 with X V2 c V1 and X V1 = 0: (Im X^2, Im X) when
  // X is regular, (Im X, ker X) when X^2 = 0.
  Eigen::JacobiSVD<CMatrix> svd(x, Eigen::ComputeFullU | Eigen::ComputeFullV);
  CVector u1;
  CMatrix v2(3, 2);
  if (rank == 2) {
    Eigen::JacobiSVD<CMatrix> svd2(x * x, Eigen::ComputeFullU);
    u1 = svd2.matrixU().col(0);
    v2 = svd.matrixU().leftCols(2);
  } else if (rank == 1) {
    u1 = svd.matrixU().col(0);
    v2 = svd.matrixV().rightCols(2);
  } else {
    throw InputError("sl3_triangularize: matrix is not nilpotent");
  }
  CMatrix proj = v2 - u1 * (u1.adjoint() * v2);
  Eigen::Index j = 0;
  proj.colwise().norm().maxCoeff(&j);
  const CVector u2 = proj.col(j).normalized();
  CVector u3 = CVector::Zero(3);
  for (int e = 0; e < 3 && u3.norm() < 0.5; ++e) {
    CVector t = CVector::Unit(3, e);
    t -= u1 * u1.dot(t) + u2 * u2.dot(t);
    if (t.norm() > 0.5) u3 = t.normalized();
  }
  out.basis.resize(3, 3);
  out.basis << u1, u2, u3;
  const CMatrix t = out.basis.adjoint() * x * out.basis;
  const double lower = std::sqrt(std::norm(t(0, 0)) + std::norm(t(1, 1)) + std::norm(t(2, 2)) +
                                 std::norm(t(1, 0)) + std::norm(t(2, 0)) + std::norm(t(2, 1)));
  if (lower > tol.check_tol * std::max(1.0, x.norm()))
    throw InputError("sl3_triangularize: matrix is not nilpotent");
  out.a = t(0, 1);
  out.b = t(0, 2);
  out.c = t(1, 2);
  return out;
}

double potential_sl3(const OrbitElement& x, const Tolerances& tol) {
  if (x.algebra.family != Family::SL || x.algebra.n != 3) throw InputError("potential_sl3: sl(3) only");
  const auto t = sl3_triangularize(x.matrix, tol);
  return potential_sl3_regular(t.a, t.b, t.c);
}

bool PotentialReport::all_ok() const {
  for (const auto& [name, m] : methods)
    if (m.status == "failed") return false;
  return true;
}

std::map<std::string, double> PotentialReport::values() const {
  std::map<std::string, double> v;
  for (const auto& [name, m] : methods)
    if (m.status == "ok") v[name] = m.rho;
  return v;
}

PotentialReport compute_all(const OrbitElement& x_in, const Tolerances& tol, const OracleOptions& oracle,
                            const std::optional<CanonicalFiberParams>& fiber) {
  tol.validate();
  const ValidationReport vr = validate(x_in, tol);
  if (!vr.ok()) throw MembershipError(vr.describe());
  const OrbitElement x = standardized(x_in, tol);

  PotentialReport rep;
  rep.algebra = to_string(x.algebra.family) + "(" + std::to_string(x.algebra.n) + ")";
  rep.jordan_type = jordan_type_of(x.matrix, tol);
  const Classification cls = classify(rep.jordan_type, x.algebra);
  rep.invariants = invariants(x);
  rep.spectrum = hermitian_spectrum(x.matrix.adjoint() * x.matrix, tol).groups;
  if (cls.is_zero) rep.flags.push_back("trivial");

  Notes notes;
  for (Method m : cls.methods) {
    const std::string name = to_string(m);
    MethodResult res;
    try {
      switch (m) {
        case Method::Length2:
          res.rho = length2_impl(x, tol, nullptr);
          break;
        case Method::Minimal:
          res.rho = potential_minimal(x, tol);
          break;
        case Method::Coh2:
          res.rho = coh2_impl(x, tol, &notes);
          break;
        case Method::Lift32k: {
          HermitianSpectrum spec;
          res.rho = lift32k_impl(x, tol, &spec);
          rep.lift_spectrum = spec.groups;
          break;
        }
        case Method::Closed322:
          // Beyond so(7) the formula holds on the padded so(7) fibre but not on the
          // whole orbit: lift and oracle agree with each other and not with it.
          if (x.algebra.n > 7) {
            res.status = "skipped";
            res.detail = "closed (3,2,2) formula only valid on the whole orbit in so(7)";
            break;
          }
          res.rho = closed322_impl(x, tol, &notes);
          break;
        case Method::Cubic324:
          if (!fiber) {
            res.status = "skipped";
            res.detail = "needs fiber parameters";
            break;
          }
          res.rho = potential_324_cubic(*fiber, tol);
          break;
        case Method::Sl3Regular:
          res.rho = potential_sl3(x, tol);
          break;
        case Method::Oracle: {
          if (!oracle.enabled) {
            res.status = "skipped";
            res.detail = "oracle not requested";
            break;
          }
          OracleBlock ob;
          ob.seed = oracle.solve.seed;
          try {
            const SolveResult sr = solve_moment(x, oracle.solve, tol);
            ob.r2 = sr.r2;
            ob.rho = sr.r2;
            ob.residual = sr.diagnostics.residual;
            ob.iterations = sr.diagnostics.iterations;
            ob.restarts = sr.diagnostics.restarts;
            ob.boundary_stratum = sr.diagnostics.boundary_stratum;
            res.rho = sr.r2;
          } catch (const ConvergenceError& e) {
            ob.residual = e.diagnostics().residual;
            ob.iterations = e.diagnostics().iterations;
            ob.restarts = e.diagnostics().restarts;
            rep.oracle = ob;
            throw;
          }
          if (ob.boundary_stratum) note(&notes, "boundary_stratum");
          rep.oracle = ob;
          break;
        }
      }
      if (res.status.empty()) res.status = "ok";
    } catch (const Error& e) {
      res.status = "failed";
      res.rho = 0.0;
      res.detail = e.what();
    }
    rep.methods[name] = res;
  }
  for (const auto& s : notes) rep.flags.push_back(s);

  const auto vals = rep.values();
  for (auto i = vals.begin(); i != vals.end(); ++i)
    for (auto j = std::next(i); j != vals.end(); ++j) {
      const double scale = std::max(std::abs(i->second), std::abs(j->second));
      if (scale > 0.0)
        rep.max_pairwise_deviation = std::max(rep.max_pairwise_deviation, std::abs(i->second - j->second) / scale);
    }
  return rep;
}

}  // namespace hkpot
