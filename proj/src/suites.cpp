#include "hkpot/suites.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

#include "hkpot/matrix_core.hpp"
#include "hkpot/moment_solver.hpp"
#include "hkpot/potentials.hpp"

namespace hkpot {

bool SuiteResult::ok() const {
  if (properties.empty()) return false;
  for (const auto& p : properties)
    if (!p.ok()) return false;
  return true;
}

JordanType random_partition(int n, Family f, int max_part, Rng& rng) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<int> parts;
    int left = n;
    while (left > 0) {
      const int q = rng.uniform_int(1, std::min(left, max_part));
      parts.push_back(q);
      left -= q;
    }
    JordanType jt(parts);
    if (jt.valid_for(f)) return jt;
  }
  return JordanType(std::vector<int>(n, 1));
}

namespace {

double rel(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

class Recorder {
 public:
  Recorder(std::string name, double tol) { r_.name = std::move(name), r_.tolerance = tol; }
  void check(double dev, std::uint64_t seed, const std::string& what = {}) {
    ++r_.total;
    if (!std::isfinite(dev)) dev = INFINITY;
    r_.worst = std::max(r_.worst, dev);
    if (dev <= r_.tolerance) {
      ++r_.passed;
    } else if (!r_.failing_seed) {
      r_.failing_seed = seed;
      std::ostringstream os;
      os << "deviation " << dev;
      if (!what.empty()) os << " (" << what << ")";
      r_.failure = os.str();
    }
  }
  void fail(std::uint64_t seed, const std::string& what) {
    ++r_.total;
    r_.worst = INFINITY;
    if (!r_.failing_seed) {
      r_.failing_seed = seed;
      r_.failure = what;
    }
  }
  const PropertyResult& result() const { return r_; }

 private:
  PropertyResult r_;
};

AlgebraKind random_algebra(Family f, int nmin, int nmax, Rng& rng) {
  int n = rng.uniform_int(nmin, nmax);
  if (f == Family::SP && n % 2) n = n == nmax ? n - 1 : n + 1;
  return AlgebraKind::make(f, n);
}

Family random_family(Rng& rng) { return static_cast<Family>(rng.uniform_int(0, 2)); }

OrbitElement random_square_zero(Family f, int nmax, Rng& rng) {
  const AlgebraKind alg = random_algebra(f, f == Family::SO ? 4 : 2, nmax, rng);
  return random_orbit_element(random_partition(alg.n, f, 2, rng), alg, rng);
}

struct Sample {
  OrbitElement x;
  std::optional<CanonicalFiberParams> fiber;
};

// Cycles through generic elements of short orbits and the two fibre families
// so the scaling and conjugation suites reach every closed form.
Sample mixed_sample(std::uint64_t i, Rng& rng) {
  switch (i % 4) {
    case 0: {
      const Family f = random_family(rng);
      const AlgebraKind alg = random_algebra(f, 3, 8, rng);
      return {random_orbit_element(random_partition(alg.n, f, 3, rng), alg, rng), std::nullopt};
    }
    case 1: {
      const AlgebraKind alg = AlgebraKind::make(Family::SO, rng.uniform_int(5, 9));
      std::vector<int> parts{3};
      parts.resize(alg.n - 2, 1);
      return {random_orbit_element(JordanType(parts), alg, rng), std::nullopt};
    }
    case 2: {
      const auto params = random_fiber_params(FiberVariant::F322, rng);
      return {to_standard_form(canonical_fiber(params, FiberVariant::F322, rng.uniform_int(0, 2))), std::nullopt};
    }
    default: {
      const auto params = random_fiber_params(FiberVariant::F324, rng);
      return {to_standard_form(canonical_fiber(params, FiberVariant::F324)), params};
    }
  }
}

CanonicalFiberParams scaled(const CanonicalFiberParams& p, Complex s) {
  CanonicalFiberParams q = p;
  q.a *= s;
  q.b *= s;
  for (auto& v : q.v) v *= s;
  if (q.w)
    for (auto& w : *q.w) w *= s;
  return q;
}

void compare_reports(Recorder& rec, const PotentialReport& a, const PotentialReport& b, double factor,
                     std::uint64_t seed) {
  for (const auto& [name, ma] : a.methods) {
    if (ma.status == "skipped") continue;
    const auto it = b.methods.find(name);
    if (ma.status != "ok" || it == b.methods.end() || it->second.status != "ok") {
      rec.fail(seed, "method " + name + " did not succeed on both inputs" +
                         (ma.detail.empty() ? "" : ": " + ma.detail));
      continue;
    }
    rec.check(rel(factor * ma.rho, it->second.rho), seed, name);
  }
}

using SuiteFn = std::function<std::vector<PropertyResult>(std::uint64_t, int)>;

std::vector<PropertyResult> even_multiplicity(std::uint64_t seed, int count) {
  Recorder rec("nonzero eigenvalue groups of X*X have even multiplicity in so(n<=12)", 0.0);
  for (int i = 0; i < count; ++i) {
    const std::uint64_t s = seed + i;
    Rng rng(s);
    const AlgebraKind alg = random_algebra(Family::SO, 2, 12, rng);
    const OrbitElement x = random_orbit_element(random_partition(alg.n, Family::SO, alg.n, rng), alg, rng);
    const HermitianSpectrum spec = hermitian_spectrum(x.matrix.adjoint() * x.matrix);
    int odd = 0;
    for (const auto& g : spec.nonzero()) odd += g.multiplicity % 2;
    rec.check(odd, s, "odd groups");
  }
  return {rec.result()};
}

std::vector<PropertyResult> homogeneity(std::uint64_t seed, int count) {
  Recorder rec("rho(s e^{it} X) = s rho(X)", 1e-10);
  for (int i = 0; i < count; ++i) {
    const std::uint64_t s = seed + i;
    Rng rng(s);
    try {
      const Sample smp = mixed_sample(s, rng);
      const double t = rng.uniform(0.5, 2.0);
      const Complex lam = std::polar(t, rng.uniform(0.0, 2.0 * std::numbers::pi));
      OrbitElement y = smp.x;
      y.matrix *= lam;
      std::optional<CanonicalFiberParams> fy;
      if (smp.fiber) fy = scaled(*smp.fiber, lam);
      compare_reports(rec, compute_all(smp.x, {}, {}, smp.fiber), compute_all(y, {}, {}, fy), t, s);
    } catch (const std::exception& e) {
      rec.fail(s, e.what());
    }
  }
  return {rec.result()};
}

std::vector<PropertyResult> conjugation(std::uint64_t seed, int count) {
  Recorder rec("rho(g X g^-1) = rho(X) for compact g", 1e-9);
  for (int i = 0; i < count; ++i) {
    const std::uint64_t s = seed + i;
    Rng rng(s);
    try {
      const Sample smp = mixed_sample(s, rng);
      const OrbitElement y = random_compact_conjugate(smp.x, s ^ 0x9E3779B97F4A7C15ULL);
      compare_reports(rec, compute_all(smp.x, {}, {}, smp.fiber), compute_all(y, {}, {}, smp.fiber), 1.0, s);
    } catch (const std::exception& e) {
      rec.fail(s, e.what());
    }
  }
  return {rec.result()};
}

std::vector<PropertyResult> gauge(std::uint64_t seed, int count) {
  Recorder r2("r^2 gauge invariant", 1e-12);
  Recorder ps("psi gauge invariant", 1e-12);
  Recorder mm("moment residual equivariant", 1e-10);
  for (int i = 0; i < count; ++i) {
    const std::uint64_t s = seed + i;
    Rng rng(s);
    try {
      const auto [d, p] = random_diagram_point(rng);
      const auto g = random_gauge(d, rng);
      const DiagramPoint q = apply_gauge(d, p, g);
      r2.check(rel(radial_norm(p), radial_norm(q)), s);
      const CMatrix a = psi(p);
      ps.check((psi(q) - a).norm() / a.norm(), s);
      mm.check(rel(moment_map(d, p).total, moment_map(d, q).total), s);
    } catch (const std::exception& e) {
      r2.fail(s, e.what());
    }
  }
  return {r2.result(), ps.result(), mm.result()};
}

std::vector<PropertyResult> jacobian(std::uint64_t seed, int count) {
  Recorder rec("solver Jacobian matches central differences", 1e-5);
  for (int i = 0; i < count; ++i) {
    const std::uint64_t s = seed + i;
    Rng rng(s);
    try {
      const auto [d, p] = random_diagram_point(rng);
      const MomentProblem prob(d, rng.complex_gaussian(d.n(), d.n()));
      const RVector x = prob.pack(p);
      const RMatrix jac = prob.jacobian(x);
      const double h = 1e-6 * std::max(1.0, x.cwiseAbs().maxCoeff());
      RMatrix fd(jac.rows(), jac.cols());
      for (Eigen::Index c = 0; c < x.size(); ++c) {
        RVector xp = x, xm = x;
        xp(c) += h;
        xm(c) -= h;
        fd.col(c) = (prob.residual(xp) - prob.residual(xm)) / (2.0 * h);
      }
      rec.check((jac - fd).cwiseAbs().maxCoeff() / std::max(jac.cwiseAbs().maxCoeff(), 1e-300), s);
    } catch (const std::exception& e) {
      rec.fail(s, e.what());
    }
  }
  return {rec.result()};
}

std::vector<PropertyResult> lift_sign(std::uint64_t seed, int count) {
  Recorder rec("spec(X'X'^*) independent of the sign of x", 1e-12);
  for (int i = 0; i < count; ++i) {
    const std::uint64_t s = seed + i;
    Rng rng(s);
    try {
      const AlgebraKind alg = AlgebraKind::make(Family::SO, rng.uniform_int(5, 12));
      std::vector<int> parts{3};
      const int pairs = rng.uniform_int(0, (alg.n - 3) / 4);
      for (int k = 0; k < 2 * pairs; ++k) parts.push_back(2);
      parts.resize(alg.n - 2 - 2 * pairs, 1);
      const OrbitElement x = random_orbit_element(JordanType(parts), alg, rng);
      const LiftResult plus = border_lift(x, {}, false);
      const LiftResult minus = border_lift(x, {}, true);
      const RVector ep = jacobi_eigen<double>(plus.x_prime * plus.x_prime.adjoint(), false).values;
      const RVector em = jacobi_eigen<double>(minus.x_prime * minus.x_prime.adjoint(), false).values;
      rec.check((ep - em).cwiseAbs().maxCoeff() / std::max(1.0, ep(0)), s);
    } catch (const std::exception& e) {
      rec.fail(s, e.what());
    }
  }
  return {rec.result()};
}

std::vector<PropertyResult> length2_factorization(std::uint64_t seed, int count) {
  Recorder rho("r^2 of the explicit factorization = potential_length2", 1e-9);
  Recorder eqs("beta alpha = 0, beta beta^* = alpha^* alpha, alpha beta = X", 1e-10);
  for (int i = 0; i < count; ++i) {
    const std::uint64_t s = seed + i;
    Rng rng(s);
    try {
      const Family f = random_family(rng);
      const OrbitElement x = random_square_zero(f, f == Family::SO ? 10 : 8, rng);
      const Length2Factorization fac = length2_factorize(x);
      rho.check(rel(radial_norm(fac.point), potential_length2(x)), s);
      if (fac.trivial) {
        eqs.check(0.0, s);
        continue;
      }
      const CMatrix& a = fac.point.alphas[0];
      const CMatrix& b = fac.point.betas[0];
      const double scale = std::max(x.matrix.norm(), 1e-300);
      const double res = std::max({(b * a).norm(), (b * b.adjoint() - a.adjoint() * a).norm(), (a * b - x.matrix).norm()});
      eqs.check(res / scale, s);
    } catch (const std::exception& e) {
      rho.fail(s, e.what());
    }
  }
  return {rho.result(), eqs.result()};
}

std::vector<PropertyResult> minimal(std::uint64_t seed, int count) {
  Recorder agree("potential_minimal = potential_length2", 1e-9);
  Recorder mult("multiplicity of the nonzero eigenvalue = kappa", 0.0);
  for (int i = 0; i < count; ++i) {
    const std::uint64_t s = seed + i;
    Rng rng(s);
    try {
      const Family f = static_cast<Family>(i % 3);
      const AlgebraKind alg = random_algebra(f, f == Family::SO ? 4 : 2, f == Family::SO ? 12 : 8, rng);
      std::vector<int> parts(f == Family::SO ? 2 : 1, 2);
      parts.resize(alg.n - parts.size(), 1);
      const OrbitElement x = random_orbit_element(JordanType(parts), alg, rng);
      agree.check(rel(potential_minimal(x), potential_length2(x)), s);
      const auto nz = hermitian_spectrum(x.matrix.adjoint() * x.matrix).nonzero();
      mult.check(nz.size() == 1 ? std::abs(nz[0].multiplicity - alg.kappa()) : 1.0, s);
    } catch (const std::exception& e) {
      agree.fail(s, e.what());
    }
  }
  return {agree.result(), mult.result()};
}

std::vector<PropertyResult> lift_coh2(std::uint64_t seed, int count) {
  Recorder rec("potential_32k = potential_coh2 on (3,1^(n-3))", 1e-9);
  for (int i = 0; i < count; ++i) {
    const std::uint64_t s = seed + i;
    Rng rng(s);
    try {
      const AlgebraKind alg = AlgebraKind::make(Family::SO, rng.uniform_int(5, 9));
      std::vector<int> parts{3};
      parts.resize(alg.n - 2, 1);
      const OrbitElement x = random_orbit_element(JordanType(parts), alg, rng);
      rec.check(rel(potential_32k(x), potential_coh2(x)), s);
    } catch (const std::exception& e) {
      rec.fail(s, e.what());
    }
  }
  return {rec.result()};
}

std::vector<PropertyResult> fiber322(std::uint64_t seed, int count) {
  Recorder agree("potential_322_closed = potential_32k on (3,2,2) fibres in so(7), so(9)", 1e-9);
  Recorder ident("c1^2 - c2 - 2 c21 = 8 |a|^2 |v|^2", 1e-9);
  for (int i = 0; i < count; ++i) {
    const std::uint64_t s = seed + i;
    Rng rng(s);
    try {
      const auto params = random_fiber_params(FiberVariant::F322, rng);
      const OrbitElement y = canonical_fiber(params, FiberVariant::F322, (i % 2) * 2);
      agree.check(rel(potential_322_closed(y), potential_32k(y)), s);
      const Invariants inv = invariants(y);
      ident.check(rel(inv.c1 * inv.c1 - inv.c2 - 2.0 * inv.c21, 8.0 * std::norm(params.a) * params.v_norm2()), s);
    } catch (const std::exception& e) {
      agree.fail(s, e.what());
    }
  }
  return {agree.result(), ident.result()};
}

std::vector<PropertyResult> cubic324(std::uint64_t seed, int count) {
  Recorder agree("potential_324_cubic = potential_32k on (3,2^4) fibres in so(11)", 1e-8);
  Recorder roots("cubic roots = double eigenvalues of X'X'^*", 1e-8);
  for (int i = 0; i < count; ++i) {
    const std::uint64_t s = seed + i;
    Rng rng(s);
    try {
      const auto params = random_fiber_params(FiberVariant::F324, rng);
      const OrbitElement y = canonical_fiber(params, FiberVariant::F324);
      agree.check(rel(potential_324_cubic(params), potential_32k(y)), s);
      const LiftResult lift = border_lift(y);
      const RVector ev = jacobi_eigen<double>(lift.x_prime * lift.x_prime.adjoint(), false).values;
      const auto r = cubic_roots(cubic_coefficients(params));
      double dev = 0.0;
      for (int k = 0; k < 3; ++k)
        dev = std::max({dev, std::abs(ev(2 * k) - r[k]), std::abs(ev(2 * k + 1) - r[k])});
      roots.check(dev / std::max(ev(0), 1e-300), s);
    } catch (const std::exception& e) {
      agree.fail(s, e.what());
    }
  }
  return {agree.result(), roots.result()};
}

std::vector<PropertyResult> oracle_length2(std::uint64_t seed, int count) {
  Recorder rec("oracle r^2 = potential_length2", 1e-5);
  for (int i = 0; i < count; ++i) {
    const std::uint64_t s = seed + i;
    Rng rng(s);
    try {
      const Family f = random_family(rng);
      const OrbitElement x = random_square_zero(f, f == Family::SO ? 8 : 6, rng);
      SolveOptions opts;
      opts.seed = s;
      rec.check(rel(solve_moment(x, opts).r2, potential_length2(x)), s);
    } catch (const std::exception& e) {
      rec.fail(s, e.what());
    }
  }
  return {rec.result()};
}

std::vector<PropertyResult> oracle_sl3(std::uint64_t seed, int count) {
  Recorder rec("oracle r^2 = potential_sl3_regular on complex entries", 1e-5);
  for (int i = 0; i < count; ++i) {
    const std::uint64_t s = seed + i;
    Rng rng(s);
    try {
      CMatrix t = CMatrix::Zero(3, 3);
      t(0, 1) = rng.complex_normal();
      t(0, 2) = rng.complex_normal();
      t(1, 2) = rng.complex_normal();
      const CMatrix u = haar_unitary(3, rng);
      const OrbitElement x{u * t * u.adjoint(), AlgebraKind::make(Family::SL, 3), BilinearForm::identity(3)};
      SolveOptions opts;
      opts.seed = s;
      rec.check(rel(solve_moment(x, opts).r2, potential_sl3_regular(t(0, 1), t(0, 2), t(1, 2))), s);
    } catch (const std::exception& e) {
      rec.fail(s, e.what());
    }
  }
  return {rec.result()};
}

const std::map<std::string, SuiteFn>& registry() {
  static const std::map<std::string, SuiteFn> r{
      {"conjugation", conjugation},
      {"cubic324", cubic324},
      {"even-multiplicity", even_multiplicity},
      {"fiber322", fiber322},
      {"gauge", gauge},
      {"homogeneity", homogeneity},
      {"jacobian", jacobian},
      {"length2-factorization", length2_factorization},
      {"lift-coh2", lift_coh2},
      {"lift-sign", lift_sign},
      {"minimal", minimal},
      {"oracle-length2", oracle_length2},
      {"oracle-sl3", oracle_sl3},
  };
  return r;
}

}  // namespace

std::pair<Diagram, DiagramPoint> random_diagram_point(Rng& rng) {
  const Family f = random_family(rng);
  const int k = rng.uniform_int(2, 3);
  const AlgebraKind alg = random_algebra(f, f == Family::SO ? 5 : 3, 8, rng);
  JordanType jt = random_partition(alg.n, f, k, rng);
  if (jt.longest() < 2) {
    // force a nonzero flag: the smallest valid nilpotent type
    std::vector<int> parts(f == Family::SO ? 2 : 1, 2);
    parts.resize(alg.n - parts.size(), 1);
    jt = JordanType(parts);
  }
  const Diagram d = Diagram::image_flag(jt, alg);
  std::vector<CMatrix> alphas, betas;
  for (int i = 0; i + 1 < d.length(); ++i) {
    alphas.push_back(rng.complex_gaussian(d.dims[i + 1], d.dims[i]));
    betas.push_back(rng.complex_gaussian(d.dims[i], d.dims[i + 1]));
  }
  if (d.self_dual()) return {d, DiagramPoint::from_alphas(d, std::move(alphas))};
  return {d, DiagramPoint{std::move(alphas), std::move(betas)}};
}

CanonicalFiberParams random_fiber_params(FiberVariant variant, Rng& rng) {
  CanonicalFiberParams p;
  p.a = rng.complex_normal();
  p.b = rng.complex_normal();
  if (variant == FiberVariant::F322) {
    p.v[0] = rng.complex_normal();
  } else {
    std::array<Complex, 3> w;
    for (auto& z : p.v) z = rng.complex_normal();
    for (auto& z : w) z = rng.complex_normal();
    p.w = w;
  }
  return p;
}

std::vector<std::string> suite_names() {
  std::vector<std::string> names;
  for (const auto& [name, fn] : registry()) names.push_back(name);
  return names;
}

SuiteResult run_suite(const std::string& name, std::uint64_t seed, int count) {
  const auto it = registry().find(name);
  if (it == registry().end()) throw InputError("unknown suite '" + name + "'");
  if (count <= 0) throw InputError("suite sample count must be positive");
  return SuiteResult{name, seed, count, it->second(seed, count)};
}

}  // namespace hkpot
