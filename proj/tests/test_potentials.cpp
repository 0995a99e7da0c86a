#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "hkpot/moment_solver.hpp"
#include "hkpot/potentials.hpp"
#include "hkpot/suites.hpp"

using namespace hkpot;

namespace {

OrbitElement sl4_block(double a1, double a2) {
  CMatrix x = CMatrix::Zero(4, 4);
  x(0, 2) = a1;
  x(1, 3) = a2;
  return {x, AlgebraKind::make(Family::SL, 4), BilinearForm::identity(4)};
}

OrbitElement zero(Family f, int n) {
  const AlgebraKind alg = AlgebraKind::make(f, n);
  return {CMatrix::Zero(n, n), alg, f == Family::SP ? BilinearForm::standard_symplectic(n) : BilinearForm::identity(n)};
}

// Eigenvalues of X'X'^* by Eigen's own solver, descending.
RVector lift_eigenvalues(const OrbitElement& x) {
  const CMatrix xp = border_lift(x).x_prime;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(xp * xp.adjoint());
  return es.eigenvalues().reverse();
}

CanonicalFiberParams params322(Complex a, Complex b, Complex v) {
  CanonicalFiberParams p;
  p.a = a;
  p.b = b;
  p.v[0] = v;
  return p;
}

double rel(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

}  // namespace

TEST(Invariants, ClosedForms) {
  const Invariants z = invariants(zero(Family::SL, 3));
  EXPECT_EQ(z.c1, 0.0);
  EXPECT_EQ(z.c2, 0.0);
  EXPECT_EQ(z.c21, 0.0);
  const Invariants i = invariants(sl4_block(3, 4));
  EXPECT_NEAR(i.c1, 25.0, 1e-12);
  EXPECT_NEAR(i.c2, 2.0 * (81.0 + 256.0), 1e-10);
  EXPECT_EQ(i.c21, 0.0);
  EXPECT_EQ(i.kappa, 1);
}

TEST(Invariants, ThreeBlockRelation) {
  Rng rng(1);
  for (int n = 5; n <= 9; ++n) {
    std::vector<int> parts{3};
    parts.resize(n - 2, 1);
    const auto x = random_orbit_element(JordanType(parts), AlgebraKind::make(Family::SO, n), rng);
    const Invariants inv = invariants(x);
    const double x4 = std::pow(border_lift(x).x.squaredNorm(), 2);
    EXPECT_LE(rel(inv.c2, inv.c1 * inv.c1 - 2.0 * x4), 1e-10) << n;
  }
}

TEST(Invariants, Scaling) {
  Rng rng(2);
  const auto x = random_orbit_element(JordanType({3, 2, 2}), AlgebraKind::make(Family::SO, 7), rng);
  OrbitElement y = x;
  y.matrix *= 1.5;
  const auto a = invariants(x), b = invariants(y);
  EXPECT_NEAR(b.c1, 1.5 * 1.5 * a.c1, 1e-12 * b.c1);
  EXPECT_NEAR(b.c2, std::pow(1.5, 4) * a.c2, 1e-12 * b.c2);
  EXPECT_NEAR(b.c21, std::pow(1.5, 4) * a.c21, 1e-12 * b.c21);
}

TEST(Length2, Diag34Value) {
  EXPECT_NEAR(potential_length2(sl4_block(3, 4)), 14.0, 1e-12);
  EXPECT_EQ(potential_length2(zero(Family::SO, 5)), 0.0);
  CMatrix j3 = CMatrix::Zero(3, 3);
  j3(0, 1) = j3(1, 2) = 1.0;
  EXPECT_THROW(potential_length2({j3, AlgebraKind::make(Family::SL, 3), BilinearForm::identity(3)}), InputError);
}

TEST(Length2, AgreesWithCoh2InSo7) {
  Rng rng(3);
  const auto x = random_orbit_element(JordanType({2, 2, 1, 1, 1}), AlgebraKind::make(Family::SO, 7), rng);
  EXPECT_LE(rel(potential_length2(x), potential_minimal(x)), 1e-9);
  const auto y = random_orbit_element(JordanType({2, 2, 2, 2}), AlgebraKind::make(Family::SO, 8), rng);
  EXPECT_LE(rel(potential_length2(y), potential_coh2(y)), 1e-9);
}

TEST(Minimal, ScaledElementaryMatrix) {
  for (int n = 2; n <= 6; ++n) {
    CMatrix x = CMatrix::Zero(n, n);
    x(0, 1) = Complex(0.6, -0.8) * 2.5;
    const OrbitElement e{x, AlgebraKind::make(Family::SL, n), BilinearForm::identity(n)};
    EXPECT_NEAR(potential_minimal(e), 5.0, 1e-12);
  }
  EXPECT_EQ(potential_minimal(zero(Family::SP, 4)), 0.0);
  EXPECT_THROW(potential_minimal(sl4_block(3, 4)), InputError);
}

TEST(Coh2, BlockForm) {
  EXPECT_NEAR(potential_coh2(sl4_block(3, 4)), 14.0, 1e-12);
  EXPECT_NEAR(potential_coh2(sl4_block(2, 2)), 8.0, 1e-12);
  EXPECT_EQ(potential_coh2(zero(Family::SL, 4)), 0.0);
  CMatrix x = CMatrix::Zero(3, 3);
  x(0, 1) = 1.0;
  EXPECT_THROW(potential_coh2({x, AlgebraKind::make(Family::SL, 3), BilinearForm::identity(3)}), InputError);
}

TEST(BorderLift, TrivialForSquareZero) {
  Rng rng(4);
  const auto x = random_orbit_element(JordanType({2, 2, 1, 1, 1}), AlgebraKind::make(Family::SO, 7), rng);
  const LiftResult l = border_lift(x);
  EXPECT_EQ(l.x.norm(), 0.0);
  EXPECT_LE((l.x_prime.topLeftCorner(7, 7) - x.matrix).norm(), 0.0);
  EXPECT_NEAR(potential_32k(x), potential_length2(x), 1e-12 * potential_length2(x));
}

TEST(BorderLift, ResidualAndLiftInvariants) {
  Rng rng(5);
  const auto x = random_orbit_element(JordanType({3, 1, 1, 1, 1}), AlgebraKind::make(Family::SO, 7), rng);
  const LiftResult l = border_lift(x);
  EXPECT_LE((l.x * l.x.transpose() - x.matrix * x.matrix).norm(), 1e-10);
  EXPECT_LE((l.x_prime + l.x_prime.transpose()).norm(), 1e-13);
  EXPECT_LE((l.x_prime * l.x_prime).norm(), 1e-10 * l.x_prime.squaredNorm());
  const LiftResult m = border_lift(x, {}, true);
  EXPECT_LE((m.x + l.x).norm(), 0.0);
}

TEST(BorderLift, FiberVectorPattern) {
  const Complex a(0.3, 1.1);
  const OrbitElement x = to_standard_form(canonical_fiber(params322(a, 0.7, Complex(0.2, -0.5)), FiberVariant::F322));
  const CVector v = border_lift(x).x;
  // isotropic, |a|/sqrt2 on the first coordinate and on coordinate m+2, zero elsewhere
  EXPECT_LE(std::abs(v.dot(v.conjugate())), 1e-14);
  const double m = std::abs(a) / std::numbers::sqrt2;
  for (int i = 0; i < 7; ++i) EXPECT_NEAR(std::abs(v(i)), (i == 0 || i == 4) ? m : 0.0, 1e-13) << i;
}

TEST(BorderLift, Rejections) {
  EXPECT_THROW(border_lift(sl4_block(1, 1)), InputError);
  const auto x = jordan_representative(JordanType({3, 3, 1}), AlgebraKind::make(Family::SO, 7));
  EXPECT_THROW(border_lift(x), InputError);
  const auto y = jordan_representative(JordanType({5}), AlgebraKind::make(Family::SO, 5));
  EXPECT_THROW(border_lift(y), InputError);
}

TEST(Lift32k, EvenMultiplicityOnRandomElements) {
  Rng rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    const auto x = random_orbit_element(JordanType({3, 2, 2, 2, 2, 1}), AlgebraKind::make(Family::SO, 12), rng);
    const RVector ev = lift_eigenvalues(x);
    for (int k = 0; k < 6; k += 2) EXPECT_NEAR(ev(k), ev(k + 1), 1e-10 * ev(0));
    EXPECT_NO_THROW(potential_32k(x));
  }
}

TEST(Closed322, AgreesWithLift) {
  const OrbitElement y = canonical_fiber(params322(1.0, 0.0, 1.0), FiberVariant::F322);
  EXPECT_LE(rel(potential_322_closed(y), potential_32k(y)), 1e-9);
  const Invariants inv = invariants(y);
  EXPECT_NEAR(inv.c1 * inv.c1 - inv.c2 - 2 * inv.c21, 8.0, 1e-12);
  EXPECT_EQ(potential_322_closed(zero(Family::SO, 7)), 0.0);
  EXPECT_THROW(potential_322_closed(sl4_block(1, 2)), InputError);
}

TEST(Closed322, DegeneratesToCoh2) {
  // v = 0 drops the type to (3,1^4)
  const OrbitElement y = canonical_fiber(params322(Complex(0.4, 0.9), Complex(-1.2, 0.3), 0.0), FiberVariant::F322);
  EXPECT_EQ(jordan_type_of(y.matrix), JordanType({3, 1, 1, 1, 1}));
  const Invariants inv = invariants(y);
  const double rho = std::sqrt(8 * inv.c1 + 16 * std::sqrt(inv.c21) + 16 * std::sqrt(std::max(0.0, inv.c1 * inv.c1 - inv.c2 - 2 * inv.c21)));
  EXPECT_LE(rel(rho, potential_coh2(y)), 1e-8);
}

// In so(8) and up the closed formula is exact on the padded fibre only. On a
// generic orbit element the lift and the moment-map solve agree and it is off.
TEST(Closed322, GenericElementBeyondSo7) {
  Rng rng(1);
  const auto x = random_orbit_element(JordanType({3, 2, 2, 1, 1}), AlgebraKind::make(Family::SO, 9), rng);
  const double lift = potential_32k(x);
  const SolveResult s = solve_moment(x);
  EXPECT_LE(rel(s.r2, lift), 1e-9);
  EXPECT_GT(rel(potential_322_closed(x), lift), 1e-3);
  const auto rep = compute_all(x);
  EXPECT_EQ(rep.methods.at("closed322").status, "skipped");
  EXPECT_TRUE(rep.all_ok());

  const auto padded = canonical_fiber(params322(1.0, 0.5, Complex(0.0, 1.0)), FiberVariant::F322, 2);
  EXPECT_LE(rel(potential_322_closed(padded), potential_32k(padded)), 1e-9);
}

TEST(Cubic, CoefficientsAreSymmetricFunctionsOfTheLiftSpectrum) {
  Rng rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const auto p = random_fiber_params(FiberVariant::F324, rng);
    const OrbitElement y = canonical_fiber(p, FiberVariant::F324);
    const RVector ev = lift_eigenvalues(y);
    const double l1 = ev(0), l2 = ev(2), l3 = ev(4);
    const CubicCoeffs c = cubic_coefficients(p);
    const double scale = std::pow(std::max(1.0, l1), 3);
    EXPECT_NEAR(c.p, l1 + l2 + l3, 1e-10 * scale);
    EXPECT_NEAR(c.q, l1 * l2 + l1 * l3 + l2 * l3, 1e-10 * scale);
    EXPECT_NEAR(c.r, l1 * l2 * l3, 1e-10 * scale);
    // p = c1/2 + |a|^2 with c1 measured on the constructed matrix
    EXPECT_LE(rel(c.p, invariants(y).c1 / 2 + std::norm(p.a)), 1e-10);
  }
}

TEST(Cubic, DegenerateParameters) {
  CanonicalFiberParams p;
  p.b = Complex(1.0, 1.0);
  p.v = {Complex(0.5), Complex(0.0, 2.0), Complex(1.0)};
  p.w = std::array<Complex, 3>{};
  const CubicCoeffs c = cubic_coefficients(p);
  EXPECT_EQ(c.q, 0.0);
  EXPECT_EQ(c.r, 0.0);
  const auto roots = cubic_roots(c);
  EXPECT_NEAR(roots[0], 2.0 + 0.25 + 4.0 + 1.0, 1e-12);
  EXPECT_EQ(roots[1], 0.0);
  EXPECT_EQ(roots[2], 0.0);
  const double rho = potential_324_cubic(p);
  EXPECT_NEAR(rho, 4.0 * std::sqrt(7.25), 1e-12);
  EXPECT_LE(rel(rho, potential_32k(canonical_fiber(p, FiberVariant::F324))), 1e-8);

  // zeta = 0 with a != 0: one root is exactly 0
  CanonicalFiberParams q;
  q.a = 1.0;
  q.b = 0.5;
  q.v = {Complex(1.0), Complex(0.0), Complex(0.0)};
  q.w = std::array<Complex, 3>{Complex(0.0), Complex(1.0), Complex(0.0)};
  EXPECT_EQ(q.zeta(), Complex(0.0));
  EXPECT_EQ(cubic_roots(cubic_coefficients(q))[2], 0.0);
  EXPECT_LE(rel(potential_324_cubic(q), potential_32k(canonical_fiber(q, FiberVariant::F324))), 1e-8);
  EXPECT_THROW(potential_324_cubic(params322(1, 1, 1)), InputError);
}

TEST(Cubic, RejectsComplexRoots) {
  // z^3 - z^2 + z - 1 has roots 1, i, -i
  EXPECT_THROW(cubic_roots({1.0, 1.0, 1.0}), NumericalError);
}

TEST(Sl3, ExactValues) {
  EXPECT_EQ(potential_sl3_regular(1.0, 1.0, 1.0), 6.0);
  EXPECT_NEAR(potential_sl3_regular(1.0, 0.0, 1.0), 4.0 * std::numbers::sqrt2, 1e-15);
  EXPECT_NEAR(potential_sl3_regular(0.0, Complex(0.0, 2.5), 0.0), 5.0, 1e-15);
  CMatrix x = CMatrix::Zero(3, 3);
  x(0, 2) = Complex(0.0, 2.5);
  const OrbitElement e{x, AlgebraKind::make(Family::SL, 3), BilinearForm::identity(3)};
  EXPECT_NEAR(potential_sl3(e), potential_minimal(e), 1e-12);
}

TEST(Sl3, TriangularizationOfConjugates) {
  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    CMatrix t = CMatrix::Zero(3, 3);
    t(0, 1) = trial % 3 ? rng.complex_normal() : Complex(0.0);
    t(0, 2) = rng.complex_normal();
    t(1, 2) = trial % 3 == 1 ? Complex(0.0) : rng.complex_normal();
    Eigen::HouseholderQR<CMatrix> qr(rng.complex_gaussian(3, 3));
    const CMatrix u = qr.householderQ();
    const CMatrix x = u * t * u.adjoint();
    const auto tri = sl3_triangularize(x);
    const CMatrix& b = tri.basis;
    EXPECT_LE((b.adjoint() * b - CMatrix::Identity(3, 3)).norm(), 1e-12);
    const OrbitElement e{x, AlgebraKind::make(Family::SL, 3), BilinearForm::identity(3)};
    EXPECT_LE(rel(potential_sl3(e), potential_sl3_regular(t(0, 1), t(0, 2), t(1, 2))), 1e-10) << trial;
  }
}

TEST(ComputeAll, Diag34Element) {
  OracleOptions oo;
  oo.enabled = true;
  const auto rep = compute_all(sl4_block(3, 4), {}, oo);
  const auto v = rep.values();
  ASSERT_TRUE(v.count("length2") && v.count("coh2") && v.count("oracle"));
  EXPECT_NEAR(v.at("length2"), 14.0, 1e-12);
  EXPECT_NEAR(v.at("coh2"), 14.0, 1e-12);
  EXPECT_NEAR(v.at("oracle"), 14.0, 14e-5);
  EXPECT_TRUE(rep.all_ok());
  ASSERT_TRUE(rep.oracle.has_value());
  EXPECT_LE(rep.oracle->residual, 1e-10 * 5.0);
}

TEST(ComputeAll, ThreeTwoTwoInSo7) {
  Rng rng(9);
  const auto x = random_orbit_element(JordanType({3, 2, 2}), AlgebraKind::make(Family::SO, 7), rng);
  OracleOptions oo;
  oo.enabled = true;
  const auto rep = compute_all(x, {}, oo);
  EXPECT_EQ(rep.values().size(), 3u);
  EXPECT_LE(rep.max_pairwise_deviation, 1e-6);
  EXPECT_FALSE(rep.lift_spectrum.empty());
}

TEST(ComputeAll, ZeroIsTrivial) {
  const auto rep = compute_all(zero(Family::SO, 6));
  EXPECT_NE(std::find(rep.flags.begin(), rep.flags.end(), "trivial"), rep.flags.end());
  for (const auto& [name, m] : rep.methods)
    if (m.status == "ok") EXPECT_EQ(m.rho, 0.0) << name;
  EXPECT_TRUE(rep.all_ok());
}

TEST(ComputeAll, AntiDiagonalInputIsConverted) {
  const auto y = canonical_fiber(params322(1.0, 0.5, Complex(0.0, 1.0)), FiberVariant::F322);
  const auto rep = compute_all(y);
  EXPECT_TRUE(rep.all_ok());
  EXPECT_LE(rep.max_pairwise_deviation, 1e-9);
}

TEST(ComputeAll, CubicNeedsParameters) {
  Rng rng(10);
  const auto p = random_fiber_params(FiberVariant::F324, rng);
  const auto y = canonical_fiber(p, FiberVariant::F324);
  EXPECT_EQ(compute_all(y).methods.at("cubic324").status, "skipped");
  const auto rep = compute_all(y, {}, {}, p);
  EXPECT_EQ(rep.methods.at("cubic324").status, "ok");
  EXPECT_LE(rep.max_pairwise_deviation, 1e-8);
}

TEST(ComputeAll, RejectsNonMembers) {
  CMatrix x = CMatrix::Zero(3, 3);
  x(0, 1) = 1.0;
  EXPECT_THROW(compute_all({x, AlgebraKind::make(Family::SO, 3), BilinearForm::identity(3)}), MembershipError);
}
