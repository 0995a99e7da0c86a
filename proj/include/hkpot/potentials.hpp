#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hkpot/lie_classical.hpp"
#include "hkpot/matrix_core.hpp"
#include "hkpot/moment_solver.hpp"
#include "hkpot/types.hpp"

namespace hkpot {

struct Invariants {
  double c1 = 0.0;   ///< Tr X X^*
  double c2 = 0.0;   ///< Tr Y Y^*, Y = [X, X^*]
  double c21 = 0.0;  ///< Tr X^2 (X^*)^2 = |X^2|^2
  int kappa = 1;
};

Invariants invariants(const OrbitElement& x);

/// rho = 2 sum k_i sqrt(mu_i) over the grouped spectrum of X^* X, for X^2 = 0.
double potential_length2(const OrbitElement& x, const Tolerances& tol = {});

/// rho = sqrt(4 kappa c1) on the minimal orbit. Throws InputError for other
/// types and NumericalError when the measured multiplicity of the single
/// nonzero eigenvalue of X^* X is not kappa.
double potential_minimal(const OrbitElement& x, const Tolerances& tol = {});

/// rho^2 = 4 kappa c1 + 4 kappa sqrt(2 c1^2 - kappa c2) on the
/// cohomogeneity-two orbits.
double potential_coh2(const OrbitElement& x, const Tolerances& tol = {});

struct LiftResult {
  CVector x;         ///< X^2 = x x^T
  CMatrix x_prime;   ///< [[X, x], [-x^T, 0]]
  double residual = 0.0;  ///< |x x^T - X^2| / max(1, |X|^2)
};

/// Border lift of an so(n) element with X^3 = 0 and rank X^2 <= 1, taken in
/// the identity convention (anti-diagonal input is converted). `negate`
/// flips the sign of x.
LiftResult border_lift(const OrbitElement& x, const Tolerances& tol = {}, bool negate = false);

/// potential_length2 of the border lift; asserts even multiplicities.
double potential_32k(const OrbitElement& x, const Tolerances& tol = {});

/// rho^2 = 8 c1 + 16 sqrt(c21) + 16 sqrt(c1^2 - c2 - 2 c21) on (3,2^2,1^(n-7)).
/// For n > 7 this is only correct on the so(7) fibre padded by zeros;
/// generic orbit elements in so(8) and up disagree with the lift by ~1%.
double potential_322_closed(const OrbitElement& x, const Tolerances& tol = {});

/// z^3 - p z^2 + q z - r.
struct CubicCoeffs {
  double p = 0.0;
  double q = 0.0;
  double r = 0.0;
};

/// p = 2|a|^2 + |b|^2 + |v|^2 + |w|^2, q = |zeta|^2 + |b|^2|w|^2 + 2|a|^2(|v|^2 + |w|^2),
/// r = 2|a|^2 |zeta|^2.
CubicCoeffs cubic_coefficients(const CanonicalFiberParams& params);

/// Roots in descending order, each >= 0. Throws NumericalError on
/// complex or negative roots beyond tolerance.
std::array<double, 3> cubic_roots(const CubicCoeffs& c, const Tolerances& tol = {});

/// The roots are the three double eigenvalues of X'X'^*, so
/// rho = 4 (sqrt(l1) + sqrt(l2) + sqrt(l3)).
double potential_324_cubic(const CanonicalFiberParams& params, const Tolerances& tol = {});

/// rho = 2 sqrt((|a|^(2/3) + |c|^(2/3))^3 + |b|^2) for [[0,a,b],[0,0,c],[0,0,0]].
double potential_sl3_regular(Complex a, Complex b, Complex c);

struct UpperTriangular3 {
  Complex a, b, c;
  CMatrix basis;  ///< unitary U with U^* X U = [[0,a,b],[0,0,c],[0,0,0]]
};

/// Unitary reduction of a nilpotent 3x3 matrix to strictly upper
/// triangular form.
UpperTriangular3 sl3_triangularize(const CMatrix& x, const Tolerances& tol = {});

/// potential_sl3_regular on the triangular form of any nilpotent X in sl(3).
double potential_sl3(const OrbitElement& x, const Tolerances& tol = {});

struct MethodResult {
  std::string status;  ///< "ok", "failed", "skipped"
  double rho = 0.0;
  std::string detail;
};

struct OracleOptions {
  bool enabled = false;
  SolveOptions solve;
};

struct OracleBlock {
  double r2 = 0.0;
  double rho = 0.0;
  double residual = 0.0;
  std::uint64_t seed = 0;
  int iterations = 0;
  int restarts = 0;
  bool boundary_stratum = false;
};

struct PotentialReport {
  std::string algebra;
  JordanType jordan_type;
  std::map<std::string, MethodResult> methods;
  double max_pairwise_deviation = 0.0;
  std::optional<OracleBlock> oracle;
  Invariants invariants;
  std::vector<SpectrumGroup> spectrum;        ///< X^* X
  std::vector<SpectrumGroup> lift_spectrum;   ///< X'X'^*, so only
  std::vector<std::string> flags;
  bool all_ok() const;
  /// Methods that succeeded, by name.
  std::map<std::string, double> values() const;
};

/// Every applicable closed form, plus the oracle when requested. Throws
/// MembershipError for invalid input; method failures are recorded.
PotentialReport compute_all(const OrbitElement& x, const Tolerances& tol = {}, const OracleOptions& oracle = {},
                            const std::optional<CanonicalFiberParams>& fiber = std::nullopt);

}  // namespace hkpot
