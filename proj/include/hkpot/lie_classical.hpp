#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hkpot/forms.hpp"
#include "hkpot/random.hpp"
#include "hkpot/types.hpp"

namespace hkpot {

enum class Family { SL, SO, SP };

std::string to_string(Family f);
Family parse_family(const std::string& s);

/// A classical algebra sl(n), so(n) or sp(n); n is always the matrix size.
struct AlgebraKind {
  Family family = Family::SL;
  int n = 0;

  static AlgebraKind make(Family family, int n);

  /// Multiplicity constant: 2 for so, 1 for sl and sp.
  int kappa() const { return family == Family::SO ? 2 : 1; }
  /// Parity constant of the flag forms: 0 for so, 1 for sp (unused for sl).
  int delta() const { return family == Family::SP ? 1 : 0; }
  /// Form used by jordan_representative: identity (sl), anti-diagonal
  /// (so), standard symplectic (sp).
  BilinearForm representative_form() const;
  /// Form the potential formulas expect: identity (sl, so), standard
  /// symplectic (sp).
  BilinearForm standard_form() const;

  bool operator==(const AlgebraKind&) const = default;
};

/// Partition of n listing Jordan block sizes, weakly decreasing.
struct JordanType {
  std::vector<int> parts;

  JordanType() = default;
  /// Sorts and validates positivity; throws InputError on empty/non-positive.
  explicit JordanType(std::vector<int> p);

  int size() const;     ///< n
  int longest() const;  ///< nilpotency order k
  int count(int part) const;
  /// rank(X^j) for an element of this type.
  int rank_of_power(int j) const;
  bool valid_for(Family f) const;
  std::string str() const;  ///< e.g. "3,2,2"

  bool operator==(const JordanType&) const = default;
};

/// Jordan type read off the rank sequence rank(X^j).
JordanType jordan_type_of(const CMatrix& x, const Tolerances& tol = {});

struct OrbitElement {
  CMatrix matrix;
  AlgebraKind algebra;
  BilinearForm form;  ///< convention under which membership holds
};

struct ValidationReport {
  double trace_residual = 0;       ///< |tr X| / max(1, |X|)
  double membership_residual = 0;  ///< |X^T w + w X| / max(1, |X|), 0 for sl
  double nilpotency_residual = 0;  ///< |X^n| / max(1, |X|^n)
  bool square = true;
  bool form_matches = true;
  bool trace_ok = true;
  bool membership_ok = true;
  bool nilpotent = true;

  bool ok() const { return square && form_matches && trace_ok && membership_ok && nilpotent; }
  std::string describe() const;
};

/// Trace, form-skewness and nilpotency checks, each at tol.check_tol
/// relative to the matrix norm.
ValidationReport validate(const OrbitElement& elem, const Tolerances& tol = {});

/// Nilpotent element of type `jt` in `alg`.
///
/// sl: plain Jordan blocks (ones on the superdiagonal).
/// so: anti-diagonal form; paired blocks nested from the outside in, the
///     unpaired odd block in the middle with alternating signs (J_3 has
///     entries 1, -1).
/// sp: standard symplectic form, [[A, B], [0, -A^T]] blockwise.
/// `scales`, when given, multiplies block i (pairs count once) by scales[i].
OrbitElement jordan_representative(const JordanType& jt, AlgebraKind alg,
                                   const std::vector<Complex>& scales = {});

/// Unitary Q with Q^T S Q = 1 for the anti-diagonal S:
/// (1/sqrt2) [[1_m, 0, -i 1_m], [0, sqrt2, 0], [S_m, 0, i S_m]]
/// (middle row/column only for odd n).
CMatrix build_Q(int n);

/// Anti-diagonal so(n) element Y -> Q^* Y Q, skew-symmetric. Elements
/// already under the identity form, and sl/sp elements, are returned as-is.
OrbitElement to_standard_form(const OrbitElement& elem, const Tolerances& tol = {});

enum class FiberVariant { F322, F324 };

/// Entries of the canonical fibre matrices of the (3,2^2) and (3,2^4)
/// orbits in so(n). For F322 only v[0] is used and w is absent.
struct CanonicalFiberParams {
  Complex a{0.0, 0.0};
  Complex b{0.0, 0.0};
  std::array<Complex, 3> v{};
  std::optional<std::array<Complex, 3>> w;

  Complex zeta() const;  ///< sum_i v_i w_i, 0 without w
  double v_norm2() const;
  double w_norm2() const;
};

/// The fibre matrix in the anti-diagonal convention, 7x7 (F322) or 11x11
/// (F324), isometrically embedded into so(base + padding).
OrbitElement canonical_fiber(const CanonicalFiberParams& params, FiberVariant variant,
                             int padding = 0);

/// Haar samplers.
CMatrix haar_unitary(int n, Rng& rng);          ///< SU(n)
CMatrix haar_orthogonal(int n, Rng& rng);       ///< SO(n, R), as complex
CMatrix haar_compact_symplectic(int n, Rng& rng);  ///< Sp(n/2) = U(n) cap Sp(n, C)

/// g X g^{-1} with g Haar in the compact group of the algebra. so elements
/// must use the identity form.
OrbitElement random_compact_conjugate(const OrbitElement& elem, std::uint64_t seed);

/// A generic element of the orbit of type `jt`: representative with random
/// block scales, conjugated by a random complex group element (Cayley
/// transform of a random algebra element), then by a Haar compact element.
/// so elements come out in the identity convention.
OrbitElement random_orbit_element(const JordanType& jt, AlgebraKind alg, Rng& rng);

enum class Method { Length2, Minimal, Coh2, Lift32k, Closed322, Cubic324, Sl3Regular, Oracle };

std::string to_string(Method m);

struct Classification {
  bool is_minimal = false;
  bool is_coh2 = false;
  bool is_zero = false;
  int diagram_length = 0;
  std::vector<Method> methods;  ///< applicable routes, oracle last
};

/// Table-driven classification. Cubic324 is listed for (3,2^4,...) but
/// needs fibre parameters to run.
Classification classify(const JordanType& jt, AlgebraKind alg);

}  // namespace hkpot
