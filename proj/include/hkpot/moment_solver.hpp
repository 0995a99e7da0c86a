#pragma once

#include <cstdint>
#include <string>

#include "hkpot/lie_classical.hpp"
#include "hkpot/quiver.hpp"
#include "hkpot/types.hpp"

namespace hkpot {

/// Real least-squares formulation of mu = 0, psi = X on a diagram.
///
/// Parameters are the real and imaginary parts of every arrow entry
/// (alphas then betas, column-major); self-dual diagrams store alphas
/// only. The residual stacks, per gauged node, mu_C then mu_R (all
/// entries, real and imaginary parts), then psi - X.
class MomentProblem {
 public:
  MomentProblem(Diagram d, CMatrix target);

  const Diagram& diagram() const { return diagram_; }
  const CMatrix& target() const { return target_; }
  Eigen::Index num_params() const { return num_params_; }
  Eigen::Index num_residuals() const { return num_residuals_; }

  DiagramPoint unpack(const RVector& x) const;
  RVector pack(const DiagramPoint& p) const;

  RVector residual(const RVector& x) const;
  /// Directional derivative of the residual at x along dx.
  RVector jvp(const RVector& x, const RVector& dx) const;
  RMatrix jacobian(const RVector& x) const;

 private:
  /// The quadratic part of the residual polarized: Q(x, x) - [0; X] is
  /// the residual and Q(dx, x) + Q(x, dx) its derivative.
  RVector polar(const DiagramPoint& p, const DiagramPoint& q) const;

  Diagram diagram_;
  CMatrix target_;
  Eigen::Index num_params_ = 0;
  Eigen::Index num_residuals_ = 0;
};

struct SolveOptions {
  std::uint64_t seed = 0;
  int max_restarts = 8;
  int max_iterations = 500;
  double initial_damping = 1e-3;
};

struct SolveDiagnostics {
  int iterations = 0;  ///< summed over all attempts
  int restarts = 0;    ///< attempts after the first
  double residual = 0.0;        ///< combined residual of the returned (or best) point
  double tolerance = 0.0;       ///< the threshold it was compared with
  std::uint64_t seed = 0;
  bool trivial = false;         ///< X = 0, zero point returned without solving
  bool boundary_stratum = false;  ///< diagram dims differ from the image flag of X
  std::string describe() const;
};

struct SolveResult {
  DiagramPoint point;
  double r2 = 0.0;
  SolveDiagnostics diagnostics;
};

class ConvergenceError : public NumericalError {
 public:
  ConvergenceError(const std::string& what, SolveDiagnostics diag)
      : NumericalError(what), diagnostics_(diag) {}
  const SolveDiagnostics& diagnostics() const { return diagnostics_; }

 private:
  SolveDiagnostics diagnostics_;
};

/// Levenberg-Marquardt with seeded random restarts. so targets given in the
/// anti-diagonal convention are moved to the identity convention first
/// (r^2 is unchanged). Throws ConvergenceError when no attempt reaches
/// tol.solve_tol * max(1, |X|_F).
SolveResult solve_moment(const Diagram& d, const OrbitElement& target, const SolveOptions& opts = {},
                         const Tolerances& tol = {});

/// Image-flag diagram of the detected Jordan type, then solve_moment.
SolveResult solve_moment(const OrbitElement& target, const SolveOptions& opts = {},
                         const Tolerances& tol = {});

}  // namespace hkpot
