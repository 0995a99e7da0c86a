#pragma once

#include <vector>

#include "hkpot/forms.hpp"
#include "hkpot/lie_classical.hpp"
#include "hkpot/types.hpp"

namespace hkpot {

/// Flag of dimensions 0 = V_0 < V_1 ... V_k = C^n and, for so/sp, the
/// bilinear form on each node with symmetry (-1)^(k - i + delta).
///
/// Nodes are 0-based in code: dims[0] = dim V_1, ..., dims[k-1] = n.
struct Diagram {
  std::vector<int> dims;
  AlgebraKind algebra;
  std::vector<BilinearForm> forms;  ///< one per node; empty for sl

  /// Diagram with the given dims; builds the node forms for so/sp and
  /// throws InputError when a node that needs a symplectic form has odd
  /// dimension.
  static Diagram make(std::vector<int> dims, AlgebraKind alg);
  /// Image flag of X: dim V_i = rank X^(k-i).
  static Diagram image_flag(const JordanType& jt, AlgebraKind alg);

  int length() const { return static_cast<int>(dims.size()); }
  int n() const { return dims.empty() ? 0 : dims.back(); }
  bool self_dual() const { return algebra.family != Family::SL; }
};

/// Arrow maps alphas[i] : V_{i+1} -> V_{i+2}, betas[i] the reverse
/// (0-based, k-1 of each). For self-dual diagrams betas[i] = alphas[i]^dagger.
struct DiagramPoint {
  std::vector<CMatrix> alphas;
  std::vector<CMatrix> betas;

  static DiagramPoint zero(const Diagram& d);
  /// Self-dual point: betas derived from alphas through the node forms.
  static DiagramPoint from_alphas(const Diagram& d, std::vector<CMatrix> alphas);
};

/// Throws InputError unless every arrow has the shape the diagram demands.
void check_shapes(const Diagram& d, const DiagramPoint& p);

struct MomentResidual {
  std::vector<CMatrix> complex_parts;  ///< one per gauged node V_1..V_{k-1}
  std::vector<CMatrix> real_parts;     ///< Hermitian
  double total = 0.0;                  ///< sum of squared Frobenius norms
};

/// Hyperkahler moment map. On node V_j (1 <= j <= k-1):
///   mu_C = alpha_{j-1} beta_{j-1} - beta_j alpha_j
///   mu_R = alpha_{j-1} alpha_{j-1}^* - beta_{j-1}^* beta_{j-1}
///          + beta_j beta_j^* - alpha_j^* alpha_j
/// with alpha_0 = beta_0 = 0.
MomentResidual moment_map(const Diagram& d, const DiagramPoint& p);

/// r^2 = sum_i Tr(alpha_i^* alpha_i + beta_i beta_i^*).
double radial_norm(const DiagramPoint& p);

/// psi = alpha_{k-1} beta_{k-1}, an n x n matrix.
CMatrix psi(const DiagramPoint& p);

/// Acts by g = (g_1, ..., g_{k-1}) on the gauged nodes:
/// alpha_i -> g_{i+1} alpha_i g_i^{-1}, beta_i -> g_i beta_i g_{i+1}^{-1},
/// with g_k = 1. Each g_j must be unitary, and preserve the node form for
/// self-dual diagrams.
DiagramPoint apply_gauge(const Diagram& d, const DiagramPoint& p, const std::vector<CMatrix>& gauge);

/// Haar-random element of the gauge group H (U(V_j), or its form-preserving
/// subgroup for self-dual diagrams).
std::vector<CMatrix> random_gauge(const Diagram& d, Rng& rng);

struct Length2Factorization {
  Diagram diagram;     ///< 0 <- C^k <- C^n, sl-type (no dagger constraint)
  DiagramPoint point;  ///< alpha : C^k -> C^n, beta : C^n -> C^k
  bool trivial = false;  ///< X = 0
  std::vector<double> lambdas;  ///< eigenvalues of alpha^* alpha = beta beta^*
};

/// Explicit solution of beta alpha = 0, beta beta^* = alpha^* alpha,
/// alpha beta = X for X^2 = 0, built from the eigenvectors of X^* X.
/// Works for any family at the gl(n) level (the point does not satisfy
/// beta = alpha^dagger, but r^2 is the orbit potential all the same).
Length2Factorization length2_factorize(const OrbitElement& x, const Tolerances& tol = {});

}  // namespace hkpot
