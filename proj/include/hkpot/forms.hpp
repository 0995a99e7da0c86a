#pragma once

#include <string>

#include "hkpot/types.hpp"

namespace hkpot {

enum class FormKind { Identity, AntiDiagonal, StandardSymplectic, Explicit };

/// Non-degenerate bilinear form omega(v, w) = v^T M w on C^dim, with
/// M^T = symmetry * M.
class BilinearForm {
 public:
  BilinearForm() = default;

  static BilinearForm identity(int dim);
  /// S with S_ij = 1 iff i + j = dim + 1 (1-based).
  static BilinearForm anti_diagonal(int dim);
  /// J = [[0, 1_m], [-1_m, 0]], dim = 2m.
  static BilinearForm standard_symplectic(int dim);
  /// Arbitrary form; throws InputError unless non-degenerate with the
  /// stated symmetry.
  static BilinearForm explicit_form(CMatrix matrix, int symmetry);

  int dim() const { return static_cast<int>(matrix_.rows()); }
  FormKind kind() const { return kind_; }
  int symmetry() const { return symmetry_; }
  const CMatrix& matrix() const { return matrix_; }
  const CMatrix& inverse() const { return inverse_; }
  std::string name() const;

  Complex operator()(const CVector& v, const CVector& w) const;

 private:
  BilinearForm(FormKind kind, int symmetry, CMatrix matrix, CMatrix inverse)
      : kind_(kind), symmetry_(symmetry), matrix_(std::move(matrix)), inverse_(std::move(inverse)) {}

  FormKind kind_ = FormKind::Identity;
  int symmetry_ = 1;
  CMatrix matrix_;
  CMatrix inverse_;
};

}  // namespace hkpot
