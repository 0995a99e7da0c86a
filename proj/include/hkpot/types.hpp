#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace hkpot {

template <typename Real = double>
using ComplexT = std::complex<Real>;

template <typename Real = double>
using CMatrixT = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Real = double>
using CVectorT = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

using Complex = ComplexT<double>;
using CMatrix = CMatrixT<double>;
using CVector = CVectorT<double>;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Numerical tolerances shared by every module. All values are relative
/// unless stated otherwise.
struct Tolerances {
  double eig_group = 1e-8;  ///< eigenvalue grouping gap, relative to max(1, lambda_max)
  double rank_cut = 1e-10;  ///< singular values below rank_cut * sigma_max count as zero
  double solve_tol = 1e-10; ///< moment-map solver residual, relative to max(1, |X|_F)
  double check_tol = 1e-6;  ///< cross-checks and membership tests

  void validate() const;
};

/// Base of all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: wrong shapes, invalid partitions, bad parameters.
class InputError : public Error {
 public:
  using Error::Error;
};

/// The matrix is not an element of the algebra it claims to be in.
class MembershipError : public Error {
 public:
  using Error::Error;
};

/// A numerical routine produced something its postcondition forbids.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace hkpot
