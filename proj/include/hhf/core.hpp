#pragma once

#include <cstdint>
#include <span>

#include <Eigen/Dense>

#include "hhf/error.hpp"

namespace hhf {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using BitMatrix = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;
using BitVector = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, 1>;

// Accepted deviation of ||u||_2 from 1 for caller-supplied generators.
inline constexpr double kUnitNormTolerance = 1e-9;
// Stored generators satisfy | ||u||_2 - 1 | <= kStoredNormTolerance.
inline constexpr double kStoredNormTolerance = 1e-12;
// Largest dimension for which a dense n x n Householder matrix is built.
inline constexpr Eigen::Index kMaxDenseDimension = 64;

/// A unit vector u in R^n, n >= 2.
class UnitVector {
 public:
  /// Wraps an already-normalized vector, rescaling it when its norm is off
  /// by more than kStoredNormTolerance. Throws InvalidArgument if the norm
  /// is off by more than kUnitNormTolerance, if n < 2, or on NaN/Inf.
  explicit UnitVector(Vector entries);

  /// Scales any finite nonzero vector to unit length.
  static UnitVector normalized(Vector entries);

  const Vector& entries() const { return entries_; }
  Eigen::Index size() const { return entries_.size(); }
  double operator[](Eigen::Index i) const { return entries_[i]; }

  /// c = sum_i u_i.
  double sum() const { return entries_.sum(); }

  UnitVector operator-() const;

 private:
  struct Trusted {};
  UnitVector(Vector entries, Trusted) : entries_(std::move(entries)) {}

  Vector entries_;
};

/// H = I - 2 u u^T, held implicitly through u. Symmetric, orthogonal and
/// its own inverse.
class HouseholderMatrix {
 public:
  explicit HouseholderMatrix(UnitVector generator)
      : generator_(std::move(generator)) {}

  const UnitVector& generator() const { return generator_; }
  Eigen::Index size() const { return generator_.size(); }

  /// M - 2 u (u^T M), O(n m).
  Matrix apply(const Matrix& m) const;
  Vector apply(const Vector& x) const;

  /// Dense n x n matrix; only for n <= kMaxDenseDimension.
  Matrix dense() const;

 private:
  UnitVector generator_;
};

/// n x p matrix with entries in {0, 1}.
class BinaryMatrix {
 public:
  /// Throws InvalidArgument if any entry is not 0 or 1, or if empty.
  explicit BinaryMatrix(BitMatrix entries);

  const BitMatrix& entries() const { return entries_; }
  Eigen::Index rows() const { return entries_.rows(); }
  Eigen::Index cols() const { return entries_.cols(); }
  std::uint8_t operator()(Eigen::Index i, Eigen::Index j) const {
    return entries_(i, j);
  }

  Matrix to_real() const { return entries_.cast<double>(); }

  friend bool operator==(const BinaryMatrix& a, const BinaryMatrix& b) {
    return a.entries_.rows() == b.entries_.rows() &&
           a.entries_.cols() == b.entries_.cols() && a.entries_ == b.entries_;
  }

 private:
  BitMatrix entries_;
};

/// Observed n x p real matrix; every entry finite.
class DataMatrix {
 public:
  explicit DataMatrix(Matrix entries);

  const Matrix& entries() const { return entries_; }
  Eigen::Index rows() const { return entries_.rows(); }
  Eigen::Index cols() const { return entries_.cols(); }

 private:
  Matrix entries_;
};

/// Bernoulli success probability theta, strictly inside (0, 1).
class BernoulliParams {
 public:
  explicit BernoulliParams(double theta);
  double theta() const { return theta_; }

 private:
  double theta_;
};

HouseholderMatrix make_householder(const UnitVector& u);
/// Validating overload for raw input: rejects ||u|| deviating from 1 by
/// more than kUnitNormTolerance.
HouseholderMatrix make_householder(std::span<const double> u);

Matrix apply(const HouseholderMatrix& h, const Matrix& m);

/// Forward model Y = H X.
DataMatrix forward(const HouseholderMatrix& h, const BinaryMatrix& x);

/// Uniform on the unit sphere, conditioned on |sum u_i| >= min_abs_c by
/// rejection. Throws SamplingFailure when min_abs_c > sqrt(n) or after
/// kMaxRejections tries.
UnitVector sample_unit_vector(Eigen::Index n, std::uint64_t seed,
                              double min_abs_c = 0.0);
inline constexpr int kMaxRejections = 10000;

/// i.i.d. Bernoulli(theta) entries, drawn column by column; the first q
/// columns for a given seed do not depend on p.
BinaryMatrix sample_binary_matrix(Eigen::Index n, Eigen::Index p,
                                  const BernoulliParams& params,
                                  std::uint64_t seed);

/// min(||u - u_hat||_inf, ||u + u_hat||_inf): u and -u define the same H.
double linf_error_up_to_sign(const UnitVector& u, const UnitVector& u_hat);
double linf_error_up_to_sign(const Vector& u, const Vector& u_hat);

}  // namespace hhf
