#include "hhf/core.hpp"

#include <cmath>
#include <string>

#include "hhf/rng.hpp"

namespace hhf {
namespace {

void require_finite(const Eigen::Ref<const Matrix>& m, const char* what) {
  if (!m.allFinite()) {
    throw InvalidArgument(std::string(what) + " contains NaN or Inf");
  }
}

void require_dimension(Eigen::Index n) {
  if (n < 2) {
    throw InvalidArgument("unit vector dimension must be at least 2, got " +
                          std::to_string(n));
  }
}

}  // namespace

UnitVector::UnitVector(Vector entries) {
  require_dimension(entries.size());
  require_finite(entries, "unit vector");
  const double norm = entries.norm();
  if (std::abs(norm - 1.0) > kUnitNormTolerance) {
    throw InvalidArgument("vector is not unit norm (||u|| = " +
                          std::to_string(norm) + ")");
  }
  // Vectors already normalized to within kStoredNormTolerance are kept
  // bit-for-bit so that serialized generators reload exactly.
  if (std::abs(norm - 1.0) > kStoredNormTolerance) {
    entries /= norm;
  }
  entries_ = std::move(entries);
}

UnitVector UnitVector::normalized(Vector entries) {
  require_dimension(entries.size());
  require_finite(entries, "unit vector");
  const double norm = entries.norm();
  if (norm == 0.0) {
    throw InvalidArgument("cannot normalize the zero vector");
  }
  entries /= norm;
  return UnitVector(std::move(entries), Trusted{});
}

UnitVector UnitVector::operator-() const {
  return UnitVector(-entries_, Trusted{});
}

Matrix HouseholderMatrix::apply(const Matrix& m) const {
  const Vector& u = generator_.entries();
  if (m.rows() != u.size()) {
    throw DimensionMismatch("Householder of size " + std::to_string(u.size()) +
                            " applied to matrix with " +
                            std::to_string(m.rows()) + " rows");
  }
  // Rank-one update; never forms the n x n matrix.
  const Eigen::RowVectorXd projections = u.transpose() * m;
  Matrix out = m;
  out.noalias() -= 2.0 * u * projections;
  return out;
}

Vector HouseholderMatrix::apply(const Vector& x) const {
  const Vector& u = generator_.entries();
  if (x.size() != u.size()) {
    throw DimensionMismatch("Householder of size " + std::to_string(u.size()) +
                            " applied to vector of length " +
                            std::to_string(x.size()));
  }
  return x - 2.0 * u.dot(x) * u;
}

Matrix HouseholderMatrix::dense() const {
  const Eigen::Index n = size();
  if (n > kMaxDenseDimension) {
    throw ResourceLimit("dense Householder materialization limited to n <= " +
                        std::to_string(kMaxDenseDimension));
  }
  const Vector& u = generator_.entries();
  return Matrix::Identity(n, n) - 2.0 * u * u.transpose();
}

BinaryMatrix::BinaryMatrix(BitMatrix entries) : entries_(std::move(entries)) {
  if (entries_.size() == 0) {
    throw InvalidArgument("binary matrix must be nonempty");
  }
  if ((entries_.array() > 1).any()) {
    throw InvalidArgument("binary matrix entries must be 0 or 1");
  }
}

DataMatrix::DataMatrix(Matrix entries) : entries_(std::move(entries)) {
  if (entries_.size() == 0) {
    throw InvalidArgument("data matrix must be nonempty");
  }
  require_finite(entries_, "data matrix");
}

BernoulliParams::BernoulliParams(double theta) : theta_(theta) {
  if (!(theta > 0.0 && theta < 1.0)) {
    throw InvalidArgument("theta must lie in (0, 1), got " +
                          std::to_string(theta));
  }
}

HouseholderMatrix make_householder(const UnitVector& u) {
  return HouseholderMatrix(u);
}

HouseholderMatrix make_householder(std::span<const double> u) {
  Vector v = Eigen::Map<const Vector>(u.data(), static_cast<Eigen::Index>(u.size()));
  return HouseholderMatrix(UnitVector(std::move(v)));
}

Matrix apply(const HouseholderMatrix& h, const Matrix& m) { return h.apply(m); }

DataMatrix forward(const HouseholderMatrix& h, const BinaryMatrix& x) {
  return DataMatrix(h.apply(x.to_real()));
}

UnitVector sample_unit_vector(Eigen::Index n, std::uint64_t seed,
                              double min_abs_c) {
  require_dimension(n);
  if (!(min_abs_c >= 0.0)) {
    throw InvalidArgument("min_abs_c must be nonnegative");
  }
  // |c| <= sqrt(n) by Cauchy-Schwarz.
  if (min_abs_c > std::sqrt(static_cast<double>(n))) {
    throw SamplingFailure("min_abs_c = " + std::to_string(min_abs_c) +
                          " exceeds the largest attainable |c| = sqrt(n) = " +
                          std::to_string(std::sqrt(static_cast<double>(n))));
  }
  Rng rng(seed);
  Vector v(n);
  for (int attempt = 0; attempt < kMaxRejections; ++attempt) {
    for (Eigen::Index i = 0; i < n; ++i) v[i] = rng.normal();
    const double norm = v.norm();
    if (norm == 0.0) continue;
    if (std::abs(v.sum()) / norm >= min_abs_c) {
      return UnitVector::normalized(v);
    }
  }
  throw SamplingFailure("no unit vector with |c| >= " +
                        std::to_string(min_abs_c) + " after " +
                        std::to_string(kMaxRejections) +
                        " draws; min_abs_c is too large for n = " +
                        std::to_string(n));
}

BinaryMatrix sample_binary_matrix(Eigen::Index n, Eigen::Index p,
                                  const BernoulliParams& params,
                                  std::uint64_t seed) {
  if (n < 1 || p < 1) {
    throw InvalidArgument("binary matrix dimensions must be positive");
  }
  Rng rng(seed);
  BitMatrix x(n, p);
  const double theta = params.theta();
  for (Eigen::Index j = 0; j < p; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      x(i, j) = rng.bernoulli(theta) ? 1 : 0;
    }
  }
  return BinaryMatrix(std::move(x));
}

double linf_error_up_to_sign(const Vector& u, const Vector& u_hat) {
  if (u.size() != u_hat.size()) {
    throw DimensionMismatch("error metric needs equal dimensions, got " +
                            std::to_string(u.size()) + " and " +
                            std::to_string(u_hat.size()));
  }
  const double same = (u - u_hat).cwiseAbs().maxCoeff();
  const double flipped = (u + u_hat).cwiseAbs().maxCoeff();
  return std::min(same, flipped);
}

double linf_error_up_to_sign(const UnitVector& u, const UnitVector& u_hat) {
  return linf_error_up_to_sign(u.entries(), u_hat.entries());
}

}  // namespace hhf
