#include "hhf/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hhf {
namespace {

void require_positive_theta(double theta) {
  if (!(theta > 0.0) || !std::isfinite(theta)) {
    throw InvalidArgument("theta must be positive, got " +
                          std::to_string(theta));
  }
}

}  // namespace

double mean_square(const DataMatrix& y) {
  const double count = static_cast<double>(y.rows()) * static_cast<double>(y.cols());
  return y.entries().squaredNorm() / count;
}

double estimate_theta(const DataMatrix& y) {
  return std::clamp(mean_square(y), 0.0, 1.0);
}

CSquaredEstimate estimate_c_squared(const DataMatrix& y, double theta) {
  require_positive_theta(theta);
  const double p = static_cast<double>(y.cols());
  const double n = static_cast<double>(y.rows());
  const double raw = -0.5 * (y.entries().sum() / (p * theta) - n);
  if (raw < 0.0) return {0.0, true};
  return {raw, false};
}

UnitVectorEstimate recover_unit_vector(const DataMatrix& y, double theta) {
  require_positive_theta(theta);
  const double p = static_cast<double>(y.cols());
  Vector k = -0.5 * (y.entries().rowwise().sum().array() / (p * theta) - 1.0).matrix();

  const double norm = k.norm();
  if (!(norm >= kMinIdentifiableNorm)) {
    throw Unrecoverable(
        "row sums of Y carry no information about u (estimated |c| ~ " +
        std::to_string(norm) + "); the generator sum c must be nonzero");
  }
  const double k_sum = k.sum();
  // u_i = k_i / sqrt(sum k) followed by renormalization is k / ||k||
  // whenever sum k > 0, so both branches reduce to the same direction.
  Vector u = k / norm;
  UnitVectorEstimate out{UnitVector::normalized(std::move(u)), std::move(k),
                         k_sum, !(k_sum > 0.0)};
  return out;
}

BinaryMatrix recover_coefficients(const DataMatrix& y, const UnitVector& u_hat,
                                  double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw InvalidArgument("threshold must lie in (0, 1), got " +
                          std::to_string(threshold));
  }
  const Matrix& m = y.entries();
  const Vector& u = u_hat.entries();
  if (m.rows() != u.size()) {
    throw DimensionMismatch("generator of length " + std::to_string(u.size()) +
                            " for data with " + std::to_string(m.rows()) + " rows");
  }
  // H^T Y = H Y = Y - 2u(u^T Y), thresholded entry by entry so the real
  // n x p product is never stored.
  const Eigen::RowVectorXd projections = u.transpose() * m;
  const Vector two_u = 2.0 * u;
  BitMatrix bits(m.rows(), m.cols());
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    const double pj = projections[j];
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      bits(i, j) = static_cast<std::uint8_t>(m(i, j) - two_u[i] * pj >= threshold);
    }
  }
  return BinaryMatrix(std::move(bits));
}

RecoveryResult recover_factors(const DataMatrix& y, double threshold) {
  RecoveryDiagnostics diag;
  diag.threshold = threshold;

  const double raw_theta = mean_square(y);
  const double theta_hat = std::clamp(raw_theta, 0.0, 1.0);
  diag.clamped_theta = raw_theta != theta_hat;
  if (theta_hat == 0.0) {
    throw DegenerateInput("Y is identically zero; theta_hat = 0 leaves the "
                          "estimators undefined");
  }

  const CSquaredEstimate c2 = estimate_c_squared(y, theta_hat);
  diag.clamped_c_squared = c2.clamped;

  UnitVectorEstimate u = recover_unit_vector(y, theta_hat);
  diag.negative_k_sum = u.negative_k_sum;

  BinaryMatrix x_hat = recover_coefficients(y, u.u_hat, threshold);
  return RecoveryResult{std::move(u.u_hat), std::move(x_hat), theta_hat,
                        c2.value,           std::move(u.k),     diag};
}

}  // namespace hhf
