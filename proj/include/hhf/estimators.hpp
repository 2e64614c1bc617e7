#pragma once

// Polynomial-time recovery of (u, X) from Y = H X under the Bernoulli
// model. Every step is a single pass over Y, so the whole pipeline is O(np).

#include "hhf/core.hpp"

namespace hhf {

inline constexpr double kDefaultThreshold = 0.5;

// Below this ||k||_2 (which estimates |c|) the generator is unidentifiable.
inline constexpr double kMinIdentifiableNorm = 1e-12;

struct RecoveryDiagnostics {
  bool clamped_theta = false;
  bool clamped_c_squared = false;
  bool negative_k_sum = false;
  double threshold = kDefaultThreshold;
};

struct CSquaredEstimate {
  double value = 0.0;
  bool clamped = false;
};

struct UnitVectorEstimate {
  UnitVector u_hat;
  Vector k;
  double k_sum = 0.0;
  bool negative_k_sum = false;
};

struct RecoveryResult {
  UnitVector u_hat;
  BinaryMatrix x_hat;
  double theta_hat = 0.0;
  double c_squared_hat = 0.0;
  Vector k;
  RecoveryDiagnostics diagnostics;
};

/// theta_hat = sum_ij Y_ij^2 / (n p), clamped to [0, 1].
double estimate_theta(const DataMatrix& y);

/// Unclamped sum_ij Y_ij^2 / (n p).
double mean_square(const DataMatrix& y);

/// c^2 estimate (-1/2) (sum_ij Y_ij / (p theta) - n), clamped at 0.
/// Throws InvalidArgument for theta <= 0.
CSquaredEstimate estimate_c_squared(const DataMatrix& y, double theta);

/// k_i = (-1/2) (sum_j Y_ij / (p theta) - 1) estimates u_i c, so u_hat is
/// k rescaled to unit norm. The sign follows k when sum(k) > 0; otherwise
/// negative_k_sum is set and u_hat = k / ||k|| is still returned (only the
/// global sign is in question, and it is not identifiable anyway).
/// Throws Unrecoverable when ||k|| < kMinIdentifiableNorm.
UnitVectorEstimate recover_unit_vector(const DataMatrix& y, double theta);

/// X_hat = HT_threshold(H_hat Y): entries >= threshold map to 1.
BinaryMatrix recover_coefficients(const DataMatrix& y, const UnitVector& u_hat,
                                  double threshold = kDefaultThreshold);

/// Full pipeline: theta -> c^2 -> u -> X. Throws DegenerateInput when
/// theta_hat == 0 and Unrecoverable when c is unidentifiable.
RecoveryResult recover_factors(const DataMatrix& y,
                               double threshold = kDefaultThreshold);

}  // namespace hhf
