#pragma once

// Zero-error recovery of (u, X) from Y = H X with binary X by exhaustive
// search over binary column guesses. Exponential in n; guarded by n_max.

#include <optional>
#include <vector>

#include "hhf/core.hpp"

namespace hhf {

inline constexpr int kDefaultMaxExactDimension = 20;
// Consistency, candidate matching and binarity checks all use this.
inline constexpr double kExactTolerance = 1e-8;

struct ColumnGuessSolution {
  // Canonical sign (first nonzero entry positive). Unset when degenerate.
  std::optional<UnitVector> u_candidate;
  BitVector guess;
  // guess == y: only u^T guess = 0 is pinned, not u itself.
  bool degenerate = false;
};

/// Solves y = (I - 2uu^T) x for u given binary x. With d = x - y, a
/// solution exists iff ||d||^2 = 2 d^T x, and then u = d / ||d||.
/// Returns nullopt when the guess is inconsistent with y.
std::optional<ColumnGuessSolution> solve_u_from_column(const Vector& y,
                                                       const BitVector& x);

/// All pinned (non-degenerate) candidates over the 2^n binary guesses,
/// deduplicated up to sign and sorted. Throws ResourceLimit if n > n_max.
std::vector<ColumnGuessSolution> enumerate_column_candidates(
    const Vector& y, int n_max = kDefaultMaxExactDimension);

/// Sign-folded intersection of two candidate sets (entries of `a` kept).
std::vector<ColumnGuessSolution> intersect_candidates(
    const std::vector<ColumnGuessSolution>& a,
    const std::vector<ColumnGuessSolution>& b);

struct ExactRecovery {
  UnitVector u_hat;
  BinaryMatrix x_hat;
  // Columns whose candidate sets were intersected (first two distinct
  // nonzero columns).
  Eigen::Index first_column = 0;
  Eigen::Index second_column = 0;
  // Sign-folded number of candidates matching that pair.
  std::size_t pair_intersection_size = 0;
};

/// Intersects the candidate sets of the first two distinct nonzero columns
/// and rebuilds X as H Y, which must be binary. A binary column may carry no
/// pinned candidate (u orthogonal to its x); candidates of the other column
/// that keep it binary are then admitted too. If the pair leaves several
/// candidates, later distinct columns are used to narrow them. Returns
/// nullopt when no candidate reproduces a binary X.
/// Throws NeedsDistinctColumns if Y lacks two distinct nonzero columns and
/// ResourceLimit if n > n_max.
std::optional<ExactRecovery> exact_recover(const DataMatrix& y,
                                           int n_max = kDefaultMaxExactDimension);

/// Two (H, x) pairs giving the same y with non-binary x1.
struct NonUniquenessWitness {
  UnitVector u1;
  Vector x1;
  UnitVector u2;
  Vector x2;
};

/// u1 = [sqrt(1/3), sqrt(2/3)], x1 = [2 sqrt(2)/3, 1/3]; u2 = [1,1]/sqrt(2),
/// x2 = [1, 0]. Both products equal [0, -1].
NonUniquenessWitness real_coefficient_counterexample();

}  // namespace hhf
