#include "hhf/exact.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>

namespace hhf {
namespace {

// Entries at or below this magnitude are skipped when picking the sign.
constexpr double kCanonicalZero = 1e-12;

Vector canonical_sign(Vector v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > kCanonicalZero) {
      if (v[i] < 0.0) v = -v;
      break;
    }
  }
  return v;
}

const Vector& entries_of(const ColumnGuessSolution& s) {
  return s.u_candidate->entries();
}

bool same_up_to_sign(const Vector& a, const Vector& b) {
  return linf_error_up_to_sign(a, b) <= kExactTolerance;
}

// Sorting key that is unaffected by a global sign flip.
double sort_key(const ColumnGuessSolution& s) { return std::abs(entries_of(s)[0]); }

bool lexicographic_less(const Vector& a, const Vector& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// Candidates sorted by sort_key; returns whether some element lies within
// the sign-folded tolerance of v.
bool contains(const std::vector<ColumnGuessSolution>& by_key, const Vector& v) {
  const double key = std::abs(v[0]);
  auto it = std::lower_bound(
      by_key.begin(), by_key.end(), key - kExactTolerance,
      [](const ColumnGuessSolution& s, double k) { return sort_key(s) < k; });
  for (; it != by_key.end() && sort_key(*it) <= key + kExactTolerance; ++it) {
    if (same_up_to_sign(entries_of(*it), v)) return true;
  }
  return false;
}

// Stable sort through an index permutation, so the (large) elements are
// moved exactly once.
template <typename Less>
std::vector<ColumnGuessSolution> sorted(std::vector<ColumnGuessSolution> v, Less less) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return less(v[a], v[b]); });
  std::vector<ColumnGuessSolution> out;
  out.reserve(v.size());
  for (const std::size_t i : order) out.push_back(std::move(v[i]));
  return out;
}

std::vector<ColumnGuessSolution> sorted_by_key(std::vector<ColumnGuessSolution> v) {
  return sorted(std::move(v), [](const ColumnGuessSolution& a, const ColumnGuessSolution& b) {
    return sort_key(a) < sort_key(b);
  });
}

void check_dimension(Eigen::Index n, int n_max) {
  if (n > n_max) {
    throw ResourceLimit("exact recovery enumerates 2^n binary guesses per "
                        "column; n = " + std::to_string(n) +
                        " exceeds n_max = " + std::to_string(n_max));
  }
  if (n >= 63) {
    throw ResourceLimit("n = " + std::to_string(n) + " is beyond 64-bit enumeration");
  }
}

bool is_binary(const Vector& v) {
  return std::all_of(v.begin(), v.end(), [](double e) {
    return std::abs(e) <= kExactTolerance || std::abs(e - 1.0) <= kExactTolerance;
  });
}

bool maps_to_binary(const UnitVector& u, const Vector& y) {
  return is_binary(HouseholderMatrix(u).apply(y));
}

// Rebuilds X = H Y and rounds it, or nullopt if some entry is not within
// kExactTolerance of 0 or 1.
std::optional<BinaryMatrix> binary_coefficients(const DataMatrix& y,
                                                const UnitVector& u) {
  const Matrix x = HouseholderMatrix(u).apply(y.entries());
  BitMatrix bits(x.rows(), x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      const double v = x(i, j);
      if (std::abs(v) <= kExactTolerance) {
        bits(i, j) = 0;
      } else if (std::abs(v - 1.0) <= kExactTolerance) {
        bits(i, j) = 1;
      } else {
        return std::nullopt;
      }
    }
  }
  return BinaryMatrix(std::move(bits));
}

}  // namespace

std::optional<ColumnGuessSolution> solve_u_from_column(const Vector& y,
                                                       const BitVector& x) {
  if (y.size() != x.size()) {
    throw DimensionMismatch("column of length " + std::to_string(y.size()) +
                            " paired with guess of length " +
                            std::to_string(x.size()));
  }
  if (!y.allFinite()) {
    throw InvalidArgument("observed column contains NaN or Inf");
  }
  if ((x.array() > 1).any()) {
    throw InvalidArgument("column guess must be binary");
  }
  const Vector xr = x.cast<double>();
  const Vector d = xr - y;
  const double d_norm_sq = d.squaredNorm();

  if (d_norm_sq == 0.0) {
    return ColumnGuessSolution{std::nullopt, x, true};
  }
  // y = x - 2u(u^T x) forces d = 2u(u^T x): u is parallel to d and
  // ||d|| = 2|u^T x|, i.e. ||d||^2 = 2 d^T x.
  if (std::abs(d_norm_sq - 2.0 * d.dot(xr)) > kExactTolerance) {
    return std::nullopt;
  }
  Vector u = canonical_sign(d / std::sqrt(d_norm_sq));
  return ColumnGuessSolution{UnitVector::normalized(std::move(u)), x, false};
}

std::vector<ColumnGuessSolution> enumerate_column_candidates(const Vector& y,
                                                             int n_max) {
  const Eigen::Index n = y.size();
  check_dimension(n, n_max);
  if (n < 2) {
    throw InvalidArgument("exact recovery needs n >= 2");
  }

  // The consistency identity reduces to ||x||^2 = ||y||^2, so guesses with
  // the wrong number of ones are skipped before solving.
  const double y_norm_sq = y.squaredNorm();

  std::vector<ColumnGuessSolution> found;
  BitVector guess(n);
  const std::uint64_t count = std::uint64_t{1} << n;
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    if (std::abs(static_cast<double>(std::popcount(mask)) - y_norm_sq) > 0.5) {
      continue;
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      guess[i] = static_cast<std::uint8_t>((mask >> i) & 1U);
    }
    auto solution = solve_u_from_column(y, guess);
    if (solution && !solution->degenerate) {
      found.push_back(std::move(*solution));
    }
  }

  found = sorted_by_key(std::move(found));
  std::vector<ColumnGuessSolution> unique;
  for (std::size_t i = 0; i < found.size(); ++i) {
    bool duplicate = false;
    for (std::size_t j = i + 1;
         j < found.size() && sort_key(found[j]) <= sort_key(found[i]) + kExactTolerance;
         ++j) {
      if (same_up_to_sign(entries_of(found[i]), entries_of(found[j]))) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) unique.push_back(std::move(found[i]));
  }
  return sorted(std::move(unique), [](const ColumnGuessSolution& a, const ColumnGuessSolution& b) {
    return lexicographic_less(entries_of(a), entries_of(b));
  });
}

std::vector<ColumnGuessSolution> intersect_candidates(
    const std::vector<ColumnGuessSolution>& a,
    const std::vector<ColumnGuessSolution>& b) {
  const auto b_sorted = sorted_by_key(b);
  std::vector<ColumnGuessSolution> out;
  for (const auto& candidate : a) {
    if (candidate.degenerate || !candidate.u_candidate) continue;
    if (contains(b_sorted, entries_of(candidate))) out.push_back(candidate);
  }
  return out;
}

std::optional<ExactRecovery> exact_recover(const DataMatrix& y, int n_max) {
  const Matrix& m = y.entries();
  check_dimension(m.rows(), n_max);
  if (m.cols() < 2) {
    throw NeedsDistinctColumns("exact recovery needs at least two columns");
  }

  // A zero column forces x = 0 and says nothing about u.
  std::vector<Eigen::Index> distinct;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    if (m.col(j).cwiseAbs().maxCoeff() <= kExactTolerance) continue;
    const bool seen = std::any_of(distinct.begin(), distinct.end(), [&](Eigen::Index k) {
      return (m.col(j) - m.col(k)).cwiseAbs().maxCoeff() <= kExactTolerance;
    });
    if (!seen) distinct.push_back(j);
  }
  if (distinct.size() < 2) {
    throw NeedsDistinctColumns("Y has fewer than two distinct nonzero columns; "
                               "u is not pinned down");
  }

  const Vector ya = m.col(distinct[0]);
  const Vector yb = m.col(distinct[1]);
  const auto from_a = enumerate_column_candidates(ya, n_max);
  const auto from_b = enumerate_column_candidates(yb, n_max);
  auto remaining = intersect_candidates(from_a, from_b);
  // A column that is itself binary may be one whose true guess equals y
  // (u orthogonal to x); it pins nothing, so admit the other column's
  // candidates that leave it binary.
  auto admit = [&](const std::vector<ColumnGuessSolution>& candidates, const Vector& other) {
    if (!is_binary(other)) return;
    for (const auto& c : candidates) {
      if (maps_to_binary(*c.u_candidate, other) &&
          !contains(sorted_by_key(remaining), entries_of(c))) {
        remaining.push_back(c);
      }
    }
  };
  admit(from_a, yb);
  admit(from_b, ya);
  const std::size_t pair_size = remaining.size();

  for (std::size_t r = 2; r < distinct.size() && remaining.size() > 1; ++r) {
    const Vector yr = m.col(distinct[r]);
    std::erase_if(remaining, [&](const ColumnGuessSolution& c) {
      return !maps_to_binary(*c.u_candidate, yr);
    });
  }

  for (const auto& candidate : remaining) {
    if (auto x = binary_coefficients(y, *candidate.u_candidate)) {
      return ExactRecovery{*candidate.u_candidate, std::move(*x), distinct[0],
                           distinct[1], pair_size};
    }
  }
  return std::nullopt;
}

NonUniquenessWitness real_coefficient_counterexample() {
  const double root2 = std::sqrt(2.0);
  Vector u1(2);
  u1 << std::sqrt(1.0 / 3.0), std::sqrt(2.0 / 3.0);
  Vector u2(2);
  u2 << 1.0 / root2, 1.0 / root2;
  Vector x1(2);
  x1 << 2.0 * root2 / 3.0, 1.0 / 3.0;
  Vector x2(2);
  x2 << 1.0, 0.0;
  return {UnitVector(u1), x1, UnitVector(u2), x2};
}

}  // namespace hhf
