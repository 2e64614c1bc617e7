#pragma once

// Hoeffding-type recovery bounds, the column planner derived from them, and
// the Monte-Carlo harness that checks empirical failure rates against the
// bounds.

#include <cstdint>
#include <vector>

#include "hhf/core.hpp"

namespace hhf {

/// min(1, 2 exp(-2 t^2 n p)): P(|theta_hat - theta| > t).
double theta_bound(std::int64_t n, std::int64_t p, double t);

/// min(1, 2 exp(-8 t^2 theta^2 n p)): deviation of the c^2/n estimate.
double c_squared_bound(std::int64_t n, std::int64_t p, double theta, double t);

/// min(1, 2n exp(-8 t^2 c^2 theta^2 p)): P(||u - u_hat||_inf > t).
/// Throws InvalidArgument for c == 0.
double u_recovery_bound(std::int64_t n, std::int64_t p, double theta, double c,
                        double t);

/// ceil(log(2 n^2) / (8 t^2 theta^2 c^2)), the smallest p with
/// u_recovery_bound <= 1/n.
std::int64_t plan_columns(std::int64_t n, double theta, double c, double t);

struct TrialReport {
  std::int64_t trials = 0;
  std::int64_t failures = 0;
  // Trials where recovery threw (counted as failures, error = +inf).
  std::int64_t unrecovered = 0;
  double empirical_rate = 0.0;
  double bound_value = 0.0;
  double mean_linf_error = 0.0;
  // Smallest |c| among sampled generators (u trials only).
  double min_abs_c = 0.0;
  std::vector<double> per_trial_errors;
  std::int64_t wall_time_ns = 0;
};

struct HarnessOptions {
  // Worker threads; 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;
};

/// Samples (u, X) per trial, records |theta_hat - theta| and counts
/// failures above t. bound_value = theta_bound(n, p, t).
TrialReport run_theta_trials(std::int64_t n, std::int64_t p, double theta, double t,
                             std::int64_t trials, std::uint64_t seed,
                             HarnessOptions options = {});

/// Runs the full pipeline per trial with |c| >= min_abs_c and records the
/// sign-folded l_inf error of u_hat. bound_value uses the smallest |c| seen.
TrialReport run_u_trials(std::int64_t n, std::int64_t p, double theta, double min_abs_c,
                         double t, std::int64_t trials, std::uint64_t seed,
                         HarnessOptions options = {});

struct SweepRow {
  std::int64_t p = 0;
  double theta = 0.0;
  double mean_linf_error = 0.0;
  double empirical_rate = 0.0;
  double bound_value = 0.0;
};

inline constexpr double kDefaultSweepThreshold = 0.05;
inline constexpr double kDefaultMinAbsC = 0.1;

/// run_u_trials for each p in ascending p_values. Trial i uses the same
/// generator at every p, and its X at p is a column prefix of its X at any
/// larger p.
std::vector<SweepRow> sweep_columns(std::int64_t n, double theta,
                                    const std::vector<std::int64_t>& p_values,
                                    std::int64_t trials, std::uint64_t seed,
                                    double min_abs_c = kDefaultMinAbsC,
                                    double t = kDefaultSweepThreshold,
                                    HarnessOptions options = {});

/// Seeds for trial `index` under master `seed`.
std::uint64_t generator_seed(std::uint64_t seed, std::int64_t index);
std::uint64_t coefficient_seed(std::uint64_t seed, std::int64_t index);

}  // namespace hhf
