#include "hhf/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <string>
#include <thread>

#include "hhf/estimators.hpp"
#include "hhf/rng.hpp"

namespace hhf {
namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw InvalidArgument(message);
}

void check_common(std::int64_t n, double t) {
  require(n >= 1, "n must be positive");
  require(t > 0.0 && std::isfinite(t), "t must be positive");
}

void check_theta(double theta) {
  require(theta > 0.0 && theta < 1.0, "theta must lie in (0, 1)");
}

double capped(double v) { return std::min(1.0, v); }

// Calls body(i) for i in [0, count) on a pool of threads. Each index is
// handled exactly once; callers write results into slot i, so the merged
// output does not depend on scheduling.
template <typename Body>
void parallel_for(std::int64_t count, unsigned threads, Body body) {
  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::int64_t>(threads, count));
  if (threads <= 1) {
    for (std::int64_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&] {
        try {
          for (std::int64_t i = next++; i < count; i = next++) body(i);
        } catch (...) {
          const std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next = count;
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

void summarize(TrialReport& report, double t) {
  report.trials = static_cast<std::int64_t>(report.per_trial_errors.size());
  double total = 0.0;
  for (double e : report.per_trial_errors) {
    if (e > t) ++report.failures;
    total += e;
  }
  report.empirical_rate =
      static_cast<double>(report.failures) / static_cast<double>(report.trials);
  report.mean_linf_error = total / static_cast<double>(report.trials);
}

}  // namespace

std::uint64_t generator_seed(std::uint64_t seed, std::int64_t index) {
  return derive_seed(seed, static_cast<std::uint64_t>(index), 0);
}

std::uint64_t coefficient_seed(std::uint64_t seed, std::int64_t index) {
  return derive_seed(seed, static_cast<std::uint64_t>(index), 1);
}

double theta_bound(std::int64_t n, std::int64_t p, double t) {
  check_common(n, t);
  require(p >= 0, "p must be nonnegative");
  const double np = static_cast<double>(n) * static_cast<double>(p);
  return capped(2.0 * std::exp(-2.0 * t * t * np));
}

double c_squared_bound(std::int64_t n, std::int64_t p, double theta, double t) {
  check_common(n, t);
  check_theta(theta);
  require(p >= 0, "p must be nonnegative");
  const double np = static_cast<double>(n) * static_cast<double>(p);
  return capped(2.0 * std::exp(-8.0 * t * t * theta * theta * np));
}

double u_recovery_bound(std::int64_t n, std::int64_t p, double theta, double c,
                        double t) {
  check_common(n, t);
  check_theta(theta);
  require(p >= 0, "p must be nonnegative");
  require(c != 0.0 && std::isfinite(c), "the bound requires c != 0");
  const double exponent = -8.0 * t * t * c * c * theta * theta * static_cast<double>(p);
  return capped(2.0 * static_cast<double>(n) * std::exp(exponent));
}

std::int64_t plan_columns(std::int64_t n, double theta, double c, double t) {
  check_common(n, t);
  check_theta(theta);
  require(c != 0.0 && std::isfinite(c), "planning requires c != 0");
  const double nd = static_cast<double>(n);
  const double columns = std::log(2.0 * nd * nd) / (8.0 * t * t * theta * theta * c * c);
  return static_cast<std::int64_t>(std::ceil(columns));
}

TrialReport run_theta_trials(std::int64_t n, std::int64_t p, double theta, double t,
                             std::int64_t trials, std::uint64_t seed,
                             HarnessOptions options) {
  require(trials >= 1, "trials must be positive");
  require(p >= 1, "p must be positive");
  require(n >= 2, "n must be at least 2");
  const BernoulliParams params(theta);
  TrialReport report;
  report.bound_value = theta_bound(n, p, t);

  const auto start = std::chrono::steady_clock::now();
  report.per_trial_errors.assign(static_cast<std::size_t>(trials), 0.0);
  parallel_for(trials, options.threads, [&](std::int64_t i) {
    const UnitVector u = sample_unit_vector(n, generator_seed(seed, i), 0.0);
    const BinaryMatrix x = sample_binary_matrix(n, p, params, coefficient_seed(seed, i));
    const DataMatrix y = forward(HouseholderMatrix(u), x);
    report.per_trial_errors[static_cast<std::size_t>(i)] =
        std::abs(estimate_theta(y) - theta);
  });
  report.wall_time_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(
                            std::chrono::steady_clock::now() - start)
                            .count();
  summarize(report, t);
  return report;
}

TrialReport run_u_trials(std::int64_t n, std::int64_t p, double theta, double min_abs_c,
                         double t, std::int64_t trials, std::uint64_t seed,
                         HarnessOptions options) {
  require(trials >= 1, "trials must be positive");
  require(p >= 1, "p must be positive");
  require(n >= 2, "n must be at least 2");
  require(min_abs_c > 0.0, "min_abs_c must be positive");
  check_common(n, t);
  const BernoulliParams params(theta);

  TrialReport report;
  const auto count = static_cast<std::size_t>(trials);
  report.per_trial_errors.assign(count, 0.0);
  std::vector<double> abs_c(count, 0.0);
  std::vector<char> threw(count, 0);

  const auto start = std::chrono::steady_clock::now();
  parallel_for(trials, options.threads, [&](std::int64_t i) {
    const auto slot = static_cast<std::size_t>(i);
    const UnitVector u = sample_unit_vector(n, generator_seed(seed, i), min_abs_c);
    abs_c[slot] = std::abs(u.sum());
    const BinaryMatrix x = sample_binary_matrix(n, p, params, coefficient_seed(seed, i));
    const DataMatrix y = forward(HouseholderMatrix(u), x);
    try {
      const RecoveryResult r = recover_factors(y);
      report.per_trial_errors[slot] = linf_error_up_to_sign(u, r.u_hat);
    } catch (const DegenerateInput&) {
      threw[slot] = 1;
    } catch (const Unrecoverable&) {
      threw[slot] = 1;
    }
    if (threw[slot]) {
      report.per_trial_errors[slot] = std::numeric_limits<double>::infinity();
    }
  });
  report.wall_time_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(
                            std::chrono::steady_clock::now() - start)
                            .count();

  report.unrecovered = std::count(threw.begin(), threw.end(), 1);
  report.min_abs_c = *std::min_element(abs_c.begin(), abs_c.end());
  report.bound_value = u_recovery_bound(n, p, theta, report.min_abs_c, t);
  summarize(report, t);
  return report;
}

std::vector<SweepRow> sweep_columns(std::int64_t n, double theta,
                                    const std::vector<std::int64_t>& p_values,
                                    std::int64_t trials, std::uint64_t seed,
                                    double min_abs_c, double t,
                                    HarnessOptions options) {
  require(!p_values.empty(), "p_values must be nonempty");
  require(std::is_sorted(p_values.begin(), p_values.end()) &&
              std::adjacent_find(p_values.begin(), p_values.end()) == p_values.end(),
          "p_values must be strictly ascending");
  std::vector<SweepRow> rows;
  rows.reserve(p_values.size());
  for (const std::int64_t p : p_values) {
    const TrialReport r = run_u_trials(n, p, theta, min_abs_c, t, trials, seed, options);
    rows.push_back({p, theta, r.mean_linf_error, r.empirical_rate, r.bound_value});
  }
  return rows;
}

}  // namespace hhf
