#include "hhf/commands.hpp"

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "hhf/matrix_io.hpp"

namespace hhf::cli {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw IoError("cannot create output directory " + dir.string());
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json to_json(const Vector& v) {
  Json arr = Json::array();
  for (double x : v) arr.push_back(x);
  return arr;
}

struct InputPaths {
  fs::path y;
  std::optional<fs::path> u_truth;
  std::optional<fs::path> x_truth;
};

InputPaths resolve_input(const fs::path& in) {
  if (in.empty()) throw InvalidArgument("--in is required");
  InputPaths paths;
  if (fs::is_directory(in)) {
    paths.y = in / "Y.csv";
    if (fs::exists(in / "U.csv")) paths.u_truth = in / "U.csv";
    if (fs::exists(in / "X.csv")) paths.x_truth = in / "X.csv";
  } else {
    paths.y = in;
  }
  if (!fs::exists(paths.y)) throw IoError("input file " + paths.y.string() + " not found");
  return paths;
}

DataMatrix load_data(const fs::path& path) {
  Matrix m = io::read_matrix_csv(path);
  if (!m.allFinite()) throw IoError(path.string() + " contains NaN or Inf");
  return DataMatrix(std::move(m));
}

void require(bool ok, const std::string& message) {
  if (!ok) throw InvalidArgument(message);
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("HHF_SEED"); env != nullptr && *env != '\0') {
    try {
      std::size_t used = 0;
      const std::string s(env);
      const auto v = std::stoull(s, &used);
      if (used == s.size()) return v;
    } catch (const std::exception&) {
    }
    throw InvalidArgument(std::string("HHF_SEED is not an unsigned integer: ") + env);
  }
  return kDefaultSeed;
}

}  // namespace

void cmd_generate(const GenerateConfig& config) {
  require(config.n >= 2, "--n must be at least 2");
  require(config.p >= 1, "--p must be positive");
  require(config.min_abs_c >= 0.0, "--min-abs-c must be nonnegative");
  const BernoulliParams params(config.theta);

  // Instance 0 of the harness seeding scheme, so CLI instances match trials.
  const UnitVector u = sample_unit_vector(config.n, generator_seed(config.seed, 0),
                                          config.min_abs_c);
  const BinaryMatrix x = sample_binary_matrix(config.n, config.p, params,
                                              coefficient_seed(config.seed, 0));
  const DataMatrix y = forward(HouseholderMatrix(u), x);

  Json meta;
  meta["n"] = config.n;
  meta["p"] = config.p;
  meta["theta"] = config.theta;
  meta["seed"] = config.seed;
  meta["min_abs_c"] = config.min_abs_c;
  meta["c"] = u.sum();

  ensure_directory(config.out);
  io::write_vector_csv(config.out / "U.csv", u.entries());
  io::write_binary_csv(config.out / "X.csv", x.entries());
  io::write_matrix_csv(config.out / "Y.csv", y.entries());
  io::write_text(config.out / "meta.json", dump(meta));
}

void cmd_recover(const RecoverConfig& config) {
  require(config.zeta > 0.0 && config.zeta < 1.0, "--zeta must lie in (0, 1)");
  const InputPaths paths = resolve_input(config.in);
  const DataMatrix y = load_data(paths.y);
  const RecoveryResult r = recover_factors(y, config.zeta);

  Json result;
  result["theta_hat"] = r.theta_hat;
  result["c_squared_hat"] = r.c_squared_hat;
  result["u_hat"] = to_json(r.u_hat.entries());
  result["diagnostics"] = {
      {"clamped_theta", r.diagnostics.clamped_theta},
      {"clamped_c_squared", r.diagnostics.clamped_c_squared},
      {"negative_k_sum", r.diagnostics.negative_k_sum},
      {"threshold", r.diagnostics.threshold},
  };
  if (paths.u_truth) {
    const Vector u = io::read_vector_csv(*paths.u_truth);
    if (u.size() != y.rows()) throw IoError("U.csv does not match the rows of Y");
    result["linf_error"] = linf_error_up_to_sign(u, r.u_hat.entries());
  }
  if (paths.x_truth) {
    const BitMatrix x = io::read_binary_csv(*paths.x_truth);
    if (x.rows() != y.rows() || x.cols() != y.cols()) {
      throw IoError("X.csv does not match the shape of Y");
    }
    const auto wrong = (x.array() != r.x_hat.entries().array()).count();
    result["x_bit_error_rate"] =
        static_cast<double>(wrong) / static_cast<double>(x.size());
  }

  ensure_directory(config.out);
  io::write_text(config.out / "result.json", dump(result));
  io::write_vector_csv(config.out / "U_hat.csv", r.u_hat.entries());
  io::write_binary_csv(config.out / "X_hat.csv", r.x_hat.entries());
}

ExitCode cmd_exact(const ExactConfig& config) {
  require(config.n_max >= 2, "--n-max must be at least 2");
  const InputPaths paths = resolve_input(config.in);
  const DataMatrix y = load_data(paths.y);
  if (y.rows() > config.n_max) {
    throw ResourceLimit("refusing exact recovery for n = " + std::to_string(y.rows()) +
                        ": it tries 2^n binary guesses per column (n-max = " +
                        std::to_string(config.n_max) + ")");
  }

  Json result;
  ExitCode code = ExitCode::kSuccess;
  std::optional<ExactRecovery> found;
  try {
    found = exact_recover(y, config.n_max);
  } catch (const NeedsDistinctColumns& e) {
    result["status"] = "needs_distinct_columns";
    result["message"] = e.what();
    code = ExitCode::kNeedsDistinctColumns;
  }
  if (code == ExitCode::kSuccess) {
    if (found) {
      result["status"] = "found";
      result["u_hat"] = to_json(found->u_hat.entries());
      result["columns"] = {found->first_column, found->second_column};
      result["pair_intersection_size"] = found->pair_intersection_size;
    } else {
      result["status"] = "none";
      code = ExitCode::kExactNone;
    }
  }

  ensure_directory(config.out);
  io::write_text(config.out / "result.json", dump(result));
  if (found) {
    io::write_vector_csv(config.out / "U_hat.csv", found->u_hat.entries());
    io::write_binary_csv(config.out / "X_hat.csv", found->x_hat.entries());
  }
  return code;
}

void cmd_bounds(const BoundsConfig& config, std::ostream& out) {
  Json j;
  j["n"] = config.n;
  j["p"] = config.p;
  j["theta"] = config.theta;
  j["c"] = config.c;
  j["t"] = config.t;
  j["theta_bound"] = theta_bound(config.n, config.p, config.t);
  j["c_squared_bound"] = c_squared_bound(config.n, config.p, config.theta, config.t);
  j["u_recovery_bound"] = u_recovery_bound(config.n, config.p, config.theta, config.c, config.t);
  j["plan_columns"] = plan_columns(config.n, config.theta, config.c, config.t);
  const std::string text = dump(j);
  if (config.out) {
    ensure_directory(*config.out);
    io::write_text(*config.out / "bounds.json", text);
  }
  out << text;
}

void cmd_benchmark(const BenchmarkConfig& config) {
  require(!config.thetas.empty(), "--theta needs at least one value");
  require(config.trials >= 1, "--trials must be positive");
  require(config.n >= 2, "--n must be at least 2");
  for (const double theta : config.thetas) static_cast<void>(BernoulliParams(theta));

  std::string csv = "p,theta,mean_linf_error,empirical_rate,bound_value\n";
  for (const double theta : config.thetas) {
    const auto rows = sweep_columns(config.n, theta, config.p_values, config.trials,
                                    config.seed, config.min_abs_c, config.t,
                                    HarnessOptions{config.threads});
    for (const SweepRow& row : rows) {
      csv += std::to_string(row.p) + ',' + io::format_double(row.theta) + ',' +
             io::format_double(row.mean_linf_error) + ',' +
             io::format_double(row.empirical_rate) + ',' +
             io::format_double(row.bound_value) + '\n';
    }
  }
  ensure_directory(config.out);
  io::write_text(config.out / "figure1.csv", csv);
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Householder dictionary factorization: recover H = I - 2uu^T and "
               "binary X from Y = HX"};
  app.require_subcommand(1);

  std::optional<std::uint64_t> seed_flag;

  GenerateConfig gen;
  auto* generate = app.add_subcommand("generate", "Sample u, X and write U.csv, X.csv, Y.csv, meta.json");
  generate->add_option("--n", gen.n, "rows")->capture_default_str();
  generate->add_option("--p", gen.p, "columns")->capture_default_str();
  generate->add_option("--theta", gen.theta, "Bernoulli parameter")->capture_default_str();
  generate->add_option("--seed", seed_flag, "RNG seed (falls back to HHF_SEED, then 1)");
  generate->add_option("--min-abs-c", gen.min_abs_c, "minimum |sum u_i|")->capture_default_str();
  generate->add_option("--out", gen.out, "output directory")->capture_default_str();

  RecoverConfig rec;
  auto* recover = app.add_subcommand("recover", "Polynomial-time recovery of u and X from Y");
  recover->add_option("--in", rec.in, "directory with Y.csv, or a Y csv file")->required();
  recover->add_option("--out", rec.out, "output directory")->capture_default_str();
  recover->add_option("--zeta", rec.zeta, "hard threshold")->capture_default_str();

  ExactConfig ex;
  auto* exact = app.add_subcommand("exact", "Exhaustive zero-error recovery (small n)");
  exact->add_option("--in", ex.in, "directory with Y.csv, or a Y csv file")->required();
  exact->add_option("--out", ex.out, "output directory")->capture_default_str();
  exact->add_option("--n-max", ex.n_max, "largest n to enumerate")->capture_default_str();

  BoundsConfig bc;
  std::optional<fs::path> bounds_out;
  auto* bounds = app.add_subcommand("bounds", "Evaluate recovery bounds and the column planner");
  bounds->add_option("--n", bc.n)->capture_default_str();
  bounds->add_option("--p", bc.p)->capture_default_str();
  bounds->add_option("--theta", bc.theta)->capture_default_str();
  bounds->add_option("--c", bc.c, "generator sum c")->capture_default_str();
  bounds->add_option("--t", bc.t, "error threshold")->capture_default_str();
  bounds->add_option("--out", bounds_out, "also write bounds.json here");

  BenchmarkConfig bench;
  auto* benchmark = app.add_subcommand("benchmark", "Error-vs-columns sweep; writes figure1.csv");
  benchmark->add_option("--n", bench.n)->capture_default_str();
  benchmark->add_option("--theta", bench.thetas, "comma-separated thetas")
      ->delimiter(',')
      ->capture_default_str();
  benchmark->add_option("--p-values", bench.p_values, "comma-separated ascending p")
      ->delimiter(',')
      ->capture_default_str();
  benchmark->add_option("--trials", bench.trials)->capture_default_str();
  benchmark->add_option("--seed", seed_flag, "RNG seed (falls back to HHF_SEED, then 1)");
  benchmark->add_option("--min-abs-c", bench.min_abs_c)->capture_default_str();
  benchmark->add_option("--t", bench.t, "failure threshold on the l_inf error")
      ->capture_default_str();
  benchmark->add_option("--threads", bench.threads, "0 = all cores")->capture_default_str();
  benchmark->add_option("--out", bench.out, "output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "hhf: error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::kInvalidParams);
  }

  auto fail = [&](ExitCode code, const char* what) {
    err << "hhf: error: " << what << "\n";
    return static_cast<int>(code);
  };

  try {
    if (generate->parsed()) {
      gen.seed = resolve_seed(seed_flag);
      cmd_generate(gen);
    } else if (recover->parsed()) {
      cmd_recover(rec);
    } else if (exact->parsed()) {
      const ExitCode code = cmd_exact(ex);
      if (code == ExitCode::kExactNone) {
        err << "hhf: no Householder/binary factorization reproduces Y\n";
      } else if (code == ExitCode::kNeedsDistinctColumns) {
        err << "hhf: Y needs two distinct nonzero columns\n";
      }
      return static_cast<int>(code);
    } else if (bounds->parsed()) {
      bc.out = bounds_out;
      cmd_bounds(bc, out);
    } else if (benchmark->parsed()) {
      bench.seed = resolve_seed(seed_flag);
      cmd_benchmark(bench);
    }
  } catch (const IoError& e) {
    return fail(ExitCode::kIoError, e.what());
  } catch (const DegenerateInput& e) {
    return fail(ExitCode::kDegenerateInput, e.what());
  } catch (const Unrecoverable& e) {
    return fail(ExitCode::kUnrecoverable, e.what());
  } catch (const ResourceLimit& e) {
    return fail(ExitCode::kTooLarge, e.what());
  } catch (const NeedsDistinctColumns& e) {
    return fail(ExitCode::kNeedsDistinctColumns, e.what());
  } catch (const Error& e) {
    return fail(ExitCode::kInvalidParams, e.what());
  } catch (const std::exception& e) {
    return fail(ExitCode::kInternal, e.what());
  }
  return 0;
}

}  // namespace hhf::cli
