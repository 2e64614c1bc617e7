#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

#include "hhf/commands.hpp"
#include "hhf/matrix_io.hpp"
#include "hhf/rng.hpp"
#include "test_support.hpp"

using namespace hhf;
namespace fs = std::filesystem;

namespace {

class TempDir {
 public:
  explicit TempDir(const std::string& tag)
      : path_(fs::temp_directory_path() /
              ("hhf_cli_" + tag + "_" + std::to_string(::getpid()))) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

// Runs the hhf binary through the shell, stdout/stderr discarded.
int run_hhf(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + "'" HHF_CLI_PATH "' " + args +
                          " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("shortest real formatting round-trips") {
  Rng rng(12);
  for (int k = 0; k < 2000; ++k) {
    const double v = rng.normal() * std::pow(10.0, static_cast<int>(rng.next_u64() % 40) - 20);
    const std::string s = io::format_double(v);
    CHECK(std::stod(s) == v);
  }
  CHECK(io::format_double(0.5) == "0.5");
  CHECK(io::format_double(-1.0) == "-1");
}

TEST_CASE("csv round-trip and malformed input") {
  TempDir dir("csv");
  Rng rng(3);
  const Matrix m = testing::random_matrix(4, 3, rng);
  io::write_matrix_csv(dir / "m.csv", m);
  CHECK(io::read_matrix_csv(dir / "m.csv") == m);

  io::write_text(dir / "ragged.csv", "1,2\n3\n");
  CHECK_THROWS_AS(io::read_matrix_csv(dir / "ragged.csv"), IoError);
  io::write_text(dir / "junk.csv", "1,abc\n");
  CHECK_THROWS_AS(io::read_matrix_csv(dir / "junk.csv"), IoError);
  io::write_text(dir / "empty.csv", "");
  CHECK_THROWS_AS(io::read_matrix_csv(dir / "empty.csv"), IoError);
  io::write_text(dir / "crlf.csv", "1,2\r\n3,4\r\n");
  CHECK(io::read_matrix_csv(dir / "crlf.csv").rows() == 2);
  io::write_text(dir / "bits.csv", "0,1\n2,0\n");
  CHECK_THROWS_AS(io::read_binary_csv(dir / "bits.csv"), IoError);
  CHECK_THROWS_AS(io::read_matrix_csv(dir / "missing.csv"), IoError);
}

TEST_CASE("generate is deterministic and self-consistent") {
  TempDir a("gen_a");
  TempDir b("gen_b");
  REQUIRE(run_hhf("generate --n 12 --p 30 --theta 0.3 --seed 5 --out " + q(a.path())) == 0);
  REQUIRE(run_hhf("generate --n 12 --p 30 --theta 0.3 --seed 5 --out " + q(b.path())) == 0);
  for (const char* f : {"U.csv", "X.csv", "Y.csv", "meta.json"}) {
    CAPTURE(f);
    CHECK(slurp(a / f) == slurp(b / f));
  }

  const std::string x_text = slurp(a / "X.csv");
  CHECK(x_text.find_first_not_of("01,\n") == std::string::npos);

  // Y reloads to exactly H X for the stored U.
  const UnitVector u(io::read_vector_csv(a / "U.csv"));
  const BinaryMatrix x(io::read_binary_csv(a / "X.csv"));
  const Matrix y = io::read_matrix_csv(a / "Y.csv");
  CHECK(y.rows() == 12);
  CHECK(y.cols() == 30);
  CHECK(HouseholderMatrix(u).apply(x.to_real()) == y);
  CHECK(std::abs(u.sum()) >= 0.1);

  TempDir c("gen_c");
  REQUIRE(run_hhf("generate --n 12 --p 30 --theta 0.3 --seed 6 --out " + q(c.path())) == 0);
  CHECK(slurp(a / "Y.csv") != slurp(c / "Y.csv"));
}

TEST_CASE("HHF_SEED is the fallback seed") {
  TempDir a("env_a");
  TempDir b("env_b");
  TempDir d("env_d");
  REQUIRE(run_hhf("generate --n 6 --p 5 --seed 77 --out " + q(a.path())) == 0);
  REQUIRE(run_hhf("generate --n 6 --p 5 --out " + q(b.path()), "HHF_SEED=77") == 0);
  REQUIRE(run_hhf("generate --n 6 --p 5 --out " + q(d.path())) == 0);
  CHECK(slurp(a / "Y.csv") == slurp(b / "Y.csv"));
  CHECK(slurp(a / "Y.csv") != slurp(d / "Y.csv"));
  CHECK(run_hhf("generate --n 6 --p 5 --out " + q(d.path()), "HHF_SEED=abc") == 2);
}

TEST_CASE("recover on a trivial instance") {
  TempDir dir("rec");
  // u = e1, X = 1 (3 x 2): Y rows are [-1, -1], [1, 1], [1, 1].
  io::write_text(dir / "Y.csv", "-1,-1\n1,1\n1,1\n");
  REQUIRE(run_hhf("recover --in " + q(dir.path()) + " --out " + q(dir.path())) == 0);
  CHECK(io::read_binary_csv(dir / "X_hat.csv") == BitMatrix::Ones(3, 2));
  const Vector u_hat = io::read_vector_csv(dir / "U_hat.csv");
  CHECK(std::abs(std::abs(u_hat[0]) - 1.0) < 1e-15);
  CHECK(slurp(dir / "result.json").find("\"theta_hat\": 1") != std::string::npos);
}

TEST_CASE("recover reports ground-truth errors when available") {
  TempDir dir("rec_truth");
  REQUIRE(run_hhf("generate --n 20 --p 4000 --theta 0.4 --min-abs-c 1.0 --seed 3 --out " +
              q(dir.path())) == 0);
  REQUIRE(run_hhf("recover --in " + q(dir.path()) + " --out " + q(dir.path())) == 0);
  const std::string json = slurp(dir / "result.json");
  CHECK(json.find("\"linf_error\"") != std::string::npos);
  CHECK(json.find("\"x_bit_error_rate\"") != std::string::npos);
}

TEST_CASE("recover failures leave no partial output") {
  TempDir dir("rec_fail");
  CHECK(run_hhf("recover --in " + q(dir / "nope") + " --out " + q(dir.path())) == 3);
  CHECK_FALSE(fs::exists(dir / "result.json"));

  io::write_text(dir / "zero.csv", "0,0\n0,0\n");
  CHECK(run_hhf("recover --in " + q(dir / "zero.csv") + " --out " + q(dir.path())) == 4);
  CHECK_FALSE(fs::exists(dir / "result.json"));
  CHECK_FALSE(fs::exists(dir / "U_hat.csv"));

  io::write_text(dir / "ones.csv", "1,1\n1,1\n");
  CHECK(run_hhf("recover --in " + q(dir / "ones.csv") + " --out " + q(dir.path())) == 8);
  CHECK_FALSE(fs::exists(dir / "result.json"));

  io::write_text(dir / "bad.csv", "1,x\n");
  CHECK(run_hhf("recover --in " + q(dir / "bad.csv") + " --out " + q(dir.path())) == 3);
  CHECK(run_hhf("recover --in " + q(dir / "ones.csv") + " --zeta 1.5 --out " + q(dir.path())) == 2);
}

TEST_CASE("exact subcommand") {
  TempDir dir("exact");
  REQUIRE(run_hhf("generate --n 8 --p 6 --theta 0.5 --seed 2 --out " + q(dir.path())) == 0);
  const BitMatrix x = io::read_binary_csv(dir / "X.csv");
  REQUIRE(run_hhf("exact --in " + q(dir.path()) + " --out " + q(dir.path())) == 0);
  CHECK(io::read_binary_csv(dir / "X_hat.csv") == x);
  const UnitVector u(io::read_vector_csv(dir / "U.csv"));
  const UnitVector u_hat(io::read_vector_csv(dir / "U_hat.csv"));
  CHECK(linf_error_up_to_sign(u, u_hat) < 1e-10);
  CHECK(slurp(dir / "result.json").find("\"status\": \"found\"") != std::string::npos);

  TempDir same("exact_same");
  io::write_text(same / "Y.csv", "-1,-1\n1,1\n1,1\n");
  CHECK(run_hhf("exact --in " + q(same.path()) + " --out " + q(same.path())) == 6);
  CHECK(slurp(same / "result.json").find("needs_distinct_columns") != std::string::npos);

  TempDir none("exact_none");
  io::write_text(none / "Y.csv", "0.3,0.7\n0.4,0.1\n0.2,0.5\n");
  CHECK(run_hhf("exact --in " + q(none.path()) + " --out " + q(none.path())) == 5);
  CHECK_FALSE(fs::exists(none / "U_hat.csv"));

  TempDir big("exact_big");
  REQUIRE(run_hhf("generate --n 25 --p 3 --seed 2 --out " + q(big.path())) == 0);
  CHECK(run_hhf("exact --in " + q(big.path()) + " --out " + q(big.path())) == 7);
  CHECK_FALSE(fs::exists(big / "result.json"));
}

TEST_CASE("bounds subcommand") {
  TempDir dir("bounds");
  REQUIRE(run_hhf("bounds --n 1000 --theta 0.4 --c 1 --t 0.05 --out " + q(dir.path())) == 0);
  const std::string json = slurp(dir / "bounds.json");
  CHECK(json.find("\"plan_columns\": 4534") != std::string::npos);

  std::ostringstream out;
  std::ostringstream err;
  const char* argv[] = {"hhf", "bounds", "--n", "50", "--p", "20", "--t", "0.05"};
  CHECK(cli::run(8, argv, out, err) == 0);
  CHECK(out.str().find("\"theta_bound\"") != std::string::npos);
  CHECK(run_hhf("bounds --c 0") == 2);
}

TEST_CASE("benchmark subcommand") {
  TempDir a("bench_a");
  TempDir b("bench_b");
  const std::string args = "benchmark --n 30 --theta 0.4 --p-values 16 --trials 1 --seed 9 --out ";
  REQUIRE(run_hhf(args + q(a.path())) == 0);
  REQUIRE(run_hhf(args + q(b.path())) == 0);
  const std::string csv = slurp(a / "figure1.csv");
  CHECK(csv == slurp(b / "figure1.csv"));
  CHECK(csv.rfind("p,theta,mean_linf_error,empirical_rate,bound_value\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);

  TempDir c("bench_c");
  REQUIRE(run_hhf("benchmark --n 30 --theta 0.1,0.4 --p-values 4,16,64 --trials 2 --out " +
              q(c.path())) == 0);
  const std::string grid = slurp(c / "figure1.csv");
  CHECK(std::count(grid.begin(), grid.end(), '\n') == 7);
  CHECK(run_hhf("benchmark --p-values 16,4 --trials 1 --out " + q(c.path())) == 2);
}

TEST_CASE("invalid parameters exit with status 2") {
  TempDir dir("invalid");
  CHECK(run_hhf("") == 2);
  CHECK(run_hhf("frobnicate") == 2);
  CHECK(run_hhf("generate --theta 1.5 --out " + q(dir.path())) == 2);
  CHECK(run_hhf("generate --n 1 --out " + q(dir.path())) == 2);
  CHECK(run_hhf("generate --n abc --out " + q(dir.path())) == 2);
  CHECK(run_hhf("generate --n 5 --min-abs-c 3 --out " + q(dir.path())) == 2);
  CHECK(run_hhf("recover") == 2);
  CHECK(run_hhf("--help") == 0);
}

}  // TEST_SUITE
