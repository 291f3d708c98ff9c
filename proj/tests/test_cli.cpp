#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "cli.hpp"
#include "ebk/ebk.hpp"
#include "ebk/spectrum.hpp"

using namespace ebk;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "ebk");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> v;
  std::istringstream is(text);
  for (std::string l; std::getline(is, l);) v.push_back(l);
  return v;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> v;
  std::istringstream is(line);
  for (std::string c; std::getline(is, c, ',');) v.push_back(c);
  return v;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("billiard-solve") {
  const Run r = run({"billiard-solve", "--m", "0", "--n", "1"});
  REQUIRE(r.code == 0);
  const auto rows = lines(r.out);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == "m,n,F,E,residual");
  CHECK(std::stod(split(rows[1])[2]) == std::numbers::pi);

  const Run grid = run({"billiard-solve", "--m-max", "2", "--n-max", "3", "--maslov"});
  REQUIRE(grid.code == 0);
  CHECK(lines(grid.out).size() == 1 + 3 * 4);
  CHECK(split(lines(grid.out)[1])[1] == "0.75");
}

TEST_CASE("spectrum-direct") {
  const Run r = run({"spectrum-direct", "--profile", "harmonic:1,2", "--m-max", "2"});
  REQUIRE(r.code == 0);
  const auto rows = lines(r.out);
  REQUIRE(rows.size() == 10);
  bool seen = false;
  for (const auto& row : rows) {
    const auto c = split(row);
    if (c[0] == "1" && c[1] == "1") {
      CHECK(c[2] == "3");
      seen = true;
    }
  }
  CHECK(seen);

  const Run json = run({"spectrum-direct", "--profile", "harmonic:1,2", "--m-max", "1",
                        "--shift", "0.5,0.5", "--format", "json"});
  REQUIRE(json.code == 0);
  CHECK(json.out.find("\"direct\"") != std::string::npos);
  CHECK(json.out.find("1.5") != std::string::npos);
}

TEST_CASE("exit codes") {
  CHECK(run({"spectrum-variational", "--profile", "circle", "--k-max", "0"}).code == 2);
  CHECK(run({"spectrum-direct", "--profile", "harmonic:1,x"}).code == 2);
  CHECK(run({"spectrum-direct", "--profile", "circle", "--format", "xml"}).code == 2);
  CHECK(run({"spectrum-direct", "--profile", "circle", "--hbar", "-1"}).code == 2);
  CHECK(run({"no-such-command"}).code == 2);
  CHECK(run({}).code == 2);
  const Run bad = run({"spectrum-direct", "--profile", "/no/such/file.json"});
  CHECK(bad.code == 2);
  CHECK_FALSE(bad.err.empty());
  // the linear profile has a flat level set: the transform has no nice points
  const Run flat = run({"legendre-dual", "--profile", "harmonic:1,2"});
  CHECK(flat.code == 3);
  CHECK(flat.err.find("TooFewNicePoints") != std::string::npos);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("actions round-trip through spectrum-variational") {
  const std::string path = "test_cli_actions.csv";
  const Run a = run({"actions", "--profile", "pnorm:4", "--k-max", "30", "--out", path});
  REQUIRE(a.code == 0);
  CHECK(a.out.empty());

  const Run v = run({"spectrum-variational", "--actions", path, "--orientation", "convex",
                     "--m-max", "4"});
  REQUIRE(v.code == 0);
  const Run p = run({"spectrum-variational", "--profile", "pnorm:4", "--k-max", "30",
                     "--m-max", "4"});
  REQUIRE(p.code == 0);
  CHECK(v.out == p.out);

  const LevelSurface s = LevelSurface::from_profile(ToricProfile::pnorm(4.0));
  const auto entries = marked_action_spectrum(s, 30);
  std::ostringstream expected;
  write_spectrum_csv(expected, variational_spectrum(entries, Orientation::convex, 1.0, 4));
  CHECK(v.out == expected.str());
  std::remove(path.c_str());
}

TEST_CASE("determinism") {
  const std::vector<std::vector<std::string>> configs = {
      {"spectrum-variational", "--profile", "ramos", "--k-max", "60", "--m-max", "3"},
      {"spectrum-reconstruct", "--profile", "circle", "--k-max", "40", "--m-max", "3"},
      {"billiard-crosscheck", "--m-max", "2", "--k-max", "100"},
      {"legendre-dual", "--profile", "pnorm:3", "--format", "json"},
  };
  for (const auto& cfg : configs) {
    const Run a = run(cfg);
    const Run b = run(cfg);
    CHECK_MESSAGE(a.code == 0, cfg[0] << ": " << a.err);
    CHECK(a.out == b.out);
    CHECK_FALSE(a.out.empty());
  }
}

TEST_CASE("output files") {
  const std::string path = "test_cli_cross.json";
  const Run r = run({"billiard-crosscheck", "--m1", "1", "--m2", "2", "--k-max", "200",
                     "--out", path});
  REQUIRE(r.code == 0);
  const std::string text = slurp(path);
  for (const char* key : {"F_route", "F_ref", "k_max", "error_estimate"}) {
    CHECK(text.find(key) != std::string::npos);
  }
  std::remove(path.c_str());
}

TEST_CASE("spectrum-reconstruct report") {
  const std::string report = "test_cli_report.json";
  const Run r = run({"spectrum-reconstruct", "--profile", "circle", "--k-max", "50",
                     "--m-max", "4", "--report", report});
  REQUIRE(r.code == 0);
  for (const auto& row : lines(r.out)) {
    const auto c = split(row);
    if (c[0] == "3" && c[1] == "4") CHECK(std::abs(std::stod(c[2]) - 5.0) <= 1e-3);
  }
  const std::string text = slurp(report);
  CHECK(text.find("nice_count") != std::string::npos);
  CHECK(text.find("hausdorff") != std::string::npos);
  std::remove(report.c_str());
}

TEST_CASE("minmax-certify") {
  const Run above = run({"minmax-certify", "--profile", "harmonic:1,2", "--k-max", "4",
                         "--m", "1,1", "--offset", "0.5", "--ell-max", "5"});
  REQUIRE(above.code == 0);
  const auto rows = lines(above.out);
  REQUIRE(rows.size() == 6);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(std::stod(split(rows[i])[2]) > 0);

  const Run below = run({"minmax-certify", "--profile", "harmonic:1,2", "--k-max", "4",
                         "--m", "1,1", "--offset", "-0.5", "--ell-max", "5"});
  REQUIRE(below.code == 0);
  for (std::size_t i = 1; i < 6; ++i) CHECK(std::stod(split(lines(below.out)[i])[2]) < 0);
}

TEST_CASE("the built executable") {
  const std::string cmd = std::string(EBK_CLI_PATH) + " billiard-solve --m 0 --n 2 > test_cli_bin.csv";
  REQUIRE(std::system(cmd.c_str()) == 0);
  const auto rows = lines(slurp("test_cli_bin.csv"));
  REQUIRE(rows.size() == 2);
  CHECK(std::stod(split(rows[1])[2]) == 2 * std::numbers::pi);
  std::remove("test_cli_bin.csv");

  const std::string bad = std::string(EBK_CLI_PATH) + " spectrum-variational --profile circle --k-max 0 2> /dev/null";
  const int status = std::system(bad.c_str());
  CHECK(WEXITSTATUS(status) == 2);
}
