#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "oplab/io.hpp"
#include "oplab/theorems.hpp"
#include "oracles.hpp"

using namespace oplab;
namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code;
  std::string out;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunResult run(const std::string& args, const fs::path& dir) {
  const fs::path out = dir / "stdout.txt";
  const std::string cmd = std::string(OPLAB_BIN) + " " + args + " > " + out.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return {code, slurp(out)};
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("oplab_cli_" + std::to_string(::getpid()) + "_" +
                                        std::to_string(std::rand()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

void put(const fs::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  out << content;
}

}  // namespace

TEST_CASE("classify: verdicts from a MatrixFile, exit 0") {
  TempDir dir;
  put(dir.path / "j2.json", matrix_to_json(oracle::jordan2()) + "\n");

  const RunResult table = run("classify " + (dir.path / "j2.json").string(), dir.path);
  CHECK(table.exit_code == 0);
  CHECK(table.out.find("hyponormal") != std::string::npos);
  CHECK(table.out.find("nonmember") != std::string::npos);

  const RunResult json = run("classify --json " + (dir.path / "j2.json").string(), dir.path);
  CHECK(json.exit_code == 0);
  CHECK(json.out.find("\"class\":\"hyponormal\",\"verdict\":\"nonmember\",\"margin\":-1") !=
        std::string::npos);
  CHECK(json.out.find("\"tool_version\"") != std::string::npos);

  put(dir.path / "eye.json", matrix_to_json(Matrix::Identity(3, 3)) + "\n");
  const RunResult eye = run("classify " + (dir.path / "eye.json").string(), dir.path);
  CHECK(eye.exit_code == 0);
  CHECK(eye.out.find("inapplicable") != std::string::npos);  // subnormal only
}

TEST_CASE("classify: malformed inputs exit 2 with a diagnostic") {
  TempDir dir;

  put(dir.path / "truncated.json", "{\"dim\": 2, \"entries\": [[[0,0],[1,0]],");
  const RunResult trunc = run("classify " + (dir.path / "truncated.json").string(), dir.path);
  CHECK(trunc.exit_code == 2);
  CHECK(trunc.out.find("error") != std::string::npos);

  put(dir.path / "nonsquare.json", "{\"dim\": 2, \"entries\": [[[0,0],[1,0]]]}");
  CHECK(run("classify " + (dir.path / "nonsquare.json").string(), dir.path).exit_code == 2);

  put(dir.path / "notfinite.json", "{\"dim\": 1, \"entries\": [[[1e999,0]]]}");
  CHECK(run("classify " + (dir.path / "notfinite.json").string(), dir.path).exit_code == 2);

  CHECK(run("classify " + (dir.path / "missing.json").string(), dir.path).exit_code == 2);
}

TEST_CASE("pair: writes A, B and the certificate") {
  TempDir dir;
  const fs::path out = dir.path / "pair3";
  fs::create_directories(out);
  const RunResult r =
      run("pair clock_shift --dim 3 --out " + out.string(), dir.path);
  CHECK(r.exit_code == 0);

  const Matrix a = matrix_from_file((out / "A.json").string());
  const Matrix b = matrix_from_file((out / "B.json").string());
  CHECK(a.rows() == 3);
  const CommutationCertificate cert = extract_lambda(a, b, Tolerances{});
  CHECK(std::abs(cert.lambda - Complex(std::cos(2 * M_PI / 3), std::sin(2 * M_PI / 3))) <= 1e-12);

  const std::string cert_text = slurp(out / "certificate.json");
  CHECK(cert_text.find("\"lambda\":[-0.5") != std::string::npos);

  CHECK(run("pair clock_shift --dim 1 --out " + out.string(), dir.path).exit_code == 2);
  CHECK(run("pair nosuch --dim 3 --out " + out.string(), dir.path).exit_code == 2);
  CHECK(run("pair clock_shift --dim 3 --out /nonexistent/dir", dir.path).exit_code == 2);
}

TEST_CASE("pair: direct sums compose clock blocks") {
  TempDir dir;
  const fs::path out = dir.path / "sum";
  fs::create_directories(out);
  const RunResult r = run(
      "pair direct_sum --of clock_shift:2,clock_shift:2 --out " + out.string(), dir.path);
  CHECK(r.exit_code == 0);
  const Matrix a = matrix_from_file((out / "A.json").string());
  CHECK(a.rows() == 4);
  const std::string cert_text = slurp(out / "certificate.json");
  CHECK(cert_text.find("\"lambda\":[-1,") != std::string::npos);

  // mismatched lambdas inside the sum are an input error
  CHECK(run("pair direct_sum --of clock_shift:2,clock_shift:3 --out " + out.string(), dir.path)
            .exit_code == 2);
}

TEST_CASE("verify: families, files and exit codes") {
  TempDir dir;
  const RunResult fam =
      run("verify --theorem power_identity --family clock_shift:4", dir.path);
  CHECK(fam.exit_code == 0);
  CHECK(fam.out.find("confirmed") != std::string::npos);

  put(dir.path / "j2.json", matrix_to_json(oracle::jordan2()) + "\n");
  put(dir.path / "x.json", matrix_to_json(oracle::pauli_x()) + "\n");
  const RunResult vac = run("verify --theorem modulus --a " + (dir.path / "j2.json").string() +
                                " --b " + (dir.path / "x.json").string(),
                            dir.path);
  CHECK(vac.exit_code == 0);
  CHECK(vac.out.find("vacuous") != std::string::npos);

  CHECK(run("verify --theorem nosuch --family clock_shift:2", dir.path).exit_code == 2);
  CHECK(run("verify --theorem modulus", dir.path).exit_code == 2);

  const RunResult all = run("verify --all --family clock_shift:3 --json", dir.path);
  CHECK(all.exit_code == 0);
  CHECK(all.out.find("\"theorem\":\"m_product\"") != std::string::npos);
  CHECK(all.out.find("violated") == std::string::npos);
}

TEST_CASE("verify: restriction through a basis file") {
  TempDir dir;
  Matrix d3 = Matrix::Zero(3, 3);
  d3(0, 0) = Complex(1, 0);
  d3(1, 1) = Complex(2, 0);
  d3(2, 2) = Complex(3, 0);
  put(dir.path / "t.json", matrix_to_json(d3) + "\n");
  put(dir.path / "basis.json", basis_to_json(Matrix::Identity(3, 2)) + "\n");
  const RunResult r = run("verify --theorem restriction --a " + (dir.path / "t.json").string() +
                              " --basis " + (dir.path / "basis.json").string(),
                          dir.path);
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("confirmed") != std::string::npos);
}

TEST_CASE("suite: deterministic reports and the exit contract") {
  TempDir dir;
  const std::string flags = "suite --dims 2..4 --trials 8 --seed 42 --report ";
  const fs::path r1 = dir.path / "r1.json";
  const fs::path r2 = dir.path / "r2.json";
  CHECK(run(flags + r1.string(), dir.path).exit_code == 0);
  CHECK(run(flags + r2.string(), dir.path).exit_code == 0);
  const std::string doc1 = slurp(r1);
  CHECK(doc1 == slurp(r2));  // byte identical
  CHECK(doc1.find("\"passed\":true") != std::string::npos);
  CHECK(doc1.find("\"tool_version\":\"0.1.0\"") != std::string::npos);

  CHECK(run("suite --trials 0", dir.path).exit_code == 2);
  CHECK(run("suite --dims nonsense --trials 2", dir.path).exit_code == 2);
}

TEST_CASE("search: clean run and unknown theorem") {
  TempDir dir;
  const RunResult r =
      run("search --theorem power_identity --trials 6 --seed 3", dir.path);
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("\"violated\":0") != std::string::npos);

  CHECK(run("search --theorem thm_9 --trials 3", dir.path).exit_code == 2);
  CHECK(run("search --trials 3", dir.path).exit_code == 2);
}

TEST_CASE("pair outputs round-trip into classify and verify") {
  TempDir dir;
  const fs::path out = dir.path / "roundtrip";
  fs::create_directories(out);
  CHECK(run("pair clock_shift --dim 5 --out " + out.string(), dir.path).exit_code == 0);
  CHECK(run("classify " + (out / "A.json").string(), dir.path).exit_code == 0);
  const RunResult v = run("verify --theorem quasinormal_product --a " +
                              (out / "A.json").string() + " --b " + (out / "B.json").string(),
                          dir.path);
  CHECK(v.exit_code == 0);
  CHECK(v.out.find("confirmed") != std::string::npos);

  // serialization round-trip is lossless
  const Matrix a = matrix_from_file((out / "A.json").string());
  CHECK((matrix_from_json(matrix_to_json(a)) - a).norm() == 0.0);
}

TEST_CASE("17-digit serialization round-trips doubles exactly") {
  for (double v : {0.1, 1.0 / 3.0, -2.718281828459045e-101, 5e-324, 1.7976931348623157e308,
                   -0.0, 123456789.12345679}) {
    const std::string text = fmt17(v);
    const double back = std::strtod(text.c_str(), nullptr);
    CHECK(back == v);
  }
}

TEST_CASE("exit code 1 is reserved for violated verdicts") {
  // No true theorem yields a violated verdict from honest inputs; the
  // mapping is what the commands branch on.
  SuiteReport report;
  report.per_theorem.emplace_back("modulus", TheoremTally{});
  CHECK(report.passed());
  report.per_theorem.front().second.violated = 1;
  CHECK(!report.passed());
}
