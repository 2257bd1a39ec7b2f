// Drives the installed CLI binary end to end.  The binary path comes from
// the PARRYAC_BIN environment variable (set by CTest).
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout + stderr
};

RunResult run_cli(const std::string& args) {
  const char* bin = std::getenv("PARRYAC_BIN");
  REQUIRE_MESSAGE(bin != nullptr, "PARRYAC_BIN must point at the CLI binary");
  const std::string cmd = std::string(bin) + " " + args + " 2>&1";
  std::array<char, 4096> buf{};
  RunResult result;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  while (std::fgets(buf.data(), buf.size(), pipe) != nullptr) {
    result.output += buf.data();
  }
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("parryac_test_" + name);
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("validate: ok and constraint violation exit codes") {
  const auto ok = run_cli("validate simple:1,1");
  CHECK(ok.exit_code == 0);
  CHECK(ok.output.find("ok") != std::string::npos);

  const auto bad = run_cli("validate simple:1,0");
  CHECK(bad.exit_code == 2);
  CHECK(bad.output.find("alpha_{m-1}>=1") != std::string::npos);

  const auto garbage = run_cli("validate notaspec");
  CHECK(garbage.exit_code == 1);

  const auto usage = run_cli("frobnicate");
  CHECK(usage.exit_code == 1);
}

TEST_CASE("prefix and urep") {
  const auto prefix = run_cli("prefix simple:1,1 -n 5");
  CHECK(prefix.exit_code == 0);
  CHECK(prefix.output == "01001\n");

  const auto urep = run_cli("urep simple:1,1 7");
  CHECK(urep.exit_code == 0);
  CHECK(urep.output == "1010\n");
}

TEST_CASE("balance: spectral check plus estimate") {
  const auto out = run_cli("balance simple:1,1 --cap 65536");
  CHECK(out.exit_code == 0);
  CHECK(out.output.find("spectral: Certified") != std::string::npos);
  CHECK(out.output.find("c: 1 (Stable)") != std::string::npos);

  const auto boundary = run_cli("balance simple:1,0,1,1 --cap 4096");
  CHECK(boundary.exit_code == 0);
  CHECK(boundary.output.find("spectral: Inconclusive") != std::string::npos);
}

TEST_CASE("build, eval, export") {
  const auto fib = temp_file("fib.json");
  const auto built = run_cli("build simple:1,1 --reproducible -o " + fib.string());
  CHECK(built.exit_code == 0);

  const auto two = run_cli("eval " + fib.string() + " 1000000 --fn ac");
  CHECK(two.exit_code == 0);
  CHECK(two.output == "2\n");

  const auto bal = run_cli("eval " + fib.string() + " 987654321 --fn balance");
  CHECK(bal.exit_code == 0);
  CHECK(bal.output == "1\n");

  const auto zero = run_cli("eval " + fib.string() + " 0");
  CHECK(zero.exit_code == 2);

  const auto dot = temp_file("fib.dot");
  const auto exported = run_cli("export " + fib.string() + " --dot " + dot.string());
  CHECK(exported.exit_code == 0);
  const std::string dot_text = slurp(dot);
  CHECK(dot_text.find("digraph") != std::string::npos);
  CHECK(dot_text.find("\"0 / ") != std::string::npos);

  std::filesystem::remove(fib);
  std::filesystem::remove(dot);
}

TEST_CASE("build: byte-identical under --reproducible") {
  const auto a = temp_file("rep_a.json");
  const auto b = temp_file("rep_b.json");
  CHECK(run_cli("build nonsimple:m=1,p=1:2,1 --reproducible -o " + a.string()).exit_code == 0);
  CHECK(run_cli("build nonsimple:m=1,p=1:2,1 --reproducible -o " + b.string()).exit_code == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(!slurp(a).empty());
  std::filesystem::remove(a);
  std::filesystem::remove(b);
}

TEST_CASE("table: matches the oracle, detects tampering") {
  const auto trib = temp_file("trib.json");
  REQUIRE(run_cli("build simple:1,1,1 --reproducible -o " + trib.string()).exit_code == 0);

  const auto good = run_cli("table " + trib.string() + " --from 1 --to 50 --oracle");
  CHECK(good.exit_code == 0);
  CHECK(good.output.find("match") != std::string::npos);
  CHECK(good.output.find("no") == std::string::npos);

  // Corrupt one output entry; the oracle comparison must notice and exit 4.
  {
    std::ifstream in(trib);
    std::stringstream ss;
    ss << in.rdbuf();
    std::string text = ss.str();
    const auto pos = text.find("\"tau_ac\": [");
    REQUIRE(pos != std::string::npos);
    // Skip state 0's sentinel entry and bump state 1's value (2 -> 29).
    const auto first_comma = text.find(',', pos);
    REQUIRE(first_comma != std::string::npos);
    const auto second_comma = text.find(',', first_comma + 1);
    REQUIRE(second_comma != std::string::npos);
    text.insert(second_comma, "9");
    std::ofstream out(trib);
    out << text;
  }
  const auto bad = run_cli("table " + trib.string() + " --from 1 --to 50 --oracle");
  CHECK(bad.exit_code == 4);
  CHECK(bad.output.find("no") != std::string::npos);

  std::filesystem::remove(trib);
}

TEST_CASE("environment caps are honored") {
  const char* bin = std::getenv("PARRYAC_BIN");
  REQUIRE(bin != nullptr);
  const auto out = temp_file("capped.json");
  for (const char* env : {"PARRYAC_MAX_STATES=2", "PARRYAC_MAX_TRIPLES=5"}) {
    const std::string cmd = std::string(env) + " " + bin + " build simple:1,1,1 -o " +
                            out.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    CHECK(WIFEXITED(status));
    CHECK(WEXITSTATUS(status) == 3);
  }
  std::filesystem::remove(out);
}

TEST_CASE("table: from a spec directly, no oracle columns") {
  const auto out = run_cli("table simple:1,1 --from 1 --to 5");
  CHECK(out.exit_code == 0);
  std::istringstream lines(out.output);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "n\turep\tac\tb");
  int rows = 0;
  while (std::getline(lines, line)) ++rows;
  CHECK(rows == 5);
}
