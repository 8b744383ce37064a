#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "regulink/cli_report.hpp"
#include "regulink/curve_engine.hpp"

using namespace regulink;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = 0;
  std::string out, err;
};

Run cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  Run r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "regulink_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

Json read_json(const fs::path& p) {
  std::ifstream in(p);
  return Json::parse(in);
}

Json without_elapsed(Json j) {
  if (j.is_object()) {
    j.erase("elapsed_ms");
    for (auto& [key, value] : j.items()) {
      value = without_elapsed(value);
    }
  } else if (j.is_array()) {
    for (auto& value : j) {
      value = without_elapsed(value);
    }
  }
  return j;
}

}  // namespace

TEST_CASE("usage errors exit 2") {
  CHECK(cli({}).code == kExitUsage);
  CHECK(cli({"bogus"}).code == kExitUsage);
  CHECK(cli({"hopf", "--m", "0"}).code == kExitUsage);
  CHECK(cli({"hopf", "--samples", "10"}).code == kExitUsage);
  CHECK(cli({"degree", "--map", "nope"}).code == kExitUsage);
  CHECK(cli({"degree", "--map", "pow:x"}).code == kExitUsage);
  CHECK(cli({"link-class", "--d", "0"}).code == kExitUsage);
  CHECK(cli({"link-class", "--d", "7"}).code == kExitUsage);
  CHECK(cli({"link-class", "--convention", "other"}).code == kExitUsage);
  CHECK(cli({"trace", "--step", "1e-6"}).code == kExitUsage);
  CHECK(cli({"verify", "nosuch"}).code == kExitUsage);
  CHECK(cli({"--help"}).code == kExitPass);
}

TEST_CASE("unwritable JSON path exits 3") {
  CHECK(cli({"verify", "lemmaA", "--json", "/nonexistent/dir/report.json"}).code == kExitIo);
  CHECK(cli({"degree", "--map", "identity", "--json", "/nonexistent/dir/r.json"}).code == kExitIo);
}

TEST_CASE("hopf and degree pass") {
  const auto h = cli({"hopf", "--m", "2"});
  CHECK(h.code == kExitPass);
  CHECK(h.out.find("pass") != std::string::npos);
  CHECK(cli({"degree", "--map", "pow:3", "--samples", "100000"}).code == kExitPass);
  CHECK(cli({"degree", "--map", "identity", "--samples", "20000"}).code == kExitPass);
  CHECK(cli({"degree", "--map", "left-mult", "--samples", "100000"}).code == kExitPass);
  CHECK(cli({"degree", "--map", "eval-frame:2", "--samples", "100000"}).code == kExitPass);
}

TEST_CASE("link-class conventions") {
  CHECK(cli({"link-class", "--d", "1", "--samples", "50000"}).code == kExitPass);
  CHECK(cli({"link-class", "--d", "2", "--samples", "50000"}).code == kExitPass);
  // The literal frame degenerates; the run is reported as inconclusive.
  CHECK(cli({"link-class", "--d", "1", "--convention", "paper", "--samples", "50000"}).code ==
        kExitInconclusive);
}

TEST_CASE("trace writes a loop table") {
  const fs::path out = scratch("fiber.txt");
  const auto r = cli({"trace", "--m", "1", "--value", "1,0,0", "--out", out.string()});
  CHECK(r.code == kExitPass);
  std::ifstream in(out);
  const auto loops = read_loops(in);
  REQUIRE(loops.size() == 1);
  CHECK(loops[0].size() > 100);
  // The constant map has a critical value at N.
  CHECK(cli({"trace", "--map", "constant", "--value", "1,0,0", "--out", out.string()}).code ==
        kExitInconclusive);
}

TEST_CASE("JSON schema and key order") {
  const fs::path path = scratch("degree.json");
  REQUIRE(cli({"degree", "--map", "pow:2", "--samples", "50000", "--seed", "3", "--json",
               path.string()})
              .code == kExitPass);
  const Json j = read_json(path);
  std::vector<std::string> keys;
  for (const auto& [key, value] : j.items()) {
    keys.push_back(key);
  }
  CHECK(keys == std::vector<std::string>{"command", "params", "checks", "seed", "samples",
                                         "elapsed_ms", "conventions"});
  REQUIRE(j["checks"].is_array());
  REQUIRE_FALSE(j["checks"].empty());
  std::vector<std::string> check_keys;
  for (const auto& [key, value] : j["checks"][0].items()) {
    check_keys.push_back(key);
  }
  CHECK(check_keys == std::vector<std::string>{"name", "anchor", "raw", "rounded", "residual",
                                               "stderr", "pass"});
  CHECK(j["seed"] == 3);
  CHECK(j["samples"] == 50000);
  CHECK(j["checks"][0]["rounded"] == 2);
  CHECK(j["conventions"].size() == conventions_ledger().size());
}

TEST_CASE("identical runs give identical JSON apart from timings") {
  const fs::path a = scratch("a.json"), b = scratch("b.json"), c = scratch("c.json");
  REQUIRE(cli({"verify", "lemma1", "--seed", "5", "--workers", "1", "--json", a.string()}).code ==
          kExitPass);
  REQUIRE(cli({"verify", "lemma1", "--seed", "5", "--workers", "3", "--json", b.string()}).code ==
          kExitPass);
  CHECK(without_elapsed(read_json(a)).dump() == without_elapsed(read_json(b)).dump());
  setenv("REGULINK_WORKERS", "2", 1);
  REQUIRE(cli({"verify", "lemma1", "--seed", "5", "--json", c.string()}).code == kExitPass);
  unsetenv("REGULINK_WORKERS");
  CHECK(without_elapsed(read_json(a)).dump() == without_elapsed(read_json(c)).dump());
}

TEST_CASE("report exit codes") {
  RunReport r;
  r.checks.push_back(CheckEntry::flag("ok", "holds", true));
  CHECK(r.exit_code() == kExitPass);
  auto soft = CheckEntry::flag("soft", "needs samples", false);
  soft.inconclusive = true;
  r.checks.push_back(soft);
  CHECK(r.exit_code() == kExitInconclusive);
  r.checks.push_back(CheckEntry::below("hard", "small", 1.0, 0.5));
  CHECK(r.exit_code() == kExitFail);
  CHECK(CheckEntry::above("a", "b", 2.0, 1.0).pass);
  CHECK_FALSE(CheckEntry::above("a", "b", 1.0, 1.0).pass);
}

TEST_CASE("verify suites are listed") {
  const auto& s = verify_suites();
  for (const char* name : {"all", "lemmaA", "lemma1", "lemma2", "theorem3"}) {
    CHECK(std::find(s.begin(), s.end(), name) != s.end());
  }
}
