#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "vwslab/cli.hpp"

using namespace vwslab;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("vwslab_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  const fs::path p = dir / "config.json";
  std::ofstream(p) << text;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& command, const fs::path& config, const fs::path& out, std::string* err = nullptr,
            const std::string& format = "both") {
  CliOptions o;
  o.command = command;
  o.config = config;
  o.out = out;
  o.format = format;
  std::ostringstream log, e;
  const int code = run(o, log, e);
  if (err) *err = e.str();
  return code;
}

const char* kUniqueness = R"({
  "format_version": 1,
  "template": {"base": "free", "grid": {"L": 30, "N": 512}},
  "q": %Q%
})";

std::string uniqueness(const std::string& q) {
  std::string s = kUniqueness;
  s.replace(s.find("%Q%"), 3, q);
  return s;
}

}  // namespace

TEST_CASE("malformed JSON exits 1") {
  const auto dir = scratch("malformed");
  std::string err;
  CHECK(run_cli("solve", write_config(dir, "{\"format_version\": 1,"), dir / "out", &err) == kExitError);
  CHECK(err.find("malformed JSON") != std::string::npos);
}

TEST_CASE("unknown keys are rejected with their path") {
  const auto dir = scratch("unknown");
  std::string err;
  const auto cfg = write_config(dir, R"({"format_version": 1, "template": "free", "q": 2, "colour": 3})");
  CHECK(run_cli("uniqueness", cfg, dir / "out", &err) == kExitError);
  CHECK(err.find("config: unknown key 'colour'") != std::string::npos);

  const auto nested = write_config(dir, R"({"template": {"base": "free", "Tmax": 1}, "q": 2})");
  CHECK(run_cli("uniqueness", nested, dir / "out", &err) == kExitError);
  CHECK(err.find("config.template: unknown key 'Tmax'") != std::string::npos);
}

TEST_CASE("format version and command are checked") {
  const auto dir = scratch("version");
  std::string err;
  CHECK(run_cli("uniqueness", write_config(dir, R"({"format_version": 2, "template": "free", "q": 2})"), dir / "o",
                &err) == kExitError);
  CHECK(run_cli("solve", write_config(dir, R"({"command": "uniqueness", "template": "free", "q": 2})"), dir / "o",
                &err) == kExitError);
  CHECK(err.find("config.command") != std::string::npos);
}

TEST_CASE("q = 0 uniqueness exits 2 with an indeterminate verdict") {
  const auto dir = scratch("q0");
  CHECK(run_cli("uniqueness", write_config(dir, uniqueness("0")), dir / "out") == kExitVerdictFail);
  const auto report = Json::parse(slurp(dir / "out" / "report.json"));
  CHECK(report["result"]["verdict"] == "indeterminate");
  CHECK(report["exit_code"] == 2);
  CHECK(report["passed"] == false);
}

TEST_CASE("reports are byte-identical across runs and carry the resolved config") {
  const auto dir = scratch("determinism");
  const auto cfg = write_config(dir, uniqueness("2"));
  CHECK(run_cli("uniqueness", cfg, dir / "a") == kExitPass);
  CHECK(run_cli("uniqueness", cfg, dir / "b") == kExitPass);
  CHECK(slurp(dir / "a" / "report.json") == slurp(dir / "b" / "report.json"));
  CHECK(slurp(dir / "a" / "differences.csv") == slurp(dir / "b" / "differences.csv"));
  const auto report = Json::parse(slurp(dir / "a" / "report.json"));
  CHECK(report["config"]["template"]["grid"]["N"] == 512);
  CHECK(report["config"]["net"]["eps_grid"].size() == 6);
  CHECK(report["config"]["seed"] == 0);
  CHECK(fs::exists(dir / "a" / "metadata.json"));
}

TEST_CASE("format selects the outputs") {
  const auto dir = scratch("format");
  const auto cfg = write_config(dir, uniqueness("2"));
  CHECK(run_cli("uniqueness", cfg, dir / "csv", nullptr, "csv") == kExitPass);
  CHECK_FALSE(fs::exists(dir / "csv" / "report.json"));
  CHECK(fs::exists(dir / "csv" / "differences.csv"));
  CHECK(run_cli("uniqueness", cfg, dir / "json", nullptr, "json") == kExitPass);
  CHECK(fs::exists(dir / "json" / "report.json"));
  CHECK_FALSE(fs::exists(dir / "json" / "differences.csv"));
}

TEST_CASE("solve writes a field table") {
  const auto dir = scratch("solve");
  const auto cfg = write_config(dir, R"({"template": {"base": "delta-c0", "grid": {"L": 20, "N": 256}},
                                         "pair": "gaussian", "eps": 0.25, "norms": [[0, 0], [1, 1]]})");
  CHECK(run_cli("solve", cfg, dir / "out") == kExitPass);
  const std::string field = slurp(dir / "out" / "field.csv");
  CHECK(field.rfind("x,re,im,abs\n", 0) == 0);
  const auto report = Json::parse(slurp(dir / "out" / "report.json"));
  CHECK(report["config"]["eps"] == 0.25);
  CHECK(report["result"]["aborted"] == false);
}

TEST_CASE("eps outside the scale domain is a config error") {
  const auto dir = scratch("domain");
  std::string err;
  const auto cfg = write_config(dir, R"({"template": "delta-c0", "eps": 0.5,
                                         "scale": {"kind": "iterated_log", "depth": 2}})");
  CHECK(run_cli("solve", cfg, dir / "out", &err) == kExitError);
  CHECK(err.find("config.eps") != std::string::npos);
}

TEST_CASE("every bundled config parses") {
  for (const auto& entry : fs::directory_iterator(VWSLAB_CONFIG_DIR)) {
    CAPTURE(entry.path().string());
    const Json j = Json::parse(slurp(entry.path()));
    CHECK(j.contains("command"));
    const auto names = command_names();
    CHECK(std::find(names.begin(), names.end(), j["command"].get<std::string>()) != names.end());
  }
}

TEST_CASE("csv quoting") {
  CsvTable t{"t", {"a", "b"}, {{"1", "x,y"}, {"say \"hi\"", "2"}}};
  std::ostringstream os;
  t.write(os);
  CHECK(os.str() == "a,b\n1,\"x,y\"\n\"say \"\"hi\"\"\",2\n");
}
