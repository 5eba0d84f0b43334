#include <cstdlib>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "lab/experiments.hpp"
#include "support.hpp"

using lab::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("radialwave_lab_test_" + name);
  fs::remove_all(dir);
  return dir;
}

json read_json(const fs::path& file) {
  std::ifstream in(file);
  return json::parse(in);
}

int run_lab(const std::string& args) {
  const std::string cmd = std::string(RADIALWAVE_LAB_BIN) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

json doc_for(const std::string& exp, const fs::path& out) {
  json doc = lab::default_config(exp);
  doc["output"] = out.string();
  doc["cache_dir"] = testing::cache_dir().string();
  return doc;
}

}  // namespace

TEST_CASE("config defaults and strict parsing") {
  for (const auto& name : lab::experiment_names()) {
    const lab::ExperimentConfig cfg = lab::parse_config(lab::default_config(name));
    CHECK(cfg.experiment == name);
    CHECK_NOTHROW(lab::validate(cfg));
    CHECK(lab::to_json(cfg) == lab::default_config(name));
  }
  const auto channels = lab::parse_config(lab::default_config("channels"));
  CHECK(channels.N == 4096);
  CHECK(channels.R_max == 64.0);
  CHECK(channels.channels.T == 24.0);

  json bad = lab::default_config("stationary");
  bad["stationary"]["x1"] = 3;
  testing::expect_error(radialwave::ErrorKind::ConfigError, [&] { lab::parse_config(bad); });
  json wrong = lab::default_config("stationary");
  wrong["stationary"]["x0"] = "small";
  testing::expect_error(radialwave::ErrorKind::ConfigError, [&] { lab::parse_config(wrong); });

  json acausal = lab::default_config("channels");
  acausal["channels"]["T"] = 57.0;
  testing::expect_error(radialwave::ErrorKind::CausalityError, [&] { lab::validate(lab::parse_config(acausal)); });
}

TEST_CASE("failed runs write error.json and a manifest") {
  const fs::path dir = scratch("bad");
  json doc = doc_for("stationary", dir);
  doc["d"] = 8;
  std::ostringstream log;
  CHECK(lab::run(doc, log) == lab::kValidation);
  const json err = read_json(dir / "error.json");
  CHECK(err["kind"] == "InvalidParams");
  CHECK(err["exit_code"] == 2);
  const json man = read_json(dir / "manifest.json");
  CHECK(man["status"] == "failed");
  CHECK(man["exit_code"] == 2);
  fs::remove_all(dir);
}

TEST_CASE("stationary run writes schema-tagged outputs with checksums") {
  const fs::path dir = scratch("stationary");
  std::ostringstream log;
  REQUIRE(lab::run(doc_for("stationary", dir), log) == lab::kOk);
  std::ifstream csv(dir / "profile.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header == "# schema=stationary_profile/1");
  const json rep = read_json(dir / "report.json");
  CHECK(std::abs(rep["tail_rate"].get<double>() + 8.0) < 0.8);
  const json man = read_json(dir / "manifest.json");
  CHECK(man["status"] == "ok");
  REQUIRE(man["files"].size() == 2);
  for (const auto& f : man["files"]) CHECK(f["sha256"] == lab::sha256_file(dir / f["name"].get<std::string>()));
  fs::remove_all(dir);
}

TEST_CASE("small channels run") {
  const fs::path dir = scratch("channels");
  json doc = doc_for("channels", dir);
  doc["grid"] = {{"N", 1024}, {"R_max", 32.0}};
  doc["channels"]["samples"] = 3;
  doc["channels"]["T"] = 12.0;
  std::ostringstream log;
  CHECK(lab::run(doc, log) == lab::kOk);
  const json rep = read_json(dir / "channel_report.json");
  CHECK(rep.dump().find("\"verdict\":false") == std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("command line: precedence and exit codes") {
  CHECK(run_lab("stationary --bogus") == 2);
  CHECK(run_lab("no-such-experiment") == 2);

  const fs::path dir = scratch("cli");
  fs::create_directories(dir);
  const fs::path cfg = dir / "cfg.json";
  std::ofstream(cfg) << json{{"experiment", "stationary"}, {"stationary", {{"x0", 0.02}}}}.dump();
  REQUIRE(run_lab("-c " + cfg.string() + " stationary -o " + (dir / "a").string()) == 0);
  CHECK(read_json(dir / "a" / "report.json")["x0"] == 0.02);
  REQUIRE(run_lab("-c " + cfg.string() + " stationary --x0 0.03 -o " + (dir / "b").string()) == 0);
  CHECK(read_json(dir / "b" / "report.json")["x0"] == 0.03);

  // config written for another experiment is refused
  CHECK(run_lab("-c " + cfg.string() + " levine -o " + (dir / "c").string()) == 2);
  CHECK(fs::exists(dir / "c" / "error.json"));
  fs::remove_all(dir);
}
