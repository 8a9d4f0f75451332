#include <doctest.h>

#include <filesystem>

#include "hmetric/config.hpp"
#include "hmetric/errors.hpp"
#include "hmetric/io.hpp"
#include "hmetric/run.hpp"

using namespace hmetric;
namespace fs = std::filesystem;

namespace {

nlohmann::json minimal() {
  return nlohmann::json::parse(
      R"({"kind":"cyclic","rank":3,"q":{"order":3,"numerator":[[1,0]],"denominator":[[1,0]]}})");
}

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("hmetric_unit_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_SUITE("cli-report") {

TEST_CASE("defaults are filled in") {
  auto c = parse_config(minimal());
  CHECK(c.solver.tolerance == 1e-10);
  CHECK(c.solver.continuation_steps == 8);
  CHECK(c.grid.R == 0.95);
  CHECK(c.grid.n_rho == 128);
  CHECK(c.grid.n_theta == 64);
  CHECK(c.mode == RunMode::Solve);
}

TEST_CASE("config round trips") {
  auto j = minimal();
  j["kind"] = "vortex";
  j.erase("rank");
  j["q"]["order"] = 2;
  j["vortex"] = {{"a", 1.5}, {"c", 1.0 / 3.0}};
  j["grid"] = {{"R", 0.9}, {"n_rho", 33}, {"n_theta", 16}, {"grading", "uniform"}};
  j["sweep"] = {{"radii", {0.5, 0.7}}};
  auto c = parse_config(j);
  CHECK(parse_config(render_config(c)) == c);
  CHECK(render_config(parse_config(render_config(c))) == render_config(c));
}

TEST_CASE("schema errors name the key") {
  auto j = minimal();
  j["grid"] = {{"Radius", 0.9}};
  CHECK_THROWS_WITH_AS(parse_config(j), doctest::Contains("grid.Radius"), ConfigError);
  j = minimal();
  j["colour"] = 1;
  CHECK_THROWS_WITH_AS(parse_config(j), doctest::Contains("colour"), ConfigError);
  j = minimal();
  j["kind"] = "hexagonal";
  CHECK_THROWS_AS(parse_config(j), ConfigError);
  j = minimal();
  j["rank"] = 2;
  CHECK_THROWS_WITH_AS(parse_config(j), "order must equal rank for cyclic", ConfigError);
  j = minimal();
  j["grid"] = {{"n_rho", 4}};
  CHECK_THROWS_AS(parse_config(j), ConfigError);
}

TEST_CASE("atomic write and hash") {
  auto dir = scratch("io");
  write_atomic((dir / "a" / "b.txt").string(), "hello");
  CHECK(read_text((dir / "a" / "b.txt").string()) == "hello");
  CHECK_FALSE(fs::exists(dir / "a" / "b.txt.tmp"));
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
  CHECK_THROWS_AS(read_text((dir / "missing").string()), IoError);
}

TEST_CASE("solve writes artifacts and verify reproduces them") {
  auto dir = scratch("run");
  auto j = minimal();
  j["grid"] = {{"n_rho", 33}, {"n_theta", 16}};
  auto c = parse_config(j);
  RunOptions o;
  o.out = dir.string();
  CHECK(run(c, o) == kExitOk);
  for (const char* f : {"manifest.json", "config.json", "solution.json", "unknown_1.csv",
                        "weight_1.csv", "derived.json", "report.json", "report.txt", "run.log"})
    CHECK(fs::exists(dir / f));
  const auto manifest = nlohmann::json::parse(read_text((dir / "manifest.json").string()));
  CHECK(manifest.at("config_hash").is_string());
  CHECK(manifest.at("grid").at("n_rho") == 33);
  CHECK(verify_directory(dir.string()) == kExitOk);
}

TEST_CASE("exit codes") {
  auto j = minimal();
  j["grid"] = {{"n_rho", 33}, {"n_theta", 16}};
  j["solver"] = {{"max_iterations", 1}, {"max_refinements", 0}};
  RunOptions o;
  o.out = scratch("fail").string();
  CHECK(run(parse_config(j), o) == kExitSolver);
  j = minimal();
  j["grid"] = {{"n_rho", 33}, {"n_theta", 16}};
  o.out = "/proc/hmetric_cannot_write_here";
  CHECK(run(parse_config(j), o) == kExitIo);
}

}
