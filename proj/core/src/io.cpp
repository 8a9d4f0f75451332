#include "hmetric/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hmetric/errors.hpp"

namespace hmetric {

namespace fs = std::filesystem;

void write_atomic(const std::string& path, const std::string& content) {
  const fs::path target(path);
  std::error_code ec;
  if (target.has_parent_path()) {
    fs::create_directories(target.parent_path(), ec);
    if (ec) throw IoError("cannot create " + target.parent_path().string() + ": " + ec.message());
  }
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  fs::rename(tmp, target, ec);
  if (ec) throw IoError("cannot rename " + tmp.string() + ": " + ec.message());
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string dump_json(const nlohmann::json& j) { return j.dump(2) + "\n"; }

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

nlohmann::json module_versions() {
  nlohmann::json j;
  for (const char* m : {"geometry-core", "discretization", "toda-solver", "curvature-analysis",
                        "equivalence-verifier", "cli-report"})
    j[m] = HMETRIC_VERSION;
  return j;
}

nlohmann::json make_manifest(const ExperimentConfig& c, double R,
                             const std::vector<std::string>& artifacts) {
  nlohmann::json j;
  j["config_hash"] = fnv1a_hex(render_config(c).dump());
  j["mode"] = to_string(c.mode);
  j["modules"] = module_versions();
  j["grid"] = {{"R", R},
               {"n_rho", c.grid.n_rho},
               {"n_theta", c.grid.n_theta},
               {"grading", to_string(c.grid.grading)}};
  j["artifacts"] = artifacts;
  return j;
}

nlohmann::json solution_metadata(const Solution& s) {
  nlohmann::json j;
  j["kind"] = to_string(s.kind.kind);
  j["rank"] = s.kind.rank;
  j["q"] = s.q;
  j["grid"] = {{"R", s.grid->radius()},
               {"n_rho", s.grid->n_rho()},
               {"n_theta", s.grid->n_theta()},
               {"grading", to_string(s.grid->grading())},
               {"h", s.grid->h()}};
  j["unknowns"] = s.unknowns.size();
  j["weights"] = s.weights.size();
  j["residual"] = s.residual;
  j["roundoff_floor"] = s.roundoff_floor;
  j["newton_iterations"] = s.newton_iterations;
  auto tr = nlohmann::json::array();
  for (const auto& t : s.trace)
    tr.push_back({{"amplitude", t.amplitude},
                  {"iterations", t.iterations},
                  {"residual", t.residual},
                  {"accepted", t.accepted}});
  j["continuation"] = tr;
  return j;
}

std::vector<std::string> write_solution(const std::string& dir, const Solution& s) {
  std::vector<std::string> names;
  for (size_t i = 0; i < s.unknowns.size(); ++i) {
    names.push_back("unknown_" + std::to_string(i + 1) + ".csv");
    write_atomic((fs::path(dir) / names.back()).string(), field_to_csv(s.unknowns[i]));
  }
  for (size_t i = 0; i < s.weights.size(); ++i) {
    names.push_back("weight_" + std::to_string(i + 1) + ".csv");
    write_atomic((fs::path(dir) / names.back()).string(), field_to_csv(s.weights[i]));
  }
  names.push_back("solution.json");
  write_atomic((fs::path(dir) / names.back()).string(), dump_json(solution_metadata(s)));
  return names;
}

Solution load_solution(const std::string& dir, const TodaProblem& p) {
  std::vector<ScalarField> unknowns;
  for (int i = 0; i < p.kind.unknowns(); ++i) {
    const auto path = (fs::path(dir) / ("unknown_" + std::to_string(i + 1) + ".csv")).string();
    unknowns.push_back(field_from_csv(read_text(path), p.grid));
  }
  return assemble_solution(p, std::move(unknowns));
}

}  // namespace hmetric
