#include "hmetric/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "hmetric/errors.hpp"

namespace hmetric {

const char* to_string(RunMode m) {
  switch (m) {
    case RunMode::Solve: return "solve";
    case RunMode::Verify: return "verify";
    case RunMode::SweepR: return "sweep-R";
    case RunMode::SweepAmplitude: return "sweep-amplitude";
    case RunMode::Refine: return "refine";
  }
  return "?";
}

RunMode run_mode_from_string(const std::string& s) {
  for (auto m : {RunMode::Solve, RunMode::Verify, RunMode::SweepR, RunMode::SweepAmplitude,
                 RunMode::Refine})
    if (s == to_string(m)) return m;
  throw ConfigError("unknown mode: " + s);
}

TodaProblem ExperimentConfig::make(double R) const {
  auto g = build_grid(R > 0.0 ? R : grid.R, grid.n_rho, grid.n_theta, grid.grading);
  return make_problem(problem, q, g, solver);
}

namespace {

void only_keys(const nlohmann::json& j, const std::string& where, std::set<std::string> allowed) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, _] : j.items())
    if (!allowed.count(key))
      throw ConfigError("unknown key " + (where == "config" ? key : where + "." + key));
}

template <class T>
T get(const nlohmann::json& j, const char* key, const std::string& where, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError("bad value for " + (where.empty() ? "" : where + ".") + key);
  }
}

int get_int(const nlohmann::json& j, const char* key, const std::string& where, int fallback) {
  if (j.contains(key) && !j.at(key).is_number_integer())
    throw ConfigError((where.empty() ? "" : where + ".") + key + " must be an integer");
  return get<int>(j, key, where, fallback);
}

double get_num(const nlohmann::json& j, const char* key, const std::string& where, double fallback) {
  if (j.contains(key) && !j.at(key).is_number())
    throw ConfigError((where.empty() ? "" : where + ".") + key + " must be a number");
  return get<double>(j, key, where, fallback);
}

std::string get_str(const nlohmann::json& j, const char* key, const std::string& where,
                    std::string fallback) {
  if (j.contains(key) && !j.at(key).is_string())
    throw ConfigError((where.empty() ? "" : where + ".") + key + " must be a string");
  return get<std::string>(j, key, where, std::move(fallback));
}

int default_rank(Kind k) {
  switch (k) {
    case Kind::Wang: return 3;
    case Kind::Maximal: return 4;
    case Kind::G2: return 7;
    default: return 0;
  }
}

}  // namespace

ExperimentConfig parse_config(const nlohmann::json& j) {
  only_keys(j, "config",
            {"kind", "rank", "q", "vortex", "g2_mode", "grid", "solver", "mode", "sweep", "output_dir"});
  ExperimentConfig c;
  if (!j.contains("kind")) throw ConfigError("kind is required");
  c.problem.kind = kind_from_string(get_str(j, "kind", "", ""));
  const bool needs_rank = c.problem.kind == Kind::Cyclic || c.problem.kind == Kind::Subcyclic;
  if (needs_rank && !j.contains("rank")) throw ConfigError("rank is required for " + std::string(to_string(c.problem.kind)));
  c.problem.rank = get_int(j, "rank", "", default_rank(c.problem.kind));

  if (!j.contains("q")) throw ConfigError("q is required");
  c.q = j.at("q").get<RDifferential>();

  if (j.contains("vortex")) {
    const auto& v = j.at("vortex");
    only_keys(v, "vortex", {"a", "b", "c", "kappa"});
    c.problem.vortex.a = get_num(v, "a", "vortex", c.problem.vortex.a);
    c.problem.vortex.b = get_num(v, "b", "vortex", c.problem.vortex.b);
    c.problem.vortex.c = get_num(v, "c", "vortex", c.problem.vortex.c);
    c.problem.vortex.kappa = get_num(v, "kappa", "vortex", c.problem.vortex.kappa);
  }
  if (j.contains("g2_mode")) c.problem.g2_mode = g2_mode_from_string(get_str(j, "g2_mode", "", ""));

  if (j.contains("grid")) {
    const auto& g = j.at("grid");
    only_keys(g, "grid", {"R", "n_rho", "n_theta", "grading"});
    c.grid.R = get_num(g, "R", "grid", c.grid.R);
    c.grid.n_rho = get_int(g, "n_rho", "grid", c.grid.n_rho);
    c.grid.n_theta = get_int(g, "n_theta", "grid", c.grid.n_theta);
    if (g.contains("grading")) c.grid.grading = grading_from_string(get_str(g, "grading", "grid", ""));
  }
  if (j.contains("solver")) {
    const auto& s = j.at("solver");
    only_keys(s, "solver", {"tolerance", "max_iterations", "continuation_steps", "max_refinements"});
    c.solver.tolerance = get_num(s, "tolerance", "solver", c.solver.tolerance);
    c.solver.max_iterations = get_int(s, "max_iterations", "solver", c.solver.max_iterations);
    c.solver.continuation_steps = get_int(s, "continuation_steps", "solver", c.solver.continuation_steps);
    c.solver.max_refinements = get_int(s, "max_refinements", "solver", c.solver.max_refinements);
  }
  if (j.contains("mode")) c.mode = run_mode_from_string(get_str(j, "mode", "", ""));
  if (j.contains("sweep")) {
    const auto& s = j.at("sweep");
    only_keys(s, "sweep", {"radii", "amplitudes", "levels"});
    c.sweep.radii = get<std::vector<double>>(s, "radii", "sweep", c.sweep.radii);
    c.sweep.amplitudes = get<std::vector<double>>(s, "amplitudes", "sweep", c.sweep.amplitudes);
    c.sweep.levels = get_int(s, "levels", "sweep", c.sweep.levels);
  }
  c.output_dir = get_str(j, "output_dir", "", c.output_dir);

  // Module preconditions: building the problem validates grid, kind, q and solver.
  c.problem = c.make().kind;
  // Parameters of other kinds are ignored; drop them so the config round-trips.
  if (c.problem.kind != Kind::Vortex) c.problem.vortex = VortexParams{};
  if (c.problem.kind != Kind::G2) c.problem.g2_mode = G2Mode::Constrained;
  if (c.sweep.radii.empty()) throw ConfigError("sweep.radii must not be empty");
  for (size_t i = 0; i < c.sweep.radii.size(); ++i) {
    const double R = c.sweep.radii[i];
    if (!(R > 0.0 && R < 1.0)) throw ConfigError("sweep.radii entries must lie in (0, 1)");
    if (i > 0 && !(R > c.sweep.radii[i - 1])) throw ConfigError("sweep.radii must be increasing");
  }
  if (c.sweep.amplitudes.empty()) throw ConfigError("sweep.amplitudes must not be empty");
  for (double t : c.sweep.amplitudes)
    if (!(t >= 0.0)) throw ConfigError("sweep.amplitudes entries must be non-negative");
  if (c.sweep.levels < 2 || c.sweep.levels > 4) throw ConfigError("sweep.levels must be 2, 3 or 4");
  if (c.output_dir.empty()) throw ConfigError("output_dir must not be empty");
  return c;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(j);
}

nlohmann::json render_config(const ExperimentConfig& c) {
  nlohmann::json j;
  j["kind"] = to_string(c.problem.kind);
  j["rank"] = c.problem.rank;
  j["q"] = c.q;
  if (c.problem.kind == Kind::Vortex) {
    const auto& v = c.problem.vortex;
    j["vortex"] = {{"a", v.a}, {"b", v.b}, {"c", v.c}, {"kappa", v.kappa}};
  }
  if (c.problem.kind == Kind::G2) j["g2_mode"] = to_string(c.problem.g2_mode);
  j["grid"] = {{"R", c.grid.R},
               {"n_rho", c.grid.n_rho},
               {"n_theta", c.grid.n_theta},
               {"grading", to_string(c.grid.grading)}};
  j["solver"] = {{"tolerance", c.solver.tolerance},
                 {"max_iterations", c.solver.max_iterations},
                 {"continuation_steps", c.solver.continuation_steps},
                 {"max_refinements", c.solver.max_refinements}};
  j["mode"] = to_string(c.mode);
  j["sweep"] = {{"radii", c.sweep.radii}, {"amplitudes", c.sweep.amplitudes}, {"levels", c.sweep.levels}};
  j["output_dir"] = c.output_dir;
  return j;
}

}  // namespace hmetric
