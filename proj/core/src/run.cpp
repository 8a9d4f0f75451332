#include "hmetric/run.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <future>
#include <optional>
#include <sstream>

#include "hmetric/curvature.hpp"
#include "hmetric/equivalence.hpp"
#include "hmetric/errors.hpp"
#include "hmetric/io.hpp"

namespace hmetric {

namespace fs = std::filesystem;

namespace {

nlohmann::json num(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

class Logger {
 public:
  explicit Logger(const RunOptions& o) : out_(o.quiet ? nullptr : o.log) {}
  template <class... A>
  void operator()(const A&... a) const {
    if (!out_) return;
    ((*out_) << ... << a) << "\n";
    out_->flush();
  }

 private:
  std::ostream* out_;
};

std::string join(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

std::string dir_label(const char* prefix, double v) {
  std::ostringstream s;
  s << prefix << v;
  return s.str();
}

struct Member {
  ExperimentConfig config;  // mode solve, grid.R and q of this member
  std::string dir;
  Solution solution;
  std::optional<EquivalenceReport> report;
};

/// Writes every artifact of one solve and returns the report, if any.
std::optional<EquivalenceReport> write_member(const std::string& dir, const ExperimentConfig& c,
                                              const Solution& s, double seconds) {
  std::vector<std::string> artifacts{"config.json"};
  write_atomic(join(dir, "config.json"), dump_json(render_config(c)));
  for (auto& n : write_solution(dir, s)) artifacts.push_back(n);
  write_atomic(join(dir, "derived.json"), dump_json(derived_summary(s)));
  artifacts.push_back("derived.json");
  std::optional<EquivalenceReport> rep;
  if (has_equivalence_report(s.kind)) {
    rep = equivalence_report(s);
    write_atomic(join(dir, "report.json"), dump_json(to_json(*rep)));
    write_atomic(join(dir, "report.txt"), render_text(*rep));
    artifacts.push_back("report.json");
    artifacts.push_back("report.txt");
  }
  write_atomic(join(dir, "manifest.json"), dump_json(make_manifest(c, s.grid->radius(), artifacts)));
  // Timing lives only in this sidecar so the JSON artifacts stay deterministic.
  std::ostringstream log;
  log << "solve_seconds " << seconds << "\nnewton_iterations " << s.newton_iterations << "\n";
  write_atomic(join(dir, "run.log"), log.str());
  return rep;
}

Member solve_member(ExperimentConfig c, std::string dir) {
  c.mode = RunMode::Solve;
  c.output_dir = dir;
  const auto t0 = std::chrono::steady_clock::now();
  auto sol = solve(c.make());
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  auto rep = write_member(dir, c, sol, secs);
  return Member{std::move(c), std::move(dir), std::move(sol), std::move(rep)};
}

/// Runs the members with at most `threads` concurrent solves; results keep
/// the input order.
std::vector<Member> solve_members(const std::vector<std::pair<ExperimentConfig, std::string>>& jobs,
                                  int threads, const Logger& log) {
  std::vector<Member> out;
  const size_t width = static_cast<size_t>(std::max(1, threads));
  for (size_t start = 0; start < jobs.size(); start += width) {
    std::vector<std::future<Member>> batch;
    for (size_t i = start; i < std::min(jobs.size(), start + width); ++i)
      batch.push_back(std::async(std::launch::async, solve_member, jobs[i].first, jobs[i].second));
    for (auto& f : batch) {
      out.push_back(f.get());
      log("solved ", out.back().dir, " residual ", out.back().solution.residual);
    }
  }
  return out;
}

int run_solve(const ExperimentConfig& c, const std::string& dir, const Logger& log) {
  auto m = solve_member(c, dir);
  log("solved in ", m.solution.newton_iterations, " Newton iterations, residual ", m.solution.residual);
  if (m.report) {
    log("report verdict: ", m.report->verdict);
    if (m.report->verdict == "mixed") return kExitInconclusive;
  }
  return kExitOk;
}

int run_sweep_r(const ExperimentConfig& c, const std::string& dir, int threads, const Logger& log) {
  std::vector<std::pair<ExperimentConfig, std::string>> jobs;
  std::vector<std::string> names;
  for (double R : c.sweep.radii) {
    auto mc = c;
    mc.grid.R = R;
    names.push_back(dir_label("R_", R));
    jobs.emplace_back(mc, join(dir, names.back()));
  }
  auto members = solve_members(jobs, threads, log);
  std::vector<std::string> artifacts{"config.json"};
  write_atomic(join(dir, "config.json"), dump_json(render_config(c)));
  int code = kExitOk;
  if (has_equivalence_report(c.problem)) {
    std::vector<EquivalenceReport> reps;
    for (auto& m : members) reps.push_back(*m.report);
    const auto trend = trend_report(std::move(reps));
    write_atomic(join(dir, "trend.json"), dump_json(to_json(trend)));
    write_atomic(join(dir, "trend.txt"), render_text(trend));
    artifacts.push_back("trend.json");
    artifacts.push_back("trend.txt");
    log("trend verdict: ", trend.verdict);
    if (trend.verdict == "inconclusive") code = kExitInconclusive;
  } else {
    nlohmann::json summary = nlohmann::json::array();
    for (size_t i = 0; i < members.size(); ++i)
      summary.push_back({{"R", c.sweep.radii[i]}, {"derived", derived_summary(members[i].solution)}});
    write_atomic(join(dir, "sweep.json"), dump_json(summary));
    artifacts.push_back("sweep.json");
  }
  auto manifest = make_manifest(c, c.grid.R, artifacts);
  manifest["members"] = names;
  write_atomic(join(dir, "manifest.json"), dump_json(manifest));
  return code;
}

int run_sweep_amplitude(const ExperimentConfig& c, const std::string& dir, int threads,
                        const Logger& log) {
  std::vector<std::pair<ExperimentConfig, std::string>> jobs;
  std::vector<std::string> names;
  for (double t : c.sweep.amplitudes) {
    auto mc = c;
    mc.q = c.q.scaled(t);
    names.push_back(dir_label("amp_", t));
    jobs.emplace_back(mc, join(dir, names.back()));
  }
  auto members = solve_members(jobs, threads, log);
  nlohmann::json rows = nlohmann::json::array();
  int code = kExitOk;
  for (size_t i = 0; i < members.size(); ++i) {
    const auto& m = members[i];
    nlohmann::json row = {{"amplitude", c.sweep.amplitudes[i]},
                          {"sup_q", sup_q_norm(m.solution.q, m.solution.grid).value},
                          {"newton_iterations", m.solution.newton_iterations},
                          {"derived", derived_summary(m.solution)}};
    if (m.report) {
      row["verdict"] = m.report->verdict;
      if (m.report->verdict == "mixed") code = kExitInconclusive;
    }
    rows.push_back(row);
  }
  write_atomic(join(dir, "config.json"), dump_json(render_config(c)));
  write_atomic(join(dir, "amplitude_sweep.json"), dump_json(rows));
  auto manifest = make_manifest(c, c.grid.R, {"config.json", "amplitude_sweep.json"});
  manifest["members"] = names;
  write_atomic(join(dir, "manifest.json"), dump_json(manifest));
  return code;
}

int run_refine(const ExperimentConfig& c, const std::string& dir, const Logger& log) {
  const auto table = refinement_study(c.make(), c.sweep.levels);
  write_atomic(join(dir, "config.json"), dump_json(render_config(c)));
  write_atomic(join(dir, "refinement.json"), dump_json(to_json(table)));
  write_atomic(join(dir, "manifest.json"),
               dump_json(make_manifest(c, c.grid.R, {"config.json", "refinement.json"})));
  for (const auto& r : table.rows) log("n_rho ", r.n_rho, " change ", r.change, " cross-check ", r.cross_check);
  return kExitOk;
}

/// Regenerates report and derived files of one solve directory into out.
int verify_member(const std::string& dir, const std::string& out, std::optional<EquivalenceReport>* rep,
                  const Logger& log) {
  const auto c = parse_config_file(join(dir, "config.json"));
  const auto s = load_solution(dir, c.make());
  int code = kExitOk;
  auto check = [&](const std::string& name, const std::string& text) {
    const auto stored = join(dir, name);
    if (fs::exists(stored) && read_text(stored) != text) {
      log("regenerated ", name, " differs from ", stored);
      code = kExitInconclusive;
    }
    write_atomic(join(out, name), text);
  };
  check("derived.json", dump_json(derived_summary(s)));
  if (has_equivalence_report(s.kind)) {
    auto r = equivalence_report(s);
    check("report.json", dump_json(to_json(r)));
    check("report.txt", render_text(r));
    if (rep) *rep = r;
  }
  log("verified ", dir, code == kExitOk ? " (identical)" : " (differs)");
  return code;
}

template <class F>
int guarded(F&& f, const Logger& log) {
  try {
    return f();
  } catch (const ConfigError& e) {
    log("config error: ", e.what());
    return kExitConfig;
  } catch (const DomainError& e) {
    log("config error: ", e.what());
    return kExitConfig;
  } catch (const SolverError& e) {
    log("solver failure: ", e.what());
    return kExitSolver;
  } catch (const IoError& e) {
    log("I/O failure: ", e.what());
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    log("I/O failure: ", e.what());
    return kExitIo;
  }
}

}  // namespace

nlohmann::json derived_summary(const Solution& s) {
  nlohmann::json j;
  j["kind"] = to_string(s.kind.kind);
  const auto tol = calibrate_tolerance(s.grid);
  j["eps_h"] = tol.eps;
  if (s.kind.toda_like()) {
    const auto geom = compute_f_fields(s);
    auto rows = nlohmann::json::array();
    for (int i = 1; i <= geom.n; ++i) {
      const auto K = curvature_closed_form(geom, i);
      const auto b = bochner_residual(geom, i);
      nlohmann::json row = {{"i", i},
                            {"sup_K", max_value(K)},
                            {"inf_K", min_value(K)},
                            {"inf_f", min_value(geom[i])},
                            {"sup_f", max_value(geom[i])},
                            {"cross_check", sup_abs(curvature_cross_check(geom, i), Region::Interior)}};
      row["bochner"] = {{"claimed", b.constants.claimed}, {"note", b.constants.note}};
      if (b.constants.claimed) {
        row["bochner"]["c1"] = b.constants.c1;
        row["bochner"]["c2"] = b.constants.c2;
        row["bochner"]["conditional"] = b.constants.conditional;
        row["bochner"]["min_residual"] = num(b.min_residual);
      }
      rows.push_back(row);
    }
    j["metrics"] = rows;
    double ratio = 0.0;
    for (int k = 0; k < s.grid->size(); ++k) ratio = std::max(ratio, geom[0][k] / geom[1][k]);
    j["ratio_margin"] = 1.0 - ratio;
    j["sectional_applicable"] = sectional_applicable(geom);
    if (s.kind.kind == Kind::G2) {
      const auto g = g2_geometry(s);
      j["g2"] = {{"k_min", g.k_min},
                 {"bochner_min", num(g.bochner_min)},
                 {"gauss_discrepancy", g.gauss_discrepancy},
                 {"constraint_gap", g.constraint_gap},
                 {"consistency_residual", g.consistency_residual}};
    }
  } else if (s.kind.kind == Kind::Vortex) {
    j["ratio_margin"] = 1.0 - max_value(vortex_ratio(s));
  } else if (s.kind.kind == Kind::Wang) {
    const auto k = blaschke_curvature(s);
    j["sup_k"] = max_value(k);
    j["inf_k"] = min_value(k);
  } else if (s.kind.kind == Kind::Maximal) {
    const auto m = maximal_geometry(s);
    j["k_min"] = min_value(m.k);
    j["k_max"] = max_value(m.k);
    j["gauss_discrepancy"] = m.gauss_discrepancy;
    j["bochner_min"] = num(m.bochner_min);
  }
  return j;
}

int run(const ExperimentConfig& config, const RunOptions& opts) {
  const Logger log(opts);
  return guarded(
      [&]() -> int {
        const std::string dir = opts.out.empty() ? config.output_dir : opts.out;
        switch (config.mode) {
          case RunMode::Solve: return run_solve(config, dir, log);
          case RunMode::Verify: return verify_directory(dir, opts);
          case RunMode::SweepR: return run_sweep_r(config, dir, opts.threads, log);
          case RunMode::SweepAmplitude: return run_sweep_amplitude(config, dir, opts.threads, log);
          case RunMode::Refine: return run_refine(config, dir, log);
        }
        return kExitConfig;
      },
      log);
}

int verify_directory(const std::string& dir, const RunOptions& opts) {
  const Logger log(opts);
  return guarded(
      [&]() -> int {
        const std::string out = opts.out.empty() ? dir : opts.out;
        const auto manifest = nlohmann::json::parse(read_text(join(dir, "manifest.json")));
        const std::string mode = manifest.at("mode").get<std::string>();
        if (mode == "solve") return verify_member(dir, out, nullptr, log);
        if (!manifest.contains("members")) throw ConfigError("cannot verify a " + mode + " directory");
        int code = kExitOk;
        std::vector<EquivalenceReport> reps;
        for (const auto& name : manifest.at("members")) {
          const auto n = name.get<std::string>();
          std::optional<EquivalenceReport> rep;
          code = std::max(code, verify_member(join(dir, n), join(out, n), &rep, log));
          if (rep) reps.push_back(*rep);
        }
        if (mode == "sweep-R" && !reps.empty()) {
          const auto trend = trend_report(std::move(reps));
          const auto text = dump_json(to_json(trend));
          if (read_text(join(dir, "trend.json")) != text) code = kExitInconclusive;
          write_atomic(join(out, "trend.json"), text);
          write_atomic(join(out, "trend.txt"), render_text(trend));
        }
        return code;
      },
      log);
}

}  // namespace hmetric
