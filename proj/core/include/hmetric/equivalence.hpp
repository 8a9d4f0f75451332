#pragma once

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hmetric/curvature.hpp"
#include "hmetric/toda.hpp"

namespace hmetric {

/// One condition of an equivalence statement with its numeric witness.
///   Bound: value is a sup-type bound; large means failing
///   Gap:   value is a positive gap (already reduced by eps_h); small or
///          negative means failing
struct Condition {
  enum class Sense { Bound, Gap };
  std::string id;
  std::string description;
  Sense sense = Sense::Bound;
  bool applicable = true;
  double value = 0.0;
  bool witnessed = false;
  std::string note;
};

struct BochnerSummary {
  int i = 0;
  BochnerConstants constants;
  double min_residual = 0.0;
};

/// Report on one converged solve. Families:
///   "toda"   cyclic r >= 3 / subcyclic r >= 4 (nine-condition equivalence)
///   "vortex" single vortex equation with b c = 1/2 (five conditions)
///   "wang"   affine sphere triple
struct EquivalenceReport {
  std::string family;
  std::string kind;
  int r = 0;
  double R = 0.0;
  int n_rho = 0, n_theta = 0;
  std::string grading;
  Tolerance tol;
  double residual = 0.0;
  std::map<std::string, double> scalars;
  std::map<std::string, std::vector<double>> series;
  std::vector<BochnerSummary> bochner;
  std::vector<Condition> conditions;
  std::string verdict;  // all-witnessed | all-failed | mixed
  std::string hypothesis;
  std::vector<std::string> notes;

  const Condition& condition(const std::string& id) const;
};

/// Nine-condition report for bounded differentials. Needs cyclic r >= 3 or
/// subcyclic r >= 4 (g2 unconstrained counts as subcyclic 7).
EquivalenceReport bounded_equivalence_report(const Solution& s);
/// Five-condition report for the vortex equation with b c = 1/2.
EquivalenceReport vortex_report(const Solution& s);
/// Bounded Pick differential / negative curvature / comparable metric.
EquivalenceReport wang_report(const Solution& s);

/// Dispatch on the kind; throws ConfigError when no report exists.
EquivalenceReport equivalence_report(const Solution& s);
bool has_equivalence_report(const ProblemKind& k);

/// Trend of one condition across an R-sweep.
struct ConditionTrend {
  std::string id;
  Condition::Sense sense = Condition::Sense::Bound;
  bool applicable = true;
  std::vector<double> values;  // per member; gaps without the eps_h offset
  std::string classification;  // stable | degenerating | inconclusive | n/a
};

struct TrendReport {
  std::string family;
  std::vector<double> radii;
  std::vector<double> sup_q;
  std::vector<EquivalenceReport> members;
  std::vector<ConditionTrend> trends;
  std::string verdict;  // equivalent-TRUE | equivalent-FALSE | inconclusive
};

/// Relative spread allowed for a stable trend, and the minimum relative
/// change for a degenerating one.
inline constexpr double kStableSpread = 0.05;
inline constexpr double kDegenerateChange = 0.25;

std::string classify_trend(Condition::Sense sense, const std::vector<double>& v);
TrendReport trend_report(std::vector<EquivalenceReport> members);

/// Re-solve at h, h/2, ... and tabulate changes and margins.
struct RefinementRow {
  int n_rho = 0, n_theta = 0;
  double h = 0.0;
  double change = 0.0;       // sup |w - w_next| on shared nodes (NaN on last)
  double cross_check = 0.0;  // max over i of the curvature cross-check
  std::map<std::string, double> margins;
};
struct RefinementTable {
  std::vector<RefinementRow> rows;
  std::vector<double> orders;  // log2 of successive change ratios
};
RefinementTable refinement_study(const TodaProblem& p, int levels);

nlohmann::json to_json(const EquivalenceReport& r);
nlohmann::json to_json(const TrendReport& t);
nlohmann::json to_json(const RefinementTable& t);
std::string render_text(const EquivalenceReport& r);
std::string render_text(const TrendReport& t);

}  // namespace hmetric
