#include "hmetric/equivalence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hmetric/errors.hpp"

namespace hmetric {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const char* kTruncationNote =
    "bounds are witnessed on |z| <= R only; behaviour at the ideal boundary is read from R-sweep trends";
const char* kAnsatzHypothesis =
    "complete solution modelled by the frozen-coefficient boundary ansatz on |z| = R";

ScalarField pointwise(const GridPtr& g, auto fn) {
  ScalarField out(g);
  for (int i = 0; i < g->size(); ++i) out[i] = fn(i);
  return out;
}

double interior_max(const ScalarField& f) { return max_value(f, Region::Interior); }

Condition bound(std::string id, std::string desc, double value) {
  Condition c;
  c.id = std::move(id);
  c.description = std::move(desc);
  c.sense = Condition::Sense::Bound;
  c.value = value;
  c.witnessed = std::isfinite(value);
  return c;
}

Condition gap(std::string id, std::string desc, double value) {
  Condition c;
  c.id = std::move(id);
  c.description = std::move(desc);
  c.sense = Condition::Sense::Gap;
  c.value = value;
  c.witnessed = value > 0.0;
  return c;
}

Condition not_applicable(std::string id, std::string desc, std::string why) {
  Condition c;
  c.id = std::move(id);
  c.description = std::move(desc);
  c.applicable = false;
  c.value = kNaN;
  c.note = std::move(why);
  return c;
}

void finish(EquivalenceReport& rep) {
  int applicable = 0, witnessed = 0;
  for (const auto& c : rep.conditions) {
    if (!c.applicable) continue;
    ++applicable;
    witnessed += c.witnessed ? 1 : 0;
  }
  rep.verdict = witnessed == applicable ? "all-witnessed" : witnessed == 0 ? "all-failed" : "mixed";
  rep.notes.push_back(kTruncationNote);
}

EquivalenceReport header(const Solution& s, std::string family) {
  EquivalenceReport rep;
  rep.family = std::move(family);
  rep.kind = to_string(s.kind.kind);
  rep.r = s.kind.rank;
  rep.R = s.grid->radius();
  rep.n_rho = s.grid->n_rho();
  rep.n_theta = s.grid->n_theta();
  rep.grading = to_string(s.grid->grading());
  rep.tol = calibrate_tolerance(s.grid);
  rep.residual = s.residual;
  rep.hypothesis = kAnsatzHypothesis;
  if (!converged(s))
    throw SolverError("refusing to report on an unconverged solution (residual " +
                      std::to_string(s.residual) + ")");
  return rep;
}

}  // namespace

const Condition& EquivalenceReport::condition(const std::string& id) const {
  for (const auto& c : conditions)
    if (c.id == id) return c;
  throw ConfigError("no condition named " + id);
}

EquivalenceReport bounded_equivalence_report(const Solution& s) {
  if (!s.kind.toda_like()) throw ConfigError("report needs a cyclic or subcyclic solution");
  const auto geom = compute_f_fields(s);
  const int r = geom.r, n = geom.n;
  const bool sub = geom.subcyclic;
  if (sub ? r < 4 : r < 3) throw ConfigError("report needs cyclic r >= 3 or subcyclic r >= 4");
  auto rep = header(s, "toda");
  rep.r = r;
  const auto& g = s.grid;
  const double eps = rep.tol.eps;

  rep.scalars["sup_q"] = sup_q_norm(s.q, g).value;

  // ratio fields; the subcyclic chain replaces f_1/f_2 by (f_0 + f_1)/f_2
  std::vector<ScalarField> ratio(n + 1);
  for (int i = 1; i <= n; ++i) {
    ratio[i] = pointwise(g, [&](int k) {
      if (sub && i == 2) return (geom[0][k] + geom[1][k]) / geom[2][k];
      return geom[i - 1][k] / geom[i][k];
    });
  }
  const double sup01 = max_value(pointwise(g, [&](int k) { return geom[0][k] / geom[1][k]; }));
  rep.scalars["ratio_margin"] = 1.0 - sup01;

  std::vector<double> sup_f, inf_f, sup_K, sup_w, chain_up, chain_low, conf_margin, comp;
  for (int i = 1; i <= n; ++i) {
    sup_f.push_back(max_value(geom[i]));
    inf_f.push_back(min_value(geom[i]));
    const auto K = curvature_closed_form(geom, i);
    sup_K.push_back(max_value(K));
    sup_w.push_back(sup_abs(s.weights[i - 1]));
    chain_up.push_back(1.0 - max_value(ratio[i]));
    if (!sub) {
      const double lower = double(i - 1) * (r - i + 1) / (double(i) * (r - i));
      chain_low.push_back(min_value(ratio[i]) - lower);
    }
    const double b = -sup_K.back();
    conf_margin.push_back(b > 0.0 ? 1.0 / b - sup_f.back() : kNaN);
    comp.push_back(std::max(sup_f.back(), 1.0 / inf_f.back()));
  }
  if (sub) {
    rep.scalars["subcyclic_chain_margin"] =
        1.0 - max_value(pointwise(g, [&](int k) { return (geom[0][k] + geom[1][k]) / geom[2][k]; }));
  }
  rep.series["sup_f"] = sup_f;
  rep.series["inf_f"] = inf_f;
  rep.series["sup_K"] = sup_K;
  rep.series["sup_abs_w"] = sup_w;
  rep.series["chain_upper_margin"] = chain_up;
  if (!sub) rep.series["chain_lower_margin"] = chain_low;
  rep.series["conformal_bound_margin"] = conf_margin;
  rep.scalars["lower_bound_margin"] = *std::min_element(inf_f.begin(), inf_f.end());

  const auto ef = energy_density(geom);
  const auto Kgf = discrete_curvature(ef, FactorConvention::Background);
  const auto Ks = sectional_curvature(geom);
  rep.scalars["sup_energy_density"] = max_value(ef);
  rep.scalars["inf_energy_density"] = min_value(ef);
  rep.scalars["sup_pullback_curvature"] = interior_max(Kgf);
  rep.scalars["sup_sectional_curvature"] = max_value(Ks);
  double coherence = std::numeric_limits<double>::infinity();
  for (int k = 0; k < g->size(); ++k)
    if (!g->is_boundary(k)) coherence = std::min(coherence, Ks[k] - Kgf[k]);
  rep.scalars["sectional_minus_pullback_min"] = coherence;

  for (int i = 1; i <= n; ++i) {
    const auto b = bochner_residual(geom, i);
    rep.bochner.push_back({i, b.constants, b.constants.claimed ? b.min_residual : kNaN});
  }

  double wmax = 0.0;
  for (double v : sup_w) wmax = std::max(wmax, v);
  const double c_all = *std::max_element(comp.begin(), comp.end());
  const double c_some = *std::min_element(comp.begin(), comp.end());
  double delta_all = std::numeric_limits<double>::infinity();
  double delta_some = -std::numeric_limits<double>::infinity();
  for (int i = 1; i <= n; ++i) {
    delta_all = std::min(delta_all, chain_up[i - 1]);
    if (i >= 2) delta_some = std::max(delta_some, chain_up[i - 1]);
  }

  auto& C = rep.conditions;
  C.push_back(bound("q_bounded", "sup |q|^2 in the background metric", rep.scalars["sup_q"]));
  C.push_back(bound("weights_bounded", "sup |w_i| over all i", wmax));
  C.push_back(bound("metrics_comparable_all",
                    "C with C^-1 g_D <= g(h)_i <= C g_D for every i", c_all));
  C.push_back(bound("metrics_comparable_some",
                    "C with C^-1 g_D <= g(h)_i <= C g_D for the best i", c_some));
  C.push_back(bound("energy_comparable", "C with C^-1 g_D <= e_f <= C g_D",
                    std::max(rep.scalars["sup_energy_density"], 1.0 / rep.scalars["inf_energy_density"])));
  C.push_back(gap("pullback_curvature_negative", "-sup K(g_f) - eps_h",
                  -rep.scalars["sup_pullback_curvature"] - eps));
  C.push_back(gap("sectional_curvature_negative", "-sup K_sigma - eps_h",
                  -rep.scalars["sup_sectional_curvature"] - eps));
  C.push_back(gap("chain_gap_all", "delta with g(h)_{i-1} <= (1 - delta) g(h)_i for every i, minus eps_h",
                  delta_all - eps));
  if (n >= 2) {
    C.push_back(gap("chain_gap_some", "delta for the best i >= 2, minus eps_h", delta_some - eps));
  } else {
    C.push_back(not_applicable("chain_gap_some", "delta for the best i >= 2",
                               "needs n >= 2; this rank has a single weight"));
  }
  const bool has_nm1 = sub ? r >= 6 : (r >= 4 && r != 5);
  if (has_nm1) {
    C.push_back(gap("curvature_n_minus_1_negative", "-sup K(g(h)_{n-1}) - eps_h", -sup_K[n - 2] - eps));
  } else {
    C.push_back(not_applicable("curvature_n_minus_1_negative", "-sup K(g(h)_{n-1})",
                               sub ? "stated for subcyclic r >= 6 only" : "stated for cyclic r >= 4, r != 5 only"));
  }
  C.push_back(gap("curvature_n_negative", "-sup K(g(h)_n) - eps_h", -sup_K[n - 1] - eps));
  finish(rep);
  return rep;
}

EquivalenceReport vortex_report(const Solution& s) {
  if (s.kind.kind != Kind::Vortex) throw ConfigError("vortex report needs a vortex solution");
  const auto& v = s.kind.vortex;
  if (std::abs(v.b * v.c - 0.5) > 1e-14) throw ConfigError("vortex report needs b c = 1/2");
  auto rep = header(s, "vortex");
  const auto& g = s.grid;
  const auto& w = s.weights[0];
  const auto sq = q_norm_sq_field(g, s.q);
  const double eps = rep.tol.eps;
  const auto ratio = vortex_ratio(s);
  const auto K = vortex_curvature(s);
  const auto Kd = discrete_curvature(pointwise(g, [&](int k) { return std::exp(-v.b * w[k]); }),
                                     FactorConvention::Background);
  double xchk = 0.0;
  for (int k = 0; k < g->size(); ++k)
    if (!g->is_boundary(k)) xchk = std::max(xchk, std::abs(K[k] - Kd[k]));
  const double sup_q = sup_q_norm(s.q, g).value;
  const double sup_energy =
      max_value(pointwise(g, [&](int k) { return sq[k] * std::exp(v.a * w[k]) + std::exp(-v.b * w[k]); }));
  rep.scalars["sup_q"] = sup_q;
  rep.scalars["sup_ratio"] = max_value(ratio);
  rep.scalars["ratio_margin"] = 1.0 - max_value(ratio);
  rep.scalars["sup_curvature"] = max_value(K);
  rep.scalars["inf_curvature"] = min_value(K);
  rep.scalars["curvature_cross_check"] = xchk;
  if (v.a == 2.0 && v.b == 2.0 && v.c == 0.25 && v.kappa == -1.0) {
    const auto hm = harmonic_map_quantities(s);
    rep.scalars["max_dilatation"] = max_value(hm.dilatation);
    rep.scalars["min_jacobian"] = min_value(hm.jacobian);
    rep.scalars["min_H"] = min_value(hm.H);
    rep.scalars["max_H"] = max_value(hm.H);
  }
  auto& C = rep.conditions;
  C.push_back(bound("q_bounded", "sup |q| in the background metric", std::sqrt(sup_q)));
  C.push_back(bound("weight_bounded", "sup |w|", sup_abs(w)));
  C.push_back(bound("energy_bounded", "sup (|q|^2 e^{a w} + e^{-b w})", sup_energy));
  C.push_back(gap("curvature_negative", "-sup K(e^{-b w} g_D) - eps_h", -rep.scalars["sup_curvature"] - eps));
  C.push_back(gap("ratio_gap", "1 - sup |q|^2 e^{(a+b) w} - eps_h", rep.scalars["ratio_margin"] - eps));
  finish(rep);
  return rep;
}

EquivalenceReport wang_report(const Solution& s) {
  if (s.kind.kind != Kind::Wang) throw ConfigError("wang report needs a wang solution");
  auto rep = header(s, "wang");
  const auto& g = s.grid;
  const auto& w = s.weights[0];
  const double eps = rep.tol.eps;
  const auto k = blaschke_curvature(s);
  const auto factor = pointwise(g, [&](int i) { return std::exp(w[i]); });
  const auto kd = discrete_curvature(factor, FactorConvention::Background);
  double xchk = 0.0;
  for (int i = 0; i < g->size(); ++i)
    if (!g->is_boundary(i)) xchk = std::max(xchk, std::abs(k[i] - kd[i]));
  const double sup_q = sup_q_norm(s.q, g).value;
  rep.scalars["sup_q"] = sup_q;
  rep.scalars["sup_k"] = max_value(k);
  rep.scalars["inf_k"] = min_value(k);
  rep.scalars["curvature_sign_margin"] = eps - max_value(k);
  rep.scalars["curvature_cross_check"] = xchk;
  rep.scalars["sup_factor"] = max_value(factor);
  rep.scalars["inf_factor"] = min_value(factor);
  auto& C = rep.conditions;
  C.push_back(bound("q_bounded", "sup |q| in the background metric", std::sqrt(sup_q)));
  C.push_back(gap("curvature_negative", "-sup k_h - eps_h", -rep.scalars["sup_k"] - eps));
  C.push_back(bound("metric_comparable", "C with C^-1 g_D <= e^w g_D <= C g_D",
                    std::max(rep.scalars["sup_factor"], 1.0 / rep.scalars["inf_factor"])));
  finish(rep);
  return rep;
}

bool has_equivalence_report(const ProblemKind& k) {
  switch (k.kind) {
    case Kind::Cyclic: return k.rank >= 3;
    case Kind::Subcyclic: return k.rank >= 4;
    case Kind::G2: return true;
    case Kind::Vortex: return std::abs(k.vortex.b * k.vortex.c - 0.5) <= 1e-14;
    case Kind::Wang: return true;
    case Kind::Maximal: return false;
  }
  return false;
}

EquivalenceReport equivalence_report(const Solution& s) {
  switch (s.kind.kind) {
    case Kind::Vortex: return vortex_report(s);
    case Kind::Wang: return wang_report(s);
    case Kind::Maximal: throw ConfigError("no equivalence report for the maximal-surface system");
    default: return bounded_equivalence_report(s);
  }
}

std::string classify_trend(Condition::Sense sense, const std::vector<double>& v) {
  if (v.size() < 2) return "inconclusive";
  for (double x : v)
    if (!std::isfinite(x)) return "inconclusive";
  const double lo = *std::min_element(v.begin(), v.end());
  const double hi = *std::max_element(v.begin(), v.end());
  const double scale = std::max(std::abs(lo), std::abs(hi));
  bool up = true, down = true;
  for (size_t i = 1; i < v.size(); ++i) {
    up = up && v[i] > v[i - 1];
    down = down && v[i] < v[i - 1];
  }
  if (sense == Condition::Sense::Bound) {
    if (up && v.back() >= (1.0 + kDegenerateChange) * v.front()) return "degenerating";
    if (hi - lo <= kStableSpread * scale) return "stable";
  } else {
    // a gap that is closed on every truncated disk fails along the whole sweep
    if (hi <= 0.0) return "degenerating";
    if (down && (v.back() <= 0.0 || v.back() <= (1.0 - kDegenerateChange) * v.front()))
      return "degenerating";
    if (lo > 0.0 && hi - lo <= kStableSpread * scale) return "stable";
  }
  return "inconclusive";
}

TrendReport trend_report(std::vector<EquivalenceReport> members) {
  if (members.empty()) throw ConfigError("trend report needs at least one member");
  TrendReport t;
  t.family = members.front().family;
  for (const auto& m : members) {
    if (m.family != t.family) throw ConfigError("trend members come from different families");
    t.radii.push_back(m.R);
    t.sup_q.push_back(m.scalars.at("sup_q"));
  }
  bool all_stable = true, all_degenerating = true;
  for (const auto& c0 : members.front().conditions) {
    ConditionTrend tr;
    tr.id = c0.id;
    tr.sense = c0.sense;
    tr.applicable = c0.applicable;
    // gaps are compared without eps_h, which itself grows with R at fixed node count
    for (const auto& m : members)
      tr.values.push_back(m.condition(c0.id).value + (tr.sense == Condition::Sense::Gap ? m.tol.eps : 0.0));
    if (!tr.applicable) {
      tr.classification = "n/a";
    } else {
      tr.classification = classify_trend(tr.sense, tr.values);
      all_stable = all_stable && tr.classification == "stable";
      all_degenerating = all_degenerating && tr.classification == "degenerating";
    }
    t.trends.push_back(std::move(tr));
  }
  for (const auto& m : members) all_stable = all_stable && m.verdict == "all-witnessed";
  t.verdict = all_stable ? "equivalent-TRUE" : all_degenerating ? "equivalent-FALSE" : "inconclusive";
  t.members = std::move(members);
  return t;
}

namespace {

std::map<std::string, double> margins_of(const Solution& s) {
  std::map<std::string, double> m;
  if (s.kind.toda_like()) {
    const auto geom = compute_f_fields(s);
    const auto& g = s.grid;
    m["ratio_margin"] =
        1.0 - max_value(pointwise(g, [&](int k) { return geom[0][k] / geom[1][k]; }));
    double up = std::numeric_limits<double>::infinity();
    double low = std::numeric_limits<double>::infinity();
    for (int i = 1; i <= geom.n; ++i) {
      const auto ratio = pointwise(g, [&](int k) {
        if (geom.subcyclic && i == 2) return (geom[0][k] + geom[1][k]) / geom[2][k];
        return geom[i - 1][k] / geom[i][k];
      });
      up = std::min(up, 1.0 - max_value(ratio));
      if (!geom.subcyclic) {
        const double lower = double(i - 1) * (geom.r - i + 1) / (double(i) * (geom.r - i));
        low = std::min(low, min_value(ratio) - lower);
      }
    }
    m["chain_upper_margin"] = up;
    if (!geom.subcyclic) m["chain_lower_margin"] = low;
    if (s.kind.kind == Kind::G2) {
      const auto g2 = g2_geometry(s);
      m["k_plus_one_min"] = g2.k_min + 1.0;
      m["constraint_gap"] = g2.constraint_gap;
    }
  } else if (s.kind.kind == Kind::Vortex) {
    m["ratio_margin"] = 1.0 - max_value(vortex_ratio(s));
  } else if (s.kind.kind == Kind::Wang) {
    m["curvature_sign_margin"] = -max_value(blaschke_curvature(s));
  } else if (s.kind.kind == Kind::Maximal) {
    m["k_plus_one_min"] = min_value(maximal_geometry(s).k) + 1.0;
  }
  return m;
}

double cross_check_of(const Solution& s) {
  if (s.kind.toda_like()) {
    const auto geom = compute_f_fields(s);
    double worst = 0.0;
    for (int i = 1; i <= geom.n; ++i)
      worst = std::max(worst, sup_abs(curvature_cross_check(geom, i), Region::Interior));
    return worst;
  }
  if (s.kind.kind == Kind::Maximal) return maximal_geometry(s).gauss_discrepancy;
  return kNaN;
}

}  // namespace

RefinementTable refinement_study(const TodaProblem& p, int levels) {
  if (levels < 2) throw ConfigError("refinement study needs at least two levels");
  RefinementTable table;
  std::vector<Solution> sols;
  const auto& g0 = *p.grid;
  for (int l = 0; l < levels; ++l) {
    const int f = 1 << l;
    auto g = build_grid(g0.radius(), (g0.n_rho() - 1) * f + 1,
                        g0.radial() ? 1 : g0.n_theta() * f, g0.grading());
    TodaProblem pl = p;
    pl.grid = g;
    sols.push_back(solve(pl));
    RefinementRow row;
    row.n_rho = g->n_rho();
    row.n_theta = g->n_theta();
    row.h = g->h();
    row.change = kNaN;
    row.cross_check = cross_check_of(sols.back());
    row.margins = margins_of(sols.back());
    table.rows.push_back(row);
  }
  for (int l = 0; l + 1 < levels; ++l) {
    const auto& a = sols[l];
    const auto& b = sols[l + 1];
    const auto& ga = *a.grid;
    const auto& gb = *b.grid;
    const int ft = ga.radial() ? 1 : 2;
    double worst = 0.0;
    for (int j = 0; j < ga.n_rho(); ++j)
      for (int k = 0; k < ga.n_theta(); ++k)
        for (size_t w = 0; w < a.weights.size(); ++w)
          worst = std::max(worst, std::abs(a.weights[w][ga.index(j, k)] -
                                           b.weights[w][gb.index(2 * j, ft * k)]));
    table.rows[l].change = worst;
  }
  for (int l = 0; l + 2 < levels; ++l) {
    const double c0 = table.rows[l].change, c1 = table.rows[l + 1].change;
    table.orders.push_back(c0 > 0.0 && c1 > 0.0 ? std::log2(c0 / c1) : kNaN);
  }
  return table;
}

// ---------------------------------------------------------------------------

namespace {

nlohmann::json num(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

nlohmann::json nums(const std::vector<double>& v) {
  auto a = nlohmann::json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

}  // namespace

nlohmann::json to_json(const EquivalenceReport& r) {
  nlohmann::json j;
  j["family"] = r.family;
  j["kind"] = r.kind;
  j["r"] = r.r;
  j["grid"] = {{"R", r.R}, {"n_rho", r.n_rho}, {"n_theta", r.n_theta}, {"grading", r.grading}};
  j["tolerance"] = {{"C", num(r.tol.C)}, {"h", num(r.tol.h)}, {"eps_h", num(r.tol.eps)},
                    {"background_error", num(r.tol.background_error)}};
  j["residual"] = num(r.residual);
  auto sc = nlohmann::json::object();
  for (const auto& [k, v] : r.scalars) sc[k] = num(v);
  j["scalars"] = sc;
  auto se = nlohmann::json::object();
  for (const auto& [k, v] : r.series) se[k] = nums(v);
  j["series"] = se;
  auto bo = nlohmann::json::array();
  for (const auto& b : r.bochner) {
    nlohmann::json e = {{"i", b.i}, {"claimed", b.constants.claimed}, {"note", b.constants.note}};
    if (b.constants.claimed) {
      e["c1"] = b.constants.c1;
      e["c2"] = b.constants.c2;
      e["conditional"] = b.constants.conditional;
      e["min_residual"] = num(b.min_residual);
    }
    bo.push_back(e);
  }
  j["bochner"] = bo;
  auto co = nlohmann::json::array();
  for (const auto& c : r.conditions) {
    co.push_back({{"id", c.id},
                  {"description", c.description},
                  {"sense", c.sense == Condition::Sense::Bound ? "bound" : "gap"},
                  {"applicable", c.applicable},
                  {"value", num(c.value)},
                  {"witnessed", c.witnessed},
                  {"note", c.note}});
  }
  j["conditions"] = co;
  j["verdict"] = r.verdict;
  j["hypothesis"] = r.hypothesis;
  j["notes"] = r.notes;
  return j;
}

nlohmann::json to_json(const TrendReport& t) {
  nlohmann::json j;
  j["family"] = t.family;
  j["radii"] = nums(t.radii);
  j["sup_q"] = nums(t.sup_q);
  auto tr = nlohmann::json::array();
  for (const auto& c : t.trends)
    tr.push_back({{"id", c.id},
                  {"sense", c.sense == Condition::Sense::Bound ? "bound" : "gap"},
                  {"applicable", c.applicable},
                  {"values", nums(c.values)},
                  {"classification", c.classification}});
  j["trends"] = tr;
  auto mem = nlohmann::json::array();
  for (const auto& m : t.members) mem.push_back(to_json(m));
  j["members"] = mem;
  j["verdict"] = t.verdict;
  return j;
}

nlohmann::json to_json(const RefinementTable& t) {
  nlohmann::json j;
  auto rows = nlohmann::json::array();
  for (const auto& r : t.rows) {
    auto m = nlohmann::json::object();
    for (const auto& [k, v] : r.margins) m[k] = num(v);
    rows.push_back({{"n_rho", r.n_rho}, {"n_theta", r.n_theta}, {"h", num(r.h)},
                    {"change", num(r.change)}, {"cross_check", num(r.cross_check)}, {"margins", m}});
  }
  j["rows"] = rows;
  j["orders"] = nums(t.orders);
  return j;
}

std::string render_text(const EquivalenceReport& r) {
  std::ostringstream o;
  o.precision(6);
  o << r.family << " report, kind " << r.kind << " r=" << r.r << "\n";
  o << "grid R=" << r.R << " n_rho=" << r.n_rho << " n_theta=" << r.n_theta << " (" << r.grading
    << ")  eps_h=" << r.tol.eps << "  residual=" << r.residual << "\n";
  for (const auto& [k, v] : r.scalars) o << "  " << k << " = " << v << "\n";
  for (const auto& [k, v] : r.series) {
    o << "  " << k << " =";
    for (double x : v) o << " " << x;
    o << "\n";
  }
  for (const auto& b : r.bochner) {
    o << "  bochner i=" << b.i << ": ";
    if (!b.constants.claimed) {
      o << "no inequality claimed\n";
      continue;
    }
    o << "c1=" << b.constants.c1 << " c2=" << b.constants.c2
      << (b.constants.conditional ? " (conditional)" : "") << " min=" << b.min_residual << "\n";
  }
  o << "conditions:\n";
  for (const auto& c : r.conditions) {
    o << "  [" << (!c.applicable ? "n/a" : c.witnessed ? "ok " : "no ") << "] " << c.id;
    if (c.applicable) o << " = " << c.value;
    if (!c.note.empty()) o << "  (" << c.note << ")";
    o << "\n";
  }
  o << "verdict: " << r.verdict << "\n";
  o << "hypothesis: " << r.hypothesis << "\n";
  for (const auto& n : r.notes) o << "note: " << n << "\n";
  return o.str();
}

std::string render_text(const TrendReport& t) {
  std::ostringstream o;
  o.precision(6);
  o << t.family << " R-sweep over";
  for (double R : t.radii) o << " " << R;
  o << "\n  sup_q:";
  for (double v : t.sup_q) o << " " << v;
  o << "\n";
  for (const auto& c : t.trends) {
    o << "  " << c.id << ": " << c.classification << " [";
    for (size_t i = 0; i < c.values.size(); ++i) o << (i ? ", " : "") << c.values[i];
    o << "]\n";
  }
  o << "verdict: " << t.verdict << "\n";
  return o.str();
}

}  // namespace hmetric
