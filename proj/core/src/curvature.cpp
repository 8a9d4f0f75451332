#include "hmetric/curvature.hpp"

#include <cmath>
#include <limits>

#include "hmetric/errors.hpp"

namespace hmetric {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// interior minimum of a field, with its node
std::pair<double, int> interior_min(const ScalarField& f) {
  double best = std::numeric_limits<double>::infinity();
  int node = -1;
  for (int i = 0; i < f.size(); ++i) {
    if (f.grid->is_boundary(i)) continue;
    if (f[i] < best) {
      best = f[i];
      node = i;
    }
  }
  return {best, node};
}

}  // namespace

DerivedGeometry compute_f_fields(const Solution& s) {
  if (!s.kind.toda_like()) throw ConfigError("f-fields need a cyclic, subcyclic or g2 solution");
  DerivedGeometry g;
  g.kind = s.kind;
  g.subcyclic = s.kind.subcyclic_like();
  g.r = s.kind.kind == Kind::G2 ? 7 : s.kind.rank;
  g.n = g.r / 2;
  g.grid = s.grid;
  const int r = g.r, n = g.n;
  const auto sq = q_norm_sq_field(s.grid, s.q);
  const double ext = -(2.0 * n + 1.0 - r);
  g.f.assign(r + 1, ScalarField(s.grid));
  const auto& w = s.weights;
  for (int node = 0; node < s.grid->size(); ++node) {
    auto W = [&](int i) { return w[i - 1][node]; };
    // w_{n+1} by the reality convention
    const double wn1 = ext * W(n);
    auto Wx = [&](int i) { return i <= n ? W(i) : wn1; };
    if (g.subcyclic) {
      g.f[0][node] = sq[node] == 0.0 ? 0.0 : sq[node] * std::exp(W(1) + Wx(2));
    } else {
      g.f[0][node] = sq[node] == 0.0 ? 0.0 : sq[node] * std::exp(2.0 * W(1));
    }
    for (int i = 1; i <= n; ++i) g.f[i][node] = std::exp(-W(i) + Wx(i + 1));
  }
  for (int i = n + 1; i < r; ++i) g.f[i] = g.f[r - i];
  g.f[r] = g.subcyclic ? ScalarField(s.grid, 0.0) : g.f[0];
  if (g.subcyclic) {
    // the subcyclic chain has no f_r; keep it out of reach
    g.f.pop_back();
  }
  return g;
}

ScalarField curvature_closed_form(const DerivedGeometry& g, int i) {
  if (i < 1 || i > g.n) throw ConfigError("curvature index out of range");
  const int r = g.r;
  ScalarField out(g.grid);
  const auto& f = g.f;
  auto at = [&](int k, int node) { return f.at(k)[node]; };
  for (int node = 0; node < out.size(); ++node) {
    double K;
    if (!g.subcyclic) {
      if (r == 2) K = 4.0 * (at(0, node) / at(1, node) - 1.0);
      else if (r == 3) K = 2.0 * (at(0, node) / at(1, node) - 1.0);
      else K = 2.0 * ((at(i - 1, node) + at(i + 1, node)) / at(i, node) - 2.0);
    } else if (r == 3) {
      K = 2.0 * (at(0, node) / at(1, node) - 1.0);
    } else if (i == 1) {
      K = 2.0 * (at(2, node) / at(1, node) - 2.0);
    } else if (i == 2 && r == 4) {
      K = 4.0 * ((at(0, node) + at(1, node)) / at(2, node) - 1.0);
    } else if (i == 2 && r == 5) {
      K = 2.0 * ((at(0, node) + at(1, node)) / at(2, node) - 1.0);
    } else if (i == 2) {
      K = 2.0 * ((at(0, node) + at(1, node) + at(3, node)) / at(2, node) - 2.0);
    } else {
      K = 2.0 * ((at(i - 1, node) + at(i + 1, node)) / at(i, node) - 2.0);
    }
    out[node] = K;
  }
  return out;
}

ScalarField curvature_cross_check(const DerivedGeometry& g, int i) {
  const auto closed = curvature_closed_form(g, i);
  const auto disc = discrete_curvature(g.f.at(i), FactorConvention::Background);
  ScalarField out(g.grid);
  for (int node = 0; node < out.size(); ++node)
    out[node] = g.grid->is_boundary(node) ? kNaN : std::abs(closed[node] - disc[node]);
  return out;
}

bool sectional_applicable(const DerivedGeometry& g) {
  return g.subcyclic ? g.r >= 4 : g.r >= 3;
}

ScalarField sectional_curvature(const DerivedGeometry& g) {
  if (!sectional_applicable(g))
    throw ConfigError("sectional curvature needs cyclic r >= 3 or subcyclic r >= 4");
  const int r = g.r;
  ScalarField out(g.grid);
  for (int node = 0; node < out.size(); ++node) {
    auto f = [&](int k) { return g.f.at(k)[node]; };
    double num = 0.0, den = 0.0;
    if (!g.subcyclic) {
      for (int i = 1; i <= r; ++i) {
        const double d = f(i - 1) - f(i);
        num += d * d;
        den += f(i);
      }
    } else {
      const double a = f(0) - f(1), b = f(0) + f(1) - f(2);
      num = 2.0 * a * a + 2.0 * b * b;
      for (int i = 3; i <= r - 2; ++i) {
        const double d = f(i - 1) - f(i);
        num += d * d;
      }
      for (int i = 1; i <= r; ++i) den += f(i - 1);
    }
    out[node] = -num / (2.0 * r * den * den);
  }
  return out;
}

ScalarField energy_density(const DerivedGeometry& g) {
  ScalarField out(g.grid);
  for (int node = 0; node < out.size(); ++node) {
    double acc = 0.0;
    for (int i = 0; i < g.r; ++i) acc += g.f[i][node];
    out[node] = 2.0 * g.r * acc;
  }
  return out;
}

BochnerConstants bochner_constants(Kind kind, int r, int i) {
  const int n = r / 2;
  BochnerConstants c;
  auto set = [&](double c1, double c2, bool cond, const char* note) {
    c.claimed = true;
    c.c1 = c1;
    c.c2 = c2;
    c.conditional = cond;
    c.note = note;
  };
  if (i < 1 || i > n) throw ConfigError("bochner index out of range");
  if (kind == Kind::Cyclic) {
    if (r == 2) set(1.0, 4.0, false, "cyclic r=2");
    else if (r == 3) set(1.5, 2.0, false, "cyclic r=3");
    else if (r == 4 && i == 1) set(1.0, 4.0, false, "cyclic r=4, i=1");
    else if (i == n) set(0.75, 4.0, true, "cyclic i=n, complete solution");
    else if (i == n - 1 && r >= 6) set(0.75, 4.0, true, "cyclic i=n-1, complete solution");
  } else if (kind == Kind::Subcyclic || kind == Kind::G2) {
    if (r == 3) set(1.0, 2.0, false, "subcyclic r=3");
    else if (r == 4 && i == 2) set(0.75, 4.0, false, "subcyclic r=4, i=2");
    else if ((r == 4 || r == 5) && i == 1) set(0.5, 4.0, true, "subcyclic r=4/5, i=1, complete solution");
    else if (r == 5 && i == 2) set(1.0, 2.0, false, "subcyclic r=5, i=2");
    else if (r == 7 && i == 2) set(0.75, 4.0, false, "subcyclic r=7, i=2");
    else if (r == 6 && i == 2) set(0.75, 4.0, true, "subcyclic r=6, i=2, complete solution");
    else if (i == 3 && r >= 6 && r <= 9) set(0.75, 4.0, true, "subcyclic i=3, complete solution");
    else if (i >= 4 && i == n) set(0.75, 4.0, true, "subcyclic i=n, complete solution");
    else if (i >= 4 && i == n - 1 && r >= 10) set(0.75, 4.0, true, "subcyclic i=n-1, complete solution");
  } else {
    throw ConfigError("bochner constants exist only for cyclic and subcyclic systems");
  }
  if (!c.claimed) c.note = "no inequality claimed";
  return c;
}

nlohmann::json bochner_table_json() {
  auto rows = nlohmann::json::array();
  for (Kind kind : {Kind::Cyclic, Kind::Subcyclic}) {
    for (int r = kind == Kind::Cyclic ? 2 : 3; r <= 9; ++r) {
      for (int i = 1; i <= r / 2; ++i) {
        const auto c = bochner_constants(kind, r, i);
        nlohmann::json row = {{"kind", to_string(kind)}, {"r", r}, {"i", i},
                              {"claimed", c.claimed}, {"note", c.note}};
        if (c.claimed) {
          row["c1"] = c.c1;
          row["c2"] = c.c2;
          row["conditional"] = c.conditional;
        }
        rows.push_back(row);
      }
    }
  }
  return {{"inequality", "Lap_{g(h)_i} K >= c1 K (K + c2)"}, {"cases", rows}};
}

BochnerResult bochner_residual(const DerivedGeometry& g, int i) {
  BochnerResult res;
  res.constants = bochner_constants(g.subcyclic ? Kind::Subcyclic : Kind::Cyclic, g.r, i);
  const auto K = curvature_closed_form(g, i);
  const auto lapK = laplace_beltrami(g.grid).apply(K);
  res.field = ScalarField(g.grid);
  const auto& c = res.constants;
  for (int node = 0; node < K.size(); ++node) {
    if (g.grid->is_boundary(node)) {
      res.field[node] = kNaN;
      continue;
    }
    const double k = K[node];
    res.field[node] = lapK[node] / g.f[i][node] - c.c1 * k * (k + c.c2);
  }
  std::tie(res.min_residual, res.node) = interior_min(res.field);
  return res;
}

namespace {

void require_kind(const Solution& s, Kind k, const char* what) {
  if (s.kind.kind != k) throw ConfigError(what);
}

}  // namespace

HarmonicMapFields harmonic_map_quantities(const Solution& s) {
  require_kind(s, Kind::Vortex, "harmonic map quantities need a vortex solution");
  const auto& v = s.kind.vortex;
  if (!(v.a == 2.0 && v.b == 2.0 && v.c == 0.25 && v.kappa == -1.0))
    throw ConfigError("harmonic map quantities need (a, b, c, kappa) = (2, 2, 1/4, -1)");
  const auto sq = q_norm_sq_field(s.grid, s.q);
  HarmonicMapFields out{ScalarField(s.grid), ScalarField(s.grid), ScalarField(s.grid), ScalarField(s.grid)};
  const auto& w = s.weights[0];
  for (int i = 0; i < w.size(); ++i) {
    out.H[i] = std::exp(-2.0 * w[i]);
    out.L[i] = sq[i] * std::exp(2.0 * w[i]);
    out.dilatation[i] = sq[i] * std::exp(4.0 * w[i]);
    out.jacobian[i] = out.H[i] - out.L[i];
  }
  return out;
}

ScalarField vortex_ratio(const Solution& s) {
  require_kind(s, Kind::Vortex, "vortex ratio needs a vortex solution");
  const auto& v = s.kind.vortex;
  const auto sq = q_norm_sq_field(s.grid, s.q);
  ScalarField out(s.grid);
  for (int i = 0; i < out.size(); ++i) out[i] = sq[i] * std::exp((v.a + v.b) * s.weights[0][i]);
  return out;
}

ScalarField vortex_curvature(const Solution& s) {
  const auto& v = s.kind.vortex;
  if (std::abs(v.b * v.c - 0.5) > 1e-14)
    throw ConfigError("closed-form vortex curvature needs b c = 1/2");
  auto ratio = vortex_ratio(s);
  for (int i = 0; i < ratio.size(); ++i) ratio[i] = -2.0 * v.b * v.kappa * (ratio[i] - 1.0);
  return ratio;
}

ScalarField blaschke_curvature(const Solution& s) {
  require_kind(s, Kind::Wang, "blaschke curvature needs a wang solution");
  const auto sq = q_norm_sq_field(s.grid, s.q);
  ScalarField out(s.grid);
  for (int i = 0; i < out.size(); ++i) out[i] = -1.0 + 2.0 * sq[i] * std::exp(-3.0 * s.weights[0][i]);
  return out;
}

MaximalGeometry maximal_geometry(const Solution& s) {
  require_kind(s, Kind::Maximal, "maximal geometry needs a maximal-surface solution");
  const auto sq = q_norm_sq_field(s.grid, s.q);
  const auto& u = s.weights[0];
  const auto& v = s.weights[1];
  MaximalGeometry m;
  m.metric_factor = ScalarField(s.grid);
  m.k = ScalarField(s.grid);
  for (int i = 0; i < u.size(); ++i) {
    m.metric_factor[i] = 4.0 * std::exp(-2.0 * u[i]);
    m.k[i] = -1.0 + 0.25 * std::sqrt(sq[i]) * std::exp(4.0 * u[i] + v[i]);
  }
  m.k_discrete = discrete_curvature(m.metric_factor, FactorConvention::Background);
  const auto lapk = laplace_beltrami(s.grid).apply(m.k);
  m.bochner = ScalarField(s.grid);
  for (int i = 0; i < u.size(); ++i) {
    if (s.grid->is_boundary(i)) {
      m.bochner[i] = kNaN;
      continue;
    }
    m.gauss_discrepancy = std::max(m.gauss_discrepancy, std::abs(m.k_discrete[i] - m.k[i]));
    m.bochner[i] = lapk[i] / m.metric_factor[i] - m.k[i] * (1.0 + m.k[i]);
  }
  m.bochner_min = interior_min(m.bochner).first;
  return m;
}

G2Geometry g2_geometry(const Solution& s) {
  require_kind(s, Kind::G2, "g2 geometry needs a g2 solution");
  const auto geom = compute_f_fields(s);
  const auto& f2 = geom.f[2];
  const auto& f3 = geom.f[3];
  G2Geometry out;
  out.metric_factor = ScalarField(s.grid);
  out.k = ScalarField(s.grid);
  for (int i = 0; i < f2.size(); ++i) {
    out.metric_factor[i] = 2.0 * f3[i];
    out.k[i] = f2[i] / f3[i] - 1.0;
  }
  out.k_discrete = discrete_curvature(out.metric_factor, FactorConvention::Background);
  const auto lap = laplace_beltrami(s.grid);
  const auto lapk = lap.apply(out.k);
  const auto lapw3 = lap.apply(s.weights[2]);
  out.bochner = ScalarField(s.grid);
  out.k_min = min_value(out.k);
  const double ln2 = std::log(2.0);
  for (int i = 0; i < f2.size(); ++i) {
    const double gap = s.weights[0][i] - s.weights[1][i] - s.weights[2][i] - ln2;
    out.constraint_gap = std::max(out.constraint_gap, std::abs(gap));
    if (s.grid->is_boundary(i)) {
      out.bochner[i] = kNaN;
      continue;
    }
    const double k = out.k[i];
    out.bochner[i] = lapk[i] / out.metric_factor[i] - 3.0 * k * (k + 1.0);
    out.gauss_discrepancy = std::max(out.gauss_discrepancy, std::abs(out.k_discrete[i] - k));
    const double row3 = lapw3[i] - (f2[i] - f3[i] + 0.5);
    out.consistency_residual = std::max(out.consistency_residual, std::abs(row3));
  }
  out.bochner_min = interior_min(out.bochner).first;
  return out;
}

Tolerance calibrate_tolerance(const GridPtr& g) {
  const auto K = discrete_curvature(density_field(g), FactorConvention::Absolute);
  double err = 0.0;
  for (int i = 0; i < K.size(); ++i)
    if (!g->is_boundary(i)) err = std::max(err, std::abs(K[i] + 1.0));
  Tolerance t;
  t.h = g->h();
  t.background_error = err;
  t.C = kToleranceSafety * err / (t.h * t.h);
  t.eps = t.C * t.h * t.h;
  return t;
}

}  // namespace hmetric
