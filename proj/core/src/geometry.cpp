#include "hmetric/geometry.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "hmetric/errors.hpp"

namespace hmetric {

double hyperbolic_density(cplx z) {
  const double r2 = std::norm(z);
  if (!(r2 < 1.0)) throw DomainError("point outside the open unit disk");
  const double s = 1.0 - r2;
  return 4.0 / (s * s);
}

namespace {

void trim(std::vector<cplx>& c) {
  while (c.size() > 1 && c.back() == cplx(0.0, 0.0)) c.pop_back();
}

cplx horner(const std::vector<cplx>& c, cplx z) {
  cplx acc(0.0, 0.0);
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
  return acc;
}

// a root this close to the circle counts as a boundary pole
constexpr double kPoleSlack = 1e-9;
// multiple roots come back from the companion matrix as a ring of radius
// ~ eps^(1/m); roots closer than this are merged and replaced by their mean
constexpr double kClusterRadius = 1e-3;

std::vector<cplx> merge_clusters(const std::vector<cplx>& roots) {
  const int n = static_cast<int>(roots.size());
  std::vector<int> label(n);
  for (int i = 0; i < n; ++i) label[i] = i;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k)
        if (std::abs(roots[i] - roots[k]) < kClusterRadius && label[k] > label[i]) {
          label[k] = label[i];
          changed = true;
        }
  }
  std::vector<cplx> out;
  for (int i = 0; i < n; ++i) {
    if (label[i] != i) continue;
    cplx sum(0.0, 0.0);
    int count = 0;
    for (int k = 0; k < n; ++k)
      if (label[k] == i) {
        sum += roots[k];
        ++count;
      }
    out.push_back(sum / double(count));
  }
  return out;
}

}  // namespace

std::vector<cplx> polynomial_roots(const std::vector<cplx>& coeffs) {
  std::vector<cplx> c = coeffs;
  trim(c);
  const int deg = static_cast<int>(c.size()) - 1;
  if (deg <= 0) return {};
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) comp(i, deg - 1) = -c[i] / c[deg];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
  std::vector<cplx> roots(deg);
  for (int i = 0; i < deg; ++i) roots[i] = es.eigenvalues()[i];
  return roots;
}

RDifferential::RDifferential(int order, std::vector<cplx> numerator,
                             std::vector<cplx> denominator)
    : order_(order), num_(std::move(numerator)), den_(std::move(denominator)) {
  if (order_ < 1) throw ConfigError("differential order must be at least 1");
  if (num_.empty()) num_.push_back(cplx(0.0, 0.0));
  if (den_.empty()) throw ConfigError("denominator must be non-empty");
  for (const auto& v : num_)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw ConfigError("non-finite numerator coefficient");
  for (const auto& v : den_)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw ConfigError("non-finite denominator coefficient");
  trim(num_);
  trim(den_);
  if (den_.back() == cplx(0.0, 0.0)) throw ConfigError("denominator is zero");
  const cplx lead = den_.back();
  if (lead != cplx(1.0, 0.0)) {
    for (auto& v : num_) v /= lead;
    for (auto& v : den_) v /= lead;
  }
  for (const auto& p : merge_clusters(poles())) {
    if (std::abs(p) < 1.0 - kPoleSlack)
      throw DomainError("pole of q inside the unit disk at |z| = " +
                        std::to_string(std::abs(p)));
  }
}

RDifferential RDifferential::zero(int order) {
  return RDifferential(order, {cplx(0.0, 0.0)});
}

RDifferential RDifferential::monomial(int order, int power, cplx c) {
  if (power < 0) throw ConfigError("monomial power must be non-negative");
  std::vector<cplx> num(power + 1, cplx(0.0, 0.0));
  num[power] = c;
  return RDifferential(order, std::move(num));
}

bool RDifferential::is_zero() const {
  for (const auto& v : num_)
    if (v != cplx(0.0, 0.0)) return false;
  return true;
}

cplx RDifferential::eval(cplx z) const { return horner(num_, z) / horner(den_, z); }

double RDifferential::norm_sq(cplx z) const {
  const double lam = hyperbolic_density(z);
  if (is_zero()) return 0.0;
  return std::norm(eval(z)) / std::pow(lam, order_);
}

RDifferential RDifferential::scaled(double t) const {
  RDifferential out = *this;
  for (auto& v : out.num_) v *= t;
  return out;
}

std::optional<RDifferential::Monomial> RDifferential::as_monomial() const {
  if (den_.size() != 1) return std::nullopt;
  int nonzero = -1;
  for (int i = 0; i < static_cast<int>(num_.size()); ++i) {
    if (num_[i] == cplx(0.0, 0.0)) continue;
    if (nonzero >= 0) return std::nullopt;
    nonzero = i;
  }
  if (nonzero < 0) return Monomial{cplx(0.0, 0.0), 0};
  return Monomial{num_[nonzero] / den_[0], nonzero};
}

std::vector<cplx> RDifferential::poles() const { return polynomial_roots(den_); }

namespace {

nlohmann::json coeffs_to_json(const std::vector<cplx>& c) {
  auto arr = nlohmann::json::array();
  for (const auto& v : c) arr.push_back({v.real(), v.imag()});
  return arr;
}

std::vector<cplx> coeffs_from_json(const nlohmann::json& j, const char* what) {
  if (!j.is_array()) throw ConfigError(std::string(what) + " must be an array");
  std::vector<cplx> out;
  for (const auto& e : j) {
    if (e.is_number()) {
      out.emplace_back(e.get<double>(), 0.0);
    } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
      out.emplace_back(e[0].get<double>(), e[1].get<double>());
    } else {
      throw ConfigError(std::string(what) + " entries must be [re, im] pairs");
    }
  }
  return out;
}

}  // namespace

void to_json(nlohmann::json& j, const RDifferential& q) {
  j = {{"order", q.order()},
       {"numerator", coeffs_to_json(q.numerator())},
       {"denominator", coeffs_to_json(q.denominator())}};
}

void from_json(const nlohmann::json& j, RDifferential& q) {
  if (!j.is_object()) throw ConfigError("q must be an object");
  for (const auto& [key, _] : j.items()) {
    if (key != "order" && key != "numerator" && key != "denominator")
      throw ConfigError("unknown key in q: " + key);
  }
  if (!j.contains("order") || !j.at("order").is_number_integer())
    throw ConfigError("q.order must be an integer");
  if (!j.contains("numerator")) throw ConfigError("q.numerator is required");
  std::vector<cplx> den{cplx(1.0, 0.0)};
  if (j.contains("denominator")) den = coeffs_from_json(j.at("denominator"), "q.denominator");
  q = RDifferential(j.at("order").get<int>(), coeffs_from_json(j.at("numerator"), "q.numerator"),
                    std::move(den));
}

}  // namespace hmetric
