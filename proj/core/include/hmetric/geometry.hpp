#pragma once

#include <complex>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

namespace hmetric {

using cplx = std::complex<double>;

/// Conformal factor of the complete K = -1 metric on the unit disk,
/// 4 / (1 - |z|^2)^2. Throws DomainError for |z| >= 1.
double hyperbolic_density(cplx z);

/// q(z) dz^r with q a rational function N/D. Coefficients run in ascending
/// degree. The denominator is normalised to be monic on construction, and
/// its roots must lie on or outside the unit circle.
class RDifferential {
 public:
  RDifferential() = default;
  RDifferential(int order, std::vector<cplx> numerator,
                std::vector<cplx> denominator = {cplx(1.0, 0.0)});

  static RDifferential zero(int order);
  /// c z^m dz^r
  static RDifferential monomial(int order, int power, cplx c);

  int order() const { return order_; }
  const std::vector<cplx>& numerator() const { return num_; }
  const std::vector<cplx>& denominator() const { return den_; }

  bool is_zero() const;
  cplx eval(cplx z) const;
  /// |q|^2 measured in the background metric: |q(z)|^2 / lambda(z)^r.
  double norm_sq(cplx z) const;
  /// t * q
  RDifferential scaled(double t) const;

  struct Monomial {
    cplx coefficient;
    int power;
  };
  /// Set when q = c z^m dz^r (constant denominator).
  std::optional<Monomial> as_monomial() const;

  /// Roots of the denominator (empty when it is constant).
  std::vector<cplx> poles() const;

  friend bool operator==(const RDifferential&, const RDifferential&) = default;

 private:
  int order_ = 0;
  std::vector<cplx> num_{cplx(0.0, 0.0)};
  std::vector<cplx> den_{cplx(1.0, 0.0)};
};

void to_json(nlohmann::json& j, const RDifferential& q);
void from_json(const nlohmann::json& j, RDifferential& q);

/// Roots of a complex polynomial given in ascending degree.
std::vector<cplx> polynomial_roots(const std::vector<cplx>& coeffs);

}  // namespace hmetric
