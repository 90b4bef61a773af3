#include "igaasp/manufactured.hpp"

#include <cmath>
#include <stdexcept>

namespace igaasp {

std::string to_string(ManufacturedVariant v) { return v == ManufacturedVariant::Perturbed ? "perturbed" : "pure"; }

ManufacturedVariant manufactured_variant_from_string(const std::string& s) {
  if (s == "perturbed") return ManufacturedVariant::Perturbed;
  if (s == "pure") return ManufacturedVariant::Pure;
  throw std::invalid_argument("unknown manufactured variant: " + s);
}

double curl_constant(double tau) {
  if (!(tau > 0)) throw std::invalid_argument("curl_constant: tau must be positive");
  const double s = std::sqrt(tau);
  return -1.0 / tau / (std::exp(-s / 2) + std::exp(s / 2));
}

double div_cos_constant(double tau) {
  if (!(tau > 0)) throw std::invalid_argument("div_cos_constant: tau must be positive");
  const double c = std::cos(std::sqrt(tau) / 2);
  if (std::abs(c) < 1e-12) throw std::domain_error("div_cos_constant: cos(sqrt(tau)/2) vanishes");
  return -1.0 / tau / c;
}

double cosh_profile(double tau, double t) {
  if (!(tau > 0)) throw std::invalid_argument("cosh_profile: tau must be positive");
  // 1/tau + 2 C1 cosh(s (t - 1/2)) written without cancellation for small tau
  const double s = std::sqrt(tau);
  const double b = s / 2, a = s * (t - 0.5);
  return 2.0 * std::sinh((b + a) / 2) * std::sinh((b - a) / 2) / std::cosh(b) / tau;
}

ManufacturedCase manufactured_2d(Operator op, ManufacturedVariant variant, double tau) {
  if (!(tau > 0)) throw std::invalid_argument("manufactured_2d: tau must be positive");
  ManufacturedCase mc;
  mc.op = op;
  mc.dim = 2;
  mc.tau = tau;
  mc.name = to_string(op) + "-" + to_string(variant);
  // curl: v = (g(x2), g(x1)); div: v = (g(x1), g(x2))
  const bool curl = op == Operator::Curl;
  auto pure = [tau, curl](const Vector& x) {
    Vector v(2);
    v << cosh_profile(tau, curl ? x[1] : x[0]), cosh_profile(tau, curl ? x[0] : x[1]);
    return v;
  };
  if (variant == ManufacturedVariant::Pure) {
    mc.rhs = [](const Vector&) { return Vector::Ones(2).eval(); };
    mc.exact = pure;
    return mc;
  }
  // null-space part: grad psi for curl, rot psi for div, psi = x1(x1-1) x2(x2-1)
  auto null_part = [curl](const Vector& x) {
    const double a = x[0] * (x[0] - 1), b = x[1] * (x[1] - 1);
    const double da = 2 * x[0] - 1, db = 2 * x[1] - 1;
    Vector w(2);
    if (curl)
      w << b * da, a * db;
    else
      w << a * db, -b * da;
    return w;
  };
  mc.rhs = [null_part](const Vector& x) { return Vector(null_part(x).array() + 1e-2); };
  mc.exact = [null_part, pure, tau](const Vector& x) { return Vector(null_part(x) / tau + 1e-2 * pure(x)); };
  return mc;
}

ManufacturedCase rhs_3d(Operator op, double tau) {
  ManufacturedCase mc;
  mc.op = op;
  mc.dim = 3;
  mc.tau = tau;
  mc.name = to_string(op) + "-3d";
  if (op == Operator::Curl)
    mc.rhs = [](const Vector& x) { return Vector(x.head(3)); };
  else
    mc.rhs = [](const Vector& x) {
      Vector f(3);
      f << x[1] * x[2], x[0] * x[2], x[0] * x[1];
      return f;
    };
  return mc;
}

}  // namespace igaasp
