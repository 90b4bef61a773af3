#pragma once

#include "igaasp/assembly.hpp"

namespace igaasp {

/// Perturbed: a null-space field plus 1e-2 times the pure solution.
/// Pure: the solution for f = (1, 1).
enum class ManufacturedVariant { Perturbed, Pure };

std::string to_string(ManufacturedVariant v);
ManufacturedVariant manufactured_variant_from_string(const std::string& s);

struct ManufacturedCase {
  Operator op = Operator::Curl;
  int dim = 2;
  double tau = 1.0;
  std::string name;
  VectorField rhs;
  VectorField exact;  // empty when no closed form is known
  bool has_exact() const { return static_cast<bool>(exact); }
};

/// C1 = -tau^{-1} / (e^{-sqrt(tau)/2} + e^{sqrt(tau)/2}).
double curl_constant(double tau);
/// -tau^{-1} / cos(sqrt(tau)/2), the constant of the cosine form. That form
/// solves g'' + tau g = 1, not the grad-div equation; the cases below use the
/// cosh form for both operators. Throws where the cosine vanishes.
double div_cos_constant(double tau);

/// g(t) with -g'' + tau g = 1 on (0, 1), g(0) = g(1) = 0.
double cosh_profile(double tau, double t);

ManufacturedCase manufactured_2d(Operator op, ManufacturedVariant variant, double tau);

/// 3-D right-hand sides without closed-form solution:
/// curl f = (x1, x2, x3), div f = (x2 x3, x1 x3, x1 x2).
ManufacturedCase rhs_3d(Operator op, double tau);

}  // namespace igaasp
