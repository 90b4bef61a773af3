#pragma once

#include "igaasp/derham.hpp"

#include <functional>

namespace igaasp {

enum class Operator { Curl, Div };

std::string to_string(Operator op);
Operator operator_from_string(const std::string& s);

/// Vector-valued function of a point in [0,1]^d.
using VectorField = std::function<Vector(const Vector& x)>;

/// One Gauss rule per direction, q = p + 2 points per span.
std::vector<QuadratureRule> default_quadrature(const TensorSpace& space);

SparseMat mass_matrix(const TensorSpace& space, const std::vector<QuadratureRule>& quad);
SparseMat mass_matrix(const TensorSpace& space);

/// Block-diagonal H^1 matrix on a Grad or VectorGrad space: grad-grad form,
/// plus the L2 form when include_mass is set.
SparseMat h1_vector_matrix(const TensorSpace& xh, const std::vector<QuadratureRule>& quad, bool include_mass = true);
SparseMat h1_vector_matrix(const TensorSpace& xh, bool include_mass = true);

/// grad-grad form on a scalar Grad space; essential bc only.
SparseMat scalar_laplacian_matrix(const TensorSpace& grad, const std::vector<QuadratureRule>& quad);
SparseMat scalar_laplacian_matrix(const TensorSpace& grad);

/// C^T M_div C on a 3-D Curl space.
SparseMat curl_stiffness_matrix(const TensorSpace& curl, const TensorSpace& div);

/// b_r = integral of f . v_r.
Vector assemble_rhs(const TensorSpace& space, const VectorField& f, const std::vector<QuadratureRule>& quad);
Vector assemble_rhs(const TensorSpace& space, const VectorField& f);

struct ProblemSpec {
  Operator op = Operator::Curl;
  int dim = 2;
  std::vector<int> degrees;
  std::vector<int> elements;
  double tau = 1.0;
  BoundaryCondition bc = BoundaryCondition::Essential;
  VectorField rhs;  // empty means b = 0
};

ProblemSpec make_problem(Operator op, int dim, int degree, int n_elems, double tau,
                         VectorField rhs = {}, BoundaryCondition bc = BoundaryCondition::Essential);

struct AssembledSystem {
  ProblemSpec spec;
  TensorSpace space;        // V(D)
  TensorSpace range_space;  // V(D+)
  SparseMat A;
  SparseMat mass;           // M_D
  SparseMat d_mat;          // V(D) -> V(D+)
  SparseMat range_mass;     // M_{D+}
  Vector b;
};

/// Space kinds (V(D), V(D+)) for an operator in a given dimension.
std::pair<SpaceKind, SpaceKind> problem_spaces(Operator op, int dim);

/// A = D^T M_{D+} D + tau M_D.
AssembledSystem system_matrix(const ProblemSpec& spec);

/// Integral of |D u|^2 + tau |u|^2 for a coefficient vector, by quadrature on
/// point values (independent of the assembled matrices).
double energy_by_quadrature(const AssembledSystem& sys, const Vector& u);

}  // namespace igaasp
