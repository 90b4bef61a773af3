#pragma once

#include "igaasp/splines1d.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace igaasp {

enum class SpaceKind { Grad, Curl, Div, L2, VectorGrad };
enum class BoundaryCondition { Natural, Essential };

std::string to_string(SpaceKind kind);
std::string to_string(BoundaryCondition bc);
SpaceKind space_kind_from_string(const std::string& s);
BoundaryCondition boundary_condition_from_string(const std::string& s);

struct TensorComponent {
  std::vector<Space1D> factors;

  Eigen::Index dim() const;
  std::vector<int> shape() const;
};

struct DofIndex {
  int component = 0;
  std::vector<int> multi;
  Eigen::Index flat = 0;
};

/// Tensor-product spline space on [0,1]^d. DOFs are numbered component-major,
/// then lexicographically with the last coordinate index running fastest.
struct TensorSpace {
  SpaceKind kind = SpaceKind::Grad;
  int dim = 0;
  BoundaryCondition bc = BoundaryCondition::Natural;
  std::vector<int> degrees;
  std::vector<int> elements;
  std::vector<TensorComponent> components;
  std::vector<Eigen::Index> offsets;

  int num_components() const { return static_cast<int>(components.size()); }
  Eigen::Index total_dim() const { return offsets.back(); }
  Eigen::Index component_dim(int c) const { return offsets[c + 1] - offsets[c]; }
  DofIndex dof(Eigen::Index flat) const;
  Eigen::Index flat_index(int component, const std::vector<int>& multi) const;
};

/// Factor table: Grad (B..B); Curl component c has D in direction c; Div
/// component c has B in direction c and D elsewhere; L2 (D..D); VectorGrad is
/// d copies of Grad. Essential bc masks only B factors.
TensorSpace build_space(SpaceKind kind, const std::vector<int>& degrees, const std::vector<int>& n_elems,
                        BoundaryCondition bc);
TensorSpace build_space(SpaceKind kind, int dim, int degree, int n_elems, BoundaryCondition bc);

nlohmann::json to_json(const TensorSpace& space);

/// Derivative along one direction between two single components whose
/// factors agree except for B -> D in that direction.
SparseMat partial_derivative(const TensorComponent& from, const TensorComponent& to, int direction);

SparseMat gradient_matrix(const TensorSpace& grad, const TensorSpace& curl);
/// 3-D curl between Curl and Div spaces.
SparseMat curl_matrix(const TensorSpace& curl, const TensorSpace& div);
SparseMat divergence_matrix(const TensorSpace& div, const TensorSpace& l2);
/// 2-D scalar curl du1/dx2 - du2/dx1 from Curl to L2.
SparseMat scalar_curl_matrix(const TensorSpace& curl, const TensorSpace& l2);
/// 2-D vector curl (du/dx2, -du/dx1) from Grad to Div.
SparseMat vector_curl_matrix(const TensorSpace& grad, const TensorSpace& div);
/// Picks the operator that maps `from` into `to` along the complex.
SparseMat differential_matrix(const TensorSpace& from, const TensorSpace& to);

/// Field value and first partials of a coefficient vector at a point.
struct FieldSample {
  Eigen::MatrixXd values;   // components x 1
  Eigen::MatrixXd jacobian; // components x dim, row c = gradient of component c
};
FieldSample evaluate_field(const TensorSpace& space, const Vector& coeffs, const std::vector<double>& x);

}  // namespace igaasp
