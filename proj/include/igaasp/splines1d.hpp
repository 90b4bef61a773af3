#pragma once

#include "igaasp/sparse.hpp"

#include <vector>

namespace igaasp {

// Basis indices are 0-based throughout: B_0 .. B_{n-1}, D_0 .. D_{n-2}.

struct KnotVector {
  int degree = 0;
  std::vector<double> knots;

  int num_basis() const { return static_cast<int>(knots.size()) - degree - 1; }
  /// Distinct knot values, 0 and 1 included.
  std::vector<double> breakpoints() const;
  int num_elements() const { return static_cast<int>(breakpoints().size()) - 1; }
  /// Index s with knots[s] <= t < knots[s+1]; t == 1 maps to the last non-empty span.
  int find_span(double t) const;
  bool max_regularity() const;
};

/// Throws std::invalid_argument unless kv is an open knot vector on [0,1]
/// with interior multiplicities in 1..p.
void validate(const KnotVector& kv);

KnotVector make_uniform_open_knots(int n_elems, int p);
KnotVector make_open_knots(int p, const std::vector<double>& breakpoints,
                           const std::vector<int>& interior_multiplicity);
/// Knot vector of the degree p-1 derivative space: drops the first and last knot.
KnotVector reduced_knots(const KnotVector& kv);

/// B_{i,p}(t) by the Cox-de Boor recursion, closed at t = 1.
double eval_bspline(const KnotVector& kv, int i, double t);

struct BasisRow {
  int first = 0;
  std::vector<double> values;
  std::vector<double> derivatives;
};

/// The p+1 B-splines that are nonzero on the span containing t, with first derivatives.
BasisRow eval_nonzero_row(const KnotVector& kv, double t);

/// D_{j,p-1}(t) = p/(t_{j+p+1}-t_{j+1}) B_{j+1,p-1}(t), unit integral.
double curry_schoenberg(const KnotVector& kv, int j, double t);
/// The p Curry-Schoenberg functions nonzero at t (derivatives empty when p = 1).
BasisRow eval_curry_schoenberg_row(const KnotVector& kv, double t);

std::vector<double> greville_points(const KnotVector& kv);

enum class BasisKind { BSpline, CurrySchoenberg };
enum class Boundary { Free, ZeroTrace };

struct Space1D {
  KnotVector knots;
  BasisKind kind = BasisKind::BSpline;
  Boundary bc = Boundary::Free;

  int spline_degree() const { return knots.degree; }
  int basis_degree() const { return kind == BasisKind::BSpline ? knots.degree : knots.degree - 1; }
  int full_dim() const { return kind == BasisKind::BSpline ? knots.num_basis() : knots.num_basis() - 1; }
  int dim() const { return bc == Boundary::ZeroTrace ? full_dim() - 2 : full_dim(); }
  /// Row of nonzero functions with unrestricted indices.
  BasisRow eval(double t) const;
  bool operator==(const Space1D& o) const {
    return kind == o.kind && bc == o.bc && knots.degree == o.knots.degree && knots.knots == o.knots.knots;
  }
};

Space1D bspline_space(const KnotVector& kv, Boundary bc = Boundary::Free);
/// Curry-Schoenberg spaces never carry a boundary mask.
Space1D curry_schoenberg_space(const KnotVector& kv);

struct QuadratureRule {
  int points_per_span = 0;
  std::vector<double> breakpoints;
  std::vector<double> nodes;
  std::vector<double> weights;
  int num_spans() const { return static_cast<int>(breakpoints.size()) - 1; }
};

/// Gauss-Legendre nodes and weights on [0,1].
void gauss_legendre_unit(int q, std::vector<double>& nodes, std::vector<double>& weights);
QuadratureRule make_quadrature(const std::vector<double>& breakpoints, int q);
QuadratureRule make_quadrature(const KnotVector& kv, int q);
inline int default_quadrature_order(int p) { return p + 2; }

SparseMat mass_matrix_1d(const Space1D& row_space, const Space1D& col_space, const QuadratureRule& quad);
SparseMat stiffness_matrix_1d(const Space1D& space, const QuadratureRule& quad);
/// (n-1) x n, row j = -e_j + e_{j+1}.
SparseMat difference_matrix_1d(int n);
/// A_{ki} = B_i(g_k) on the unrestricted B-spline space.
SparseMat interpolation_matrix_1d(const Space1D& space);
/// W_{kj} = integral of B_j over [0, g_k].
DenseMat antiderivative_moments_1d(const Space1D& space, const QuadratureRule& quad);
/// Q = Diff * A^{-1} * W, mapping B-spline to Curry-Schoenberg coefficients.
SparseMat histopolation_matrix_1d(const Space1D& space, const QuadratureRule& quad);
/// Deletes the first and last row (column) on sides marked ZeroTrace.
SparseMat restrict_bc(const SparseMat& mat, Boundary row_bc, Boundary col_bc);

}  // namespace igaasp
