#include "igaasp/splines1d.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace igaasp {

std::vector<double> KnotVector::breakpoints() const {
  std::vector<double> u;
  for (double t : knots)
    if (u.empty() || t > u.back()) u.push_back(t);
  return u;
}

int KnotVector::find_span(double t) const {
  const int n = num_basis();
  if (t >= knots[n]) {
    int s = n - 1;
    while (s > degree && knots[s] >= knots[s + 1]) --s;
    return s;
  }
  // Largest s in [p, n-1] with knots[s] <= t.
  auto it = std::upper_bound(knots.begin() + degree, knots.begin() + n, t);
  return static_cast<int>(it - knots.begin()) - 1;
}

bool KnotVector::max_regularity() const {
  const int m = static_cast<int>(knots.size());
  for (int k = degree + 1; k < m - degree - 1; ++k)
    if (knots[k] == knots[k - 1]) return false;
  return true;
}

void validate(const KnotVector& kv) {
  const int p = kv.degree;
  const int m = static_cast<int>(kv.knots.size());
  if (p < 0) throw std::invalid_argument("knot vector: negative degree");
  if (m < 2 * p + 2) throw std::invalid_argument("knot vector: too few knots");
  for (int k = 1; k < m; ++k)
    if (kv.knots[k] < kv.knots[k - 1]) throw std::invalid_argument("knot vector: knots decrease");
  for (int k = 0; k <= p; ++k)
    if (kv.knots[k] != 0.0 || kv.knots[m - 1 - k] != 1.0)
      throw std::invalid_argument("knot vector: end knots must be repeated p+1 times at 0 and 1");
  if (m > 2 * p + 2 && (kv.knots[p + 1] == 0.0 || kv.knots[m - p - 2] == 1.0))
    throw std::invalid_argument("knot vector: end multiplicity exceeds p+1");
  int run = 1;
  for (int k = p + 2; k < m - p - 1; ++k) {
    run = kv.knots[k] == kv.knots[k - 1] ? run + 1 : 1;
    if (run > std::max(p, 1)) throw std::invalid_argument("knot vector: interior multiplicity exceeds p");
  }
}

KnotVector make_uniform_open_knots(int n_elems, int p) {
  if (p < 1) throw std::invalid_argument("make_uniform_open_knots: degree must be >= 1");
  if (n_elems < 1) throw std::invalid_argument("make_uniform_open_knots: need at least one element");
  KnotVector kv;
  kv.degree = p;
  kv.knots.assign(p + 1, 0.0);
  for (int e = 1; e < n_elems; ++e) kv.knots.push_back(static_cast<double>(e) / n_elems);
  kv.knots.insert(kv.knots.end(), p + 1, 1.0);
  return kv;
}

KnotVector make_open_knots(int p, const std::vector<double>& breakpoints,
                           const std::vector<int>& interior_multiplicity) {
  if (breakpoints.size() < 2 || breakpoints.front() != 0.0 || breakpoints.back() != 1.0)
    throw std::invalid_argument("make_open_knots: breakpoints must run from 0 to 1");
  if (interior_multiplicity.size() != breakpoints.size() - 2)
    throw std::invalid_argument("make_open_knots: one multiplicity per interior breakpoint");
  KnotVector kv;
  kv.degree = p;
  kv.knots.assign(p + 1, 0.0);
  for (std::size_t k = 1; k + 1 < breakpoints.size(); ++k) {
    const int r = interior_multiplicity[k - 1];
    if (r < 1 || r > p) throw std::invalid_argument("make_open_knots: multiplicity outside 1..p");
    kv.knots.insert(kv.knots.end(), r, breakpoints[k]);
  }
  kv.knots.insert(kv.knots.end(), p + 1, 1.0);
  validate(kv);
  return kv;
}

KnotVector reduced_knots(const KnotVector& kv) {
  if (kv.degree < 1) throw std::invalid_argument("reduced_knots: degree 0 has no derivative space");
  KnotVector r;
  r.degree = kv.degree - 1;
  r.knots.assign(kv.knots.begin() + 1, kv.knots.end() - 1);
  return r;
}

namespace {

double cox_de_boor(const std::vector<double>& t, int i, int p, double x, int last_span) {
  if (p == 0) {
    if (t[i] <= x && x < t[i + 1]) return 1.0;
    return (i == last_span && x == t[i + 1]) ? 1.0 : 0.0;
  }
  double v = 0.0;
  const double d1 = t[i + p] - t[i];
  const double d2 = t[i + p + 1] - t[i + 1];
  if (d1 > 0) v += (x - t[i]) / d1 * cox_de_boor(t, i, p - 1, x, last_span);
  if (d2 > 0) v += (t[i + p + 1] - x) / d2 * cox_de_boor(t, i + 1, p - 1, x, last_span);
  return v;
}

// Nonzero degree-p functions B_{s-p..s} on span s (triangular scheme).
void basis_funs(const std::vector<double>& t, int s, int p, double x, std::vector<double>& n) {
  n.assign(p + 1, 0.0);
  std::vector<double> left(p + 1), right(p + 1);
  n[0] = 1.0;
  for (int j = 1; j <= p; ++j) {
    left[j] = x - t[s + 1 - j];
    right[j] = t[s + j] - x;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      const double temp = n[r] / (right[r + 1] + left[j - r]);
      n[r] = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    n[j] = saved;
  }
}

void check_t(double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw std::domain_error("spline evaluation outside [0,1]");
}

}  // namespace

double eval_bspline(const KnotVector& kv, int i, double t) {
  if (i < 0 || i >= kv.num_basis()) throw std::out_of_range("eval_bspline: index out of range");
  check_t(t);
  return cox_de_boor(kv.knots, i, kv.degree, t, kv.find_span(1.0));
}

BasisRow eval_nonzero_row(const KnotVector& kv, double t) {
  check_t(t);
  const int p = kv.degree;
  const int s = kv.find_span(t);
  BasisRow row;
  row.first = s - p;
  basis_funs(kv.knots, s, p, t, row.values);
  row.derivatives.assign(p + 1, 0.0);
  if (p == 0) return row;
  std::vector<double> lower;
  basis_funs(kv.knots, s, p - 1, t, lower);
  for (int k = 0; k <= p; ++k) {
    const int i = s - p + k;
    double d = 0.0;
    if (k >= 1) d += lower[k - 1] / (kv.knots[i + p] - kv.knots[i]);
    if (k <= p - 1) d -= lower[k] / (kv.knots[i + p + 1] - kv.knots[i + 1]);
    row.derivatives[k] = p * d;
  }
  return row;
}

double curry_schoenberg(const KnotVector& kv, int j, double t) {
  const int p = kv.degree;
  if (p < 1) throw std::invalid_argument("curry_schoenberg: degree 0 has no derivative space");
  if (j < 0 || j >= kv.num_basis() - 1) throw std::out_of_range("curry_schoenberg: index out of range");
  const double scale = p / (kv.knots[j + p + 1] - kv.knots[j + 1]);
  return scale * eval_bspline(reduced_knots(kv), j, t);
}

BasisRow eval_curry_schoenberg_row(const KnotVector& kv, double t) {
  const int p = kv.degree;
  if (p < 1) throw std::invalid_argument("curry_schoenberg: degree 0 has no derivative space");
  BasisRow row = eval_nonzero_row(reduced_knots(kv), t);
  for (std::size_t k = 0; k < row.values.size(); ++k) {
    const int j = row.first + static_cast<int>(k);
    const double scale = p / (kv.knots[j + p + 1] - kv.knots[j + 1]);
    row.values[k] *= scale;
    row.derivatives[k] *= scale;
  }
  if (p == 1) row.derivatives.assign(row.values.size(), 0.0);
  return row;
}

std::vector<double> greville_points(const KnotVector& kv) {
  const int p = kv.degree;
  if (p < 1) throw std::invalid_argument("greville_points: degree must be >= 1");
  std::vector<double> g(kv.num_basis());
  for (int i = 0; i < kv.num_basis(); ++i) {
    double s = 0.0;
    for (int k = 1; k <= p; ++k) s += kv.knots[i + k];
    g[i] = s / p;
  }
  return g;
}

BasisRow Space1D::eval(double t) const {
  return kind == BasisKind::BSpline ? eval_nonzero_row(knots, t) : eval_curry_schoenberg_row(knots, t);
}

Space1D bspline_space(const KnotVector& kv, Boundary bc) {
  validate(kv);
  if (bc == Boundary::ZeroTrace && kv.num_basis() < 3)
    throw std::invalid_argument("bspline_space: zero-trace space would be empty");
  return Space1D{kv, BasisKind::BSpline, bc};
}

Space1D curry_schoenberg_space(const KnotVector& kv) {
  validate(kv);
  if (kv.degree < 1) throw std::invalid_argument("curry_schoenberg_space: degree must be >= 1");
  return Space1D{kv, BasisKind::CurrySchoenberg, Boundary::Free};
}

namespace {

// P_q(x) and P_q'(x) by the three-term recurrence.
void legendre(int q, double x, double& value, double& slope) {
  double p0 = 1.0, p1 = x;
  for (int j = 2; j <= q; ++j) {
    const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
    p0 = p1;
    p1 = p2;
  }
  value = p1;
  slope = q * (x * p1 - p0) / (x * x - 1.0);
}

}  // namespace

void gauss_legendre_unit(int q, std::vector<double>& nodes, std::vector<double>& weights) {
  if (q < 1) throw std::invalid_argument("gauss_legendre_unit: need at least one point");
  nodes.assign(q, 0.5);
  weights.assign(q, 1.0);
  if (q == 1) return;
  for (int k = 0; k < (q + 1) / 2; ++k) {
    double x = std::cos(std::numbers::pi * (k + 0.75) / (q + 0.5));
    double v = 0.0, dv = 1.0;
    for (int it = 0; it < 100; ++it) {
      legendre(q, x, v, dv);
      const double dx = v / dv;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    legendre(q, x, v, dv);
    const double w = 1.0 / ((1.0 - x * x) * dv * dv);
    nodes[k] = 0.5 * (1.0 - x);
    nodes[q - 1 - k] = 0.5 * (1.0 + x);
    weights[k] = weights[q - 1 - k] = w;
  }
  if (q % 2 == 1) nodes[q / 2] = 0.5;
}

QuadratureRule make_quadrature(const std::vector<double>& breakpoints, int q) {
  if (breakpoints.size() < 2) throw std::invalid_argument("make_quadrature: need at least one span");
  QuadratureRule rule;
  rule.points_per_span = q;
  rule.breakpoints = breakpoints;
  std::vector<double> x, w;
  gauss_legendre_unit(q, x, w);
  for (std::size_t e = 0; e + 1 < breakpoints.size(); ++e) {
    const double a = breakpoints[e], h = breakpoints[e + 1] - breakpoints[e];
    for (int k = 0; k < q; ++k) {
      rule.nodes.push_back(a + h * x[k]);
      rule.weights.push_back(h * w[k]);
    }
  }
  return rule;
}

QuadratureRule make_quadrature(const KnotVector& kv, int q) { return make_quadrature(kv.breakpoints(), q); }

namespace {

void check_breakpoints(const Space1D& a, const QuadratureRule& quad) {
  if (a.knots.breakpoints() != quad.breakpoints)
    throw std::invalid_argument("1-D assembly: space and quadrature breakpoints differ");
}

SparseMat assemble_pairing(const Space1D& rs, const Space1D& cs, const QuadratureRule& quad, bool derivative) {
  check_breakpoints(rs, quad);
  check_breakpoints(cs, quad);
  std::vector<Triplet> trips;
  for (std::size_t k = 0; k < quad.nodes.size(); ++k) {
    const BasisRow r = rs.eval(quad.nodes[k]);
    const BasisRow c = cs.eval(quad.nodes[k]);
    const auto& rv = derivative ? r.derivatives : r.values;
    const auto& cv = derivative ? c.derivatives : c.values;
    for (std::size_t a = 0; a < rv.size(); ++a)
      for (std::size_t b = 0; b < cv.size(); ++b)
        trips.emplace_back(r.first + static_cast<int>(a), c.first + static_cast<int>(b),
                           quad.weights[k] * rv[a] * cv[b]);
  }
  SparseMat m(rs.full_dim(), cs.full_dim());
  m.setFromTriplets(trips.begin(), trips.end());
  drop_small(m);
  return restrict_bc(m, rs.bc, cs.bc);
}

}  // namespace

SparseMat mass_matrix_1d(const Space1D& row_space, const Space1D& col_space, const QuadratureRule& quad) {
  return assemble_pairing(row_space, col_space, quad, false);
}

SparseMat stiffness_matrix_1d(const Space1D& space, const QuadratureRule& quad) {
  if (space.kind != BasisKind::BSpline) throw std::invalid_argument("stiffness_matrix_1d: needs a B-spline space");
  return assemble_pairing(space, space, quad, true);
}

SparseMat difference_matrix_1d(int n) {
  if (n < 2) throw std::invalid_argument("difference_matrix_1d: need n >= 2");
  std::vector<Triplet> trips;
  for (int j = 0; j + 1 < n; ++j) {
    trips.emplace_back(j, j, -1.0);
    trips.emplace_back(j, j + 1, 1.0);
  }
  SparseMat d(n - 1, n);
  d.setFromTriplets(trips.begin(), trips.end());
  d.makeCompressed();
  return d;
}

SparseMat interpolation_matrix_1d(const Space1D& space) {
  if (space.kind != BasisKind::BSpline) throw std::invalid_argument("interpolation_matrix_1d: needs a B-spline space");
  const auto g = greville_points(space.knots);
  const int n = space.knots.num_basis();
  std::vector<Triplet> trips;
  for (int k = 0; k < n; ++k) {
    const BasisRow r = eval_nonzero_row(space.knots, g[k]);
    for (std::size_t a = 0; a < r.values.size(); ++a)
      trips.emplace_back(k, r.first + static_cast<int>(a), r.values[a]);
  }
  SparseMat a(n, n);
  a.setFromTriplets(trips.begin(), trips.end());
  drop_small(a);
  return a;
}

DenseMat antiderivative_moments_1d(const Space1D& space, const QuadratureRule& quad) {
  if (space.kind != BasisKind::BSpline) throw std::invalid_argument("antiderivative_moments_1d: needs a B-spline space");
  check_breakpoints(space, quad);
  const auto g = greville_points(space.knots);
  const int n = space.knots.num_basis();
  std::vector<double> x, w;
  gauss_legendre_unit(quad.points_per_span, x, w);
  DenseMat out = DenseMat::Zero(n, n);
  const auto& u = quad.breakpoints;
  for (int k = 1; k < n; ++k) {
    // integral over [g_{k-1}, g_k], split at breakpoints, added to the running total
    out.row(k) = out.row(k - 1);
    std::vector<double> cuts{g[k - 1]};
    for (double b : u)
      if (b > g[k - 1] && b < g[k]) cuts.push_back(b);
    cuts.push_back(g[k]);
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
      const double a = cuts[c], h = cuts[c + 1] - cuts[c];
      if (h <= 0) continue;
      for (std::size_t q = 0; q < x.size(); ++q) {
        const BasisRow r = eval_nonzero_row(space.knots, a + h * x[q]);
        for (std::size_t j = 0; j < r.values.size(); ++j) out(k, r.first + static_cast<int>(j)) += h * w[q] * r.values[j];
      }
    }
  }
  return out;
}

SparseMat histopolation_matrix_1d(const Space1D& space, const QuadratureRule& quad) {
  const SparseMat a = interpolation_matrix_1d(space);
  Eigen::FullPivLU<DenseMat> lu{DenseMat(a)};
  if (!lu.isInvertible()) throw std::runtime_error("histopolation_matrix_1d: singular interpolation matrix");
  const DenseMat coeffs = lu.solve(antiderivative_moments_1d(space, quad));
  const DenseMat d = DenseMat(difference_matrix_1d(space.knots.num_basis())) * coeffs;
  return to_sparse(d);
}

SparseMat restrict_bc(const SparseMat& mat, Boundary row_bc, Boundary col_bc) {
  const Eigen::Index r0 = row_bc == Boundary::ZeroTrace ? 1 : 0;
  const Eigen::Index c0 = col_bc == Boundary::ZeroTrace ? 1 : 0;
  const Eigen::Index nr = mat.rows() - 2 * r0, nc = mat.cols() - 2 * c0;
  if (nr < 0 || nc < 0) throw std::invalid_argument("restrict_bc: matrix too small for the boundary mask");
  SparseMat out = mat.block(r0, c0, nr, nc);
  out.makeCompressed();
  return out;
}

}  // namespace igaasp
