#include "igaasp/transfer.hpp"

#include <stdexcept>

namespace igaasp {

namespace {

// 1-D factor from a B factor of X_h to the matching factor of the target.
SparseMat transfer_factor(const Space1D& from, const Space1D& to, const QuadratureRule& quad) {
  if (from.kind != BasisKind::BSpline || from.knots.knots != to.knots.knots)
    throw std::invalid_argument("transfer: incompatible 1-D factors");
  if (to.kind == BasisKind::BSpline) {
    if (to.bc != from.bc) throw std::invalid_argument("transfer: boundary masks differ");
    return identity(from.dim());
  }
  // Q_{h,0}: columns of the unconstrained histopolation matrix restricted to interior indices
  const SparseMat q = histopolation_matrix_1d(bspline_space(from.knots), quad);
  return restrict_bc(q, Boundary::Free, from.bc);
}

SparseMat build_transfer(const TensorSpace& xh, const TensorSpace& target) {
  if (xh.kind != SpaceKind::VectorGrad) throw std::invalid_argument("transfer: source must be a VectorGrad space");
  if (xh.dim != target.dim || xh.degrees != target.degrees || xh.elements != target.elements || xh.bc != target.bc ||
      xh.num_components() != target.num_components())
    throw std::invalid_argument("transfer: incompatible spaces");
  const auto quad = default_quadrature(xh);
  std::vector<SparseMat> blocks;
  for (int c = 0; c < target.num_components(); ++c) {
    std::vector<SparseMat> f;
    for (int k = 0; k < xh.dim; ++k)
      f.push_back(transfer_factor(xh.components[c].factors[k], target.components[c].factors[k], quad[k]));
    blocks.push_back(kron(f));
  }
  return block_diagonal(blocks);
}

// Applies T along axis k of a row-major tensor.
Vector mode_product(const Vector& data, std::vector<int>& shape, int k, const DenseMat& t) {
  Eigen::Index outer = 1, inner = 1;
  for (int j = 0; j < k; ++j) outer *= shape[j];
  for (std::size_t j = k + 1; j < shape.size(); ++j) inner *= shape[j];
  const int n = shape[k], m = static_cast<int>(t.rows());
  if (t.cols() != n) throw std::logic_error("mode_product: shape mismatch");
  Vector out = Vector::Zero(outer * m * inner);
  for (Eigen::Index o = 0; o < outer; ++o) {
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> in(
        data.data() + o * n * inner, n, inner);
    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> res(
        out.data() + o * m * inner, m, inner);
    res.noalias() = t * in;
  }
  shape[k] = m;
  return out;
}

struct Functional {
  std::vector<double> x, w;
};

// Point evaluations at Greville points (B) or integrals over successive
// Greville intervals (D), plus the matrix turning them into coefficients.
void direction_functionals(const Space1D& f, std::vector<Functional>& fun, DenseMat& post) {
  const KnotVector& kv = f.knots;
  const Space1D bs = bspline_space(kv);
  const auto g = greville_points(kv);
  const int n = kv.num_basis();
  const DenseMat ainv = DenseMat(interpolation_matrix_1d(bs)).fullPivLu().inverse();
  fun.assign(n, {});
  if (f.kind == BasisKind::BSpline) {
    for (int i = 0; i < n; ++i) fun[i] = {{g[i]}, {1.0}};
    post = ainv;
    return;
  }
  std::vector<double> qx, qw;
  gauss_legendre_unit(kv.degree + 6, qx, qw);
  const auto u = kv.breakpoints();
  for (int k = 1; k < n; ++k) {
    std::vector<double> cuts{g[k - 1]};
    for (double b : u)
      if (b > g[k - 1] && b < g[k]) cuts.push_back(b);
    cuts.push_back(g[k]);
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
      const double a = cuts[c], h = cuts[c + 1] - cuts[c];
      if (h <= 0) continue;
      for (std::size_t q = 0; q < qx.size(); ++q) {
        fun[k].x.push_back(a + h * qx[q]);
        fun[k].w.push_back(h * qw[q]);
      }
    }
  }
  const DenseMat cumsum = DenseMat::Ones(n, n).triangularView<Eigen::Lower>();
  post = DenseMat(difference_matrix_1d(n)) * ainv * cumsum;
}

}  // namespace

std::string to_string(AuxiliaryBoundary b) { return b == AuxiliaryBoundary::Full ? "full" : "match-target"; }

AuxiliaryBoundary auxiliary_boundary_from_string(const std::string& s) {
  if (s == "full") return AuxiliaryBoundary::Full;
  if (s == "match-target") return AuxiliaryBoundary::MatchTarget;
  throw std::invalid_argument("unknown auxiliary boundary mode: " + s);
}

TensorSpace build_auxiliary_space(const TensorSpace& target, AuxiliaryBoundary mode) {
  TensorSpace xh = build_space(SpaceKind::VectorGrad, target.degrees, target.elements, target.bc);
  if (mode == AuxiliaryBoundary::Full || target.bc == BoundaryCondition::Natural) return xh;
  if (target.num_components() != xh.num_components())
    throw std::invalid_argument("build_auxiliary_space: target must be a vector space");
  for (int c = 0; c < xh.num_components(); ++c)
    for (int k = 0; k < xh.dim; ++k)
      if (target.components[c].factors[k].kind == BasisKind::CurrySchoenberg)
        xh.components[c].factors[k].bc = Boundary::Free;
  xh.offsets.assign(1, 0);
  for (const auto& c : xh.components) xh.offsets.push_back(xh.offsets.back() + c.dim());
  return xh;
}

SparseMat build_p_curl(const TensorSpace& xh, const TensorSpace& curl) {
  if (curl.kind != SpaceKind::Curl) throw std::invalid_argument("build_p_curl: target must be a Curl space");
  return build_transfer(xh, curl);
}

SparseMat build_p_div(const TensorSpace& xh, const TensorSpace& div) {
  if (div.kind != SpaceKind::Div) throw std::invalid_argument("build_p_div: target must be a Div space");
  return build_transfer(xh, div);
}

TransferSet build_transfer_set(const ProblemSpec& spec, AuxiliaryBoundary mode) {
  if (spec.bc != BoundaryCondition::Essential)
    throw std::invalid_argument("build_transfer_set: only essential bc is supported");
  if (spec.dim != 2 && spec.dim != 3) throw std::invalid_argument("build_transfer_set: dim must be 2 or 3");
  TransferSet t;
  const TensorSpace grad = build_space(SpaceKind::Grad, spec.degrees, spec.elements, spec.bc);
  const TensorSpace curl = build_space(SpaceKind::Curl, spec.degrees, spec.elements, spec.bc);
  if (spec.op == Operator::Curl) {
    t.xh = build_auxiliary_space(curl, mode);
    t.potential_space = grad;
    t.p_main = build_p_curl(t.xh, curl);
    t.potential = gradient_matrix(grad, curl);
    return t;
  }
  const TensorSpace div = build_space(SpaceKind::Div, spec.degrees, spec.elements, spec.bc);
  t.xh = build_auxiliary_space(div, mode);
  t.p_main = build_p_div(t.xh, div);
  if (spec.dim == 2) {
    t.potential_space = grad;
    t.potential = vector_curl_matrix(grad, div);
  } else {
    t.potential_space = curl;
    t.potential = curl_matrix(curl, div);
    t.xh_curl = build_auxiliary_space(curl, mode);
    t.p_curl = build_p_curl(*t.xh_curl, curl);
  }
  return t;
}

Vector quasi_interpolate(const TensorSpace& space, const VectorField& f) {
  const int d = space.dim;
  Vector out(space.total_dim());
  for (int c = 0; c < space.num_components(); ++c) {
    const auto& comp = space.components[c];
    std::vector<std::vector<Functional>> fun(d);
    std::vector<DenseMat> post(d);
    std::vector<int> shape(d);
    for (int k = 0; k < d; ++k) {
      direction_functionals(comp.factors[k], fun[k], post[k]);
      shape[k] = static_cast<int>(fun[k].size());
    }
    Eigen::Index total = 1;
    for (int s : shape) total *= s;
    Vector values = Vector::Zero(total);
    Vector x(d);
    std::vector<int> idx(d, 0);
    for (Eigen::Index flat = 0; flat < total; ++flat) {
      // accumulate the tensor functional over all point combinations
      std::vector<int> q(d, 0);
      bool empty = false;
      for (int k = 0; k < d; ++k) empty = empty || fun[k][idx[k]].x.empty();
      double acc = 0.0;
      while (!empty) {
        double w = 1.0;
        for (int k = 0; k < d; ++k) {
          x[k] = fun[k][idx[k]].x[q[k]];
          w *= fun[k][idx[k]].w[q[k]];
        }
        acc += w * f(x)[c];
        int k = d - 1;
        while (k >= 0 && ++q[k] == static_cast<int>(fun[k][idx[k]].x.size())) q[k--] = 0;
        if (k < 0) break;
      }
      values[flat] = acc;
      int k = d - 1;
      while (k >= 0 && ++idx[k] == shape[k]) idx[k--] = 0;
    }
    for (int k = 0; k < d; ++k) values = mode_product(values, shape, k, post[k]);
    // drop boundary indices of zero-trace factors
    for (int k = 0; k < d; ++k) {
      if (comp.factors[k].bc != Boundary::ZeroTrace) continue;
      const int n = shape[k];
      DenseMat sel = DenseMat::Zero(n - 2, n);
      sel.block(0, 1, n - 2, n - 2).setIdentity();
      values = mode_product(values, shape, k, sel);
    }
    out.segment(space.offsets[c], space.component_dim(c)) = values;
  }
  return out;
}

}  // namespace igaasp
