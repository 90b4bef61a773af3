#include "igaasp/derham.hpp"

#include <stdexcept>

namespace igaasp {

std::string to_string(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::Grad: return "grad";
    case SpaceKind::Curl: return "curl";
    case SpaceKind::Div: return "div";
    case SpaceKind::L2: return "l2";
    case SpaceKind::VectorGrad: return "vector-grad";
  }
  return "?";
}

std::string to_string(BoundaryCondition bc) { return bc == BoundaryCondition::Essential ? "essential" : "natural"; }

SpaceKind space_kind_from_string(const std::string& s) {
  if (s == "grad") return SpaceKind::Grad;
  if (s == "curl") return SpaceKind::Curl;
  if (s == "div") return SpaceKind::Div;
  if (s == "l2") return SpaceKind::L2;
  if (s == "vector-grad") return SpaceKind::VectorGrad;
  throw std::invalid_argument("unknown space kind: " + s);
}

BoundaryCondition boundary_condition_from_string(const std::string& s) {
  if (s == "essential") return BoundaryCondition::Essential;
  if (s == "natural") return BoundaryCondition::Natural;
  throw std::invalid_argument("unknown boundary condition: " + s);
}

Eigen::Index TensorComponent::dim() const {
  Eigen::Index n = 1;
  for (const auto& f : factors) n *= f.dim();
  return n;
}

std::vector<int> TensorComponent::shape() const {
  std::vector<int> s;
  for (const auto& f : factors) s.push_back(f.dim());
  return s;
}

DofIndex TensorSpace::dof(Eigen::Index flat) const {
  if (flat < 0 || flat >= total_dim()) throw std::out_of_range("dof: flat index out of range");
  DofIndex d;
  d.flat = flat;
  while (offsets[d.component + 1] <= flat) ++d.component;
  Eigen::Index local = flat - offsets[d.component];
  const auto shape = components[d.component].shape();
  d.multi.assign(shape.size(), 0);
  for (int k = static_cast<int>(shape.size()) - 1; k >= 0; --k) {
    d.multi[k] = static_cast<int>(local % shape[k]);
    local /= shape[k];
  }
  return d;
}

Eigen::Index TensorSpace::flat_index(int component, const std::vector<int>& multi) const {
  if (component < 0 || component >= num_components()) throw std::out_of_range("flat_index: bad component");
  const auto shape = components[component].shape();
  if (multi.size() != shape.size()) throw std::invalid_argument("flat_index: multi-index length");
  Eigen::Index local = 0;
  for (std::size_t k = 0; k < shape.size(); ++k) {
    if (multi[k] < 0 || multi[k] >= shape[k]) throw std::out_of_range("flat_index: multi-index out of range");
    local = local * shape[k] + multi[k];
  }
  return offsets[component] + local;
}

TensorSpace build_space(SpaceKind kind, const std::vector<int>& degrees, const std::vector<int>& n_elems,
                        BoundaryCondition bc) {
  const int d = static_cast<int>(degrees.size());
  if (d != 2 && d != 3) throw std::invalid_argument("build_space: only 2-D and 3-D spaces are supported");
  if (static_cast<int>(n_elems.size()) != d) throw std::invalid_argument("build_space: degrees/elements length mismatch");
  std::vector<KnotVector> kv;
  for (int k = 0; k < d; ++k) {
    if (degrees[k] < 1) throw std::invalid_argument("build_space: degrees must be >= 1");
    kv.push_back(make_uniform_open_knots(n_elems[k], degrees[k]));
  }
  const Boundary bmask = bc == BoundaryCondition::Essential ? Boundary::ZeroTrace : Boundary::Free;
  auto b = [&](int k) { return bspline_space(kv[k], bmask); };
  auto dd = [&](int k) { return curry_schoenberg_space(kv[k]); };

  TensorSpace s;
  s.kind = kind;
  s.dim = d;
  s.bc = bc;
  s.degrees = degrees;
  s.elements = n_elems;
  auto add = [&](auto&& pick) {
    TensorComponent c;
    for (int k = 0; k < d; ++k) c.factors.push_back(pick(k));
    s.components.push_back(std::move(c));
  };
  switch (kind) {
    case SpaceKind::Grad: add(b); break;
    case SpaceKind::VectorGrad:
      for (int c = 0; c < d; ++c) add(b);
      break;
    case SpaceKind::L2: add(dd); break;
    case SpaceKind::Curl:
      for (int c = 0; c < d; ++c) add([&](int k) { return k == c ? dd(k) : b(k); });
      break;
    case SpaceKind::Div:
      for (int c = 0; c < d; ++c) add([&](int k) { return k == c ? b(k) : dd(k); });
      break;
  }
  s.offsets.assign(1, 0);
  for (const auto& c : s.components) s.offsets.push_back(s.offsets.back() + c.dim());
  return s;
}

TensorSpace build_space(SpaceKind kind, int dim, int degree, int n_elems, BoundaryCondition bc) {
  return build_space(kind, std::vector<int>(dim, degree), std::vector<int>(dim, n_elems), bc);
}

nlohmann::json to_json(const TensorSpace& space) {
  nlohmann::json comps = nlohmann::json::array();
  for (const auto& c : space.components) {
    nlohmann::json factors = nlohmann::json::array();
    for (const auto& f : c.factors)
      factors.push_back(f.kind == BasisKind::BSpline
                            ? (f.bc == Boundary::ZeroTrace ? "B0" : "B")
                            : "D");
    comps.push_back({{"factors", factors}, {"shape", c.shape()}, {"dim", c.dim()}});
  }
  return {{"kind", to_string(space.kind)}, {"dim", space.dim},         {"bc", to_string(space.bc)},
          {"degrees", space.degrees},     {"elements", space.elements}, {"components", comps},
          {"total_dim", space.total_dim()}};
}

SparseMat partial_derivative(const TensorComponent& from, const TensorComponent& to, int direction) {
  const std::size_t d = from.factors.size();
  if (to.factors.size() != d || direction < 0 || direction >= static_cast<int>(d))
    throw std::invalid_argument("partial_derivative: incompatible components");
  std::vector<SparseMat> factors;
  for (std::size_t k = 0; k < d; ++k) {
    const Space1D& a = from.factors[k];
    const Space1D& b = to.factors[k];
    if (static_cast<int>(k) == direction) {
      if (a.kind != BasisKind::BSpline || b.kind != BasisKind::CurrySchoenberg ||
          a.knots.knots != b.knots.knots)
        throw std::invalid_argument("partial_derivative: direction must map B to D on the same knots");
      factors.push_back(restrict_bc(difference_matrix_1d(a.full_dim()), Boundary::Free, a.bc));
    } else {
      if (!(a == b)) throw std::invalid_argument("partial_derivative: factors differ off the derivative direction");
      factors.push_back(identity(a.dim()));
    }
  }
  return kron(factors);
}

namespace {

using Grid = std::vector<std::vector<std::optional<SparseMat>>>;

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

void require_compatible(const TensorSpace& a, const TensorSpace& b) {
  require(a.dim == b.dim && a.degrees == b.degrees && a.elements == b.elements && a.bc == b.bc,
          "differential matrix: spaces differ in degree, elements or bc");
}

}  // namespace

SparseMat gradient_matrix(const TensorSpace& grad, const TensorSpace& curl) {
  require(grad.kind == SpaceKind::Grad && curl.kind == SpaceKind::Curl, "gradient_matrix: expects Grad -> Curl");
  require_compatible(grad, curl);
  Grid g(grad.dim, std::vector<std::optional<SparseMat>>(1));
  for (int c = 0; c < grad.dim; ++c) g[c][0] = partial_derivative(grad.components[0], curl.components[c], c);
  return block_matrix(g);
}

SparseMat curl_matrix(const TensorSpace& curl, const TensorSpace& div) {
  require(curl.kind == SpaceKind::Curl && div.kind == SpaceKind::Div && curl.dim == 3,
          "curl_matrix: expects 3-D Curl -> Div");
  require_compatible(curl, div);
  Grid g(3, std::vector<std::optional<SparseMat>>(3));
  // (curl u)_c = d_{c+1} u_{c+2} - d_{c+2} u_{c+1}, indices mod 3
  for (int c = 0; c < 3; ++c) {
    const int a = (c + 1) % 3, b = (c + 2) % 3;
    g[c][b] = partial_derivative(curl.components[b], div.components[c], a);
    g[c][a] = SparseMat(-partial_derivative(curl.components[a], div.components[c], b));
  }
  return block_matrix(g);
}

SparseMat divergence_matrix(const TensorSpace& div, const TensorSpace& l2) {
  require(div.kind == SpaceKind::Div && l2.kind == SpaceKind::L2, "divergence_matrix: expects Div -> L2");
  require_compatible(div, l2);
  Grid g(1, std::vector<std::optional<SparseMat>>(div.dim));
  for (int c = 0; c < div.dim; ++c) g[0][c] = partial_derivative(div.components[c], l2.components[0], c);
  return block_matrix(g);
}

SparseMat scalar_curl_matrix(const TensorSpace& curl, const TensorSpace& l2) {
  require(curl.kind == SpaceKind::Curl && l2.kind == SpaceKind::L2 && curl.dim == 2,
          "scalar_curl_matrix: expects 2-D Curl -> L2");
  require_compatible(curl, l2);
  Grid g(1, std::vector<std::optional<SparseMat>>(2));
  g[0][0] = partial_derivative(curl.components[0], l2.components[0], 1);
  g[0][1] = SparseMat(-partial_derivative(curl.components[1], l2.components[0], 0));
  return block_matrix(g);
}

SparseMat vector_curl_matrix(const TensorSpace& grad, const TensorSpace& div) {
  require(grad.kind == SpaceKind::Grad && div.kind == SpaceKind::Div && grad.dim == 2,
          "vector_curl_matrix: expects 2-D Grad -> Div");
  require_compatible(grad, div);
  Grid g(2, std::vector<std::optional<SparseMat>>(1));
  g[0][0] = partial_derivative(grad.components[0], div.components[0], 1);
  g[1][0] = SparseMat(-partial_derivative(grad.components[0], div.components[1], 0));
  return block_matrix(g);
}

SparseMat differential_matrix(const TensorSpace& from, const TensorSpace& to) {
  if (from.kind == SpaceKind::Grad && to.kind == SpaceKind::Curl) return gradient_matrix(from, to);
  if (from.kind == SpaceKind::Grad && to.kind == SpaceKind::Div) return vector_curl_matrix(from, to);
  if (from.kind == SpaceKind::Curl && to.kind == SpaceKind::Div) return curl_matrix(from, to);
  if (from.kind == SpaceKind::Curl && to.kind == SpaceKind::L2) return scalar_curl_matrix(from, to);
  if (from.kind == SpaceKind::Div && to.kind == SpaceKind::L2) return divergence_matrix(from, to);
  throw std::invalid_argument("differential_matrix: no operator from " + to_string(from.kind) + " to " +
                              to_string(to.kind));
}

FieldSample evaluate_field(const TensorSpace& space, const Vector& coeffs, const std::vector<double>& x) {
  if (coeffs.size() != space.total_dim()) throw std::invalid_argument("evaluate_field: coefficient length");
  if (static_cast<int>(x.size()) != space.dim) throw std::invalid_argument("evaluate_field: point dimension");
  const int d = space.dim;
  FieldSample out;
  out.values = Eigen::MatrixXd::Zero(space.num_components(), 1);
  out.jacobian = Eigen::MatrixXd::Zero(space.num_components(), d);
  for (int c = 0; c < space.num_components(); ++c) {
    const auto& comp = space.components[c];
    std::vector<BasisRow> rows;
    std::vector<int> shift;
    for (int k = 0; k < d; ++k) {
      rows.push_back(comp.factors[k].eval(x[k]));
      shift.push_back(comp.factors[k].bc == Boundary::ZeroTrace ? 1 : 0);
    }
    std::vector<int> loc(d, 0);
    while (true) {
      std::vector<int> multi(d);
      bool inside = true;
      for (int k = 0; k < d; ++k) {
        multi[k] = rows[k].first + loc[k] - shift[k];
        if (multi[k] < 0 || multi[k] >= comp.factors[k].dim()) inside = false;
      }
      if (inside) {
        const double a = coeffs[space.flat_index(c, multi)];
        double v = 1.0;
        for (int k = 0; k < d; ++k) v *= rows[k].values[loc[k]];
        out.values(c, 0) += a * v;
        for (int j = 0; j < d; ++j) {
          double g = 1.0;
          for (int k = 0; k < d; ++k) g *= (k == j ? rows[k].derivatives[loc[k]] : rows[k].values[loc[k]]);
          out.jacobian(c, j) += a * g;
        }
      }
      int k = d - 1;
      while (k >= 0 && ++loc[k] == static_cast<int>(rows[k].values.size())) loc[k--] = 0;
      if (k < 0) break;
    }
  }
  return out;
}

}  // namespace igaasp
