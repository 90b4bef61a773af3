#include "igaasp/assembly.hpp"

#include <stdexcept>

namespace igaasp {

std::string to_string(Operator op) { return op == Operator::Curl ? "curl" : "div"; }

Operator operator_from_string(const std::string& s) {
  if (s == "curl") return Operator::Curl;
  if (s == "div") return Operator::Div;
  throw std::invalid_argument("unknown operator: " + s);
}

std::vector<QuadratureRule> default_quadrature(const TensorSpace& space) {
  std::vector<QuadratureRule> q;
  for (int k = 0; k < space.dim; ++k)
    q.push_back(make_quadrature(space.components[0].factors[k].knots, default_quadrature_order(space.degrees[k])));
  return q;
}

namespace {

SparseMat component_mass(const TensorComponent& c, const std::vector<QuadratureRule>& quad) {
  std::vector<SparseMat> f;
  for (std::size_t k = 0; k < c.factors.size(); ++k) f.push_back(mass_matrix_1d(c.factors[k], c.factors[k], quad[k]));
  return kron(f);
}

// sum_k K_k (x) M_rest, optionally plus M (x) ... (x) M
SparseMat scalar_h1_block(const TensorComponent& c, const std::vector<QuadratureRule>& quad, bool with_mass) {
  const std::size_t d = c.factors.size();
  std::vector<SparseMat> m, k;
  for (std::size_t j = 0; j < d; ++j) {
    m.push_back(mass_matrix_1d(c.factors[j], c.factors[j], quad[j]));
    k.push_back(stiffness_matrix_1d(c.factors[j], quad[j]));
  }
  SparseMat out = with_mass ? kron(m) : zeros(c.dim(), c.dim());
  for (std::size_t j = 0; j < d; ++j) {
    auto f = m;
    f[j] = k[j];
    out += kron(f);
  }
  drop_small(out);
  return out;
}

void require_quad(const TensorSpace& s, const std::vector<QuadratureRule>& quad) {
  if (static_cast<int>(quad.size()) != s.dim) throw std::invalid_argument("assembly: one quadrature rule per direction");
}

}  // namespace

SparseMat mass_matrix(const TensorSpace& space, const std::vector<QuadratureRule>& quad) {
  require_quad(space, quad);
  std::vector<SparseMat> blocks;
  for (const auto& c : space.components) blocks.push_back(component_mass(c, quad));
  return block_diagonal(blocks);
}

SparseMat mass_matrix(const TensorSpace& space) { return mass_matrix(space, default_quadrature(space)); }

SparseMat h1_vector_matrix(const TensorSpace& xh, const std::vector<QuadratureRule>& quad, bool include_mass) {
  if (xh.kind != SpaceKind::VectorGrad && xh.kind != SpaceKind::Grad)
    throw std::invalid_argument("h1_vector_matrix: expects a Grad or VectorGrad space");
  require_quad(xh, quad);
  std::vector<SparseMat> blocks;
  for (const auto& c : xh.components) blocks.push_back(scalar_h1_block(c, quad, include_mass));
  return block_diagonal(blocks);
}

SparseMat h1_vector_matrix(const TensorSpace& xh, bool include_mass) {
  return h1_vector_matrix(xh, default_quadrature(xh), include_mass);
}

SparseMat scalar_laplacian_matrix(const TensorSpace& grad, const std::vector<QuadratureRule>& quad) {
  if (grad.kind != SpaceKind::Grad) throw std::invalid_argument("scalar_laplacian_matrix: expects a Grad space");
  if (grad.bc != BoundaryCondition::Essential)
    throw std::invalid_argument("scalar_laplacian_matrix: natural bc gives a singular L (constants); unsupported");
  require_quad(grad, quad);
  return scalar_h1_block(grad.components[0], quad, false);
}

SparseMat scalar_laplacian_matrix(const TensorSpace& grad) {
  return scalar_laplacian_matrix(grad, default_quadrature(grad));
}

SparseMat curl_stiffness_matrix(const TensorSpace& curl, const TensorSpace& div) {
  if (curl.dim != 3) throw std::invalid_argument("curl_stiffness_matrix: 3-D only");
  const SparseMat c = curl_matrix(curl, div);
  SparseMat q = SparseMat(c.transpose()) * mass_matrix(div) * c;
  drop_small(q);
  return q;
}

Vector assemble_rhs(const TensorSpace& space, const VectorField& f, const std::vector<QuadratureRule>& quad) {
  require_quad(space, quad);
  Vector b = Vector::Zero(space.total_dim());
  if (!f) return b;
  const int d = space.dim;
  const int nc = space.num_components();
  // rows[c][k][q]: nonzero functions of factor k of component c at node q of direction k
  std::vector<std::vector<std::vector<BasisRow>>> rows(nc, std::vector<std::vector<BasisRow>>(d));
  for (int c = 0; c < nc; ++c)
    for (int k = 0; k < d; ++k)
      for (double t : quad[k].nodes) rows[c][k].push_back(space.components[c].factors[k].eval(t));
  std::vector<int> qi(d, 0);
  Vector x(d);
  while (true) {
    double w = 1.0;
    for (int k = 0; k < d; ++k) {
      x[k] = quad[k].nodes[qi[k]];
      w *= quad[k].weights[qi[k]];
    }
    const Vector fx = f(x);
    if (fx.size() != nc) throw std::invalid_argument("assemble_rhs: field has wrong number of components");
    for (int c = 0; c < nc; ++c) {
      if (fx[c] == 0.0) continue;
      const auto& comp = space.components[c];
      std::vector<const BasisRow*> r(d);
      std::vector<int> shift(d);
      for (int k = 0; k < d; ++k) {
        r[k] = &rows[c][k][qi[k]];
        shift[k] = comp.factors[k].bc == Boundary::ZeroTrace ? 1 : 0;
      }
      std::vector<int> loc(d, 0), multi(d);
      while (true) {
        bool inside = true;
        double v = w * fx[c];
        for (int k = 0; k < d; ++k) {
          multi[k] = r[k]->first + loc[k] - shift[k];
          if (multi[k] < 0 || multi[k] >= comp.factors[k].dim()) inside = false;
          v *= r[k]->values[loc[k]];
        }
        if (inside) b[space.flat_index(c, multi)] += v;
        int k = d - 1;
        while (k >= 0 && ++loc[k] == static_cast<int>(r[k]->values.size())) loc[k--] = 0;
        if (k < 0) break;
      }
    }
    int k = d - 1;
    while (k >= 0 && ++qi[k] == static_cast<int>(quad[k].nodes.size())) qi[k--] = 0;
    if (k < 0) break;
  }
  return b;
}

Vector assemble_rhs(const TensorSpace& space, const VectorField& f) {
  return assemble_rhs(space, f, default_quadrature(space));
}

ProblemSpec make_problem(Operator op, int dim, int degree, int n_elems, double tau, VectorField rhs,
                         BoundaryCondition bc) {
  ProblemSpec s;
  s.op = op;
  s.dim = dim;
  s.degrees.assign(dim, degree);
  s.elements.assign(dim, n_elems);
  s.tau = tau;
  s.bc = bc;
  s.rhs = std::move(rhs);
  return s;
}

std::pair<SpaceKind, SpaceKind> problem_spaces(Operator op, int dim) {
  if (op == Operator::Div) return {SpaceKind::Div, SpaceKind::L2};
  return {SpaceKind::Curl, dim == 2 ? SpaceKind::L2 : SpaceKind::Div};
}

AssembledSystem system_matrix(const ProblemSpec& spec) {
  if (!(spec.tau > 0)) throw std::invalid_argument("system_matrix: tau must be positive");
  AssembledSystem sys;
  sys.spec = spec;
  const auto [kind, range_kind] = problem_spaces(spec.op, spec.dim);
  sys.space = build_space(kind, spec.degrees, spec.elements, spec.bc);
  sys.range_space = build_space(range_kind, spec.degrees, spec.elements, spec.bc);
  const auto quad = default_quadrature(sys.space);
  sys.mass = mass_matrix(sys.space, quad);
  sys.range_mass = mass_matrix(sys.range_space, quad);
  sys.d_mat = differential_matrix(sys.space, sys.range_space);
  sys.A = SparseMat(sys.d_mat.transpose()) * sys.range_mass * sys.d_mat;
  sys.A += spec.tau * sys.mass;
  drop_small(sys.A);
  sys.b = assemble_rhs(sys.space, spec.rhs, quad);
  return sys;
}

double energy_by_quadrature(const AssembledSystem& sys, const Vector& u) {
  const int d = sys.space.dim;
  std::vector<QuadratureRule> quad;
  for (int k = 0; k < d; ++k) quad.push_back(make_quadrature(sys.space.components[0].factors[k].knots, sys.spec.degrees[k] + 3));
  std::vector<int> qi(d, 0);
  std::vector<double> x(d);
  double total = 0.0;
  while (true) {
    double w = 1.0;
    for (int k = 0; k < d; ++k) {
      x[k] = quad[k].nodes[qi[k]];
      w *= quad[k].weights[qi[k]];
    }
    const FieldSample s = evaluate_field(sys.space, u, x);
    const auto& j = s.jacobian;
    double du2 = 0.0;
    if (sys.spec.op == Operator::Div) {
      double div = 0.0;
      for (int k = 0; k < d; ++k) div += j(k, k);
      du2 = div * div;
    } else if (d == 2) {
      const double c = j(0, 1) - j(1, 0);
      du2 = c * c;
    } else {
      const double c0 = j(2, 1) - j(1, 2), c1 = j(0, 2) - j(2, 0), c2 = j(1, 0) - j(0, 1);
      du2 = c0 * c0 + c1 * c1 + c2 * c2;
    }
    total += w * (du2 + sys.spec.tau * s.values.squaredNorm());
    int k = d - 1;
    while (k >= 0 && ++qi[k] == static_cast<int>(quad[k].nodes.size())) qi[k--] = 0;
    if (k < 0) break;
  }
  return total;
}

}  // namespace igaasp
