#include "igaasp/assembly.hpp"
#include "igaasp/krylov.hpp"
#include "igaasp/manufactured.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <random>

using namespace igaasp;

namespace {

Vector unit(Eigen::Index n, Eigen::Index i) {
  Vector e = Vector::Zero(n);
  e[i] = 1.0;
  return e;
}

// tensor Gauss points on [0,1]^d with q points per element, independent of the assembler's kron path
struct PointRule {
  std::vector<std::vector<double>> x;
  std::vector<double> w;
};

PointRule tensor_points(int dim, int n_elems, int q) {
  std::vector<double> gx, gw;
  gauss_legendre_unit(q, gx, gw);
  std::vector<double> px, pw;
  for (int e = 0; e < n_elems; ++e)
    for (int i = 0; i < q; ++i) {
      px.push_back((e + gx[i]) / n_elems);
      pw.push_back(gw[i] / n_elems);
    }
  PointRule r;
  const int m = static_cast<int>(px.size());
  int total = 1;
  for (int d = 0; d < dim; ++d) total *= m;
  for (int k = 0; k < total; ++k) {
    std::vector<double> pt(dim);
    double w = 1.0;
    int rem = k;
    for (int d = dim - 1; d >= 0; --d) {
      pt[d] = px[rem % m];
      w *= pw[rem % m];
      rem /= m;
    }
    r.x.push_back(pt);
    r.w.push_back(w);
  }
  return r;
}

// mass matrix by pointwise field evaluation of every basis function
DenseMat mass_by_points(const TensorSpace& s, const PointRule& rule) {
  const Eigen::Index n = s.total_dim();
  DenseMat vals(rule.x.size() * s.num_components(), n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vector e = unit(n, i);
    for (std::size_t k = 0; k < rule.x.size(); ++k) {
      const FieldSample f = evaluate_field(s, e, rule.x[k]);
      for (int c = 0; c < s.num_components(); ++c) vals(k * s.num_components() + c, i) = f.values(c);
    }
  }
  Vector w(vals.rows());
  for (std::size_t k = 0; k < rule.x.size(); ++k)
    for (int c = 0; c < s.num_components(); ++c) w[k * s.num_components() + c] = rule.w[k];
  return vals.transpose() * w.asDiagonal() * vals;
}

double symmetric_defect(const SparseMat& a) {
  return (DenseMat(a) - DenseMat(a).transpose()).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("Grad mass integrates one to one") {
  for (int d : {2, 3}) {
    const auto s = build_space(SpaceKind::Grad, d, 2, 3, BoundaryCondition::Natural);
    CHECK(DenseMat(mass_matrix(s)).sum() == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("mass matrices agree with full-dimensional quadrature") {
  for (auto kind : {SpaceKind::Grad, SpaceKind::Curl, SpaceKind::Div, SpaceKind::L2}) {
    const auto s = build_space(kind, 2, 2, 2, BoundaryCondition::Essential);
    const DenseMat ref = mass_by_points(s, tensor_points(2, 2, 5));
    CHECK((DenseMat(mass_matrix(s)) - ref).cwiseAbs().maxCoeff() < 1e-12);
  }
  const auto c3 = build_space(SpaceKind::Curl, 3, 1, 2, BoundaryCondition::Natural);
  const DenseMat ref3 = mass_by_points(c3, tensor_points(3, 2, 3));
  CHECK((DenseMat(mass_matrix(c3)) - ref3).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("Curl mass block is a Kronecker product of 1-D masses") {
  const auto s = build_space(SpaceKind::Curl, 3, 2, 3, BoundaryCondition::Essential);
  const auto quad = default_quadrature(s);
  const auto& f = s.components[0].factors;
  const SparseMat ref = kron(mass_matrix_1d(f[0], f[0], quad[0]), mass_matrix_1d(f[1], f[1], quad[1]),
                             mass_matrix_1d(f[2], f[2], quad[2]));
  const SparseMat m = mass_matrix(s);
  const SparseMat block = m.topLeftCorner(s.component_dim(0), s.component_dim(0));
  CHECK(relative_difference(block, ref) < 1e-15);
  // off-diagonal component blocks vanish
  CHECK(m.block(0, s.component_dim(0), s.component_dim(0), s.component_dim(1)).norm() == 0.0);
}

TEST_CASE("system matrix is symmetric and matches the quadrature energy") {
  std::mt19937 gen(11);
  std::normal_distribution<double> nd;
  for (auto op : {Operator::Curl, Operator::Div})
    for (int d : {2, 3}) {
      const AssembledSystem sys = system_matrix(make_problem(op, d, 2, d == 2 ? 4 : 2, 0.3));
      CHECK(symmetric_defect(sys.A) < 1e-14);
      Vector u(sys.A.rows());
      for (auto& v : u) v = nd(gen);
      CHECK(u.dot(sys.A * u) == doctest::Approx(energy_by_quadrature(sys, u)).epsilon(1e-11));
    }
}

TEST_CASE("large tau makes A/tau approach the mass matrix") {
  const AssembledSystem sys = system_matrix(make_problem(Operator::Curl, 2, 2, 4, 1e8));
  CHECK(relative_difference(SparseMat(sys.A / 1e8), sys.mass) < 1e-6);
}

TEST_CASE("nonpositive tau is rejected") {
  CHECK_THROWS_AS(system_matrix(make_problem(Operator::Curl, 2, 1, 4, 0.0)), std::invalid_argument);
  CHECK_THROWS_AS(system_matrix(make_problem(Operator::Div, 2, 1, 4, -1.0)), std::invalid_argument);
}

TEST_CASE("H1 block matrix") {
  const auto xh = build_space(SpaceKind::VectorGrad, 2, 1, 4, BoundaryCondition::Essential);
  const SparseMat h = h1_vector_matrix(xh);
  CHECK(symmetric_defect(h) == 0.0);
  const DenseMat hd(h);
  Eigen::SelfAdjointEigenSolver<DenseMat> es(hd);
  CHECK(es.eigenvalues().minCoeff() > 0.0);
  // splitting into grad-grad and L2 parts
  const auto g = build_space(SpaceKind::Grad, 2, 1, 4, BoundaryCondition::Essential);
  const SparseMat l = scalar_laplacian_matrix(g);
  const SparseMat m = mass_matrix(g);
  const Eigen::Index n = g.total_dim();
  CHECK(relative_difference(SparseMat(h.topLeftCorner(n, n)), SparseMat(l + m)) < 1e-15);
  CHECK(relative_difference(h1_vector_matrix(xh, false), block_diagonal({l, l})) < 1e-15);
}

TEST_CASE("H1 block equals stiffness and mass Kronecker sums") {
  const auto xh = build_space(SpaceKind::VectorGrad, 2, 3, 5, BoundaryCondition::Essential);
  const auto& b = xh.components[0].factors[0];
  const auto q = make_quadrature(b.knots, 5);
  const SparseMat k = stiffness_matrix_1d(b, q), m = mass_matrix_1d(b, b, q);
  const SparseMat ref = kron(k, m) + kron(m, k) + kron(m, m);
  const Eigen::Index n = xh.component_dim(0);
  CHECK(relative_difference(SparseMat(h1_vector_matrix(xh).topLeftCorner(n, n)), ref) < 1e-14);
}

TEST_CASE("scalar Laplacian of the single interior bilinear hat") {
  const auto g = build_space(SpaceKind::Grad, 2, 1, 2, BoundaryCondition::Essential);
  const SparseMat l = scalar_laplacian_matrix(g);
  REQUIRE(l.rows() == 1);
  // 1-D factors: integral of hat'^2 = 4, integral of hat^2 = 1/3
  CHECK(l.coeff(0, 0) == doctest::Approx(8.0 / 3.0).epsilon(1e-14));
  CHECK_THROWS(scalar_laplacian_matrix(build_space(SpaceKind::Grad, 2, 1, 2, BoundaryCondition::Natural)));
}

TEST_CASE("curl stiffness has gradients in its kernel") {
  const auto g = build_space(SpaceKind::Grad, 3, 2, 4, BoundaryCondition::Essential);
  const auto c = build_space(SpaceKind::Curl, 3, 2, 4, BoundaryCondition::Essential);
  const auto d = build_space(SpaceKind::Div, 3, 2, 4, BoundaryCondition::Essential);
  const SparseMat q = curl_stiffness_matrix(c, d);
  const SparseMat qg = q * gradient_matrix(g, c);
  CHECK(qg.norm() < 1e-12 * q.norm());
  CHECK(Vector(q.diagonal()).minCoeff() > 0.0);
  CHECK(symmetric_defect(q) < 1e-15);
}

TEST_CASE("curl stiffness against pointwise quadrature") {
  const auto c = build_space(SpaceKind::Curl, 3, 1, 2, BoundaryCondition::Natural);
  const auto d = build_space(SpaceKind::Div, 3, 1, 2, BoundaryCondition::Natural);
  const DenseMat q(curl_stiffness_matrix(c, d));
  const PointRule rule = tensor_points(3, 2, 3);
  const Eigen::Index n = c.total_dim();
  DenseMat curls(rule.x.size() * 3, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vector e = unit(n, i);
    for (std::size_t k = 0; k < rule.x.size(); ++k) {
      const auto j = evaluate_field(c, e, rule.x[k]).jacobian;
      curls(3 * k, i) = j(2, 1) - j(1, 2);
      curls(3 * k + 1, i) = j(0, 2) - j(2, 0);
      curls(3 * k + 2, i) = j(1, 0) - j(0, 1);
    }
  }
  Vector w(curls.rows());
  for (std::size_t k = 0; k < rule.x.size(); ++k) w.segment<3>(3 * k).setConstant(rule.w[k]);
  const DenseMat ref = curls.transpose() * w.asDiagonal() * curls;
  CHECK((q - ref).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("right-hand side assembly") {
  const auto g = build_space(SpaceKind::Grad, 2, 3, 4, BoundaryCondition::Natural);
  const Vector one = assemble_rhs(g, [](const Vector&) { return Vector::Ones(1); });
  CHECK(one.sum() == doctest::Approx(1.0).epsilon(1e-13));
  const auto c = build_space(SpaceKind::Curl, 2, 2, 4, BoundaryCondition::Essential);
  CHECK(assemble_rhs(c, [](const Vector&) { return Vector::Zero(2); }).norm() == 0.0);
  // f_curl against a finer pointwise rule
  const ManufacturedCase mc = manufactured_2d(Operator::Curl, ManufacturedVariant::Perturbed, 1e-4);
  const Vector b = assemble_rhs(c, mc.rhs);
  const PointRule rule = tensor_points(2, 4, 8);
  Vector ref = Vector::Zero(c.total_dim());
  for (std::size_t k = 0; k < rule.x.size(); ++k) {
    const Vector f = mc.rhs(Eigen::Map<const Vector>(rule.x[k].data(), 2));
    for (Eigen::Index i = 0; i < c.total_dim(); ++i) {
      const auto v = evaluate_field(c, unit(c.total_dim(), i), rule.x[k]).values;
      ref[i] += rule.w[k] * (f[0] * v(0) + f[1] * v(1));
    }
  }
  CHECK((b - ref).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("unpreconditioned condition numbers, 2-D curl") {
  const AssembledSystem s1 = system_matrix(make_problem(Operator::Curl, 2, 1, 8, 1e4));
  const double k1 = estimate_condition_number(s1.A, nullptr, ConditionMode::Dense).kappa;
  CHECK(k1 == doctest::Approx(2.72).epsilon(0.01));
  const AssembledSystem s2 = system_matrix(make_problem(Operator::Curl, 2, 2, 16, 1e-2));
  const double k2 = estimate_condition_number(s2.A, nullptr, ConditionMode::Dense).kappa;
  CHECK(k2 == doctest::Approx(1.65e6).epsilon(0.01));
}
