#include "igaasp/precond.hpp"

#include <Eigen/IterativeLinearSolvers>

namespace igaasp {

std::string to_string(SmootherKind k) { return k == SmootherKind::Jacobi ? "jacobi" : "gs"; }
std::string to_string(InnerSolverKind k) { return k == InnerSolverKind::Direct ? "direct" : "cg"; }
std::string to_string(CurlSmootherVariant k) { return k == CurlSmootherVariant::DiagQcurl ? "diag" : "sgs"; }

SmootherKind smoother_kind_from_string(const std::string& s) {
  if (s == "jacobi" || s == "j") return SmootherKind::Jacobi;
  if (s == "gs" || s == "sgs") return SmootherKind::SymmetricGaussSeidel;
  throw std::invalid_argument("unknown smoother: " + s);
}

InnerSolverKind inner_solver_kind_from_string(const std::string& s) {
  if (s == "direct") return InnerSolverKind::Direct;
  if (s == "cg") return InnerSolverKind::CG;
  throw std::invalid_argument("unknown inner solver: " + s);
}

CurlSmootherVariant curl_smoother_variant_from_string(const std::string& s) {
  if (s == "diag") return CurlSmootherVariant::DiagQcurl;
  if (s == "sgs") return CurlSmootherVariant::SgsQcurl;
  throw std::invalid_argument("unknown curl smoother variant: " + s);
}

Smoother::Smoother(SmootherKind kind, SparseMat a) : kind_(kind), a_(std::move(a)) {
  if (a_.rows() != a_.cols()) throw std::invalid_argument("smoother: matrix must be square");
  inv_diag_ = a_.diagonal();
  for (Eigen::Index i = 0; i < inv_diag_.size(); ++i) {
    if (inv_diag_[i] == 0.0) throw std::invalid_argument("smoother: zero diagonal entry at row " + std::to_string(i));
    inv_diag_[i] = 1.0 / inv_diag_[i];
  }
}

Vector Smoother::apply(const Vector& r) const {
  if (kind_ == SmootherKind::Jacobi) return inv_diag_.cwiseProduct(r);
  // backward sweep, then forward sweep on the remaining defect
  Vector x = a_.triangularView<Eigen::Upper>().solve(r);
  Vector d = r - a_ * x;
  x += a_.triangularView<Eigen::Lower>().solve(d);
  return x;
}

Vector apply_smoother_inverse(SmootherKind kind, const SparseMat& a, const Vector& r) {
  return Smoother(kind, a).apply(r);
}

InnerSolver::InnerSolver(std::vector<SparseMat> blocks, InnerSolverConfig cfg, std::string name)
    : blocks_(std::move(blocks)), cfg_(cfg), name_(std::move(name)) {
  offsets_.assign(1, 0);
  std::vector<std::uint64_t> sums;
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    offsets_.push_back(offsets_.back() + blocks_[i].rows());
    const std::uint64_t h = checksum(blocks_[i]);
    std::size_t j = 0;
    while (j < i && !(sums[j] == h && blocks_[j].rows() == blocks_[i].rows())) ++j;
    sums.push_back(h);
    if (j < i) {
      factor_of_.push_back(factor_of_[j]);
      continue;
    }
    factor_of_.push_back(cfg_.kind == InnerSolverKind::Direct ? ldlt_.size() : i);
    if (cfg_.kind != InnerSolverKind::Direct) continue;
    auto f = std::make_unique<Eigen::SimplicialLDLT<ColMat>>(ColMat(blocks_[i]));
    if (f->info() != Eigen::Success) throw InnerSolveError(name_ + ": factorization failed");
    if ((f->vectorD().array() <= 0).any()) throw InnerSolveError(name_ + ": matrix is not positive definite");
    ldlt_.push_back(std::move(f));
  }
}

InnerSolver::InnerSolver(const SparseMat& matrix, InnerSolverConfig cfg, std::string name)
    : InnerSolver(std::vector<SparseMat>{matrix}, cfg, std::move(name)) {}

Vector InnerSolver::solve(const Vector& b) const {
  if (b.size() != size()) throw std::invalid_argument(name_ + ": rhs size mismatch");
  Vector x(b.size());
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    const Eigen::Index o = offsets_[i], m = blocks_[i].rows();
    const Vector rhs = b.segment(o, m);
    if (cfg_.kind == InnerSolverKind::Direct) {
      x.segment(o, m) = ldlt_[factor_of_[i]]->solve(rhs);
    } else {
      Eigen::ConjugateGradient<SparseMat, Eigen::Lower | Eigen::Upper> cg(blocks_[factor_of_[i]]);
      cg.setTolerance(cfg_.tol);
      cg.setMaxIterations(cfg_.max_iter);
      x.segment(o, m) = cg.solve(rhs);
      if (cg.info() != Eigen::Success)
        throw InnerSolveError(name_ + ": inner CG did not reach tolerance " + std::to_string(cfg_.tol));
    }
  }
  return x;
}

nlohmann::json to_json(const AspConfig& cfg, double tau) {
  return {{"smoother", to_string(cfg.smoother)},
          {"inner_solver", {{"kind", to_string(cfg.inner.kind)}, {"tol", cfg.inner.tol}, {"max_iter", cfg.inner.max_iter}}},
          {"curl_smoother_variant", to_string(cfg.curl_variant)},
          {"tau", tau}};
}

AspConfig asp_config_from_json(const nlohmann::json& j) {
  AspConfig cfg;
  if (j.contains("smoother")) cfg.smoother = smoother_kind_from_string(j.at("smoother").get<std::string>());
  if (j.contains("curl_smoother_variant"))
    cfg.curl_variant = curl_smoother_variant_from_string(j.at("curl_smoother_variant").get<std::string>());
  if (j.contains("inner_solver")) {
    const auto& in = j.at("inner_solver");
    if (in.is_string()) {
      cfg.inner.kind = inner_solver_kind_from_string(in.get<std::string>());
    } else {
      cfg.inner.kind = inner_solver_kind_from_string(in.value("kind", std::string("direct")));
      cfg.inner.tol = in.value("tol", cfg.inner.tol);
      cfg.inner.max_iter = in.value("max_iter", cfg.inner.max_iter);
    }
  }
  return cfg;
}

namespace {

std::vector<SparseMat> diagonal_blocks(const SparseMat& m, const TensorSpace& space) {
  std::vector<SparseMat> out;
  for (int c = 0; c < space.num_components(); ++c) {
    SparseMat b = m.block(space.offsets[c], space.offsets[c], space.component_dim(c), space.component_dim(c));
    b.makeCompressed();
    out.push_back(std::move(b));
  }
  return out;
}

}  // namespace

AspPreconditioner::AspPreconditioner(const AssembledSystem& sys, AspConfig cfg)
    : op_(sys.spec.op),
      dim_(sys.spec.dim),
      tau_(sys.spec.tau),
      n_(sys.A.rows()),
      cfg_(cfg),
      smoother_(cfg.smoother, sys.A),
      transfers_(build_transfer_set(sys.spec, cfg.aux_boundary)) {
  if (!(tau_ > 0)) throw std::invalid_argument("asp: tau must be positive");
  const TensorSpace& xh = transfers_.xh;
  const SparseMat htm = h1_vector_matrix(xh, cfg_.h_includes_mass) + tau_ * mass_matrix(xh);
  h_tau_m_ = std::make_unique<InnerSolver>(diagonal_blocks(htm, xh), cfg_.inner, "term 2: (H + tau M)^{-1}");
  if (op_ == Operator::Curl || dim_ == 2) {
    lap_ = std::make_unique<InnerSolver>(scalar_laplacian_matrix(transfers_.potential_space), cfg_.inner,
                                         "term 3: L^{-1}");
    return;
  }
  const TensorSpace div = build_space(SpaceKind::Div, sys.spec.degrees, sys.spec.elements, sys.spec.bc);
  q_curl_ = curl_stiffness_matrix(transfers_.potential_space, div);
  if (cfg_.curl_variant == CurlSmootherVariant::DiagQcurl) {
    q_curl_inv_diag_ = q_curl_.diagonal();
    for (Eigen::Index i = 0; i < q_curl_inv_diag_.size(); ++i) {
      if (!(q_curl_inv_diag_[i] > 0))
        throw std::invalid_argument("asp: Q_curl has a non-positive diagonal entry (curl-free basis function)");
      q_curl_inv_diag_[i] = 1.0 / q_curl_inv_diag_[i];
    }
  } else {
    q_curl_sgs_ = std::make_unique<Smoother>(SmootherKind::SymmetricGaussSeidel, q_curl_);
  }
  const TensorSpace& xc = *transfers_.xh_curl;
  h_ = std::make_unique<InnerSolver>(diagonal_blocks(h1_vector_matrix(xc, cfg_.h_includes_mass), xc), cfg_.inner,
                                     "term 4: H^{-1}");
}

Vector AspPreconditioner::apply_correction(const Vector& r) const {
  if (r.size() != n_) throw std::invalid_argument("asp: vector size mismatch");
  const SparseMat& p = transfers_.p_main;
  const SparseMat& pot = transfers_.potential;
  Vector z = p * h_tau_m_->solve(p.transpose() * r);
  const Vector pr = pot.transpose() * r;
  if (lap_) {
    z += (1.0 / tau_) * (pot * lap_->solve(pr));
    return z;
  }
  const Vector t3 = cfg_.curl_variant == CurlSmootherVariant::DiagQcurl ? Vector(q_curl_inv_diag_.cwiseProduct(pr))
                                                                        : q_curl_sgs_->apply(pr);
  const SparseMat& pc = *transfers_.p_curl;
  const Vector t4 = pc * h_->solve(pc.transpose() * pr);
  z += (1.0 / tau_) * (pot * (t3 + t4));
  return z;
}

Vector AspPreconditioner::apply(const Vector& r) const { return smoother_.apply(r) + apply_correction(r); }

LinearMap AspPreconditioner::as_map() const {
  LinearMap m;
  m.rows = m.cols = n_;
  m.apply_fn = [this](const Vector& x, Vector& y) { y = apply(x); };
  m.symmetric = m.positive_definite = true;
  return m;
}

LinearMap AspPreconditioner::smoother_map() const {
  LinearMap m;
  m.rows = m.cols = n_;
  m.apply_fn = [this](const Vector& x, Vector& y) { y = smoother_.apply(x); };
  m.symmetric = m.positive_definite = true;
  return m;
}

LinearMap AspPreconditioner::correction_map() const {
  LinearMap m;
  m.rows = m.cols = n_;
  m.apply_fn = [this](const Vector& x, Vector& y) { y = apply_correction(x); };
  m.symmetric = true;
  return m;
}

}  // namespace igaasp
