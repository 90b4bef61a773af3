#include "igaasp/krylov.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <chrono>
#include <functional>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>

namespace igaasp {

nlohmann::json to_json(const SolveReport& r) {
  nlohmann::json j = {{"iterations", r.iterations}, {"converged", r.converged}, {"breakdown", r.breakdown},
                      {"max_iter", r.max_iter},     {"tol", r.tol},             {"wall_ms", r.wall_ms},
                      {"residuals", r.residuals}};
  if (r.lambda_min) j["lambda_min"] = *r.lambda_min;
  if (r.lambda_max) j["lambda_max"] = *r.lambda_max;
  if (r.kappa) j["kappa"] = *r.kappa;
  return j;
}

void write_residual_csv(std::ostream& os, const SolveReport& r) {
  os << "iteration,relative_residual\n";
  char buf[64];
  for (std::size_t k = 0; k < r.residuals.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%zu,%.6e\n", k, r.residuals[k]);
    os << buf;
  }
}

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

}  // namespace

SolveResult pcg(const LinearMap& a, const Vector& b, const LinearMap* precond, const PcgOptions& opt,
                const Vector* x0) {
  const auto t0 = Clock::now();
  SolveResult res;
  SolveReport& rep = res.report;
  rep.max_iter = opt.max_iter;
  rep.tol = opt.tol;
  const double bnorm = b.norm();
  res.x = x0 ? *x0 : Vector::Zero(b.size());
  if (bnorm == 0.0) {
    res.x.setZero();
    rep.residuals.push_back(0.0);
    rep.converged = true;
    rep.wall_ms = elapsed_ms(t0);
    return res;
  }
  Vector r = b - a * res.x;
  rep.residuals.push_back(r.norm() / bnorm);
  if (rep.residuals.back() <= opt.tol) {
    rep.converged = true;
    rep.wall_ms = elapsed_ms(t0);
    return res;
  }
  Vector z = precond ? *precond * r : r;
  Vector p = z;
  double rz = r.dot(z);
  Vector ap(b.size()), r_old;
  for (int k = 1; k <= opt.max_iter; ++k) {
    a.apply(p, ap);
    const double curv = p.dot(ap);
    if (!(curv > 0)) {
      rep.breakdown = true;
      break;
    }
    const double alpha = rz / curv;
    res.x += alpha * p;
    if (opt.flexible) r_old = r;
    r -= alpha * ap;
    rep.iterations = k;
    const double true_res = (b - a * res.x).norm() / bnorm;
    rep.residuals.push_back(true_res);
    if (true_res <= opt.tol) {
      rep.converged = true;
      break;
    }
    z = precond ? *precond * r : r;
    const double rz_new = r.dot(z);
    const double beta = opt.flexible ? (rz_new - r_old.dot(z)) / rz : rz_new / rz;
    rz = rz_new;
    p = z + beta * p;
  }
  rep.wall_ms = elapsed_ms(t0);
  return res;
}

SolveResult minres(const LinearMap& a, const Vector& b, int max_iter, const LinearMap* precond, double tol,
                   const Vector* x0) {
  const auto t0 = Clock::now();
  SolveResult res;
  SolveReport& rep = res.report;
  rep.max_iter = max_iter;
  rep.tol = tol;
  const Eigen::Index n = b.size();
  res.x = x0 ? *x0 : Vector::Zero(n);
  const double bnorm = b.norm();
  Vector r1 = b - a * res.x;
  Vector y = precond ? *precond * r1 : r1;
  const double beta1_sq = r1.dot(y);
  if (beta1_sq < 0) {
    rep.breakdown = true;
    return res;
  }
  const double beta1 = std::sqrt(beta1_sq);
  rep.residuals.push_back(bnorm > 0 ? r1.norm() / bnorm : 0.0);
  if (beta1 == 0.0) {
    rep.converged = true;
    rep.wall_ms = elapsed_ms(t0);
    return res;
  }
  double oldb = 0.0, beta = beta1, dbar = 0.0, epsln = 0.0, phibar = beta1;
  double cs = -1.0, sn = 0.0;
  Vector w = Vector::Zero(n), w1(n), w2 = Vector::Zero(n), r2 = r1, v(n);
  const double eps = std::numeric_limits<double>::epsilon();
  for (int k = 1; k <= max_iter; ++k) {
    v = y / beta;
    a.apply(v, y);
    if (k >= 2) y -= (beta / oldb) * r1;
    const double alfa = v.dot(y);
    y -= (alfa / beta) * r2;
    r1 = r2;
    r2 = y;
    if (precond) y = *precond * r2;
    oldb = beta;
    const double beta_sq = r2.dot(y);
    if (beta_sq < 0) {
      rep.breakdown = true;
      break;
    }
    beta = std::sqrt(beta_sq);
    const double oldeps = epsln;
    const double delta = cs * dbar + sn * alfa;
    const double gbar = sn * dbar - cs * alfa;
    epsln = sn * beta;
    dbar = -cs * beta;
    const double gamma = std::max(std::hypot(gbar, beta), eps);
    cs = gbar / gamma;
    sn = beta / gamma;
    const double phi = cs * phibar;
    phibar = sn * phibar;
    w1 = w2;
    w2 = w;
    w = (v - oldeps * w1 - delta * w2) / gamma;
    res.x += phi * w;
    rep.iterations = k;
    // phibar is the residual norm in the preconditioner's inner product
    rep.residuals.push_back(phibar / beta1 * rep.residuals.front());
    if (beta <= eps * beta1 || (tol > 0 && phibar <= tol * beta1)) {
      rep.converged = true;
      break;
    }
  }
  if (tol == 0.0) rep.converged = true;
  rep.wall_ms = elapsed_ms(t0);
  return res;
}

std::string to_string(GltStep s) { return s == GltStep::MassCorrection ? "mass-correction" : "mass-preconditioned"; }

GltStep glt_step_from_string(const std::string& s) {
  if (s == "mass-correction") return GltStep::MassCorrection;
  if (s == "mass-preconditioned") return GltStep::MassPreconditioned;
  throw std::invalid_argument("unknown GLT step: " + s);
}

AspGlt::AspGlt(const SparseMat& a, const SparseMat& mass, const AspPreconditioner& asp, GltConfig cfg)
    : a_(a), mass_(mass), asp_(asp), cfg_(cfg) {
  if (cfg_.nu1 < 1 || cfg_.nu2 < 1 || cfg_.nu_asp < 1) throw std::invalid_argument("asp-glt: nu1, nu2, nu_asp must be >= 1");
  if (cfg_.step == GltStep::MassPreconditioned)
    mass_solver_ = std::make_unique<InnerSolver>(mass_, InnerSolverConfig{}, "GLT step: M^{-1}");
}

Vector AspGlt::apply(const Vector& b) const {
  const LinearMap amap = igaasp::as_map(a_);
  Vector x = Vector::Zero(b.size());
  LinearMap minv;
  if (mass_solver_) {
    minv.rows = minv.cols = b.size();
    minv.apply_fn = [this](const Vector& r, Vector& z) { z = mass_solver_->solve(r); };
    minv.symmetric = minv.positive_definite = true;
  }
  const LinearMap mmap = igaasp::as_map(mass_);
  for (int cycle = 0; cycle < cfg_.nu_asp; ++cycle) {
    for (int s = 0; s < cfg_.nu1; ++s) x += asp_.apply_smoother(b - a_ * x);
    if (cfg_.step == GltStep::MassCorrection) {
      x += minres(mmap, b - a_ * x, cfg_.nu2).x;
    } else {
      x = minres(amap, b, cfg_.nu2, &minv, 0.0, &x).x;
    }
    const Vector d = b - a_ * x;
    x += asp_.apply_correction(d);
  }
  return x;
}

LinearMap AspGlt::as_map() const {
  LinearMap m;
  m.rows = m.cols = a_.rows();
  m.apply_fn = [this](const Vector& x, Vector& y) { y = apply(x); };
  return m;
}

namespace {

// Lanczos for an operator self-adjoint in the inner product <x, G y>, with full
// reorthogonalization. op(v, Gv) returns T v.
struct LanczosRun {
  double lo = 0.0, hi = 0.0;
  int steps = 0;
  bool converged = true;
};

LanczosRun lanczos_extremes(Eigen::Index n, const std::function<Vector(const Vector&, const Vector&)>& op,
                            const std::function<Vector(const Vector&)>& gram, int steps, unsigned seed) {
  const int k_max = static_cast<int>(std::min<Eigen::Index>(steps, n));
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = uni(gen);
  DenseMat V(n, k_max), GV(n, k_max);
  Vector gv = gram(v);
  const double nrm = std::sqrt(v.dot(gv));
  V.col(0) = v / nrm;
  GV.col(0) = gv / nrm;
  std::vector<double> alpha, beta;
  auto extremes = [&](int m, double& lo, double& hi) {
    DenseMat t = DenseMat::Zero(m, m);
    for (int i = 0; i < m; ++i) {
      t(i, i) = alpha[i];
      if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[i];
    }
    const Vector ev = Eigen::SelfAdjointEigenSolver<DenseMat>(t, Eigen::EigenvaluesOnly).eigenvalues();
    lo = ev.minCoeff();
    hi = ev.maxCoeff();
  };
  int m = 0;
  for (int j = 0; j < k_max; ++j) {
    Vector w = op(V.col(j), GV.col(j));
    alpha.push_back(w.dot(GV.col(j)));
    m = j + 1;
    if (j + 1 == k_max) break;
    // classical Gram-Schmidt against all previous vectors, applied twice
    for (int pass = 0; pass < 2; ++pass) {
      const Vector c = GV.leftCols(j + 1).transpose() * w;
      w -= V.leftCols(j + 1) * c;
    }
    const Vector gw = gram(w);
    const double b2 = w.dot(gw);
    if (!(b2 > 0) || std::sqrt(b2) <= 1e-12 * std::abs(alpha.back())) break;
    const double bj = std::sqrt(b2);
    beta.push_back(bj);
    V.col(j + 1) = w / bj;
    GV.col(j + 1) = gw / bj;
  }
  LanczosRun run;
  extremes(m, run.lo, run.hi);
  run.steps = m;
  if (m == k_max && m < static_cast<int>(n)) {
    const int m0 = std::max(1, m - 10);
    double lo0 = 0, hi0 = 0;
    extremes(m0, lo0, hi0);
    run.converged = std::abs(lo0 - run.lo) <= 1e-3 * run.lo && std::abs(hi0 - run.hi) <= 1e-3 * run.hi;
  }
  return run;
}

DenseMat dense_product(const SparseMat& a, const LinearMap* precond) {
  const Eigen::Index n = a.rows();
  DenseMat ba(a);
  if (!precond) return ba;
  Vector col(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    precond->apply(ba.col(j), col);
    ba.col(j) = col;
  }
  return ba;
}

}  // namespace

std::string to_string(ConditionMode m) { return m == ConditionMode::Dense ? "dense" : "lanczos"; }
std::string to_string(ConditionMetric m) { return m == ConditionMetric::Spectral ? "spectral" : "singular"; }

ConditionMode condition_mode_from_string(const std::string& s) {
  if (s == "dense") return ConditionMode::Dense;
  if (s == "lanczos") return ConditionMode::Lanczos;
  throw std::invalid_argument("unknown condition mode: " + s);
}

ConditionMetric condition_metric_from_string(const std::string& s) {
  if (s == "spectral") return ConditionMetric::Spectral;
  if (s == "singular") return ConditionMetric::Singular;
  throw std::invalid_argument("unknown condition metric: " + s);
}

ConditionEstimate estimate_condition_number(const SparseMat& a, const LinearMap* precond, ConditionMode mode,
                                            int lanczos_steps, unsigned seed, ConditionMetric metric) {
  const Eigen::Index n = a.rows();
  ConditionEstimate est;
  if (mode == ConditionMode::Dense) {
    if (n > 20000) throw std::invalid_argument("estimate_condition_number: dense mode limited to dim <= 20000");
    Eigen::VectorXd ev;
    if (metric == ConditionMetric::Singular) {
      ev = Eigen::BDCSVD<DenseMat>(dense_product(a, precond)).singularValues();
    } else if (!precond) {
      ev = Eigen::SelfAdjointEigenSolver<DenseMat>(DenseMat(a), Eigen::EigenvaluesOnly).eigenvalues();
    } else {
      Eigen::LLT<DenseMat> llt{DenseMat(a)};
      if (llt.info() != Eigen::Success) throw std::runtime_error("estimate_condition_number: A is not SPD");
      const DenseMat l = llt.matrixL();
      DenseMat bl(n, n);
      Vector col(n);
      for (Eigen::Index j = 0; j < n; ++j) {
        precond->apply(l.col(j), col);
        bl.col(j) = col;
      }
      DenseMat t = l.transpose() * bl;
      t = 0.5 * (t + t.transpose()).eval();
      ev = Eigen::SelfAdjointEigenSolver<DenseMat>(t, Eigen::EigenvaluesOnly).eigenvalues();
    }
    est.lambda_min = ev.minCoeff();
    est.lambda_max = ev.maxCoeff();
    est.kappa = est.lambda_max / est.lambda_min;
    est.steps = static_cast<int>(n);
    return est;
  }
  auto apply_b = [&](const Vector& x) { return precond ? Vector(*precond * x) : x; };
  LanczosRun run;
  if (metric == ConditionMetric::Spectral) {
    // T = B A, self-adjoint in <x, y>_A
    run = lanczos_extremes(n, [&](const Vector&, const Vector& av) { return apply_b(av); },
                           [&](const Vector& x) { return Vector(a * x); }, lanczos_steps, seed);
    est.lambda_min = run.lo;
    est.lambda_max = run.hi;
  } else {
    // (B A)^T (B A) = A B B A
    run = lanczos_extremes(n, [&](const Vector& v, const Vector&) { return Vector(a * apply_b(apply_b(a * v))); },
                           [](const Vector& x) { return x; }, lanczos_steps, seed);
    est.lambda_min = std::sqrt(std::max(run.lo, 0.0));
    est.lambda_max = std::sqrt(run.hi);
  }
  est.steps = run.steps;
  est.converged = run.converged;
  est.kappa = est.lambda_max / est.lambda_min;
  return est;
}

}  // namespace igaasp
