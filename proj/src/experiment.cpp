#include "igaasp/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <stdexcept>

namespace igaasp {

std::string to_string(PrecondKind k) {
  switch (k) {
    case PrecondKind::None: return "none";
    case PrecondKind::Asp: return "asp";
    case PrecondKind::AspGlt: return "asp-glt";
  }
  return "?";
}

PrecondKind precond_kind_from_string(const std::string& s) {
  if (s == "none") return PrecondKind::None;
  if (s == "asp") return PrecondKind::Asp;
  if (s == "asp-glt") return PrecondKind::AspGlt;
  throw std::invalid_argument("unknown preconditioner: " + s);
}

std::string to_string(ReportItem r) {
  switch (r) {
    case ReportItem::Iters: return "iters";
    case ReportItem::Cond: return "cond";
    case ReportItem::Errors: return "errors";
  }
  return "?";
}

ReportItem report_item_from_string(const std::string& s) {
  if (s == "iters") return ReportItem::Iters;
  if (s == "cond") return ReportItem::Cond;
  if (s == "errors") return ReportItem::Errors;
  throw std::invalid_argument("unknown report item: " + s);
}

int Nu2Rule::value(int p) const {
  switch (kind) {
    case Kind::PSquare: return p * p;
    case Kind::PCube: return p * p * p;
    case Kind::Fixed: return fixed;
  }
  return fixed;
}

std::string to_string(const Nu2Rule& r) {
  switch (r.kind) {
    case Nu2Rule::Kind::PSquare: return "psq";
    case Nu2Rule::Kind::PCube: return "pcube";
    case Nu2Rule::Kind::Fixed: return std::to_string(r.fixed);
  }
  return "?";
}

Nu2Rule nu2_rule_from_string(const std::string& s) {
  Nu2Rule r;
  if (s == "psq" || s == "p2") return r;
  if (s == "pcube" || s == "p3") {
    r.kind = Nu2Rule::Kind::PCube;
    return r;
  }
  std::size_t pos = 0;
  int k = 0;
  try {
    k = std::stoi(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != s.size() || k < 1) throw std::invalid_argument("nu2 must be psq, pcube or a positive integer: " + s);
  r.kind = Nu2Rule::Kind::Fixed;
  r.fixed = k;
  return r;
}

void ExperimentSpec::validate() const {
  if (dim != 2 && dim != 3) throw std::invalid_argument("experiment: dim must be 2 or 3");
  if (degrees.empty() || elements.empty() || taus.empty()) throw std::invalid_argument("experiment: empty parameter range");
  for (int p : degrees)
    if (p < 1) throw std::invalid_argument("experiment: degree must be >= 1");
  for (int n : elements)
    if (n < 1) throw std::invalid_argument("experiment: element count must be >= 1");
  for (double t : taus)
    if (!(t > 0)) throw std::invalid_argument("experiment: tau must be positive");
  if (nu1 < 1 || nu_asp < 1 || nu2.value(1) < 1) throw std::invalid_argument("experiment: nu1, nu2, nu_asp must be >= 1");
  if (!(tol > 0) || max_iter < 1) throw std::invalid_argument("experiment: bad tol or max_iter");
}

nlohmann::json to_json(const ExperimentSpec& s) {
  nlohmann::json rep = nlohmann::json::array();
  for (auto r : s.report) rep.push_back(to_string(r));
  return {{"problem", to_string(s.problem)},
          {"dim", s.dim},
          {"p", s.degrees},
          {"n", s.elements},
          {"tau", s.taus},
          {"precond", to_string(s.precond)},
          {"smoother", to_string(s.smoother)},
          {"curl_smoother_variant", to_string(s.curl_variant)},
          {"nu1", s.nu1},
          {"nu2", to_string(s.nu2)},
          {"nu_asp", s.nu_asp},
          {"glt_step", to_string(s.glt_step)},
          {"tol", s.tol},
          {"max_iter", s.max_iter},
          {"solution", to_string(s.solution)},
          {"report", rep},
          {"kappa_metric", to_string(s.kappa_metric)},
          {"dense_cond_max_dofs", s.dense_cond_max_dofs},
          {"lanczos_steps", s.lanczos_steps},
          {"inner_solver", {{"kind", to_string(s.inner.kind)}, {"tol", s.inner.tol}, {"max_iter", s.inner.max_iter}}},
          {"aux_boundary", to_string(s.aux_boundary)},
          {"h_includes_mass", s.h_includes_mass},
          {"timing", s.timing},
          {"dump_dir", s.dump_dir}};
}

namespace {

template <class T>
std::vector<T> as_list(const nlohmann::json& j) {
  if (j.is_array()) return j.get<std::vector<T>>();
  return {j.get<T>()};
}

}  // namespace

ExperimentSpec experiment_spec_from_json(const nlohmann::json& j) {
  ExperimentSpec s;
  if (!j.is_object()) throw std::invalid_argument("experiment spec must be a JSON object");
  if (j.contains("problem")) s.problem = operator_from_string(j.at("problem").get<std::string>());
  s.dim = j.value("dim", s.dim);
  if (j.contains("p")) s.degrees = as_list<int>(j.at("p"));
  if (j.contains("n")) s.elements = as_list<int>(j.at("n"));
  if (j.contains("tau")) s.taus = as_list<double>(j.at("tau"));
  if (j.contains("precond")) s.precond = precond_kind_from_string(j.at("precond").get<std::string>());
  if (j.contains("smoother")) s.smoother = smoother_kind_from_string(j.at("smoother").get<std::string>());
  if (j.contains("curl_smoother_variant"))
    s.curl_variant = curl_smoother_variant_from_string(j.at("curl_smoother_variant").get<std::string>());
  s.nu1 = j.value("nu1", s.nu1);
  if (j.contains("nu2")) {
    const auto& v = j.at("nu2");
    s.nu2 = nu2_rule_from_string(v.is_number_integer() ? std::to_string(v.get<int>()) : v.get<std::string>());
  }
  s.nu_asp = j.value("nu_asp", s.nu_asp);
  if (j.contains("glt_step")) s.glt_step = glt_step_from_string(j.at("glt_step").get<std::string>());
  s.tol = j.value("tol", s.tol);
  s.max_iter = j.value("max_iter", s.max_iter);
  if (j.contains("solution")) s.solution = manufactured_variant_from_string(j.at("solution").get<std::string>());
  if (j.contains("report")) {
    s.report.clear();
    for (const auto& r : as_list<std::string>(j.at("report"))) s.report.insert(report_item_from_string(r));
  }
  if (j.contains("kappa_metric")) s.kappa_metric = condition_metric_from_string(j.at("kappa_metric").get<std::string>());
  s.dense_cond_max_dofs = j.value("dense_cond_max_dofs", s.dense_cond_max_dofs);
  s.lanczos_steps = j.value("lanczos_steps", s.lanczos_steps);
  if (j.contains("inner_solver")) s.inner = asp_config_from_json(j).inner;
  if (j.contains("aux_boundary")) s.aux_boundary = auxiliary_boundary_from_string(j.at("aux_boundary").get<std::string>());
  s.h_includes_mass = j.value("h_includes_mass", s.h_includes_mass);
  s.timing = j.value("timing", s.timing);
  s.dump_dir = j.value("dump_dir", s.dump_dir);
  s.validate();
  return s;
}

ManufacturedCase cell_case(const ExperimentSpec& spec, double tau) {
  if (spec.dim == 2) return manufactured_2d(spec.problem, spec.solution, tau);
  return rhs_3d(spec.problem, tau);
}

double l2_coefficient_error(const Vector& u, const ManufacturedCase& mc, const TensorSpace& space) {
  if (!mc.has_exact()) throw std::invalid_argument("l2_coefficient_error: case has no exact solution");
  const Vector ref = quasi_interpolate(space, mc.exact);
  if (ref.size() != u.size()) throw std::invalid_argument("l2_coefficient_error: size mismatch");
  const double nrm = ref.norm();
  if (nrm == 0.0) throw std::domain_error("l2_coefficient_error: zero reference");
  return (u - ref).norm() / nrm;
}

namespace {

AspConfig asp_config(const ExperimentSpec& spec) {
  AspConfig cfg;
  cfg.smoother = spec.smoother;
  cfg.inner = spec.inner;
  cfg.curl_variant = spec.curl_variant;
  cfg.h_includes_mass = spec.h_includes_mass;
  cfg.aux_boundary = spec.aux_boundary;
  return cfg;
}

}  // namespace

CellResult run_cell(const ExperimentSpec& spec, int p, int n, double tau) {
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  const ManufacturedCase mc = cell_case(spec, tau);
  const AssembledSystem sys = system_matrix(make_problem(spec.problem, spec.dim, p, n, tau, mc.rhs));
  const LinearMap a = as_map(sys.A);

  std::unique_ptr<AspPreconditioner> asp;
  std::unique_ptr<AspGlt> glt;
  std::optional<LinearMap> b;
  PcgOptions opt;
  opt.tol = spec.tol;
  opt.max_iter = spec.max_iter;
  if (spec.precond != PrecondKind::None) {
    asp = std::make_unique<AspPreconditioner>(sys, asp_config(spec));
    if (spec.precond == PrecondKind::Asp) {
      b = asp->as_map();
    } else {
      GltConfig g;
      g.nu1 = spec.nu1;
      g.nu2 = spec.nu2.value(p);
      g.nu_asp = spec.nu_asp;
      g.step = spec.glt_step;
      glt = std::make_unique<AspGlt>(sys.A, sys.mass, *asp, g);
      b = glt->as_map();
      opt.flexible = true;
    }
  }
  const SolveResult sol = pcg(a, sys.b, b ? &*b : nullptr, opt);
  const auto t1 = clock::now();

  CellResult r;
  r.problem = to_string(spec.problem);
  r.dim = spec.dim;
  r.p = p;
  r.n = n;
  r.tau = tau;
  r.precond = to_string(spec.precond);
  r.smoother = spec.precond == PrecondKind::None ? "none" : to_string(spec.smoother);
  r.iters = sol.report.iterations;
  r.converged = sol.report.converged;
  const double bn = sys.b.norm();
  r.res_err = bn > 0 ? (sys.b - sys.A * sol.x).norm() / bn : 0.0;
  if (spec.timing) r.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  if (spec.report.count(ReportItem::Errors) && mc.has_exact()) r.l2_err = l2_coefficient_error(sol.x, mc, sys.space);
  // no condition numbers for ASP-GLT: its application is not a fixed linear map
  if (spec.report.count(ReportItem::Cond) && spec.precond != PrecondKind::AspGlt) {
    const ConditionMode mode =
        sys.A.rows() <= spec.dense_cond_max_dofs ? ConditionMode::Dense : ConditionMode::Lanczos;
    const ConditionEstimate est =
        estimate_condition_number(sys.A, b ? &*b : nullptr, mode, spec.lanczos_steps, 12345, spec.kappa_metric);
    r.kappa2 = est.kappa;
  }
  return r;
}

std::vector<CellResult> run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  std::vector<CellResult> out;
  for (int p : spec.degrees)
    for (int n : spec.elements)
      for (double tau : spec.taus) {
        if (!spec.dump_dir.empty()) dump_matrices(spec, p, n, tau, spec.dump_dir);
        out.push_back(run_cell(spec, p, n, tau));
      }
  return out;
}

void dump_matrices(const ExperimentSpec& spec, int p, int n, double tau, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const ManufacturedCase mc = cell_case(spec, tau);
  const ProblemSpec ps = make_problem(spec.problem, spec.dim, p, n, tau, mc.rhs);
  const AssembledSystem sys = system_matrix(ps);
  const TransferSet ts = build_transfer_set(ps, spec.aux_boundary);
  char tag[128];
  std::snprintf(tag, sizeof tag, "%s%dd_p%d_n%d_tau%.0e_", to_string(spec.problem).c_str(), spec.dim, p, n, tau);
  auto path = [&](const std::string& name) { return (fs::path(dir) / (tag + name + ".mtx")).string(); };
  write_matrix_market(path("A"), sys.A);
  write_matrix_market(path("M"), sys.mass);
  write_matrix_market(path("D"), sys.d_mat);
  write_matrix_market(path("P"), ts.p_main);
  const char* pot = spec.problem == Operator::Curl ? "G" : (spec.dim == 2 ? "R" : "C");
  write_matrix_market(path(pot), ts.potential);
  if (ts.p_curl) write_matrix_market(path("P_curl"), *ts.p_curl);
  SparseMat bm(sys.b.size(), 1);
  std::vector<Triplet> trips;
  for (Eigen::Index i = 0; i < sys.b.size(); ++i)
    if (sys.b[i] != 0.0) trips.emplace_back(i, 0, sys.b[i]);
  bm.setFromTriplets(trips.begin(), trips.end());
  write_matrix_market(path("b"), bm);
}

}  // namespace igaasp
