#pragma once

#include "igaasp/krylov.hpp"
#include "igaasp/manufactured.hpp"

#include <optional>
#include <set>

namespace igaasp {

enum class PrecondKind { None, Asp, AspGlt };
enum class ReportItem { Iters, Cond, Errors };

std::string to_string(PrecondKind k);
PrecondKind precond_kind_from_string(const std::string& s);
std::string to_string(ReportItem r);
ReportItem report_item_from_string(const std::string& s);

/// nu2 as p^2, p^3 or a fixed count.
struct Nu2Rule {
  enum class Kind { PSquare, PCube, Fixed } kind = Kind::PSquare;
  int fixed = 1;
  int value(int p) const;
};

std::string to_string(const Nu2Rule& r);
Nu2Rule nu2_rule_from_string(const std::string& s);

struct ExperimentSpec {
  Operator problem = Operator::Curl;
  int dim = 2;
  std::vector<int> degrees{1};
  std::vector<int> elements{8};
  std::vector<double> taus{1e-4};
  PrecondKind precond = PrecondKind::Asp;
  SmootherKind smoother = SmootherKind::Jacobi;
  CurlSmootherVariant curl_variant = CurlSmootherVariant::DiagQcurl;
  int nu1 = 1;
  Nu2Rule nu2;
  int nu_asp = 3;
  GltStep glt_step = GltStep::MassPreconditioned;
  double tol = 1e-6;
  int max_iter = 3000;
  ManufacturedVariant solution = ManufacturedVariant::Perturbed;
  std::set<ReportItem> report{ReportItem::Iters};
  ConditionMetric kappa_metric = ConditionMetric::Singular;
  /// Dense condition numbers up to this many unknowns, Lanczos beyond.
  int dense_cond_max_dofs = 1200;
  int lanczos_steps = 300;
  InnerSolverConfig inner;
  AuxiliaryBoundary aux_boundary = AuxiliaryBoundary::Full;
  bool h_includes_mass = true;
  bool timing = true;
  std::string dump_dir;  // Matrix Market output, empty: none

  void validate() const;
};

nlohmann::json to_json(const ExperimentSpec& s);
ExperimentSpec experiment_spec_from_json(const nlohmann::json& j);

struct CellResult {
  std::string problem;
  int dim = 2;
  int p = 1;
  int n = 8;
  double tau = 1.0;
  std::string precond;
  std::string smoother;
  int iters = 0;
  bool converged = false;
  std::optional<double> kappa2;
  std::optional<double> res_err;
  std::optional<double> l2_err;
  std::optional<double> wall_ms;
  bool operator==(const CellResult&) const = default;
};

/// Manufactured case used for a cell: the 2-D closed forms or the 3-D right-hand sides.
ManufacturedCase cell_case(const ExperimentSpec& spec, double tau);

/// |u - Pi_h u_exact| / |Pi_h u_exact| on coefficient vectors.
double l2_coefficient_error(const Vector& u, const ManufacturedCase& mc, const TensorSpace& space);

CellResult run_cell(const ExperimentSpec& spec, int p, int n, double tau);
/// Cells in spec order: p outermost, then n, then tau.
std::vector<CellResult> run_experiment(const ExperimentSpec& spec);

/// Writes A, M, b and the transfer matrices of one cell as Matrix Market files.
void dump_matrices(const ExperimentSpec& spec, int p, int n, double tau, const std::string& dir);

}  // namespace igaasp
