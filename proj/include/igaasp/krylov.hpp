#pragma once

#include "igaasp/precond.hpp"

#include <iosfwd>
#include <optional>

namespace igaasp {

struct SolveReport {
  int iterations = 0;
  bool converged = false;
  bool breakdown = false;
  int max_iter = 0;
  double tol = 0.0;
  std::vector<double> residuals;  // relative residual per iteration, entry 0 is the start
  double wall_ms = 0.0;
  std::optional<double> lambda_min, lambda_max, kappa;
};

nlohmann::json to_json(const SolveReport& r);
void write_residual_csv(std::ostream& os, const SolveReport& r);

struct SolveResult {
  Vector x;
  SolveReport report;
};

struct PcgOptions {
  double tol = 1e-6;
  int max_iter = 3000;
  /// Polak-Ribiere beta, for preconditioners that vary between applications.
  bool flexible = false;
};

/// Stops on the true residual |b - A x| / |b| <= tol. B == nullptr means no preconditioner.
SolveResult pcg(const LinearMap& a, const Vector& b, const LinearMap* precond, const PcgOptions& opt = {},
                const Vector* x0 = nullptr);

/// MINRES with optional SPD preconditioner. tol = 0 runs exactly max_iter steps
/// unless the Krylov space is exhausted.
SolveResult minres(const LinearMap& a, const Vector& b, int max_iter, const LinearMap* precond = nullptr,
                   double tol = 0.0, const Vector* x0 = nullptr);

/// How the GLT step of ASP-GLT uses the mass matrix.
enum class GltStep {
  MassCorrection,    // x += MINRES(M, b - A x, nu2)
  MassPreconditioned // nu2 MINRES steps on A with preconditioner M^{-1}, warm-started at x
};

std::string to_string(GltStep s);
GltStep glt_step_from_string(const std::string& s);

struct GltConfig {
  int nu1 = 1;
  int nu2 = 1;
  int nu_asp = 3;
  GltStep step = GltStep::MassPreconditioned;
};

/// Composite preconditioner: nu_asp cycles of nu1 smoother sweeps, the GLT
/// step, and the auxiliary correction K = B - S^{-1} on the defect.
class AspGlt {
 public:
  AspGlt(const SparseMat& a, const SparseMat& mass, const AspPreconditioner& asp, GltConfig cfg);
  Vector apply(const Vector& b) const;
  LinearMap as_map() const;

 private:
  const SparseMat& a_;
  const SparseMat& mass_;
  const AspPreconditioner& asp_;
  GltConfig cfg_;
  std::unique_ptr<InnerSolver> mass_solver_;
};

enum class ConditionMode { Dense, Lanczos };
/// Spectral: lambda_max / lambda_min of B A. Singular: sigma_max / sigma_min of
/// the (non-symmetric) product B A, the 2-norm condition number.
enum class ConditionMetric { Spectral, Singular };

std::string to_string(ConditionMode m);
std::string to_string(ConditionMetric m);
ConditionMode condition_mode_from_string(const std::string& s);
ConditionMetric condition_metric_from_string(const std::string& s);

struct ConditionEstimate {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double kappa = 0.0;
  int steps = 0;
  bool converged = true;
};

/// Extreme eigenvalues of B A (B == nullptr: of A). Dense mode forms L^T B L
/// from the Cholesky factor A = L L^T; Lanczos mode runs on B A in the A inner
/// product with full reorthogonalization. For the singular metric lambda_min
/// and lambda_max hold the extreme singular values: dense mode takes an SVD of
/// B A, Lanczos mode runs on A B B A in the Euclidean inner product.
ConditionEstimate estimate_condition_number(const SparseMat& a, const LinearMap* precond, ConditionMode mode,
                                            int lanczos_steps = 200, unsigned seed = 12345,
                                            ConditionMetric metric = ConditionMetric::Spectral);

}  // namespace igaasp
