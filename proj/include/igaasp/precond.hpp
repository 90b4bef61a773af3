#pragma once

#include "igaasp/transfer.hpp"

#include <Eigen/SparseCholesky>

#include <memory>
#include <stdexcept>

namespace igaasp {

enum class SmootherKind { Jacobi, SymmetricGaussSeidel };
enum class InnerSolverKind { Direct, CG };
enum class CurlSmootherVariant { DiagQcurl, SgsQcurl };

std::string to_string(SmootherKind k);
std::string to_string(InnerSolverKind k);
std::string to_string(CurlSmootherVariant k);
SmootherKind smoother_kind_from_string(const std::string& s);
InnerSolverKind inner_solver_kind_from_string(const std::string& s);
CurlSmootherVariant curl_smoother_variant_from_string(const std::string& s);

/// Jacobi: r / diag(A). SGS: L^{-1} r - L^{-1} A U^{-1} r + U^{-1} r with L, U
/// the triangles of A including the diagonal.
Vector apply_smoother_inverse(SmootherKind kind, const SparseMat& a, const Vector& r);

class Smoother {
 public:
  Smoother(SmootherKind kind, SparseMat a);
  Vector apply(const Vector& r) const;
  SmootherKind kind() const { return kind_; }

 private:
  SmootherKind kind_;
  SparseMat a_;
  Vector inv_diag_;
};

class InnerSolveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct InnerSolverConfig {
  InnerSolverKind kind = InnerSolverKind::Direct;
  double tol = 1e-10;
  int max_iter = 20000;
};

/// SPD solve with a block-diagonal matrix; identical blocks share one factorization.
class InnerSolver {
 public:
  InnerSolver(std::vector<SparseMat> blocks, InnerSolverConfig cfg, std::string name);
  InnerSolver(const SparseMat& matrix, InnerSolverConfig cfg, std::string name);
  Vector solve(const Vector& b) const;
  Eigen::Index size() const { return offsets_.back(); }

 private:
  using ColMat = Eigen::SparseMatrix<double>;
  std::vector<SparseMat> blocks_;
  std::vector<std::size_t> factor_of_;
  std::vector<Eigen::Index> offsets_;
  InnerSolverConfig cfg_;
  std::string name_;
  std::vector<std::unique_ptr<Eigen::SimplicialLDLT<ColMat>>> ldlt_;
};

struct AspConfig {
  SmootherKind smoother = SmootherKind::Jacobi;
  InnerSolverConfig inner;
  CurlSmootherVariant curl_variant = CurlSmootherVariant::DiagQcurl;
  /// H carries the L2 part of the H^1 inner product.
  bool h_includes_mass = true;
  AuxiliaryBoundary aux_boundary = AuxiliaryBoundary::Full;
};

nlohmann::json to_json(const AspConfig& cfg, double tau);
AspConfig asp_config_from_json(const nlohmann::json& j);

/// B = S^{-1} + K with K the auxiliary-space part:
///   curl:     P (H + tau M)^{-1} P^T + tau^{-1} G L^{-1} G^T
///   2-D div:  P (H + tau M)^{-1} P^T + tau^{-1} R L^{-1} R^T
///   3-D div:  P (H + tau M)^{-1} P^T + tau^{-1} C D_curl^{-1} C^T
///             + tau^{-1} C P_curl H^{-1} P_curl^T C^T
class AspPreconditioner {
 public:
  AspPreconditioner(const AssembledSystem& sys, AspConfig cfg);

  Vector apply(const Vector& r) const;
  Vector apply_smoother(const Vector& r) const { return smoother_.apply(r); }
  Vector apply_correction(const Vector& r) const;
  LinearMap as_map() const;
  LinearMap smoother_map() const;
  LinearMap correction_map() const;

  const TransferSet& transfers() const { return transfers_; }
  const AspConfig& config() const { return cfg_; }
  Eigen::Index size() const { return n_; }
  /// Q_curl, 3-D div only.
  const SparseMat& curl_stiffness() const { return q_curl_; }

 private:
  Operator op_;
  int dim_;
  double tau_;
  Eigen::Index n_;
  AspConfig cfg_;
  Smoother smoother_;
  TransferSet transfers_;
  std::unique_ptr<InnerSolver> h_tau_m_;
  std::unique_ptr<InnerSolver> lap_;
  std::unique_ptr<InnerSolver> h_;
  SparseMat q_curl_;
  Vector q_curl_inv_diag_;
  std::unique_ptr<Smoother> q_curl_sgs_;
};

}  // namespace igaasp
