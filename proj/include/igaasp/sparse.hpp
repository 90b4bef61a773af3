#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace igaasp {

using Vector = Eigen::VectorXd;
using DenseMat = Eigen::MatrixXd;
// Compressed-row storage; Eigen keeps inner (column) indices sorted after makeCompressed().
using SparseMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using Triplet = Eigen::Triplet<double>;

inline constexpr double kDropTolerance = 1e-14;

SparseMat identity(Eigen::Index n);
SparseMat zeros(Eigen::Index rows, Eigen::Index cols);

/// Removes stored entries with |value| < tol and compresses.
void drop_small(SparseMat& a, double tol = kDropTolerance);

SparseMat kron(const SparseMat& a, const SparseMat& b);
SparseMat kron(const SparseMat& a, const SparseMat& b, const SparseMat& c);
/// Kronecker product of a list, first factor slowest.
SparseMat kron(const std::vector<SparseMat>& factors);

/// Assembles a matrix from a grid of optional blocks. Every block row needs
/// at least one present block to fix its height (same for columns).
SparseMat block_matrix(const std::vector<std::vector<std::optional<SparseMat>>>& blocks);
SparseMat block_diagonal(const std::vector<SparseMat>& blocks);

SparseMat to_sparse(const DenseMat& a, double tol = kDropTolerance);

/// Frobenius norm of a - b relative to the norm of b.
double relative_difference(const SparseMat& a, const SparseMat& b);
/// Order-sensitive FNV-1a hash of the CSR arrays, for manifests.
std::uint64_t checksum(const SparseMat& a);

void write_matrix_market(std::ostream& os, const SparseMat& a);
void write_matrix_market(const std::string& path, const SparseMat& a);
SparseMat read_matrix_market(std::istream& is);

/// Apply-only linear operator with declared structure.
struct LinearMap {
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  std::function<void(const Vector& x, Vector& y)> apply_fn;
  bool symmetric = false;
  bool positive_definite = false;

  Vector operator*(const Vector& x) const {
    Vector y(rows);
    apply_fn(x, y);
    return y;
  }
  void apply(const Vector& x, Vector& y) const { apply_fn(x, y); }
};

/// Wraps a matrix by reference; the matrix must outlive the map.
LinearMap as_map(const SparseMat& a, bool spd = true);
LinearMap identity_map(Eigen::Index n);

}  // namespace igaasp
