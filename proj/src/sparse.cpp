#include "igaasp/sparse.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace igaasp {

SparseMat identity(Eigen::Index n) {
  SparseMat id(n, n);
  id.setIdentity();
  return id;
}

SparseMat zeros(Eigen::Index rows, Eigen::Index cols) {
  SparseMat z(rows, cols);
  z.makeCompressed();
  return z;
}

void drop_small(SparseMat& a, double tol) {
  a.prune([tol](Eigen::Index, Eigen::Index, double v) { return std::abs(v) >= tol; });
  a.makeCompressed();
}

SparseMat kron(const SparseMat& a, const SparseMat& b) {
  SparseMat out = Eigen::kroneckerProduct(a, b).eval();
  out.makeCompressed();
  return out;
}

SparseMat kron(const SparseMat& a, const SparseMat& b, const SparseMat& c) {
  return kron(kron(a, b), c);
}

SparseMat kron(const std::vector<SparseMat>& factors) {
  if (factors.empty()) throw std::invalid_argument("kron: empty factor list");
  SparseMat out = factors.front();
  for (std::size_t k = 1; k < factors.size(); ++k) out = kron(out, factors[k]);
  return out;
}

SparseMat block_matrix(const std::vector<std::vector<std::optional<SparseMat>>>& blocks) {
  const std::size_t nbr = blocks.size();
  if (nbr == 0) throw std::invalid_argument("block_matrix: no block rows");
  const std::size_t nbc = blocks.front().size();
  std::vector<Eigen::Index> heights(nbr, -1), widths(nbc, -1);
  for (std::size_t i = 0; i < nbr; ++i) {
    if (blocks[i].size() != nbc) throw std::invalid_argument("block_matrix: ragged block grid");
    for (std::size_t j = 0; j < nbc; ++j) {
      if (!blocks[i][j]) continue;
      const auto& b = *blocks[i][j];
      if (heights[i] >= 0 && heights[i] != b.rows())
        throw std::invalid_argument("block_matrix: inconsistent block heights");
      if (widths[j] >= 0 && widths[j] != b.cols())
        throw std::invalid_argument("block_matrix: inconsistent block widths");
      heights[i] = b.rows();
      widths[j] = b.cols();
    }
  }
  std::vector<Eigen::Index> row_off(nbr + 1, 0), col_off(nbc + 1, 0);
  for (std::size_t i = 0; i < nbr; ++i) {
    if (heights[i] < 0) throw std::invalid_argument("block_matrix: empty block row");
    row_off[i + 1] = row_off[i] + heights[i];
  }
  for (std::size_t j = 0; j < nbc; ++j) {
    if (widths[j] < 0) throw std::invalid_argument("block_matrix: empty block column");
    col_off[j + 1] = col_off[j] + widths[j];
  }
  std::vector<Triplet> trips;
  for (std::size_t i = 0; i < nbr; ++i)
    for (std::size_t j = 0; j < nbc; ++j) {
      if (!blocks[i][j]) continue;
      const auto& b = *blocks[i][j];
      for (Eigen::Index r = 0; r < b.outerSize(); ++r)
        for (SparseMat::InnerIterator it(b, r); it; ++it)
          trips.emplace_back(row_off[i] + it.row(), col_off[j] + it.col(), it.value());
    }
  SparseMat out(row_off[nbr], col_off[nbc]);
  out.setFromTriplets(trips.begin(), trips.end());
  out.makeCompressed();
  return out;
}

SparseMat block_diagonal(const std::vector<SparseMat>& blocks) {
  std::vector<std::vector<std::optional<SparseMat>>> grid(
      blocks.size(), std::vector<std::optional<SparseMat>>(blocks.size()));
  for (std::size_t i = 0; i < blocks.size(); ++i) grid[i][i] = blocks[i];
  return block_matrix(grid);
}

SparseMat to_sparse(const DenseMat& a, double tol) {
  std::vector<Triplet> trips;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      if (std::abs(a(i, j)) >= tol) trips.emplace_back(i, j, a(i, j));
  SparseMat out(a.rows(), a.cols());
  out.setFromTriplets(trips.begin(), trips.end());
  out.makeCompressed();
  return out;
}

double relative_difference(const SparseMat& a, const SparseMat& b) {
  const double nb = b.norm();
  const double d = SparseMat(a - b).norm();
  return nb > 0 ? d / nb : d;
}

std::uint64_t checksum(const SparseMat& a) {
  SparseMat c = a;
  c.makeCompressed();
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](const void* data, std::size_t bytes) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t k = 0; k < bytes; ++k) {
      h ^= p[k];
      h *= 1099511628211ull;
    }
  };
  mix(c.outerIndexPtr(), sizeof(int) * (c.outerSize() + 1));
  mix(c.innerIndexPtr(), sizeof(int) * c.nonZeros());
  mix(c.valuePtr(), sizeof(double) * c.nonZeros());
  return h;
}

void write_matrix_market(std::ostream& os, const SparseMat& a) {
  os << "%%MatrixMarket matrix coordinate real general\n";
  os << a.rows() << ' ' << a.cols() << ' ' << a.nonZeros() << '\n';
  os << std::setprecision(17);
  for (Eigen::Index r = 0; r < a.outerSize(); ++r)
    for (SparseMat::InnerIterator it(a, r); it; ++it)
      os << it.row() + 1 << ' ' << it.col() + 1 << ' ' << it.value() << '\n';
}

void write_matrix_market(const std::string& path, const SparseMat& a) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  write_matrix_market(os, a);
  if (!os) throw std::runtime_error("write failed: " + path);
}

SparseMat read_matrix_market(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("%%MatrixMarket", 0) != 0)
    throw std::runtime_error("matrix market: missing banner");
  std::istringstream banner(line);
  std::string tag, object, format, field, symmetry;
  banner >> tag >> object >> format >> field >> symmetry;
  if (object != "matrix" || format != "coordinate" || field != "real")
    throw std::runtime_error("matrix market: only real coordinate matrices are supported");
  const bool sym = symmetry == "symmetric";
  while (std::getline(is, line) && (line.empty() || line[0] == '%')) {}
  std::istringstream header(line);
  Eigen::Index rows = 0, cols = 0, nnz = 0;
  if (!(header >> rows >> cols >> nnz)) throw std::runtime_error("matrix market: bad size line");
  std::vector<Triplet> trips;
  trips.reserve(static_cast<std::size_t>(sym ? 2 * nnz : nnz));
  for (Eigen::Index k = 0; k < nnz; ++k) {
    Eigen::Index i = 0, j = 0;
    double v = 0;
    if (!(is >> i >> j >> v)) throw std::runtime_error("matrix market: truncated entries");
    trips.emplace_back(i - 1, j - 1, v);
    if (sym && i != j) trips.emplace_back(j - 1, i - 1, v);
  }
  SparseMat out(rows, cols);
  out.setFromTriplets(trips.begin(), trips.end());
  out.makeCompressed();
  return out;
}

LinearMap as_map(const SparseMat& a, bool spd) {
  LinearMap m;
  m.rows = a.rows();
  m.cols = a.cols();
  m.apply_fn = [&a](const Vector& x, Vector& y) { y.noalias() = a * x; };
  m.symmetric = spd;
  m.positive_definite = spd;
  return m;
}

LinearMap identity_map(Eigen::Index n) {
  LinearMap m;
  m.rows = m.cols = n;
  m.apply_fn = [](const Vector& x, Vector& y) { y = x; };
  m.symmetric = m.positive_definite = true;
  return m;
}

}  // namespace igaasp
