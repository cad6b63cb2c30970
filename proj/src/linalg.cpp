#include "geomech/linalg.hpp"

#include <algorithm>
#include <unordered_map>

#include "geomech/error.hpp"

namespace gm {

namespace {

class DeterminantExpansion {
 public:
  explicit DeterminantExpansion(const ExprMatrix& m) : m_(m), memo_(m.size() + 1) {}

  // Determinant of rows [row, n) restricted to the columns in `cols`.
  Expr minor(std::size_t row, std::uint64_t cols) {
    const std::size_t n = m_.size();
    if (row == n) return Expr(1.0);
    auto& level = memo_[row];
    if (auto it = level.find(cols); it != level.end()) return it->second;
    Expr acc;
    int sign = 1;
    for (std::size_t c = 0; c < n; ++c) {
      if ((cols & (std::uint64_t{1} << c)) == 0) continue;
      const Expr& entry = m_[row][c];
      if (!entry.is_const(0.0)) {
        const Expr sub = minor(row + 1, cols & ~(std::uint64_t{1} << c));
        const Expr term = entry * sub;
        acc = sign > 0 ? acc + term : acc - term;
      }
      sign = -sign;
    }
    acc = simplify(acc);
    level.emplace(cols, acc);
    return acc;
  }

 private:
  const ExprMatrix& m_;
  std::vector<std::unordered_map<std::uint64_t, Expr>> memo_;
};

void require_square(const ExprMatrix& m) {
  for (const auto& row : m) {
    if (row.size() != m.size()) throw DimensionError("matrix is not square");
  }
  if (m.size() > 60) throw DimensionError("symbolic determinant limited to 60 x 60");
}

}  // namespace

Expr symbolic_determinant(const ExprMatrix& m) {
  require_square(m);
  if (m.empty()) return Expr(1.0);
  DeterminantExpansion d(m);
  const std::uint64_t all = m.size() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << m.size()) - 1;
  return d.minor(0, all);
}

ExprMatrix symbolic_inverse(const ExprMatrix& m) {
  require_square(m);
  const std::size_t n = m.size();
  const Expr det = symbolic_determinant(m);
  if (det.is_const(0.0)) throw NumericError("matrix is singular");
  ExprMatrix inv(n, std::vector<Expr>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      // inv[i][j] = cofactor C_ji / det
      ExprMatrix sub;
      sub.reserve(n - 1);
      for (std::size_t r = 0; r < n; ++r) {
        if (r == j) continue;
        std::vector<Expr> row;
        row.reserve(n - 1);
        for (std::size_t c = 0; c < n; ++c) {
          if (c != i) row.push_back(m[r][c]);
        }
        sub.push_back(std::move(row));
      }
      Expr cof = symbolic_determinant(sub);
      if ((i + j) % 2 == 1) cof = -cof;
      inv[i][j] = simplify(cof / det);
    }
  }
  return inv;
}

ExprMatrix transpose(const ExprMatrix& m) {
  if (m.empty()) return {};
  ExprMatrix t(m[0].size(), std::vector<Expr>(m.size()));
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m[i].size(); ++j) t[j][i] = m[i][j];
  }
  return t;
}

ExprMatrix multiply(const ExprMatrix& a, const ExprMatrix& b) {
  if (a.empty() || b.empty()) return {};
  const std::size_t inner = b.size();
  ExprMatrix out(a.size(), std::vector<Expr>(b[0].size()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != inner) throw DimensionError("matrix product shape mismatch");
    for (std::size_t j = 0; j < b[0].size(); ++j) {
      Expr acc;
      for (std::size_t k = 0; k < inner; ++k) {
        if (a[i][k].is_const(0.0) || b[k][j].is_const(0.0)) continue;
        acc = acc + a[i][k] * b[k][j];
      }
      out[i][j] = simplify(acc);
    }
  }
  return out;
}

Eigen::MatrixXd evaluate(const ExprMatrix& m, std::span<const double> x) {
  const auto rows = static_cast<Eigen::Index>(m.size());
  const auto cols = static_cast<Eigen::Index>(m.empty() ? 0 : m[0].size());
  Eigen::MatrixXd out(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      out(i, j) = m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].eval(x);
    }
  }
  return out;
}

namespace {

Eigen::Index count_above(const Eigen::VectorXd& s, double rel_tol, double scale) {
  if (s.size() == 0) return 0;
  const double threshold = rel_tol * std::max(s(0), scale);
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > threshold && s(i) > 0.0) ++r;
  }
  return r;
}

}  // namespace

std::size_t numerical_rank(const Eigen::MatrixXd& m, double rel_tol, double scale) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return static_cast<std::size_t>(count_above(svd.singularValues(), rel_tol, scale));
}

Eigen::MatrixXd row_space_basis(const Eigen::MatrixXd& m, double rel_tol, double scale) {
  if (m.rows() == 0) return Eigen::MatrixXd(0, m.cols());
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
  const Eigen::Index r = count_above(svd.singularValues(), rel_tol, scale);
  return svd.matrixV().leftCols(r).transpose();
}

}  // namespace gm
