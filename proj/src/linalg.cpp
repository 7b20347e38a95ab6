#include "kuranishi/linalg.hpp"

#include <cstdlib>
#include <stdexcept>

namespace kur {

Matrix eval_matrix(const PolyMatrix& m, std::span<const double> x) {
  const auto v = m.eval(x);
  Matrix out(m.rows, m.cols);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) out(i, j) = v[i * m.cols + j];
  return out;
}

Vector to_vector(std::span<const double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = v[i];
  return out;
}

std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

Vector singular_values(const Matrix& a) {
  if (a.rows() == 0 || a.cols() == 0) return Vector(0);
  return Eigen::JacobiSVD<Matrix>(a).singularValues();
}

int numerical_rank(const Matrix& a, double tol) {
  const Vector s = singular_values(a);
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > tol) ++r;
  return r;
}

Matrix range_basis(const Matrix& a, double tol) {
  if (a.rows() == 0 || a.cols() == 0) return Matrix(a.rows(), 0);
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU);
  const int r = numerical_rank(a, tol);
  return svd.matrixU().leftCols(r);
}

Matrix kernel_basis(const Matrix& a, double tol) {
  if (a.cols() == 0) return Matrix(0, 0);
  if (a.rows() == 0) return Matrix::Identity(a.cols(), a.cols());
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
  const int r = numerical_rank(a, tol);
  return svd.matrixV().rightCols(a.cols() - r);
}

Matrix orthogonal_complement(const Matrix& basis, int ambient) {
  if (basis.cols() == 0) return Matrix::Identity(ambient, ambient);
  // Columns of basis are orthonormal; the complement is the kernel of basis^T.
  return kernel_basis(basis.transpose(), 1e-10);
}

long long integer_determinant(std::vector<std::vector<long long>> a) {
  const std::size_t n = a.size();
  if (n == 0) return 1;
  for (const auto& row : a)
    if (row.size() != n) throw std::invalid_argument("integer_determinant: matrix is not square");
  // Bareiss elimination; every intermediate value is an exact minor.
  long long sign = 1;
  long long prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t p = k + 1;
      while (p < n && a[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(a[k], a[p]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        const __int128 num = static_cast<__int128>(a[i][j]) * a[k][k] - static_cast<__int128>(a[i][k]) * a[k][j];
        a[i][j] = static_cast<long long>(num / prev);
      }
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

}  // namespace kur
