#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "kuranishi/polymap.hpp"

namespace kur {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Evaluates a matrix-valued map at x.
Matrix eval_matrix(const PolyMatrix& m, std::span<const double> x);
Vector to_vector(std::span<const double> v);
std::vector<double> to_std(const Vector& v);

// Number of singular values above tol. Empty matrices have rank 0.
int numerical_rank(const Matrix& a, double tol);
Vector singular_values(const Matrix& a);

// Orthonormal bases from the SVD of a (columns). Deterministic for fixed input.
Matrix range_basis(const Matrix& a, double tol);        // im a
Matrix kernel_basis(const Matrix& a, double tol);       // ker a
Matrix orthogonal_complement(const Matrix& basis, int ambient);

// Exact integer determinant by fraction-free elimination.
long long integer_determinant(std::vector<std::vector<long long>> a);

}  // namespace kur
