#pragma once

#include <array>
#include <cmath>

#include "kuranishi/linalg.hpp"

namespace kur {

// a + b i + c j + d k
struct Quat {
  double a = 1.0, b = 0.0, c = 0.0, d = 0.0;

  static Quat basis(int k);  // 1, i, j, k for k = 0..3
  static Quat pure(const std::array<double, 3>& v) { return {0.0, v[0], v[1], v[2]}; }

  double operator[](int k) const { return k == 0 ? a : k == 1 ? b : k == 2 ? c : d; }
  double& operator[](int k) { return k == 0 ? a : k == 1 ? b : k == 2 ? c : d; }

  Quat conj() const { return {a, -b, -c, -d}; }
  double norm2() const { return a * a + b * b + c * c + d * d; }
  double norm() const { return std::sqrt(norm2()); }
  Quat normalized() const;
  std::array<double, 3> imag() const { return {b, c, d}; }
  // 2 Re q, the SU(2) trace.
  double trace() const { return 2.0 * a; }

  friend bool operator==(const Quat&, const Quat&) = default;
};

Quat operator*(const Quat& p, const Quat& q);
Quat operator+(const Quat& p, const Quat& q);
Quat operator*(double s, const Quat& q);

// exp of the pure quaternion v: cos|v| + sin|v| v/|v|.
Quat exp_pure(const std::array<double, 3>& v);
// q^e with negative powers through the conjugate.
Quat power(const Quat& q, int e);

// Rotation matrix of v -> q v q^-1 on the imaginary part.
Matrix adjoint(const Quat& q);

// Unit quaternion from three numbers in [0, 1) (uniform on S^3 for uniform input).
Quat uniform_quat(double u1, double u2, double u3);

}  // namespace kur
