#include "kuranishi/quaternion.hpp"

#include <numbers>

namespace kur {

Quat Quat::basis(int k) {
  Quat q{0.0, 0.0, 0.0, 0.0};
  q[k] = 1.0;
  return q;
}

Quat Quat::normalized() const {
  const double n = norm();
  return {a / n, b / n, c / n, d / n};
}

Quat operator*(const Quat& p, const Quat& q) {
  return {p.a * q.a - p.b * q.b - p.c * q.c - p.d * q.d, p.a * q.b + p.b * q.a + p.c * q.d - p.d * q.c,
          p.a * q.c - p.b * q.d + p.c * q.a + p.d * q.b, p.a * q.d + p.b * q.c - p.c * q.b + p.d * q.a};
}

Quat operator+(const Quat& p, const Quat& q) { return {p.a + q.a, p.b + q.b, p.c + q.c, p.d + q.d}; }

Quat operator*(double s, const Quat& q) { return {s * q.a, s * q.b, s * q.c, s * q.d}; }

Quat exp_pure(const std::array<double, 3>& v) {
  const double t = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  if (t < 1e-300) return {};
  const double s = std::sin(t) / t;
  return {std::cos(t), s * v[0], s * v[1], s * v[2]};
}

Quat power(const Quat& q, int e) {
  const Quat base = e < 0 ? q.conj() : q;
  Quat out;
  for (int k = 0; k < std::abs(e); ++k) out = out * base;
  return out;
}

Matrix adjoint(const Quat& q) {
  Matrix r(3, 3);
  const Quat inv = q.conj();
  for (int col = 0; col < 3; ++col) {
    const Quat v = q * Quat::basis(col + 1) * inv;
    for (int row = 0; row < 3; ++row) r(row, col) = v[row + 1];
  }
  return r;
}

Quat uniform_quat(double u1, double u2, double u3) {
  const double two_pi = 2.0 * std::numbers::pi;
  const double r1 = std::sqrt(1.0 - u1), r2 = std::sqrt(u1);
  return {r2 * std::cos(two_pi * u3), r1 * std::sin(two_pi * u2), r1 * std::cos(two_pi * u2),
          r2 * std::sin(two_pi * u3)};
}

}  // namespace kur
