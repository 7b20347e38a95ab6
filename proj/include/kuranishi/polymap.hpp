#pragma once

#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace kur {

// Thrown whenever two objects with incompatible dimensions are combined.
struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

using Monomial = std::vector<int>;
using Poly = std::map<Monomial, double>;  // one scalar polynomial, exponent -> coefficient

inline constexpr double kDropTolerance = 1e-15;
inline constexpr double kIdentityTolerance = 1e-9;

// Sparse polynomial map R^n_in -> R^n_out with double coefficients.
//
// Each output coordinate is a map from multi-exponent to coefficient. The
// object is normalized on construction and after every arithmetic operation:
// no duplicate exponents (guaranteed by the map) and no coefficient with
// magnitude below kDropTolerance.
class PolyMap {
 public:
  PolyMap() = default;
  PolyMap(int n_in, int n_out);
  PolyMap(int n_in, std::vector<Poly> coords);

  static PolyMap zero(int n_in, int n_out) { return PolyMap(n_in, n_out); }
  static PolyMap constant(int n_in, std::span<const double> values);
  static PolyMap identity(int n);
  // x -> x_j as a one-output map.
  static PolyMap variable(int n_in, int j);
  // x -> A x + b. A is row-major n_out x n_in.
  static PolyMap affine(int n_in, int n_out, std::span<const double> a, std::span<const double> b);

  int n_in() const { return n_in_; }
  int n_out() const { return n_out_; }
  const Poly& coord(int i) const { return coords_.at(i); }
  const std::vector<Poly>& coords() const { return coords_; }

  // Adds c * x^e to coordinate i (accumulating), then drops it if it cancels.
  void add_term(int i, const Monomial& e, double c);

  std::vector<double> eval(std::span<const double> x) const;
  double eval_coord(int i, std::span<const double> x) const;

  int degree() const;
  bool is_zero() const;
  std::size_t term_count() const;

  // Coordinate i as a one-output map.
  PolyMap component(int i) const;
  // Coordinates [first, first + count).
  PolyMap slice(int first, int count) const;

  void normalize();

  friend bool operator==(const PolyMap&, const PolyMap&) = default;

 private:
  int n_in_ = 0;
  int n_out_ = 0;
  std::vector<Poly> coords_;
};

// Matrix-valued polynomial map; entries stored row-major in a PolyMap.
struct PolyMatrix {
  int rows = 0;
  int cols = 0;
  PolyMap entries;

  PolyMatrix() = default;
  PolyMatrix(int r, int c, PolyMap e);

  static PolyMatrix zero(int n_in, int r, int c) { return {r, c, PolyMap(n_in, r * c)}; }
  static PolyMatrix identity(int n_in, int size);
  static PolyMatrix constant(int n_in, int r, int c, std::span<const double> values);
  // A vector-valued map viewed as a column.
  static PolyMatrix column(PolyMap v);

  int n_in() const { return entries.n_in(); }
  const Poly& at(int r, int c) const { return entries.coord(r * cols + c); }
  std::vector<double> eval(std::span<const double> x) const { return entries.eval(x); }

  friend bool operator==(const PolyMatrix&, const PolyMatrix&) = default;
};

// --- polynomial algebra on single scalar polynomials ---
Poly poly_mul(const Poly& a, const Poly& b);
void poly_add_scaled(Poly& acc, const Poly& b, double s);
Poly poly_derivative(const Poly& p, int var);
double poly_eval(const Poly& p, std::span<const double> x);
void poly_normalize(Poly& p);

// --- map operations ---
PolyMap jacobian(const PolyMap& p);  // n_out*n_in outputs, row-major (i, j) = dp_i/dx_j
PolyMatrix jacobian_matrix(const PolyMap& p);
PolyMap partial(const PolyMap& p, int var);
PolyMap compose(const PolyMap& outer, const PolyMap& inner);
PolyMatrix compose(const PolyMatrix& outer, const PolyMap& inner);

PolyMap add(const PolyMap& p, const PolyMap& q);
PolyMap subtract(const PolyMap& p, const PolyMap& q);
PolyMap scale(const PolyMap& p, double s);
PolyMap truncate(const PolyMap& p, int max_degree);
// Coordinate-wise product of two maps with the same n_out.
PolyMap hadamard(const PolyMap& p, const PolyMap& q);
// Concatenation of outputs; both maps share the input space.
PolyMap stack(const PolyMap& top, const PolyMap& bottom);

PolyMatrix add(const PolyMatrix& a, const PolyMatrix& b);
PolyMatrix subtract(const PolyMatrix& a, const PolyMatrix& b);
PolyMatrix scale(const PolyMatrix& a, double s);
PolyMatrix matmul(const PolyMatrix& a, const PolyMatrix& b);
PolyMap apply(const PolyMatrix& a, const PolyMap& v);
PolyMatrix transpose(const PolyMatrix& a);
PolyMatrix hstack(const PolyMatrix& left, const PolyMatrix& right);
PolyMatrix vstack(const PolyMatrix& top, const PolyMatrix& bottom);

// Input-space manipulation.
// Treats p as a map of (x, extra...) where the extra variables are appended.
PolyMap append_variables(const PolyMap& p, int count);
// Substitutes value for the last input variable; result has n_in - 1 inputs.
PolyMap fix_last_variable(const PolyMap& p, double value);
// Definite integral of p over its last input variable from lo to hi.
PolyMap integrate_last_variable(const PolyMap& p, double lo, double hi);
// p(x) as a function on R^{a} x R^{n} x R^{b}: (u, x, w) -> p(x).
PolyMap embed_inputs(const PolyMap& p, int before, int after);

// Largest coefficient-wise difference; throws DimensionError on shape mismatch.
double max_coefficient_difference(const PolyMap& p, const PolyMap& q);
bool approx_equal(const PolyMap& p, const PolyMap& q, double tol = kIdentityTolerance);
double max_abs_coefficient(const PolyMap& p);

std::string to_string(const PolyMap& p);

}  // namespace kur
