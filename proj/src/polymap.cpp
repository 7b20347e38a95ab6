#include "kuranishi/polymap.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace kur {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw DimensionError(what);
}

// Neumaier compensated accumulator.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v))
      carry += (sum - t) + v;
    else
      carry += (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + carry; }
};

int monomial_degree(const Monomial& e) {
  int d = 0;
  for (int k : e) d += k;
  return d;
}

}  // namespace

PolyMap::PolyMap(int n_in, int n_out) : n_in_(n_in), n_out_(n_out), coords_(n_out) {
  require(n_in >= 0 && n_out >= 0, "PolyMap: negative dimension");
}

PolyMap::PolyMap(int n_in, std::vector<Poly> coords)
    : n_in_(n_in), n_out_(static_cast<int>(coords.size())), coords_(std::move(coords)) {
  require(n_in >= 0, "PolyMap: negative dimension");
  for (const auto& p : coords_)
    for (const auto& [e, c] : p) {
      require(static_cast<int>(e.size()) == n_in_, "PolyMap: exponent length differs from n_in");
      for (int k : e) require(k >= 0, "PolyMap: negative exponent");
    }
  normalize();
}

PolyMap PolyMap::constant(int n_in, std::span<const double> values) {
  PolyMap p(n_in, static_cast<int>(values.size()));
  const Monomial zero(n_in, 0);
  for (std::size_t i = 0; i < values.size(); ++i) p.add_term(static_cast<int>(i), zero, values[i]);
  return p;
}

PolyMap PolyMap::identity(int n) {
  PolyMap p(n, n);
  for (int i = 0; i < n; ++i) {
    Monomial e(n, 0);
    e[i] = 1;
    p.add_term(i, e, 1.0);
  }
  return p;
}

PolyMap PolyMap::variable(int n_in, int j) {
  require(j >= 0 && j < n_in, "PolyMap::variable: index out of range");
  PolyMap p(n_in, 1);
  Monomial e(n_in, 0);
  e[j] = 1;
  p.add_term(0, e, 1.0);
  return p;
}

PolyMap PolyMap::affine(int n_in, int n_out, std::span<const double> a, std::span<const double> b) {
  require(static_cast<int>(a.size()) == n_in * n_out, "PolyMap::affine: matrix size");
  require(b.empty() || static_cast<int>(b.size()) == n_out, "PolyMap::affine: offset size");
  PolyMap p(n_in, n_out);
  for (int i = 0; i < n_out; ++i) {
    if (!b.empty()) p.add_term(i, Monomial(n_in, 0), b[i]);
    for (int j = 0; j < n_in; ++j) {
      Monomial e(n_in, 0);
      e[j] = 1;
      p.add_term(i, e, a[i * n_in + j]);
    }
  }
  return p;
}

void PolyMap::add_term(int i, const Monomial& e, double c) {
  require(i >= 0 && i < n_out_, "PolyMap::add_term: coordinate out of range");
  require(static_cast<int>(e.size()) == n_in_, "PolyMap::add_term: exponent length");
  if (c == 0.0) return;
  auto& p = coords_[i];
  auto [it, inserted] = p.try_emplace(e, c);
  if (!inserted) it->second += c;
  if (std::abs(it->second) < kDropTolerance) p.erase(it);
}

double PolyMap::eval_coord(int i, std::span<const double> x) const {
  require(static_cast<int>(x.size()) == n_in_, "PolyMap::eval: point dimension mismatch");
  return poly_eval(coords_.at(i), x);
}

std::vector<double> PolyMap::eval(std::span<const double> x) const {
  require(static_cast<int>(x.size()) == n_in_, "PolyMap::eval: point dimension mismatch");
  std::vector<double> out(n_out_);
  for (int i = 0; i < n_out_; ++i) out[i] = poly_eval(coords_[i], x);
  return out;
}

int PolyMap::degree() const {
  int d = 0;
  for (const auto& p : coords_)
    for (const auto& [e, c] : p) d = std::max(d, monomial_degree(e));
  return d;
}

bool PolyMap::is_zero() const {
  return std::all_of(coords_.begin(), coords_.end(), [](const Poly& p) { return p.empty(); });
}

std::size_t PolyMap::term_count() const {
  std::size_t n = 0;
  for (const auto& p : coords_) n += p.size();
  return n;
}

PolyMap PolyMap::component(int i) const { return slice(i, 1); }

PolyMap PolyMap::slice(int first, int count) const {
  require(first >= 0 && count >= 0 && first + count <= n_out_, "PolyMap::slice: out of range");
  return PolyMap(n_in_, std::vector<Poly>(coords_.begin() + first, coords_.begin() + first + count));
}

void PolyMap::normalize() {
  for (auto& p : coords_) poly_normalize(p);
}

// ---------------------------------------------------------------------------

PolyMatrix::PolyMatrix(int r, int c, PolyMap e) : rows(r), cols(c), entries(std::move(e)) {
  require(r >= 0 && c >= 0 && entries.n_out() == r * c, "PolyMatrix: entry count differs from rows*cols");
}

PolyMatrix PolyMatrix::identity(int n_in, int size) {
  PolyMap e(n_in, size * size);
  for (int i = 0; i < size; ++i) e.add_term(i * size + i, Monomial(n_in, 0), 1.0);
  return {size, size, std::move(e)};
}

PolyMatrix PolyMatrix::constant(int n_in, int r, int c, std::span<const double> values) {
  require(static_cast<int>(values.size()) == r * c, "PolyMatrix::constant: value count");
  return {r, c, PolyMap::constant(n_in, values)};
}

PolyMatrix PolyMatrix::column(PolyMap v) {
  const int r = v.n_out();
  return {r, 1, std::move(v)};
}

// ---------------------------------------------------------------------------

void poly_normalize(Poly& p) {
  std::erase_if(p, [](const auto& kv) { return std::abs(kv.second) < kDropTolerance; });
}

double poly_eval(const Poly& p, std::span<const double> x) {
  CompensatedSum acc;
  for (const auto& [e, c] : p) {
    double term = c;
    for (std::size_t j = 0; j < e.size(); ++j)
      for (int k = 0; k < e[j]; ++k) term *= x[j];
    acc.add(term);
  }
  return acc.value();
}

Poly poly_mul(const Poly& a, const Poly& b) {
  Poly out;
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b) {
      Monomial e(ea.size());
      for (std::size_t j = 0; j < e.size(); ++j) e[j] = ea[j] + eb[j];
      out[e] += ca * cb;
    }
  poly_normalize(out);
  return out;
}

void poly_add_scaled(Poly& acc, const Poly& b, double s) {
  if (s == 0.0) return;
  for (const auto& [e, c] : b) acc[e] += s * c;
  poly_normalize(acc);
}

Poly poly_derivative(const Poly& p, int var) {
  Poly out;
  for (const auto& [e, c] : p) {
    if (e[var] == 0) continue;
    Monomial d = e;
    d[var] -= 1;
    out[d] += c * e[var];
  }
  poly_normalize(out);
  return out;
}

// ---------------------------------------------------------------------------

PolyMap partial(const PolyMap& p, int var) {
  require(var >= 0 && var < p.n_in(), "partial: variable out of range");
  std::vector<Poly> out;
  out.reserve(p.n_out());
  for (const auto& c : p.coords()) out.push_back(poly_derivative(c, var));
  return PolyMap(p.n_in(), std::move(out));
}

PolyMap jacobian(const PolyMap& p) {
  std::vector<Poly> out;
  out.reserve(static_cast<std::size_t>(p.n_out()) * p.n_in());
  for (const auto& c : p.coords())
    for (int j = 0; j < p.n_in(); ++j) out.push_back(poly_derivative(c, j));
  return PolyMap(p.n_in(), std::move(out));
}

PolyMatrix jacobian_matrix(const PolyMap& p) { return {p.n_out(), p.n_in(), jacobian(p)}; }

PolyMap compose(const PolyMap& outer, const PolyMap& inner) {
  require(inner.n_out() == outer.n_in(), "compose: inner.n_out != outer.n_in");
  const int m = outer.n_in();
  std::vector<int> max_power(m, 0);
  for (const auto& c : outer.coords())
    for (const auto& [e, coeff] : c)
      for (int j = 0; j < m; ++j) max_power[j] = std::max(max_power[j], e[j]);

  // powers[j][k] = inner_j^k
  std::vector<std::vector<Poly>> powers(m);
  const Poly one{{Monomial(inner.n_in(), 0), 1.0}};
  for (int j = 0; j < m; ++j) {
    powers[j].push_back(one);
    for (int k = 1; k <= max_power[j]; ++k) powers[j].push_back(poly_mul(powers[j].back(), inner.coord(j)));
  }

  std::vector<Poly> out(outer.n_out());
  for (int i = 0; i < outer.n_out(); ++i) {
    for (const auto& [e, c] : outer.coord(i)) {
      Poly term = one;
      for (int j = 0; j < m; ++j)
        if (e[j] > 0) term = poly_mul(term, powers[j][e[j]]);
      poly_add_scaled(out[i], term, c);
    }
  }
  return PolyMap(inner.n_in(), std::move(out));
}

PolyMatrix compose(const PolyMatrix& outer, const PolyMap& inner) {
  return {outer.rows, outer.cols, compose(outer.entries, inner)};
}

PolyMap add(const PolyMap& p, const PolyMap& q) {
  require(p.n_in() == q.n_in() && p.n_out() == q.n_out(), "add: dimension mismatch");
  std::vector<Poly> out = p.coords();
  for (int i = 0; i < q.n_out(); ++i) poly_add_scaled(out[i], q.coord(i), 1.0);
  return PolyMap(p.n_in(), std::move(out));
}

PolyMap subtract(const PolyMap& p, const PolyMap& q) {
  require(p.n_in() == q.n_in() && p.n_out() == q.n_out(), "subtract: dimension mismatch");
  std::vector<Poly> out = p.coords();
  for (int i = 0; i < q.n_out(); ++i) poly_add_scaled(out[i], q.coord(i), -1.0);
  return PolyMap(p.n_in(), std::move(out));
}

PolyMap scale(const PolyMap& p, double s) {
  std::vector<Poly> out = p.coords();
  for (auto& c : out)
    for (auto& [e, v] : c) v *= s;
  return PolyMap(p.n_in(), std::move(out));
}

PolyMap truncate(const PolyMap& p, int max_degree) {
  std::vector<Poly> out = p.coords();
  for (auto& c : out) std::erase_if(c, [&](const auto& kv) { return monomial_degree(kv.first) > max_degree; });
  return PolyMap(p.n_in(), std::move(out));
}

PolyMap hadamard(const PolyMap& p, const PolyMap& q) {
  require(p.n_in() == q.n_in() && p.n_out() == q.n_out(), "hadamard: dimension mismatch");
  std::vector<Poly> out(p.n_out());
  for (int i = 0; i < p.n_out(); ++i) out[i] = poly_mul(p.coord(i), q.coord(i));
  return PolyMap(p.n_in(), std::move(out));
}

PolyMap stack(const PolyMap& top, const PolyMap& bottom) {
  require(top.n_in() == bottom.n_in(), "stack: input dimension mismatch");
  std::vector<Poly> out = top.coords();
  out.insert(out.end(), bottom.coords().begin(), bottom.coords().end());
  return PolyMap(top.n_in(), std::move(out));
}

PolyMatrix add(const PolyMatrix& a, const PolyMatrix& b) {
  require(a.rows == b.rows && a.cols == b.cols, "matrix add: shape mismatch");
  return {a.rows, a.cols, add(a.entries, b.entries)};
}

PolyMatrix subtract(const PolyMatrix& a, const PolyMatrix& b) {
  require(a.rows == b.rows && a.cols == b.cols, "matrix subtract: shape mismatch");
  return {a.rows, a.cols, subtract(a.entries, b.entries)};
}

PolyMatrix scale(const PolyMatrix& a, double s) { return {a.rows, a.cols, scale(a.entries, s)}; }

PolyMatrix matmul(const PolyMatrix& a, const PolyMatrix& b) {
  require(a.cols == b.rows, "matmul: inner dimension mismatch");
  require(a.n_in() == b.n_in(), "matmul: input dimension mismatch");
  std::vector<Poly> out(static_cast<std::size_t>(a.rows) * b.cols);
  for (int i = 0; i < a.rows; ++i)
    for (int j = 0; j < b.cols; ++j) {
      Poly& acc = out[i * b.cols + j];
      for (int k = 0; k < a.cols; ++k) {
        const Poly& x = a.at(i, k);
        const Poly& y = b.at(k, j);
        if (x.empty() || y.empty()) continue;
        poly_add_scaled(acc, poly_mul(x, y), 1.0);
      }
    }
  return {a.rows, b.cols, PolyMap(a.n_in(), std::move(out))};
}

PolyMap apply(const PolyMatrix& a, const PolyMap& v) {
  return matmul(a, PolyMatrix::column(v)).entries;
}

PolyMatrix transpose(const PolyMatrix& a) {
  std::vector<Poly> out(static_cast<std::size_t>(a.rows) * a.cols);
  for (int i = 0; i < a.rows; ++i)
    for (int j = 0; j < a.cols; ++j) out[j * a.rows + i] = a.at(i, j);
  return {a.cols, a.rows, PolyMap(a.n_in(), std::move(out))};
}

PolyMatrix hstack(const PolyMatrix& left, const PolyMatrix& right) {
  require(left.rows == right.rows && left.n_in() == right.n_in(), "hstack: shape mismatch");
  const int cols = left.cols + right.cols;
  std::vector<Poly> out(static_cast<std::size_t>(left.rows) * cols);
  for (int i = 0; i < left.rows; ++i) {
    for (int j = 0; j < left.cols; ++j) out[i * cols + j] = left.at(i, j);
    for (int j = 0; j < right.cols; ++j) out[i * cols + left.cols + j] = right.at(i, j);
  }
  return {left.rows, cols, PolyMap(left.n_in(), std::move(out))};
}

PolyMatrix vstack(const PolyMatrix& top, const PolyMatrix& bottom) {
  require(top.cols == bottom.cols && top.n_in() == bottom.n_in(), "vstack: shape mismatch");
  return {top.rows + bottom.rows, top.cols, stack(top.entries, bottom.entries)};
}

PolyMap append_variables(const PolyMap& p, int count) { return embed_inputs(p, 0, count); }

PolyMap embed_inputs(const PolyMap& p, int before, int after) {
  require(before >= 0 && after >= 0, "embed_inputs: negative count");
  const int n = before + p.n_in() + after;
  std::vector<Poly> out(p.n_out());
  for (int i = 0; i < p.n_out(); ++i)
    for (const auto& [e, c] : p.coord(i)) {
      Monomial f(n, 0);
      std::copy(e.begin(), e.end(), f.begin() + before);
      out[i][f] = c;
    }
  return PolyMap(n, std::move(out));
}

PolyMap fix_last_variable(const PolyMap& p, double value) {
  require(p.n_in() >= 1, "fix_last_variable: no variables");
  const int n = p.n_in() - 1;
  std::vector<Poly> out(p.n_out());
  for (int i = 0; i < p.n_out(); ++i) {
    for (const auto& [e, c] : p.coord(i)) {
      Monomial f(e.begin(), e.end() - 1);
      out[i][f] += c * std::pow(value, e.back());
    }
    poly_normalize(out[i]);
  }
  return PolyMap(n, std::move(out));
}

PolyMap integrate_last_variable(const PolyMap& p, double lo, double hi) {
  require(p.n_in() >= 1, "integrate_last_variable: no variables");
  const int n = p.n_in() - 1;
  std::vector<Poly> out(p.n_out());
  for (int i = 0; i < p.n_out(); ++i) {
    for (const auto& [e, c] : p.coord(i)) {
      const int k = e.back() + 1;
      Monomial f(e.begin(), e.end() - 1);
      out[i][f] += c * (std::pow(hi, k) - std::pow(lo, k)) / k;
    }
    poly_normalize(out[i]);
  }
  return PolyMap(n, std::move(out));
}

double max_coefficient_difference(const PolyMap& p, const PolyMap& q) {
  require(p.n_in() == q.n_in() && p.n_out() == q.n_out(), "coefficient comparison: dimension mismatch");
  return max_abs_coefficient(subtract(p, q));
}

bool approx_equal(const PolyMap& p, const PolyMap& q, double tol) {
  return max_coefficient_difference(p, q) <= tol;
}

double max_abs_coefficient(const PolyMap& p) {
  double m = 0.0;
  for (const auto& c : p.coords())
    for (const auto& [e, v] : c) m = std::max(m, std::abs(v));
  return m;
}

std::string to_string(const PolyMap& p) {
  std::ostringstream os;
  os.precision(12);
  for (int i = 0; i < p.n_out(); ++i) {
    if (i) os << ", ";
    if (p.coord(i).empty()) {
      os << "0";
      continue;
    }
    bool first = true;
    for (const auto& [e, c] : p.coord(i)) {
      if (!first) os << (c < 0 ? " - " : " + ");
      else if (c < 0) os << "-";
      first = false;
      os << std::abs(c);
      for (std::size_t j = 0; j < e.size(); ++j)
        if (e[j] > 0) {
          os << "*x" << j;
          if (e[j] > 1) os << "^" << e[j];
        }
    }
  }
  return "(" + os.str() + ")";
}

}  // namespace kur
