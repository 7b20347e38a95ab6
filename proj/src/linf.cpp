#include "kuranishi/linf.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace kur {

namespace {

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

Monomial multiset_to_exponent(const std::vector<int>& idx, int dim) {
  Monomial e(dim, 0);
  for (int i : idx) ++e[i];
  return e;
}

std::vector<int> exponent_to_multiset(const Monomial& e) {
  std::vector<int> idx;
  for (std::size_t i = 0; i < e.size(); ++i)
    for (int k = 0; k < e[i]; ++k) idx.push_back(static_cast<int>(i));
  return idx;
}

double multinomial_denominator(const Monomial& e) {
  double d = 1.0;
  for (int k : e) d *= factorial(k);
  return d;
}

}  // namespace

SymmetricTensor::SymmetricTensor(int order, int dim, int out_dim) : order_(order), dim_(dim), out_dim_(out_dim) {
  if (order < 1 || dim < 0 || out_dim < 0) throw DimensionError("SymmetricTensor: invalid shape");
}

double SymmetricTensor::get(int a, std::vector<int> idx) const {
  if (static_cast<int>(idx.size()) != order_) throw DimensionError("SymmetricTensor::get: wrong arity");
  std::sort(idx.begin(), idx.end());
  auto it = entries_.find(idx);
  return it == entries_.end() ? 0.0 : it->second.at(a);
}

void SymmetricTensor::set(int a, std::vector<int> idx, double v) {
  if (static_cast<int>(idx.size()) != order_) throw DimensionError("SymmetricTensor::set: wrong arity");
  if (a < 0 || a >= out_dim_) throw DimensionError("SymmetricTensor::set: output index out of range");
  for (int i : idx)
    if (i < 0 || i >= dim_) throw DimensionError("SymmetricTensor::set: argument index out of range");
  std::sort(idx.begin(), idx.end());
  auto& slot = entries_[idx];
  if (slot.empty()) slot.assign(out_dim_, 0.0);
  slot[a] = v;
  if (std::all_of(slot.begin(), slot.end(), [](double c) { return c == 0.0; })) entries_.erase(idx);
}

SymmetricTensor SymmetricTensor::from_dense(int order, int dim, int out_dim, std::span<const double> dense,
                                            double tol) {
  std::size_t per_out = 1;
  for (int k = 0; k < order; ++k) per_out *= static_cast<std::size_t>(dim);
  if (dense.size() != per_out * static_cast<std::size_t>(out_dim))
    throw DimensionError("SymmetricTensor::from_dense: expected out_dim * dim^order entries");
  SymmetricTensor t(order, dim, out_dim);
  std::vector<int> idx(order);
  for (int a = 0; a < out_dim; ++a)
    for (std::size_t flat = 0; flat < per_out; ++flat) {
      std::size_t rest = flat;
      for (int k = order - 1; k >= 0; --k) {
        idx[k] = static_cast<int>(rest % dim);
        rest /= dim;
      }
      const double v = dense[a * per_out + flat];
      std::vector<int> key = idx;
      std::sort(key.begin(), key.end());
      if (key == idx) {
        t.set(a, key, v);
      }
    }
  // Every permuted entry must match its sorted representative.
  for (int a = 0; a < out_dim; ++a)
    for (std::size_t flat = 0; flat < per_out; ++flat) {
      std::size_t rest = flat;
      for (int k = order - 1; k >= 0; --k) {
        idx[k] = static_cast<int>(rest % dim);
        rest /= dim;
      }
      const double v = dense[a * per_out + flat];
      if (std::abs(v - t.get(a, idx)) > tol) {
        std::ostringstream os;
        os << "bracket of order " << order << " is not symmetric at output " << a << ", flat index " << flat;
        throw AsymmetricTensorError(os.str());
      }
    }
  return t;
}

std::vector<double> SymmetricTensor::to_dense() const {
  std::size_t per_out = 1;
  for (int k = 0; k < order_; ++k) per_out *= static_cast<std::size_t>(dim_);
  std::vector<double> out(per_out * out_dim_, 0.0);
  std::vector<int> idx(order_);
  for (int a = 0; a < out_dim_; ++a)
    for (std::size_t flat = 0; flat < per_out; ++flat) {
      std::size_t rest = flat;
      for (int k = order_ - 1; k >= 0; --k) {
        idx[k] = static_cast<int>(rest % dim_);
        rest /= dim_;
      }
      out[a * per_out + flat] = get(a, idx);
    }
  return out;
}

PolyMap SymmetricTensor::diagonal() const {
  PolyMap p(dim_, out_dim_);
  const double kf = factorial(order_);
  for (const auto& [idx, vals] : entries_) {
    const Monomial e = multiset_to_exponent(idx, dim_);
    const double orderings = kf / multinomial_denominator(e);
    for (int a = 0; a < out_dim_; ++a) p.add_term(a, e, vals[a] * orderings);
  }
  return p;
}

KuranishiChart from_linf(const LinfChart& l) {
  if (l.k_max < 2) throw std::invalid_argument("from_linf: truncation order must be >= 2");
  PolyMap s(l.h1, l.h2);
  for (const auto& [k, t] : l.brackets) {
    if (k < 2) throw std::invalid_argument("from_linf: brackets start at k = 2");
    if (t.dim() != l.h1 || t.out_dim() != l.h2 || t.order() != k)
      throw DimensionError("from_linf: bracket shape does not match (h1, h2)");
    if (k > l.k_max) continue;
    s = add(s, scale(t.diagonal(), 1.0 / factorial(k)));
  }
  std::map<std::string, std::string> meta{{"truncation_order", std::to_string(l.k_max)},
                                          {"source", "linf"}};
  return KuranishiChart("linf", BoxUnion::cube(l.h1, l.radius), l.h2, std::move(s), 1,
                        {FootprintPoint{"origin", std::vector<double>(l.h1, 0.0)}}, std::move(meta));
}

SymmetricTensor bracket_from_section(const PolyMap& section, int k) {
  SymmetricTensor t(k, section.n_in(), section.n_out());
  for (int a = 0; a < section.n_out(); ++a)
    for (const auto& [e, c] : section.coord(a)) {
      int deg = 0;
      for (int x : e) deg += x;
      if (deg != k) continue;
      t.set(a, exponent_to_multiset(e), c * multinomial_denominator(e));
    }
  return t;
}

Potential potential(const LinfChart& l) {
  if (l.pairing.rows() != l.h2 || l.pairing.cols() != l.h1)
    throw DimensionError("potential: pairing must be h2 x h1");
  if (l.h1 != l.h2) throw std::invalid_argument("potential: pairing is not square (h1 != h2)");
  const Vector sv = singular_values(l.pairing);
  if (l.h1 > 0 && !(sv.minCoeff() > 1e-12 * std::max(1.0, sv.maxCoeff())))
    throw std::invalid_argument("potential: pairing is singular");

  const KuranishiChart chart = from_linf(l);
  const int n = l.h1;
  // f = sum_k 1/(k+1) <s_k(x), x>, with s_k the degree-k part of the section.
  PolyMap f(n, 1);
  for (const auto& [k, t] : l.brackets) {
    if (k > l.k_max) continue;
    const PolyMap sk = scale(t.diagonal(), 1.0 / factorial(k));
    for (int a = 0; a < l.h2; ++a)
      for (int i = 0; i < n; ++i) {
        const double w = l.pairing(a, i) / (k + 1);
        if (w == 0.0) continue;
        const Poly prod = poly_mul(sk.coord(a), PolyMap::variable(n, i).coord(0));
        for (const auto& [e, c] : prod) f.add_term(0, e, w * c);
      }
  }

  Potential out;
  out.f = f;
  const PolyMap grad = jacobian(f);  // 1 x n, i.e. n coordinates
  const Matrix inv = l.pairing.transpose().inverse();
  std::vector<double> row_major(static_cast<std::size_t>(n) * n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) row_major[r * n + c] = inv(r, c);
  const PolyMatrix invm = PolyMatrix::constant(n, n, n, row_major);
  const PolyMap recovered = apply(invm, grad);
  out.residual = max_coefficient_difference(recovered, chart.section());
  out.verified = out.residual <= kIdentityTolerance;
  return out;
}

}  // namespace kur
