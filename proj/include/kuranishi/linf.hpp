#pragma once

#include <map>
#include <span>
#include <stdexcept>
#include <vector>

#include "kuranishi/chart.hpp"
#include "kuranishi/linalg.hpp"

namespace kur {

struct AsymmetricTensorError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Symmetric k-linear map Sym^k R^dim -> R^out. One value per multiset of
// argument indices, so asymmetric data cannot be represented.
class SymmetricTensor {
 public:
  SymmetricTensor(int order, int dim, int out_dim);

  // Dense layout: [a][i1]...[ik], row-major, out_dim * dim^order entries.
  // Throws AsymmetricTensorError if two permuted entries differ by more than tol.
  static SymmetricTensor from_dense(int order, int dim, int out_dim, std::span<const double> dense,
                                    double tol = 1e-12);
  std::vector<double> to_dense() const;

  int order() const { return order_; }
  int dim() const { return dim_; }
  int out_dim() const { return out_dim_; }

  double get(int a, std::vector<int> idx) const;
  void set(int a, std::vector<int> idx, double v);
  // Nonzero entries keyed by sorted index multiset.
  const std::map<std::vector<int>, std::vector<double>>& entries() const { return entries_; }

  // l(x, ..., x) as a polynomial map R^dim -> R^out.
  PolyMap diagonal() const;

  friend bool operator==(const SymmetricTensor&, const SymmetricTensor&) = default;

 private:
  int order_, dim_, out_dim_;
  std::map<std::vector<int>, std::vector<double>> entries_;
};

// Curved L-infinity chart with constant brackets l_k : Sym^k H1 -> H2.
struct LinfChart {
  int h1 = 0;
  int h2 = 0;
  std::map<int, SymmetricTensor> brackets;  // keyed by k >= 2
  Matrix pairing;                            // h2 x h1, entry (a, i) = <e_a, e_i>
  double radius = 1.0;
  int k_max = 4;
};

// Chart (box of the given radius in H1, R^{h2}, sum_k l_k(x,...,x)/k!, origin).
KuranishiChart from_linf(const LinfChart& l);

// Reads l_k back from the degree-k Taylor coefficients of a section.
SymmetricTensor bracket_from_section(const PolyMap& section, int k);

struct Potential {
  PolyMap f;          // scalar map on H1
  bool verified = false;
  double residual = 0.0;  // coefficient distance between pairing^-1 grad f and the section
};

// f(x) = sum_k <l_k(x,...,x), x> / (k+1)!. The check compares (P^T)^{-1} grad f
// with the section, where P^T is the matrix of H2 -> (H1)^*, y -> <y, .>.
Potential potential(const LinfChart& l);

}  // namespace kur
