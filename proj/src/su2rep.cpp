#include "kuranishi/su2rep.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

#include "kuranishi/parallel.hpp"

namespace kur {

namespace {

struct Letter {
  int gen;
  bool inv;
};

std::vector<Letter> letters(const Word& w) {
  std::vector<Letter> out;
  for (const auto& [g, e] : w)
    for (int k = 0; k < std::abs(e); ++k) out.push_back({g, e < 0});
  return out;
}

Quat letter_value(const Letter& l, const std::vector<Quat>& q) { return l.inv ? q[l.gen].conj() : q[l.gen]; }

Quat conjugate_by(const Quat& u, const Quat& q) { return u * q * u.conj(); }

Quat rotation(const std::array<double, 3>& axis, double angle) {
  const double s = std::sin(angle / 2);
  return {std::cos(angle / 2), s * axis[0], s * axis[1], s * axis[2]};
}

double norm3(const std::array<double, 3>& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

std::array<double, 3> cross(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

double round_step(double v) {
  const double r = std::round(v / kFingerprintStep) * kFingerprintStep;
  return r == 0.0 ? 0.0 : r;
}

// Residual and Jacobian of the relator system at y (4g unknowns).
struct System {
  const GroupPresentation& p;
  std::vector<std::vector<Letter>> words;
  int g, rows;

  explicit System(const GroupPresentation& pres) : p(pres), g(pres.g()), rows(3 * pres.r() + pres.g()) {
    for (const auto& w : p.relators) words.push_back(letters(w));
  }

  void residual(const std::vector<Quat>& q, Vector& f) const {
    f.resize(rows);
    for (std::size_t j = 0; j < words.size(); ++j) {
      Quat prod;
      for (const auto& l : words[j]) prod = prod * letter_value(l, q);
      f(3 * j) = prod.b;
      f(3 * j + 1) = prod.c;
      f(3 * j + 2) = prod.d;
    }
    const int base = 3 * static_cast<int>(words.size());
    for (int i = 0; i < g; ++i) f(base + i) = q[i].norm2() - 1.0;
  }

  void jacobian(const std::vector<Quat>& q, Matrix& J) const {
    J.setZero(rows, 4 * g);
    std::vector<Quat> prefix, suffix;
    for (std::size_t j = 0; j < words.size(); ++j) {
      const auto& w = words[j];
      const std::size_t n = w.size();
      prefix.assign(n + 1, Quat{});
      suffix.assign(n + 1, Quat{});
      for (std::size_t k = 0; k < n; ++k) prefix[k + 1] = prefix[k] * letter_value(w[k], q);
      for (std::size_t k = n; k-- > 0;) suffix[k] = letter_value(w[k], q) * suffix[k + 1];
      for (std::size_t k = 0; k < n; ++k)
        for (int c = 0; c < 4; ++c) {
          Quat e = Quat::basis(c);
          if (w[k].inv) e = e.conj();
          const Quat d = prefix[k] * e * suffix[k + 1];
          J(3 * j, 4 * w[k].gen + c) += d.b;
          J(3 * j + 1, 4 * w[k].gen + c) += d.c;
          J(3 * j + 2, 4 * w[k].gen + c) += d.d;
        }
    }
    const int base = 3 * static_cast<int>(words.size());
    for (int i = 0; i < g; ++i)
      for (int c = 0; c < 4; ++c) J(base + i, 4 * i + c) = 2.0 * q[i][c];
  }
};

void step(std::vector<Quat>& q, const Vector& d) {
  for (std::size_t i = 0; i < q.size(); ++i)
    for (int c = 0; c < 4; ++c) q[i][c] += d(4 * i + c);
}

}  // namespace

GroupPresentation::GroupPresentation(std::vector<std::string> gens, std::vector<Word> rels)
    : generators(std::move(gens)), relators(std::move(rels)) {
  for (std::size_t j = 0; j < relators.size(); ++j)
    for (const auto& [i, e] : relators[j]) {
      if (i < 0 || i >= g())
        throw PresentationError("relator " + std::to_string(j) + ": generator index " + std::to_string(i) +
                                " out of range");
      if (e == 0) throw PresentationError("relator " + std::to_string(j) + ": zero exponent");
    }
}

Quat word_eval(const Word& w, const std::vector<Quat>& q) {
  Quat out;
  for (const auto& [i, e] : w) {
    if (i < 0 || i >= static_cast<int>(q.size()))
      throw PresentationError("word_eval: generator index " + std::to_string(i) + " out of range");
    out = out * power(q[i], e);
  }
  return out;
}

HomologyCheck homology_sphere_check(const GroupPresentation& p) {
  if (!p.balanced())
    throw PresentationError("homology_sphere_check: presentation is not balanced (" + std::to_string(p.g()) +
                            " generators, " + std::to_string(p.r()) + " relators)");
  HomologyCheck h;
  h.matrix.assign(p.r(), std::vector<long long>(p.g(), 0));
  for (int j = 0; j < p.r(); ++j)
    for (const auto& [i, e] : p.relators[j]) h.matrix[j][i] += e;
  h.det = integer_determinant(h.matrix);
  h.homology_sphere = std::llabs(h.det) == 1;
  return h;
}

PolyMap relator_system(const GroupPresentation& p) {
  const int n = 4 * p.g();
  // Each quaternion coordinate as a linear polynomial in the 4g unknowns.
  auto var = [n](int k) {
    Monomial e(n, 0);
    e[k] = 1;
    return Poly{{e, 1.0}};
  };
  using PQuat = std::array<Poly, 4>;
  auto mul = [](const PQuat& x, const PQuat& y) {
    static const int sign[4][4] = {{1, -1, -1, -1}, {1, 1, 1, -1}, {1, -1, 1, 1}, {1, 1, -1, 1}};
    static const int idx[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
    // out[r] = sum over c of sign[r][c] * x[c] * y[idx[r][c]]
    PQuat out;
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) poly_add_scaled(out[r], poly_mul(x[c], y[idx[r][c]]), sign[r][c]);
    return out;
  };
  PolyMap out(n, 3 * p.r() + p.g());
  const Monomial zero(n, 0);
  for (int j = 0; j < p.r(); ++j) {
    PQuat prod{Poly{{zero, 1.0}}, Poly{}, Poly{}, Poly{}};
    for (const auto& l : letters(p.relators[j])) {
      PQuat q{var(4 * l.gen), var(4 * l.gen + 1), var(4 * l.gen + 2), var(4 * l.gen + 3)};
      if (l.inv)
        for (int c = 1; c < 4; ++c)
          for (auto& [e, v] : q[c]) v = -v;
      prod = mul(prod, q);
    }
    for (int c = 1; c < 4; ++c)
      for (const auto& [e, v] : prod[c]) out.add_term(3 * j + c - 1, e, v);
  }
  for (int i = 0; i < p.g(); ++i) {
    for (int c = 0; c < 4; ++c) {
      Monomial e(n, 0);
      e[4 * i + c] = 2;
      out.add_term(3 * p.r() + i, e, 1.0);
    }
    out.add_term(3 * p.r() + i, zero, -1.0);
  }
  return out;
}

double relator_residual(const GroupPresentation& p, const std::vector<Quat>& q) {
  double r = 0.0;
  for (const auto& w : p.relators) r = std::max(r, norm3(word_eval(w, q).imag()));
  return r;
}

double relator_min_real(const GroupPresentation& p, const std::vector<Quat>& q) {
  double r = 1.0;
  for (const auto& w : p.relators) r = std::min(r, word_eval(w, q).a);
  return r;
}

bool is_irreducible(const std::vector<Quat>& q) {
  Matrix m(3, q.size());
  for (std::size_t i = 0; i < q.size(); ++i)
    for (int c = 0; c < 3; ++c) m(c, i) = q[i][c + 1];
  return numerical_rank(m, kReducibleRank) >= 2;
}

std::vector<Quat> gauge_fix(const std::vector<Quat>& q) {
  std::vector<Quat> out = q;
  std::size_t a = 0;
  while (a < out.size() && norm3(out[a].imag()) <= kReducibleRank) ++a;
  if (a == out.size()) return out;
  const auto v = out[a].imag();
  const double nv = norm3(v);
  const std::array<double, 3> z{0.0, 0.0, 1.0};
  auto axis = cross(v, z);
  const double na = norm3(axis);
  Quat u;
  if (na > 1e-14 * nv) {
    for (auto& c : axis) c /= na;
    u = rotation(axis, std::atan2(na, v[2]));
  } else if (v[2] < 0) {
    u = rotation({1.0, 0.0, 0.0}, std::numbers::pi);
  }
  for (auto& x : out) x = conjugate_by(u, x);
  for (std::size_t b = a + 1; b < out.size(); ++b) {
    const auto w = out[b].imag();
    if (std::hypot(w[0], w[1]) <= kReducibleRank) continue;
    const Quat r = rotation(z, -std::atan2(w[1], w[0]));
    for (auto& x : out) x = conjugate_by(r, x);
    break;
  }
  return out;
}

std::vector<double> fingerprint(const std::vector<Quat>& q) {
  std::vector<double> f;
  for (const auto& x : q) f.push_back(round_step(x.trace()));
  for (std::size_t i = 0; i < q.size(); ++i)
    for (std::size_t j = i + 1; j < q.size(); ++j) f.push_back(round_step((q[i] * q[j]).trace()));
  return f;
}

std::optional<std::vector<Quat>> solve_from(const GroupPresentation& p, std::vector<Quat> q) {
  const System sys(p);
  Vector f, ftrial;
  Matrix J;
  sys.residual(q, f);
  double cost = f.squaredNorm();
  double mu = 1e-3;
  bool converged = false;
  for (int it = 0; it < 80; ++it) {
    if (f.lpNorm<Eigen::Infinity>() < 1e-13) {
      converged = true;
      break;
    }
    sys.jacobian(q, J);
    const Matrix JtJ = J.transpose() * J;
    const Vector g = J.transpose() * f;
    bool improved = false;
    for (int tries = 0; tries < 12; ++tries) {
      Matrix A = JtJ;
      A.diagonal().array() += mu;
      const Vector d = A.ldlt().solve(-g);
      std::vector<Quat> trial = q;
      step(trial, d);
      sys.residual(trial, ftrial);
      const double c = ftrial.squaredNorm();
      if (c < cost) {
        q = std::move(trial);
        f = ftrial;
        cost = c;
        mu = std::max(mu / 3.0, 1e-12);
        improved = true;
        break;
      }
      mu *= 4.0;
    }
    if (!improved) break;
  }
  if (!converged && f.lpNorm<Eigen::Infinity>() > 1e-10) return std::nullopt;
  for (auto& x : q) x = x.normalized();
  if (relator_min_real(p, q) <= 0.5) return std::nullopt;

  // Polish with minimum-norm Gauss-Newton steps.
  for (int it = 0; it < 5; ++it) {
    sys.residual(q, f);
    if (f.lpNorm<Eigen::Infinity>() < 1e-15) break;
    sys.jacobian(q, J);
    const Vector d = J.completeOrthogonalDecomposition().solve(-f);
    step(q, d);
    for (auto& x : q) x = x.normalized();
  }
  if (relator_min_real(p, q) <= 1.0 - 1e-9 || relator_residual(p, q) > kZeroTolerance) return std::nullopt;
  return q;
}

std::vector<RepOrbit> solve_reps(const GroupPresentation& p, const SolveOptions& opts) {
  if (!p.balanced() && !opts.allow_positive_dim)
    throw PresentationError("solve_reps: presentation is not balanced; the representation variety may be "
                            "positive-dimensional (override with allow_positive_dim)");
  if (opts.starts < 1) throw std::invalid_argument("solve_reps: starts must be >= 1");
  const int g = p.g();
  if (g == 0) return {};

  std::vector<std::optional<std::vector<Quat>>> found(opts.starts);
  parallel_for(static_cast<std::size_t>(opts.starts), [&](std::size_t s) {
    std::vector<Quat> q(g);
    for (int i = 0; i < g; ++i) {
      q[i] = uniform_quat(halton(s + 1, 3 * i, opts.seed), halton(s + 1, 3 * i + 1, opts.seed),
                          halton(s + 1, 3 * i + 2, opts.seed));
      if (opts.conjugate_starts) q[i] = conjugate_by(opts.conjugate_starts->normalized(), q[i]);
    }
    auto sol = solve_from(p, std::move(q));
    if (sol && !opts.allow_reducible && !is_irreducible(*sol)) sol.reset();
    if (sol) found[s] = gauge_fix(*sol);
  });

  struct Member {
    std::vector<double> fp;
    std::size_t index;
  };
  std::vector<Member> members;
  for (std::size_t s = 0; s < found.size(); ++s)
    if (found[s]) members.push_back({fingerprint(*found[s]), s});
  std::sort(members.begin(), members.end(), [](const Member& a, const Member& b) {
    return a.fp != b.fp ? a.fp < b.fp : a.index < b.index;
  });

  auto close = [](const std::vector<double>& a, const std::vector<double>& b) {
    for (std::size_t k = 0; k < a.size(); ++k)
      if (std::abs(a[k] - b[k]) > 1.5 * kFingerprintStep) return false;
    return true;
  };
  std::vector<RepOrbit> orbits;
  std::size_t start = 0;
  while (start < members.size()) {
    std::size_t end = start + 1;
    while (end < members.size() && close(members[start].fp, members[end].fp)) ++end;
    std::size_t rep = members[start].index;
    for (std::size_t k = start; k < end; ++k) rep = std::min(rep, members[k].index);
    RepOrbit o;
    o.representative.q = *found[rep];
    o.fingerprint = fingerprint(o.representative.q);
    o.irreducible = is_irreducible(o.representative.q);
    o.h = twisted_cohomology(p, o.representative.q);
    o.hits = static_cast<int>(end - start);
    for (std::size_t k = start; k < end; ++k) {
      const auto& q = *found[members[k].index];
      for (int i = 0; i < g; ++i)
        for (int c = 0; c < 4; ++c)
          if (std::abs(q[i][c] - o.representative.q[i][c]) > 1e-4) o.collision = true;
    }
    orbits.push_back(std::move(o));
    start = end;
  }
  std::sort(orbits.begin(), orbits.end(),
            [](const RepOrbit& a, const RepOrbit& b) { return a.fingerprint < b.fingerprint; });
  return orbits;
}

Matrix coboundary_matrix(const std::vector<Quat>& rho) {
  const int g = static_cast<int>(rho.size());
  Matrix d0(3 * g, 3);
  for (int i = 0; i < g; ++i) d0.block(3 * i, 0, 3, 3) = Matrix::Identity(3, 3) - adjoint(rho[i]);
  return d0;
}

Matrix fox_matrix(const GroupPresentation& p, const std::vector<Quat>& rho) {
  const int g = p.g(), r = p.r();
  Matrix d1 = Matrix::Zero(3 * r, 3 * g);
  for (int j = 0; j < r; ++j) {
    Quat prefix;
    for (const auto& l : letters(p.relators[j])) {
      if (l.inv) {
        prefix = prefix * rho[l.gen].conj();
        d1.block(3 * j, 3 * l.gen, 3, 3) -= adjoint(prefix);
      } else {
        d1.block(3 * j, 3 * l.gen, 3, 3) += adjoint(prefix);
        prefix = prefix * rho[l.gen];
      }
    }
  }
  return d1;
}

ThreeTermComplex fox_complex(const GroupPresentation& p, const std::vector<Quat>& rho) {
  if (static_cast<int>(rho.size()) != p.g())
    throw PresentationError("fox_complex: representation has " + std::to_string(rho.size()) + " generators, expected " +
                            std::to_string(p.g()));
  for (const auto& q : rho)
    if (std::abs(q.norm2() - 1.0) > 1e-8) throw PresentationError("fox_complex: representation is not unit");
  const double res = relator_residual(p, rho);
  if (res > 1e-8 || (p.r() > 0 && relator_min_real(p, rho) < 0))
    throw PresentationError("fox_complex: relator residual too large (" + std::to_string(res) + ")");
  return constant_complex(coboundary_matrix(rho), fox_matrix(p, rho), "rho", 1e-8);
}

TwistedCohomology twisted_cohomology(const GroupPresentation& p, const std::vector<Quat>& rho) {
  const ThreeTermComplex c = fox_complex(p, rho);
  const TangentRanks t = cohomology_ranks(c, std::vector<double>{});
  TwistedCohomology h;
  h.h0 = t.t0;
  h.h1 = t.t1;
  h.h2_presentation = t.t2;
  h.borderline = t.borderline;
  if (p.balanced()) {
    // The presentation complex is the 2-skeleton of the closed manifold; the
    // missing 3-cell contributes H^3 = H^0 and removes three dimensions of H^2.
    h.h2 = t.t2 - 3 + t.t0;
    h.h3 = t.t0;
  } else {
    h.h2 = t.t2;
    h.h3 = 0;
  }
  return h;
}

std::vector<double> relator_defect(const GroupPresentation& p, const std::vector<Quat>& rho,
                                   const std::vector<double>& v) {
  std::vector<Quat> q(rho.size());
  for (std::size_t i = 0; i < rho.size(); ++i) q[i] = exp_pure({v[3 * i], v[3 * i + 1], v[3 * i + 2]}) * rho[i];
  std::vector<double> out;
  for (const auto& w : p.relators) {
    const Quat r = word_eval(w, q);
    out.insert(out.end(), {r.b, r.c, r.d});
  }
  return out;
}

namespace {

std::vector<Monomial> monomials_up_to(int n, int order) {
  std::vector<Monomial> out;
  Monomial e(n, 0);
  std::function<void(int, int)> rec = [&](int var, int left) {
    if (var == n) {
      out.push_back(e);
      return;
    }
    for (int k = 0; k <= left; ++k) {
      e[var] = k;
      rec(var + 1, left - k);
    }
    e[var] = 0;
  };
  rec(0, order);
  return out;
}

}  // namespace

KuranishiChart local_chart(const GroupPresentation& p, const RepOrbit& orbit, const LocalChartOptions& opts) {
  const auto& rho = orbit.representative.q;
  const bool irreducible = is_irreducible(rho);
  if (!irreducible && !opts.allow_reducible)
    throw PresentationError("local_chart: orbit is reducible (override with allow_reducible)");
  if (!(opts.radius > 0)) throw std::invalid_argument("local_chart: radius must be positive");
  if (opts.order < 1) throw std::invalid_argument("local_chart: order must be >= 1");
  const Matrix d0 = coboundary_matrix(rho);
  const Matrix d1 = fox_matrix(p, rho);
  const TwistedCohomology h = twisted_cohomology(p, rho);
  std::map<std::string, std::string> meta{{"source", "local_chart"}};
  {
    std::ostringstream os;
    for (std::size_t k = 0; k < orbit.fingerprint.size(); ++k) os << (k ? "," : "") << orbit.fingerprint[k];
    meta["fingerprint"] = os.str();
  }

  if (p.balanced() && irreducible) {
    if (h.h1 == 0) {
      meta["h1"] = "0";
      return KuranishiChart("orbit", BoxUnion::point(), 0, PolyMap(0, 0), orbit.orientation_bit,
                            {FootprintPoint{"orbit", {}}}, std::move(meta));
    }
    throw PresentationError(
        "local_chart: H^1 is nonzero at an irreducible point of a balanced presentation; the obstruction space "
        "H^2 of the closed manifold needs the 3-cell relation, which a presentation does not carry");
  }

  const int dim = static_cast<int>(d0.rows());
  const Matrix B1 = harmonic_basis(d0, d1, dim);
  const Matrix W = d1.rows() > 0 ? range_basis(d1.transpose(), kRankTolerance) : Matrix(dim, 0);
  const Matrix C = d1.rows() > 0 ? range_basis(d1, kRankTolerance) : Matrix(0, 0);
  const Matrix B2 = harmonic_basis(d1, Matrix(0, d1.rows()), static_cast<int>(d1.rows()));
  const int n = static_cast<int>(B1.cols());
  const int m = static_cast<int>(B2.cols());
  const int k = static_cast<int>(W.cols());
  Eigen::PartialPivLU<Matrix> chord;
  if (k > 0) chord.compute(C.transpose() * d1 * W);

  auto section_at = [&](const Vector& x) {
    Vector w = Vector::Zero(k);
    Vector v = B1 * x;
    for (int it = 0; it <= 100; ++it) {
      v = B1 * x + W * w;
      if (k == 0) break;
      const Vector dv = to_vector(relator_defect(p, rho, to_std(v)));
      const Vector rc = C.transpose() * dv;
      if (rc.lpNorm<Eigen::Infinity>() < 1e-14) break;
      if (it == 100 || !std::isfinite(rc.norm()))
        throw std::runtime_error("local_chart: implicit-function Newton failed; radius " +
                                 std::to_string(opts.radius) + " is too large");
      w -= chord.solve(rc);
    }
    return Vector(B2.transpose() * to_vector(relator_defect(p, rho, to_std(v))));
  };

  PolyMap s(n, m);
  if (m > 0) {
    const auto monos = monomials_up_to(n, opts.order);
    const int per_axis = opts.order + 1;
    std::vector<double> nodes(per_axis);
    for (int q = 0; q < per_axis; ++q)
      nodes[q] = opts.radius * std::cos((2.0 * q + 1.0) * std::numbers::pi / (2.0 * per_axis));
    long long total = 1;
    for (int a = 0; a < n; ++a) total *= per_axis;
    Matrix V(total, static_cast<Eigen::Index>(monos.size()));
    Matrix Y(total, m);
    std::vector<int> idx(n, 0);
    for (long long row = 0; row < total; ++row) {
      long long rest = row;
      Vector x(n);
      for (int a = 0; a < n; ++a) {
        x(a) = nodes[rest % per_axis];
        rest /= per_axis;
      }
      for (std::size_t c = 0; c < monos.size(); ++c) {
        double prod = 1.0;
        for (int a = 0; a < n; ++a) prod *= std::pow(x(a), monos[c][a]);
        V(row, static_cast<Eigen::Index>(c)) = prod;
      }
      Y.row(row) = section_at(x).transpose();
    }
    const Matrix coef = V.colPivHouseholderQr().solve(Y);
    for (int out = 0; out < m; ++out)
      for (std::size_t c = 0; c < monos.size(); ++c) {
        double v = coef(static_cast<Eigen::Index>(c), out);
        if (std::abs(v) < 1e-12) continue;
        s.add_term(out, monos[c], v);
      }
    meta["fit_residual"] = std::to_string((V * coef - Y).lpNorm<Eigen::Infinity>());
  }
  meta["order"] = std::to_string(opts.order);
  meta["h1"] = std::to_string(n);
  return KuranishiChart("orbit", BoxUnion::cube(n, opts.radius), m, std::move(s), orbit.orientation_bit,
                        {FootprintPoint{"orbit", std::vector<double>(n, 0.0)}}, std::move(meta));
}

CassonResult casson_count(const GroupPresentation& p, const CassonOptions& opts) {
  const HomologyCheck hc = homology_sphere_check(p);
  if (!hc.homology_sphere)
    throw PresentationError("casson_count: not an integral homology sphere (det = " + std::to_string(hc.det) + ")");
  if (opts.sigma != 1 && opts.sigma != -1) throw std::invalid_argument("casson_count: sigma must be +1 or -1");
  CassonResult out;
  std::vector<RepOrbit> orbits;
  for (int k = 0; k < 3; ++k) {
    SolveOptions so = opts.solve;
    so.seed = opts.solve.seed + static_cast<std::uint64_t>(k);
    auto found = solve_reps(p, so);
    out.seed_counts.push_back(static_cast<int>(found.size()));
    if (k == 0) orbits = std::move(found);
  }
  for (int c : out.seed_counts)
    if (c != out.seed_counts.front()) {
      std::ostringstream os;
      os << "casson_count: unstable orbit count across seeds (";
      for (std::size_t k = 0; k < out.seed_counts.size(); ++k) os << (k ? ", " : "") << out.seed_counts[k];
      os << ")";
      throw std::runtime_error(os.str());
    }
  out.N = static_cast<int>(orbits.size());
  int total = 0;
  for (std::size_t k = 0; k < orbits.size(); ++k) {
    RepOrbit o = orbits[k];
    const int bit = k < opts.bits.size() ? opts.bits[k] : 1;
    if (bit != 1 && bit != -1) throw std::invalid_argument("casson_count: orientation bits must be +1 or -1");
    o.orientation_bit = 1;
    const int count = perturb_and_count(local_chart(p, o, opts.chart), opts.count).value;
    o.orientation_bit = bit;
    total += bit * count;
    out.orbits.push_back({std::move(o), count});
  }
  out.lambda = opts.sigma * 0.5 * total;
  out.lambda_abs = std::abs(out.lambda);
  return out;
}

}  // namespace kur
