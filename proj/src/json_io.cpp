#include "kuranishi/json_io.hpp"

#include <fstream>
#include <sstream>

namespace kur {

namespace {

std::string child(const std::string& path, const std::string& key) { return path + "." + key; }
std::string child(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

const json& need(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw ParseError(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(child(path, key), "missing required field");
  return *it;
}

int as_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ParseError(path, "expected an integer");
  return j.get<int>();
}

double as_double(const json& j, const std::string& path) {
  if (!j.is_number()) throw ParseError(path, "expected a number");
  return j.get<double>();
}

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw ParseError(path, "expected a string");
  return j.get<std::string>();
}

const json& as_array(const json& j, const std::string& path) {
  if (!j.is_array()) throw ParseError(path, "expected an array");
  return j;
}

std::vector<double> as_doubles(const json& j, const std::string& path) {
  std::vector<double> v;
  const json& a = as_array(j, path);
  for (std::size_t i = 0; i < a.size(); ++i) v.push_back(as_double(a[i], child(path, i)));
  return v;
}

int non_negative(int v, const std::string& path) {
  if (v < 0) throw ParseError(path, "must be non-negative");
  return v;
}

// Runs f, converting library validation errors into diagnostics at `path`.
template <class F>
auto at_path(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ParseError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ParseError(path, e.what());
  }
}

}  // namespace

json read_json_file(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw ParseError(file, "cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(file, std::string("malformed JSON: ") + e.what());
  }
}

// ---------------------------------------------------------------- writers

json to_json(const PolyMap& p) {
  json coords = json::array();
  for (int i = 0; i < p.n_out(); ++i) {
    json terms = json::array();
    for (const auto& [e, c] : p.coord(i)) terms.push_back({{"exp", e}, {"c", c}});
    coords.push_back(terms);
  }
  return {{"n_in", p.n_in()}, {"n_out", p.n_out()}, {"coords", coords}};
}

json to_json(const PolyMatrix& m) {
  json j = to_json(m.entries);
  j["rows"] = m.rows;
  j["cols"] = m.cols;
  return j;
}

json to_json(const BoxUnion& b) {
  json boxes = json::array();
  for (const auto& x : b.boxes()) boxes.push_back({{"lo", x.lo}, {"hi", x.hi}});
  return {{"dim", b.dim()}, {"boxes", boxes}};
}

json to_json(const KuranishiChart& c) {
  json fp = json::array();
  for (const auto& p : c.footprint()) fp.push_back({{"label", p.label}, {"x", p.x}});
  json j{{"id", c.id()},           {"domain", to_json(c.domain())}, {"m", c.m()},
         {"section", to_json(c.section())}, {"orientation", c.orientation()}, {"footprint", fp}};
  if (!c.metadata().empty()) j["metadata"] = c.metadata();
  return j;
}

json to_json(const LinfChart& l) {
  json brackets = json::object();
  for (const auto& [k, t] : l.brackets) brackets[std::to_string(k)] = t.to_dense();
  json pairing = json::array();
  for (Eigen::Index r = 0; r < l.pairing.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < l.pairing.cols(); ++c) row.push_back(l.pairing(r, c));
    pairing.push_back(row);
  }
  return {{"h1", l.h1}, {"h2", l.h2}, {"brackets", brackets}, {"pairing", pairing}, {"radius", l.radius},
          {"k_max", l.k_max}};
}

json to_json(const KuranishiAtlas& a) {
  json charts = json::array();
  for (const auto& c : a.charts()) charts.push_back(to_json(c));
  json ts = json::array();
  for (const auto& t : a.transitions())
    ts.push_back({{"i", t.i},
                  {"j", t.j},
                  {"dom_i", to_json(t.dom_i)},
                  {"dom_j", to_json(t.dom_j)},
                  {"f", to_json(t.morphism.f)},
                  {"fhat", to_json(t.morphism.fhat)}});
  json ls = json::array();
  for (const auto& l : a.lambdas()) {
    json e{{"i", l.i}, {"j", l.j}, {"k", l.k}, {"lam", to_json(l.lam.lam)}};
    if (l.dom) e["dom"] = to_json(*l.dom);
    ls.push_back(e);
  }
  return {{"vdim", a.vdim()}, {"charts", charts}, {"footprint", a.footprint()}, {"transitions", ts},
          {"lambdas", ls}};
}

json to_json(const GroupPresentation& p) {
  json rels = json::array();
  for (const auto& w : p.relators) {
    json word = json::array();
    for (const auto& [i, e] : w) word.push_back({i, e});
    rels.push_back(word);
  }
  return {{"generators", p.generators}, {"relators", rels}};
}

json to_json(const ChartFamily& f) {
  return {{"id", f.id}, {"domain", to_json(f.domain)}, {"m", f.m}, {"section", to_json(f.section)},
          {"orientation", f.orientation}};
}

json to_json(const SignedCount& c) {
  return {{"plus", c.plus},   {"minus", c.minus},         {"value", c.value}, {"certified", c.certified()},
          {"perturbation", c.perturbation}, {"attempts", c.attempts}, {"degenerate_zeros", c.degenerate_zeros}};
}

// ---------------------------------------------------------------- readers

PolyMap polymap_from_json(const json& j, const std::string& path) {
  const int n_in = non_negative(as_int(need(j, "n_in", path), child(path, "n_in")), child(path, "n_in"));
  const int n_out = non_negative(as_int(need(j, "n_out", path), child(path, "n_out")), child(path, "n_out"));
  const std::string cp = child(path, "coords");
  const json& coords = as_array(need(j, "coords", path), cp);
  if (static_cast<int>(coords.size()) != n_out)
    throw ParseError(cp, "expected " + std::to_string(n_out) + " coordinates, found " + std::to_string(coords.size()));
  PolyMap p(n_in, n_out);
  for (std::size_t i = 0; i < coords.size(); ++i) {
    const std::string ip = child(cp, i);
    const json& terms = as_array(coords[i], ip);
    for (std::size_t t = 0; t < terms.size(); ++t) {
      const std::string tp = child(ip, t);
      const json& ej = as_array(need(terms[t], "exp", tp), child(tp, "exp"));
      if (static_cast<int>(ej.size()) != n_in)
        throw ParseError(child(tp, "exp"), "exponent must have n_in = " + std::to_string(n_in) + " entries");
      Monomial e;
      for (std::size_t k = 0; k < ej.size(); ++k)
        e.push_back(non_negative(as_int(ej[k], child(child(tp, "exp"), k)), child(child(tp, "exp"), k)));
      p.add_term(static_cast<int>(i), e, as_double(need(terms[t], "c", tp), child(tp, "c")));
    }
  }
  return p;
}

PolyMatrix polymatrix_from_json(const json& j, int rows, int cols, const std::string& path) {
  if (j.is_object() && j.contains("rows")) rows = as_int(j["rows"], child(path, "rows"));
  if (j.is_object() && j.contains("cols")) cols = as_int(j["cols"], child(path, "cols"));
  PolyMap e = polymap_from_json(j, path);
  if (e.n_out() != rows * cols)
    throw ParseError(path, "matrix-valued map must have " + std::to_string(rows) + "x" + std::to_string(cols) +
                               " = " + std::to_string(rows * cols) + " coordinates, found " +
                               std::to_string(e.n_out()));
  return PolyMatrix(rows, cols, std::move(e));
}

BoxUnion boxunion_from_json(const json& j, const std::string& path) {
  const int dim = non_negative(as_int(need(j, "dim", path), child(path, "dim")), child(path, "dim"));
  const std::string bp = child(path, "boxes");
  const json& arr = as_array(need(j, "boxes", path), bp);
  std::vector<Box> boxes;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string ip = child(bp, i);
    Box b{as_doubles(need(arr[i], "lo", ip), child(ip, "lo")), as_doubles(need(arr[i], "hi", ip), child(ip, "hi"))};
    if (b.dim() != dim || static_cast<int>(b.hi.size()) != dim)
      throw ParseError(ip, "box bounds must have dim = " + std::to_string(dim) + " entries");
    for (int k = 0; k < dim; ++k)
      if (!(b.lo[k] < b.hi[k])) throw ParseError(ip, "lower bound must be below upper bound on axis " + std::to_string(k));
    boxes.push_back(std::move(b));
  }
  return at_path(path, [&] { return BoxUnion(dim, std::move(boxes)); });
}

KuranishiChart chart_from_json(const json& j, const std::string& path) {
  const std::string id = j.is_object() && j.contains("id") ? as_string(j["id"], child(path, "id")) : "chart";
  BoxUnion dom = boxunion_from_json(need(j, "domain", path), child(path, "domain"));
  const int m = non_negative(as_int(need(j, "m", path), child(path, "m")), child(path, "m"));
  PolyMap s = polymap_from_json(need(j, "section", path), child(path, "section"));
  if (s.n_in() != dom.dim() || s.n_out() != m)
    throw ParseError(child(path, "section"), "section must map R^" + std::to_string(dom.dim()) + " -> R^" +
                                                 std::to_string(m));
  int orientation = 1;
  if (j.contains("orientation")) orientation = as_int(j["orientation"], child(path, "orientation"));
  if (orientation != 1 && orientation != -1) throw ParseError(child(path, "orientation"), "must be +1 or -1");
  std::vector<FootprintPoint> fp;
  if (j.contains("footprint")) {
    const std::string fpp = child(path, "footprint");
    const json& arr = as_array(j["footprint"], fpp);
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string ip = child(fpp, i);
      FootprintPoint p{as_string(need(arr[i], "label", ip), child(ip, "label")),
                       as_doubles(need(arr[i], "x", ip), child(ip, "x"))};
      if (static_cast<int>(p.x.size()) != dom.dim())
        throw ParseError(child(ip, "x"), "point must have " + std::to_string(dom.dim()) + " coordinates");
      fp.push_back(std::move(p));
    }
  }
  std::map<std::string, std::string> meta;
  if (j.contains("metadata")) {
    const std::string mp = child(path, "metadata");
    if (!j["metadata"].is_object()) throw ParseError(mp, "expected an object");
    for (auto it = j["metadata"].begin(); it != j["metadata"].end(); ++it)
      meta[it.key()] = as_string(it.value(), child(mp, it.key()));
  }
  return at_path(child(path, "footprint"), [&] {
    return KuranishiChart(id, std::move(dom), m, std::move(s), orientation, std::move(fp), std::move(meta));
  });
}

LinfChart linf_from_json(const json& j, const std::string& path) {
  LinfChart l;
  l.h1 = non_negative(as_int(need(j, "h1", path), child(path, "h1")), child(path, "h1"));
  l.h2 = non_negative(as_int(need(j, "h2", path), child(path, "h2")), child(path, "h2"));
  if (j.contains("radius")) l.radius = as_double(j["radius"], child(path, "radius"));
  if (!(l.radius > 0)) throw ParseError(child(path, "radius"), "must be positive");
  if (j.contains("k_max")) l.k_max = as_int(j["k_max"], child(path, "k_max"));
  if (j.contains("brackets")) {
    const std::string bp = child(path, "brackets");
    if (!j["brackets"].is_object()) throw ParseError(bp, "expected an object keyed by k");
    for (auto it = j["brackets"].begin(); it != j["brackets"].end(); ++it) {
      const std::string kp = child(bp, it.key());
      int k = 0;
      try {
        k = std::stoi(it.key());
      } catch (const std::exception&) {
        throw ParseError(kp, "bracket key must be an integer k >= 2");
      }
      if (k < 2) throw ParseError(kp, "bracket key must be an integer k >= 2");
      const auto dense = as_doubles(it.value(), kp);
      l.brackets.emplace(k, at_path(kp, [&] { return SymmetricTensor::from_dense(k, l.h1, l.h2, dense); }));
    }
  }
  l.pairing = Matrix::Zero(l.h2, l.h1);
  if (j.contains("pairing")) {
    const std::string pp = child(path, "pairing");
    const json& rows = as_array(j["pairing"], pp);
    if (static_cast<int>(rows.size()) != l.h2) throw ParseError(pp, "pairing must have h2 rows");
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const auto row = as_doubles(rows[r], child(pp, r));
      if (static_cast<int>(row.size()) != l.h1) throw ParseError(child(pp, r), "pairing rows must have h1 entries");
      for (int c = 0; c < l.h1; ++c) l.pairing(static_cast<Eigen::Index>(r), c) = row[c];
    }
  }
  return l;
}

KuranishiAtlas atlas_from_json(const json& j, const std::string& path) {
  const int vdim = as_int(need(j, "vdim", path), child(path, "vdim"));
  const std::string cp = child(path, "charts");
  const json& carr = as_array(need(j, "charts", path), cp);
  std::vector<KuranishiChart> charts;
  for (std::size_t i = 0; i < carr.size(); ++i) charts.push_back(chart_from_json(carr[i], child(cp, i)));
  auto find = [&](const std::string& id, const std::string& p) -> const KuranishiChart& {
    for (const auto& c : charts)
      if (c.id() == id) return c;
    throw ParseError(p, "unknown chart id '" + id + "'");
  };

  std::vector<std::string> footprint;
  if (j.contains("footprint")) {
    const std::string fp = child(path, "footprint");
    const json& arr = as_array(j["footprint"], fp);
    for (std::size_t i = 0; i < arr.size(); ++i) footprint.push_back(as_string(arr[i], child(fp, i)));
  }

  std::vector<Transition> ts;
  if (j.contains("transitions")) {
    const std::string tp = child(path, "transitions");
    const json& arr = as_array(j["transitions"], tp);
    for (std::size_t k = 0; k < arr.size(); ++k) {
      const std::string ip = child(tp, k);
      const std::string a = as_string(need(arr[k], "i", ip), child(ip, "i"));
      const std::string b = as_string(need(arr[k], "j", ip), child(ip, "j"));
      const auto& ca = find(a, child(ip, "i"));
      const auto& cb = find(b, child(ip, "j"));
      BoxUnion di = arr[k].contains("dom_i") ? boxunion_from_json(arr[k]["dom_i"], child(ip, "dom_i")) : ca.domain();
      BoxUnion dj = arr[k].contains("dom_j") ? boxunion_from_json(arr[k]["dom_j"], child(ip, "dom_j")) : cb.domain();
      PolyMap f = polymap_from_json(need(arr[k], "f", ip), child(ip, "f"));
      PolyMatrix fh = polymatrix_from_json(need(arr[k], "fhat", ip), cb.m(), ca.m(), child(ip, "fhat"));
      ts.push_back({a, b, std::move(di), std::move(dj), ChartMorphism{a, b, std::move(f), std::move(fh)}});
    }
  }

  std::vector<TripleDatum> ls;
  if (j.contains("lambdas")) {
    const std::string lp = child(path, "lambdas");
    const json& arr = as_array(j["lambdas"], lp);
    for (std::size_t k = 0; k < arr.size(); ++k) {
      const std::string ip = child(lp, k);
      const std::string a = as_string(need(arr[k], "i", ip), child(ip, "i"));
      const std::string b = as_string(need(arr[k], "j", ip), child(ip, "j"));
      const std::string c = as_string(need(arr[k], "k", ip), child(ip, "k"));
      const auto& ca = find(a, child(ip, "i"));
      find(b, child(ip, "j"));
      const auto& cc = find(c, child(ip, "k"));
      PolyMatrix lam = polymatrix_from_json(need(arr[k], "lam", ip), cc.n(), ca.m(), child(ip, "lam"));
      std::optional<BoxUnion> dom;
      if (arr[k].contains("dom")) dom = boxunion_from_json(arr[k]["dom"], child(ip, "dom"));
      ls.push_back({a, b, c, KHomRep{std::move(lam)}, std::move(dom)});
    }
  }
  return at_path(path, [&] {
    return KuranishiAtlas(vdim, std::move(charts), std::move(footprint), std::move(ts), std::move(ls));
  });
}

GroupPresentation presentation_from_json(const json& j, const std::string& path) {
  const std::string gp = child(path, "generators");
  const json& gens = as_array(need(j, "generators", path), gp);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < gens.size(); ++i) names.push_back(as_string(gens[i], child(gp, i)));
  const std::string rp = child(path, "relators");
  const json& rels = as_array(need(j, "relators", path), rp);
  std::vector<Word> words;
  for (std::size_t r = 0; r < rels.size(); ++r) {
    const std::string wp = child(rp, r);
    const json& w = as_array(rels[r], wp);
    Word word;
    for (std::size_t k = 0; k < w.size(); ++k) {
      const std::string lp = child(wp, k);
      const json& pair = as_array(w[k], lp);
      if (pair.size() != 2) throw ParseError(lp, "expected [generator index, exponent]");
      const int i = as_int(pair[0], child(lp, 0));
      const int e = as_int(pair[1], child(lp, 1));
      if (i < 0 || i >= static_cast<int>(names.size())) throw ParseError(child(lp, 0), "generator index out of range");
      if (e == 0) throw ParseError(child(lp, 1), "exponent must be nonzero");
      word.push_back({i, e});
    }
    words.push_back(std::move(word));
  }
  return GroupPresentation(std::move(names), std::move(words));
}

ChartFamily family_from_json(const json& j, const std::string& path) {
  ChartFamily f;
  f.id = j.is_object() && j.contains("id") ? as_string(j["id"], child(path, "id")) : "family";
  f.domain = boxunion_from_json(need(j, "domain", path), child(path, "domain"));
  f.m = non_negative(as_int(need(j, "m", path), child(path, "m")), child(path, "m"));
  f.section = polymap_from_json(need(j, "section", path), child(path, "section"));
  if (f.section.n_in() != f.domain.dim() + 1 || f.section.n_out() != f.m)
    throw ParseError(child(path, "section"), "family section must map (x, t) in R^" +
                                                 std::to_string(f.domain.dim() + 1) + " -> R^" + std::to_string(f.m));
  if (j.contains("orientation")) f.orientation = as_int(j["orientation"], child(path, "orientation"));
  if (f.orientation != 1 && f.orientation != -1) throw ParseError(child(path, "orientation"), "must be +1 or -1");
  return f;
}

MorphismFile morphism_from_json(const json& j, const KuranishiAtlas& source, const std::string& path) {
  StrictMorphism h;
  const std::string tp = child(path, "tau");
  const json& tau = need(j, "tau", path);
  if (!tau.is_object()) throw ParseError(tp, "expected an object chart id -> chart id");
  for (auto it = tau.begin(); it != tau.end(); ++it) h.tau[it.key()] = as_string(it.value(), child(tp, it.key()));
  if (j.contains("point_map")) {
    const std::string pp = child(path, "point_map");
    if (!j["point_map"].is_object()) throw ParseError(pp, "expected an object label -> label");
    for (auto it = j["point_map"].begin(); it != j["point_map"].end(); ++it)
      h.point_map[it.key()] = as_string(it.value(), child(pp, it.key()));
  }

  const json& tj = need(j, "target", path);
  const bool euclidean = tj.is_object() && tj.contains("euclidean");
  std::optional<KuranishiAtlas> target;
  if (!euclidean) target = atlas_from_json(tj, child(path, "target"));
  const int N = euclidean ? as_int(tj["euclidean"], child(child(path, "target"), "euclidean")) : 0;
  auto target_chart_dims = [&](const std::string& id, const std::string& p) -> std::pair<int, int> {
    if (euclidean) return {N, 0};
    if (!target->has_chart(id)) throw ParseError(p, "unknown target chart '" + id + "'");
    return {target->chart(id).n(), target->chart(id).m()};
  };

  const std::string mp = child(path, "maps");
  const json& maps = as_array(need(j, "maps", path), mp);
  for (std::size_t k = 0; k < maps.size(); ++k) {
    const std::string ip = child(mp, k);
    const std::string id = as_string(need(maps[k], "chart", ip), child(ip, "chart"));
    if (!source.has_chart(id)) throw ParseError(child(ip, "chart"), "unknown source chart '" + id + "'");
    auto t = h.tau.find(id);
    if (t == h.tau.end()) throw ParseError(tp, "tau is undefined on chart '" + id + "'");
    const auto [tn, tm] = target_chart_dims(t->second, child(tp, id));
    PolyMap f = polymap_from_json(need(maps[k], "f", ip), child(ip, "f"));
    PolyMatrix fh = maps[k].contains("fhat")
                        ? polymatrix_from_json(maps[k]["fhat"], tm, source.chart(id).m(), child(ip, "fhat"))
                        : PolyMatrix::zero(source.chart(id).n(), tm, source.chart(id).m());
    h.maps[id] = ChartMorphism{id, t->second, std::move(f), std::move(fh)};
  }
  if (j.contains("deltas")) {
    const std::string dp = child(path, "deltas");
    const json& arr = as_array(j["deltas"], dp);
    for (std::size_t k = 0; k < arr.size(); ++k) {
      const std::string ip = child(dp, k);
      const std::string a = as_string(need(arr[k], "i", ip), child(ip, "i"));
      const std::string b = as_string(need(arr[k], "j", ip), child(ip, "j"));
      if (!source.has_chart(a) || !source.has_chart(b) || !h.tau.count(b))
        throw ParseError(ip, "delta refers to an unknown chart");
      const auto [tn, tm] = target_chart_dims(h.tau[b], ip);
      h.deltas[{a, b}] = KHomRep{polymatrix_from_json(need(arr[k], "lam", ip), tn, source.chart(a).m(), child(ip, "lam"))};
    }
  }
  if (euclidean) {
    if (h.tau.empty()) throw ParseError(tp, "empty index map");
    for (auto& [i, t] : h.tau) {
      t = "R^" + std::to_string(N);
      if (h.maps.count(i)) h.maps[i].target = t;
    }
    KuranishiAtlas y = at_path(path, [&] { return euclidean_target(N, h, source); });
    return MorphismFile{std::move(y), std::move(h), true};
  }
  return MorphismFile{std::move(*target), std::move(h), false};
}

json to_json(const MorphismFile& m) {
  json maps = json::array();
  for (const auto& [id, f] : m.h.maps) maps.push_back({{"chart", id}, {"f", to_json(f.f)}, {"fhat", to_json(f.fhat)}});
  json deltas = json::array();
  for (const auto& [key, d] : m.h.deltas) deltas.push_back({{"i", key.first}, {"j", key.second}, {"lam", to_json(d.lam)}});
  json target = m.euclidean ? json{{"euclidean", m.target.charts().front().n()}} : to_json(m.target);
  return {{"target", target}, {"tau", m.h.tau}, {"point_map", m.h.point_map}, {"maps", maps}, {"deltas", deltas}};
}

json to_json(const MappedChart& m) { return {{"chart", to_json(m.chart)}, {"g", to_json(m.g)}}; }

MappedChart mapped_chart_from_json(const json& j, const std::string& path) {
  KuranishiChart c = chart_from_json(need(j, "chart", path), child(path, "chart"));
  PolyMap g = polymap_from_json(need(j, "g", path), child(path, "g"));
  if (g.n_in() != c.n()) throw ParseError(child(path, "g"), "base map must take the chart coordinates");
  return MappedChart{std::move(c), std::move(g)};
}

}  // namespace kur
