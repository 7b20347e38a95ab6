#include "kuranishi/cli.hpp"

#include <iomanip>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "kuranishi/json_io.hpp"

namespace kur::cli {

namespace {

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

json report_json(const Report& r) {
  json checks = json::array();
  for (const auto& c : r.checks) {
    json e{{"condition", c.condition}, {"subject", c.subject}, {"passed", c.passed}, {"residual", c.residual}};
    if (!c.detail.empty()) e["detail"] = c.detail;
    checks.push_back(e);
  }
  return {{"passed", r.passed()}, {"failed_conditions", r.failed_conditions()}, {"checks", checks}};
}

json orbit_json(const RepOrbit& o) {
  json traces = json::array();
  for (const auto& q : o.representative.q) traces.push_back(q.trace());
  json rep = json::array();
  for (const auto& q : o.representative.q) rep.push_back({q.a, q.b, q.c, q.d});
  return {{"fingerprint", o.fingerprint},
          {"traces", traces},
          {"representative", rep},
          {"h", {o.h.h0, o.h.h1, o.h.h2}},
          {"h2_presentation", o.h.h2_presentation},
          {"irreducible", o.irreducible},
          {"hits", o.hits},
          {"collision", o.collision}};
}

std::string fixed(double v, int digits = 6) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << (v == 0.0 ? 0.0 : v);
  return os.str();
}

void emit(const RunConfig& c, std::ostream& out, const json& j, const std::string& human) {
  if (c.format == Format::Json) out << j.dump(2) << "\n";
  else out << human;
}

std::string count_line(const SignedCount& s) {
  std::ostringstream os;
  os << "value " << s.value << "  (+" << s.plus << " / -" << s.minus << ")  "
     << (s.certified() ? "certified" : "NOT certified") << "  attempts " << s.attempts << "\n";
  return os.str();
}

CountOptions count_options(const RunConfig& c) {
  CountOptions o;
  o.eps = c.eps;
  o.seed = c.seed;
  o.margin = c.margin;
  o.density = c.density;
  return o;
}

SolveOptions solve_options(const RunConfig& c) {
  SolveOptions o;
  o.starts = c.starts;
  o.seed = c.seed;
  o.allow_positive_dim = c.allow_positive_dim;
  o.allow_reducible = c.allow_reducible;
  return o;
}

int check_atlas_cmd(const RunConfig& c, std::ostream& out) {
  const KuranishiAtlas a = atlas_from_json(read_json_file(c.inputs.at(0)));
  const Report r = check_atlas(a);
  emit(c, out, report_json(r), format_table(r));
  return r.passed() ? kExitPass : kExitFail;
}

int count_cmd(const RunConfig& c, std::ostream& out) {
  const json j = read_json_file(c.inputs.at(0));
  json res;
  std::string human;
  SignedCount s;
  if (j.is_object() && j.contains("charts")) {
    const VirtualCount vc = virtual_count(atlas_from_json(j), count_options(c));
    s = vc.count;
    res = to_json(s);
    res["regime"] = vc.regime;
    if (!vc.chart.empty()) res["chart"] = vc.chart;
    human = "regime " + vc.regime + "\n";
  } else {
    s = perturb_and_count(chart_from_json(j), count_options(c));
    res = to_json(s);
  }
  emit(c, out, res, human + count_line(s));
  return s.certified() ? kExitPass : kExitFail;
}

int deform_cmd(const RunConfig& c, std::ostream& out) {
  const SweepResult r = deformation_sweep(family_from_json(read_json_file(c.inputs.at(0))), c.grid, count_options(c));
  json slices = json::array();
  std::ostringstream human;
  for (const auto& s : r.slices) {
    json e{{"t", s.t}};
    human << "t = " << fixed(s.t, 4) << "  ";
    if (s.count) {
      e["count"] = to_json(*s.count);
      human << count_line(*s.count);
    } else {
      e["error"] = s.error;
      human << "error: " << s.error << "\n";
    }
    slices.push_back(e);
  }
  human << (r.invariant ? "invariant\n" : "NOT invariant\n");
  emit(c, out, {{"slices", slices}, {"invariant", r.invariant}}, human.str());
  return r.invariant ? kExitPass : kExitFail;
}

int fiber_cmd(const RunConfig& c, std::ostream& out) {
  if (c.inputs.size() != 2) throw UsageError("fiber: expected two input files");
  const MappedChart x = mapped_chart_from_json(read_json_file(c.inputs[0]), "$");
  const MappedChart y = mapped_chart_from_json(read_json_file(c.inputs[1]), "$");
  if (c.base_dim >= 0 && (x.g.n_out() != c.base_dim || y.g.n_out() != c.base_dim))
    throw ParseError("$.g", "base maps must land in R^" + std::to_string(c.base_dim));
  const KuranishiChart fp = fiber_product(x.chart, x.g, y.chart, y.g);
  json res{{"chart", to_json(fp)}, {"vdim", fp.vdim()}};
  std::string human = "fiber product " + fp.id() + ": n = " + std::to_string(fp.n()) +
                      ", m = " + std::to_string(fp.m()) + ", vdim = " + std::to_string(fp.vdim()) + "\n";
  int code = kExitPass;
  if (fp.vdim() == 0) {
    const SignedCount s = perturb_and_count(fp, count_options(c));
    res["count"] = to_json(s);
    human += count_line(s);
    if (!s.certified()) code = kExitFail;
  }
  emit(c, out, res, human);
  return code;
}

int tangent_cmd(const RunConfig& c, std::ostream& out) {
  if (c.morphism.empty()) throw UsageError("tangent: --morphism is required");
  const KuranishiAtlas x = atlas_from_json(read_json_file(c.inputs.at(0)));
  const MorphismFile mf = morphism_from_json(read_json_file(c.morphism), x);
  Report r = check_strict_morphism(mf.h, x, mf.target);
  if (mf.euclidean) r.merge(check_embedding(mf.h, x, mf.target));
  json rows = json::array();
  std::ostringstream human;
  human << std::left << std::setw(12) << "chart" << std::setw(12) << "label" << "t0 t1 t2\n";
  for (const auto& row : tangent_table(mf.h, x, mf.target)) {
    rows.push_back({{"chart", row.chart},
                    {"label", row.label},
                    {"t", {row.ranks.t0, row.ranks.t1, row.ranks.t2}},
                    {"borderline", row.ranks.borderline}});
    human << std::setw(12) << row.chart << std::setw(12) << row.label << row.ranks.t0 << "  " << row.ranks.t1
          << "  " << row.ranks.t2 << (row.ranks.borderline ? "  (borderline)" : "") << "\n";
  }
  human << "\n" << format_table(r);
  emit(c, out, {{"rows", rows}, {"report", report_json(r)}}, human.str());
  return r.passed() ? kExitPass : kExitFail;
}

int reps_cmd(const RunConfig& c, std::ostream& out) {
  const GroupPresentation p = presentation_from_json(read_json_file(c.inputs.at(0)));
  const auto orbits = solve_reps(p, solve_options(c));
  json arr = json::array();
  std::ostringstream human;
  human << orbits.size() << " orbit(s)\n";
  for (std::size_t k = 0; k < orbits.size(); ++k) {
    const auto& o = orbits[k];
    arr.push_back(orbit_json(o));
    human << "#" << k << "  traces";
    for (const auto& q : o.representative.q) human << " " << fixed(q.trace());
    human << "  h = (" << o.h.h0 << ", " << o.h.h1 << ", " << o.h.h2 << ")  hits " << o.hits
          << (o.irreducible ? "" : "  reducible") << (o.collision ? "  COLLISION" : "") << "\n";
  }
  emit(c, out, {{"N", orbits.size()}, {"orbits", arr}}, human.str());
  return kExitPass;
}

int casson_cmd(const RunConfig& c, std::ostream& out) {
  const GroupPresentation p = presentation_from_json(read_json_file(c.inputs.at(0)));
  CassonOptions o;
  o.solve = solve_options(c);
  o.bits = c.bits;
  o.sigma = c.sigma;
  o.chart.radius = c.radius;
  o.chart.order = c.order;
  o.count = count_options(c);
  const CassonResult r = casson_count(p, o);
  json orbits = json::array();
  std::ostringstream human;
  human << "N = " << r.N << "  lambda = " << r.lambda << "  |lambda| = " << r.lambda_abs << "\n";
  for (const auto& oc : r.orbits) {
    json e = orbit_json(oc.orbit);
    e["count"] = oc.count;
    e["bit"] = oc.orbit.orientation_bit;
    orbits.push_back(e);
    human << "  traces";
    for (const auto& q : oc.orbit.representative.q) human << " " << fixed(q.trace());
    human << "  count " << oc.count << "  bit " << (oc.orbit.orientation_bit > 0 ? "+" : "-") << "\n";
  }
  emit(c, out,
       {{"N", r.N}, {"lambda", r.lambda}, {"lambda_abs", r.lambda_abs}, {"seed_counts", r.seed_counts},
        {"orbits", orbits}},
       human.str());
  return kExitPass;
}

int check_homology_cmd(const RunConfig& c, std::ostream& out) {
  const GroupPresentation p = presentation_from_json(read_json_file(c.inputs.at(0)));
  if (!p.balanced()) throw UsageError("check-homology: presentation is not balanced");
  const HomologyCheck h = homology_sphere_check(p);
  std::ostringstream human;
  human << "det = " << h.det << (h.homology_sphere ? "  homology sphere\n" : "  NOT a homology sphere\n");
  emit(c, out, {{"matrix", h.matrix}, {"det", h.det}, {"homology_sphere", h.homology_sphere}}, human.str());
  return h.homology_sphere ? kExitPass : kExitFail;
}

std::vector<int> parse_bits(const std::string& s) {
  std::vector<int> bits;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok == "+" || tok == "+1" || tok == "1") bits.push_back(1);
    else if (tok == "-" || tok == "-1") bits.push_back(-1);
    else throw UsageError("--bits: expected a comma-separated list of + and -, got '" + tok + "'");
  }
  return bits;
}

}  // namespace

void validate(const RunConfig& c) {
  if (!(c.eps > 0.0 && c.eps <= 0.1)) throw std::invalid_argument("--eps must lie in (0, 0.1]");
  if (!(c.margin >= 0.0)) throw std::invalid_argument("--margin must be non-negative");
  if (c.density < 0) throw std::invalid_argument("--density must be non-negative");
  if (c.grid < 2) throw std::invalid_argument("--grid must be at least 2");
  if (c.starts < 1) throw std::invalid_argument("--starts must be at least 1");
  if (!(c.radius > 0.0)) throw std::invalid_argument("--radius must be positive");
  if (c.order < 1) throw std::invalid_argument("--order must be at least 1");
  if (c.sigma != 1 && c.sigma != -1) throw std::invalid_argument("--sigma must be +1 or -1");
  if (c.base_dim < -1) throw std::invalid_argument("--base-dim must be non-negative");
  for (int b : c.bits)
    if (b != 1 && b != -1) throw std::invalid_argument("--bits entries must be + or -");
}

std::optional<int> parse_args(int argc, const char* const* argv, RunConfig& config, std::ostream& out,
                              std::ostream& err) {
  CLI::App app{"Finite-dimensional Kuranishi charts, atlases, virtual counts and SU(2) representation counts"};
  app.require_subcommand(1);
  std::string format = "json";
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "human"}));

  std::string bits;
  auto add_count = [&](CLI::App* s) {
    s->add_option("--eps", config.eps, "Perturbation size");
    s->add_option("--seed", config.seed, "Seed");
    s->add_option("--margin", config.margin, "Compactness margin");
    s->add_option("--density", config.density, "Newton seeds per axis (0 = default)");
  };

  auto* ca = app.add_subcommand("check-atlas", "Validate an atlas");
  ca->add_option("atlas", config.inputs, "Atlas JSON")->required()->expected(1);
  auto* co = app.add_subcommand("count", "Virtual count of a vdim-0 chart or atlas");
  co->add_option("input", config.inputs, "Chart or atlas JSON")->required()->expected(1);
  add_count(co);
  auto* de = app.add_subcommand("deform", "Count along a one-parameter family");
  de->add_option("family", config.inputs, "Family JSON")->required()->expected(1);
  de->add_option("--grid", config.grid, "Number of t values in [0, 1]");
  add_count(de);
  auto* fi = app.add_subcommand("fiber", "Fiber product of two charts over R^k");
  fi->add_option("inputs", config.inputs, "Two mapped-chart JSON files")->required()->expected(2);
  fi->add_option("--base-dim", config.base_dim, "Base dimension k");
  add_count(fi);
  auto* ta = app.add_subcommand("tangent", "Tangent ranks along a strict morphism");
  ta->add_option("atlas", config.inputs, "Source atlas JSON")->required()->expected(1);
  ta->add_option("--morphism", config.morphism, "Morphism JSON")->required();
  auto* re = app.add_subcommand("reps", "SU(2) representation orbits");
  re->add_option("presentation", config.inputs, "Presentation JSON")->required()->expected(1);
  auto* cs = app.add_subcommand("casson", "Casson-type count");
  cs->add_option("presentation", config.inputs, "Presentation JSON")->required()->expected(1);
  cs->add_option("--bits", bits, "Orientation bits, e.g. +,-");
  cs->add_option("--sigma", config.sigma, "Global sign");
  cs->add_option("--radius", config.radius, "Local chart radius");
  cs->add_option("--order", config.order, "Local chart polynomial order");
  add_count(cs);
  for (auto* s : {re, cs}) {
    s->add_option("--starts", config.starts, "Multistart count");
    s->add_flag("--allow-positive-dim", config.allow_positive_dim, "Accept unbalanced presentations");
    s->add_flag("--allow-reducible", config.allow_reducible, "Keep reducible solutions");
  }
  re->add_option("--seed", config.seed, "Seed");
  auto* ch = app.add_subcommand("check-homology", "Integral homology sphere test");
  ch->add_option("presentation", config.inputs, "Presentation JSON")->required()->expected(1);
  for (auto* s : {ca, co, de, fi, ta, re, cs, ch})
    s->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "human"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  const std::pair<CLI::App*, Command> table[] = {
      {ca, Command::CheckAtlas}, {co, Command::Count},  {de, Command::Deform}, {fi, Command::Fiber},
      {ta, Command::Tangent},    {re, Command::Reps},   {cs, Command::Casson}, {ch, Command::CheckHomology}};
  for (const auto& [s, cmd] : table)
    if (s->parsed()) config.command = cmd;
  config.format = format == "human" ? Format::Human : Format::Json;
  try {
    if (!bits.empty()) config.bits = parse_bits(bits);
    validate(config);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return std::nullopt;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    validate(config);
    switch (config.command) {
      case Command::CheckAtlas: return check_atlas_cmd(config, out);
      case Command::Count: return count_cmd(config, out);
      case Command::Deform: return deform_cmd(config, out);
      case Command::Fiber: return fiber_cmd(config, out);
      case Command::Tangent: return tangent_cmd(config, out);
      case Command::Reps: return reps_cmd(config, out);
      case Command::Casson: return casson_cmd(config, out);
      case Command::CheckHomology: return check_homology_cmd(config, out);
    }
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    // Schema-level problems (dimension mismatch, bad presentation, chart invariants).
    err << "invalid input: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "failed: " << e.what() << "\n";
    if (config.format == Format::Json) out << json{{"error", e.what()}}.dump(2) << "\n";
    return kExitFail;
  }
  return kExitUsage;
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig config;
  if (auto code = parse_args(argc, argv, config, out, err)) return *code;
  return run(config, out, err);
}

}  // namespace kur::cli
