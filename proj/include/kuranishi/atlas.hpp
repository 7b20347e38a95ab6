#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "kuranishi/chart.hpp"
#include "kuranishi/report.hpp"

namespace kur {

inline constexpr double kPointTolerance = 1e-7;

// (f, fhat) : chart `source` -> chart `target`, with fhat an m_target x m_source
// matrix over the source coordinates.
struct ChartMorphism {
  std::string source;
  std::string target;
  PolyMap f;
  PolyMatrix fhat;

  friend bool operator==(const ChartMorphism&, const ChartMorphism&) = default;
};

ChartMorphism identity_morphism(const KuranishiChart& c);
// second o first: (f2 o f1, (f1^* fhat2) * fhat1).
ChartMorphism compose(const ChartMorphism& first, const ChartMorphism& second);

// Representative of a class in KHom(R^{m_a}, R^{n_b}): an n_b x m_a matrix over V_a.
struct KHomRep {
  PolyMatrix lam;

  friend bool operator==(const KHomRep&, const KHomRep&) = default;
};

KHomRep zero_khom(int n_in, int rows, int cols);

// Family homotopy over (x, t); t is the last input variable of every field.
struct FamilyHomotopy {
  PolyMap F;         // n_b outputs
  PolyMatrix Fhat;   // m_b x m_a
  PolyMatrix lam;    // n_b x m_a
  PolyMatrix xi;     // m_b x C(m_a, 2), columns ordered (0,1), (0,2), ..., (1,2), ...
};

struct Transition {
  std::string i, j;
  BoxUnion dom_i;
  BoxUnion dom_j;
  ChartMorphism morphism;
};

struct TripleDatum {
  std::string i, j, k;
  KHomRep lam;
  std::optional<BoxUnion> dom;  // V_{i jk} in chart i; defaults to the transition domains
};

class KuranishiAtlas {
 public:
  KuranishiAtlas(int vdim, std::vector<KuranishiChart> charts, std::vector<std::string> footprint,
                 std::vector<Transition> transitions, std::vector<TripleDatum> lambdas);

  int vdim() const { return vdim_; }
  const std::vector<KuranishiChart>& charts() const { return charts_; }
  const std::vector<std::string>& footprint() const { return footprint_; }
  const std::vector<Transition>& transitions() const { return transitions_; }
  const std::vector<TripleDatum>& lambdas() const { return lambdas_; }

  const KuranishiChart& chart(const std::string& id) const;
  bool has_chart(const std::string& id) const;
  // Declared transition, or the implicit identity for i == j; nullopt otherwise.
  std::optional<Transition> transition(const std::string& i, const std::string& j) const;
  const TripleDatum* find_lambda(const std::string& i, const std::string& j, const std::string& k) const;
  // Declared Lambda_ijk or the zero class (n_k x m_i over V_i).
  KHomRep lambda(const std::string& i, const std::string& j, const std::string& k) const;

  // Footprint label sets U_i, U_ij, U_ijk, U_ijkl (sorted).
  std::set<std::string> labels(const std::string& i) const;
  std::set<std::string> overlap(const std::string& i, const std::string& j) const;
  std::set<std::string> overlap(const std::string& i, const std::string& j, const std::string& k) const;
  std::set<std::string> overlap(const std::string& i, const std::string& j, const std::string& k,
                                const std::string& l) const;

  // Sample domain used for "over V" checks of Lambda_ijk.
  BoxUnion triple_domain(const std::string& i, const std::string& j, const std::string& k) const;

  // Same atlas with chart ids renamed through `rename`.
  KuranishiAtlas relabeled(const std::map<std::string, std::string>& rename) const;

 private:
  int vdim_;
  std::vector<KuranishiChart> charts_;
  std::vector<std::string> footprint_;
  std::vector<Transition> transitions_;
  std::vector<TripleDatum> lambdas_;
};

// Label correspondence between footprints of source and target; empty = identity.
using PointMap = std::map<std::string, std::string>;

struct MorphismCheckOptions {
  std::string section_condition = "section";
  std::string footprint_condition = "footprint";
  std::optional<std::set<std::string>> labels;  // restrict footprint checks
  const PointMap* point_map = nullptr;
};

// fhat * s_a == f^* s_b coefficient-wise (1e-9); f maps footprint points to
// their target coordinates (1e-7).
Report check_morphism(const KuranishiChart& a, const KuranishiChart& b, const ChartMorphism& m,
                      const MorphismCheckOptions& opts = {});

struct KHomComparison {
  bool equal = true;
  double on_section = 0.0;    // max |(L1 - L2) s_a| over samples of V_a
  double on_footprint = 0.0;  // max |L1 - L2| over footprint points
};

KHomComparison khom_compare(const KHomRep& l1, const KHomRep& l2, const KuranishiChart& ctx,
                            const std::optional<BoxUnion>& sample_domain = std::nullopt,
                            const std::optional<std::set<std::string>>& labels = std::nullopt);
bool khom_equal(const KHomRep& l1, const KHomRep& l2, const KuranishiChart& ctx);

struct HomotopyCheckOptions {
  std::string condition = "homotopy";
  std::optional<std::set<std::string>> labels;
};

// (1) f1 - f0 == lam * s_a as polynomials; (2) lam ds_a == df1 - df0 and
// ds_b lam == fhat1 - fhat0 at footprint points.
Report check_homotopy(const ChartMorphism& m0, const ChartMorphism& m1, const KHomRep& lam,
                      const KuranishiChart& a, const KuranishiChart& b, const HomotopyCheckOptions& opts = {});

Report check_family_homotopy(const FamilyHomotopy& fh, const ChartMorphism& m0, const ChartMorphism& m1,
                             const KuranishiChart& a, const KuranishiChart& b);

struct ExtractedHomotopy {
  KHomRep lam;
  bool heuristic = true;  // the integral is one-way: not every homotopy arises this way
};
// Lambda := integral over t in [0, 1] of Lambda(t).
ExtractedHomotopy extract_homotopy(const FamilyHomotopy& fh);

Report check_atlas(const KuranishiAtlas& atlas);

// Strict morphism between atlases X -> Y.
struct StrictMorphism {
  std::map<std::string, std::string> tau;
  std::map<std::string, ChartMorphism> maps;  // keyed by source chart id
  PointMap point_map;                         // X label -> Y label
  std::map<std::pair<std::string, std::string>, KHomRep> deltas;

  // Declared Delta_ij or zero (n_{tau j} x m_i).
  KHomRep delta(const std::string& i, const std::string& j, const KuranishiAtlas& x,
                const KuranishiAtlas& y) const;

  friend bool operator==(const StrictMorphism&, const StrictMorphism&) = default;
};

Report check_strict_morphism(const StrictMorphism& h, const KuranishiAtlas& x, const KuranishiAtlas& y);

struct TwoMorphismOptions {
  // Combine the two Lambda terms of condition (c) as a sum instead of a
  // difference. Kept for comparison; the difference is what the homotopy
  // conventions of (b) and of Delta force.
  bool summed_lambda_terms = false;
};

// Upsilon_i is a homotopy (f_{tau_h(i) tau_g(i)} o h_i) ~ g_i.
Report check_2morphism(const StrictMorphism& h, const StrictMorphism& g, const std::map<std::string, KHomRep>& upsilon,
                       const KuranishiAtlas& x, const KuranishiAtlas& y, const TwoMorphismOptions& opts = {});

}  // namespace kur
