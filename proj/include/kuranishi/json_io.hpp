#pragma once

#include <stdexcept>
#include <string>

#include "json.hpp"
#include "kuranishi/atlas.hpp"
#include "kuranishi/linf.hpp"
#include "kuranishi/su2rep.hpp"
#include "kuranishi/tangent.hpp"
#include "kuranishi/vfc.hpp"

namespace kur {

using json = nlohmann::json;

// Schema violation; `path` is the JSON path of the offending value, e.g. $.charts[1].footprint.
struct ParseError : std::runtime_error {
  std::string path;
  ParseError(std::string p, const std::string& msg) : std::runtime_error(p + ": " + msg), path(std::move(p)) {}
};

json read_json_file(const std::string& file);

json to_json(const PolyMap& p);
json to_json(const PolyMatrix& m);
json to_json(const BoxUnion& b);
json to_json(const KuranishiChart& c);
json to_json(const LinfChart& l);
json to_json(const KuranishiAtlas& a);
json to_json(const GroupPresentation& p);
json to_json(const ChartFamily& f);
json to_json(const SignedCount& c);

PolyMap polymap_from_json(const json& j, const std::string& path = "$");
// Matrix-valued map; "rows"/"cols" keys are optional when the shape is known.
PolyMatrix polymatrix_from_json(const json& j, int rows, int cols, const std::string& path = "$");
BoxUnion boxunion_from_json(const json& j, const std::string& path = "$");
KuranishiChart chart_from_json(const json& j, const std::string& path = "$");
LinfChart linf_from_json(const json& j, const std::string& path = "$");
KuranishiAtlas atlas_from_json(const json& j, const std::string& path = "$");
GroupPresentation presentation_from_json(const json& j, const std::string& path = "$");
ChartFamily family_from_json(const json& j, const std::string& path = "$");

// {"target": atlas | {"euclidean": N}, "tau": {...}, "maps": [...], "point_map": {...}, "deltas": [...]}
struct MorphismFile {
  KuranishiAtlas target;
  StrictMorphism h;
  bool euclidean = false;
};
MorphismFile morphism_from_json(const json& j, const KuranishiAtlas& source, const std::string& path = "$");
json to_json(const MorphismFile& m);

// {"chart": Chart, "g": PolyMap}
struct MappedChart {
  KuranishiChart chart;
  PolyMap g;
};
MappedChart mapped_chart_from_json(const json& j, const std::string& path = "$");
json to_json(const MappedChart& m);

}  // namespace kur
