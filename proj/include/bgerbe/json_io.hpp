#pragma once

// JSON schemas shared by the CLI:
//   matrix  {"dim": n, "re": [[...]], "im": [[...]]}, row-major
//   complex [re, im]
//   contour {"segments": [{"kind": "arc" | "line", ...}]}
//   flag-torus point {"lambda": [c...], "projections": [matrix...],
//                     "dlambda": [[c...] per tangent], "dP": [[matrix...] per tangent]}

#include <string>
#include <vector>

#include "json.hpp"

#include "bgerbe/circle.hpp"
#include "bgerbe/weyl.hpp"

namespace bgerbe::json_io {

using nlohmann::json;

// All readers throw Schema errors naming the JSON path of the offending value.
Mat read_matrix(const json& j, const std::string& path);
json write_matrix(const Mat& m);

cplx read_complex(const json& j, const std::string& path);
json write_complex(cplx v);

// A cut point given either as its angle or as [re, im].
CutPoint read_cut(const json& j, const std::string& path);

json write_contour(const Contour& c);

struct FlagTorusInput {
  FlagTorusPoint point;
  std::vector<FlagTangent> tangents;
};

FlagTorusInput read_flag_torus(const json& j, const std::string& path);

}  // namespace bgerbe::json_io
