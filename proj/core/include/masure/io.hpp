#pragma once

#include <nlohmann/json.hpp>
#include <string>

#include "masure/metrics.hpp"

namespace masure::io {

using Json = nlohmann::ordered_json;

Json rat_to_json(const Rat& q);
Rat rat_from_json(const Json& j);
Json vec_to_json(const VecQ& v);
VecQ vec_from_json(const Json& j);

// Germ literals: "+e", "-e", "+s1s2", "-s2" (1-based generator indices).
std::string germ_to_string(const SectorGermId& g);
SectorGermId germ_from_string(const GcmRealization& realization, const std::string& s);

// {"norm":"l1","germ":"+e"}
Json theta_to_json(const ThetaSpec& t);
ThetaSpec theta_from_json(const GcmRealization& realization, const Json& j);
// {"plus": theta, "minus": theta}
Json xi_to_json(const XiSpec& x);
XiSpec xi_from_json(const GcmRealization& realization, const Json& j);

// {"w": [[rootPos,k,j],...], "b": ["p/q",...]}
Json point_to_json(const MasurePoint& p, const Masure& m);
// Registers the point's word through branch() as needed.
MasurePoint point_from_json(Masure& m, const Json& j);

// {"root": [coords...], "k": "p/q"}
Json halfspace_to_json(const HalfSpaceSpec& h, const RealRootTable& table);
HalfSpaceSpec halfspace_from_json(const RealRootTable& table, const Json& j);

struct RunConfig {
  std::string preset = "a1";
  std::vector<std::vector<long>> matrix;  // used when preset == "custom"
  long height_bound = 20;
  int thickness = 2;
  int max_depth = 6;
  NormKind norm = NormKind::L1;
  unsigned long seed = 1;
  int decimal_digits = -1;  // -1 = exact only
};

Json config_to_json(const RunConfig& c);
RunConfig config_from_json(const Json& j);

std::vector<std::vector<long>> config_matrix(const RunConfig& c);

// {"config": ..., "apartments": [[ [rootPos,k,j], ...], ...]}
Json masure_to_json(const Masure& m, const RunConfig& c);
Masure masure_from_json(const Json& j, RunConfig* config_out = nullptr);

}  // namespace masure::io
