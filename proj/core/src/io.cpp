#include "masure/io.hpp"

namespace masure::io {

Json rat_to_json(const Rat& q) { return rat_str(q); }

Rat rat_from_json(const Json& j) {
  if (j.is_number_integer()) return Rat(j.get<long>());
  if (j.is_string()) return rat_parse(j.get<std::string>());
  throw Error(Errc::ConfigInvalid, "expected rational as \"p/q\" string");
}

Json vec_to_json(const VecQ& v) {
  Json out = Json::array();
  for (const Rat& q : v) out.push_back(rat_to_json(q));
  return out;
}

VecQ vec_from_json(const Json& j) {
  if (!j.is_array()) throw Error(Errc::ConfigInvalid, "expected vector as array");
  VecQ v;
  for (const Json& e : j) v.push_back(rat_from_json(e));
  return v;
}

std::string germ_to_string(const SectorGermId& g) {
  std::string out = g.sign > 0 ? "+" : "-";
  if (g.word.word().empty()) return out + "e";
  for (int i : g.word.word()) out += "s" + std::to_string(i + 1);
  return out;
}

SectorGermId germ_from_string(const GcmRealization& realization, const std::string& s) {
  if (s.empty()) throw Error(Errc::ConfigInvalid, "empty germ literal");
  int sign = 0;
  if (s[0] == '+') sign = +1;
  else if (s[0] == '-') sign = -1;
  else throw Error(Errc::ConfigInvalid, "germ literal must start with + or -");
  std::string rest = s.substr(1);
  std::vector<int> word;
  if (rest != "e") {
    size_t i = 0;
    while (i < rest.size()) {
      if (rest[i] != 's') throw Error(Errc::ConfigInvalid, "bad germ literal: " + s);
      size_t j = i + 1;
      while (j < rest.size() && std::isdigit(static_cast<unsigned char>(rest[j]))) ++j;
      if (j == i + 1) throw Error(Errc::ConfigInvalid, "bad germ literal: " + s);
      word.push_back(std::stoi(rest.substr(i + 1, j - i - 1)) - 1);
      i = j;
    }
  }
  return SectorGermId::make(realization, sign, word);
}

Json theta_to_json(const ThetaSpec& t) {
  Json j;
  j["norm"] = t.norm == NormKind::L1 ? "l1" : "linf";
  j["germ"] = germ_to_string(t.germ);
  return j;
}

ThetaSpec theta_from_json(const GcmRealization& realization, const Json& j) {
  ThetaSpec t;
  std::string n = j.value("norm", "l1");
  if (n == "l1") t.norm = NormKind::L1;
  else if (n == "linf") t.norm = NormKind::LInf;
  else throw Error(Errc::ConfigInvalid, "unknown norm: " + n);
  t.germ = germ_from_string(realization, j.at("germ").get<std::string>());
  return t;
}

Json xi_to_json(const XiSpec& x) {
  Json j;
  j["plus"] = theta_to_json(x.plus);
  j["minus"] = theta_to_json(x.minus);
  return j;
}

XiSpec xi_from_json(const GcmRealization& realization, const Json& j) {
  XiSpec x;
  x.plus = theta_from_json(realization, j.at("plus"));
  x.minus = theta_from_json(realization, j.at("minus"));
  if (x.plus.germ.sign <= 0 || x.minus.germ.sign >= 0)
    throw Error(Errc::ConfigInvalid, "xi needs a positive and a negative germ, in that order");
  return x;
}

Json point_to_json(const MasurePoint& p, const Masure& m) {
  Json j;
  Json w = Json::array();
  for (const FoldingLetter& l : m.word(p.apartment))
    w.push_back(Json::array({l.root_pos, l.level, l.sheet}));
  j["w"] = w;
  j["b"] = vec_to_json(p.coords);
  return j;
}

MasurePoint point_from_json(Masure& m, const Json& j) {
  const Json& w = j.at("w");
  int apt = m.root_apartment();
  for (const Json& l : w) {
    if (!l.is_array() || l.size() != 3)
      throw Error(Errc::ConfigInvalid, "folding letter must be [rootPos, k, sheet]");
    apt = m.branch(apt, l[0].get<int>(), Rat(l[1].get<long>()), l[2].get<int>());
  }
  VecQ b = vec_from_json(j.at("b"));
  if (static_cast<int>(b.size()) != m.realization().dim())
    throw Error(Errc::ConfigInvalid, "point coordinate dimension mismatch");
  return m.canonicalize(apt, b);
}

Json halfspace_to_json(const HalfSpaceSpec& h, const RealRootTable& table) {
  Json j;
  Json coords = Json::array();
  for (long c : table.root(h.root).coords) coords.push_back(c);
  j["root"] = coords;
  j["k"] = rat_to_json(h.level);
  return j;
}

HalfSpaceSpec halfspace_from_json(const RealRootTable& table, const Json& j) {
  std::vector<long> coords;
  for (const Json& c : j.at("root")) coords.push_back(c.get<long>());
  auto idx = table.find(coords);
  if (!idx) throw Error(Errc::RootOutsideTable, "half-space root outside table");
  return {*idx, rat_from_json(j.at("k"))};
}

Json config_to_json(const RunConfig& c) {
  Json j;
  j["preset"] = c.preset;
  if (c.preset == "custom") {
    Json m = Json::array();
    for (const auto& row : c.matrix) {
      Json r = Json::array();
      for (long v : row) r.push_back(v);
      m.push_back(r);
    }
    j["matrix"] = m;
  }
  j["height_bound"] = c.height_bound;
  j["thickness"] = c.thickness;
  j["max_depth"] = c.max_depth;
  j["norm"] = c.norm == NormKind::L1 ? "l1" : "linf";
  j["seed"] = c.seed;
  if (c.decimal_digits >= 0) j["decimal"] = c.decimal_digits;
  return j;
}

RunConfig config_from_json(const Json& j) {
  RunConfig c;
  c.preset = j.value("preset", "a1");
  if (j.contains("matrix")) {
    c.preset = "custom";
    for (const Json& row : j.at("matrix")) {
      std::vector<long> r;
      for (const Json& v : row) r.push_back(v.get<long>());
      c.matrix.push_back(r);
    }
  }
  c.height_bound = j.value("height_bound", 20L);
  c.thickness = j.value("thickness", 2);
  c.max_depth = j.value("max_depth", 6);
  std::string n = j.value("norm", "l1");
  c.norm = (n == "linf") ? NormKind::LInf : NormKind::L1;
  c.seed = j.value("seed", 1UL);
  c.decimal_digits = j.value("decimal", -1);
  return c;
}

std::vector<std::vector<long>> config_matrix(const RunConfig& c) {
  if (c.preset == "custom") return c.matrix;
  return preset_matrix(c.preset);
}

Json masure_to_json(const Masure& m, const RunConfig& c) {
  Json j;
  j["config"] = config_to_json(c);
  Json apts = Json::array();
  for (int a = 0; a < m.apartment_count(); ++a) {
    Json w = Json::array();
    for (const FoldingLetter& l : m.word(a)) w.push_back(Json::array({l.root_pos, l.level, l.sheet}));
    apts.push_back(w);
  }
  j["apartments"] = apts;
  return j;
}

Masure masure_from_json(const Json& j, RunConfig* config_out) {
  RunConfig c = config_from_json(j.at("config"));
  if (config_out) *config_out = c;
  GcmRealization g = GcmRealization::validate(config_matrix(c));
  RealRootTable table(g, c.height_bound);
  Masure m(g, table, {c.thickness, c.max_depth});
  if (j.contains("apartments")) {
    for (const Json& w : j.at("apartments")) {
      int apt = m.root_apartment();
      for (const Json& l : w) apt = m.branch(apt, l[0].get<int>(), Rat(l[1].get<long>()), l[2].get<int>());
    }
  }
  return m;
}

}  // namespace masure::io
