#include "masure/rational.hpp"

namespace masure {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::ViolatesGcmAxioms: return "ViolatesGcmAxioms";
    case Errc::RootOutsideTable: return "RootOutsideTable";
    case Errc::HeightBoundExhausted: return "HeightBoundExhausted";
    case Errc::NotComparable: return "NotComparable";
    case Errc::UnregisteredApartment: return "UnregisteredApartment";
    case Errc::DepthExceeded: return "DepthExceeded";
    case Errc::NotTrueWall: return "NotTrueWall";
    case Errc::SheetOutOfRange: return "SheetOutOfRange";
    case Errc::GermContained: return "GermContained";
    case Errc::MixedSigns: return "MixedSigns";
    case Errc::WallImageOutsideTable: return "WallImageOutsideTable";
    case Errc::ChartExit: return "ChartExit";
    case Errc::DegenerateWitness: return "DegenerateWitness";
    case Errc::Infeasible: return "Infeasible";
    case Errc::EmptyFilter: return "EmptyFilter";
    case Errc::FrozenRegistry: return "FrozenRegistry";
    case Errc::ConfigInvalid: return "ConfigInvalid";
  }
  return "UnknownError";
}

Rat rat_parse(const std::string& s) {
  if (s.empty()) throw Error(Errc::ConfigInvalid, "empty rational literal");
  for (char c : s) {
    if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '/'))
      throw Error(Errc::ConfigInvalid, "bad rational literal: " + s);
  }
  Rat q;
  if (q.set_str(s, 10) != 0) throw Error(Errc::ConfigInvalid, "bad rational literal: " + s);
  if (q.get_den() == 0) throw Error(Errc::ConfigInvalid, "zero denominator: " + s);
  q.canonicalize();
  return q;
}

std::string rat_str(const Rat& q) { return q.get_str(); }

std::string rat_decimal(const Rat& q, int digits) {
  if (digits < 0) digits = 0;
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
  mpz_class num = q.get_num() * scale * 2;
  mpz_class den = q.get_den();
  mpz_class twice = num / den;  // truncated
  // round half away from zero
  mpz_class rounded = (twice >= 0) ? (twice + 1) / 2 : (twice - 1) / 2;
  bool neg = rounded < 0;
  mpz_class a = abs(rounded);
  mpz_class ip = a / scale, fp = a % scale;
  std::string frac = fp.get_str();
  frac.insert(frac.begin(), static_cast<size_t>(digits) - frac.size(), '0');
  std::string out = (neg ? "-" : "") + ip.get_str();
  if (digits > 0) out += "." + frac;
  return out;
}

Rat rat_floor(const Rat& q) {
  mpz_class f;
  mpz_fdiv_q(f.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
  return Rat(f);
}

Rat rat_ceil(const Rat& q) {
  mpz_class c;
  mpz_cdiv_q(c.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
  return Rat(c);
}

bool rat_is_integer(const Rat& q) { return q.get_den() == 1; }

long rat_to_long(const Rat& q) { return q.get_num().get_si(); }

}  // namespace masure
