#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace masure {

// Exact rational scalar. All core geometry is computed over Q; no floating
// point enters any wall incidence or pivot decision.
using Rat = mpq_class;

enum class Errc {
  ViolatesGcmAxioms,
  RootOutsideTable,
  HeightBoundExhausted,
  NotComparable,
  UnregisteredApartment,
  DepthExceeded,
  NotTrueWall,
  SheetOutOfRange,
  GermContained,
  MixedSigns,
  WallImageOutsideTable,
  ChartExit,
  DegenerateWitness,
  Infeasible,
  EmptyFilter,
  FrozenRegistry,
  ConfigInvalid,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

const char* errc_name(Errc c);

inline Rat rat(long num, long den = 1) { Rat q(num, den); q.canonicalize(); return q; }

// Parses "p/q" or "p" (optional sign). Throws Error(ConfigInvalid) on junk.
Rat rat_parse(const std::string& s);
std::string rat_str(const Rat& q);
// Decimal rendering with `digits` places, round-half-away-from-zero.
std::string rat_decimal(const Rat& q, int digits);

inline int rat_sign(const Rat& q) { return sgn(q); }
inline Rat rat_abs(const Rat& q) { return abs(q); }
Rat rat_floor(const Rat& q);
Rat rat_ceil(const Rat& q);
bool rat_is_integer(const Rat& q);
// Integer value of an integral rational; caller must check rat_is_integer.
long rat_to_long(const Rat& q);

}  // namespace masure
