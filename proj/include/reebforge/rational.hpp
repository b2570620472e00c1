#ifndef REEBFORGE_RATIONAL_HPP
#define REEBFORGE_RATIONAL_HPP

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace reebforge {

/// Parses "p/q", an integer, or a plain decimal ("0.75", "-1.5e-3") exactly.
/// Throws Error(Parse) on malformed input.
mpq_class parse_rational(std::string_view text);

/// Canonical "p/q" rendering ("p" when q = 1).
std::string format_rational(const mpq_class& q);

/// Rounds `v` to a dyadic rational with `bits` significant bits, towards `dir`
/// (-1 down, 0 nearest, +1 up).
mpq_class round_dyadic(const mpq_class& v, int bits, int dir);

/// A fraction of a full turn, normalised to (0, 1]. Angle = 2*pi*turns.
class StructuredAngle {
 public:
  StructuredAngle() : turns_(1) {}
  explicit StructuredAngle(mpq_class turns);
  StructuredAngle(long p, long q) : StructuredAngle(mpq_class(p, q)) {}

  const mpq_class& turns() const { return turns_; }
  std::string str() const { return format_rational(turns_); }
  double radians() const;

  friend bool operator==(const StructuredAngle& a, const StructuredAngle& b) {
    return a.turns_ == b.turns_;
  }
  friend bool operator<(const StructuredAngle& a, const StructuredAngle& b) {
    return a.turns_ < b.turns_;
  }

 private:
  mpq_class turns_;
};

}  // namespace reebforge

#endif
