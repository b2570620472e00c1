#ifndef REEBFORGE_INTERVAL_HPP
#define REEBFORGE_INTERVAL_HPP

#include <gmpxx.h>
#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace reebforge {

/// Closed interval of doubles. Every operation rounds outward by one ulp on
/// each side, which encloses the round-to-nearest result of any single
/// operation.
class Interval {
 public:
  Interval() = default;
  Interval(double v) : lo_(v), hi_(v) {}  // NOLINT: implicit from exact doubles
  Interval(double lo, double hi) : lo_(lo), hi_(hi) {}

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double mid() const { return 0.5 * (lo_ + hi_); }
  double width() const { return hi_ - lo_; }

  bool contains_zero() const { return lo_ <= 0.0 && hi_ >= 0.0; }
  bool certainly_positive() const { return lo_ > 0.0; }
  bool certainly_negative() const { return hi_ < 0.0; }
  bool is_finite() const { return std::isfinite(lo_) && std::isfinite(hi_); }

  friend Interval operator+(const Interval& a, const Interval& b) {
    return widen(a.lo_ + b.lo_, a.hi_ + b.hi_);
  }
  friend Interval operator-(const Interval& a, const Interval& b) {
    return widen(a.lo_ - b.hi_, a.hi_ - b.lo_);
  }
  friend Interval operator-(const Interval& a) { return {-a.hi_, -a.lo_}; }
  friend Interval operator*(const Interval& a, const Interval& b) {
    const double p1 = a.lo_ * b.lo_, p2 = a.lo_ * b.hi_;
    const double p3 = a.hi_ * b.lo_, p4 = a.hi_ * b.hi_;
    return widen(std::fmin(std::fmin(p1, p2), std::fmin(p3, p4)),
                 std::fmax(std::fmax(p1, p2), std::fmax(p3, p4)));
  }
  Interval& operator+=(const Interval& o) { return *this = *this + o; }
  Interval& operator-=(const Interval& o) { return *this = *this - o; }
  Interval& operator*=(const Interval& o) { return *this = *this * o; }

  friend Interval sqr(const Interval& a) {
    if (a.lo_ >= 0.0) return widen(a.lo_ * a.lo_, a.hi_ * a.hi_);
    if (a.hi_ <= 0.0) return widen(a.hi_ * a.hi_, a.lo_ * a.lo_);
    const double m = std::fmax(-a.lo_, a.hi_);
    return {0.0, std::nextafter(m * m, std::numeric_limits<double>::infinity())};
  }

 private:
  static Interval widen(double lo, double hi) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    return {std::nextafter(lo, -inf), std::nextafter(hi, inf)};
  }

  double lo_ = 0.0;
  double hi_ = 0.0;
};

/// Interval whose endpoints are each a double mantissa times 2^exponent, so
/// neither the value nor the ratio hi/lo is bounded by the double range.
/// Endpoints round outward only when an operation is inexact, so exact
/// zeros stay exact.
class ScaledInterval {
 public:
  /// m * 2^e with 1 <= |m| < 2, or m = 0 and e = 0.
  struct Ext {
    double m = 0.0;
    long e = 0;
    double log2_abs() const { return std::log2(std::fabs(m)) + static_cast<double>(e); }
  };

  ScaledInterval() = default;
  ScaledInterval(double v) : lo_(norm(v, 0)), hi_(lo_) {}  // NOLINT
  ScaledInterval(const Interval& m, long e) : lo_(norm(m.lo(), e)), hi_(norm(m.hi(), e)) {}
  static ScaledInterval from_endpoints(double mlo, long elo, double mhi, long ehi) {
    return from_ext(norm(mlo, elo), norm(mhi, ehi));
  }
  static ScaledInterval point(const Ext& v) { return from_ext(v, v); }

  const Ext& lower() const { return lo_; }
  const Ext& upper() const { return hi_; }
  bool certainly_positive() const { return lo_.m > 0.0; }
  bool certainly_negative() const { return hi_.m < 0.0; }
  bool contains_zero() const { return lo_.m <= 0.0 && hi_.m >= 0.0; }
  bool is_zero() const { return lo_.m == 0.0 && hi_.m == 0.0; }
  /// log2 of the width, -inf for a point.
  double log2_width() const {
    const Ext w = add(hi_, neg(lo_), +1);
    return w.m > 0 ? w.log2_abs() : -std::numeric_limits<double>::infinity();
  }
  Ext midpoint() const {
    Ext s = add(lo_, hi_, 0);
    if (s.m != 0.0) s.e -= 1;
    return s;
  }
  ScaledInterval mid() const { return point(midpoint()); }
  ScaledInterval lower_half() const { return from_ext(lo_, midpoint()); }
  ScaledInterval upper_half() const { return from_ext(midpoint(), hi_); }
  /// Outward enclosure as plain doubles (may flush to 0 or overflow to inf).
  Interval to_interval() const { return {to_double(lo_, -1), to_double(hi_, +1)}; }
  double lower_double() const { return to_double(lo_, -1); }
  double mid_double() const { return to_double(midpoint(), 0); }

  friend ScaledInterval operator*(const ScaledInterval& a, const ScaledInterval& b) {
    if (a.lo_.m >= 0.0 && b.lo_.m >= 0.0) return from_ext(mul(a.lo_, b.lo_, -1), mul(a.hi_, b.hi_, +1));
    const Ext c[4][2] = {{a.lo_, b.lo_}, {a.lo_, b.hi_}, {a.hi_, b.lo_}, {a.hi_, b.hi_}};
    Ext lo = mul(c[0][0], c[0][1], -1), hi = mul(c[0][0], c[0][1], +1);
    for (int i = 1; i < 4; ++i) {
      const Ext l = mul(c[i][0], c[i][1], -1), h = mul(c[i][0], c[i][1], +1);
      if (less(l, lo)) lo = l;
      if (less(hi, h)) hi = h;
    }
    return from_ext(lo, hi);
  }
  friend ScaledInterval operator+(const ScaledInterval& a, const ScaledInterval& b) {
    return from_ext(add(a.lo_, b.lo_, -1), add(a.hi_, b.hi_, +1));
  }
  friend ScaledInterval operator-(const ScaledInterval& a) { return from_ext(neg(a.hi_), neg(a.lo_)); }
  friend ScaledInterval operator-(const ScaledInterval& a, const ScaledInterval& b) { return a + (-b); }
  ScaledInterval& operator+=(const ScaledInterval& o) { return *this = *this + o; }
  ScaledInterval& operator-=(const ScaledInterval& o) { return *this = *this - o; }
  ScaledInterval& operator*=(const ScaledInterval& o) { return *this = *this * o; }
  friend ScaledInterval sqr(const ScaledInterval& a) {
    if (a.lo_.m >= 0.0) return from_ext(mul(a.lo_, a.lo_, -1), mul(a.hi_, a.hi_, +1));
    if (a.hi_.m <= 0.0) return from_ext(mul(a.hi_, a.hi_, -1), mul(a.lo_, a.lo_, +1));
    const Ext l = mul(a.lo_, a.lo_, +1), h = mul(a.hi_, a.hi_, +1);
    return from_ext(Ext{}, less(l, h) ? h : l);
  }

 private:
  static constexpr double inf = std::numeric_limits<double>::infinity();

  static ScaledInterval from_ext(const Ext& lo, const Ext& hi) {
    ScaledInterval r;
    r.lo_ = lo;
    r.hi_ = hi;
    return r;
  }
  static Ext norm(double m, long e) {
    if (m == 0.0 || !std::isfinite(m)) return {m == 0.0 ? 0.0 : m, 0};
    const int k = std::ilogb(m);
    return {std::ldexp(m, -k), e + k};
  }
  static Ext neg(const Ext& a) { return {-a.m, a.e}; }
  static double step(double x, int dir) { return dir < 0 ? std::nextafter(x, -inf) : std::nextafter(x, inf); }
  static bool less(const Ext& a, const Ext& b) {
    if ((a.m < 0) != (b.m < 0) || a.m == 0.0 || b.m == 0.0) return a.m < b.m;
    if (a.e != b.e) return a.m > 0 ? a.e < b.e : a.e > b.e;
    return a.m < b.m;
  }
  // dir: -1 rounds down, +1 up, 0 to nearest.
  static Ext mul(const Ext& a, const Ext& b, int dir) {
    if (a.m == 0.0 || b.m == 0.0) return {};
    double p = a.m * b.m;
    const double r = std::fma(a.m, b.m, -p);
    if (dir != 0 && r != 0.0 && (r > 0) == (dir > 0)) p = step(p, dir);
    return norm(p, a.e + b.e);
  }
  static Ext add(const Ext& a, const Ext& b, int dir) {
    if (a.m == 0.0) return b;
    if (b.m == 0.0) return a;
    const Ext& big = a.e >= b.e ? a : b;
    const Ext& small = a.e >= b.e ? b : a;
    const long d = big.e - small.e;
    if (d > 60) {
      // small lies below half an ulp of big
      if (dir != 0 && (small.m > 0) == (dir > 0)) return norm(step(big.m, dir), big.e);
      return big;
    }
    const double x = big.m, y = std::ldexp(small.m, static_cast<int>(-d));
    double s = x + y;
    const double bb = s - x;
    const double err = (x - (s - bb)) + (y - bb);
    if (dir != 0 && err != 0.0 && (err > 0) == (dir > 0)) s = step(s, dir);
    return norm(s, big.e);
  }
  static double to_double(const Ext& a, int dir) {
    if (a.m == 0.0) return 0.0;
    const int e = static_cast<int>(std::clamp(a.e, -100000L, 100000L));
    const double r = std::ldexp(a.m, e);
    if (dir == 0 || std::ldexp(r, -e) == a.m) return r;
    if (r == 0.0 && (a.m > 0) == (dir < 0)) return 0.0;
    if (std::isinf(r)) return dir < 0 && r > 0 ? std::numeric_limits<double>::max()
                              : dir > 0 && r < 0 ? -std::numeric_limits<double>::max() : r;
    return step(r, dir);
  }

  Ext lo_, hi_;
};

/// Closed interval with MPFR endpoints and directed rounding.
class BigInterval {
 public:
  explicit BigInterval(mpfr_prec_t prec = 128);
  BigInterval(const mpq_class& q, mpfr_prec_t prec);
  BigInterval(double v, mpfr_prec_t prec);
  BigInterval(const BigInterval& o);
  BigInterval(BigInterval&& o) noexcept;
  BigInterval& operator=(const BigInterval& o);
  BigInterval& operator=(BigInterval&& o) noexcept;
  ~BigInterval();

  static BigInterval hull(const mpq_class& lo, const mpq_class& hi, mpfr_prec_t prec);
  static BigInterval pi(mpfr_prec_t prec);

  mpfr_prec_t precision() const { return mpfr_get_prec(lo_); }

  bool contains_zero() const;
  bool certainly_positive() const { return mpfr_sgn(lo_) > 0; }
  bool certainly_negative() const { return mpfr_sgn(hi_) < 0; }
  bool certainly_less(const BigInterval& o) const { return mpfr_less_p(hi_, o.lo_) != 0; }
  bool overlaps(const BigInterval& o) const;

  double lo_double() const { return mpfr_get_d(lo_, MPFR_RNDD); }
  double hi_double() const { return mpfr_get_d(hi_, MPFR_RNDU); }
  double mid_double() const;
  Interval to_interval() const { return {lo_double(), hi_double()}; }
  ScaledInterval to_scaled() const;

  /// Exact rational value of the lower / upper endpoint.
  mpq_class lo_rational() const;
  mpq_class hi_rational() const;

  /// Midpoint in scientific notation with `digits` significant digits.
  std::string mid_decimal(int digits) const;
  /// Upper bound on the radius, 3 significant digits.
  std::string radius_decimal() const;

  friend BigInterval operator+(const BigInterval& a, const BigInterval& b);
  friend BigInterval operator-(const BigInterval& a, const BigInterval& b);
  friend BigInterval operator-(const BigInterval& a);
  friend BigInterval operator*(const BigInterval& a, const BigInterval& b);
  friend BigInterval operator/(const BigInterval& a, const BigInterval& b);
  BigInterval& operator+=(const BigInterval& o) { return *this = *this + o; }
  BigInterval& operator-=(const BigInterval& o) { return *this = *this - o; }
  BigInterval& operator*=(const BigInterval& o) { return *this = *this * o; }

  friend BigInterval sqr(const BigInterval& a);
  /// Requires the upper endpoint to be non-negative; negative lower ends clamp to 0.
  friend BigInterval sqrt(const BigInterval& a);
  friend BigInterval sin(const BigInterval& a);
  friend BigInterval cos(const BigInterval& a);
  friend BigInterval hull(const BigInterval& a, const BigInterval& b);

  const __mpfr_struct* lo() const { return lo_; }
  const __mpfr_struct* hi() const { return hi_; }

 private:
  mpfr_t lo_;
  mpfr_t hi_;
};

/// sin(2*pi*q) and cos(2*pi*q) for a rational fraction of a full turn.
BigInterval sin_turn(const mpq_class& q, mpfr_prec_t prec);
BigInterval cos_turn(const mpq_class& q, mpfr_prec_t prec);

inline Interval to_interval(const BigInterval& b) { return b.to_interval(); }

}  // namespace reebforge

#endif
