#include "reebforge/interval.hpp"

#include <algorithm>
#include <cstdlib>
#include <memory>
#include <stdexcept>

namespace reebforge {

namespace {

mpfr_prec_t max_prec(const BigInterval& a, const BigInterval& b) {
  return std::max(a.precision(), b.precision());
}

// Renders an mpfr value as d.ddd...e±X with `digits` significant digits.
std::string scientific(mpfr_srcptr v, int digits, mpfr_rnd_t rnd) {
  if (mpfr_zero_p(v)) return "0";
  if (mpfr_nan_p(v)) return "nan";
  if (mpfr_inf_p(v)) return mpfr_sgn(v) > 0 ? "inf" : "-inf";
  mpfr_exp_t exp10 = 0;
  char* raw = mpfr_get_str(nullptr, &exp10, 10, static_cast<size_t>(digits), v, rnd);
  std::string s(raw);
  mpfr_free_str(raw);
  std::string sign;
  if (!s.empty() && s[0] == '-') {
    sign = "-";
    s.erase(0, 1);
  }
  // Trim trailing zeros of the mantissa but keep one digit.
  while (s.size() > 1 && s.back() == '0') s.pop_back();
  std::string out = sign + s.substr(0, 1);
  if (s.size() > 1) out += "." + s.substr(1);
  const long e = static_cast<long>(exp10) - 1;
  if (e != 0) out += "e" + std::to_string(e);
  return out;
}

}  // namespace

BigInterval::BigInterval(mpfr_prec_t prec) {
  mpfr_init2(lo_, prec);
  mpfr_init2(hi_, prec);
  mpfr_set_zero(lo_, 1);
  mpfr_set_zero(hi_, 1);
}

BigInterval::BigInterval(const mpq_class& q, mpfr_prec_t prec) {
  mpfr_init2(lo_, prec);
  mpfr_init2(hi_, prec);
  mpfr_set_q(lo_, q.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(hi_, q.get_mpq_t(), MPFR_RNDU);
}

BigInterval::BigInterval(double v, mpfr_prec_t prec) {
  mpfr_init2(lo_, prec);
  mpfr_init2(hi_, prec);
  mpfr_set_d(lo_, v, MPFR_RNDD);
  mpfr_set_d(hi_, v, MPFR_RNDU);
}

BigInterval::BigInterval(const BigInterval& o) {
  mpfr_init2(lo_, o.precision());
  mpfr_init2(hi_, o.precision());
  mpfr_set(lo_, o.lo_, MPFR_RNDD);
  mpfr_set(hi_, o.hi_, MPFR_RNDU);
}

BigInterval::BigInterval(BigInterval&& o) noexcept {
  mpfr_init2(lo_, MPFR_PREC_MIN);
  mpfr_init2(hi_, MPFR_PREC_MIN);
  mpfr_swap(lo_, o.lo_);
  mpfr_swap(hi_, o.hi_);
}

BigInterval& BigInterval::operator=(const BigInterval& o) {
  if (this != &o) {
    mpfr_set_prec(lo_, o.precision());
    mpfr_set_prec(hi_, o.precision());
    mpfr_set(lo_, o.lo_, MPFR_RNDD);
    mpfr_set(hi_, o.hi_, MPFR_RNDU);
  }
  return *this;
}

BigInterval& BigInterval::operator=(BigInterval&& o) noexcept {
  mpfr_swap(lo_, o.lo_);
  mpfr_swap(hi_, o.hi_);
  return *this;
}

BigInterval::~BigInterval() {
  mpfr_clear(lo_);
  mpfr_clear(hi_);
}

BigInterval BigInterval::hull(const mpq_class& lo, const mpq_class& hi, mpfr_prec_t prec) {
  BigInterval r(prec);
  mpfr_set_q(r.lo_, lo.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(r.hi_, hi.get_mpq_t(), MPFR_RNDU);
  return r;
}

BigInterval BigInterval::pi(mpfr_prec_t prec) {
  BigInterval r(prec);
  mpfr_const_pi(r.lo_, MPFR_RNDD);
  mpfr_const_pi(r.hi_, MPFR_RNDU);
  return r;
}

bool BigInterval::contains_zero() const { return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0; }

bool BigInterval::overlaps(const BigInterval& o) const {
  return mpfr_lessequal_p(lo_, o.hi_) && mpfr_lessequal_p(o.lo_, hi_);
}

double BigInterval::mid_double() const {
  return 0.5 * (mpfr_get_d(lo_, MPFR_RNDN) + mpfr_get_d(hi_, MPFR_RNDN));
}

mpq_class BigInterval::lo_rational() const {
  mpq_class q;
  mpfr_get_q(q.get_mpq_t(), lo_);
  return q;
}

mpq_class BigInterval::hi_rational() const {
  mpq_class q;
  mpfr_get_q(q.get_mpq_t(), hi_);
  return q;
}

std::string BigInterval::mid_decimal(int digits) const {
  mpfr_t m;
  mpfr_init2(m, precision() + 2);
  mpfr_add(m, lo_, hi_, MPFR_RNDN);
  mpfr_div_2ui(m, m, 1, MPFR_RNDN);
  std::string s = scientific(m, digits, MPFR_RNDN);
  mpfr_clear(m);
  return s;
}

std::string BigInterval::radius_decimal() const {
  mpfr_t r;
  mpfr_init2(r, precision());
  mpfr_sub(r, hi_, lo_, MPFR_RNDU);
  mpfr_div_2ui(r, r, 1, MPFR_RNDU);
  std::string s = scientific(r, 3, MPFR_RNDU);
  mpfr_clear(r);
  return s;
}

BigInterval operator+(const BigInterval& a, const BigInterval& b) {
  BigInterval r(max_prec(a, b));
  mpfr_add(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
  mpfr_add(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
  return r;
}

BigInterval operator-(const BigInterval& a, const BigInterval& b) {
  BigInterval r(max_prec(a, b));
  mpfr_sub(r.lo_, a.lo_, b.hi_, MPFR_RNDD);
  mpfr_sub(r.hi_, a.hi_, b.lo_, MPFR_RNDU);
  return r;
}

BigInterval operator-(const BigInterval& a) {
  BigInterval r(a.precision());
  mpfr_neg(r.lo_, a.hi_, MPFR_RNDD);
  mpfr_neg(r.hi_, a.lo_, MPFR_RNDU);
  return r;
}

BigInterval operator*(const BigInterval& a, const BigInterval& b) {
  const mpfr_prec_t prec = max_prec(a, b);
  BigInterval r(prec);
  // Sign-case analysis avoids four products in the common cases.
  if (mpfr_sgn(a.lo_) >= 0 && mpfr_sgn(b.lo_) >= 0) {
    mpfr_mul(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
    mpfr_mul(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
    return r;
  }
  mpfr_t t;
  mpfr_init2(t, prec);
  mpfr_mul(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
  mpfr_mul(t, a.lo_, b.hi_, MPFR_RNDD);
  mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);
  mpfr_mul(t, a.hi_, b.lo_, MPFR_RNDD);
  mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);
  mpfr_mul(t, a.hi_, b.hi_, MPFR_RNDD);
  mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);

  mpfr_mul(r.hi_, a.lo_, b.lo_, MPFR_RNDU);
  mpfr_mul(t, a.lo_, b.hi_, MPFR_RNDU);
  mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
  mpfr_mul(t, a.hi_, b.lo_, MPFR_RNDU);
  mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
  mpfr_mul(t, a.hi_, b.hi_, MPFR_RNDU);
  mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
  mpfr_clear(t);
  return r;
}

BigInterval operator/(const BigInterval& a, const BigInterval& b) {
  if (b.contains_zero()) throw std::domain_error("interval division by an interval containing zero");
  const mpfr_prec_t prec = max_prec(a, b);
  BigInterval inv(prec);
  mpfr_ui_div(inv.lo_, 1, b.hi_, MPFR_RNDD);
  mpfr_ui_div(inv.hi_, 1, b.lo_, MPFR_RNDU);
  return a * inv;
}

BigInterval sqr(const BigInterval& a) {
  BigInterval r(a.precision());
  if (mpfr_sgn(a.lo_) >= 0) {
    mpfr_sqr(r.lo_, a.lo_, MPFR_RNDD);
    mpfr_sqr(r.hi_, a.hi_, MPFR_RNDU);
  } else if (mpfr_sgn(a.hi_) <= 0) {
    mpfr_sqr(r.lo_, a.hi_, MPFR_RNDD);
    mpfr_sqr(r.hi_, a.lo_, MPFR_RNDU);
  } else {
    mpfr_set_zero(r.lo_, 1);
    mpfr_t t;
    mpfr_init2(t, a.precision());
    mpfr_sqr(r.hi_, a.lo_, MPFR_RNDU);
    mpfr_sqr(t, a.hi_, MPFR_RNDU);
    mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
    mpfr_clear(t);
  }
  return r;
}

BigInterval sqrt(const BigInterval& a) {
  if (mpfr_sgn(a.hi_) < 0) throw std::domain_error("interval sqrt of a negative interval");
  BigInterval r(a.precision());
  if (mpfr_sgn(a.lo_) <= 0) {
    mpfr_set_zero(r.lo_, 1);
  } else {
    mpfr_sqrt(r.lo_, a.lo_, MPFR_RNDD);
  }
  mpfr_sqrt(r.hi_, a.hi_, MPFR_RNDU);
  return r;
}

// |sin t - sin lo| <= |t - lo| gives an enclosure without case analysis on
// extrema; the interval arguments here are always a few ulps wide.
BigInterval sin(const BigInterval& a) {
  const mpfr_prec_t prec = a.precision();
  BigInterval r(prec);
  mpfr_t w;
  mpfr_init2(w, prec);
  mpfr_sub(w, a.hi_, a.lo_, MPFR_RNDU);
  mpfr_sin(r.lo_, a.lo_, MPFR_RNDD);
  mpfr_sin(r.hi_, a.lo_, MPFR_RNDU);
  mpfr_sub(r.lo_, r.lo_, w, MPFR_RNDD);
  mpfr_add(r.hi_, r.hi_, w, MPFR_RNDU);
  if (mpfr_cmp_si(r.lo_, -1) < 0) mpfr_set_si(r.lo_, -1, MPFR_RNDD);
  if (mpfr_cmp_si(r.hi_, 1) > 0) mpfr_set_si(r.hi_, 1, MPFR_RNDU);
  mpfr_clear(w);
  return r;
}

BigInterval cos(const BigInterval& a) {
  const mpfr_prec_t prec = a.precision();
  BigInterval r(prec);
  mpfr_t w;
  mpfr_init2(w, prec);
  mpfr_sub(w, a.hi_, a.lo_, MPFR_RNDU);
  mpfr_cos(r.lo_, a.lo_, MPFR_RNDD);
  mpfr_cos(r.hi_, a.lo_, MPFR_RNDU);
  mpfr_sub(r.lo_, r.lo_, w, MPFR_RNDD);
  mpfr_add(r.hi_, r.hi_, w, MPFR_RNDU);
  if (mpfr_cmp_si(r.lo_, -1) < 0) mpfr_set_si(r.lo_, -1, MPFR_RNDD);
  if (mpfr_cmp_si(r.hi_, 1) > 0) mpfr_set_si(r.hi_, 1, MPFR_RNDU);
  mpfr_clear(w);
  return r;
}

BigInterval hull(const BigInterval& a, const BigInterval& b) {
  BigInterval r(max_prec(a, b));
  mpfr_min(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
  mpfr_max(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
  return r;
}

namespace {

BigInterval turn_angle(const mpq_class& q, mpfr_prec_t prec) {
  // Reduce to [0,1) exactly before scaling by 2*pi to keep the argument small.
  mpq_class f = q - mpq_class(mpz_class(q.get_num() / q.get_den()));
  if (f < 0) f += 1;
  const mpfr_prec_t work = prec + 16;
  return BigInterval(f, work) * BigInterval::pi(work) * BigInterval(2.0, work);
}

}  // namespace

BigInterval sin_turn(const mpq_class& q, mpfr_prec_t prec) {
  return sin(turn_angle(q, prec));
}

BigInterval cos_turn(const mpq_class& q, mpfr_prec_t prec) {
  return cos(turn_angle(q, prec));
}

}  // namespace reebforge

namespace reebforge {

ScaledInterval BigInterval::to_scaled() const {
  long elo = 0, ehi = 0;
  const double mlo = mpfr_get_d_2exp(&elo, lo_, MPFR_RNDD);
  const double mhi = mpfr_get_d_2exp(&ehi, hi_, MPFR_RNDU);
  return ScaledInterval::from_endpoints(mlo, elo, mhi, ehi);
}

}  // namespace reebforge
