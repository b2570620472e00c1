#include "reebforge/rational.hpp"

#include "reebforge/error.hpp"

#include <mpfr.h>

#include <cctype>
#include <numbers>

namespace reebforge {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parse: return "ParseError";
    case ErrorKind::Validation: return "ValidationError";
    case ErrorKind::Packing: return "PackingFailure";
    case ErrorKind::MarginViolation: return "MarginViolation";
    case ErrorKind::HeightFailure: return "HeightFailure";
    case ErrorKind::DegenerateEvent: return "DegenerateEvent";
    case ErrorKind::MissingSingularAngle: return "MissingSingularAngle";
    case ErrorKind::EulerMismatch: return "Mismatch";
    case ErrorKind::CountMismatch: return "CountMismatch";
    case ErrorKind::ResolutionTooCoarse: return "ResolutionTooCoarse";
    case ErrorKind::NoFactors: return "NoFactors";
    case ErrorKind::ExpansionTooLarge: return "ExpansionTooLarge";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Error";
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

mpz_class parse_integer(std::string_view s, std::string_view whole) {
  bool neg = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    neg = s[0] == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) throw Error(ErrorKind::Parse, "malformed number '" + std::string(whole) + "'");
  mpz_class z(std::string(s), 10);
  return neg ? mpz_class(-z) : z;
}

}  // namespace

mpq_class parse_rational(std::string_view text) {
  const std::string_view whole = text;
  if (text.empty()) throw Error(ErrorKind::Parse, "empty number");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    mpz_class p = parse_integer(text.substr(0, slash), whole);
    mpz_class q = parse_integer(text.substr(slash + 1), whole);
    if (q == 0) throw Error(ErrorKind::Parse, "zero denominator in '" + std::string(whole) + "'");
    mpq_class r(p, q);
    r.canonicalize();
    return r;
  }
  long exponent = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    exponent = parse_integer(text.substr(e + 1), whole).get_si();
    text = text.substr(0, e);
  }
  bool neg = false;
  if (!text.empty() && (text[0] == '-' || text[0] == '+')) {
    neg = text[0] == '-';
    text.remove_prefix(1);
  }
  std::string digits;
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view ip = text.substr(0, dot), fp = text.substr(dot + 1);
    if ((ip.empty() && fp.empty()) || (!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp)))
      throw Error(ErrorKind::Parse, "malformed number '" + std::string(whole) + "'");
    digits = std::string(ip) + std::string(fp);
    exponent -= static_cast<long>(fp.size());
  } else {
    if (!all_digits(text)) throw Error(ErrorKind::Parse, "malformed number '" + std::string(whole) + "'");
    digits = std::string(text);
  }
  mpz_class mant(digits, 10);
  if (neg) mant = -mant;
  mpz_class pow10;
  mpz_ui_pow_ui(pow10.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
  mpq_class r = exponent < 0 ? mpq_class(mant, pow10) : mpq_class(mant * pow10);
  r.canonicalize();
  return r;
}

std::string format_rational(const mpq_class& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

mpq_class round_dyadic(const mpq_class& v, int bits, int dir) {
  mpfr_t t;
  mpfr_init2(t, bits);
  const mpfr_rnd_t rnd = dir < 0 ? MPFR_RNDD : (dir > 0 ? MPFR_RNDU : MPFR_RNDN);
  mpfr_set_q(t, v.get_mpq_t(), rnd);
  mpq_class out;
  mpfr_get_q(out.get_mpq_t(), t);
  mpfr_clear(t);
  return out;
}

StructuredAngle::StructuredAngle(mpq_class turns) : turns_(std::move(turns)) {
  turns_.canonicalize();
  mpz_class fl;
  mpz_fdiv_q(fl.get_mpz_t(), turns_.get_num_mpz_t(), turns_.get_den_mpz_t());
  turns_ -= fl;
  if (turns_ == 0) turns_ = 1;
}

double StructuredAngle::radians() const { return 2.0 * std::numbers::pi * turns_.get_d(); }

}  // namespace reebforge
