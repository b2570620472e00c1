#ifndef REEBFORGE_POLY_HPP
#define REEBFORGE_POLY_HPP

#include "reebforge/graph_model.hpp"
#include "reebforge/interval.hpp"
#include "reebforge/layout.hpp"

#include <gmpxx.h>

#include <cstddef>
#include <map>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace reebforge {

enum class FactorKind { AnnulusOuter, AnnulusInner, Circle, Ellipse, Ellipsoid };

const char* to_string(FactorKind kind);

/// Diagonal quadratic constant + sum_i weight_i * (z[vars_i] - center_i)^2.
/// Every factor is non-negative exactly on the side that is kept.
struct Factor {
  FactorKind kind = FactorKind::Circle;
  int circle = -1;   ///< arrangement index for circle / ellipsoid factors
  int stage = 0;     ///< ellipsoid stage j''
  mpq_class height;  ///< ellipsoid transverse semi-axis
  std::vector<int> vars;
  std::vector<BigInterval> weight, center;
  BigInterval constant;
  // Outward-rounded double copies used by the fast evaluators.
  std::vector<Interval> weight_d, center_d;
  Interval constant_d;
  std::vector<ScaledInterval> weight_s, center_s;
  ScaledInterval constant_s;

  void refresh_fast();
  int max_var() const;
};

/// One step of the value recursion: multiply by a factor, or subtract the
/// squares of `count` fresh variables starting at index `begin`.
struct PolyStep {
  bool subtract = false;
  size_t factor = 0;
  int begin = 0;
  int count = 0;
};

class FactoredPolynomial {
 public:
  explicit FactoredPolynomial(int variables = 2, mpfr_prec_t prec = 128)
      : vars_(variables), prec_(prec) {}

  int variables() const { return vars_; }
  mpfr_prec_t precision() const { return prec_; }
  const std::vector<Factor>& factors() const { return factors_; }
  const std::vector<PolyStep>& steps() const { return steps_; }

  void multiply(Factor f);
  /// Appends k fresh variables y and subtracts |y|^2 from the current value.
  void subtract_squares(int k);

  /// Total degree, 2 per quadratic factor. Throws Error(NoFactors).
  int degree() const;

  /// Value and gradient after the first `nsteps` steps (all by default).
  /// T is Interval (fast, outward-rounded doubles), ScaledInterval (doubles
  /// with a free exponent) or BigInterval.
  template <class T>
  std::pair<T, std::vector<T>> eval_grad(const std::vector<T>& z, size_t nsteps = SIZE_MAX) const;
  template <class T>
  T eval(const std::vector<T>& z, size_t nsteps = SIZE_MAX) const;

 private:
  template <class T>
  T unit(double v) const {
    if constexpr (std::is_same_v<T, BigInterval>) return BigInterval(v, prec_);
    else return T(v);
  }
  template <class T>
  static const T& pick(const Interval& d, const ScaledInterval& s, const BigInterval& b) {
    if constexpr (std::is_same_v<T, Interval>) return d;
    else if constexpr (std::is_same_v<T, ScaledInterval>) return s;
    else return b;
  }

  int vars_;
  mpfr_prec_t prec_;
  std::vector<Factor> factors_;
  std::vector<PolyStep> steps_;
};

/// Certified value and gradient enclosures of the full polynomial.
std::pair<BigInterval, std::vector<BigInterval>> eval_and_gradient(const FactoredPolynomial& f,
                                                                   const std::vector<BigInterval>& z);

/// Annulus (or ellipse) times one factor per removed disk; two variables.
FactoredPolynomial region_polynomial(const CircleArrangement& arr, mpfr_prec_t prec);
/// F - |y|^2 with k' fresh variables y.
FactoredPolynomial us_construct(FactoredPolynomial f, int k);

/// Factor h^2 |x-b|^2 + r^2 |y_T|^2 - r^2 h^2 over the planar variables and the
/// transverse variables y_T = z[2 .. 2+transverse).
Factor ellipsoid_factor(const CircleArrangement& arr, int circle, int stage, const mpq_class& height,
                        int transverse, mpfr_prec_t prec);

/// Certified lower bound of f(x, 0) over the closed disk, by branch and bound.
double disk_lower_bound(const FactoredPolynomial& f, const CircleNumeric& disk);
/// Transverse semi-axis for an ellipsoid over `disk` in f's ambient space:
/// starts at (1/2)sqrt(L), rounded down to a dyadic rational, and is halved
/// until f > 0 is certified on disk x [-h,h]^(n-2). Throws Error(HeightFailure).
mpq_class ellipsoid_height(const FactoredPolynomial& f, const CircleNumeric& disk);
/// Multiplies in one ellipsoid per handle circle of the stage; all previous
/// variables beyond the plane are transverse.
FactoredPolynomial remove_ellipsoids(FactoredPolynomial f, const CircleArrangement& arr, int stage,
                                     mpfr_prec_t prec);

struct FiberWord {
  EdgeId edge;
  std::vector<int> sequence;
  std::string word;
};

/// Connected-sum word of a fiber: "S^{m-1}" for an empty sum, otherwise terms
/// S^j x S^{m-j-1} repeated per stage count, joined by " # ".
std::string fiber_word(int dimension, const std::vector<int>& stage_counts);

struct SynthesisResult {
  GraphSpec spec;
  CircleArrangement arrangement;
  FactoredPolynomial polynomial;
  std::vector<FiberWord> fibers;
  mpfr_prec_t precision = 128;
};

/// Validated spec to arrangement and polynomial in m+1 variables.
SynthesisResult synthesize(const ValidatedSpec& spec, mpfr_prec_t prec);
/// Polynomial stages and fiber words for a given (possibly loaded) arrangement.
SynthesisResult assemble(const ValidatedSpec& spec, CircleArrangement arr, mpfr_prec_t prec);
/// Closed-form degree of the construction for a spec.
int formula_degree(const ValidatedSpec& spec);

/// Sparse expansion, monomials in graded lexicographic order.
struct Monomial {
  std::vector<int> exponents;
  BigInterval coefficient;
};
struct ExpandedPolynomial {
  int variables = 0;
  std::vector<Monomial> monomials;
  BigInterval eval(const std::vector<BigInterval>& z) const;
  int total_degree() const;
};

inline constexpr double kDefaultExpansionGuard = 1e6;
/// Throws Error(ExpansionTooLarge) when C(n+D, n) exceeds the guard.
ExpandedPolynomial expand(const FactoredPolynomial& f, mpfr_prec_t prec, double guard = kDefaultExpansionGuard);
double estimated_monomials(const FactoredPolynomial& f);

/// Plain-text rendering with decimal coefficients, variables x1..xn.
std::string to_text(const FactoredPolynomial& f, int digits);

struct ExtensionArtifact {
  int variables = 0;
  int degree = 0;
  std::string inequality;  ///< ">= 0"
  std::string region;      ///< description of {P >= 0}
  std::string map;         ///< projection composed with the curve retraction
  bool restriction_nonsingular_claimed = true;
};

ExtensionArtifact nonsingular_extension(const SynthesisResult& model);

// ---------------------------------------------------------------------------

template <class T>
std::pair<T, std::vector<T>> FactoredPolynomial::eval_grad(const std::vector<T>& z, size_t nsteps) const {
  T v = unit<T>(1.0);
  std::vector<T> g(z.size(), unit<T>(0.0));
  const size_t end = std::min(nsteps, steps_.size());
  for (size_t s = 0; s < end; ++s) {
    const PolyStep& st = steps_[s];
    if (st.subtract) {
      for (int i = st.begin; i < st.begin + st.count; ++i) {
        const T& y = z[static_cast<size_t>(i)];
        v -= sqr(y);
        g[static_cast<size_t>(i)] -= unit<T>(2.0) * y;
      }
      continue;
    }
    const Factor& f = factors_[st.factor];
    T fv = pick<T>(f.constant_d, f.constant_s, f.constant);
    std::vector<std::pair<int, T>> fg;
    fg.reserve(f.vars.size());
    for (size_t i = 0; i < f.vars.size(); ++i) {
      const T& w = pick<T>(f.weight_d[i], f.weight_s[i], f.weight[i]);
      const T diff = z[static_cast<size_t>(f.vars[i])] - pick<T>(f.center_d[i], f.center_s[i], f.center[i]);
      fv += w * sqr(diff);
      fg.emplace_back(f.vars[i], unit<T>(2.0) * w * diff);
    }
    for (auto& gi : g) gi *= fv;
    for (auto& [var, d] : fg) g[static_cast<size_t>(var)] += v * d;
    v *= fv;
  }
  return {std::move(v), std::move(g)};
}

template <class T>
T FactoredPolynomial::eval(const std::vector<T>& z, size_t nsteps) const {
  T v = unit<T>(1.0);
  const size_t end = std::min(nsteps, steps_.size());
  for (size_t s = 0; s < end; ++s) {
    const PolyStep& st = steps_[s];
    if (st.subtract) {
      for (int i = st.begin; i < st.begin + st.count; ++i) v -= sqr(z[static_cast<size_t>(i)]);
      continue;
    }
    const Factor& f = factors_[st.factor];
    T fv = pick<T>(f.constant_d, f.constant_s, f.constant);
    for (size_t i = 0; i < f.vars.size(); ++i)
      fv += pick<T>(f.weight_d[i], f.weight_s[i], f.weight[i]) * sqr(z[static_cast<size_t>(f.vars[i])] - pick<T>(f.center_d[i], f.center_s[i], f.center[i]));
    v *= fv;
  }
  return v;
}

}  // namespace reebforge

#endif
