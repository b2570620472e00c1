#include "reebforge/poly.hpp"

#include "reebforge/error.hpp"
#include "reebforge/rational.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>

namespace reebforge {

const char* to_string(FactorKind kind) {
  switch (kind) {
    case FactorKind::AnnulusOuter: return "annulus_outer";
    case FactorKind::AnnulusInner: return "annulus_inner";
    case FactorKind::Circle: return "circle";
    case FactorKind::Ellipse: return "ellipse_outer";
    case FactorKind::Ellipsoid: return "ellipsoid";
  }
  return "factor";
}

void Factor::refresh_fast() {
  weight_d.clear();
  center_d.clear();
  weight_s.clear();
  center_s.clear();
  for (const auto& w : weight) weight_d.push_back(w.to_interval()), weight_s.push_back(w.to_scaled());
  for (const auto& c : center) center_d.push_back(c.to_interval()), center_s.push_back(c.to_scaled());
  constant_d = constant.to_interval();
  constant_s = constant.to_scaled();
}

int Factor::max_var() const {
  return vars.empty() ? -1 : *std::max_element(vars.begin(), vars.end());
}

void FactoredPolynomial::multiply(Factor f) {
  if (f.max_var() >= vars_)
    throw Error(ErrorKind::InvalidArgument, "factor uses a variable beyond the ambient dimension");
  f.refresh_fast();
  factors_.push_back(std::move(f));
  steps_.push_back({false, factors_.size() - 1, 0, 0});
}

void FactoredPolynomial::subtract_squares(int k) {
  if (k <= 0) throw Error(ErrorKind::InvalidArgument, "unit-sphere block needs k' >= 1");
  steps_.push_back({true, 0, vars_, k});
  vars_ += k;
}

int FactoredPolynomial::degree() const {
  if (factors_.empty()) throw Error(ErrorKind::NoFactors, "polynomial has no factors");
  return 2 * static_cast<int>(factors_.size());
}

std::pair<BigInterval, std::vector<BigInterval>> eval_and_gradient(const FactoredPolynomial& f,
                                                                   const std::vector<BigInterval>& z) {
  if (static_cast<int>(z.size()) != f.variables())
    throw Error(ErrorKind::InvalidArgument, "point has " + std::to_string(z.size()) + " coordinates, expected " +
                                                std::to_string(f.variables()));
  return f.eval_grad(z);
}

namespace {

Factor planar_factor(FactorKind kind, const BigInterval& constant, const BigInterval& w1, const BigInterval& w2,
                     const BigInterval& c1, const BigInterval& c2) {
  Factor f;
  f.kind = kind;
  f.vars = {0, 1};
  f.weight = {w1, w2};
  f.center = {c1, c2};
  f.constant = constant;
  return f;
}

}  // namespace

FactoredPolynomial region_polynomial(const CircleArrangement& arr, mpfr_prec_t prec) {
  FactoredPolynomial f(2, prec);
  const BigInterval zero(0.0, prec), one(1.0, prec), minus_one(-1.0, prec);
  if (arr.mode == GraphMode::Circle) {
    f.multiply(planar_factor(FactorKind::AnnulusOuter, BigInterval(mpq_class((1 + arr.a) * (1 + arr.a)), prec),
                             minus_one, minus_one, zero, zero));
    f.multiply(planar_factor(FactorKind::AnnulusInner, BigInterval(mpq_class(-(1 - arr.a) * (1 - arr.a)), prec),
                             one, one, zero, zero));
  } else {
    const mpq_class a2 = arr.ellipse_a * arr.ellipse_a, b2 = arr.ellipse_b * arr.ellipse_b;
    f.multiply(planar_factor(FactorKind::Ellipse, BigInterval(mpq_class(a2 * b2), prec),
                             BigInterval(mpq_class(-b2), prec), BigInterval(mpq_class(-a2), prec), zero, zero));
  }
  for (size_t i = 0; i < arr.circles.size(); ++i) {
    const auto& c = arr.circles[i];
    if (!c.is_removed()) continue;
    const CircleNumeric n = circle_numeric(arr, c, prec);
    Factor fc = planar_factor(FactorKind::Circle, -n.r2, one, one, n.cx, n.cy);
    fc.circle = static_cast<int>(i);
    f.multiply(std::move(fc));
  }
  return f;
}

FactoredPolynomial us_construct(FactoredPolynomial f, int k) {
  f.subtract_squares(k);
  return f;
}

Factor ellipsoid_factor(const CircleArrangement& arr, int circle, int stage, const mpq_class& height,
                        int transverse, mpfr_prec_t prec) {
  const CircleNumeric n = circle_numeric(arr, arr.circles.at(static_cast<size_t>(circle)), prec);
  // |x-b|^2 + (r/h)^2 |y|^2 - r^2: scaled by 1/h^2 so that values do not
  // shrink with every stage.
  const BigInterval one(1.0, prec), zero(0.0, prec);
  const BigInterval stretch = n.r2 / BigInterval(mpq_class(height * height), prec);
  Factor f;
  f.kind = FactorKind::Ellipsoid;
  f.circle = circle;
  f.stage = stage;
  f.height = height;
  f.vars = {0, 1};
  f.weight = {one, one};
  f.center = {n.cx, n.cy};
  for (int t = 0; t < transverse; ++t) {
    f.vars.push_back(2 + t);
    f.weight.push_back(stretch);
    f.center.push_back(zero);
  }
  f.constant = -n.r2;
  return f;
}

namespace {

// Boxes carry scaled coordinates: transverse heights can lie far below the
// double range even when the planar box does not.
struct Box {
  std::vector<ScaledInterval> z;
  ScaledInterval value;
  double rank = 0.0;  // monotone in value.lo, for the heap
  bool operator>(const Box& o) const { return rank > o.rank; }
};

double rank_of(const ScaledInterval& v) {
  constexpr double offset = 1e9;
  const ScaledInterval::Ext& lo = v.lower();
  if (lo.m == 0.0) return 0.0;
  const double mag = offset + lo.log2_abs();
  return lo.m > 0 ? mag : -mag;
}

// Plain doubles when they suffice, the scaled evaluator when the value
// approaches the bottom of the double range.
ScaledInterval eval_box(const FactoredPolynomial& f, const std::vector<ScaledInterval>& z) {
  std::vector<Interval> zi;
  zi.reserve(z.size());
  for (const auto& c : z) zi.push_back(c.to_interval());
  const Interval v = f.eval(zi);
  if (v.is_finite() && (v.lo() > 1e-250 || v.hi() < -1e-250)) return ScaledInterval(v, 0);
  return f.eval(z);
}

Interval planar(const ScaledInterval& v) { return v.to_interval(); }

// True when the planar part of the box certainly misses the closed disk.
bool outside_disk(const Box& b, const CircleNumeric& d) {
  const Interval cx = d.cx.to_interval(), cy = d.cy.to_interval();
  auto gap = [](const Interval& v, const Interval& c) {
    // Lower bound of the distance from c to the interval v along one axis.
    const double g = std::max({0.0, v.lo() - c.hi(), c.lo() - v.hi()});
    return Interval(g);
  };
  const Interval dist2 = sqr(gap(planar(b.z[0]), cx)) + sqr(gap(planar(b.z[1]), cy));
  return dist2.lo() > d.r2.to_interval().hi();
}

bool centre_in_disk(const Box& b, const CircleNumeric& d) {
  const double x = planar(b.z[0]).mid() - d.cx.mid_double(), y = planar(b.z[1]).mid() - d.cy.mid_double();
  return x * x + y * y < d.r2.lo_double();
}

std::vector<ScaledInterval> centre_point(const Box& b) {
  std::vector<ScaledInterval> p;
  for (const auto& v : b.z) p.push_back(v.mid());
  return p;
}

std::pair<Box, Box> split(const Box& b) {
  size_t axis = 0;
  for (size_t i = 1; i < b.z.size(); ++i)
    if (b.z[i].log2_width() > b.z[axis].log2_width()) axis = i;
  Box l = b, r = b;
  l.z[axis] = b.z[axis].lower_half();
  r.z[axis] = b.z[axis].upper_half();
  return {l, r};
}

Box disk_box(const CircleNumeric& d, int vars) {
  Box b;
  const double r = d.r.hi_double();
  b.z.assign(static_cast<size_t>(vars), ScaledInterval(0.0));
  b.z[0] = ScaledInterval(Interval(d.cx.lo_double() - r, d.cx.hi_double() + r), 0);
  b.z[1] = ScaledInterval(Interval(d.cy.lo_double() - r, d.cy.hi_double() + r), 0);
  return b;
}

// (upper - lower) <= tol * |upper| for a positive upper bound.
bool converged(const ScaledInterval& lower, const ScaledInterval& upper, double tol) {
  const ScaledInterval::Ext u = upper.upper(), g = (upper - lower).upper();
  if (!(u.m > 0)) return false;
  return g.m <= 0 || g.log2_abs() <= std::log2(tol) + u.log2_abs();
}

ScaledInterval lower_bound_on_disk(const FactoredPolynomial& f, const CircleNumeric& disk) {
  std::priority_queue<Box, std::vector<Box>, std::greater<>> heap;
  Box root = disk_box(disk, f.variables());
  root.value = eval_box(f, root.z);
  root.rank = rank_of(root.value);
  heap.push(root);
  ScaledInterval upper = eval_box(f, centre_point(root));
  for (int iter = 0; iter < 20000 && !heap.empty(); ++iter) {
    const Box b = heap.top();
    if (converged(ScaledInterval::point(b.value.lower()), ScaledInterval::point(upper.upper()), 1e-3)) break;
    heap.pop();
    auto [l, r] = split(b);
    for (Box* c : {&l, &r}) {
      if (outside_disk(*c, disk)) continue;
      c->value = eval_box(f, c->z);
      c->rank = rank_of(c->value);
      if (centre_in_disk(*c, disk)) {
        const ScaledInterval u = eval_box(f, centre_point(*c));
        if (rank_of(ScaledInterval::point(u.upper())) < rank_of(ScaledInterval::point(upper.upper()))) upper = u;
      }
      heap.push(std::move(*c));
    }
  }
  if (heap.empty()) return ScaledInterval::point(upper.upper());
  return ScaledInterval::point(heap.top().value.lower());
}

// Branch and bound proof that f > 0 on the box restricted to the disk.
bool certify_positive(const FactoredPolynomial& f, const Box& root, const CircleNumeric& disk) {
  std::vector<Box> stack{root};
  long budget = 400000;
  while (!stack.empty()) {
    if (--budget < 0) return false;
    Box b = std::move(stack.back());
    stack.pop_back();
    if (outside_disk(b, disk)) continue;
    if (eval_box(f, b.z).certainly_positive()) continue;
    if (centre_in_disk(b, disk) && !eval_box(f, centre_point(b)).certainly_positive()) return false;
    auto [l, r] = split(b);
    stack.push_back(std::move(l));
    stack.push_back(std::move(r));
  }
  return true;
}

}  // namespace

double disk_lower_bound(const FactoredPolynomial& f, const CircleNumeric& disk) {
  const ScaledInterval lb = lower_bound_on_disk(f, disk);
  return lb.lower_double();
}

mpq_class ellipsoid_height(const FactoredPolynomial& f, const CircleNumeric& disk) {
  const ScaledInterval lower = lower_bound_on_disk(f, disk);
  if (!lower.certainly_positive())
    throw Error(ErrorKind::HeightFailure, "lower bound of the polynomial on the disk is not positive");
  // h = sqrt(L)/2 with L = m 2^e, taken from an even exponent and rounded down.
  double m = lower.lower().m;
  long e = lower.lower().e;
  if (e % 2 != 0) m *= 2, e -= 1;
  const double root = std::nextafter(std::sqrt(m), 0.0);
  mpq_class h(root);
  h /= 2;
  if (e >= 0) mpq_mul_2exp(h.get_mpq_t(), h.get_mpq_t(), static_cast<mp_bitcnt_t>(e / 2));
  else mpq_div_2exp(h.get_mpq_t(), h.get_mpq_t(), static_cast<mp_bitcnt_t>(-e / 2));
  h = round_dyadic(h, 32, -1);
  const int transverse = f.variables() - 2;
  for (int attempt = 0; attempt < 40; ++attempt) {
    if (transverse == 0) return h;
    Box b = disk_box(disk, f.variables());
    const BigInterval hb(h, 64);
    const ScaledInterval::Ext hs = hb.to_scaled().upper();
    const ScaledInterval span = ScaledInterval::from_endpoints(-hs.m, hs.e, hs.m, hs.e);
    for (int t = 0; t < transverse; ++t) b.z[static_cast<size_t>(2 + t)] = span;
    if (certify_positive(f, b, disk)) return h;
    h /= 2;
  }
  throw Error(ErrorKind::HeightFailure, "no certified ellipsoid height");
}

FactoredPolynomial remove_ellipsoids(FactoredPolynomial f, const CircleArrangement& arr, int stage,
                                     mpfr_prec_t prec) {
  const FactoredPolynomial before = f;
  for (size_t i = 0; i < arr.circles.size(); ++i) {
    const auto& c = arr.circles[i];
    if (c.is_removed() || c.stage != stage) continue;
    const CircleNumeric disk = circle_numeric(arr, c, prec);
    const mpq_class h = ellipsoid_height(before, disk);
    f.multiply(ellipsoid_factor(arr, static_cast<int>(i), stage, h, f.variables() - 2, prec));
  }
  return f;
}

std::string fiber_word(int dimension, const std::vector<int>& stage_counts) {
  std::vector<std::string> terms;
  for (size_t st = 0; st < stage_counts.size(); ++st) {
    const int j = static_cast<int>(st) + 1;
    for (int c = 0; c < stage_counts[st]; ++c)
      terms.push_back("S^" + std::to_string(j) + "xS^" + std::to_string(dimension - j - 1));
  }
  if (terms.empty()) return "S^" + std::to_string(dimension - 1);
  std::string out = terms.front();
  for (size_t i = 1; i < terms.size(); ++i) out += " # " + terms[i];
  return out;
}

int formula_degree(const ValidatedSpec& spec) {
  int removed = 0;
  const auto& a = spec.multiplicities();
  for (int x : a) removed += x - 1;
  if (spec.mode() == GraphMode::Line) return 2 + 2 * removed;
  int handles = 0;
  if (spec.has_handles())
    for (const auto& [edge, seq] : *spec.spec().handles)
      for (int x : seq) handles += x;
  return 2 * handles + 2 * removed + 4;
}

SynthesisResult assemble(const ValidatedSpec& spec, CircleArrangement arr, mpfr_prec_t prec) {
  SynthesisResult out;
  out.spec = spec.spec();
  out.precision = prec;
  out.arrangement = std::move(arr);
  FactoredPolynomial f = region_polynomial(out.arrangement, prec);
  const int m = spec.dimension();
  if (!spec.has_handles()) {
    f = us_construct(std::move(f), m - 1);
  } else {
    f = us_construct(std::move(f), 1);
    const int stages = spec.stages();
    for (int st = 1; st <= stages; ++st) {
      f = remove_ellipsoids(std::move(f), out.arrangement, st, prec);
      f = us_construct(std::move(f), st < stages ? 1 : m - f.variables() + 1);
    }
  }
  out.polynomial = std::move(f);
  const int sectors = spec.mode() == GraphMode::Circle ? spec.vertex_count() : spec.vertex_count() - 1;
  for (int j = 1; j <= sectors; ++j)
    for (int ch = 1; ch <= spec.multiplicities()[static_cast<size_t>(j - 1)]; ++ch) {
      auto seq = spec.handle_sequence(j, ch);
      out.fibers.push_back({{j, ch}, seq, fiber_word(m, seq)});
    }
  return out;
}

SynthesisResult synthesize(const ValidatedSpec& spec, mpfr_prec_t prec) {
  return assemble(spec, layout(spec, prec), prec);
}

// ---------------------------------------------------------------------------
// Expansion

namespace {

struct Grlex {
  bool operator()(const std::vector<int>& a, const std::vector<int>& b) const {
    int da = 0, db = 0;
    for (int e : a) da += e;
    for (int e : b) db += e;
    if (da != db) return da > db;
    return a > b;
  }
};

using Sparse = std::map<std::vector<int>, BigInterval, Grlex>;

void accumulate(Sparse& p, const std::vector<int>& e, const BigInterval& c) {
  auto it = p.find(e);
  if (it == p.end()) p.emplace(e, c);
  else it->second += c;
}

Sparse multiply(const Sparse& a, const Sparse& b) {
  Sparse out;
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b) {
      std::vector<int> e(ea.size());
      for (size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      accumulate(out, e, ca * cb);
    }
  return out;
}

Sparse factor_sparse(const Factor& f, int n, mpfr_prec_t prec) {
  Sparse p;
  const std::vector<int> zero(static_cast<size_t>(n), 0);
  BigInterval constant = f.constant;
  for (size_t i = 0; i < f.vars.size(); ++i) {
    const BigInterval& w = f.weight[i];
    const BigInterval& c = f.center[i];
    std::vector<int> e2 = zero, e1 = zero;
    e2[static_cast<size_t>(f.vars[i])] = 2;
    e1[static_cast<size_t>(f.vars[i])] = 1;
    accumulate(p, e2, w);
    if (!(c.lo_double() == 0.0 && c.hi_double() == 0.0))
      accumulate(p, e1, BigInterval(-2.0, prec) * w * c);
    constant += w * sqr(c);
  }
  accumulate(p, zero, constant);
  return p;
}

}  // namespace

double estimated_monomials(const FactoredPolynomial& f) {
  // C(n + D, n)
  const int n = f.variables();
  const int d = f.factors().empty() ? 2 : f.degree();
  double c = 1.0;
  for (int i = 1; i <= n; ++i) c = c * (d + i) / i;
  return c;
}

ExpandedPolynomial expand(const FactoredPolynomial& f, mpfr_prec_t prec, double guard) {
  const double est = estimated_monomials(f);
  if (est > guard)
    throw Error(ErrorKind::ExpansionTooLarge, "estimated " + std::to_string(static_cast<long long>(est)) +
                                                  " monomials exceeds the guard");
  const int n = f.variables();
  Sparse p;
  p.emplace(std::vector<int>(static_cast<size_t>(n), 0), BigInterval(1.0, prec));
  for (const auto& st : f.steps()) {
    if (st.subtract) {
      for (int i = st.begin; i < st.begin + st.count; ++i) {
        std::vector<int> e(static_cast<size_t>(n), 0);
        e[static_cast<size_t>(i)] = 2;
        accumulate(p, e, BigInterval(-1.0, prec));
      }
    } else {
      p = multiply(p, factor_sparse(f.factors()[st.factor], n, prec));
    }
  }
  ExpandedPolynomial out;
  out.variables = n;
  for (auto& [e, c] : p) {
    if (c.lo_double() == 0.0 && c.hi_double() == 0.0) continue;
    out.monomials.push_back({e, c});
  }
  return out;
}

BigInterval ExpandedPolynomial::eval(const std::vector<BigInterval>& z) const {
  const mpfr_prec_t prec = z.empty() ? 128 : z.front().precision();
  BigInterval sum(0.0, prec);
  for (const auto& m : monomials) {
    BigInterval t = m.coefficient;
    for (size_t i = 0; i < m.exponents.size(); ++i)
      for (int k = 0; k < m.exponents[i]; ++k) t *= z[i];
    sum += t;
  }
  return sum;
}

int ExpandedPolynomial::total_degree() const {
  int d = 0;
  for (const auto& m : monomials) {
    int s = 0;
    for (int e : m.exponents) s += e;
    d = std::max(d, s);
  }
  return d;
}

// ---------------------------------------------------------------------------

namespace {

std::string factor_text(const Factor& f, int digits) {
  std::ostringstream os;
  os << f.constant.mid_decimal(digits);
  for (size_t i = 0; i < f.vars.size(); ++i) {
    os << " + " << f.weight[i].mid_decimal(digits) << "*(x" << f.vars[i] + 1;
    if (!(f.center[i].lo_double() == 0.0 && f.center[i].hi_double() == 0.0))
      os << " - " << f.center[i].mid_decimal(digits);
    os << ")^2";
  }
  return os.str();
}

}  // namespace

std::string to_text(const FactoredPolynomial& f, int digits) {
  std::string expr;
  for (const auto& st : f.steps()) {
    if (st.subtract) {
      std::string tail;
      for (int i = st.begin; i < st.begin + st.count; ++i) tail += " - x" + std::to_string(i + 1) + "^2";
      expr = "(" + (expr.empty() ? std::string("1") : expr) + tail + ")";
    } else {
      const std::string term = "(" + factor_text(f.factors()[st.factor], digits) + ")";
      expr = expr.empty() ? term : expr + "*" + term;
    }
  }
  std::string args;
  for (int i = 1; i <= f.variables(); ++i) args += (i > 1 ? "," : "") + std::string("x") + std::to_string(i);
  return "P(" + args + ") = " + (expr.empty() ? "1" : expr) + "\n";
}

ExtensionArtifact nonsingular_extension(const SynthesisResult& model) {
  ExtensionArtifact e;
  e.variables = model.polynomial.variables();
  e.degree = model.polynomial.degree();
  e.inequality = ">= 0";
  const bool circle = model.arrangement.mode == GraphMode::Circle;
  if (circle && model.arrangement.k == 0)
    e.region = "solid torus-like region {P >= 0} bounded by the torus {P = 0}";
  else
    e.region = "compact region {P >= 0} in R^" + std::to_string(e.variables) + " with boundary {P = 0}";
  e.map = circle ? "(x1,...,xn) -> (x1,x2)/|(x1,x2)| onto the unit circle"
                 : "(x1,...,xn) -> x1 onto the real line";
  return e;
}

}  // namespace reebforge
