#include "reebforge/layout.hpp"

#include "reebforge/error.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>

namespace reebforge {

namespace {

constexpr mpfr_prec_t kWorkPrec = 256;
constexpr int kDistanceBits = 48;

// Thin RAII holder for scratch mpfr values used by the (uncertified) placement
// arithmetic; every placed value is certified afterwards by margin_report.
struct Mp {
  mpfr_t v;
  Mp() { mpfr_init2(v, kWorkPrec); }
  explicit Mp(const mpq_class& q, mpfr_rnd_t rnd = MPFR_RNDN) : Mp() { mpfr_set_q(v, q.get_mpq_t(), rnd); }
  Mp(const Mp&) = delete;
  Mp& operator=(const Mp&) = delete;
  ~Mp() { mpfr_clear(v); }
  mpq_class rational() const {
    mpq_class q;
    mpfr_get_q(q.get_mpq_t(), v);
    return q;
  }
};

int class_count(int k) { return k % 2 == 0 ? 2 : 3; }

// rho = (1+s)/(1-s) rounded in direction `rnd`, s = sin(pi/k).
void chain_ratio(mpfr_t out, int k, mpfr_rnd_t rnd) {
  BigInterval s = sector_sine(k, kWorkPrec);
  Mp num, den;
  if (rnd == MPFR_RNDU) {
    mpfr_add_ui(num.v, s.hi(), 1, MPFR_RNDU);
    mpfr_ui_sub(den.v, 1, s.hi(), MPFR_RNDD);
  } else {
    mpfr_add_ui(num.v, s.lo(), 1, rnd);
    mpfr_ui_sub(den.v, 1, s.lo(), rnd);
  }
  mpfr_div(out, num.v, den.v, rnd);
}

// q^e with q = (rho*safety)^(1/C), directed rounding.
void lattice_power(mpfr_t out, int k, long e, mpfr_rnd_t rnd) {
  Mp base, safety(kSafety, rnd), expo;
  chain_ratio(base.v, k, rnd);
  mpfr_mul(base.v, base.v, safety.v, rnd);
  mpfr_set_si(expo.v, e, rnd);
  mpfr_div_si(expo.v, expo.v, class_count(k), rnd);
  mpfr_pow(out, base.v, expo.v, rnd);
}

}  // namespace

int CircleArrangement::removed_count() const {
  return static_cast<int>(std::count_if(circles.begin(), circles.end(),
                                        [](const PlacedCircle& c) { return c.is_removed(); }));
}

int CircleArrangement::handle_count() const {
  return static_cast<int>(circles.size()) - removed_count();
}

mpq_class CircleArrangement::vertex_position(int j) const {
  if (mode == GraphMode::Line) return vertex_x.at(static_cast<size_t>(j - 1));
  return StructuredAngle(mpq_class(j, k)).turns();
}

BigInterval sector_sine(int k, mpfr_prec_t prec) {
  return sin_turn(mpq_class(1, 2 * k), prec);
}

CircleNumeric circle_numeric(const CircleArrangement& arr, const PlacedCircle& c, mpfr_prec_t prec) {
  if (arr.mode == GraphMode::Line) {
    BigInterval r(c.radius, prec);
    return {BigInterval(c.cx, prec), BigInterval(c.cy, prec), r, sqr(r)};
  }
  const BigInterval d(c.d, prec);
  const mpq_class phi = arr.bisector(c.sector);
  BigInterval r = d * sector_sine(arr.k, prec);
  BigInterval r2 = sqr(r);
  return {d * cos_turn(phi, prec), d * sin_turn(phi, prec), std::move(r), std::move(r2)};
}

int sector_class(int k, int sector) {
  if (k % 2 == 0) return (sector - 1) % 2;
  return sector < k ? (sector - 1) % 2 : 2;
}

ChainLattice::ChainLattice(int k, mpq_class a, int top_slot)
    : k_(k), classes_(class_count(k)), a_(std::move(a)), top_slot_(top_slot) {
  if (k < 3) throw Error(ErrorKind::InvalidArgument, "chain lattice needs k >= 3");
  if (top_slot < 0) return;
  const mpq_class ratio = (1 + a_) / (1 - a_);
  const mpq_class need = required_ratio(k, top_slot);
  if (ratio <= need)
    throw Error(ErrorKind::Packing, "annulus half-width " + format_rational(a_) +
                                        " cannot hold lattice slots 0.." + std::to_string(top_slot));
  // All spare ratio goes to the inner side, where absolute clearances are
  // smallest: d_base (1-s) = (1-a) * safety * ratio/need. The outer boundary
  // keeps exactly the safety factor.
  Mp slack(ratio / need), base, s_one, q;
  BigInterval s = sector_sine(k, kWorkPrec);
  mpfr_ui_sub(s_one.v, 1, s.lo(), MPFR_RNDN);
  Mp inner((1 - a_) * kSafety);
  mpfr_mul(base.v, inner.v, slack.v, MPFR_RNDN);
  mpfr_div(base.v, base.v, s_one.v, MPFR_RNDN);
  for (int slot = 0; slot <= top_slot; ++slot) {
    lattice_power(q.v, k, slot, MPFR_RNDN);
    Mp d;
    mpfr_mul(d.v, base.v, q.v, MPFR_RNDN);
    slot_d_.push_back(round_dyadic(d.rational(), kDistanceBits, 0));
  }
}

int ChainLattice::sector_class(int sector) const { return reebforge::sector_class(k_, sector); }

std::vector<int> sector_circle_counts(const ValidatedSpec& spec) {
  std::vector<int> counts;
  if (spec.mode() != GraphMode::Circle) return counts;
  const auto& a = spec.multiplicities();
  for (int j = 1; j <= static_cast<int>(a.size()); ++j) {
    int n = a[static_cast<size_t>(j - 1)] - 1;
    for (int ch = 1; ch <= a[static_cast<size_t>(j - 1)]; ++ch)
      for (int x : spec.handle_sequence(j, ch)) n += x;
    counts.push_back(n);
  }
  return counts;
}

int required_top_slot(int k, const std::vector<int>& counts) {
  int top = -1;
  for (int j = 1; j <= static_cast<int>(counts.size()); ++j) {
    const int n = counts[static_cast<size_t>(j - 1)];
    if (n > 0) top = std::max(top, sector_class(k, j) + class_count(k) * (n - 1));
  }
  return top;
}

mpq_class required_ratio(int k, int top_slot) {
  if (top_slot < 0) return 0;
  // safety^2 * rho * q^top, rounded up.
  Mp rho, power, safety(kSafety * kSafety, MPFR_RNDU), out;
  chain_ratio(rho.v, k, MPFR_RNDU);
  lattice_power(power.v, k, top_slot, MPFR_RNDU);
  mpfr_mul(out.v, rho.v, power.v, MPFR_RNDU);
  mpfr_mul(out.v, out.v, safety.v, MPFR_RNDU);
  return out.rational();
}

mpq_class choose_annulus_halfwidth(const ValidatedSpec& spec) {
  if (spec.mode() != GraphMode::Circle)
    throw Error(ErrorKind::InvalidArgument, "annulus half-width is a circle-mode parameter");
  const int k = spec.vertex_count();
  const int top = k >= 3 ? required_top_slot(k, sector_circle_counts(spec)) : -1;
  if (spec.spec().annulus_halfwidth) {
    const mpq_class a = *spec.spec().annulus_halfwidth;
    if (top >= 0 && (1 + a) / (1 - a) <= required_ratio(k, top))
      throw Error(ErrorKind::Packing, "annulus_halfwidth " + format_rational(a) +
                                          " is too small for the circle chains");
    return a;
  }
  if (top < 0) return mpq_class(1, 2);
  const mpq_class need = required_ratio(k, top);
  // (1+a)/(1-a) = 2^{t+1} - 1 for a = 1 - 2^-t.
  for (int t = 1; t < 4096; ++t) {
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(t + 1));
    if (mpq_class(p - 1) > need) {
      mpz_class den;
      mpz_ui_pow_ui(den.get_mpz_t(), 2, static_cast<unsigned long>(t));
      return 1 - mpq_class(1, den);
    }
  }
  throw Error(ErrorKind::Packing, "no annulus half-width found");
}

std::vector<PlacedCircle> place_sector_chain(const ChainLattice& lattice, int sector, int count) {
  std::vector<PlacedCircle> out;
  for (int t = 0; t < count; ++t) {
    PlacedCircle c;
    c.sector = sector;
    c.role = CircleRole::RemovedDisk;
    c.chain_index = t + 1;
    c.slot = lattice.slot_for(sector, t);
    if (c.slot > lattice.top_slot())
      throw Error(ErrorKind::Packing, "sector " + std::to_string(sector) + " needs slot " +
                                          std::to_string(c.slot) + " beyond the lattice");
    c.d = lattice.distance(c.slot);
    out.push_back(std::move(c));
  }
  return out;
}

namespace {

// Radial order of one sector: handles of channel 1, removed disk 1, handles of
// channel 2, ..., handles of channel a_j. Within a channel, stages ascend.
std::vector<PlacedCircle> sector_plan(const ValidatedSpec& spec, int sector) {
  std::vector<PlacedCircle> plan;
  const int aj = spec.multiplicities()[static_cast<size_t>(sector - 1)];
  for (int ch = 1; ch <= aj; ++ch) {
    if (spec.has_handles()) {
      const auto seq = spec.handle_sequence(sector, ch);
      for (int st = 1; st <= static_cast<int>(seq.size()); ++st)
        for (int idx = 1; idx <= seq[static_cast<size_t>(st - 1)]; ++idx) {
          PlacedCircle c;
          c.sector = sector;
          c.role = CircleRole::Handle;
          c.channel = ch;
          c.stage = st;
          c.index = idx;
          plan.push_back(std::move(c));
        }
    }
    if (ch < aj) {
      PlacedCircle c;
      c.sector = sector;
      c.role = CircleRole::RemovedDisk;
      c.chain_index = ch;
      plan.push_back(std::move(c));
    }
  }
  return plan;
}

void assign_slots(const ChainLattice& lattice, std::vector<PlacedCircle>& plan) {
  for (size_t t = 0; t < plan.size(); ++t) {
    auto& c = plan[t];
    c.slot = lattice.slot_for(c.sector, static_cast<int>(t));
    if (c.slot > lattice.top_slot())
      throw Error(ErrorKind::Packing, "sector " + std::to_string(c.sector) + " needs slot " +
                                          std::to_string(c.slot) + " beyond the lattice");
    c.d = lattice.distance(c.slot);
  }
}

CircleArrangement layout_line(const ValidatedSpec& spec, mpfr_prec_t prec) {
  CircleArrangement arr;
  arr.mode = GraphMode::Line;
  arr.k = spec.vertex_count();
  arr.dimension = spec.dimension();
  arr.a = 0;
  const int k = arr.k;
  const mpq_class width = 2, radius = 1, pitch = width * kSafety;
  arr.ellipse_a = k - 1;
  for (int j = 1; j <= k; ++j) arr.vertex_x.push_back(-arr.ellipse_a + 2 * (j - 1));
  mpq_class ymax = 0;
  for (int j = 1; j <= k - 1; ++j) {
    const int n = spec.multiplicities()[static_cast<size_t>(j - 1)] - 1;
    if (n <= 0) continue;
    // Strip classes alternate between integer and half-integer pitch offsets.
    const mpq_class offset = (j % 2 == 0) ? mpq_class(0) : mpq_class(1, 2);
    // The n slots nearest to zero, ties broken towards negative y.
    std::vector<mpq_class> ys;
    for (int i = -n - 1; i <= n + 1; ++i) ys.push_back(pitch * (i + offset));
    std::sort(ys.begin(), ys.end(), [](const mpq_class& l, const mpq_class& r) {
      const int c = cmp(abs(l), abs(r));
      return c != 0 ? c < 0 : l < r;
    });
    ys.resize(static_cast<size_t>(n));
    std::sort(ys.begin(), ys.end());
    for (size_t t = 0; t < ys.size(); ++t) {
      PlacedCircle c;
      c.sector = j;
      c.role = CircleRole::RemovedDisk;
      c.chain_index = static_cast<int>(t + 1);
      c.cx = arr.vertex_x[static_cast<size_t>(j - 1)] + radius;
      c.cy = ys[t];
      c.radius = radius;
      ymax = std::max(ymax, mpq_class(abs(ys[t]) + radius));
      arr.circles.push_back(std::move(c));
    }
  }
  if (arr.circles.empty()) {
    arr.ellipse_b = 1;
  } else {
    // Corners of every circle's bounding box satisfy g >= u/2 with
    // u = 1 - ((A-2)/A)^2, B^2 = 2 ymax^2 / u.
    const mpq_class A = arr.ellipse_a;
    const mpq_class inner = (A - 2) / A;
    const mpq_class u = 1 - inner * inner;
    const mpq_class b2 = 2 * ymax * ymax / u;
    mpq_class b = 1;
    while (b * b < b2) b += mpq_class(1, 4);
    arr.ellipse_b = b;
  }
  certify_disjointness(arr, prec);
  return arr;
}

}  // namespace

std::vector<PlacedCircle> place_handle_circles(const ValidatedSpec& spec, const ChainLattice& lattice) {
  std::vector<PlacedCircle> out;
  for (int j = 1; j <= spec.vertex_count(); ++j) {
    auto plan = sector_plan(spec, j);
    assign_slots(lattice, plan);
    for (auto& c : plan)
      if (!c.is_removed()) out.push_back(std::move(c));
  }
  return out;
}

CircleArrangement layout(const ValidatedSpec& spec, mpfr_prec_t prec) {
  if (spec.mode() == GraphMode::Line) return layout_line(spec, prec);
  CircleArrangement arr;
  arr.mode = GraphMode::Circle;
  arr.k = spec.vertex_count();
  arr.dimension = spec.dimension();
  arr.a = choose_annulus_halfwidth(spec);
  if (arr.k == 0) return arr;
  const int top = required_top_slot(arr.k, sector_circle_counts(spec));
  const ChainLattice lattice(arr.k, arr.a, top);
  for (int j = 1; j <= arr.k; ++j) {
    auto plan = sector_plan(spec, j);
    assign_slots(lattice, plan);
    for (auto& c : plan) arr.circles.push_back(std::move(c));
  }
  certify_disjointness(arr, prec);
  return arr;
}

MarginReport margin_report(const CircleArrangement& arr, mpfr_prec_t prec) {
  MarginReport rep;
  const size_t n = arr.circles.size();
  std::vector<CircleNumeric> num;
  num.reserve(n);
  for (const auto& c : arr.circles) num.push_back(circle_numeric(arr, c, prec));
  const BigInterval eps(arr.epsilon, prec);

  auto push = [&](int i, int j, BigInterval clearance, const BigInterval& scale) {
    MarginEntry e;
    e.first = i;
    e.second = j;
    e.threshold = eps * scale;
    e.ok = e.threshold.certainly_less(clearance);
    e.clearance = std::move(clearance);
    rep.entries.push_back(std::move(e));
  };
  auto smaller = [&](size_t i, size_t j) -> const BigInterval& {
    if (arr.mode == GraphMode::Line) return arr.circles[i].radius <= arr.circles[j].radius ? num[i].r : num[j].r;
    return arr.circles[i].d <= arr.circles[j].d ? num[i].r : num[j].r;
  };

  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j) {
      BigInterval dist = sqrt(sqr(num[i].cx - num[j].cx) + sqr(num[i].cy - num[j].cy));
      push(static_cast<int>(i), static_cast<int>(j), dist - num[i].r - num[j].r, smaller(i, j));
    }

  if (arr.mode == GraphMode::Circle) {
    const BigInterval s = arr.k >= 3 ? sector_sine(arr.k, prec) : BigInterval(prec);
    const BigInterval inner(1 - arr.a, prec), outer(1 + arr.a, prec), one(1.0, prec);
    for (size_t i = 0; i < n; ++i) {
      const BigInterval d(arr.circles[i].d, prec);
      push(static_cast<int>(i), kInnerBoundary, d * (one - s) - inner, num[i].r);
      push(static_cast<int>(i), kOuterBoundary, outer - d * (one + s), num[i].r);
    }
  } else {
    const BigInterval A(arr.ellipse_a, prec), B(arr.ellipse_b, prec), one(1.0, prec);
    const BigInterval half_min(mpq_class(std::min(arr.ellipse_a, arr.ellipse_b) / 2), prec);
    for (size_t i = 0; i < n; ++i) {
      const auto& c = arr.circles[i];
      BigInterval gmin(prec);
      bool first = true;
      for (int sx : {-1, 1})
        for (int sy : {-1, 1}) {
          const BigInterval x(c.cx + sx * c.radius, prec), y(c.cy + sy * c.radius, prec);
          BigInterval g = one - sqr(x) / sqr(A) - sqr(y) / sqr(B);
          if (first || g.lo_double() < gmin.lo_double()) gmin = g;
          first = false;
        }
      push(static_cast<int>(i), kEllipse, gmin * half_min, num[i].r);
    }
  }

  bool first = true;
  for (size_t e = 0; e < rep.entries.size(); ++e) {
    const auto& en = rep.entries[e];
    if (!en.ok) rep.violations.push_back(e);
    const double lo = en.clearance.lo_double();
    const double rel = lo / (en.threshold.hi_double() / arr.epsilon.get_d());
    if (first || lo < rep.min_clearance) rep.min_clearance = lo;
    if (first || rel < rep.min_relative) rep.min_relative = rel;
    first = false;
  }
  return rep;
}

MarginReport certify_disjointness(const CircleArrangement& arr, mpfr_prec_t prec) {
  MarginReport rep = margin_report(arr, prec);
  if (!rep.ok()) {
    const auto& e = rep.entries[rep.violations.front()];
    auto name = [](int x) {
      if (x == kInnerBoundary) return std::string("inner boundary");
      if (x == kOuterBoundary) return std::string("outer boundary");
      if (x == kEllipse) return std::string("ellipse");
      return "circle " + std::to_string(x);
    };
    throw Error(ErrorKind::MarginViolation, name(e.first) + " vs " + name(e.second) + ": clearance " +
                                                e.clearance.mid_decimal(6) + " <= " +
                                                e.threshold.mid_decimal(6));
  }
  return rep;
}

std::vector<TangencyEvent> tangency_events(const CircleArrangement& arr, mpfr_prec_t prec) {
  std::vector<TangencyEvent> ev;
  for (size_t i = 0; i < arr.circles.size(); ++i) {
    const auto& c = arr.circles[i];
    if (arr.mode == GraphMode::Circle) {
      const BigInterval t = BigInterval(c.d, prec) * cos_turn(mpq_class(1, 2 * arr.k), prec);
      for (auto side : {TangencySide::Entering, TangencySide::Leaving}) {
        const int j = side == TangencySide::Entering ? c.sector : c.sector + 1;
        const StructuredAngle ang(mpq_class(j, arr.k));
        ev.push_back({ang.turns(), static_cast<int>(i), side, t * cos_turn(ang.turns(), prec),
                      t * sin_turn(ang.turns(), prec)});
      }
    } else {
      for (auto side : {TangencySide::Entering, TangencySide::Leaving}) {
        const mpq_class x = side == TangencySide::Entering ? mpq_class(c.cx - c.radius) : mpq_class(c.cx + c.radius);
        ev.push_back({x, static_cast<int>(i), side, BigInterval(x, prec), BigInterval(c.cy, prec)});
      }
    }
  }
  std::stable_sort(ev.begin(), ev.end(), [](const TangencyEvent& a, const TangencyEvent& b) {
    if (a.position != b.position) return a.position < b.position;
    return a.circle < b.circle;
  });
  return ev;
}

}  // namespace reebforge
