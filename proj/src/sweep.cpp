#include "reebforge/sweep.hpp"

#include "reebforge/error.hpp"
#include "reebforge/poly.hpp"
#include "reebforge/rational.hpp"

#include <mpfr.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace reebforge {

namespace {

// Delta reduced into (-1/2, 1/2].
mpq_class centred(mpq_class d) {
  mpz_class f;
  mpz_fdiv_q(f.get_mpz_t(), d.get_num_mpz_t(), d.get_den_mpz_t());
  d -= f;
  if (d > mpq_class(1, 2)) d -= 1;
  return d;
}

bool crosses(const CircleArrangement& arr, const PlacedCircle& c, const mpq_class& pos) {
  if (arr.mode == GraphMode::Line) return abs(pos - c.cx) < c.radius;
  return abs(centred(pos - arr.bisector(c.sector))) < mpq_class(1, 2 * arr.k);
}

Chord chord_of(const CircleArrangement& arr, int idx, const mpq_class& pos, mpfr_prec_t prec) {
  const PlacedCircle& c = arr.circles[static_cast<size_t>(idx)];
  if (arr.mode == GraphMode::Line) {
    const BigInterval half = sqrt(BigInterval(mpq_class(c.radius * c.radius - (pos - c.cx) * (pos - c.cx)), prec));
    const BigInterval cy(c.cy, prec);
    return {idx, cy - half, cy + half};
  }
  const mpq_class delta = centred(pos - arr.bisector(c.sector));
  const BigInterval s = sector_sine(arr.k, prec);
  const BigInterval sd = sin_turn(delta, prec), cd = cos_turn(delta, prec);
  const BigInterval root = sqrt(sqr(s) - sqr(sd));
  const BigInterval d(c.d, prec);
  return {idx, d * (cd - root), d * (cd + root)};
}

void sort_certified(std::vector<Chord>& v) {
  std::sort(v.begin(), v.end(), [](const Chord& a, const Chord& b) { return a.lo.mid_double() < b.lo.mid_double(); });
}

// Number of holes certainly below the value; -1 if the order is not certified.
int rank_below(const std::vector<Chord>& holes, const BigInterval& lo, const BigInterval& hi) {
  int below = 0;
  for (const auto& h : holes) {
    if (h.hi.certainly_less(lo)) ++below;
    else if (!hi.certainly_less(h.lo)) return -1;
  }
  return below;
}

int sector_of(const CircleArrangement& arr, const mpq_class& pos) {
  if (arr.mode == GraphMode::Line) {
    mpq_class t = (pos + arr.ellipse_a) / 2;
    mpz_class f;
    mpz_fdiv_q(f.get_mpz_t(), t.get_num_mpz_t(), t.get_den_mpz_t());
    return static_cast<int>(f.get_si()) + 1;
  }
  mpq_class t = StructuredAngle(pos).turns() * arr.k;
  mpz_class f;
  mpz_fdiv_q(f.get_mpz_t(), t.get_num_mpz_t(), t.get_den_mpz_t());
  const int j = static_cast<int>(f.get_si()) % arr.k;
  return j == 0 ? arr.k : j;
}

int stage_slots(const CircleArrangement& arr) { return handle_sequence_length(arr.dimension); }

std::vector<int> stage_counts(const CircleArrangement& arr, const Slice& s, int component) {
  std::vector<int> counts(static_cast<size_t>(stage_slots(arr)), 0);
  for (const auto& h : s.handles) {
    if (rank_below(s.holes, h.lo, h.hi) != component) continue;
    const int st = arr.circles[static_cast<size_t>(h.circle)].stage;
    if (st < 1) continue;
    if (st > static_cast<int>(counts.size())) counts.resize(static_cast<size_t>(st), 0);
    ++counts[static_cast<size_t>(st - 1)];
  }
  return counts;
}

struct EventTable {
  std::vector<SweepEvent> events;
  std::vector<mpq_class> gap_samples;  // gap g lies between events g and g+1 (cyclic in circle mode)
};

EventTable build_events(const CircleArrangement& arr, mpfr_prec_t prec) {
  std::map<mpq_class, SweepEvent> byPos;
  for (const auto& t : tangency_events(arr, prec)) {
    auto& e = byPos[t.position];
    e.position = t.position;
    (arr.circles[static_cast<size_t>(t.circle)].is_removed() ? e.tangent : e.handle_tangent).push_back(t.circle);
  }
  if (arr.mode == GraphMode::Line) {
    for (const mpq_class& x : {mpq_class(-arr.ellipse_a), mpq_class(arr.ellipse_a)}) {
      auto& e = byPos[x];
      e.position = x;
      e.fold = true;
    }
  }
  EventTable t;
  for (auto& [p, e] : byPos) {
    e.components = slice_at(arr, p, prec).components();
    t.events.push_back(std::move(e));
  }
  const size_t n = t.events.size();
  if (arr.mode == GraphMode::Circle) {
    for (size_t g = 0; g < n; ++g) {
      mpq_class a = t.events[g].position, b = t.events[(g + 1) % n].position;
      if (b <= a) b += 1;
      t.gap_samples.push_back(StructuredAngle((a + b) / 2).turns());
    }
  } else {
    for (size_t g = 0; g + 1 < n; ++g)
      t.gap_samples.push_back((t.events[g].position + t.events[g + 1].position) / 2);
  }
  return t;
}

BigInterval tangency_coordinate(const CircleArrangement& arr, int circle, mpfr_prec_t prec) {
  const PlacedCircle& c = arr.circles[static_cast<size_t>(circle)];
  if (arr.mode == GraphMode::Line) return BigInterval(c.cy, prec);
  return BigInterval(c.d, prec) * cos_turn(mpq_class(1, 2 * arr.k), prec);
}

struct UnionFind {
  std::vector<int> p;
  explicit UnionFind(size_t n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) {
    while (p[static_cast<size_t>(x)] != x) x = p[static_cast<size_t>(x)] = p[static_cast<size_t>(p[static_cast<size_t>(x)])];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) p[static_cast<size_t>(std::max(a, b))] = std::min(a, b);
  }
};

}  // namespace

Slice slice_at(const CircleArrangement& arr, const mpq_class& position, mpfr_prec_t prec) {
  Slice s;
  s.position = position;
  if (arr.mode == GraphMode::Line) {
    const mpq_class u = 1 - position * position / (arr.ellipse_a * arr.ellipse_a);
    if (u < 0) throw Error(ErrorKind::InvalidArgument, "abscissa outside the ellipse");
    s.outer = BigInterval(arr.ellipse_b, prec) * sqrt(BigInterval(u, prec));
    s.inner = -s.outer;
  } else {
    s.inner = BigInterval(mpq_class(1 - arr.a), prec);
    s.outer = BigInterval(mpq_class(1 + arr.a), prec);
  }
  for (size_t i = 0; i < arr.circles.size(); ++i) {
    const auto& c = arr.circles[i];
    if (!crosses(arr, c, position)) continue;
    (c.is_removed() ? s.holes : s.handles).push_back(chord_of(arr, static_cast<int>(i), position, prec));
  }
  sort_certified(s.holes);
  sort_certified(s.handles);
  const BigInterval* prev = &s.inner;
  for (const auto& h : s.holes) {
    if (!prev->certainly_less(h.lo))
      throw Error(ErrorKind::DegenerateEvent, "chord order not certified at " + format_rational(position));
    prev = &h.hi;
  }
  if (!s.holes.empty() && !prev->certainly_less(s.outer))
    throw Error(ErrorKind::DegenerateEvent, "chord leaves the region at " + format_rational(position));
  for (const auto& h : s.handles)
    if (rank_below(s.holes, h.lo, h.hi) < 0)
      throw Error(ErrorKind::DegenerateEvent, "handle chord overlaps a removed chord at " + format_rational(position));
  return s;
}

ReebGraphResult sweep_reeb(const CircleArrangement& arr, mpfr_prec_t prec) {
  ReebGraphResult out;
  out.mode = arr.mode;
  const EventTable t = build_events(arr, prec);
  const size_t ne = t.events.size();
  if (ne == 0) {
    out.no_vertex_circle = true;
    return out;
  }
  std::vector<Slice> gaps;
  std::vector<int> base;
  int nodes = 0;
  for (const auto& p : t.gap_samples) {
    gaps.push_back(slice_at(arr, p, prec));
    base.push_back(nodes);
    nodes += gaps.back().components();
  }
  const size_t ng = gaps.size();
  auto left_event = [&](size_t g) { return g; };
  auto right_event = [&](size_t g) { return arr.mode == GraphMode::Circle ? (g + 1) % ne : g + 1; };

  // For each event component: gap components arriving from the left / right.
  struct EventComp {
    std::vector<int> left, right;
    bool singular = false;
    int vertex = -1;
  };
  std::vector<std::vector<EventComp>> comps(ne);
  std::vector<Slice> event_slices;
  for (size_t e = 0; e < ne; ++e) {
    event_slices.push_back(slice_at(arr, t.events[e].position, prec));
    comps[e].resize(static_cast<size_t>(t.events[e].components));
    const auto& ev = t.events[e];
    if (ev.fold) comps[e][0].singular = true;
    for (int c : ev.tangent) {
      const BigInterval tc = tangency_coordinate(arr, c, prec);
      const int r = rank_below(event_slices[e].holes, tc, tc);
      if (r < 0) throw Error(ErrorKind::DegenerateEvent, "tangency point meets a chord");
      comps[e][static_cast<size_t>(r)].singular = true;
    }
    // A handle ellipsoid touching the level changes the fiber type there.
    for (int c : ev.handle_tangent) {
      const BigInterval tc = tangency_coordinate(arr, c, prec);
      const int r = rank_below(event_slices[e].holes, tc, tc);
      if (r < 0) throw Error(ErrorKind::DegenerateEvent, "handle tangency point meets a chord");
      comps[e][static_cast<size_t>(r)].singular = true;
    }
  }
  auto map_component = [&](size_t g, size_t e, int i) {
    const auto& tangent = t.events[e].tangent;
    int below = 0;
    for (int h = 0; h < i; ++h) {
      const int circle = gaps[g].holes[static_cast<size_t>(h)].circle;
      if (std::find(tangent.begin(), tangent.end(), circle) == tangent.end()) ++below;
    }
    if (below >= static_cast<int>(comps[e].size()))
      throw Error(ErrorKind::DegenerateEvent, "gap component has no event component");
    return below;
  };
  for (size_t g = 0; g < ng; ++g)
    for (int i = 0; i < gaps[g].components(); ++i) {
      comps[left_event(g)][static_cast<size_t>(map_component(g, left_event(g), i))].right.push_back(base[g] + i);
      comps[right_event(g)][static_cast<size_t>(map_component(g, right_event(g), i))].left.push_back(base[g] + i);
    }

  UnionFind uf(static_cast<size_t>(nodes));
  for (size_t e = 0; e < ne; ++e)
    for (auto& c : comps[e]) {
      if (!c.singular && c.left.size() == 1 && c.right.size() == 1) uf.unite(c.left[0], c.right[0]);
      else out.vertices.push_back({t.events[e].position, 0, 0, 0}), c.vertex = static_cast<int>(out.vertices.size()) - 1;
    }
  if (out.vertices.empty()) {
    out.no_vertex_circle = true;
    return out;
  }

  std::vector<int> start_vertex(static_cast<size_t>(nodes), -1), end_vertex(static_cast<size_t>(nodes), -1);
  std::vector<std::pair<size_t, int>> where(static_cast<size_t>(nodes));
  for (size_t g = 0; g < ng; ++g)
    for (int i = 0; i < gaps[g].components(); ++i) where[static_cast<size_t>(base[g] + i)] = {g, i};
  for (size_t e = 0; e < ne; ++e)
    for (const auto& c : comps[e]) {
      if (c.vertex < 0) continue;
      for (int n : c.right) start_vertex[static_cast<size_t>(n)] = c.vertex;
      for (int n : c.left) end_vertex[static_cast<size_t>(n)] = c.vertex;
    }
  std::map<int, int> class_to_vertex_end;
  for (int n = 0; n < nodes; ++n)
    if (end_vertex[static_cast<size_t>(n)] >= 0) class_to_vertex_end[uf.find(n)] = end_vertex[static_cast<size_t>(n)];
  const int slots = stage_slots(arr);
  for (int n = 0; n < nodes; ++n) {
    if (start_vertex[static_cast<size_t>(n)] < 0) continue;
    const auto [g, i] = where[static_cast<size_t>(n)];
    ReebEdge edge;
    edge.sector = sector_of(arr, t.gap_samples[g]);
    edge.index = i + 1;
    edge.from = start_vertex[static_cast<size_t>(n)];
    auto it = class_to_vertex_end.find(uf.find(n));
    if (it == class_to_vertex_end.end()) throw Error(ErrorKind::DegenerateEvent, "edge without an end vertex");
    edge.to = it->second;
    edge.stage_counts = stage_counts(arr, gaps[g], i);
    edge.stage_counts.resize(static_cast<size_t>(std::max<int>(slots, static_cast<int>(edge.stage_counts.size()))), 0);
    edge.fiber = fiber_word(arr.dimension, edge.stage_counts);
    ++out.vertices[static_cast<size_t>(edge.from)].right;
    ++out.vertices[static_cast<size_t>(edge.to)].left;
    out.edges.push_back(std::move(edge));
  }
  for (auto& v : out.vertices) v.degree = v.left + v.right;
  return out;
}

namespace {

BigInterval asin_interval(const BigInterval& x, mpfr_prec_t prec) {
  mpfr_t lo, hi;
  mpfr_inits2(prec, lo, hi, static_cast<mpfr_ptr>(nullptr));
  mpfr_asin(lo, x.lo(), MPFR_RNDD);
  mpfr_asin(hi, x.hi(), MPFR_RNDU);
  mpq_class ql, qh;
  mpfr_get_q(ql.get_mpq_t(), lo);
  mpfr_get_q(qh.get_mpq_t(), hi);
  mpfr_clears(lo, hi, static_cast<mpfr_ptr>(nullptr));
  return BigInterval::hull(ql, qh, prec);
}

}  // namespace

SweepCertificate verify_morse(const CircleArrangement& arr, mpfr_prec_t prec) {
  SweepCertificate cert;
  const EventTable t = build_events(arr, prec);
  cert.events = t.events;
  for (const auto& p : t.gap_samples) cert.gap_components.push_back(slice_at(arr, p, prec).components());
  std::set<mpq_class> vertex_positions;
  int first = 1, last = arr.k;
  if (arr.mode == GraphMode::Line) first = 2, last = arr.k - 1;
  for (int j = first; j <= last; ++j) vertex_positions.insert(arr.vertex_position(j));
  for (const auto& e : t.events) {
    cert.tangencies += static_cast<int>(e.tangent.size());
    cert.handle_tangencies += static_cast<int>(e.handle_tangent.size());
    if (e.fold) ++cert.folds;
    if ((!e.tangent.empty() || !e.handle_tangent.empty()) && !vertex_positions.count(e.position))
      cert.structural_angles = false;
  }
  cert.saddles = cert.tangencies;
  cert.expected_saddles = 2 * arr.removed_count();
  for (int j = first; j <= last; ++j) {
    const mpq_class p = arr.vertex_position(j);
    const bool hit = std::any_of(t.events.begin(), t.events.end(),
                                 [&](const SweepEvent& e) {
                                   return e.position == p && (!e.tangent.empty() || !e.handle_tangent.empty());
                                 });
    if (!hit) throw Error(ErrorKind::MissingSingularAngle, "no tangency at vertex " + std::to_string(j));
  }
  for (const auto& c : arr.circles) {
    if (!c.is_removed()) continue;
    const CircleNumeric n = circle_numeric(arr, c, prec);
    if (arr.mode == GraphMode::Line) {
      if (!n.r.certainly_positive()) cert.nondegenerate = false;
      continue;
    }
    const BigInterval d(c.d, prec);
    if (!n.r.certainly_less(d)) cert.nondegenerate = false;
    // Independent tangency angles phi +- asin(r/d), as fractions of a turn.
    const BigInterval half_span = asin_interval(n.r / d, prec) / (BigInterval(2.0, prec) * BigInterval::pi(prec));
    const BigInterval phi(arr.bisector(c.sector), prec);
    const BigInterval enter(mpq_class(c.sector, arr.k), prec), leave(mpq_class(c.sector + 1, arr.k), prec);
    if (!(phi - half_span - enter).contains_zero() || !(phi + half_span - leave).contains_zero())
      cert.numeric_angles = false;
  }
  return cert;
}

EulerReport euler_check(const CircleArrangement& arr, mpfr_prec_t prec) {
  if (arr.dimension != 2) throw Error(ErrorKind::InvalidArgument, "Euler check needs dimension 2");
  const SweepCertificate cert = verify_morse(arr, prec);
  EulerReport r;
  r.saddles = cert.saddles;
  r.folds = cert.folds;
  r.chi_morse = r.folds - r.saddles;
  r.chi_region = (arr.mode == GraphMode::Circle ? 0 : 1) - arr.removed_count();
  r.chi_double = 2 * r.chi_region;
  if (!r.ok())
    throw Error(ErrorKind::EulerMismatch, "Morse count " + std::to_string(r.chi_morse) + " vs region count " +
                                             std::to_string(r.chi_double));
  return r;
}

std::vector<FiberCountRow> fiber_counts_check(const CircleArrangement& arr, const ValidatedSpec& spec,
                                              mpfr_prec_t prec) {
  std::vector<FiberCountRow> rows;
  if (spec.mode() != GraphMode::Circle || spec.vertex_count() == 0) return rows;
  for (int j = 1; j <= spec.vertex_count(); ++j) {
    const Slice s = slice_at(arr, StructuredAngle(arr.bisector(j)).turns(), prec);
    const int aj = spec.multiplicities()[static_cast<size_t>(j - 1)];
    for (int ch = 1; ch <= aj; ++ch) {
      FiberCountRow row;
      row.edge = {j, ch};
      row.expected = spec.handle_sequence(j, ch);
      row.counted = stage_counts(arr, s, ch - 1);
      row.counted.resize(std::max(row.counted.size(), row.expected.size()), 0);
      row.word = fiber_word(spec.dimension(), row.counted);
      rows.push_back(std::move(row));
    }
  }
  for (const auto& r : rows)
    if (!r.ok())
      throw Error(ErrorKind::CountMismatch, "channel (" + std::to_string(r.edge.sector) + "," +
                                                std::to_string(r.edge.channel) + ") crossing counts differ");
  return rows;
}

}  // namespace reebforge
