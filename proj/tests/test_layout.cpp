#include "support.hpp"

#include "reebforge/error.hpp"
#include "reebforge/layout.hpp"
#include "reebforge/sweep.hpp"

#include <doctest.h>

#include <cmath>

using namespace rft;

namespace {

constexpr mpfr_prec_t P = 128;

ValidatedSpec valid(const GraphSpec& s) { return require_valid(s); }

// Smallest t with 2^(t+1) - 1 > required, computed in doubles.
int expected_t(int k, int top) {
  const double s = std::sin(M_PI / k), rho = (1 + s) / (1 - s), sigma = 1.25;
  const int C = k % 2 == 0 ? 2 : 3;
  const double q = std::pow(rho * sigma, 1.0 / C);
  const double req = sigma * sigma * rho * std::pow(q, top);
  int t = 1;
  while (std::ldexp(1.0, t + 1) - 1 <= req) ++t;
  return t;
}

}  // namespace

TEST_SUITE("layout") {

TEST_CASE("annulus half-width") {
  CHECK(choose_annulus_halfwidth(valid(circle({}))) == mpq_class(1, 2));
  // k = 3, one disk per sector: classes 0,1,2 so the top slot is 2.
  CHECK(required_top_slot(3, {1, 1, 1}) == 2);
  const mpq_class a = choose_annulus_halfwidth(valid(circle({2, 2, 2})));
  const double s = std::sin(M_PI / 3), rho = (1 + s) / (1 - s);
  CHECK((1 + a.get_d()) / (1 - a.get_d()) > rho * 1.25);
  CHECK(a == 1 - mpq_class(1, mpz_class(1) << expected_t(3, 2)));
  CHECK(required_top_slot(4, {0, 0, 0, 0}) == -1);
  // k = 4 alternates two classes: sector 1 stacks to slot 2, sector 4 sits at slot 1.
  CHECK(required_top_slot(4, {2, 0, 0, 1}) == 2);

  for (int t = 3; t <= 12; ++t) {
    std::vector<int> counts(static_cast<size_t>(t), 3);
    const int top = required_top_slot(t, counts);
    const mpq_class req = required_ratio(t, top);
    CHECK(req > 1);
    GraphSpec g = circle(std::vector<int>(static_cast<size_t>(t), 4));
    const mpq_class at = choose_annulus_halfwidth(valid(g));
    CHECK(at == 1 - mpq_class(1, mpz_class(1) << expected_t(t, top)));
    CHECK((1 + at) / (1 - at) > req);
  }
}

TEST_CASE("explicit half-width that is too small") {
  GraphSpec g = circle({2, 2, 2});
  g.annulus_halfwidth = mpq_class(1, 16);
  CHECK_THROWS_AS(choose_annulus_halfwidth(valid(g)), Error);
  g.annulus_halfwidth = mpq_class(255, 256);
  CHECK(choose_annulus_halfwidth(valid(g)) == mpq_class(255, 256));
}

TEST_CASE("sector chains") {
  const ChainLattice lat(4, mpq_class(1023, 1024), required_top_slot(4, {2, 2, 2, 2}));
  CHECK(place_sector_chain(lat, 1, 0).empty());
  const auto one = place_sector_chain(lat, 2, 1);
  REQUIRE(one.size() == 1);
  CircleArrangement arr;
  arr.k = 4;
  arr.a = lat.a();
  const CircleNumeric n = circle_numeric(arr, one[0], P);
  const BigInterval expect = BigInterval(one[0].d, P) * sqrt(BigInterval(mpq_class(1, 2), P));
  CHECK(!(n.r - expect).certainly_positive());
  CHECK(!(expect - n.r).certainly_positive());
  CHECK(std::fabs(n.r.mid_double() - one[0].d.get_d() * std::sqrt(0.5)) < 1e-15);
  CHECK(one[0].d - n.r.mid_double() > 1 - lat.a());
  CHECK(one[0].d + n.r.mid_double() < 1 + lat.a());

  const auto two = place_sector_chain(lat, 1, 2);
  REQUIRE(two.size() == 2);
  const double s = std::sin(M_PI / 4), rho = (1 + s) / (1 - s);
  CHECK(two[1].d.get_d() / two[0].d.get_d() > rho);
  CHECK(two[1].d.get_d() - two[0].d.get_d() > s * (two[0].d.get_d() + two[1].d.get_d()));
  CHECK(two[0].chain_index == 1);
  CHECK(two[1].chain_index == 2);
}

TEST_CASE("handle circles") {
  const auto spec = valid(handles(circle({2, 1, 2}), 5, {{{2, 1}, {1, 0}}}));
  const CircleArrangement arr = layout(spec, P);
  REQUIRE(arr.handle_count() == 1);
  for (const auto& c : arr.circles) {
    if (c.is_removed()) continue;
    CHECK(c.sector == 2);
    CHECK(c.channel == 1);
    CHECK(c.stage == 1);
    const CircleNumeric n = circle_numeric(arr, c, P);
    CHECK(c.d.get_d() - n.r.mid_double() > 1 - arr.a.get_d());
    CHECK(c.d.get_d() + n.r.mid_double() < 1 + arr.a.get_d());
  }

  const auto spec2 = valid(handles(circle({2, 2, 2}), 3, {{{1, 1}, {1}}, {{1, 2}, {2}}}));
  const CircleArrangement arr2 = layout(spec2, P);
  mpq_class removed_d;
  for (const auto& c : arr2.circles)
    if (c.sector == 1 && c.is_removed()) removed_d = c.d;
  int below = 0, above = 0;
  for (const auto& c : arr2.circles) {
    if (c.sector != 1 || c.is_removed()) continue;
    if (c.channel == 1) {
      CHECK(c.d < removed_d);
      ++below;
    }
    if (c.channel == 2) {
      CHECK(c.d > removed_d);
      ++above;
    }
  }
  CHECK(below == 1);
  CHECK(above == 2);

  const auto zeros = valid(handles(circle({2, 2, 2}), 5, {{{1, 1}, {0, 0}}}));
  const CircleArrangement az = layout(zeros, P), plain = layout(valid(circle({2, 2, 2})), P);
  CHECK(az.handle_count() == 0);
  REQUIRE(az.circles.size() == plain.circles.size());
  for (size_t i = 0; i < az.circles.size(); ++i) CHECK(az.circles[i].d == plain.circles[i].d);
  CHECK(az.a == plain.a);
}

TEST_CASE("disjointness margins") {
  const CircleArrangement arr = layout(valid(circle({2, 2, 2})), P);
  const MarginReport m = certify_disjointness(arr, P);
  CHECK(m.ok());
  CHECK(m.min_clearance > 0);
  // pairs plus inner and outer boundary per circle
  CHECK(m.entries.size() == 3 + 2 * 3);

  CircleArrangement dup = arr;
  dup.circles.push_back(dup.circles.front());
  CHECK_FALSE(margin_report(dup, P).ok());
  CHECK_THROWS_AS(certify_disjointness(dup, P), Error);
  try {
    certify_disjointness(dup, P);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MarginViolation);
  }

  const MarginReport empty = certify_disjointness(layout(valid(circle({})), P), P);
  CHECK(empty.entries.empty());
  CHECK(empty.ok());
}

TEST_CASE("every synthesized arrangement passes its margins") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 25; ++i) CHECK(margin_report(layout(valid(random_cycle(rng)), P), P).ok());
  for (const auto& [name, spec] : corpus()) {
    CAPTURE(name);
    CHECK(margin_report(layout(valid(spec), P), P).ok());
  }
}

TEST_CASE("tangency events") {
  CHECK(tangency_events(layout(valid(circle({})), P), P).empty());
  CircleArrangement one;
  one.k = 3;
  one.a = mpq_class(15, 16);
  PlacedCircle c;
  c.sector = 1;
  c.d = 1;
  one.circles.push_back(c);
  const auto ev = tangency_events(one, P);
  REQUIRE(ev.size() == 2);
  CHECK(ev[0].position == mpq_class(1, 3));
  CHECK(ev[1].position == mpq_class(2, 3));
  CHECK(ev[0].side == TangencySide::Entering);
  CHECK(ev[1].side == TangencySide::Leaving);

  const CircleArrangement arr = layout(valid(circle({2, 2, 2})), P);
  const auto six = tangency_events(arr, P);
  CHECK(six.size() == 6);
  std::map<mpq_class, int> per;
  for (const auto& e : six) ++per[e.position];
  CHECK(per.size() == 3);
  for (const auto& [p, n] : per) CHECK(n == 2);
  // The tangency point lies on the ray and on the circle.
  for (const auto& e : six) {
    const CircleNumeric n = circle_numeric(arr, arr.circles[static_cast<size_t>(e.circle)], P);
    const BigInterval dx = e.px - n.cx, dy = e.py - n.cy;
    CHECK(std::fabs((sqr(dx) + sqr(dy) - n.r2).mid_double()) < 1e-30);
    const BigInterval cross = e.px * sin_turn(e.position, P) - e.py * cos_turn(e.position, P);
    CHECK(cross.contains_zero());
  }
}

TEST_CASE("tangency angle equals the sector half-angle") {
  for (const auto& [name, spec] : corpus()) {
    if (spec.mode != GraphMode::Circle) continue;
    const CircleArrangement arr = layout(valid(spec), P);
    for (const auto& c : arr.circles) {
      const CircleNumeric n = circle_numeric(arr, c, P);
      const double beta = std::asin(n.r.mid_double() / c.d.get_d());
      CHECK(std::fabs(beta - M_PI / arr.k) < 1e-12);
    }
  }
}

TEST_CASE("rotation by one class period") {
  for (int k = 3; k <= 9; ++k) {
    const CircleArrangement arr = layout(valid(circle(std::vector<int>(static_cast<size_t>(k), 3))), P);
    std::map<int, std::vector<mpq_class>> by_sector;
    for (const auto& c : arr.circles) by_sector[c.sector].push_back(c.d);
    for (int j = 1; j <= k; ++j) {
      for (int j2 = j + 1; j2 <= k; ++j2)
        if (sector_class(k, j) == sector_class(k, j2)) CHECK(by_sector[j] == by_sector[j2]);
      if (j < k) CHECK(sector_class(k, j) != sector_class(k, j + 1));
    }
    CHECK(sector_class(k, k) != sector_class(k, 1));
  }
}

TEST_CASE("rays inside a sector cross every circle of that sector") {
  const CircleArrangement arr = layout(valid(circle({3, 1, 3, 2})), P);
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> num(1, 999);
  for (int j = 1; j <= arr.k; ++j)
    for (int trial = 0; trial < 10; ++trial) {
      const mpq_class pos = mpq_class(j, arr.k) + mpq_class(num(rng), 1000 * arr.k);
      const Slice s = slice_at(arr, pos, P);
      int in_sector = 0;
      for (const auto& c : arr.circles) in_sector += c.sector == j;
      CHECK(static_cast<int>(s.holes.size()) == in_sector);
      for (const auto& h : s.holes) CHECK(arr.circles[static_cast<size_t>(h.circle)].sector == j);
    }
}

TEST_CASE("line mode geometry") {
  const CircleArrangement arr = layout(valid(line({1, 3, 2, 1})), P);
  CHECK(arr.mode == GraphMode::Line);
  CHECK(arr.ellipse_a == 4);
  REQUIRE(arr.vertex_x.size() == 5);
  CHECK(arr.vertex_x.front() == -4);
  CHECK(arr.vertex_x.back() == 4);
  CHECK(arr.removed_count() == 3);
  for (const auto& c : arr.circles) {
    CHECK(c.radius == 1);
    CHECK(c.cx == arr.vertex_x[static_cast<size_t>(c.sector - 1)] + 1);
  }
  CHECK(margin_report(arr, P).ok());
}

}  // TEST_SUITE
