#include "reebforge/sampling.hpp"

#include "reebforge/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace reebforge {

double halton(std::uint64_t index, int base) {
  double f = 1.0, r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * static_cast<double>(index % static_cast<std::uint64_t>(base));
    index /= static_cast<std::uint64_t>(base);
  }
  return r;
}

namespace {

constexpr int kBases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29};

std::uint64_t start_index(std::uint64_t seed) { return 1 + seed * 1000003ULL; }

size_t first_subtract(const FactoredPolynomial& f) {
  for (size_t i = 0; i < f.steps().size(); ++i)
    if (f.steps()[i].subtract) return i;
  return f.steps().size();
}

struct PlanarDisk {
  double x, y, r;
};

std::vector<PlanarDisk> disks_of(const CircleArrangement& arr, bool removed) {
  std::vector<PlanarDisk> out;
  for (const auto& c : arr.circles) {
    if (c.is_removed() != removed) continue;
    const CircleNumeric n = circle_numeric(arr, c, 128);
    out.push_back({n.cx.mid_double(), n.cy.mid_double(), n.r.mid_double()});
  }
  return out;
}

// +1 inside the region, -1 outside, 0 within the boundary band.
int geometric_sign(const CircleArrangement& arr, const std::vector<PlanarDisk>& holes, double x, double y,
                   double band) {
  bool inside = true;
  if (arr.mode == GraphMode::Circle) {
    const double rho = std::hypot(x, y), a = arr.a.get_d();
    if (std::fabs(rho - (1 - a)) < band || std::fabs(rho - (1 + a)) < band) return 0;
    inside = rho > 1 - a && rho < 1 + a;
  } else {
    const double A = arr.ellipse_a.get_d(), B = arr.ellipse_b.get_d();
    const double g = x * x / (A * A) + y * y / (B * B) - 1.0;
    const double grad = 2.0 * std::hypot(x / (A * A), y / (B * B));
    if (std::fabs(g) < band * std::max(grad, 1e-300)) return 0;
    inside = g < 0;
  }
  for (const auto& d : holes) {
    const double dist = std::hypot(x - d.x, y - d.y) - d.r;
    if (std::fabs(dist) < band) return 0;
    if (dist < 0) inside = false;
  }
  return inside ? 1 : -1;
}

// Certified sign of f after nsteps at the point; 0 when undecided.
int certified_sign(const FactoredPolynomial& f, const std::vector<double>& z, size_t nsteps, long& fallbacks) {
  std::vector<Interval> zi(z.begin(), z.end());
  const Interval v = f.eval(zi, nsteps);
  if (v.certainly_positive()) return 1;
  if (v.certainly_negative()) return -1;
  std::vector<ScaledInterval> zs(z.begin(), z.end());
  const ScaledInterval u = f.eval(zs, nsteps);
  if (u.certainly_positive()) return 1;
  if (u.certainly_negative()) return -1;
  ++fallbacks;
  std::vector<BigInterval> zb;
  for (double c : z) zb.emplace_back(c, f.precision());
  const BigInterval w = f.eval(zb, nsteps);
  if (w.certainly_positive()) return 1;
  if (w.certainly_negative()) return -1;
  return 0;
}

void planar_point(const CircleArrangement& arr, const std::vector<PlanarDisk>& holes, std::uint64_t idx,
                  long i, double& x, double& y) {
  const double u = halton(idx, 2), v = halton(idx, 3);
  if (arr.mode == GraphMode::Circle) {
    const double a = arr.a.get_d(), R = (1 + a) * 1.05;
    if (i % 2 == 0) {
      x = -R + 2 * R * u;
      y = -R + 2 * R * v;
    } else {
      // Log-polar: dense near the small inner circles of geometric chains.
      const double lo = (1 - a) * 0.9, hi = (1 + a) * 1.05;
      const double rho = lo * std::pow(hi / lo, u), th = 2 * M_PI * v;
      x = rho * std::cos(th);
      y = rho * std::sin(th);
    }
    return;
  }
  const double A = arr.ellipse_a.get_d() * 1.05, B = arr.ellipse_b.get_d() * 1.05;
  if (i % 2 == 0 || holes.empty()) {
    x = -A + 2 * A * u;
    y = -B + 2 * B * v;
  } else {
    const auto& d = holes[static_cast<size_t>(halton(idx, 5) * static_cast<double>(holes.size()))];
    const double rho = d.r * 2.0 * u, th = 2 * M_PI * v;
    x = d.x + rho * std::cos(th);
    y = d.y + rho * std::sin(th);
  }
}

}  // namespace

RegionIdentityReport region_identity(const SynthesisResult& model, long samples, std::uint64_t seed, double band) {
  RegionIdentityReport rep;
  rep.band = band;
  const auto& arr = model.arrangement;
  const auto& f = model.polynomial;
  const size_t planar_steps = first_subtract(f);
  const auto holes = disks_of(arr, true);
  const std::uint64_t start = start_index(seed);
  std::vector<double> z(static_cast<size_t>(f.variables()), 0.0);
  for (long i = 0; i < samples; ++i) {
    ++rep.samples;
    planar_point(arr, holes, start + static_cast<std::uint64_t>(i), i, z[0], z[1]);
    const int g = geometric_sign(arr, holes, z[0], z[1], band);
    if (g == 0) {
      ++rep.band_skipped;
      continue;
    }
    ++rep.compared;
    const int s = certified_sign(f, z, planar_steps, rep.fallbacks);
    if (s == 0) ++rep.undecided;
    else if (s != g) ++rep.mismatches;
  }
  return rep;
}

std::vector<RegionIdentityReport> staged_identity(const SynthesisResult& model, long samples_per_stage,
                                                  std::uint64_t seed, double band) {
  std::vector<RegionIdentityReport> out;
  const auto& f = model.polynomial;
  // Step index right after the last ellipsoid factor of each stage.
  std::map<int, size_t> stage_end;
  for (size_t s = 0; s < f.steps().size(); ++s) {
    const auto& st = f.steps()[s];
    if (!st.subtract && f.factors()[st.factor].kind == FactorKind::Ellipsoid)
      stage_end[f.factors()[st.factor].stage] = s + 1;
  }
  for (const auto& [stage, end] : stage_end) {
    RegionIdentityReport rep;
    rep.band = band;
    size_t begin = end;
    while (begin > 0 && !f.steps()[begin - 1].subtract) --begin;
    std::vector<const Factor*> ells;
    for (size_t s = begin; s < end; ++s) ells.push_back(&f.factors()[f.steps()[s].factor]);
    const int transverse = static_cast<int>(ells.front()->vars.size()) - 2;
    double ymax = 0;
    for (const Factor* e : ells) ymax = std::max(ymax, 1.5 * e->height.get_d());
    const std::uint64_t start = start_index(seed) + 7919ULL * static_cast<std::uint64_t>(stage);
    std::vector<double> z(static_cast<size_t>(f.variables()), 0.0);
    for (long i = 0; i < samples_per_stage; ++i) {
      ++rep.samples;
      const std::uint64_t idx = start + static_cast<std::uint64_t>(i);
      // Points near a random ellipsoid of the stage.
      const Factor* e = ells[static_cast<size_t>(halton(idx, 7) * static_cast<double>(ells.size()))];
      const double cx = e->center_d[0].mid(), cy = e->center_d[1].mid();
      const double r = std::sqrt(-e->constant_d.mid() / e->weight_d[0].mid());
      const double u = halton(idx, 2), v = halton(idx, 3);
      z[0] = cx + 1.5 * r * (2 * u - 1);
      z[1] = cy + 1.5 * r * (2 * v - 1);
      for (int t = 0; t < transverse; ++t) z[static_cast<size_t>(2 + t)] = ymax * (2 * halton(idx, kBases[4 + t % 6]) - 1);
      // Expected: previous value positive and outside every ellipsoid of the stage.
      std::vector<ScaledInterval> zs(z.begin(), z.end());
      const ScaledInterval prev = f.eval(zs, begin);
      if (prev.contains_zero()) {
        ++rep.band_skipped;
        continue;
      }
      bool inside = prev.certainly_positive();
      bool skip = false;
      for (const Factor* q : ells) {
        ScaledInterval val = q->constant_s;
        for (size_t k = 0; k < q->vars.size(); ++k)
          val += q->weight_s[k] * sqr(zs[static_cast<size_t>(q->vars[k])] - q->center_s[k]);
        // Normalised by r^2 so the band is comparable across ellipsoids.
        const double scaled = val.mid_double() / -q->constant_d.mid();
        if (std::fabs(scaled) < band) skip = true;
        if (scaled < 0) inside = false;
      }
      if (skip) {
        ++rep.band_skipped;
        continue;
      }
      ++rep.compared;
      const int s = certified_sign(f, z, end, rep.fallbacks);
      if (s == 0) ++rep.undecided;
      else if (s != (inside ? 1 : -1)) ++rep.mismatches;
    }
    out.push_back(rep);
  }
  return out;
}

namespace {

bool gradient_nonzero(const std::vector<BigInterval>& g, double& best) {
  best = 0.0;
  bool ok = false;
  for (const auto& c : g) {
    if (c.contains_zero()) continue;
    ok = true;
    best = std::max(best, std::min(std::fabs(c.lo_double()), std::fabs(c.hi_double())));
  }
  return ok;
}

}  // namespace

RegularityReport regularity_check(const SynthesisResult& model, int samples, std::uint64_t seed) {
  RegularityReport rep;
  const auto& arr = model.arrangement;
  const auto& f = model.polynomial;
  const mpfr_prec_t prec = f.precision();
  const int n = f.variables();
  const BigInterval zero(0.0, prec);

  std::vector<const Factor*> ellipsoids, boundaries;
  for (const auto& fac : f.factors()) (fac.kind == FactorKind::Ellipsoid ? ellipsoids : boundaries).push_back(&fac);
  const PolyStep& last = f.steps().back();
  const size_t before_last = f.steps().size() - 1;
  const auto holes = disks_of(arr, true);

  int want_boundary = samples / 2, want_interior = samples - want_boundary, want_ellipsoid = 0;
  if (!ellipsoids.empty()) {
    want_boundary = samples * 2 / 5;
    want_ellipsoid = samples * 3 / 10;
    want_interior = samples - want_boundary - want_ellipsoid;
  }
  rep.min_gradient = INFINITY;
  auto record = [&](const std::vector<BigInterval>& z) {
    ++rep.samples;
    auto [v, g] = f.eval_grad(z);
    if (!v.contains_zero()) ++rep.off_zero_set;
    double best = 0;
    if (!gradient_nonzero(g, best)) ++rep.gradient_zero;
    else rep.min_gradient = std::min(rep.min_gradient, best);
  };
  const std::uint64_t start = start_index(seed);

  // Boundary curves of the planar region, y = 0.
  for (int i = 0; i < want_boundary; ++i) {
    const std::uint64_t idx = start + static_cast<std::uint64_t>(i);
    const Factor* b = boundaries[static_cast<size_t>(i) % boundaries.size()];
    const mpq_class turn = mpq_class(static_cast<long>(halton(idx, 3) * 1048576.0), 1048576) + mpq_class(1, 2097152);
    const BigInterval c = cos_turn(turn, prec), s = sin_turn(turn, prec);
    std::vector<BigInterval> z(static_cast<size_t>(n), zero);
    if (b->kind == FactorKind::Ellipse) {
      // -B^2 x^2 - A^2 y^2 + A^2 B^2: semi-axes from the weights.
      const BigInterval A = sqrt(-b->weight[1]), B = sqrt(-b->weight[0]);
      z[0] = A * c;
      z[1] = B * s;
    } else {
      // |x - c|^2 weights +-1, radius^2 = |constant|.
      const BigInterval r = sqrt(b->kind == FactorKind::AnnulusOuter ? b->constant : -b->constant);
      z[0] = b->center[0] + r * c;
      z[1] = b->center[1] + r * s;
    }
    ++rep.boundary;
    record(z);
  }

  // Interior points lifted onto the last unit-sphere block.
  long tries = 0;
  for (int got = 0; got < want_interior && tries < 200L * want_interior + 1000; ++tries) {
    const std::uint64_t idx = start + 500009ULL + static_cast<std::uint64_t>(tries);
    double x = 0, y = 0;
    planar_point(arr, holes, idx, tries, x, y);
    std::vector<BigInterval> z(static_cast<size_t>(n), zero);
    z[0] = BigInterval(x, prec);
    z[1] = BigInterval(y, prec);
    const BigInterval prev = f.eval(z, before_last);
    if (!last.subtract || !prev.certainly_positive()) continue;
    z[static_cast<size_t>(last.begin)] = sqrt(prev);
    ++rep.interior;
    ++got;
    record(z);
  }

  // Ellipsoid surfaces: x = b + r cos(t) u, y_1 = h sin(t), other y = 0.
  for (int i = 0; i < want_ellipsoid; ++i) {
    const std::uint64_t idx = start + 900007ULL + static_cast<std::uint64_t>(i);
    const Factor* e = ellipsoids[static_cast<size_t>(i) % ellipsoids.size()];
    const BigInterval r = sqrt(-e->constant);
    const BigInterval h(e->height, prec);
    const mpq_class t = mpq_class(static_cast<long>(halton(idx, 2) * 1048576.0), 1048576) + mpq_class(1, 2097152);
    const mpq_class gamma = mpq_class(static_cast<long>(halton(idx, 3) * 1048576.0), 1048576);
    std::vector<BigInterval> z(static_cast<size_t>(n), zero);
    const BigInterval ct = cos_turn(t, prec);
    z[0] = e->center[0] + r * ct * cos_turn(gamma, prec);
    z[1] = e->center[1] + r * ct * sin_turn(gamma, prec);
    z[2] = h * sin_turn(t, prec);
    ++rep.ellipsoid;
    record(z);
  }
  if (rep.samples == 0) rep.min_gradient = 0.0;
  return rep;
}

}  // namespace reebforge
