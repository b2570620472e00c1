#include "reebforge/error.hpp"
#include "reebforge/poly.hpp"
#include "reebforge/rational.hpp"
#include "reebforge/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

namespace reebforge {

namespace {

struct Disk {
  double x, y, r2;
  int stage = 0;  // handle stage, 0 for removed disks
};

struct Run {
  int lo, hi;              // inclusive cell range
  std::vector<int> label;  // handle disks crossed, per stage
  std::vector<int> crossed;  // which handle disks
};

struct Raster {
  std::vector<std::vector<Run>> slices;
  std::vector<double> position;  // turn fraction or abscissa of each slice
};

Raster rasterize(const CircleArrangement& arr, const std::vector<Disk>& disks, const std::vector<Disk>& handles,
                 int stages, int radial, int angular) {
  Raster r;
  r.slices.resize(static_cast<size_t>(angular));
  const bool circle = arr.mode == GraphMode::Circle;
  const double a = arr.a.get_d();
  const double inner = 1.0 - a, ratio = std::log((1.0 + a) / (1.0 - a));
  const double A = arr.ellipse_a.get_d(), B = arr.ellipse_b.get_d();
  std::vector<double> radius(static_cast<size_t>(radial));
  for (int i = 0; i < radial; ++i)
    radius[static_cast<size_t>(i)] = circle ? inner * std::exp((i + 0.5) / radial * ratio)
                                            : -B + (i + 0.5) * 2.0 * B / radial;
  for (int s = 0; s < angular; ++s) {
    double px = 0, py = 0, ux = 0, uy = 0;
    if (circle) {
      const double th = 2.0 * M_PI * (s + 0.5) / angular;
      ux = std::cos(th);
      uy = std::sin(th);
      r.position.push_back((s + 0.5) / angular);
    } else {
      px = -A + (s + 0.5) * 2.0 * A / angular;
      uy = 1.0;
      r.position.push_back(px);
    }
    auto& runs = r.slices[static_cast<size_t>(s)];
    int open = -1;
    std::vector<char> touched(handles.size(), 0);
    for (int i = 0; i <= radial; ++i) {
      bool in = false;
      if (i < radial) {
        const double t = radius[static_cast<size_t>(i)];
        const double x = px + t * ux, y = py + t * uy;
        in = circle || (x * x / (A * A) + y * y / (B * B) <= 1.0);
        for (const auto& d : disks) {
          if (!in) break;
          if ((x - d.x) * (x - d.x) + (y - d.y) * (y - d.y) < d.r2) in = false;
        }
      }
      if (in && open < 0) open = i;
      if (in && !handles.empty()) {
        const double t = radius[static_cast<size_t>(i)];
        const double x = px + t * ux, y = py + t * uy;
        for (size_t h = 0; h < handles.size(); ++h)
          if ((x - handles[h].x) * (x - handles[h].x) + (y - handles[h].y) * (y - handles[h].y) < handles[h].r2)
            touched[h] = 1;
      }
      if (!in && open >= 0) {
        std::vector<int> label(static_cast<size_t>(stages), 0), crossed;
        for (size_t h = 0; h < handles.size(); ++h)
          if (touched[h]) {
            ++label[static_cast<size_t>(handles[h].stage - 1)];
            crossed.push_back(static_cast<int>(h));
            touched[h] = 0;
          }
        runs.push_back({open, i - 1, std::move(label), std::move(crossed)});
        open = -1;
      }
    }
  }
  return r;
}

bool big_jump(const Raster& r, bool cyclic) {
  const size_t n = r.slices.size();
  for (size_t s = 0; s + (cyclic ? 0 : 1) < n; ++s) {
    const long a = static_cast<long>(r.slices[s].size()), b = static_cast<long>(r.slices[(s + 1) % n].size());
    if (std::labs(a - b) >= 2) return true;
  }
  return false;
}

struct Dsu {
  std::vector<int> p;
  explicit Dsu(size_t n) : p(n) { std::iota(p.begin(), p.end(), 0); }
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

int sector_label(const CircleArrangement& arr, double pos) {
  if (arr.mode == GraphMode::Line) return static_cast<int>(std::floor((pos + arr.ellipse_a.get_d()) / 2.0)) + 1;
  const int j = static_cast<int>(std::floor(pos * arr.k)) % arr.k;
  return j == 0 ? arr.k : j;
}

}  // namespace

ReebGraphResult brute_oracle_reeb(const CircleArrangement& arr, int radial_res, int angular_res) {
  if (radial_res < 64 || angular_res < 64)
    throw Error(ErrorKind::ResolutionTooCoarse, "oracle resolution must be at least 64");
  const bool cyclic = arr.mode == GraphMode::Circle;
  std::vector<Disk> disks, handles;
  int stages = 0;
  for (const auto& c : arr.circles) {
    Disk d;
    if (cyclic) {
      const double phi = 2.0 * M_PI * arr.bisector(c.sector).get_d();
      const double dist = c.d.get_d(), rad = dist * std::sin(M_PI / arr.k);
      d = {dist * std::cos(phi), dist * std::sin(phi), rad * rad};
    } else {
      d = {c.cx.get_d(), c.cy.get_d(), c.radius.get_d() * c.radius.get_d()};
    }
    if (c.is_removed()) {
      disks.push_back(d);
    } else {
      d.stage = std::max(1, c.stage);
      stages = std::max(stages, d.stage);
      handles.push_back(d);
    }
  }
  stages = std::max(stages, handle_sequence_length(arr.dimension));

  int angular = angular_res;
  Raster r = rasterize(arr, disks, handles, stages, radial_res, angular);
  for (int refine = 0; refine < 2 && big_jump(r, cyclic); ++refine) {
    angular *= 2;
    r = rasterize(arr, disks, handles, stages, radial_res, angular);
  }
  const size_t ns = r.slices.size();
  std::vector<int> base(ns + 1, 0);
  for (size_t s = 0; s < ns; ++s) {
    if (cyclic && r.slices[s].empty()) throw Error(ErrorKind::ResolutionTooCoarse, "empty angular slice");
    base[s + 1] = base[s] + static_cast<int>(r.slices[s].size());
  }
  const int nodes = base[ns];
  std::vector<std::vector<int>> right(static_cast<size_t>(nodes)), left(static_cast<size_t>(nodes));
  for (size_t s = 0; s + (cyclic ? 0 : 1) < ns; ++s) {
    const size_t t = (s + 1) % ns;
    const auto& A = r.slices[s];
    const auto& B = r.slices[t];
    for (size_t i = 0; i < A.size(); ++i)
      for (size_t j = 0; j < B.size(); ++j)
        if (A[i].lo <= B[j].hi && B[j].lo <= A[i].hi) {
          const int u = base[s] + static_cast<int>(i), v = base[t] + static_cast<int>(j);
          right[static_cast<size_t>(u)].push_back(v);
          left[static_cast<size_t>(v)].push_back(u);
        }
  }
  std::vector<const Run*> run_of(static_cast<size_t>(nodes));
  for (size_t s = 0; s < ns; ++s)
    for (size_t i = 0; i < r.slices[s].size(); ++i) run_of[static_cast<size_t>(base[s]) + i] = &r.slices[s][i];
  // A link is regular when it is one-to-one and crosses the same handle disks:
  // swapping one handle for another passes through two tangencies.
  auto regular = [&](int u, int v) {
    return right[static_cast<size_t>(u)].size() == 1 && left[static_cast<size_t>(v)].size() == 1 &&
           run_of[static_cast<size_t>(u)]->crossed == run_of[static_cast<size_t>(v)]->crossed;
  };
  // Cluster nodes: any node touching a non-regular link or missing a side.
  std::vector<char> cluster(static_cast<size_t>(nodes), 0);
  Dsu dsu(static_cast<size_t>(nodes));
  for (int u = 0; u < nodes; ++u) {
    if (right[static_cast<size_t>(u)].empty() || left[static_cast<size_t>(u)].empty()) cluster[static_cast<size_t>(u)] = 1;
    for (int v : right[static_cast<size_t>(u)])
      if (!regular(u, v)) {
        cluster[static_cast<size_t>(u)] = cluster[static_cast<size_t>(v)] = 1;
        dsu.unite(u, v);
      }
  }
  // Regular links join chain nodes to each other; a regular link between two
  // cluster nodes is an edge too short to carry a chain and merges them.
  for (int u = 0; u < nodes; ++u)
    for (int v : right[static_cast<size_t>(u)]) {
      if (!regular(u, v)) continue;
      const bool cu = cluster[static_cast<size_t>(u)], cv = cluster[static_cast<size_t>(v)];
      if (cu == cv) dsu.unite(u, v);
    }

  ReebGraphResult out;
  out.mode = arr.mode;
  auto slice_of = [&](int u) {
    return static_cast<size_t>(std::upper_bound(base.begin(), base.end(), u) - base.begin() - 1);
  };
  // Vertex positions: circular mean of slice angles (plain mean in line mode).
  std::map<int, std::pair<double, double>> acc;
  std::map<int, int> count;
  for (int u = 0; u < nodes; ++u) {
    if (!cluster[static_cast<size_t>(u)]) continue;
    const int root = dsu.find(u);
    const double p = r.position[slice_of(u)];
    auto& [sx, sy] = acc[root];
    if (cyclic) sx += std::cos(2 * M_PI * p), sy += std::sin(2 * M_PI * p);
    else sx += p;
    ++count[root];
  }
  if (acc.empty()) {
    out.no_vertex_circle = cyclic;
    return out;
  }
  std::vector<std::pair<double, int>> order;
  for (const auto& [root, s] : acc) {
    double p = cyclic ? std::atan2(s.second, s.first) / (2 * M_PI) : s.first / count[root];
    if (cyclic && p <= 0) p += 1.0;
    order.emplace_back(p, root);
  }
  std::sort(order.begin(), order.end());
  std::map<int, int> vertex_of;
  for (const auto& [p, root] : order) {
    vertex_of[root] = static_cast<int>(out.vertices.size());
    out.vertices.push_back({round_dyadic(mpq_class(p), 24, 0), 0, 0, 0});
  }
  // Each chain class attaches to clusters at both ends.
  std::map<int, std::pair<int, int>> ends;
  std::map<int, int> mid_node;
  for (int u = 0; u < nodes; ++u) {
    if (cluster[static_cast<size_t>(u)]) continue;
    const int root = dsu.find(u);
    auto& e = ends.try_emplace(root, -1, -1).first->second;
    const int lu = left[static_cast<size_t>(u)].front(), ru = right[static_cast<size_t>(u)].front();
    if (cluster[static_cast<size_t>(lu)]) e.first = vertex_of.at(dsu.find(lu));
    if (cluster[static_cast<size_t>(ru)]) e.second = vertex_of.at(dsu.find(ru));
    mid_node.try_emplace(root, u);
  }
  for (const auto& [root, e] : ends) {
    if (e.first < 0 || e.second < 0) continue;  // a closed loop without vertices
    const int u = mid_node.at(root);
    const size_t s = slice_of(u);
    ReebEdge edge;
    edge.sector = sector_label(arr, r.position[s]);
    edge.index = u - base[s] + 1;
    edge.from = e.first;
    edge.to = e.second;
    edge.stage_counts = run_of[static_cast<size_t>(u)]->label;
    edge.fiber = fiber_word(arr.dimension, edge.stage_counts);
    ++out.vertices[static_cast<size_t>(e.first)].right;
    ++out.vertices[static_cast<size_t>(e.second)].left;
    out.edges.push_back(edge);
  }
  for (auto& v : out.vertices) v.degree = v.left + v.right;
  return out;
}

}  // namespace reebforge
