// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include "support.hpp"

#include "reebforge/error.hpp"
#include "reebforge/layout.hpp"
#include "reebforge/poly.hpp"
#include "reebforge/sampling.hpp"
#include "reebforge/sweep.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <set>

using namespace rft;

namespace {

constexpr mpfr_prec_t P = 128;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failed = 0;

void report(int id, const std::string& name, const std::function<std::string(bool&)>& body) {
  bool ok = true;
  std::string detail;
  const auto t0 = Clock::now();
  try {
    detail = body(ok);
  } catch (const std::exception& e) {
    ok = false;
    detail = std::string("exception: ") + e.what();
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, " [%.2f s]", seconds_since(t0));
  std::cout << (ok ? "PASS " : "FAIL ") << id << " " << name << ": " << detail << buf << std::endl;
  if (!ok) ++failed;
}

int removed_disks(const GraphSpec& s) {
  int n = 0;
  for (int a : s.multiplicities) n += a - 1;
  return n;
}

int expected_degree(const GraphSpec& s) {
  int handles = 0;
  if (s.handles)
    for (const auto& [edge, seq] : *s.handles)
      for (int c : seq) handles += c;
  return 2 * handles + 2 * removed_disks(s) + 4;
}

std::string expected_word(int m, const std::vector<int>& seq) {
  std::string out;
  for (size_t j = 0; j < seq.size(); ++j)
    for (int c = 0; c < seq[j]; ++c) {
      if (!out.empty()) out += " # ";
      const int p = static_cast<int>(j) + 1;
      out += "S^" + std::to_string(p) + "xS^" + std::to_string(m - 1 - p);
    }
  return out.empty() ? "S^" + std::to_string(m - 1) : out;
}

std::vector<GraphSpec> random_handle_specs(int n) {
  std::mt19937_64 rng(2024);
  const int dims[] = {3, 4, 5, 7};
  std::vector<GraphSpec> out;
  for (int i = 0; i < n; ++i) out.push_back(random_handle_spec(rng, dims[i % 4]));
  return out;
}

bool same_file(const std::filesystem::path& a, const std::filesystem::path& b) {
  const std::string x = read_file(a), y = read_file(b);
  return !x.empty() && x == y;
}

}  // namespace

int main() {
  const auto start = Clock::now();
  const auto specs = corpus();

  report(1, "degree law, random cycles", [](bool& ok) {
    std::mt19937_64 rng(1);
    int bad = 0;
    const auto t0 = Clock::now();
    for (int i = 0; i < 100; ++i) {
      const GraphSpec s = random_cycle(rng, 3, 12, 5);
      if (synthesize(require_valid(s), P).polynomial.degree() != expected_degree(s)) ++bad;
    }
    const double t = seconds_since(t0);
    ok = bad == 0 && t < 5.0;
    return std::to_string(100 - bad) + "/100 exact, " + std::to_string(t) + " s (limit 5)";
  });

  report(2, "degree law, random handle specs", [](bool& ok) {
    int bad = 0;
    std::set<int> dims;
    for (const GraphSpec& s : random_handle_specs(25)) {
      dims.insert(s.dimension);
      const auto m = synthesize(require_valid(s), P);
      if (m.polynomial.degree() != expected_degree(s) || m.polynomial.variables() != s.dimension + 1) ++bad;
    }
    ok = bad == 0 && dims == std::set<int>{3, 4, 5, 7};
    return std::to_string(25 - bad) + "/25 exact over m in {3,4,5,7}";
  });

  report(3, "realization on the corpus", [&](bool& ok) {
    int good = 0;
    double worst = 0;
    for (const auto& [name, s] : specs) {
      const auto t0 = Clock::now();
      const auto m = synthesize(require_valid(s), P);
      const bool iso = reeb_isomorphic(s, sweep_reeb(m.arrangement, P));
      const double t = seconds_since(t0);
      worst = std::max(worst, t);
      if (iso && t < 1.0) ++good;
      else std::cout << "  " << name << ": iso=" << iso << " time=" << t << "\n";
    }
    ok = good == static_cast<int>(specs.size());
    return std::to_string(good) + "/" + std::to_string(specs.size()) + " specs, slowest " + std::to_string(worst) + " s";
  });

  report(4, "sweep matches the 2048x512 raster oracle", [&](bool& ok) {
    int good = 0;
    const auto t0 = Clock::now();
    for (const auto& [name, s] : specs) {
      const auto arr = layout(require_valid(s), P);
      if (reeb_isomorphic(sweep_reeb(arr, P), brute_oracle_reeb(arr, 2048, 512))) ++good;
      else std::cout << "  " << name << ": graphs differ\n";
    }
    const double t = seconds_since(t0);
    ok = good == static_cast<int>(specs.size()) && t < 30.0;
    return std::to_string(good) + "/" + std::to_string(specs.size()) + " isomorphic, " + std::to_string(t) +
           " s (limit 30)";
  });

  report(5, "region identity, 1e5 points per model", [&](bool& ok) {
    long compared = 0, mismatches = 0, undecided = 0;
    for (const auto& [name, s] : specs) {
      const auto m = synthesize(require_valid(s), P);
      const auto r = region_identity(m, 100000, 5, 1e-9);
      compared += r.compared;
      mismatches += r.mismatches;
      undecided += r.undecided;
      if (!r.ok() || r.samples != 100000) {
        ok = false;
        std::cout << "  " << name << ": " << r.mismatches << " mismatches, " << r.undecided << " undecided\n";
      }
    }
    return std::to_string(compared) + " compared outside the 1e-9 band, " + std::to_string(mismatches) +
           " mismatches, " + std::to_string(undecided) + " undecided";
  });

  report(6, "clearance margins and zero-set gradients", [&](bool& ok) {
    double min_clearance = 1e300, min_gradient = 1e300;
    for (const auto& [name, s] : specs) {
      const auto m = synthesize(require_valid(s), P);
      const MarginReport mr = margin_report(m.arrangement, P);
      if (!mr.entries.empty()) min_clearance = std::min(min_clearance, mr.min_clearance);
      const bool margins = mr.ok() && (mr.entries.empty() || mr.min_clearance > 1e-6);
      const RegularityReport g = regularity_check(m, 1000, 6);
      min_gradient = std::min(min_gradient, g.min_gradient);
      if (!margins || !g.ok() || g.samples != 1000) {
        ok = false;
        std::cout << "  " << name << ": min clearance " << mr.min_clearance << ", violations " << mr.violations.size()
                  << ", gradient zero " << g.gradient_zero << ", off zero set " << g.off_zero_set << "\n";
      }
    }
    char buf[128];
    std::snprintf(buf, sizeof buf, "min clearance %.3e (> 1e-6), min |grad| %.3e over 1000 points each",
                  min_clearance, min_gradient);
    return std::string(buf);
  });

  report(7, "saddle law and singular angles", [&](bool& ok) {
    std::vector<std::pair<std::string, GraphSpec>> all = specs;
    std::mt19937_64 rng(7);
    for (int i = 0; i < 20; ++i) all.emplace_back("random", random_cycle(rng, 3, 12, 5));
    int good = 0;
    for (const auto& [name, s] : all) {
      const auto arr = layout(require_valid(s), P);
      const SweepCertificate c = verify_morse(arr, P);
      std::set<mpq_class> tangent;
      for (const auto& e : c.events)
        if (!e.tangent.empty() || !e.handle_tangent.empty() || e.fold) tangent.insert(e.position);
      bool every_vertex = true;
      const ReebGraphResult r = sweep_reeb(arr, P);
      for (const auto& v : r.vertices) every_vertex = every_vertex && tangent.count(v.position) > 0;
      const bool law = c.tangencies == 2 * removed_disks(s) && c.saddles == c.tangencies;
      if (law && every_vertex && c.structural_angles && c.numeric_angles && c.nondegenerate) ++good;
      else std::cout << "  " << name << ": tangencies " << c.tangencies << " expected " << 2 * removed_disks(s) << "\n";
    }
    ok = good == static_cast<int>(all.size());
    return std::to_string(good) + "/" + std::to_string(all.size()) + " arrangements";
  });

  report(8, "Euler characteristic of surfaces", [&](bool& ok) {
    std::vector<GraphSpec> surfaces;
    for (const auto& [name, s] : specs)
      if (s.dimension == 2 && s.mode == GraphMode::Circle) surfaces.push_back(s);
    std::mt19937_64 rng(8);
    for (int i = 0; i < 20; ++i) surfaces.push_back(random_cycle(rng, 3, 12, 5));
    int good = 0;
    for (const GraphSpec& s : surfaces) {
      const EulerReport e = euler_check(layout(require_valid(s), P), P);
      const long want = -2L * removed_disks(s);
      if (-e.saddles == want && 2 * e.chi_region == want && e.chi_morse == want && e.chi_double == want) ++good;
    }
    const auto torus = synthesize(require_valid(circle({})), P);
    const EulerReport t = euler_check(torus.arrangement, P);
    const bool baseline = t.chi_region == 0 && t.chi_morse == 0 && t.saddles == 0 && torus.polynomial.degree() == 4;
    ok = good == static_cast<int>(surfaces.size()) && baseline;
    return std::to_string(good) + "/" + std::to_string(surfaces.size()) + " surfaces, torus chi " +
           std::to_string(t.chi_region) + " degree " + std::to_string(torus.polynomial.degree());
  });

  report(9, "fiber counts and connected-sum words", [&](bool& ok) {
    std::vector<GraphSpec> hs = random_handle_specs(25);
    for (const auto& [name, s] : specs)
      if (s.handles) hs.push_back(s);
    int rows = 0, bad = 0;
    for (const GraphSpec& s : hs) {
      const auto v = require_valid(s);
      const auto arr = layout(v, P);
      const int stages = handle_sequence_length(s.dimension);
      for (const FiberCountRow& row : fiber_counts_check(arr, v, P)) {
        ++rows;
        std::vector<int> seq(static_cast<size_t>(stages), 0);
        if (auto it = s.handles->find(row.edge); it != s.handles->end()) seq = it->second;
        if (row.counted != seq || row.word != expected_word(s.dimension, seq)) ++bad;
      }
      // the sweep and the oracle label their edges with the same words
      std::multiset<std::string> swept, rastered;
      for (const auto& e : sweep_reeb(arr, P).edges) swept.insert(e.fiber);
      for (const auto& e : brute_oracle_reeb(arr, 1024, 512).edges) rastered.insert(e.fiber);
      if (swept != rastered) ++bad;
    }
    const auto s = require_valid(handles(circle({2, 1, 2}), 5, {{{2, 1}, {1, 0}}}));
    bool example = false;
    for (const auto& row : fiber_counts_check(layout(s, P), s, P))
      if (row.edge == EdgeId{2, 1}) example = row.word == "S^1xS^3" && row.counted == std::vector<int>{1, 0};
    ok = bad == 0 && example;
    return std::to_string(rows - bad) + "/" + std::to_string(rows) + " channels over " + std::to_string(hs.size()) +
           " specs; (1,0) at m=5 gives " + (example ? "S^1xS^3" : "something else");
  });

  report(10, "deterministic synthesis", [&](bool& ok) {
    const std::filesystem::path work = std::filesystem::temp_directory_path() / "reebforge_acceptance";
    std::filesystem::remove_all(work);
    int same = 0, total = 0;
    for (const std::string name : {"c222", "h212", "l1321"}) {
      for (const char* run : {"a", "b"}) {
        const std::string cmd = std::string("\"") + REEBFORGE_CLI + "\" synthesize --format svg --spec \"" +
                                (data_dir() / "corpus" / (name + ".json")).string() + "\" --out \"" +
                                (work / name / run).string() + "\" > /dev/null";
        if (std::system(cmd.c_str()) != 0) ok = false;
      }
      for (const char* f : {"model.json", "arrangement.json", "certificate.json", "arrangement.svg"}) {
        ++total;
        if (same_file(work / name / "a" / f, work / name / "b" / f)) ++same;
      }
    }
    std::filesystem::remove_all(work);
    const double t = seconds_since(start);
    ok = ok && same == total && t < 60.0;
    return std::to_string(same) + "/" + std::to_string(total) + " artifacts byte-identical, suite " +
           std::to_string(t) + " s (limit 60)";
  });

  return failed == 0 ? 0 : 1;
}
