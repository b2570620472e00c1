#ifndef REEBFORGE_TESTS_SUPPORT_HPP
#define REEBFORGE_TESTS_SUPPORT_HPP

#include "reebforge/graph_model.hpp"
#include "reebforge/serialize.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace rft {

using namespace reebforge;

inline GraphSpec circle(std::vector<int> a, int m = 2) {
  GraphSpec s;
  s.mode = GraphMode::Circle;
  s.vertices = static_cast<int>(a.size());
  s.multiplicities = std::move(a);
  s.dimension = m;
  return s;
}

inline GraphSpec line(std::vector<int> a) {
  GraphSpec s;
  s.mode = GraphMode::Line;
  s.vertices = static_cast<int>(a.size()) + 1;
  s.multiplicities = std::move(a);
  return s;
}

inline GraphSpec handles(GraphSpec s, int m, std::map<EdgeId, std::vector<int>> h) {
  s.dimension = m;
  s.handles = std::move(h);
  return s;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::filesystem::path data_dir() { return REEBFORGE_TEST_DATA; }

/// Corpus specs by file stem, in name order.
inline std::vector<std::pair<std::string, GraphSpec>> corpus() {
  std::vector<std::pair<std::string, GraphSpec>> out;
  for (const auto& e : std::filesystem::directory_iterator(data_dir() / "corpus"))
    out.emplace_back(e.path().stem().string(), spec_from_json(parse_json(read_file(e.path()))));
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

/// Random valid circle spec without handles (rejection sampling).
inline GraphSpec random_cycle(std::mt19937_64& rng, int kmin = 3, int kmax = 12, int amax = 5) {
  std::uniform_int_distribution<int> K(kmin, kmax), A(1, amax);
  for (;;) {
    std::vector<int> a(static_cast<size_t>(K(rng)));
    for (auto& x : a) x = A(rng);
    GraphSpec s = circle(a);
    if (validate_spec(s).ok()) return s;
  }
}

/// Random valid handle spec of dimension m.
inline GraphSpec random_handle_spec(std::mt19937_64& rng, int m, int kmax = 5, int amax = 3, int cmax = 2) {
  std::uniform_int_distribution<int> K(3, kmax), A(1, amax), C(0, cmax), coin(0, 2);
  const int mp = handle_sequence_length(m);
  for (;;) {
    std::vector<int> a(static_cast<size_t>(K(rng)));
    for (auto& x : a) x = A(rng);
    std::map<EdgeId, std::vector<int>> h;
    for (int j = 1; j <= static_cast<int>(a.size()); ++j)
      for (int c = 1; c <= a[static_cast<size_t>(j - 1)]; ++c) {
        if (coin(rng) != 0) continue;
        std::vector<int> seq(static_cast<size_t>(mp));
        for (auto& x : seq) x = C(rng);
        h[{j, c}] = seq;
      }
    GraphSpec s = handles(circle(a), m, h);
    if (validate_spec(s).ok()) return s;
  }
}

}  // namespace rft

#endif
