#pragma once

#include <algorithm>
#include <array>
#include <cstdlib>
#include <map>
#include <set>
#include <stdexcept>
#include <vector>

namespace estc {

using MultiIndex = std::array<int, 4>;

inline MultiIndex operator+(const MultiIndex& a, const MultiIndex& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]};
}
inline MultiIndex operator-(const MultiIndex& a, const MultiIndex& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]};
}
inline MultiIndex operator-(const MultiIndex& a) { return {-a[0], -a[1], -a[2], -a[3]}; }

inline int g4d(const MultiIndex& n) {
  return std::max(std::abs(n[0]) + std::abs(n[1]) + std::abs(n[2]), std::abs(n[3]));
}

inline bool on_lattice(const MultiIndex& n) { return ((n[0] + n[1] + n[2] + n[3]) & 1) == 0; }

inline constexpr MultiIndex kOrigin{0, 0, 0, 0};

// The null shift followed by the 12 first-generation shifts.
inline const std::array<MultiIndex, 13>& s13() {
  static const std::array<MultiIndex, 13> s{{{0, 0, 0, 0},
                                             {0, 0, -1, -1},
                                             {0, -1, 0, -1},
                                             {-1, 0, 0, -1},
                                             {1, 0, 0, -1},
                                             {0, 1, 0, -1},
                                             {0, 0, 1, -1},
                                             {0, 0, -1, 1},
                                             {0, -1, 0, 1},
                                             {-1, 0, 0, 1},
                                             {1, 0, 0, 1},
                                             {0, 1, 0, 1},
                                             {0, 0, 1, 1}}};
  return s;
}

inline int shift_index(const MultiIndex& s) {
  const auto& all = s13();
  for (int h = 0; h < 13; ++h)
    if (all[h] == s) return h;
  return -1;
}

// Shell order: ascending g4d, then lexicographic.
struct ShellLess {
  bool operator()(const MultiIndex& a, const MultiIndex& b) const {
    const int ga = g4d(a), gb = g4d(b);
    if (ga != gb) return ga < gb;
    return a < b;
  }
};

struct FiniteModel {
  int g_max = 0;
  std::vector<MultiIndex> nodes;
  std::map<MultiIndex, int> ordinal;

  int size() const { return static_cast<int>(nodes.size()); }
  bool contains(const MultiIndex& n) const { return ordinal.count(n) != 0; }
  int index_of(const MultiIndex& n) const {
    auto it = ordinal.find(n);
    return it == ordinal.end() ? -1 : it->second;
  }
};

inline FiniteModel make_model(int g_max, std::vector<MultiIndex> nodes) {
  std::sort(nodes.begin(), nodes.end(), ShellLess{});
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  FiniteModel m;
  m.g_max = g_max;
  m.nodes = std::move(nodes);
  for (int i = 0; i < m.size(); ++i) m.ordinal.emplace(m.nodes[i], i);
  return m;
}

// Nodes with g4d <= g_max reachable from the origin by +-active shifts.
inline FiniteModel build_model(int g_max, const std::vector<MultiIndex>& active_shifts) {
  if (g_max < 1) throw std::invalid_argument("build_model: g_max must be >= 1");
  std::vector<MultiIndex> steps;
  for (const auto& s : active_shifts) {
    if (shift_index(s) < 0) throw std::invalid_argument("build_model: shift outside S13");
    if (s == kOrigin) continue;
    steps.push_back(s);
    steps.push_back(-s);
  }
  std::set<MultiIndex> seen{kOrigin};
  std::vector<MultiIndex> frontier{kOrigin};
  while (!frontier.empty()) {
    std::vector<MultiIndex> next;
    for (const auto& n : frontier)
      for (const auto& s : steps) {
        const MultiIndex m = n + s;
        if (g4d(m) <= g_max && seen.insert(m).second) next.push_back(m);
      }
    frontier.swap(next);
  }
  return make_model(g_max, {seen.begin(), seen.end()});
}

// Candidates for nonzero N(m,n): model nodes within g4d distance 2.
inline std::vector<MultiIndex> coupling_neighbors(const MultiIndex& n, const FiniteModel& model) {
  if (!model.contains(n)) throw std::invalid_argument("coupling_neighbors: node outside model");
  std::vector<MultiIndex> out;
  for (const auto& m : model.nodes)
    if (m != n && g4d(n - m) <= 2) out.push_back(m);
  return out;
}

}  // namespace estc
