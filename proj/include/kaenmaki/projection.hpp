#pragma once

#include <vector>

#include "kaenmaki/coding.hpp"
#include "kaenmaki/ifs.hpp"

namespace kaenmaki {

/// g(x) = r x + c on [0, 1].
struct LineMap {
  double r = 1.0;
  double c = 0.0;

  Interval image() const noexcept { return {c, c + r}; }
};

/// The 2d one-dimensional maps of the graph-directed projected system:
/// symbol i <= d uses (a_i, tx_i), symbol i > d uses (b_{i-d}, ty_{i-d}).
/// First coordinates of tau-coded cylinders and second coordinates of
/// omega-coded ones are images of [0,1] under compositions of these.
struct LineMapSystem {
  std::vector<LineMap> maps;  // maps[k] belongs to symbol k+1

  const LineMap& map(int symbol) const { return maps[static_cast<std::size_t>(symbol - 1)]; }

  /// g_{c1} o ... o g_{cn} ([0, 1]).
  Interval image(const std::vector<int>& coded) const {
    LineMap acc;
    for (int c : coded) {
      const auto& g = map(c);
      acc.c += acc.r * g.c;
      acc.r *= g.r;
    }
    return acc.image();
  }
};

inline LineMapSystem line_system(const IfsSpec& spec) {
  LineMapSystem sys;
  for (int i = 1; i <= spec.d(); ++i) sys.maps.push_back({spec.a(i), spec.map(i).tx});
  for (int i = 1; i <= spec.d(); ++i) sys.maps.push_back({spec.b(i), spec.map(i).ty});
  return sys;
}

/// For every state, the images of [0,1] under the maps it may transition to
/// are pairwise disjoint. Sufficient for the graph-directed separation the
/// projected dimension formula relies on.
inline bool check_projection_ssc(const LineMapSystem& sys, const BinaryMatrix& a) {
  for (int i = 1; i <= a.n; ++i) {
    std::vector<Interval> children;
    for (int j = 1; j <= a.n; ++j)
      if (a(i, j)) children.push_back(sys.map(j).image());
    for (std::size_t u = 0; u < children.size(); ++u)
      for (std::size_t v = u + 1; v < children.size(); ++v)
        if (!children[u].disjoint(children[v])) return false;
  }
  return true;
}

inline bool check_projection_ssc(const LineMapSystem& sys, const TransitionMatrix& a) {
  return check_projection_ssc(sys, a.binary());
}

}  // namespace kaenmaki
