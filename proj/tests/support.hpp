#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "kaenmaki/ifs.hpp"

namespace testing_support {

inline std::string fixture(const std::string& name) { return std::string(KAENMAKI_FIXTURES) + "/" + name; }

inline kaenmaki::IfsSpec load(const std::string& name) { return kaenmaki::load_ifs(fixture(name)); }

/// Random valid spec: 2..max_d maps, at least one of each kind, contraction
/// ratios in [0.1, 0.45], translations keeping the unit square inside itself.
inline kaenmaki::IfsSpec random_spec(std::mt19937_64& rng, int max_d = 4) {
  std::uniform_int_distribution<int> dd(2, max_d);
  std::uniform_real_distribution<double> ratio(0.1, 0.45);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int d = dd(rng);
  const int anti = std::uniform_int_distribution<int>(1, d - 1)(rng);
  std::vector<kaenmaki::AffineMap2D> maps;
  for (int i = 0; i < d; ++i) {
    kaenmaki::AffineMap2D m;
    m.kind = i < anti ? kaenmaki::MapKind::AntiDiagonal : kaenmaki::MapKind::Diagonal;
    m.a = ratio(rng);
    m.b = ratio(rng);
    m.tx = unit(rng) * (1.0 - m.a);
    m.ty = unit(rng) * (1.0 - m.b);
    maps.push_back(m);
  }
  return kaenmaki::IfsSpec::create(maps);
}

}  // namespace testing_support
