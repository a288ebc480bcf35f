#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <iterator>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "kaenmaki/error.hpp"
#include "kaenmaki/word.hpp"

namespace kaenmaki {

enum class MapKind { Diagonal, AntiDiagonal };

/// Planar affine contraction with a diagonal or anti-diagonal linear part.
///   Diagonal:     (x, y) -> (a x + tx, b y + ty)
///   AntiDiagonal: (x, y) -> (a y + tx, b x + ty)
struct AffineMap2D {
  MapKind kind = MapKind::Diagonal;
  double a = 0.5;
  double b = 0.5;
  double tx = 0.0;
  double ty = 0.0;

  bool anti() const noexcept { return kind == MapKind::AntiDiagonal; }

  std::pair<double, double> apply(double x, double y) const noexcept {
    if (anti()) return {a * y + tx, b * x + ty};
    return {a * x + tx, b * y + ty};
  }
};

struct Interval {
  double lo = 0.0;
  double hi = 1.0;

  double length() const noexcept { return hi - lo; }
  bool contains(const Interval& other, double slack = 0.0) const noexcept {
    return other.lo >= lo - slack && other.hi <= hi + slack;
  }
  bool disjoint(const Interval& other) const noexcept { return other.lo > hi || other.hi < lo; }
  /// Zero when the closed intervals meet.
  double gap(const Interval& other) const noexcept {
    return std::max(0.0, std::max(lo, other.lo) - std::min(hi, other.hi));
  }
};

struct Rect {
  Interval x;
  Interval y;

  static Rect unit() noexcept { return Rect{}; }
  double width() const noexcept { return x.length(); }
  double height() const noexcept { return y.length(); }
};

/// Exact image of an axis-aligned rectangle. The linear parts have
/// nonnegative entries, so corners map to corners.
inline Rect map_image_rect(const AffineMap2D& map, const Rect& rect) noexcept {
  if (map.anti()) {
    return Rect{{map.a * rect.y.lo + map.tx, map.a * rect.y.hi + map.tx},
                {map.b * rect.x.lo + map.ty, map.b * rect.x.hi + map.ty}};
  }
  return Rect{{map.a * rect.x.lo + map.tx, map.a * rect.x.hi + map.tx},
              {map.b * rect.y.lo + map.ty, map.b * rect.y.hi + map.ty}};
}

/// A validated system: diagonal maps first (indices 1..l-1), anti-diagonal
/// maps after (indices l..d). Indices in the public API are 1-based.
class IfsSpec {
 public:
  static constexpr double kSquareSlack = 1e-12;

  /// Validates and reorders (stable, diagonal first).
  static IfsSpec create(std::vector<AffineMap2D> maps, std::optional<double> s = std::nullopt) {
    if (maps.size() < 2) {
      bool has_anti = std::any_of(maps.begin(), maps.end(), [](const auto& m) { return m.anti(); });
      fail(has_anti ? ErrorCode::NoDiagonal : ErrorCode::NoAntiDiagonal,
           "the system needs at least one diagonal and one anti-diagonal map");
    }
    for (std::size_t k = 0; k < maps.size(); ++k) {
      const auto& m = maps[k];
      if (!(m.a > 0.0 && m.a < 1.0 && m.b > 0.0 && m.b < 1.0))
        fail(ErrorCode::NonContracting, "map " + std::to_string(k + 1) + " has a or b outside (0,1)");
      if (!std::isfinite(m.tx) || !std::isfinite(m.ty))
        fail(ErrorCode::MalformedConfig, "map " + std::to_string(k + 1) + " has a non-finite translation");
      Rect img = map_image_rect(m, Rect::unit());
      if (!Rect::unit().x.contains(img.x, kSquareSlack) || !Rect::unit().y.contains(img.y, kSquareSlack))
        fail(ErrorCode::SquareEscape, "map " + std::to_string(k + 1) + " sends the unit square outside itself");
    }
    std::stable_partition(maps.begin(), maps.end(), [](const auto& m) { return !m.anti(); });
    const auto n_diag = static_cast<int>(
        std::count_if(maps.begin(), maps.end(), [](const auto& m) { return !m.anti(); }));
    if (n_diag == 0) fail(ErrorCode::NoDiagonal, "no diagonal map");
    if (n_diag == static_cast<int>(maps.size())) fail(ErrorCode::NoAntiDiagonal, "no anti-diagonal map");
    if (s && !(*s > 0.0 && *s < 2.0)) fail(ErrorCode::SOutOfRange, "s must lie in (0,2)");

    IfsSpec spec;
    spec.maps_ = std::move(maps);
    spec.l_ = n_diag + 1;
    spec.s_ = s;
    bool self_similar = true;
    for (int i = 1; i < spec.l_; ++i)
      if (spec.a(i) != spec.b(i)) self_similar = false;
    if (self_similar)
      spec.warnings_.push_back("degenerate: every diagonal map has a == b (system is not strictly self-affine)");
    return spec;
  }

  int d() const noexcept { return static_cast<int>(maps_.size()); }
  /// First anti-diagonal index (1-based).
  int l() const noexcept { return l_; }
  const std::vector<AffineMap2D>& maps() const noexcept { return maps_; }
  const AffineMap2D& map(int i) const { return maps_.at(static_cast<std::size_t>(i - 1)); }
  double a(int i) const { return map(i).a; }
  double b(int i) const { return map(i).b; }
  bool is_anti(int i) const noexcept { return i >= l_; }
  std::optional<double> s() const noexcept { return s_; }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

  void check_word(const Word& w) const {
    if (w.empty()) fail(ErrorCode::MalformedConfig, "empty word");
    for (int c : w.symbols)
      if (c < 1 || c > d()) fail(ErrorCode::MalformedConfig, "symbol " + std::to_string(c) + " out of range");
  }

 private:
  IfsSpec() = default;

  std::vector<AffineMap2D> maps_;
  int l_ = 2;
  std::optional<double> s_;
  std::vector<std::string> warnings_;
};

inline IfsSpec parse_ifs(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::MalformedConfig, e.what());
  }
  if (!doc.is_object() || !doc.contains("maps") || !doc["maps"].is_array())
    fail(ErrorCode::MalformedConfig, "expected an object with a 'maps' array");

  std::vector<AffineMap2D> maps;
  for (const auto& entry : doc["maps"]) {
    if (!entry.is_object()) fail(ErrorCode::MalformedConfig, "map entries must be objects");
    auto number = [&](const char* key) {
      if (!entry.contains(key) || !entry[key].is_number())
        fail(ErrorCode::MalformedConfig, std::string("map field '") + key + "' missing or not a number");
      return entry[key].get<double>();
    };
    if (!entry.contains("kind") || !entry["kind"].is_string())
      fail(ErrorCode::MalformedConfig, "map field 'kind' missing");
    const auto kind = entry["kind"].get<std::string>();
    AffineMap2D m;
    if (kind == "diag") {
      m.kind = MapKind::Diagonal;
    } else if (kind == "anti") {
      m.kind = MapKind::AntiDiagonal;
    } else {
      fail(ErrorCode::MalformedConfig, "kind must be \"diag\" or \"anti\", got \"" + kind + "\"");
    }
    m.a = number("a");
    m.b = number("b");
    m.tx = number("tx");
    m.ty = number("ty");
    maps.push_back(m);
  }
  std::optional<double> s;
  if (doc.contains("s")) {
    if (!doc["s"].is_number()) fail(ErrorCode::MalformedConfig, "'s' must be a number");
    s = doc["s"].get<double>();
  }
  return IfsSpec::create(std::move(maps), s);
}

inline IfsSpec parse_ifs(const std::string& text) {
  std::istringstream in(text);
  return parse_ifs(in);
}

inline IfsSpec load_ifs(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoFailure, "cannot open " + path);
  return parse_ifs(in);
}

inline nlohmann::json to_json(const IfsSpec& spec) {
  nlohmann::json maps = nlohmann::json::array();
  for (const auto& m : spec.maps())
    maps.push_back({{"kind", m.anti() ? "anti" : "diag"}, {"a", m.a}, {"b", m.b}, {"tx", m.tx}, {"ty", m.ty}});
  nlohmann::json doc{{"maps", maps}};
  if (spec.s()) doc["s"] = *spec.s();
  return doc;
}

/// Image of the unit square under S_w = S_{w1} o ... o S_{wn}.
inline Rect word_image_rect(const IfsSpec& spec, const Word& w) {
  Rect r = Rect::unit();
  for (auto it = w.symbols.rbegin(); it != w.symbols.rend(); ++it) r = map_image_rect(spec.map(*it), r);
  return r;
}

struct SeparationReport {
  bool strong_separation = false;
  double min_gap = 0.0;
  std::optional<std::pair<int, int>> failing_pair;
};

/// Level-1 certificate: pairwise disjoint images of the unit square. The gap
/// is measured in the sup metric.
inline SeparationReport check_strong_separation(const IfsSpec& spec) {
  std::vector<Rect> rects;
  for (const auto& m : spec.maps()) rects.push_back(map_image_rect(m, Rect::unit()));
  SeparationReport rep;
  rep.min_gap = std::numeric_limits<double>::infinity();
  for (int i = 0; i < spec.d(); ++i) {
    for (int j = i + 1; j < spec.d(); ++j) {
      const double g = std::max(rects[i].x.gap(rects[j].x), rects[i].y.gap(rects[j].y));
      if (g < rep.min_gap) {
        rep.min_gap = g;
        if (g <= 0.0 && !rep.failing_pair) rep.failing_pair = std::make_pair(i + 1, j + 1);
      }
    }
  }
  rep.strong_separation = rep.min_gap > 0.0;
  return rep;
}

struct TransversalityReport {
  std::vector<double> u;
  std::vector<double> v;
  bool holds = false;
  bool norm_sufficient = false;
};

/// Conditions u_i + u_j < 1 and v_i + v_j < 1, with u, v assigned by map kind.
inline TransversalityReport check_transversality(const IfsSpec& spec) {
  double max_anti_a = 0.0;
  double max_anti_b = 0.0;
  for (int i = spec.l(); i <= spec.d(); ++i) {
    max_anti_a = std::max(max_anti_a, spec.a(i));
    max_anti_b = std::max(max_anti_b, spec.b(i));
  }
  TransversalityReport rep;
  rep.norm_sufficient = true;
  for (int i = 1; i <= spec.d(); ++i) {
    const double norm = std::max(spec.a(i), spec.b(i));
    if (spec.is_anti(i)) {
      rep.u.push_back(spec.a(i) * max_anti_b);
      rep.v.push_back(spec.b(i) * max_anti_a);
      if (!(norm < 1.0 / std::sqrt(2.0))) rep.norm_sufficient = false;
    } else {
      rep.u.push_back(spec.a(i));
      rep.v.push_back(spec.b(i));
      if (!(norm < 0.5)) rep.norm_sufficient = false;
    }
  }
  rep.holds = true;
  for (std::size_t i = 0; i < rep.u.size(); ++i)
    for (std::size_t j = i + 1; j < rep.u.size(); ++j)
      if (!(rep.u[i] + rep.u[j] < 1.0) || !(rep.v[i] + rep.v[j] < 1.0)) rep.holds = false;
  return rep;
}

}  // namespace kaenmaki
