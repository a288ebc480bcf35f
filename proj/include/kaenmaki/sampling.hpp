#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <tuple>
#include <fstream>
#include <ostream>
#include <string>
#include <unordered_set>
#include <vector>

#include "kaenmaki/coding.hpp"
#include "kaenmaki/error.hpp"
#include "kaenmaki/ifs.hpp"
#include "kaenmaki/parallel.hpp"
#include "kaenmaki/thermo.hpp"
#include "kaenmaki/word.hpp"

namespace kaenmaki {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

/// Counter-based random stream: every (seed, index) pair owns an
/// independent SplitMix64 sequence, so points can be drawn in any order.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t index) : state_(mix(seed ^ mix(index + 0x632be59bd9b4e019ULL))) {}

  std::uint64_t next() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  static std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

/// nu-distributed words and the points they code. Words are stored flat
/// (count x depth); branches[k] records which Gibbs measure produced word k.
struct SampleSet {
  std::vector<Point> points;
  std::vector<std::uint16_t> symbols;
  std::vector<std::uint8_t> branches;
  std::uint64_t seed = 0;
  int depth = 0;

  std::size_t size() const noexcept { return points.size(); }

  Word word(std::size_t k) const {
    const auto base = symbols.begin() + static_cast<std::ptrdiff_t>(k * static_cast<std::size_t>(depth));
    return Word(std::vector<int>(base, base + depth));
  }

  Branch branch(std::size_t k) const { return branches[k] == 0 ? Branch::One : Branch::Two; }
};

struct ProjectedPoint {
  Point point;
  /// Distance bound to the coded point of any infinite extension.
  double error_bound = 0.0;
};

/// S_w applied to the centre of the unit square.
inline ProjectedPoint project_point(const IfsSpec& spec, const Word& w) {
  spec.check_word(w);
  double x = 0.5, y = 0.5;
  for (auto it = w.symbols.rbegin(); it != w.symbols.rend(); ++it) std::tie(x, y) = spec.map(*it).apply(x, y);
  const auto sig = product_signature(w, spec);
  return {{x, y}, sig.alpha1() * std::sqrt(2.0) / 2.0};
}

namespace detail {

inline int draw(const std::vector<double>& cumulative, double u) {
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  const auto idx = static_cast<int>(it - cumulative.begin());
  return std::min(idx, static_cast<int>(cumulative.size()) - 1);
}

struct ChainTables {
  double branch_one_mass = 0.0;
  std::vector<double> start[2];             // over symbols 1..d
  std::vector<std::vector<double>> rows[2];  // over symbols 1..2d
};

inline ChainTables chain_tables(const KaenmakiMeasure& nu) {
  const int d = nu.spec().d();
  ChainTables tab;
  for (int t = 0; t < 2; ++t) {
    const auto& g = nu.m(t == 0 ? Branch::One : Branch::Two);
    double mass = 0.0;
    for (int i = 0; i < d; ++i) mass += g.stationary()[i];
    if (t == 0) tab.branch_one_mass = mass;
    double acc = 0.0;
    for (int i = 0; i < d; ++i) {
      acc += g.stationary()[i] / mass;
      tab.start[t].push_back(acc);
    }
    for (int i = 0; i < 2 * d; ++i) {
      std::vector<double> row;
      acc = 0.0;
      for (int j = 0; j < 2 * d; ++j) {
        acc += g.stochastic()(i, j);
        row.push_back(acc);
      }
      tab.rows[t].push_back(std::move(row));
    }
  }
  return tab;
}

}  // namespace detail

/// Draws count words of the given depth from nu: pick branch t with the
/// mass m_t gives to words starting in {1..d}, run the m_t chain from its
/// stationary law restricted to {1..d}, then undo tau.
inline SampleSet sample_symbolic(const KaenmakiMeasure& nu, std::size_t count, int depth, std::uint64_t seed) {
  if (depth < 1 || count < 1) fail(ErrorCode::MalformedConfig, "count and depth must be positive");
  const IfsSpec& spec = nu.spec();
  const int d = spec.d();
  const auto tab = detail::chain_tables(nu);

  SampleSet out;
  out.seed = seed;
  out.depth = depth;
  out.points.resize(count);
  out.branches.resize(count);
  out.symbols.resize(count * static_cast<std::size_t>(depth));

  constexpr std::size_t kBlock = 4096;
  const std::size_t blocks = (count + kBlock - 1) / kBlock;
  parallel_for(blocks, [&](std::size_t blk) {
    std::vector<int> word(static_cast<std::size_t>(depth));
    const std::size_t end = std::min(count, (blk + 1) * kBlock);
    for (std::size_t k = blk * kBlock; k < end; ++k) {
      CounterRng rng(seed, k);
      const int t = rng.uniform() < tab.branch_one_mass ? 0 : 1;
      int coded = detail::draw(tab.start[t], rng.uniform()) + 1;
      word[0] = coded;
      for (int p = 1; p < depth; ++p) {
        coded = detail::draw(tab.rows[t][static_cast<std::size_t>(coded - 1)], rng.uniform()) + 1;
        word[p] = coded;
      }
      double x = 0.5, y = 0.5;
      for (int p = depth - 1; p >= 0; --p) {
        const int letter = ((word[p] - 1) % d) + 1;
        out.symbols[k * static_cast<std::size_t>(depth) + static_cast<std::size_t>(p)] =
            static_cast<std::uint16_t>(letter);
        std::tie(x, y) = spec.map(letter).apply(x, y);
      }
      out.points[k] = {x, y};
      out.branches[k] = static_cast<std::uint8_t>(t);
    }
  });
  return out;
}

inline SampleSet sample_symbolic(const IfsSpec& spec, double s, std::size_t count, int depth, std::uint64_t seed) {
  return sample_symbolic(KaenmakiMeasure(spec, s), count, depth, seed);
}

/// k radii geometrically spaced in [rmin, rmax].
inline std::vector<double> geometric_radii(double rmin, double rmax, int k) {
  if (!(rmin > 0.0) || !(rmax > rmin) || k < 2) fail(ErrorCode::MalformedConfig, "radii need 0 < rmin < rmax, k >= 2");
  std::vector<double> r;
  for (int i = 0; i < k; ++i) r.push_back(rmin * std::pow(rmax / rmin, static_cast<double>(i) / (k - 1)));
  return r;
}

struct SlopeEstimate {
  double slope = 0.0;
  double std_error = 0.0;
  std::vector<double> per_center;
};

namespace detail {

struct LineFit {
  double slope = 0.0;
  double std_error = 0.0;
};

inline LineFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
  const auto n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  LineFit f;
  f.slope = sxy / sxx;
  if (xs.size() > 2) {
    double rss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double e = ys[i] - my - f.slope * (xs[i] - mx);
      rss += e * e;
    }
    f.std_error = std::sqrt(rss / (n - 2.0) / sxx);
  }
  return f;
}

/// Per-center regression of log(hit fraction) on log r. count_hits(c, r)
/// returns the number of samples within r of center c.
template <class CountHits>
SlopeEstimate local_slopes(std::size_t centers, std::size_t total, const std::vector<double>& radii,
                           CountHits&& count_hits) {
  if (radii.size() < 3) fail(ErrorCode::MalformedConfig, "need at least 3 radii");
  if (centers == 0 || total == 0) fail(ErrorCode::TooFewHits, "no samples or no centers");
  constexpr std::size_t kMinHits = 50;
  std::vector<double> log_r;
  for (double r : radii) log_r.push_back(std::log(r));

  std::vector<std::vector<std::size_t>> hits(centers, std::vector<std::size_t>(radii.size()));
  parallel_for(centers, [&](std::size_t c) {
    for (std::size_t k = 0; k < radii.size(); ++k) hits[c][k] = count_hits(c, radii[k]);
  });

  SlopeEstimate est;
  for (std::size_t c = 0; c < centers; ++c) {
    std::vector<double> log_mass;
    for (std::size_t k = 0; k < radii.size(); ++k) {
      if (hits[c][k] < kMinHits)
        fail(ErrorCode::TooFewHits, "center " + std::to_string(c) + " has " + std::to_string(hits[c][k]) +
                                        " hits at radius " + std::to_string(radii[k]));
      log_mass.push_back(std::log(static_cast<double>(hits[c][k]) / static_cast<double>(total)));
    }
    est.per_center.push_back(fit_line(log_r, log_mass).slope);
  }
  const auto k = static_cast<double>(centers);
  double mean = 0.0;
  for (double v : est.per_center) mean += v;
  mean /= k;
  double var = 0.0;
  for (double v : est.per_center) var += (v - mean) * (v - mean);
  est.slope = mean;
  est.std_error = centers > 1 ? std::sqrt(var / (k - 1.0) / k) : 0.0;
  return est;
}

}  // namespace detail

/// Slope of log nu(Q(x, r)) against log r, with Q the sup-metric square of
/// half-side r, averaged over the given centers.
inline SlopeEstimate estimate_local_dimension(const std::vector<Point>& points, const std::vector<Point>& centers,
                                              const std::vector<double>& radii) {
  std::vector<Point> sorted = points;
  std::sort(sorted.begin(), sorted.end(), [](const Point& a, const Point& b) { return a.x < b.x; });
  return detail::local_slopes(centers.size(), points.size(), radii, [&](std::size_t c, double r) {
    const Point q = centers[c];
    auto lo = std::lower_bound(sorted.begin(), sorted.end(), q.x - r, [](const Point& p, double v) { return p.x < v; });
    std::size_t n = 0;
    for (auto it = lo; it != sorted.end() && it->x <= q.x + r; ++it)
      if (std::abs(it->y - q.y) <= r) ++n;
    return n;
  });
}

inline SlopeEstimate estimate_local_dimension(const SampleSet& samples, const std::vector<Point>& centers,
                                              const std::vector<double>& radii) {
  return estimate_local_dimension(samples.points, centers, radii);
}

/// Deterministic centers: the first k sample points (they are nu-typical).
inline std::vector<Point> pick_centers(const SampleSet& samples, std::size_t k) {
  k = std::min(k, samples.size());
  return {samples.points.begin(), samples.points.begin() + static_cast<std::ptrdiff_t>(k)};
}

/// Which one-dimensional measure estimate_projected_dim looks at. X takes
/// first coordinates of branch-One samples, Y second coordinates of
/// branch-Two samples; Both pools them. All three have the dimension of the
/// first-coordinate projection of the branch-One measure, but the two
/// components pooled by Both overlap and inflate slopes at moderate scales.
enum class ProjectionAxis { X, Y, Both };

inline std::vector<double> projected_values(const SampleSet& samples, ProjectionAxis axis) {
  std::vector<double> v;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const bool one = samples.branches.empty() || samples.branches[k] == 0;
    if (one && axis != ProjectionAxis::Y) v.push_back(samples.points[k].x);
    if (!one && axis != ProjectionAxis::X) v.push_back(samples.points[k].y);
  }
  return v;
}

inline SlopeEstimate estimate_projected_dim(const std::vector<double>& values, std::size_t centers,
                                            const std::vector<double>& radii) {
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  centers = std::min(centers, values.size());
  return detail::local_slopes(centers, values.size(), radii, [&](std::size_t c, double r) {
    const double q = values[c];
    auto lo = std::lower_bound(sorted.begin(), sorted.end(), q - r);
    auto hi = std::upper_bound(sorted.begin(), sorted.end(), q + r);
    return static_cast<std::size_t>(hi - lo);
  });
}

inline SlopeEstimate estimate_projected_dim(const SampleSet& samples, ProjectionAxis axis, std::size_t centers,
                                            const std::vector<double>& radii) {
  return estimate_projected_dim(projected_values(samples, axis), centers, radii);
}

/// Slope of log(occupied boxes) against log(1/scale).
inline double box_count(const std::vector<Point>& points, const std::vector<double>& scales) {
  if (scales.size() < 3) fail(ErrorCode::MalformedConfig, "need at least 3 scales");
  std::vector<double> xs, ys;
  for (double s : scales) {
    std::unordered_set<std::uint64_t> boxes;
    boxes.reserve(points.size());
    for (const auto& p : points) {
      const auto bx = static_cast<std::uint64_t>(std::floor(p.x / s));
      const auto by = static_cast<std::uint64_t>(std::floor(p.y / s));
      boxes.insert((bx << 32) ^ by);
    }
    xs.push_back(std::log(1.0 / s));
    ys.push_back(std::log(static_cast<double>(std::max<std::size_t>(boxes.size(), 1))));
  }
  return detail::fit_line(xs, ys).slope;
}

inline double box_count(const SampleSet& samples, const std::vector<double>& scales) {
  return box_count(samples.points, scales);
}

inline std::vector<double> dyadic_scales(int from_exp, int to_exp) {
  std::vector<double> s;
  for (int k = from_exp; k <= to_exp; ++k) s.push_back(std::ldexp(1.0, -k));
  return s;
}

/// Binary PGM (P5, maxval 255). Row 0 is the top edge y = 1; intensity is
/// log(1 + hits) scaled to the busiest pixel.
inline std::string render_pgm(const std::vector<Point>& points, int px) {
  if (px < 16 || px > 8192) fail(ErrorCode::MalformedConfig, "px must lie in [16, 8192]");
  const auto n = static_cast<std::size_t>(px);
  std::vector<std::uint32_t> hits(n * n, 0);
  for (const auto& p : points) {
    const auto col = static_cast<std::size_t>(std::clamp(static_cast<int>(std::floor(p.x * px)), 0, px - 1));
    const auto row_from_bottom = static_cast<std::size_t>(std::clamp(static_cast<int>(std::floor(p.y * px)), 0, px - 1));
    ++hits[(n - 1 - row_from_bottom) * n + col];
  }
  const std::uint32_t peak = hits.empty() ? 0 : *std::max_element(hits.begin(), hits.end());
  std::string out = "P5\n" + std::to_string(px) + " " + std::to_string(px) + "\n255\n";
  const std::size_t header = out.size();
  out.resize(header + n * n);
  const double scale = peak > 0 ? 255.0 / std::log1p(static_cast<double>(peak)) : 0.0;
  for (std::size_t k = 0; k < n * n; ++k) {
    const double v = hits[k] ? std::max(1.0, std::round(std::log1p(static_cast<double>(hits[k])) * scale)) : 0.0;
    out[header + k] = static_cast<char>(static_cast<unsigned char>(std::min(255.0, v)));
  }
  return out;
}

inline void render_attractor(const SampleSet& samples, int px, const std::string& path) {
  const std::string bytes = render_pgm(samples.points, px);
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::IoFailure, "cannot open " + path);
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!f) fail(ErrorCode::IoFailure, "write failed for " + path);
}

/// CSV with header x,y,word. Words are digit strings when d <= 9 and
/// dot-separated otherwise.
inline void write_csv(const SampleSet& samples, int d, std::ostream& out) {
  out << "x,y,word\n";
  char buf[64];
  for (std::size_t k = 0; k < samples.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,", samples.points[k].x, samples.points[k].y);
    out << buf;
    for (int p = 0; p < samples.depth; ++p) {
      if (d > 9 && p) out << '.';
      out << samples.symbols[k * static_cast<std::size_t>(samples.depth) + static_cast<std::size_t>(p)];
    }
    out << '\n';
  }
}

}  // namespace kaenmaki
