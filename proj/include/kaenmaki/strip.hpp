#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "kaenmaki/coding.hpp"
#include "kaenmaki/error.hpp"
#include "kaenmaki/ifs.hpp"
#include "kaenmaki/projection.hpp"
#include "kaenmaki/sampling.hpp"
#include "kaenmaki/thermo.hpp"

namespace kaenmaki {

/// Affine map S_w for a word w: even parity (x,y) -> (p x + tx, q y + ty),
/// odd parity (x,y) -> (p y + tx, q x + ty).
struct AffineComposite {
  bool odd = false;
  double p = 1.0;
  double q = 1.0;
  double tx = 0.0;
  double ty = 0.0;

  std::pair<double, double> apply(double x, double y) const noexcept {
    if (odd) return {p * y + tx, q * x + ty};
    return {p * x + tx, q * y + ty};
  }

  /// this o m
  AffineComposite then(const AffineMap2D& m) const noexcept {
    AffineComposite out = *this;
    std::tie(out.tx, out.ty) = apply(m.tx, m.ty);
    out.p *= odd ? m.b : m.a;
    out.q *= odd ? m.a : m.b;
    if (m.anti()) out.odd = !odd;
    return out;
  }

  Rect image() const noexcept { return {{tx, tx + p}, {ty, ty + q}}; }
};

enum class StripAxis { Horizontal, Vertical };
enum class Coordinate { Pi1, Pi2 };

/// The primary strip of the cylinder of `prefix` around `center` (a
/// coordinate along the primary axis): the points of the cylinder whose
/// primary coordinate is within r/2 of center.
struct StripQuery {
  Word prefix;
  double center = 0.0;
  double r = 0.0;
  StripAxis primary_axis = StripAxis::Vertical;
  Coordinate secondary_projection = Coordinate::Pi2;
};

/// Primary axis follows the longer side of the cylinder (vertical on ties);
/// the secondary projection equals the primary one when S_prefix preserves
/// the axes and is the other coordinate otherwise.
inline StripQuery make_strip_query(const IfsSpec& spec, const Word& prefix, Point x, double r) {
  spec.check_word(prefix);
  const auto sig = product_signature(prefix, spec);
  if (!(r > 0.0) || r > sig.alpha1() * (1.0 + 1e-12))
    fail(ErrorCode::MalformedConfig, "strip width must lie in (0, alpha1(prefix)]");
  StripQuery q;
  q.prefix = prefix;
  q.r = r;
  q.primary_axis = sig.log_p > sig.log_q ? StripAxis::Horizontal : StripAxis::Vertical;
  q.center = q.primary_axis == StripAxis::Horizontal ? x.x : x.y;
  const bool primary_is_x = q.primary_axis == StripAxis::Horizontal;
  const bool secondary_is_x = sig.antidiagonal_parity ? !primary_is_x : primary_is_x;
  q.secondary_projection = secondary_is_x ? Coordinate::Pi1 : Coordinate::Pi2;
  return q;
}

struct StripResult {
  /// Bracket for nu(strip): decided cells only / plus cells still straddling
  /// the strip edge at the extension cap.
  double mu_lower = 0.0;
  double mu_upper = 0.0;
  /// Same bracket for the projected measure of the blown-up interval.
  double proj_lower = 0.0;
  double proj_upper = 0.0;
  double nu_prefix = 0.0;
  double constant = 0.0;  // submultiplicativity constant C
  double bound = 0.0;     // C nu([prefix]) proj_upper
  bool holds = false;     // mu_upper <= bound (1 + 1e-9)
  bool undecided = false; // undecided mass exceeds decided mass

  /// Reverse inequality for m_t o tau, evaluated only at prefixes with an
  /// even number of anti-diagonal letters.
  bool reverse_evaluated = false;
  std::array<double, 2> reverse_lhs{};
  std::array<double, 2> reverse_bound{};
  bool reverse_holds = true;
};

namespace detail {

struct StripWalker {
  const KaenmakiMeasure& nu;
  int cap;
  Interval window;  // strip, in the primary coordinate
  bool horizontal;
  double slack;
  StripResult& out;
  std::array<double, 2> mt_decided{};

  void visit(const AffineComposite& comp, const WordState& st, int depth) {
    const Rect rect = comp.image();
    const Interval iv = horizontal ? rect.x : rect.y;
    const double mass = std::exp(KaenmakiMeasure::log_nu(st));
    if (window.contains(iv, slack)) {
      out.mu_lower += mass;
      out.mu_upper += mass;
      for (int t = 0; t < 2; ++t) mt_decided[t] += std::exp(st.log_m[t]);
      return;
    }
    if (iv.lo > window.hi + slack || iv.hi < window.lo - slack) return;
    if (depth == cap) {
      out.mu_upper += mass;
      return;
    }
    for (int c = 1; c <= nu.spec().d(); ++c) visit(comp.then(nu.spec().map(c)), nu.extend(st, c), depth + 1);
  }
};

struct LineWalker {
  const KaenmakiMeasure& nu;
  const LineMapSystem& sys;
  int cap;
  Interval window;
  bool omega;  // Pi2 cells are omega-coded
  double slack;
  std::array<double, 2> root_mass{};
  double lower = 0.0;
  double upper = 0.0;
  std::array<double, 2> mt_decided{};

  void visit(const LineMap& g, const WordState& st, int depth) {
    const Interval iv = g.image();
    const bool root = depth == 0;
    const double mass = root ? 1.0 : std::exp(KaenmakiMeasure::log_nu(st));
    if (window.contains(iv, slack)) {
      lower += mass;
      upper += mass;
      for (int t = 0; t < 2; ++t) mt_decided[t] += root ? root_mass[t] : std::exp(st.log_m[t]);
      return;
    }
    if (iv.lo > window.hi + slack || iv.hi < window.lo - slack) return;
    if (depth == cap) {
      upper += mass;
      return;
    }
    const int d = nu.spec().d();
    for (int c = 1; c <= d; ++c) {
      const int coded = (st.odd != omega) ? c + d : c;
      const auto& step = sys.map(coded);
      const LineMap next{g.r * step.r, g.c + g.r * step.c};
      visit(next, nu.extend(st, c), depth + 1);
    }
  }
};

}  // namespace detail

/// Brute-force check of the strip upper bound
///   nu(strip) <= C nu([prefix]) * (projected nu-measure of the blown-up
///   interval),
/// both sides bracketed by enumerating extensions up to extension_cap.
inline StripResult strip_measure_oracle(const KaenmakiMeasure& nu, const StripQuery& q, int extension_cap) {
  const IfsSpec& spec = nu.spec();
  check_enumeration(spec.d(), extension_cap);
  if (!check_strong_separation(spec).strong_separation)
    fail(ErrorCode::NoCertificate, "strip oracle needs a certified strong separation");
  spec.check_word(q.prefix);

  AffineComposite prefix_map;
  for (int c : q.prefix.symbols) prefix_map = prefix_map.then(spec.map(c));
  const WordState prefix_state = nu.walk(q.prefix);
  const auto sig = prefix_state.sig;
  const bool horizontal = q.primary_axis == StripAxis::Horizontal;
  const Interval cell = horizontal ? prefix_map.image().x : prefix_map.image().y;
  const Interval window{q.center - q.r / 2.0, q.center + q.r / 2.0};
  constexpr double kSlack = 1e-13;

  StripResult out;
  out.nu_prefix = std::exp(KaenmakiMeasure::log_nu(prefix_state));
  out.constant = nu.submultiplicative_constant();

  detail::StripWalker strip{nu, extension_cap, window, horizontal, kSlack, out, {}};
  strip.visit(prefix_map, prefix_state, 0);

  // The strip pulled back by S_prefix, in the secondary coordinate.
  const double scale = sig.alpha1();
  const Interval pulled{(window.lo - cell.lo) / scale, (window.hi - cell.lo) / scale};
  const auto sys = line_system(spec);
  detail::LineWalker line{nu, sys, extension_cap, pulled, q.secondary_projection == Coordinate::Pi2,
                          kSlack / scale, {}, 0.0, 0.0, {}};
  for (int t = 0; t < 2; ++t) {
    const auto& pi = nu.m(t == 0 ? Branch::One : Branch::Two).stationary();
    for (int i = 0; i < spec.d(); ++i) line.root_mass[t] += pi[i];
  }
  line.visit(LineMap{}, WordState{}, 0);
  out.proj_lower = line.lower;
  out.proj_upper = line.upper;

  out.bound = out.constant * out.nu_prefix * out.proj_upper;
  out.holds = out.mu_upper <= out.bound * (1.0 + 1e-9);
  out.undecided = out.mu_upper - out.mu_lower > out.mu_lower;

  if (!sig.antidiagonal_parity) {
    out.reverse_evaluated = true;
    for (int t = 0; t < 2; ++t) {
      const auto& g = nu.m(t == 0 ? Branch::One : Branch::Two);
      // m_t([a b]) >= c_t m_t([a]) m_t([b]) whenever a ends in an even state.
      double c = std::numeric_limits<double>::infinity();
      for (int i = 1; i <= 2 * spec.d(); ++i)
        for (int j = 1; j <= spec.d(); ++j)
          if (g.transitions()(i, j)) c = std::min(c, g.stochastic()(i - 1, j - 1) / g.stationary()[j - 1]);
      out.reverse_lhs[t] = strip.mt_decided[t];
      out.reverse_bound[t] = c * std::exp(prefix_state.log_m[t]) * line.mt_decided[t];
      if (!(out.reverse_lhs[t] >= out.reverse_bound[t] * (1.0 - 1e-9))) out.reverse_holds = false;
    }
  }
  return out;
}

inline StripResult strip_measure_oracle(const IfsSpec& spec, double s, const StripQuery& q, int extension_cap) {
  return strip_measure_oracle(KaenmakiMeasure(spec, s), q, extension_cap);
}

}  // namespace kaenmaki
