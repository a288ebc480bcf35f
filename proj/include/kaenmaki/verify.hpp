#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "kaenmaki/sampling.hpp"
#include "kaenmaki/strip.hpp"
#include "kaenmaki/thermo.hpp"

namespace kaenmaki {

struct CheckResult {
  std::string name;
  bool passed = false;
  bool skipped = false;
  std::string detail;
};

struct VerifyOptions {
  int max_depth = 8;
  /// Negative control: perturb the first branch-One weight used by the
  /// Birkhoff route of the phi^s identity.
  bool corrupt_potential = false;
};

namespace detail {

inline std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

/// Calls visit(letters) for every word of length 1..max_len.
template <class Visit>
void for_each_word(int d, int max_len, Visit&& visit) {
  for (int n = 1; n <= max_len; ++n) {
    std::vector<int> letters(static_cast<std::size_t>(n), 1);
    while (true) {
      visit(letters);
      int p = n - 1;
      while (p >= 0 && letters[p] == d) letters[p--] = 1;
      if (p < 0) break;
      ++letters[p];
    }
  }
}

inline CheckResult check_phi_identity(const IfsSpec& spec, double s, const VerifyOptions& opt) {
  auto f1 = potential(spec, s, Branch::One);
  if (opt.corrupt_potential) f1.weights[0] += 1e-3;
  const PhiChecker phi(spec, s, f1, potential(spec, s, Branch::Two));
  double worst = 0.0;
  for_each_word(spec.d(), opt.max_depth,
                [&](const std::vector<int>& w) { worst = std::max(worst, phi.discrepancy(Word{w})); });
  return {"phi identity", worst <= PhiChecker::kTolerance, false, fmt("max |log discrepancy| = %.3g", worst)};
}

inline CheckResult check_envelope(const KaenmakiMeasure& nu, int max_depth) {
  const double lo = nu.envelope_lower(), hi = nu.envelope_upper();
  double min_r = std::numeric_limits<double>::infinity(), max_r = 0.0;
  for (int n = 1; n <= max_depth; ++n) {
    const auto ch = chunking(nu.spec().d(), n);
    std::vector<double> mins(ch.chunks, min_r), maxs(ch.chunks, 0.0);
    enumerate_words(nu, n, ch, [&](std::size_t chunk, const WordState& st, const std::vector<int>&) {
      const double r = std::exp(KaenmakiMeasure::log_nu(st) - nu.log_phi(st) + n * nu.log_pressure());
      mins[chunk] = std::min(mins[chunk], r);
      maxs[chunk] = std::max(maxs[chunk], r);
    });
    for (std::size_t c = 0; c < ch.chunks; ++c) {
      min_r = std::min(min_r, mins[c]);
      max_r = std::max(max_r, maxs[c]);
    }
  }
  const bool ok = min_r >= lo * (1.0 - 1e-9) && max_r <= hi * (1.0 + 1e-9);
  return {"Gibbs envelope", ok, false,
          fmt("ratios in [%.6g, %.6g], envelope [%.6g, ", min_r, max_r, lo) + fmt("%.6g]", hi)};
}

inline CheckResult check_exponent_order(const KaenmakiMeasure& nu) {
  const auto ly = lyapunov_exponents(nu);
  return {"exponent order", ly.chi1 <= ly.chi2 * (1.0 + 1e-12), false,
          fmt("chi1 = %.12g, chi2 = %.12g", ly.chi1, ly.chi2)};
}

inline CheckResult check_submultiplicative(const KaenmakiMeasure& nu, int max_depth) {
  const auto res = submultiplicativity_check(nu, std::max(2, max_depth));
  const double c = nu.submultiplicative_constant();
  return {"submultiplicativity", res.worst_upper <= c * (1.0 + 1e-9), false,
          fmt("worst ratio %.6g (lowest %.6g), constant %.6g", res.worst_upper, res.worst_lower, c)};
}

inline CheckResult check_quasi_bernoulli_decay(const KaenmakiMeasure& nu, int max_depth) {
  const IfsSpec& spec = nu.spec();
  int i = 0;
  for (int k = 1; k < spec.l(); ++k)
    if (spec.a(k) != spec.b(k)) {
      i = k;
      break;
    }
  if (i == 0) return {"quasi-Bernoulli decay", true, true, "every diagonal map is conformal"};
  const int j = spec.l();
  const int top = std::min(max_depth, 10);
  double prev = std::numeric_limits<double>::infinity();
  bool ok = true;
  for (int n = 1; n <= top; ++n) {
    const double r = quasi_bernoulli_ratio(spec, nu.s(), i, j, n);
    if (!(r < prev)) ok = false;
    prev = r;
  }
  return {"quasi-Bernoulli decay", ok, false,
          fmt("maps (%g, %g): ratio at n = %g is ", i, j, top) + fmt("%.6g", prev)};
}

inline CheckResult check_strips(const KaenmakiMeasure& nu, int cap) {
  const IfsSpec& spec = nu.spec();
  if (!check_strong_separation(spec).strong_separation)
    return {"strip measure", true, true, "strong separation not certified"};
  const int d = spec.d();
  int queries = 0, failures = 0, reverse_failures = 0;
  double worst = 0.0;
  for (int len = 1; len <= 3; ++len) {
    for (int first = 1; first <= d; ++first) {
      Word prefix(std::vector<int>(static_cast<std::size_t>(len), first));
      prefix.symbols.back() = d - first + 1;
      const auto sig = product_signature(prefix, spec);
      for (int k = 1; k <= 4; ++k) {
        // Center on a point of the attractor inside the cylinder.
        Word ext = prefix;
        for (int e = 0; e < 16; ++e) ext.symbols.push_back(1 + (e * k + first) % d);
        const auto x = project_point(spec, ext).point;
        const auto q = make_strip_query(spec, prefix, x, sig.alpha1() * std::ldexp(1.0, -k));
        const auto res = strip_measure_oracle(nu, q, cap);
        ++queries;
        if (!res.holds) ++failures;
        if (!res.reverse_holds) ++reverse_failures;
        if (res.bound > 0.0) worst = std::max(worst, res.mu_upper / res.bound);
      }
    }
  }
  return {"strip measure", failures == 0 && reverse_failures == 0, false,
          fmt("%g queries, worst mu/bound %.4g, ", queries, worst) +
              fmt("%g forward and %g reverse failures", failures, reverse_failures)};
}

}  // namespace detail

/// The full lemma suite at enumeration depth max_depth.
inline std::vector<CheckResult> run_verify(const IfsSpec& spec, double s, const VerifyOptions& opt = {}) {
  check_s(s);
  if (opt.max_depth < 1) fail(ErrorCode::TooLarge, "max depth must be positive");
  check_enumeration(spec.d(), opt.max_depth);
  const KaenmakiMeasure nu(spec, s);
  return {detail::check_phi_identity(spec, s, opt), detail::check_envelope(nu, opt.max_depth),
          detail::check_exponent_order(nu), detail::check_submultiplicative(nu, opt.max_depth),
          detail::check_quasi_bernoulli_decay(nu, opt.max_depth), detail::check_strips(nu, opt.max_depth)};
}

}  // namespace kaenmaki
