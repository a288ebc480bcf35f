#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "kaenmaki/error.hpp"

namespace kaenmaki {

/// Dense row-major square matrix of doubles.
struct DenseMatrix {
  int n = 0;
  std::vector<double> data;

  DenseMatrix() = default;
  explicit DenseMatrix(int size) : n(size), data(static_cast<std::size_t>(size) * size, 0.0) {}

  double& operator()(int i, int j) { return data[static_cast<std::size_t>(i * n + j)]; }
  double operator()(int i, int j) const { return data[static_cast<std::size_t>(i * n + j)]; }
};

struct PerronData {
  double lambda = 0.0;
  std::vector<double> right;  // sup-normalized
  std::vector<double> left;   // sup-normalized
  long iterations = 0;
  double residual = 0.0;      // max of the right and left sup-norm residuals
};

namespace detail {

inline void mat_vec(const DenseMatrix& t, std::span<const double> v, std::span<double> out) {
  for (int i = 0; i < t.n; ++i) {
    double acc = 0.0;
    for (int j = 0; j < t.n; ++j) acc += t(i, j) * v[j];
    out[i] = acc;
  }
}

inline void vec_mat(const DenseMatrix& t, std::span<const double> v, std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  for (int i = 0; i < t.n; ++i)
    for (int j = 0; j < t.n; ++j) out[j] += v[i] * t(i, j);
}

inline double sup_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

struct PowerResult {
  std::vector<double> vec;
  long iterations = 0;
};

/// Power iteration from the all-ones vector. Stops when successive Rayleigh
/// quotients agree to 1e-15 relative and the iterate has settled; accepts the
/// rounding floor once progress stalls with a small residual.
template <class Apply>
PowerResult power_iterate(int n, Apply&& apply, long max_iter) {
  std::vector<double> v(static_cast<std::size_t>(n), 1.0), w(static_cast<std::size_t>(n));
  double prev_rq = 0.0;
  double best_delta = std::numeric_limits<double>::infinity();
  long since_best = 0;
  for (long it = 1; it <= max_iter; ++it) {
    apply(v, w);
    double vv = 0.0, vw = 0.0;
    for (int i = 0; i < n; ++i) {
      vv += v[i] * v[i];
      vw += v[i] * w[i];
    }
    const double rq = vw / vv;
    const double norm = sup_norm(w);
    if (!(norm > 0.0) || !std::isfinite(norm)) fail(ErrorCode::ConvergenceFailure, "power iteration degenerated");
    double delta = 0.0;
    for (int i = 0; i < n; ++i) {
      w[i] /= norm;
      delta = std::max(delta, std::abs(w[i] - v[i]));
    }
    std::swap(v, w);
    const bool rq_settled = std::abs(rq - prev_rq) <= 1e-15 * std::abs(rq);
    prev_rq = rq;
    if (rq_settled && delta <= 1e-15) return {v, it};
    if (delta < best_delta) {
      best_delta = delta;
      since_best = 0;
    } else if (++since_best > 200 && delta <= 1e-13) {
      return {v, it};
    }
  }
  fail(ErrorCode::ConvergenceFailure,
       "power iteration hit the cap of " + std::to_string(max_iter) + " iterations (last change " +
           std::to_string(best_delta) + ")");
}

}  // namespace detail

/// Perron root and positive left/right eigenvectors of a primitive
/// nonnegative matrix.
inline PerronData perron(const DenseMatrix& t, long max_iter = 1'000'000) {
  const int n = t.n;
  auto right = detail::power_iterate(
      n, [&](std::span<const double> v, std::span<double> out) { detail::mat_vec(t, v, out); }, max_iter);
  auto left = detail::power_iterate(
      n, [&](std::span<const double> v, std::span<double> out) { detail::vec_mat(t, v, out); }, max_iter);

  PerronData out;
  out.right = std::move(right.vec);
  out.left = std::move(left.vec);
  out.iterations = std::max(right.iterations, left.iterations);

  std::vector<double> tv(static_cast<std::size_t>(n)), ut(static_cast<std::size_t>(n));
  detail::mat_vec(t, out.right, tv);
  detail::vec_mat(t, out.left, ut);
  double num = 0.0, den = 0.0;
  for (int i = 0; i < n; ++i) {
    num += out.left[i] * tv[i];
    den += out.left[i] * out.right[i];
  }
  out.lambda = num / den;

  double res = 0.0;
  for (int i = 0; i < n; ++i) {
    res = std::max(res, std::abs(tv[i] - out.lambda * out.right[i]));
    res = std::max(res, std::abs(ut[i] - out.lambda * out.left[i]));
  }
  out.residual = res;
  for (int i = 0; i < n; ++i)
    if (!(out.right[i] > 0.0) || !(out.left[i] > 0.0))
      fail(ErrorCode::ConvergenceFailure, "Perron vector is not strictly positive");
  return out;
}

}  // namespace kaenmaki
