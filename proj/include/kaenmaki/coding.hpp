#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "kaenmaki/error.hpp"
#include "kaenmaki/ifs.hpp"
#include "kaenmaki/word.hpp"

namespace kaenmaki {

/// Square 0/1 matrix, 1-based access.
struct BinaryMatrix {
  int n = 0;
  std::vector<std::uint8_t> entries;

  BinaryMatrix() = default;
  explicit BinaryMatrix(int size) : n(size), entries(static_cast<std::size_t>(size) * size, 0) {}

  static BinaryMatrix identity(int size) {
    BinaryMatrix m(size);
    for (int i = 1; i <= size; ++i) m.set(i, i, 1);
    return m;
  }

  int operator()(int i, int j) const { return entries[static_cast<std::size_t>((i - 1) * n + (j - 1))]; }
  void set(int i, int j, int v) { entries[static_cast<std::size_t>((i - 1) * n + (j - 1))] = static_cast<std::uint8_t>(v); }

  friend bool operator==(const BinaryMatrix&, const BinaryMatrix&) = default;
};

/// True iff every entry of m^2 is positive.
inline bool check_mixing(const BinaryMatrix& m) {
  for (int i = 1; i <= m.n; ++i) {
    for (int j = 1; j <= m.n; ++j) {
      bool reach = false;
      for (int k = 1; k <= m.n && !reach; ++k) reach = m(i, k) && m(k, j);
      if (!reach) return false;
    }
  }
  return true;
}

/// The 2d x 2d transition matrix of the doubled alphabet. Symbol i <= d
/// means "the composition so far is diagonal"; i > d means anti-diagonal.
class TransitionMatrix {
 public:
  TransitionMatrix(int d, int l) : d_(d), l_(l), m_(2 * d) {
    if (d < 2 || l <= 1 || l > d)
      fail(ErrorCode::BadShape, "need 1 < l <= d, got d=" + std::to_string(d) + " l=" + std::to_string(l));
    for (int i = 1; i <= 2 * d; ++i) {
      const bool to_low = i <= l - 1 || i >= d + l;
      for (int j = 1; j <= 2 * d; ++j) m_.set(i, j, to_low ? (j <= d) : (j > d));
    }
  }

  explicit TransitionMatrix(const IfsSpec& spec) : TransitionMatrix(spec.d(), spec.l()) {}

  int d() const noexcept { return d_; }
  int l() const noexcept { return l_; }
  int size() const noexcept { return 2 * d_; }
  int operator()(int i, int j) const { return m_(i, j); }
  const BinaryMatrix& binary() const noexcept { return m_; }

 private:
  int d_;
  int l_;
  BinaryMatrix m_;
};

inline TransitionMatrix transition_matrix(int d, int l) { return TransitionMatrix(d, l); }

inline bool check_mixing(const TransitionMatrix& m) { return check_mixing(m.binary()); }

/// Shift-by-d involution on {1..2d}.
inline int rho(int symbol, int d) noexcept { return ((symbol + d - 1) % (2 * d)) + 1; }

/// A finite word over the doubled alphabet; admissibility is computed once.
struct CodedWord {
  std::vector<int> symbols;
  bool admissible = false;

  CodedWord() = default;
  CodedWord(std::vector<int> s, const TransitionMatrix& a) : symbols(std::move(s)) {
    admissible = !symbols.empty();
    for (int c : symbols)
      if (c < 1 || c > a.size()) admissible = false;
    for (std::size_t k = 0; admissible && k + 1 < symbols.size(); ++k)
      admissible = a(symbols[k], symbols[k + 1]) == 1;
  }

  std::size_t size() const noexcept { return symbols.size(); }
};

namespace detail {
inline std::vector<int> lift(const Word& w, const IfsSpec& spec, bool start_high) {
  spec.check_word(w);
  std::vector<int> out;
  out.reserve(w.size());
  bool odd = false;
  for (int c : w.symbols) {
    out.push_back((odd != start_high) ? c + spec.d() : c);
    if (spec.is_anti(c)) odd = !odd;
  }
  return out;
}
}  // namespace detail

/// tau: shift a symbol by d exactly when an odd number of anti-diagonal
/// letters precede it.
inline CodedWord encode_tau(const Word& w, const IfsSpec& spec) {
  return CodedWord(detail::lift(w, spec, false), TransitionMatrix(spec));
}

/// omega: the complementary lift (shift on even parity).
inline CodedWord encode_omega(const Word& w, const IfsSpec& spec) {
  return CodedWord(detail::lift(w, spec, true), TransitionMatrix(spec));
}

inline Word decode_tau(const CodedWord& c, const IfsSpec& spec) {
  if (c.symbols.empty() || !c.admissible || c.symbols.front() > spec.d())
    fail(ErrorCode::NotInImage, "coded word is not in the image of tau");
  Word w;
  w.symbols.reserve(c.size());
  for (int x : c.symbols) w.symbols.push_back(((x - 1) % spec.d()) + 1);
  return w;
}

/// Closed form of the linear part of S_w. Diagonal products are diag(p, q),
/// anti-diagonal products are [[0, p], [q, 0]]; in both cases the image of
/// the unit square is p wide and q high. Stored as logs.
struct ProductSignature {
  double log_p = 0.0;
  double log_q = 0.0;
  bool antidiagonal_parity = false;

  double p() const noexcept { return std::exp(log_p); }
  double q() const noexcept { return std::exp(log_q); }
  double log_alpha1() const noexcept { return std::max(log_p, log_q); }
  double log_alpha2() const noexcept { return std::min(log_p, log_q); }
  double alpha1() const noexcept { return std::exp(log_alpha1()); }
  double alpha2() const noexcept { return std::exp(log_alpha2()); }

  /// Right-multiply by the linear part of one more map.
  void push(const AffineMap2D& m) noexcept {
    const double la = std::log(m.a);
    const double lb = std::log(m.b);
    if (antidiagonal_parity) {
      log_p += lb;
      log_q += la;
    } else {
      log_p += la;
      log_q += lb;
    }
    if (m.anti()) antidiagonal_parity = !antidiagonal_parity;
  }
};

inline ProductSignature product_signature(const Word& w, const IfsSpec& spec) {
  spec.check_word(w);
  ProductSignature sig;
  for (int c : w.symbols) sig.push(spec.map(c));
  return sig;
}

}  // namespace kaenmaki
