#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kaenmaki/coding.hpp"
#include "kaenmaki/error.hpp"
#include "kaenmaki/ifs.hpp"
#include "kaenmaki/parallel.hpp"
#include "kaenmaki/perron.hpp"
#include "kaenmaki/word.hpp"

namespace kaenmaki {

/// Which of the two locally constant potentials: One tracks the width of a
/// cylinder rectangle, Two its height.
enum class Branch { One, Two };

inline constexpr int branch_index(Branch t) noexcept { return t == Branch::One ? 0 : 1; }

/// Upper bound on the number of words any brute-force enumeration visits.
inline constexpr double kMaxEnumeration = 1e7;

inline void check_enumeration(int d, int n) {
  if (n < 1) fail(ErrorCode::TooLarge, "word length must be positive");
  if (std::pow(static_cast<double>(d), n) > kMaxEnumeration)
    fail(ErrorCode::TooLarge, std::to_string(d) + "^" + std::to_string(n) + " words exceeds the enumeration guard");
}

inline void check_s(double s) {
  if (!(s > 0.0 && s < 2.0)) fail(ErrorCode::SOutOfRange, "s must lie in (0,2), got " + std::to_string(s));
}

/// One log-weight per doubled symbol; weights[k] belongs to symbol k+1.
struct Potential {
  double s = 1.0;
  Branch t = Branch::One;
  std::vector<double> weights;

  double weight(int symbol) const { return weights[static_cast<std::size_t>(symbol - 1)]; }
};

namespace detail {

/// Also accepts s == 2, which the affinity bracket needs.
inline Potential potential_unchecked(const IfsSpec& spec, double s, Branch t) {
  const int d = spec.d();
  Potential pot{s, t, std::vector<double>(static_cast<std::size_t>(2 * d))};
  for (int i = 1; i <= 2 * d; ++i) {
    const int base = i <= d ? i : i - d;
    const double la = std::log(spec.a(base));
    const double lb = std::log(spec.b(base));
    // "first" is the side the potential follows: a for (t=One, i<=d) and
    // (t=Two, i>d), b otherwise.
    const bool follow_a = (t == Branch::One) == (i <= d);
    const double first = follow_a ? la : lb;
    const double second = follow_a ? lb : la;
    pot.weights[static_cast<std::size_t>(i - 1)] = s < 1.0 ? s * first : first + (s - 1.0) * second;
  }
  return pot;
}

inline DenseMatrix transfer_matrix(const TransitionMatrix& a, const Potential& pot) {
  DenseMatrix t(a.size());
  for (int i = 1; i <= a.size(); ++i)
    for (int j = 1; j <= a.size(); ++j)
      t(i - 1, j - 1) = a(i, j) ? std::exp(pot.weight(j)) : 0.0;
  return t;
}

}  // namespace detail

inline Potential potential(const IfsSpec& spec, double s, Branch t) {
  check_s(s);
  return detail::potential_unchecked(spec, s, t);
}

/// Markov measure on the doubled shift realizing the Gibbs measure of a
/// locally constant potential. Transfer matrix T(i,j) = A(i,j) exp(w_j).
class MarkovGibbs {
 public:
  MarkovGibbs(const IfsSpec& spec, Potential pot) : a_(spec), pot_(std::move(pot)) {
    const int n = a_.size();
    const auto t = detail::transfer_matrix(a_, pot_);
    auto pd = perron(t);
    lambda_ = pd.lambda;
    residual_ = pd.residual;
    iterations_ = pd.iterations;
    right_ = std::move(pd.right);
    left_ = std::move(pd.left);

    double inner = 0.0;
    for (int i = 0; i < n; ++i) inner += left_[i] * right_[i];
    stationary_.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) stationary_[i] = left_[i] * right_[i] / inner;

    stochastic_ = DenseMatrix(n);
    log_stochastic_ = DenseMatrix(n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double p = t(i, j) * right_[j] / (lambda_ * right_[i]);
        stochastic_(i, j) = p;
        log_stochastic_(i, j) = p > 0.0 ? std::log(p) : -std::numeric_limits<double>::infinity();
      }
    }

    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    double vlo = std::numeric_limits<double>::infinity(), vhi = 0.0;
    for (int i = 0; i < n; ++i) {
      const double first = left_[i] * std::exp(-pot_.weights[i]);
      lo = std::min(lo, first);
      hi = std::max(hi, first);
      vlo = std::min(vlo, right_[i]);
      vhi = std::max(vhi, right_[i]);
    }
    gibbs_lower_ = lambda_ / inner * lo * vlo;
    gibbs_upper_ = lambda_ / inner * hi * vhi;
  }

  const Potential& potential() const noexcept { return pot_; }
  const TransitionMatrix& transitions() const noexcept { return a_; }
  double lambda() const noexcept { return lambda_; }
  double log_pressure() const noexcept { return std::log(lambda_); }
  const std::vector<double>& right_vec() const noexcept { return right_; }
  const std::vector<double>& left_vec() const noexcept { return left_; }
  const std::vector<double>& stationary() const noexcept { return stationary_; }
  const DenseMatrix& stochastic() const noexcept { return stochastic_; }
  double residual() const noexcept { return residual_; }
  long iterations() const noexcept { return iterations_; }

  /// m([c]) / exp(S_n f(c) - n log lambda) lies in [gibbs_lower, gibbs_upper]
  /// for every admissible c: the ratio equals
  /// left_{c1} exp(-w_{c1}) right_{cn} lambda / <left, right>.
  double gibbs_lower() const noexcept { return gibbs_lower_; }
  double gibbs_upper() const noexcept { return gibbs_upper_; }

  double log_stationary(int symbol) const { return std::log(stationary_[static_cast<std::size_t>(symbol - 1)]); }
  double log_transition(int from, int to) const { return log_stochastic_(from - 1, to - 1); }

  /// -inf for inadmissible words.
  double log_cylinder(const CodedWord& c) const {
    if (!c.admissible || c.symbols.empty()) return -std::numeric_limits<double>::infinity();
    double acc = log_stationary(c.symbols.front());
    for (std::size_t k = 0; k + 1 < c.size(); ++k) acc += log_transition(c.symbols[k], c.symbols[k + 1]);
    return acc;
  }

  double cylinder(const CodedWord& c) const {
    if (!c.admissible) return 0.0;
    return std::exp(log_cylinder(c));
  }

  /// Birkhoff sum S_n f along a coded word.
  double birkhoff(const CodedWord& c) const {
    double acc = 0.0;
    for (int x : c.symbols) acc += pot_.weight(x);
    return acc;
  }

  /// Integral of a locally constant function (one value per symbol) against
  /// the stationary measure.
  double integrate(const std::vector<double>& f) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < stationary_.size(); ++i) acc += stationary_[i] * f[i];
    return acc;
  }

 private:
  TransitionMatrix a_;
  Potential pot_;
  double lambda_ = 0.0;
  double residual_ = 0.0;
  long iterations_ = 0;
  std::vector<double> right_;
  std::vector<double> left_;
  std::vector<double> stationary_;
  DenseMatrix stochastic_;
  DenseMatrix log_stochastic_;
  double gibbs_lower_ = 0.0;
  double gibbs_upper_ = 0.0;
};

inline MarkovGibbs gibbs_markov(const IfsSpec& spec, double s, Branch t) {
  return MarkovGibbs(spec, potential(spec, s, t));
}

inline double cylinder_measure_mt(const MarkovGibbs& g, const CodedWord& c) { return g.cylinder(c); }

inline double pressure(const IfsSpec& spec, double s, Branch t) { return gibbs_markov(spec, s, t).log_pressure(); }

namespace detail {
inline double pressure_unchecked(const IfsSpec& spec, double s) {
  const TransitionMatrix a(spec);
  return std::log(perron(transfer_matrix(a, potential_unchecked(spec, s, Branch::One))).lambda);
}
}  // namespace detail

/// Incremental state of a word while it is extended letter by letter:
/// singular-value bookkeeping, the tau lift, and both Gibbs cylinder masses.
struct WordState {
  int length = 0;
  bool odd = false;          // parity of anti-diagonal letters so far
  int last_coded = 0;        // last symbol of tau(w)
  double log_m[2] = {0.0, 0.0};
  double birkhoff[2] = {0.0, 0.0};
  ProductSignature sig;
};

/// The equilibrium measure nu = m1 o tau + m2 o tau for a fixed s, with the
/// two Markov measures built once.
class KaenmakiMeasure {
 public:
  KaenmakiMeasure(const IfsSpec& spec, double s)
      : spec_(spec), s_(s), m1_(gibbs_markov(spec, s, Branch::One)), m2_(gibbs_markov(spec, s, Branch::Two)) {}

  const IfsSpec& spec() const noexcept { return spec_; }
  double s() const noexcept { return s_; }
  const MarkovGibbs& m(Branch t) const noexcept { return t == Branch::One ? m1_ : m2_; }
  double log_pressure() const noexcept { return m1_.log_pressure(); }

  WordState extend(const WordState& st, int symbol) const {
    WordState next = st;
    const int coded = st.odd ? symbol + spec_.d() : symbol;
    for (int t = 0; t < 2; ++t) {
      const auto& g = t == 0 ? m1_ : m2_;
      next.log_m[t] += st.length == 0 ? g.log_stationary(coded) : g.log_transition(st.last_coded, coded);
      next.birkhoff[t] += g.potential().weight(coded);
    }
    next.sig.push(spec_.map(symbol));
    if (spec_.is_anti(symbol)) next.odd = !st.odd;
    next.last_coded = coded;
    next.length = st.length + 1;
    return next;
  }

  WordState walk(const Word& w) const {
    spec_.check_word(w);
    WordState st;
    for (int c : w.symbols) st = extend(st, c);
    return st;
  }

  static double log_nu(const WordState& st) {
    const double hi = std::max(st.log_m[0], st.log_m[1]);
    const double lo = std::min(st.log_m[0], st.log_m[1]);
    return hi + std::log1p(std::exp(lo - hi));
  }

  double log_cylinder(const Word& w) const { return log_nu(walk(w)); }
  double cylinder(const Word& w) const { return std::exp(log_cylinder(w)); }

  /// log phi^s from the singular values.
  double log_phi(const WordState& st) const {
    return s_ < 1.0 ? s_ * st.sig.log_alpha1() : st.sig.log_alpha1() + (s_ - 1.0) * st.sig.log_alpha2();
  }

  /// Envelope of nu([w]) / (phi^s(w) exp(-n P)) over all words.
  double envelope_lower() const noexcept { return std::min(m1_.gibbs_lower(), m2_.gibbs_lower()); }
  double envelope_upper() const noexcept { return m1_.gibbs_upper() + m2_.gibbs_upper(); }
  /// nu([uv]) <= C nu([u]) nu([v]) follows from the envelope and
  /// submultiplicativity of phi^s.
  double submultiplicative_constant() const noexcept {
    return envelope_upper() / (envelope_lower() * envelope_lower());
  }

 private:
  IfsSpec spec_;
  double s_;
  MarkovGibbs m1_;
  MarkovGibbs m2_;
};

inline double kaenmaki_cylinder(const IfsSpec& spec, double s, const Word& w) {
  return KaenmakiMeasure(spec, s).cylinder(w);
}

/// Checks phi^s(w) two ways: from the closed-form singular values and as the
/// larger of the two Birkhoff sums along tau(w). The potentials are held by
/// value so a test can hand in a deliberately broken one.
class PhiChecker {
 public:
  static constexpr double kTolerance = 1e-12;

  PhiChecker(const IfsSpec& spec, double s)
      : PhiChecker(spec, s, potential(spec, s, Branch::One), potential(spec, s, Branch::Two)) {}
  PhiChecker(const IfsSpec& spec, double s, Potential f1, Potential f2)
      : spec_(spec), s_(s), f1_(std::move(f1)), f2_(std::move(f2)) {
    check_s(s);
  }

  double log_phi_singular(const ProductSignature& sig) const {
    return s_ < 1.0 ? s_ * sig.log_alpha1() : sig.log_alpha1() + (s_ - 1.0) * sig.log_alpha2();
  }

  double log_phi_birkhoff(const CodedWord& c) const {
    double b1 = 0.0, b2 = 0.0;
    for (int x : c.symbols) {
      b1 += f1_.weight(x);
      b2 += f2_.weight(x);
    }
    return std::max(b1, b2);
  }

  /// |log route (a) - log route (b)|.
  double discrepancy(const Word& w) const {
    return std::abs(log_phi_singular(product_signature(w, spec_)) - log_phi_birkhoff(encode_tau(w, spec_)));
  }

  double log_phi(const Word& w) const {
    const double a = log_phi_singular(product_signature(w, spec_));
    const double b = log_phi_birkhoff(encode_tau(w, spec_));
    if (!(std::abs(a - b) <= kTolerance))
      fail(ErrorCode::InternalMismatch, "singular-value and Birkhoff routes to phi^s disagree on word " +
                                            format_word(w.symbols) + " by " + std::to_string(std::abs(a - b)));
    return a;
  }

  double phi(const Word& w) const { return std::exp(log_phi(w)); }

 private:
  IfsSpec spec_;
  double s_;
  Potential f1_;
  Potential f2_;
};

inline double svf_phi(const IfsSpec& spec, double s, const Word& w) { return PhiChecker(spec, s).phi(w); }

namespace detail {

/// Words of length n are split into d^k chunks by their first k letters,
/// with k the smallest prefix length giving at least 64 chunks (or k = n).
struct Chunking {
  int prefix = 0;
  std::size_t chunks = 1;
};

inline Chunking chunking(int d, int n) {
  Chunking c;
  while (c.prefix < n && c.chunks < 64) {
    ++c.prefix;
    c.chunks *= static_cast<std::size_t>(d);
  }
  return c;
}

/// Calls visit(chunk, state, letters) for all d^n words of length n, in
/// lexicographic order within each chunk. Chunks may run concurrently.
template <class Visit>
void enumerate_words(const KaenmakiMeasure& nu, int n, const Chunking& ch, Visit&& visit) {
  const int d = nu.spec().d();
  const int k = ch.prefix;
  parallel_for(ch.chunks, [&](std::size_t chunk) {
    std::vector<int> letters(static_cast<std::size_t>(n), 1);
    std::size_t rest = chunk;
    for (int p = k - 1; p >= 0; --p) {
      letters[p] = static_cast<int>(rest % static_cast<std::size_t>(d)) + 1;
      rest /= static_cast<std::size_t>(d);
    }
    std::vector<WordState> stack(static_cast<std::size_t>(n) + 1);
    int depth = 0;
    while (true) {
      for (int p = depth; p < n; ++p) stack[p + 1] = nu.extend(stack[p], letters[p]);
      visit(chunk, static_cast<const WordState&>(stack[n]), static_cast<const std::vector<int>&>(letters));
      int p = n - 1;
      while (p >= k && letters[p] == d) {
        letters[p] = 1;
        --p;
      }
      if (p < k) break;
      ++letters[p];
      depth = p;
    }
  });
}

}  // namespace detail

/// (1/n) log sum_{|w|=n} phi^s(w); decreases towards the pressure as n grows
/// (along doublings) by submultiplicativity.
inline double subadditive_pressure_bruteforce(const IfsSpec& spec, double s, int n) {
  check_s(s);
  check_enumeration(spec.d(), n);
  const PhiChecker phi(spec, s);
  // Shift so every term is at most one.
  double shift = -std::numeric_limits<double>::infinity();
  for (int i = 1; i <= spec.d(); ++i) shift = std::max(shift, phi.log_phi_singular(product_signature(Word{i}, spec)));
  shift *= n;

  const int d = spec.d();
  const auto [k, chunks] = detail::chunking(d, n);
  std::vector<double> partial(chunks, 0.0);
  parallel_for(chunks, [&](std::size_t chunk) {
    std::vector<ProductSignature> stack(static_cast<std::size_t>(n) + 1);
    std::vector<int> letters(static_cast<std::size_t>(n), 1);
    std::size_t rest = chunk;
    for (int p = k - 1; p >= 0; --p) {
      letters[p] = static_cast<int>(rest % static_cast<std::size_t>(d)) + 1;
      rest /= static_cast<std::size_t>(d);
    }
    int depth = 0;
    double acc = 0.0;
    while (true) {
      for (int p = depth; p < n; ++p) {
        stack[p + 1] = stack[p];
        stack[p + 1].push(spec.map(letters[p]));
      }
      acc += std::exp(phi.log_phi_singular(stack[n]) - shift);
      int p = n - 1;
      while (p >= k && letters[p] == d) {
        letters[p] = 1;
        --p;
      }
      if (p < k) break;
      ++letters[p];
      depth = p;
    }
    partial[chunk] = acc;
  });
  const double total = tree_reduce(std::move(partial), 0.0, std::plus<>());
  return (std::log(total) + shift) / n;
}

struct AffinityResult {
  double value = 0.0;
  bool clamped = false;          // P(2) > 0: value pinned to 2
  double pressure_at_value = 0.0;
  double bracket_width = 0.0;
  bool monotone_trace = true;    // pressure decreased along every bisection probe
  std::vector<std::pair<double, double>> trace;
};

/// Root of s -> P(s) in (0, 2] by bisection.
inline AffinityResult affinity_dimension(const IfsSpec& spec) {
  constexpr double kPressureTol = 1e-12;
  AffinityResult res;
  const double p2 = detail::pressure_unchecked(spec, 2.0);
  res.trace.emplace_back(2.0, p2);
  if (p2 > kPressureTol) {
    res.value = 2.0;
    res.clamped = true;
    res.pressure_at_value = p2;
    return res;
  }
  if (p2 >= -kPressureTol) {
    res.value = 2.0;
    res.pressure_at_value = p2;
    return res;
  }
  double lo = 0.0, hi = 2.0;  // P(0+) = log d > 0
  double mid = 1.0, pm = 0.0;
  while (hi - lo > 1e-13) {
    mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    pm = detail::pressure_unchecked(spec, mid);
    res.trace.emplace_back(mid, pm);
    if (pm > 0.0) {
      lo = mid;
    } else if (pm < 0.0) {
      hi = mid;
    } else {
      lo = hi = mid;
    }
  }
  res.value = 0.5 * (lo + hi);
  res.bracket_width = hi - lo;
  res.pressure_at_value = detail::pressure_unchecked(spec, res.value);

  auto sorted = res.trace;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t k = 0; k + 1 < sorted.size(); ++k)
    if (!(sorted[k].second > sorted[k + 1].second)) res.monotone_trace = false;
  return res;
}

struct LyapunovExponents {
  double chi1 = 0.0;
  double chi2 = 0.0;
  /// chi1 < chi2 by more than 1e-12. Expected whenever some a_i != b_i;
  /// near-degenerate systems are reported rather than rejected.
  bool strict = false;
};

inline LyapunovExponents lyapunov_exponents(const KaenmakiMeasure& nu) {
  const auto& m1 = nu.m(Branch::One);
  const auto w1 = potential(nu.spec(), 1.0, Branch::One);
  const auto w2 = potential(nu.spec(), 1.0, Branch::Two);
  LyapunovExponents out;
  out.chi1 = -m1.integrate(w1.weights);
  out.chi2 = -m1.integrate(w2.weights);
  out.strict = out.chi2 - out.chi1 > 1e-12;
  return out;
}

inline LyapunovExponents lyapunov_exponents(const IfsSpec& spec, double s) {
  return lyapunov_exponents(KaenmakiMeasure(spec, s));
}

/// h = P - integral of f_{t,s} against m_t.
inline double entropy(const KaenmakiMeasure& nu, Branch t) {
  const auto& g = nu.m(t);
  return g.log_pressure() - g.integrate(g.potential().weights);
}

inline double entropy(const IfsSpec& spec, double s) { return entropy(KaenmakiMeasure(spec, s), Branch::One); }

inline double quasi_bernoulli_ratio(const IfsSpec& spec, double s, int i, int j, int n) {
  if (i < 1 || i > spec.d() || j < 1 || j > spec.d() || spec.is_anti(i) || !spec.is_anti(j) ||
      spec.a(i) == spec.b(i))
    fail(ErrorCode::BadMapKinds, "need a diagonal map i with a_i != b_i and an anti-diagonal map j");
  if (n < 1) fail(ErrorCode::BadMapKinds, "n must be positive");
  const PhiChecker phi(spec, s);
  const Word power = repeat(i, static_cast<std::size_t>(n));
  const Word head = concat(power, Word{j});
  const Word whole = concat(head, power);
  return std::exp(phi.log_phi(whole) - phi.log_phi(head) - phi.log_phi(power));
}

struct SubmultiplicativityResult {
  double worst_upper = 0.0;
  double worst_lower = std::numeric_limits<double>::infinity();
  Word upper_u, upper_v, lower_u, lower_v;
};

/// Extremes of nu([uv]) / (nu([u]) nu([v])) over nonempty u, v with
/// |u| + |v| <= max_len.
inline SubmultiplicativityResult submultiplicativity_check(const KaenmakiMeasure& nu, int max_len) {
  const int d = nu.spec().d();
  if (max_len < 2) fail(ErrorCode::TooLarge, "max_len must be at least 2");
  check_enumeration(d, max_len);

  // log nu for every word, tables indexed by base-d digits (letter - 1).
  std::vector<std::vector<double>> table(static_cast<std::size_t>(max_len) + 1);
  table[0] = {0.0};
  std::vector<std::vector<WordState>> states(static_cast<std::size_t>(max_len) + 1);
  states[0] = {WordState{}};
  for (int n = 1; n <= max_len; ++n) {
    const auto& prev = states[n - 1];
    std::vector<WordState> cur(prev.size() * static_cast<std::size_t>(d));
    table[n].resize(cur.size());
    parallel_for(prev.size(), [&](std::size_t idx) {
      for (int c = 1; c <= d; ++c) {
        const std::size_t k = idx * static_cast<std::size_t>(d) + static_cast<std::size_t>(c - 1);
        cur[k] = nu.extend(prev[idx], c);
        table[n][k] = KaenmakiMeasure::log_nu(cur[k]);
      }
    });
    states[n - 1].clear();
    states[n - 1].shrink_to_fit();
    states[n] = std::move(cur);
  }

  auto decode = [d](std::size_t idx, int len) {
    Word w(std::vector<int>(static_cast<std::size_t>(len)));
    for (int p = len - 1; p >= 0; --p) {
      w.symbols[p] = static_cast<int>(idx % static_cast<std::size_t>(d)) + 1;
      idx /= static_cast<std::size_t>(d);
    }
    return w;
  };

  SubmultiplicativityResult res;
  double best_hi = -std::numeric_limits<double>::infinity();
  double best_lo = std::numeric_limits<double>::infinity();
  for (int lu = 1; lu < max_len; ++lu) {
    for (int lv = 1; lu + lv <= max_len; ++lv) {
      const auto& tu = table[lu];
      const auto& tv = table[lv];
      const auto& tuv = table[lu + lv];
      for (std::size_t iu = 0; iu < tu.size(); ++iu) {
        for (std::size_t iv = 0; iv < tv.size(); ++iv) {
          const double r = tuv[iu * tv.size() + iv] - tu[iu] - tv[iv];
          if (r > best_hi) {
            best_hi = r;
            res.upper_u = decode(iu, lu);
            res.upper_v = decode(iv, lv);
          }
          if (r < best_lo) {
            best_lo = r;
            res.lower_u = decode(iu, lu);
            res.lower_v = decode(iv, lv);
          }
        }
      }
    }
  }
  res.worst_upper = std::exp(best_hi);
  res.worst_lower = std::exp(best_lo);
  return res;
}

inline SubmultiplicativityResult submultiplicativity_check(const IfsSpec& spec, double s, int max_len) {
  return submultiplicativity_check(KaenmakiMeasure(spec, s), max_len);
}

struct ThermoSummary {
  double s = 0.0;
  double pressure = 0.0;
  double entropy = 0.0;
  double chi1 = 0.0;
  double chi2 = 0.0;
  double affinity_dim = 0.0;
  bool affinity_clamped = false;
  double gibbs_lower = 0.0;
  double gibbs_upper = 0.0;
  bool strict_exponents = false;
};

inline ThermoSummary thermo_summary(const KaenmakiMeasure& nu, const AffinityResult& affinity) {
  ThermoSummary t;
  t.s = nu.s();
  t.pressure = nu.log_pressure();
  t.entropy = entropy(nu, Branch::One);
  const auto ly = lyapunov_exponents(nu);
  t.chi1 = ly.chi1;
  t.chi2 = ly.chi2;
  t.strict_exponents = ly.strict;
  t.affinity_dim = affinity.value;
  t.affinity_clamped = affinity.clamped;
  t.gibbs_lower = nu.envelope_lower();
  t.gibbs_upper = nu.envelope_upper();
  return t;
}

inline ThermoSummary thermo_summary(const IfsSpec& spec, double s) {
  return thermo_summary(KaenmakiMeasure(spec, s), affinity_dimension(spec));
}

}  // namespace kaenmaki
