// Acceptance gate: one PASS/FAIL line per criterion. With an argument N only
// criterion N runs; the exit status is nonzero iff a selected criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "kaenmaki/kaenmaki.hpp"
#include "kaenmaki/cli.hpp"

using namespace kaenmaki;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fixture(const char* name) { return std::string(KAENMAKI_FIXTURES) + "/" + name; }

std::string fmt(const char* f, double a = 0, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

IfsSpec random_spec(std::mt19937_64& rng, int max_d) {
  std::uniform_int_distribution<int> dd(2, max_d);
  std::uniform_real_distribution<double> ratio(0.1, 0.45), unit(0.0, 1.0);
  const int d = dd(rng);
  const int anti = std::uniform_int_distribution<int>(1, d - 1)(rng);
  std::vector<AffineMap2D> maps;
  for (int i = 0; i < d; ++i) {
    AffineMap2D m;
    m.kind = i < anti ? MapKind::AntiDiagonal : MapKind::Diagonal;
    m.a = ratio(rng);
    m.b = ratio(rng);
    m.tx = unit(rng) * (1.0 - m.a);
    m.ty = unit(rng) * (1.0 - m.b);
    maps.push_back(m);
  }
  return IfsSpec::create(maps);
}

template <class Visit>
void words_of_length(int d, int n, Visit&& visit) {
  std::vector<int> w(static_cast<std::size_t>(n), 1);
  while (true) {
    visit(Word(w));
    int p = n - 1;
    while (p >= 0 && w[p] == d) w[p--] = 1;
    if (p < 0) break;
    ++w[p];
  }
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const IfsSpec& ex1() {
  static const IfsSpec spec = load_ifs(fixture("ex1.json"));
  return spec;
}

double ex1_sstar() {
  static const double s = affinity_dimension(ex1()).value;
  return s;
}

Outcome phi_identity() {
  constexpr double kTol = 1e-12;
  constexpr double kBudget = 30.0;
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(101);
  std::vector<IfsSpec> specs{ex1()};
  // Two to three maps keep words of length 10 enumerable within budget.
  for (int k = 0; k < 3; ++k) specs.push_back(random_spec(rng, 3));
  double worst = 0.0;
  long words = 0;
  for (const auto& spec : specs) {
    for (double s : {0.5, 1.0, 1.5}) {
      const PhiChecker phi(spec, s);
      for (int n = 1; n <= 10; ++n)
        words_of_length(spec.d(), n, [&](const Word& w) {
          worst = std::max(worst, phi.discrepancy(w));
          ++words;
        });
    }
  }
  const double dt = seconds_since(t0);
  return {worst <= kTol && dt < kBudget,
          fmt("%.0f words, max discrepancy %.2e (tol %.0e), %.1f s", words, worst, kTol, dt)};
}

Outcome pressure_oracle() {
  constexpr double kTol = 0.02;
  constexpr double kBudget = 60.0;
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  std::string detail;
  for (double s : {0.5, 1.0, 1.5}) {
    const double p = pressure(ex1(), s, Branch::One);
    double prev = std::numeric_limits<double>::infinity();
    bool monotone = true;
    double bf = 0.0;
    for (int n : {2, 4, 8, 12}) {
      bf = subadditive_pressure_bruteforce(ex1(), s, n);
      if (bf > prev) monotone = false;
      prev = bf;
    }
    const double gap = std::abs(p - bf);
    ok = ok && gap <= kTol && monotone;
    detail += fmt("s=%.1f |P-bf12|=%.4f; ", s, gap) + (monotone ? "" : "not monotone; ");
  }
  const double dt = seconds_since(t0);
  ok = ok && dt < kBudget;
  return {ok, detail + fmt("tol %.2f, %.1f s", kTol, dt)};
}

Outcome symmetry() {
  constexpr double kTol = 1e-10;
  std::mt19937_64 rng(303);
  std::vector<IfsSpec> specs{ex1()};
  for (int k = 0; k < 20; ++k) specs.push_back(random_spec(rng, 5));
  double worst_p = 0.0, worst_h = 0.0;
  for (const auto& spec : specs)
    for (double s : {0.3, 0.9, 1.4}) {
      const KaenmakiMeasure nu(spec, s);
      worst_p = std::max(worst_p, std::abs(nu.m(Branch::One).log_pressure() - nu.m(Branch::Two).log_pressure()));
      worst_h = std::max(worst_h, std::abs(entropy(nu, Branch::One) - entropy(nu, Branch::Two)));
    }
  return {worst_p <= kTol && worst_h <= kTol,
          fmt("max |dP| %.2e, max |dh| %.2e (tol %.0e)", worst_p, worst_h, kTol)};
}

Outcome closed_forms() {
  constexpr double kTolThermo = 1e-12;
  constexpr double kTolAffinity = 1e-9;
  const auto uni = load_ifs(fixture("uniform2.json"));
  const double d = 2.0, c = 1.0 / 3.0;
  double worst = 0.0;
  for (double s : {0.3, 0.9, 1.4}) {
    worst = std::max(worst, std::abs(pressure(uni, s, Branch::One) - std::log(d * std::pow(c, s))));
    worst = std::max(worst, std::abs(entropy(uni, s) - std::log(d)));
  }
  const double sstar = affinity_dimension(uni).value;
  const double aff_err = std::abs(sstar - std::log(d) / std::log(1.0 / c));
  const auto full = affinity_dimension(load_ifs(fixture("uniform4.json")));
  const bool full_ok = full.value == 2.0 && !full.clamped;
  return {worst <= kTolThermo && aff_err <= kTolAffinity && full_ok,
          fmt("pressure/entropy err %.2e, s* err %.2e, d=4 c=1/2 gives %.6g ", worst, aff_err, full.value) +
              (full.clamped ? "(clamped)" : "(unclamped)")};
}

Outcome gibbs_envelope() {
  constexpr double kDrift = 0.05;
  const double s = ex1_sstar();
  const KaenmakiMeasure nu(ex1(), s);
  const PhiChecker phi(ex1(), s);
  const double c = nu.submultiplicative_constant();
  auto extremes = [&](int n) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    words_of_length(2, n, [&](const Word& w) {
      const double r = nu.cylinder(w) / phi.phi(w);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    });
    return std::make_pair(lo, hi);
  };
  const auto [lo6, hi6] = extremes(6);
  const auto [lo10, hi10] = extremes(10);
  const double drift = std::max(std::abs(lo10 / lo6 - 1.0), std::abs(hi10 / hi6 - 1.0));
  const bool inside = std::min(lo6, lo10) >= 1.0 / c && std::max(hi6, hi10) <= c;
  return {drift <= kDrift && inside,
          fmt("n=6 [%.4f, %.4f], n=10 [%.4f, %.4f], ", lo6, hi6, lo10, hi10) +
              fmt("drift %.3f (tol %.2f), C = %.3f", drift, kDrift, c)};
}

Outcome quasi_bernoulli() {
  constexpr double kTol = 1e-12;
  const auto spec = load_ifs(fixture("qb.json"));
  const double r2 = quasi_bernoulli_ratio(spec, 1.0, 1, 2, 2);
  const double r4 = quasi_bernoulli_ratio(spec, 1.0, 1, 2, 4);
  bool decreasing = true;
  double prev = std::numeric_limits<double>::infinity();
  for (int n = 1; n <= 10; ++n) {
    const double r = quasi_bernoulli_ratio(spec, 1.0, 1, 2, n);
    if (!(r < prev)) decreasing = false;
    prev = r;
  }
  return {std::abs(r2 - 0.25) <= kTol && std::abs(r4 - 1.0 / 16.0) <= kTol && decreasing,
          fmt("ratio(2) = %.15g, ratio(4) = %.15g, ratio(10) = %.3e", r2, r4, prev) +
              (decreasing ? ", strictly decreasing" : ", NOT decreasing")};
}

Outcome ledrappier_young() {
  constexpr double kTol = 0.15;
  constexpr double kBudget = 300.0;
  const auto t0 = std::chrono::steady_clock::now();
  set_thread_count(1);
  const auto rep = dimension_report(ex1());
  const KaenmakiMeasure nu(ex1(), ex1_sstar());
  const auto samples = sample_symbolic(nu, 1'000'000, 60, 2024);
  const auto radii = geometric_radii(std::ldexp(1.0, -9), std::ldexp(1.0, -4), 6);
  const auto est = estimate_local_dimension(samples, pick_centers(samples, 20), radii);
  set_thread_count(0);
  const double dt = seconds_since(t0);
  const double ly = rep.ly_dim.value_or(-1.0);
  return {std::abs(est.slope - ly) <= kTol && dt < kBudget,
          fmt("slope %.4f +- %.4f vs ly_dim %.4f (tol %.2f), ", est.slope, est.std_error, ly, kTol) +
              fmt("%.1f s single-threaded", dt)};
}

Outcome projected_consistency() {
  constexpr double kTolSlope = 0.10;
  constexpr double kTolIdentity = 1e-12;
  const KaenmakiMeasure nu(ex1(), ex1_sstar());
  const auto p = projected_dimension(nu, ModeRequest::Auto);
  const auto samples = sample_symbolic(nu, 1'000'000, 60, 77);
  const auto est = estimate_projected_dim(samples, ProjectionAxis::X, 20,
                                          geometric_radii(std::ldexp(1.0, -10), std::ldexp(1.0, -4), 7));
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> u(0.01, 5.0);
  double worst = 0.0;
  for (int k = 0; k < 10'000; ++k) {
    double chi1 = u(rng), chi2 = u(rng);
    if (chi1 > chi2) std::swap(chi1, chi2);
    const double h = u(rng);
    worst = std::max(worst, std::abs(ly_dimension(h, chi1, chi2, std::min(h / chi1, 1.0)) -
                                     ly_dimension_piecewise(h, chi1, chi2)));
  }
  const bool mode_ok = p.mode == ProjectedMode::SscFormula;
  return {std::abs(est.slope - p.value) <= kTolSlope && worst <= kTolIdentity && mode_ok,
          fmt("slope %.4f +- %.4f vs h/chi1 %.4f (tol %.2f), ", est.slope, est.std_error, p.value, kTolSlope) +
              fmt("identity max err %.2e", worst)};
}

Outcome lyapunov_diagnostics() {
  constexpr int kDepth = 200;
  constexpr std::size_t kCount = 2000;
  constexpr double kSigmas = 3.0;
  constexpr double kMinGap = 1e-6;
  constexpr double kEnvelopeFraction = 0.95;
  const KaenmakiMeasure nu(ex1(), ex1_sstar());
  const auto ly = lyapunov_exponents(nu);
  const double h = entropy(nu, Branch::One);
  const auto samples = sample_symbolic(nu, kCount, kDepth, 9);
  std::vector<double> c1, c2, en;
  std::size_t below = 0;
  const double envelope = -kDepth * (ly.chi2 - ly.chi1) / 2.0;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const auto st = nu.walk(samples.word(k));
    c1.push_back(-st.sig.log_alpha1() / kDepth);
    c2.push_back(-st.sig.log_alpha2() / kDepth);
    // Information of the coded Markov chain along the sampled branch.
    const auto& chain = nu.m(samples.branch(k)).stochastic();
    const auto coded = encode_tau(samples.word(k), ex1()).symbols;
    double info = 0.0;
    for (std::size_t i = 1; i < coded.size(); ++i) info -= std::log(chain(coded[i - 1] - 1, coded[i] - 1));
    en.push_back(info / (kDepth - 1));
    below += st.sig.log_alpha2() - st.sig.log_alpha1() < envelope;
  }
  auto within = [&](const std::vector<double>& v, double target, double& z) {
    double m = 0.0, q = 0.0;
    for (double x : v) m += x;
    m /= static_cast<double>(v.size());
    for (double x : v) q += (x - m) * (x - m);
    const double se = std::sqrt(q / (static_cast<double>(v.size()) - 1.0) / static_cast<double>(v.size()));
    z = std::abs(m - target) / se;
    return z <= kSigmas;
  };
  double z1 = 0, z2 = 0, zh = 0;
  const bool ok1 = within(c1, ly.chi1, z1), ok2 = within(c2, ly.chi2, z2), okh = within(en, h, zh);
  const double frac = static_cast<double>(below) / static_cast<double>(kCount);
  const double gap = ly.chi2 - ly.chi1;
  return {ok1 && ok2 && okh && gap > kMinGap && frac >= kEnvelopeFraction,
          fmt("z(chi1) %.2f, z(chi2) %.2f, z(h) %.2f (max 3), ", z1, z2, zh) +
              fmt("gap %.4f, %.3f below envelope", gap, frac)};
}

Outcome strip_oracle() {
  constexpr int kCap = 8;
  const double s = ex1_sstar();
  const KaenmakiMeasure nu(ex1(), s);
  std::mt19937_64 rng(505);
  int held = 0, nonzero = 0;
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    Word prefix;
    const int len = 1 + k % 3;
    for (int n = 0; n < len; ++n) prefix.symbols.push_back(1 + static_cast<int>(rng() % 2));
    Word ext = prefix;
    for (int n = 0; n < 20; ++n) ext.symbols.push_back(1 + static_cast<int>(rng() % 2));
    const double r =
        product_signature(prefix, ex1()).alpha1() * std::ldexp(1.0, -1 - static_cast<int>(rng() % 5));
    const auto res = strip_measure_oracle(nu, make_strip_query(ex1(), prefix, project_point(ex1(), ext).point, r), kCap);
    held += res.mu_upper <= res.bound * (1.0 + 1e-9);
    nonzero += res.mu_lower > 0.0;
    if (res.bound > 0) worst = std::max(worst, res.mu_upper / res.bound);
  }
  const Word w{2, 1};
  const auto rect = word_image_rect(ex1(), w);
  const auto full = strip_measure_oracle(
      nu,
      make_strip_query(ex1(), w, {(rect.x.lo + rect.x.hi) / 2, (rect.y.lo + rect.y.hi) / 2},
                       product_signature(w, ex1()).alpha1()),
      kCap);
  const double exact = nu.cylinder(w);
  const bool trivial = full.mu_lower == full.mu_upper && std::abs(full.mu_upper - exact) <= 1e-15 * exact;
  return {held == 20 && trivial,
          fmt("%.0f/20 queries within bound (%.0f with mass), worst ratio %.4f, full cylinder ", held, nonzero,
              worst) +
              (trivial ? "exact" : "MISMATCH")};
}

Outcome determinism() {
  auto run = [](std::vector<std::string> args, const std::string& threads) {
    args.insert(args.begin(), "kaenmaki");
    args.insert(args.end(), {"--spec", fixture("ex1.json"), "--seed", "13", "--threads", threads});
    std::istringstream in;
    std::ostringstream out, err;
    const int code = cli::run(args, {in, out, err});
    return code == 0 ? out.str() : std::string("exit ") + std::to_string(code) + err.str();
  };
  const std::vector<std::vector<std::string>> commands{
      {"sample", "--count", "20000", "--depth", "40"},
      {"render", "--count", "200000", "--depth", "40", "--px", "256"},
      {"estimate", "--count", "200000", "--radii", "0.004:0.0625:5"}};
  int same = 0;
  std::size_t bytes = 0;
  for (const auto& c : commands) {
    const auto a = run(c, "1"), b = run(c, "1"), n = run(c, "4");
    same += a == b && a == n && a.rfind("exit ", 0) != 0;
    bytes += a.size();
  }
  set_thread_count(0);
  return {same == 3, fmt("%.0f/3 commands byte-identical across runs and 1 vs 4 threads (%.0f bytes)", same, bytes)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"phi identity, words up to length 10", phi_identity},
      {"pressure vs brute force at n = 12", pressure_oracle},
      {"branch symmetry of P and h", symmetry},
      {"uniform closed forms", closed_forms},
      {"Gibbs envelope without drift", gibbs_envelope},
      {"quasi-Bernoulli failure", quasi_bernoulli},
      {"Ledrappier-Young vs Monte Carlo", ledrappier_young},
      {"projected dimension consistency", projected_consistency},
      {"Lyapunov and entropy diagnostics", lyapunov_diagnostics},
      {"strip measure bound", strip_oracle},
      {"determinism across threads", determinism},
  };
  int only = 0;
  if (argc > 1) only = std::atoi(argv[1]);
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const int id = static_cast<int>(k) + 1;
    if (only && id != only) continue;
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("[%s] %2d %-38s %s\n", o.pass ? "PASS" : "FAIL", id, criteria[k].first, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
