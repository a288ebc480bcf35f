#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "kaenmaki/dimension.hpp"
#include "kaenmaki/report.hpp"
#include "support.hpp"

using namespace kaenmaki;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using testing_support::load;

namespace {

bool has_warning(const DimensionReport& r, const std::string& needle) {
  for (const auto& w : r.warnings)
    if (w.find(needle) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST_CASE("line system of ex1") {
  const auto sys = line_system(load("ex1.json"));
  REQUIRE(sys.maps.size() == 4);
  const double lo[] = {0.0, 0.5, 0.0, 0.5};
  const double hi[] = {1.0 / 3.0, 0.75, 0.2, 0.7};
  for (int i = 1; i <= 4; ++i) {
    CHECK_THAT(sys.map(i).image().lo, WithinAbs(lo[i - 1], 1e-15));
    CHECK_THAT(sys.map(i).image().hi, WithinAbs(hi[i - 1], 1e-15));
  }
}

TEST_CASE("x and y extents of cylinders come from the line system") {
  std::vector<IfsSpec> specs{load("ex1.json")};
  std::mt19937_64 rng(41);
  for (int k = 0; k < 10; ++k) specs.push_back(testing_support::random_spec(rng, 3));
  for (const auto& spec : specs) {
    const auto sys = line_system(spec);
    for (int n = 1; n <= 6; ++n) {
      std::vector<int> w(static_cast<std::size_t>(n), 1);
      while (true) {
        const Word word(w);
        const auto rect = word_image_rect(spec, word);
        const auto x = sys.image(encode_tau(word, spec).symbols);
        const auto y = sys.image(encode_omega(word, spec).symbols);
        CHECK_THAT(x.lo, WithinAbs(rect.x.lo, 1e-14));
        CHECK_THAT(x.hi, WithinAbs(rect.x.hi, 1e-14));
        CHECK_THAT(y.lo, WithinAbs(rect.y.lo, 1e-14));
        CHECK_THAT(y.hi, WithinAbs(rect.y.hi, 1e-14));
        int p = n - 1;
        while (p >= 0 && w[p] == spec.d()) w[p--] = 1;
        if (p < 0) break;
        ++w[p];
      }
    }
  }
}

TEST_CASE("symmetric input collapses the doubled system") {
  const auto spec = load("uniform2.json");
  const auto sys = line_system(spec);
  for (int i = 1; i <= spec.d(); ++i) {
    CHECK(sys.map(i).r == sys.map(i + spec.d()).r);
    CHECK(sys.map(i).c == sys.map(i + spec.d()).c);
  }
}

TEST_CASE("projected separation check") {
  const auto ex1 = load("ex1.json");
  CHECK(check_projection_ssc(line_system(ex1), TransitionMatrix(ex1)));
  const auto tr = load("transversal.json");
  CHECK_FALSE(check_projection_ssc(line_system(tr), TransitionMatrix(tr)));
  CHECK(check_projection_ssc(line_system(ex1), BinaryMatrix::identity(4)));
}

TEST_CASE("projected dimension modes") {
  const auto uni = projected_dimension(load("uniform2.json"), 0.5, ModeRequest::Auto);
  CHECK(uni.mode == ProjectedMode::SscFormula);
  CHECK(uni.ssc_certified);
  CHECK_THAT(uni.value, WithinAbs(std::log(2.0) / std::log(3.0), 1e-12));

  const auto ex1 = load("ex1.json");
  const double s = affinity_dimension(ex1).value;
  const KaenmakiMeasure nu(ex1, s);
  const auto p = projected_dimension(nu, ModeRequest::Auto);
  CHECK(p.mode == ProjectedMode::SscFormula);
  CHECK_THAT(p.value, WithinAbs(entropy(nu, Branch::One) / lyapunov_exponents(nu).chi1, 1e-14));
  CHECK(p.warnings.empty());

  MonteCarloOptions mc;
  mc.count = 400'000;
  mc.seed = 5;
  const auto est = projected_dimension(nu, ModeRequest::MonteCarlo, std::nullopt, mc);
  CHECK(est.mode == ProjectedMode::MonteCarlo);
  CHECK_THAT(est.value, WithinAbs(p.value, 0.05));

  const auto tr = load("transversal.json");
  const auto e = projected_dimension(tr, 1.0, ModeRequest::Auto);
  CHECK(e.mode == ProjectedMode::ExpectedMin);
  CHECK_FALSE(e.ssc_certified);
  CHECK(e.value <= 1.0);
  CHECK(e.warnings.size() == 1);

  const auto u = projected_dimension(tr, 1.0, ModeRequest::UserSupplied, 0.3);
  CHECK(u.mode == ProjectedMode::UserSupplied);
  CHECK(u.value == 0.3);

  auto code = [&](ModeRequest m, std::optional<double> v) {
    try {
      projected_dimension(tr, 1.0, m, v);
    } catch (const Error& err) {
      return err.code();
    }
    return ErrorCode::InternalMismatch;
  };
  CHECK(code(ModeRequest::SscFormula, std::nullopt) == ErrorCode::NoCertificate);
  CHECK(code(ModeRequest::UserSupplied, std::nullopt) == ErrorCode::MissingValue);
  CHECK(code(ModeRequest::UserSupplied, 1.5) == ErrorCode::MalformedConfig);
}

TEST_CASE("projected dimension is unknown without any certificate") {
  // Both diagonal maps share their x-extent and are too wide for the
  // transversality conditions.
  const auto spec = parse_ifs(R"({"maps":[
    {"kind":"diag","a":0.6,"b":0.2,"tx":0.0,"ty":0.0},
    {"kind":"diag","a":0.6,"b":0.2,"tx":0.0,"ty":0.3},
    {"kind":"anti","a":0.2,"b":0.2,"tx":0.7,"ty":0.7}]})");
  REQUIRE_FALSE(check_transversality(spec).holds);
  CHECK_THROWS_AS(projected_dimension(spec, 1.0, ModeRequest::Auto), Error);
  DimensionOptions opt;
  opt.s = 1.0;
  const auto rep = dimension_report(spec, opt);
  CHECK_FALSE(rep.projected);
  CHECK_FALSE(rep.ly_dim);
  CHECK(has_warning(rep, "unknown"));
  const auto j = to_json(rep);
  CHECK(j["ly_dim"].is_null());
  CHECK(j["projected_dim"].is_null());
}

TEST_CASE("Ledrappier-Young formula examples") {
  const double chi1 = 1.2, chi2 = 1.9;
  const double h = 0.7;
  CHECK_THAT(ly_dimension(h, chi1, chi2, h / chi1), WithinAbs(h / chi1, 1e-15));
  CHECK_THAT(ly_dimension(1.5, chi1, chi2, 1.0), WithinAbs(1.0 + (1.5 - chi1) / chi2, 1e-15));
  CHECK(ly_dimension(0.9, 1.3, 1.3, 0.1) == ly_dimension(0.9, 1.3, 1.3, 0.8));
  CHECK_THAT(ly_dimension(0.9, 1.3, 1.3, 0.5), WithinAbs(0.9 / 1.3, 1e-15));
  CHECK_THROWS_AS(ly_dimension(0.9, 1.3, 0.0, 0.5), Error);
}

TEST_CASE("piecewise form and monotonicity on random triples") {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> u(0.01, 5.0);
  for (int k = 0; k < 10'000; ++k) {
    double chi1 = u(rng), chi2 = u(rng);
    if (chi1 > chi2) std::swap(chi1, chi2);
    const double h = u(rng);
    const double p = std::min(h / chi1, 1.0);
    CHECK(std::abs(ly_dimension(h, chi1, chi2, p) - ly_dimension_piecewise(h, chi1, chi2)) <= 1e-12);
    const double q = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    CHECK(ly_dimension(h, chi1, chi2, std::max(p, q)) >= ly_dimension(h, chi1, chi2, std::min(p, q)));
  }
}

TEST_CASE("ex1 report at the affinity dimension has no warnings") {
  const auto rep = dimension_report(load("ex1.json"));
  CHECK(rep.warnings.empty());
  REQUIRE(rep.projected);
  REQUIRE(rep.ly_dim);
  CHECK(rep.projected->mode == ProjectedMode::SscFormula);
  CHECK(*rep.ly_dim > 0.0);
  CHECK(*rep.ly_dim <= 2.0);
  CHECK(std::abs(rep.thermo.pressure) < 1e-12);
  CHECK_THAT(*rep.ly_dim,
             WithinAbs(ly_dimension(rep.thermo.entropy, rep.thermo.chi1, rep.thermo.chi2, rep.projected->value), 1e-15));
  CHECK(rep.separation.strong_separation);
  CHECK(rep.transversality.holds);
}

TEST_CASE("ex1 report across s") {
  const auto spec = load("ex1.json");
  for (double s : {0.5, 1.0}) {
    DimensionOptions opt;
    opt.s = s;
    const auto rep = dimension_report(spec, opt);
    REQUIRE(rep.ly_dim);
    CHECK(*rep.ly_dim > 0.0);
    CHECK(*rep.ly_dim <= 2.0);
    CHECK(rep.thermo.s == s);
  }
}

TEST_CASE("overlapping spec warns about separation") {
  DimensionOptions opt;
  opt.s = 0.9;
  const auto rep = dimension_report(load("overlap.json"), opt);
  CHECK(has_warning(rep, "strong separation"));
  CHECK_FALSE(rep.separation.strong_separation);
}

TEST_CASE("uniform report has ly_dim = log d / log(1/c)") {
  DimensionOptions opt;
  opt.s = 0.5;
  const auto rep = dimension_report(load("uniform2.json"), opt);
  REQUIRE(rep.ly_dim);
  CHECK_THAT(*rep.ly_dim, WithinAbs(std::log(2.0) / std::log(3.0), 1e-12));
  CHECK(has_warning(rep, "degenerate"));
}

TEST_CASE("an affinity dimension of 2 needs an explicit s") {
  try {
    dimension_report(load("uniform4.json"));
    FAIL("expected SOutOfRange");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SOutOfRange);
  }
}

TEST_CASE("report json has the stable fields") {
  const auto j = to_json(dimension_report(load("ex1.json")));
  for (const char* key : {"pressure", "entropy", "chi1", "chi2", "affinity_dim", "projected_dim", "projected_mode",
                          "ly_dim", "strong_separation", "transversality", "warnings"})
    CHECK(j.contains(key));
  CHECK(j["projected_mode"] == "SscFormula");
  const auto again = nlohmann::json::parse(j.dump());
  CHECK(again == j);
}
