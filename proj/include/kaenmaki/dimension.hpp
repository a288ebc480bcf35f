#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kaenmaki/error.hpp"
#include "kaenmaki/ifs.hpp"
#include "kaenmaki/projection.hpp"
#include "kaenmaki/sampling.hpp"
#include "kaenmaki/thermo.hpp"

namespace kaenmaki {

enum class ProjectedMode { SscFormula, ExpectedMin, UserSupplied, MonteCarlo };
enum class ModeRequest { Auto, SscFormula, ExpectedMin, UserSupplied, MonteCarlo };

inline const char* to_string(ProjectedMode m) noexcept {
  switch (m) {
    case ProjectedMode::SscFormula: return "SscFormula";
    case ProjectedMode::ExpectedMin: return "ExpectedMin";
    case ProjectedMode::UserSupplied: return "UserSupplied";
    case ProjectedMode::MonteCarlo: return "MonteCarlo";
  }
  return "?";
}

inline ModeRequest parse_mode_request(const std::string& name) {
  if (name == "auto" || name == "Auto") return ModeRequest::Auto;
  if (name == "ssc" || name == "SscFormula") return ModeRequest::SscFormula;
  if (name == "expected" || name == "ExpectedMin") return ModeRequest::ExpectedMin;
  if (name == "user" || name == "UserSupplied") return ModeRequest::UserSupplied;
  if (name == "mc" || name == "MonteCarlo") return ModeRequest::MonteCarlo;
  fail(ErrorCode::MalformedConfig, "unknown projected-dimension mode '" + name + "'");
}

/// Dimension of the first-coordinate projection of the branch-One measure.
struct ProjectedDim {
  double value = 0.0;
  ProjectedMode mode = ProjectedMode::SscFormula;
  bool ssc_certified = false;
  double std_error = 0.0;  // MonteCarlo only
  std::vector<std::string> warnings;
};

struct MonteCarloOptions {
  std::size_t count = 200'000;
  int depth = 60;
  std::uint64_t seed = 0;
  std::size_t centers = 20;
  ProjectionAxis axis = ProjectionAxis::X;
  std::vector<double> radii = geometric_radii(1.0 / 1024.0, 1.0 / 16.0, 6);
};

inline constexpr const char* kExpectedMinLabel =
    "projected dimension min(h/chi1, 1) is the value for almost every translation vector; "
    "for this particular spec it is conjectural";

inline ProjectedDim projected_dimension(const KaenmakiMeasure& nu, ModeRequest request,
                                        std::optional<double> user_value = std::nullopt,
                                        const MonteCarloOptions& mc = {}) {
  const IfsSpec& spec = nu.spec();
  ProjectedDim out;
  out.ssc_certified = check_projection_ssc(line_system(spec), TransitionMatrix(spec));

  if (request == ModeRequest::UserSupplied) {
    if (!user_value) fail(ErrorCode::MissingValue, "UserSupplied mode needs a value");
    if (!(*user_value >= 0.0 && *user_value <= 1.0))
      fail(ErrorCode::MalformedConfig, "projected dimension must lie in [0, 1]");
    out.mode = ProjectedMode::UserSupplied;
    out.value = *user_value;
    return out;
  }
  if (request == ModeRequest::MonteCarlo) {
    const auto samples = sample_symbolic(nu, mc.count, mc.depth, mc.seed);
    const auto est = estimate_projected_dim(samples, mc.axis, mc.centers, mc.radii);
    out.mode = ProjectedMode::MonteCarlo;
    out.value = std::clamp(est.slope, 0.0, 1.0);
    out.std_error = est.std_error;
    if (out.value != est.slope) out.warnings.push_back("Monte Carlo projected dimension clamped to [0, 1]");
    return out;
  }

  const double ratio = entropy(nu, Branch::One) / lyapunov_exponents(nu).chi1;
  if (request == ModeRequest::SscFormula || (request == ModeRequest::Auto && out.ssc_certified)) {
    if (!out.ssc_certified)
      fail(ErrorCode::NoCertificate, "projected interval system fails the per-state separation check");
    out.mode = ProjectedMode::SscFormula;
    out.value = std::clamp(ratio, 0.0, 1.0);
    if (out.value != ratio) out.warnings.push_back("projected dimension h/chi1 clamped to [0, 1]");
    return out;
  }
  if (request == ModeRequest::ExpectedMin || check_transversality(spec).holds) {
    out.mode = ProjectedMode::ExpectedMin;
    out.value = std::min(ratio, 1.0);
    out.warnings.push_back(kExpectedMinLabel);
    return out;
  }
  fail(ErrorCode::NoCertificate, "neither the projected separation check nor the transversality conditions hold");
}

inline ProjectedDim projected_dimension(const IfsSpec& spec, double s, ModeRequest request,
                                        std::optional<double> user_value = std::nullopt,
                                        const MonteCarloOptions& mc = {}) {
  return projected_dimension(KaenmakiMeasure(spec, s), request, user_value, mc);
}

/// h/chi2 + ((chi2 - chi1)/chi2) p.
inline double ly_dimension(double h, double chi1, double chi2, double projected) {
  if (!(chi2 > 0.0)) fail(ErrorCode::MalformedConfig, "chi2 must be positive");
  return h / chi2 + (chi2 - chi1) / chi2 * projected;
}

inline double ly_dimension(const ThermoSummary& t, const ProjectedDim& p) {
  return ly_dimension(t.entropy, t.chi1, t.chi2, p.value);
}

/// Piecewise form for p = min(h/chi1, 1).
inline double ly_dimension_piecewise(double h, double chi1, double chi2) {
  return h <= chi1 ? h / chi1 : 1.0 + (h - chi1) / chi2;
}

struct DimensionOptions {
  std::optional<double> s;  // default: affinity dimension
  ModeRequest mode = ModeRequest::Auto;
  std::optional<double> user_value;
  MonteCarloOptions mc;
};

struct DimensionReport {
  ThermoSummary thermo;
  std::optional<ProjectedDim> projected;
  std::optional<double> ly_dim;
  SeparationReport separation;
  TransversalityReport transversality;
  std::vector<std::string> warnings;
};

inline double default_s(const AffinityResult& affinity) {
  if (!(affinity.value < 2.0))
    fail(ErrorCode::SOutOfRange, "affinity dimension is 2; pass an explicit s in (0, 2)");
  return affinity.value;
}

inline DimensionReport dimension_report(const IfsSpec& spec, const DimensionOptions& opt = {}) {
  DimensionReport rep;
  rep.separation = check_strong_separation(spec);
  rep.transversality = check_transversality(spec);
  const auto affinity = affinity_dimension(spec);
  const double s = opt.s ? *opt.s : default_s(affinity);
  check_s(s);
  const KaenmakiMeasure nu(spec, s);
  rep.thermo = thermo_summary(nu, affinity);

  if (!rep.separation.strong_separation) rep.warnings.push_back("strong separation not certified");
  for (const auto& w : spec.warnings()) rep.warnings.push_back(w);
  if (!rep.thermo.strict_exponents) rep.warnings.push_back("Lyapunov exponents are not strictly ordered");
  if (affinity.clamped) rep.warnings.push_back("affinity dimension clamped to 2");

  try {
    rep.projected = projected_dimension(nu, opt.mode, opt.user_value, opt.mc);
  } catch (const Error& e) {
    if (opt.mode != ModeRequest::Auto || e.code() != ErrorCode::NoCertificate) throw;
    rep.warnings.push_back("projected dimension unknown; Ledrappier-Young dimension omitted");
  }
  if (rep.projected) {
    for (const auto& w : rep.projected->warnings) rep.warnings.push_back(w);
    rep.ly_dim = ly_dimension(rep.thermo, *rep.projected);
    if (!(*rep.ly_dim > 0.0 && *rep.ly_dim <= 2.0)) rep.warnings.push_back("ly_dim outside (0, 2]");
  }
  return rep;
}

}  // namespace kaenmaki
