#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "kaenmaki/dimension.hpp"
#include "kaenmaki/ifs.hpp"
#include "kaenmaki/parallel.hpp"
#include "kaenmaki/report.hpp"
#include "kaenmaki/sampling.hpp"
#include "kaenmaki/thermo.hpp"
#include "kaenmaki/verify.hpp"

namespace kaenmaki::cli {

enum class Output { Text, Json };

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitUsage = 2;

struct RunConfig {
  std::string spec_path = "-";
  std::optional<double> s;
  std::uint64_t seed = 0;
  Output output = Output::Text;
  std::optional<std::string> out_path;
  std::optional<int> threads;

  std::size_t count = 100'000;
  int depth = 60;
  std::string radii = "0.001953125:0.0625:6";
  int px = 512;
  std::size_t centers = 20;
  std::string mode = "auto";
  std::optional<double> value;
  std::string word;
  int t = 1;
  int max_depth = 8;
  bool corrupt_potential = false;
};

/// Streams a command talks to; `in` backs `--spec -`.
struct Io {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
};

namespace detail {

inline IfsSpec load(const RunConfig& cfg, Io& io) {
  if (cfg.spec_path == "-") return parse_ifs(io.in);
  return load_ifs(cfg.spec_path);
}

/// Writes `text` to --out when given, else to the output stream.
inline void emit(const RunConfig& cfg, Io& io, const std::string& text) {
  if (!cfg.out_path) {
    io.out << text;
    return;
  }
  std::ofstream f(*cfg.out_path, std::ios::binary);
  if (!f) fail(ErrorCode::IoFailure, "cannot write " + *cfg.out_path);
  f << text;
  if (!f) fail(ErrorCode::IoFailure, "short write to " + *cfg.out_path);
}

inline std::string num(double v) { return kaenmaki::detail::fmt_real(v); }

inline std::vector<double> parse_radii(const std::string& text) {
  double lo = 0.0, hi = 0.0;
  int k = 0;
  char tail = 0;
  if (std::sscanf(text.c_str(), "%lf:%lf:%d%c", &lo, &hi, &k, &tail) != 3)
    fail(ErrorCode::MalformedConfig, "radii must look like rmin:rmax:k, got '" + text + "'");
  return geometric_radii(lo, hi, k);
}

inline double resolve_s(const RunConfig& cfg, const IfsSpec& spec) {
  if (cfg.s) {
    check_s(*cfg.s);
    return *cfg.s;
  }
  if (spec.s()) return *spec.s();
  return default_s(affinity_dimension(spec));
}

inline SampleSet draw_samples(const RunConfig& cfg, const IfsSpec& spec) {
  return sample_symbolic(spec, resolve_s(cfg, spec), cfg.count, cfg.depth, cfg.seed);
}

}  // namespace detail

inline int cmd_validate(const RunConfig& cfg, Io& io) {
  const auto spec = detail::load(cfg, io);
  const auto sep = check_strong_separation(spec);
  const auto tr = check_transversality(spec);
  const TransitionMatrix a(spec);
  const bool mixing = check_mixing(a);
  const bool ssc = check_projection_ssc(line_system(spec), a);
  if (cfg.output == Output::Json) {
    nlohmann::json j;
    j["d"] = spec.d();
    j["l"] = spec.l();
    j["mixing"] = mixing;
    j["strong_separation"] = sep.strong_separation;
    j["min_gap"] = sep.min_gap;
    j["transversality"] = tr.holds;
    j["transversality_norm_sufficient"] = tr.norm_sufficient;
    j["u"] = tr.u;
    j["v"] = tr.v;
    j["projection_ssc"] = ssc;
    j["warnings"] = spec.warnings();
    detail::emit(cfg, io, j.dump(2) + "\n");
    return kExitOk;
  }
  std::ostringstream o;
  o << "d: " << spec.d() << "\nl: " << spec.l() << "\nmixing: " << (mixing ? "true" : "false")
    << "\nstrong_separation: " << (sep.strong_separation ? "true" : "false") << "\nmin_gap: " << detail::num(sep.min_gap)
    << '\n';
  if (sep.failing_pair) o << "overlapping_pair: " << sep.failing_pair->first << ',' << sep.failing_pair->second << '\n';
  o << "transversality: " << (tr.holds ? "true" : "false")
    << "\ntransversality_norm_sufficient: " << (tr.norm_sufficient ? "true" : "false")
    << "\nprojection_ssc: " << (ssc ? "true" : "false") << '\n';
  for (const auto& w : spec.warnings()) o << "warning: " << w << '\n';
  detail::emit(cfg, io, o.str());
  return kExitOk;
}

inline int cmd_report(const RunConfig& cfg, Io& io) {
  const auto spec = detail::load(cfg, io);
  DimensionOptions opt;
  opt.s = cfg.s ? cfg.s : spec.s();
  opt.mode = parse_mode_request(cfg.mode);
  opt.user_value = cfg.value;
  opt.mc.count = cfg.count;
  opt.mc.depth = cfg.depth;
  opt.mc.seed = cfg.seed;
  opt.mc.centers = cfg.centers;
  const auto rep = dimension_report(spec, opt);
  if (cfg.output == Output::Json) {
    detail::emit(cfg, io, to_json(rep).dump(2) + "\n");
  } else {
    std::ostringstream o;
    write_text(rep, o);
    detail::emit(cfg, io, o.str());
  }
  return kExitOk;
}

inline int cmd_pressure(const RunConfig& cfg, Io& io) {
  const auto spec = detail::load(cfg, io);
  const double s = detail::resolve_s(cfg, spec);
  if (cfg.t != 1 && cfg.t != 2) fail(ErrorCode::MalformedConfig, "--t must be 1 or 2");
  const auto g = gibbs_markov(spec, s, cfg.t == 1 ? Branch::One : Branch::Two);
  if (cfg.output == Output::Json) {
    nlohmann::json j{{"s", s},
                     {"t", cfg.t},
                     {"pressure", g.log_pressure()},
                     {"lambda", g.lambda()},
                     {"iterations", g.iterations()},
                     {"residual", g.residual()}};
    detail::emit(cfg, io, j.dump(2) + "\n");
  } else {
    detail::emit(cfg, io, "pressure: " + detail::num(g.log_pressure()) + "\n");
  }
  return kExitOk;
}

inline int cmd_affinity(const RunConfig& cfg, Io& io) {
  const auto spec = detail::load(cfg, io);
  const auto res = affinity_dimension(spec);
  if (cfg.output == Output::Json) {
    nlohmann::json j{{"affinity_dim", res.value},
                     {"clamped", res.clamped},
                     {"pressure_at_value", res.pressure_at_value},
                     {"bracket_width", res.bracket_width},
                     {"monotone_trace", res.monotone_trace}};
    detail::emit(cfg, io, j.dump(2) + "\n");
  } else {
    detail::emit(cfg, io,
                 "affinity_dim: " + detail::num(res.value) + "\nclamped: " + (res.clamped ? "true" : "false") + "\n");
  }
  return kExitOk;
}

inline int cmd_measure(const RunConfig& cfg, Io& io) {
  const auto spec = detail::load(cfg, io);
  const double s = detail::resolve_s(cfg, spec);
  const Word w = parse_word(cfg.word);
  const KaenmakiMeasure nu(spec, s);
  const double log_nu = nu.log_cylinder(w);
  const double log_phi = PhiChecker(spec, s).log_phi(w);
  const double ratio = std::exp(log_nu - log_phi + static_cast<double>(w.size()) * nu.log_pressure());
  if (cfg.output == Output::Json) {
    nlohmann::json j{{"word", format_word(w.symbols)}, {"s", s}, {"nu", std::exp(log_nu)},
                     {"phi", std::exp(log_phi)}, {"gibbs_ratio", ratio}};
    detail::emit(cfg, io, j.dump(2) + "\n");
  } else {
    detail::emit(cfg, io,
                 "nu: " + detail::num(std::exp(log_nu)) + "\nphi: " + detail::num(std::exp(log_phi)) +
                     "\ngibbs_ratio: " + detail::num(ratio) + "\n");
  }
  return kExitOk;
}

inline int cmd_verify(const RunConfig& cfg, Io& io) {
  const auto spec = detail::load(cfg, io);
  VerifyOptions opt;
  opt.max_depth = cfg.max_depth;
  opt.corrupt_potential = cfg.corrupt_potential;
  check_enumeration(spec.d(), opt.max_depth);
  const auto results = run_verify(spec, detail::resolve_s(cfg, spec), opt);
  bool ok = true;
  for (const auto& r : results) ok = ok && r.passed;
  if (cfg.output == Output::Json) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : results)
      arr.push_back({{"check", r.name}, {"passed", r.passed}, {"skipped", r.skipped}, {"detail", r.detail}});
    detail::emit(cfg, io, nlohmann::json{{"checks", arr}, {"passed", ok}}.dump(2) + "\n");
  } else {
    std::ostringstream o;
    for (const auto& r : results) {
      char line[64];
      std::snprintf(line, sizeof line, "%-5s %-24s ", r.skipped ? "SKIP" : (r.passed ? "PASS" : "FAIL"),
                    r.name.c_str());
      o << line << r.detail << '\n';
    }
    detail::emit(cfg, io, o.str());
  }
  return ok ? kExitOk : kExitFailed;
}

inline int cmd_sample(const RunConfig& cfg, Io& io) {
  const auto spec = detail::load(cfg, io);
  const auto samples = detail::draw_samples(cfg, spec);
  std::ostringstream o;
  write_csv(samples, spec.d(), o);
  detail::emit(cfg, io, o.str());
  return kExitOk;
}

inline int cmd_render(const RunConfig& cfg, Io& io) {
  const auto spec = detail::load(cfg, io);
  const auto samples = detail::draw_samples(cfg, spec);
  detail::emit(cfg, io, render_pgm(samples.points, cfg.px));
  return kExitOk;
}

inline int cmd_estimate(const RunConfig& cfg, Io& io) {
  const auto spec = detail::load(cfg, io);
  const auto radii = detail::parse_radii(cfg.radii);
  const auto samples = detail::draw_samples(cfg, spec);
  const auto est = estimate_local_dimension(samples, pick_centers(samples, cfg.centers), radii);
  if (cfg.output == Output::Json) {
    detail::emit(cfg, io,
                 nlohmann::json{{"slope", est.slope}, {"stderr", est.std_error}, {"per_center", est.per_center}}
                         .dump(2) +
                     "\n");
  } else {
    detail::emit(cfg, io, "slope: " + detail::num(est.slope) + "\nstderr: " + detail::num(est.std_error) + "\n");
  }
  return kExitOk;
}

inline int cmd_project_dim(const RunConfig& cfg, Io& io) {
  const auto spec = detail::load(cfg, io);
  MonteCarloOptions mc;
  mc.count = cfg.count;
  mc.depth = cfg.depth;
  mc.seed = cfg.seed;
  mc.centers = cfg.centers;
  if (cfg.radii != RunConfig{}.radii) mc.radii = detail::parse_radii(cfg.radii);
  const auto p =
      projected_dimension(spec, detail::resolve_s(cfg, spec), parse_mode_request(cfg.mode), cfg.value, mc);
  if (cfg.output == Output::Json) {
    nlohmann::json j{{"projected_dim", p.value},
                     {"projected_mode", to_string(p.mode)},
                     {"ssc_certified", p.ssc_certified},
                     {"stderr", p.std_error},
                     {"warnings", p.warnings}};
    detail::emit(cfg, io, j.dump(2) + "\n");
  } else {
    std::ostringstream o;
    o << "projected_dim: " << detail::num(p.value) << "\nprojected_mode: " << to_string(p.mode)
      << "\nssc_certified: " << (p.ssc_certified ? "true" : "false") << '\n';
    if (p.mode == ProjectedMode::MonteCarlo) o << "stderr: " << detail::num(p.std_error) << '\n';
    for (const auto& w : p.warnings) o << "warning: " << w << '\n';
    detail::emit(cfg, io, o.str());
  }
  return kExitOk;
}

/// Parses argv (args[0] is the program name) and runs one subcommand.
inline int run(const std::vector<std::string>& args, Io io) {
  CLI::App app{"Dimension theory toolkit for diagonal/anti-diagonal self-affine sets", "kaenmaki"};
  app.fallthrough();
  app.require_subcommand(1);

  RunConfig cfg;
  std::string output = "text";
  app.add_option("--spec", cfg.spec_path, "IFS JSON file, or - for standard input");
  app.add_option("--s", cfg.s, "singular value function exponent in (0, 2); default: affinity dimension");
  app.add_option("--seed", cfg.seed, "random seed");
  app.add_option("--output", output, "text or json")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--out", cfg.out_path, "write the result to this file");
  app.add_option("--threads", cfg.threads, "worker threads (fallback: KAENMAKI_THREADS)");
  app.add_option("--count", cfg.count, "number of samples");
  app.add_option("--depth", cfg.depth, "symbolic depth of each sample");
  app.add_option("--radii", cfg.radii, "rmin:rmax:k geometric radii");
  app.add_option("--px", cfg.px, "image side in pixels");
  app.add_option("--centers", cfg.centers, "number of estimator centers");
  app.add_option("--mode", cfg.mode, "projected dimension mode: auto, ssc, expected, user, mc");
  app.add_option("--value", cfg.value, "user-supplied projected dimension");

  using Command = std::function<int(const RunConfig&, Io&)>;
  Command chosen;
  auto sub = [&](const char* name, const char* help, Command cmd) {
    auto* s = app.add_subcommand(name, help);
    s->callback([&chosen, cmd] { chosen = cmd; });
    return s;
  };
  sub("validate", "check a spec and print its certificates", cmd_validate);
  sub("report", "full dimension report", cmd_report);
  sub("pressure", "pressure of one branch potential", cmd_pressure)
      ->add_option("--t", cfg.t, "potential branch, 1 or 2")
      ->check(CLI::IsMember({1, 2}));
  sub("affinity", "affinity dimension", cmd_affinity);
  sub("measure", "cylinder mass of a word", cmd_measure)->add_option("--word", cfg.word, "word like 1,2,2")->required();
  auto* verify = sub("verify", "run the lemma suite", cmd_verify);
  verify->add_option("--max-depth", cfg.max_depth, "enumeration depth");
  verify->add_flag("--corrupt-potential", cfg.corrupt_potential)->group("");
  sub("sample", "sample points as CSV", cmd_sample);
  sub("render", "render sampled points as PGM", cmd_render);
  sub("estimate", "local dimension slope", cmd_estimate);
  sub("project-dim", "dimension of the projected measure", cmd_project_dim);

  std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, io.out, io.err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  cfg.output = output == "json" ? Output::Json : Output::Text;

  set_thread_count(cfg.threads.value_or(0));
  try {
    return chosen(cfg, io);
  } catch (const Error& e) {
    io.err << e.what() << '\n';
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    io.err << "MalformedConfig: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace kaenmaki::cli
