#pragma once

#include <cstdio>
#include <optional>
#include <ostream>
#include <string>

#include "json.hpp"
#include "kaenmaki/dimension.hpp"

namespace kaenmaki {

namespace detail {

template <class T>
nlohmann::json or_null(const std::optional<T>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

inline std::string fmt_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace detail

inline nlohmann::json to_json(const DimensionReport& r) {
  nlohmann::json j;
  j["s"] = r.thermo.s;
  j["pressure"] = r.thermo.pressure;
  j["entropy"] = r.thermo.entropy;
  j["chi1"] = r.thermo.chi1;
  j["chi2"] = r.thermo.chi2;
  j["affinity_dim"] = r.thermo.affinity_dim;
  j["gibbs_lower"] = r.thermo.gibbs_lower;
  j["gibbs_upper"] = r.thermo.gibbs_upper;
  if (r.projected) {
    j["projected_dim"] = r.projected->value;
    j["projected_mode"] = to_string(r.projected->mode);
  } else {
    j["projected_dim"] = nullptr;
    j["projected_mode"] = nullptr;
  }
  j["ly_dim"] = detail::or_null(r.ly_dim);
  j["strong_separation"] = r.separation.strong_separation;
  j["transversality"] = r.transversality.holds;
  j["warnings"] = r.warnings;
  return j;
}

inline void write_text(const DimensionReport& r, std::ostream& out) {
  using detail::fmt_real;
  out << "s: " << fmt_real(r.thermo.s) << '\n'
      << "pressure: " << fmt_real(r.thermo.pressure) << '\n'
      << "entropy: " << fmt_real(r.thermo.entropy) << '\n'
      << "chi1: " << fmt_real(r.thermo.chi1) << '\n'
      << "chi2: " << fmt_real(r.thermo.chi2) << '\n'
      << "affinity_dim: " << fmt_real(r.thermo.affinity_dim) << '\n'
      << "gibbs_envelope: [" << fmt_real(r.thermo.gibbs_lower) << ", " << fmt_real(r.thermo.gibbs_upper) << "]\n";
  if (r.projected)
    out << "projected_dim: " << fmt_real(r.projected->value) << " (" << to_string(r.projected->mode) << ")\n";
  else
    out << "projected_dim: unknown\n";
  out << "ly_dim: " << (r.ly_dim ? fmt_real(*r.ly_dim) : std::string("unknown")) << '\n'
      << "strong_separation: " << (r.separation.strong_separation ? "true" : "false") << '\n'
      << "transversality: " << (r.transversality.holds ? "true" : "false") << '\n';
  for (const auto& w : r.warnings) out << "warning: " << w << '\n';
}

}  // namespace kaenmaki
