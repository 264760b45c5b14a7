#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "uecert/interval.hpp"

namespace uecert {

inline constexpr const char* kToolVersion = "uecert 0.1.0";

enum class CertStatus { Certified, CertifiedOnGrid, Inconclusive, Refuted };

inline const char* to_string(CertStatus s) {
  switch (s) {
    case CertStatus::Certified: return "CERTIFIED";
    case CertStatus::CertifiedOnGrid: return "CERTIFIED-ON-GRID";
    case CertStatus::Inconclusive: return "INCONCLUSIVE";
    case CertStatus::Refuted: return "REFUTED";
  }
  return "UNKNOWN";
}

// Machine-checkable record of a bound claim.
//
//   claim    -- what kind of bound ("scal-lower-bound", "bilipschitz", ...)
//   subject  -- human-readable description of the object the claim is about
//   params   -- construction / run parameters, JSON object
//   domain   -- subdomain the claim covers (absent for global claims)
//   target   -- the bound that was requested
//   achieved -- two-sided evidence: [proven bound, best witnessed value]
//   method   -- "interval-bisection", "grid+padding" (both can certify),
//               or "grid-only" (evidence only, CERTIFIED-ON-GRID at best)
struct Certificate {
  std::string claim;
  std::string subject;
  nlohmann::json params = nlohmann::json::object();
  std::optional<Interval> domain;
  double target = 0.0;
  Interval achieved{0.0, 0.0};
  std::string method;
  int depth = 0;
  std::int64_t samples = 0;
  CertStatus status = CertStatus::Inconclusive;

  bool certified() const {
    return status == CertStatus::Certified ||
           status == CertStatus::CertifiedOnGrid;
  }
};

// Round to 12 significant digits before serializing so reruns produce
// byte-identical files.
inline double snap_for_output(double x) {
  if (!std::isfinite(x)) return x;
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return std::strtod(buf, nullptr);
}

inline nlohmann::json to_json(const Interval& iv) {
  return nlohmann::json{{"lo", snap_for_output(iv.lo)},
                        {"hi", snap_for_output(iv.hi)}};
}

inline nlohmann::json to_json(const Certificate& c) {
  nlohmann::json j{
      {"claim", c.claim},
      {"subject", c.subject},
      {"params", c.params},
      {"target", snap_for_output(c.target)},
      {"achieved", to_json(c.achieved)},
      {"method", c.method},
      {"depth", c.depth},
      {"samples", c.samples},
      {"status", to_string(c.status)},
      {"tool_version", kToolVersion},
  };
  j["domain"] = c.domain ? to_json(*c.domain) : nlohmann::json();
  return j;
}

}  // namespace uecert
