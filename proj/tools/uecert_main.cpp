// uecert: construct singular warped-product metrics and certify their
// curvature, bilipschitz, Sobolev, and Green-function properties.
//
// Subcommands
//   construct     build a metric, emit parameter JSON + profile/scal tables
//   certify       emit certificates (scal positivity, cap chain, bilipschitz,
//                 Sobolev membership) as JSON
//   blowup        solve the radial Green function, check the conformal
//                 identity, positivity, and completeness of the blow-up
//   oracle-check  run metric families with known curvature against the
//                 finite-difference oracle
//
// Exit codes: 0 certified/passed, 2 invalid input or infeasible construction,
// 3 inconclusive evidence, 4 refuted.  Outputs are deterministic: fixed
// 12-significant-digit formatting, no timestamps, sorted JSON keys.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "uecert/certificate.hpp"
#include "uecert/certify.hpp"
#include "uecert/construction.hpp"
#include "uecert/curvature_oracle.hpp"
#include "uecert/errors.hpp"
#include "uecert/green.hpp"
#include "uecert/interval.hpp"
#include "uecert/sphere_metrics.hpp"
#include "uecert/warped_metric.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace uecert;

namespace {

// ---------------------------------------------------------------------------
// formatting and small utilities

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string fmt(const Interval& a) {
  return "[" + fmt(snap_for_output(a.lo)) + ", " + fmt(snap_for_output(a.hi)) +
         "]";
}

void write_text(const fs::path& p, const std::string& body) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot open output file " + p.string());
  out << body;
  if (!out.flush()) throw ConfigError("cannot write output file " + p.string());
}

void write_json(const fs::path& p, const json& j) {
  write_text(p, j.dump(2) + "\n");
}

int threads_from_env() {
  const char* raw = std::getenv("UECERT_THREADS");
  if (raw == nullptr || *raw == '\0') return 1;
  const std::string s(raw);
  if (s.size() > 4 ||
      !std::all_of(s.begin(), s.end(),
                   [](unsigned char c) { return std::isdigit(c); }))
    throw ConfigError("UECERT_THREADS must be a small positive integer, got '" +
                      s + "'");
  const int k = std::stoi(s);
  if (k < 1)
    throw ConfigError("UECERT_THREADS must be a small positive integer, got '" +
                      s + "'");
  return k;
}

double parse_number(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ConfigError(what + ": '" + s + "' is not a number");
  }
  if (used != s.size())
    throw ConfigError(what + ": '" + s + "' is not a number");
  if (!std::isfinite(v)) throw ConfigError(what + " must be finite");
  return v;
}

// "auto" (case-sensitive) or a finite number
std::optional<double> parse_auto(const std::string& s, const std::string& what) {
  if (s == "auto") return std::nullopt;
  return parse_number(s, what);
}

std::vector<double> parse_list(const std::string& s, const std::string& what) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const std::size_t comma = std::min(s.find(',', pos), s.size());
    const std::string item = s.substr(pos, comma - pos);
    if (item.empty()) throw ConfigError(what + ": empty entry in '" + s + "'");
    out.push_back(parse_number(item, what));
    pos = comma + 1;
  }
  if (out.empty()) throw ConfigError(what + " must not be empty");
  return out;
}

// map a certificate status to the process exit code
int exit_of(CertStatus s) {
  switch (s) {
    case CertStatus::Certified:
    case CertStatus::CertifiedOnGrid: return 0;
    case CertStatus::Inconclusive: return 3;
    case CertStatus::Refuted: return 4;
  }
  return 3;
}

// ---------------------------------------------------------------------------
// metric selection shared by construct / certify / blowup

struct BuildSpec {
  std::string kind = "conical-cap";
  int n = 8;
  std::string sphere;  // empty -> per-kind default
  std::string R = "auto";
  std::string eps = "auto";
  std::string lambda = "auto";
  double T = 1.2;  // upper end of the plain cone
  std::string kernel = "quintic";
};

SphereMetric parse_sphere(const std::string& spec, int n) {
  const int m = n - 1;
  const std::size_t colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  const std::string args =
      colon == std::string::npos ? std::string() : spec.substr(colon + 1);

  if (head == "round") {
    const double r = args.empty() ? 1.0 : parse_number(args, "--sphere round:r");
    if (r <= 0.0) throw ConfigError("--sphere round:r needs r > 0");
    return SphereMetric::round(m, r);
  }
  if (head == "scaled") {
    if (args.empty()) throw ConfigError("--sphere scaled:c needs a scale");
    const double c = parse_number(args, "--sphere scaled:c");
    if (c <= 0.0) throw ConfigError("--sphere scaled:c needs c > 0");
    return SphereMetric::scaled_round(m, c);
  }
  if (head == "round-scaled") {
    // unit scalar curvature: scal(c h0) = m(m-1)/c with c = (n-1)(n-2)
    return SphereMetric::scaled_round(m, double(n - 1) * double(n - 2));
  }
  if (head == "berger") {
    if (m != 3)
      throw ConfigError("--sphere berger:a,b needs n = 4 (the fiber is S^3)");
    const auto ab = parse_list(args, "--sphere berger:a,b");
    if (ab.size() != 2) throw ConfigError("--sphere berger:a,b needs two values");
    if (ab[0] <= 0.0 || ab[1] <= 0.0)
      throw ConfigError("--sphere berger:a,b needs a, b > 0");
    return SphereMetric::berger3(ab[0], ab[1]);
  }
  if (head == "twist") {
    const auto v = parse_list(args.empty() ? "0.15" : args,
                              "--sphere twist:amp,s0,ramp");
    if (v.size() > 3)
      throw ConfigError("--sphere twist takes at most amp,s0,ramp");
    const double amp = v[0];
    const double s0 = v.size() > 1 ? v[1] : 0.6;
    const double ramp = v.size() > 2 ? v[2] : 0.5;
    return apply_diffeo(SphereDiffeo::latitude_twist(m, amp, s0, ramp),
                        SphereMetric::round(m));
  }
  throw ConfigError(
      "unknown --sphere '" + spec +
      "' (use round[:r], scaled:c, round-scaled, berger:a,b, twist:amp[,s0[,ramp]])");
}

TransitionKernel parse_kernel(const std::string& s) {
  if (s == "quintic") return TransitionKernel::Quintic;
  if (s == "mollified") return TransitionKernel::Mollified;
  throw ConfigError("unknown --kernel '" + s + "' (quintic or mollified)");
}

std::string default_sphere(const std::string& kind) {
  if (kind == "rn") return "round-scaled";
  return "round:1";
}

// Build the metric and record its parameters.  Cap parameters are read back
// from the assembled profile (tip slope and transition knots), not recomputed
// from the default policy, so the JSON always reflects the artifact itself.
WarpedMetric build_metric(const BuildSpec& b, int threads, json& params) {
  const std::string spec = b.sphere.empty() ? default_sphere(b.kind) : b.sphere;
  params["kind"] = b.kind;
  params["n"] = b.n;
  params["threads"] = threads;
  params["tool_version"] = kToolVersion;

  if (b.kind == "euclid") {
    const SphereMetric h = SphereMetric::round(b.n - 1);
    if (b.T <= 0.0) throw ConfigError("--T must be positive");
    WarpedMetric g = make_warped(
        affine_profile(Interval(0.0, b.T), 0.0, 1.0, "t"), h,
        "euclid-" + std::to_string(b.n));
    params["fiber"] = h.describe();
    params["T"] = snap_for_output(b.T);
    params["domain"] = to_json(g.domain());
    params["name"] = g.name;
    return g;
  }

  const SphereMetric h = parse_sphere(spec, b.n);
  params["fiber"] = h.describe();

  if (b.kind == "cone") {
    if (b.T <= 0.0) throw ConfigError("--T must be positive");
    WarpedMetric g =
        make_warped(affine_profile(Interval(0.0, b.T), 0.0, 1.0, "t"), h,
                    "cone-" + std::to_string(b.n) + "-" + h.describe());
    params["T"] = snap_for_output(b.T);
    params["domain"] = to_json(g.domain());
    params["name"] = g.name;
    return g;
  }

  if (b.kind == "rn") {
    WarpedMetric g = build_rn_counterexample(b.n, h);
    const double lam = 1.0 / g.f.eval(Interval::point(g.domain().hi)).d1.mid();
    params["lambda"] = snap_for_output(lam);
    params["scal_t2"] = snap_for_output(0.5 * lam * lam);
    params["mean_curvature"] = snap_for_output((b.n - 1.0) / lam);
    params["domain"] = to_json(g.domain());
    params["name"] = g.name;
    return g;
  }

  if (b.kind == "conical-cap") {
    const auto Rv = parse_auto(b.R, "--R");
    const auto ev = parse_auto(b.eps, "--eps");
    const auto lv = parse_auto(b.lambda, "--lambda");
    const TransitionKernel k = parse_kernel(b.kernel);
    WarpedMetric g = assemble_conical_cap(b.n, h, Rv.value_or(0.0),
                                          ev.value_or(0.0), lv.value_or(0.0), k);
    const Interval dom = g.domain();
    const double R = -dom.lo;
    const std::vector<double> knots = g.f.knots();
    if (knots.size() != 2)
      throw MetricError("cap profile has an unexpected piece structure");
    const double eps = -knots.back();
    const double lam = 1.0 / g.f.eval(Interval::point(dom.lo)).d1.mid();
    const double C = scal_range(h).lo;
    params["C"] = snap_for_output(C);
    params["R"] = snap_for_output(R);
    params["eps"] = snap_for_output(eps);
    params["lambda"] = snap_for_output(lam);
    params["kernel"] = b.kernel;
    params["min_feasible_length"] =
        snap_for_output(min_feasible_length(profile_bounds(b.n, C), k));
    params["domain"] = to_json(dom);
    params["name"] = g.name;
    return g;
  }

  throw ConfigError("unknown --kind '" + b.kind +
                    "' (conical-cap, rn, cone, euclid)");
}

void add_build_flags(CLI::App* sub, BuildSpec& b, const std::string& default_kind,
                     bool cap_flags = true) {
  b.kind = default_kind;
  std::vector<std::string> kinds{"rn", "cone", "euclid"};
  if (cap_flags) kinds.insert(kinds.begin(), "conical-cap");
  sub->add_option("--kind", b.kind, "metric kind")
      ->check(CLI::IsMember(kinds))
      ->capture_default_str();
  sub->add_option("--n", b.n, "total dimension")
      ->check(CLI::Range(3, 16))
      ->capture_default_str();
  sub->add_option("--sphere", b.sphere,
                  "fiber metric: round[:r], scaled:c, round-scaled, "
                  "berger:a,b, twist:amp[,s0[,ramp]]");
  sub->add_option("--T", b.T, "upper end of the plain cone")
      ->capture_default_str();
  if (!cap_flags) return;
  sub->add_option("--R", b.R, "cap depth, or auto")->capture_default_str();
  sub->add_option("--eps", b.eps, "cap transition margin, or auto")
      ->capture_default_str();
  sub->add_option("--lambda", b.lambda, "cap cone slope 1/lambda, or auto")
      ->capture_default_str();
  sub->add_option("--kernel", b.kernel, "cap transition kernel")
      ->check(CLI::IsMember({"quintic", "mollified"}))
      ->capture_default_str();
}

// ---------------------------------------------------------------------------
// construct

struct ConstructArgs {
  BuildSpec b;
  int grid = 200;
};

int run_construct(const ConstructArgs& a, const fs::path& out, int threads) {
  json params;
  const WarpedMetric g = build_metric(a.b, threads, params);
  params["grid"] = a.grid;

  const Interval dom = g.domain();
  const double lo = dom.lo, hi = dom.hi;

  std::string profile_csv = "t,f_lo,f_hi,d1_lo,d1_hi,d2_lo,d2_hi\n";
  std::string scal_csv;
  const bool cap = a.b.kind == "conical-cap";
  const bool rn = a.b.kind == "rn";
  if (cap)
    scal_csv = "t,scal_lo,scal_hi,half_C\n";
  else if (rn)
    scal_csv = "t,scal_lo,scal_hi,scal_t2_lo,scal_t2_hi\n";
  else
    scal_csv = "t,scal_lo,scal_hi\n";
  const double half_C = cap ? 0.5 * params["C"].get<double>() : 0.0;

  for (int i = 0; i <= a.grid; ++i) {
    const double t = lo + (hi - lo) * double(i) / double(a.grid);
    const Interval ti = Interval::point(t);
    const ProfileValues pv = g.f.eval(ti);
    profile_csv += fmt(snap_for_output(t));
    for (const Interval* v : {&pv.v, &pv.d1, &pv.d2}) {
      profile_csv += "," + fmt(snap_for_output(v->lo)) + "," +
                     fmt(snap_for_output(v->hi));
    }
    profile_csv += "\n";
    if (!pv.v.strictly_positive()) continue;  // scal undefined where f = 0
    const Interval s = scal_warped(g, ti);
    scal_csv += fmt(snap_for_output(t)) + "," + fmt(snap_for_output(s.lo)) +
                "," + fmt(snap_for_output(s.hi));
    if (cap) scal_csv += "," + fmt(snap_for_output(half_C));
    if (rn) {
      const Interval st2 = s * sqr_i(ti);
      scal_csv += "," + fmt(snap_for_output(st2.lo)) + "," +
                  fmt(snap_for_output(st2.hi));
    }
    scal_csv += "\n";
  }

  write_json(out / "params.json", params);
  write_text(out / "profile.csv", profile_csv);
  write_text(out / "scal.csv", scal_csv);

  std::cout << "constructed " << g.name << " on " << fmt(dom) << "\n";
  if (cap)
    std::cout << "R " << fmt(params["R"].get<double>()) << ", eps "
              << fmt(params["eps"].get<double>()) << ", lambda "
              << fmt(params["lambda"].get<double>()) << ", C "
              << fmt(params["C"].get<double>()) << "\n";
  if (rn)
    std::cout << "lambda " << fmt(params["lambda"].get<double>())
              << ", scal*t^2 " << fmt(params["scal_t2"].get<double>())
              << ", slice mean curvature "
              << fmt(params["mean_curvature"].get<double>()) << "\n";
  std::cout << "wrote params.json, profile.csv, scal.csv\n";
  return 0;
}

// ---------------------------------------------------------------------------
// certify

struct CertifyArgs {
  BuildSpec b;
  std::vector<std::string> claims{"scal"};
  std::string target = "auto";
  int levels = 20;
  int depth = 26;
  long long budget = 50000;
  std::string p_list = "6,7,7.9,9";
  int annuli = 40;
  int directions = 16;
  long long samples = 0;
};

int run_certify(const CertifyArgs& a, const fs::path& out, int threads) {
  json params;
  const WarpedMetric g = build_metric(a.b, threads, params);

  json report;
  report["params"] = params;
  report["subject"] = g.name;
  report["threads"] = threads;
  report["tool_version"] = kToolVersion;
  json certs = json::array();
  json sobolev = json::array();
  int code = 0;

  auto take = [&](const Certificate& c) {
    certs.push_back(to_json(c));
    code = std::max(code, exit_of(c.status));
    std::cout << c.claim << " " << c.subject << ": " << to_string(c.status)
              << " (target " << fmt(snap_for_output(c.target)) << ", achieved "
              << fmt(c.achieved) << ")\n";
  };

  for (const std::string& claim : a.claims) {
    if (claim == "scal") {
      double target = 0.0;
      if (const auto t = parse_auto(a.target, "--target"))
        target = *t;
      else if (a.b.kind == "conical-cap")
        target = 0.5 * params["C"].get<double>();
      ExhaustOptions eo;
      eo.levels = a.levels;
      eo.bisection.max_depth = a.depth;
      eo.bisection.leaf_budget = a.budget;
      take(certify_scal_positive(g, g.domain(), target, eo));
    } else if (claim == "chain") {
      if (a.b.kind != "conical-cap")
        throw ConfigError("the chain claim applies to conical caps only");
      for (const Certificate& c : certify_cap_chain(g)) take(c);
    } else if (claim == "bilipschitz") {
      take(bilipschitz_constant(g, a.samples));
    } else if (claim == "sobolev") {
      SobolevOptions so;
      so.annuli = a.annuli;
      so.directions = a.directions;
      const SobolevTable table = sobolev_table(g, so);
      for (const double p : parse_list(a.p_list, "--p")) {
        const SobolevEstimate est = sobolev_norm(table, p);
        const char* verdict = est.finite ? "finite"
                              : est.indeterminate ? "indeterminate"
                                                  : "divergent-trend";
        json e;
        e["p"] = snap_for_output(p);
        e["norm"] = snap_for_output(est.norm_value);
        e["finite"] = est.finite;
        e["indeterminate"] = est.indeterminate;
        e["tail_ratio"] = snap_for_output(est.tail_ratio);
        e["verdict"] = verdict;
        sobolev.push_back(e);
        if (est.indeterminate) code = std::max(code, 3);
        std::cout << "sobolev p=" << fmt(p) << " " << g.name << ": " << verdict
                  << " (norm " << fmt(snap_for_output(est.norm_value))
                  << ", tail ratio " << fmt(snap_for_output(est.tail_ratio))
                  << ")\n";
      }
    } else {
      throw ConfigError("unknown --claim '" + claim +
                        "' (scal, chain, bilipschitz, sobolev)");
    }
  }

  report["certificates"] = certs;
  if (!sobolev.empty()) report["sobolev"] = sobolev;
  write_json(out / "certificates.json", report);
  std::cout << "wrote certificates.json\n";
  return code;
}

// ---------------------------------------------------------------------------
// blowup

struct BlowupArgs {
  BuildSpec b;
  double t1 = 0.01;
  int per_decade = 40;
  std::string sigma = "auto";
  std::string eps = "0.01,0.1,1,10";
  std::string normalization = "dirac";
  bool completeness = false;
};

int run_blowup(const BlowupArgs& a, const fs::path& out, int threads) {
  json params;
  const WarpedMetric g = build_metric(a.b, threads, params);

  const double T = g.domain().hi;
  if (!(a.t1 > 0.0) || !(T > a.t1))
    throw ConfigError("need 0 < --t1 < the domain end (set --T for cones)");
  if (a.per_decade < 4) throw ConfigError("--per-decade must be at least 4");
  const std::vector<double> grid = log_grid(a.t1, T, a.per_decade);

  double sigma = 0.0;
  if (const auto sv = parse_auto(a.sigma, "--sigma")) {
    if (*sv < 0.0) throw ConfigError("--sigma must be nonnegative");
    sigma = *sv;
  } else {
    sigma = default_sigma(g, grid);
  }

  GreenOptions go;
  if (a.normalization == "dirac")
    go.normalization = GreenNormalization::Dirac;
  else if (a.normalization == "unit")
    go.normalization = GreenNormalization::Unit;
  else
    throw ConfigError("unknown --normalization (dirac or unit)");

  const RadialGreenFunction G =
      solve_green(g, [sigma](double) { return sigma; }, grid, go);
  const Certificate bound = verify_green_bounds(G);
  int code = exit_of(bound.status);

  std::string green_csv = "t,G,G_d1,G_d2\n";
  for (std::size_t k = 0; k < grid.size(); ++k) {
    green_csv += fmt(snap_for_output(grid[k])) + "," +
                 fmt(snap_for_output(G.values[k])) + "," +
                 fmt(snap_for_output(G.d1[k])) + "," +
                 fmt(snap_for_output(G.d2[k])) + "\n";
  }
  write_text(out / "green.csv", green_csv);

  json report;
  report["kind"] = a.b.kind;
  report["model"] = G.model;
  report["n"] = a.b.n;
  report["normalization"] = a.normalization;
  report["sigma"] = snap_for_output(sigma);
  report["sigma_mode"] = (a.sigma == "auto") ? "auto" : "value";
  report["amplitude"] = snap_for_output(G.amplitude);
  report["p_fit"] = snap_for_output(G.p_fit);
  report["c_fit"] = snap_for_output(G.c_fit);
  report["bound"] = to_json(bound);
  report["grid"] = {{"T", snap_for_output(T)},
                    {"per_decade", a.per_decade},
                    {"points", grid.size()},
                    {"t1", snap_for_output(a.t1)}};
  report["threads"] = threads;
  report["tool_version"] = kToolVersion;

  std::cout << "green function on " << G.model << ": " << grid.size()
            << " points, sigma " << fmt(snap_for_output(sigma)) << ", fit G ~ "
            << fmt(snap_for_output(G.c_fit)) << " t^"
            << fmt(snap_for_output(G.p_fit)) << "\n";
  std::cout << bound.claim << ": " << to_string(bound.status)
            << " (c = " << fmt(snap_for_output(bound.target)) << ")\n";

  // exact power law G = amplitude * t^(2-n) holds iff sigma == 0
  if (sigma == 0.0) {
    double wrel = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const double exact = G.amplitude * std::pow(grid[k], 2.0 - a.b.n);
      wrel = std::max(wrel, std::fabs(G.values[k] / exact - 1.0));
    }
    report["exact_law_max_rel"] = snap_for_output(wrel);
    std::cout << "exact law |G/(A t^(2-n)) - 1| <= " << fmt(snap_for_output(wrel))
              << "\n";
  }

  // conformal identity and positivity across the eps sweep
  const double q = -(a.b.n + 2.0) / (a.b.n - 2.0);
  double base_min = 1e300;
  std::vector<double> scal_mid(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    scal_mid[k] = scal_warped(g, Interval::point(grid[k])).mid();
    base_min = std::min(base_min, scal_mid[k]);
  }
  report["base_scal_min"] = snap_for_output(base_min);
  const bool assert_positive = base_min > 0.0;

  json sweep = json::array();
  for (const double eps : parse_list(a.eps, "--eps")) {
    if (eps < 0.0) throw ConfigError("--eps entries must be nonnegative");
    const BlowupMetric bm = blowup_metric(g, G, eps);
    double wrel = 0.0, smin = 1e300;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const double t = grid[k];
      const double u = 1.0 + eps * G.values[k];
      const double sc = scal_mid[k];
      const double rhs =
          std::pow(u, q) * (sc + eps * (sc - sigma) * G.values[k]);
      const double lhs =
          scal_conformal(g, bm.factor, Interval::point(t)).mid();
      wrel = std::max(wrel,
                      std::fabs(lhs - rhs) / std::max(1.0, std::fabs(rhs)));
      smin = std::min(smin, lhs);
    }
    const bool positive = smin > 0.0;
    json row;
    row["eps"] = snap_for_output(eps);
    row["max_rel_residual"] = snap_for_output(wrel);
    row["min_scal"] = snap_for_output(smin);
    row["positive"] = positive;
    sweep.push_back(row);
    if (wrel > 1e-5) code = std::max(code, 3);
    if (assert_positive && !positive) code = std::max(code, 4);
    std::cout << "eps " << fmt(snap_for_output(eps)) << ": identity residual "
              << fmt(snap_for_output(wrel)) << ", min scal "
              << fmt(snap_for_output(smin))
              << (assert_positive ? (positive ? " (positive)" : " (NOT positive)")
                                  : "")
              << "\n";
  }
  report["conformal"] = sweep;

  if (a.completeness) {
    double eps_c = 0.0;
    for (const double e : parse_list(a.eps, "--eps"))
      if (e > 0.0) eps_c = e;
    if (eps_c == 0.0)
      throw ConfigError("completeness needs a positive --eps entry");
    std::vector<double> probes;
    for (int k = 2; k <= 16; ++k) {
      const double p = std::ldexp(1.0, -k);
      if (p >= a.t1 * (1.0 + 1e-12)) probes.push_back(p);
    }
    if (probes.size() < 6)
      throw ConfigError(
          "completeness needs the grid to reach at least six dyadic probes; "
          "lower --t1");
    const CompletenessReport cr =
        completeness_check(blowup_metric(g, G, eps_c), probes);
    json c;
    c["eps"] = snap_for_output(eps_c);
    c["lengths_grow"] = cr.lengths_grow;
    c["pass"] = cr.pass;
    c["probes"] = probes.size();
    c["slope"] = snap_for_output(cr.slope);
    c["law"] = cr.law;
    report["completeness"] = c;
    if (!cr.pass) code = std::max(code, 3);
    std::cout << "completeness (eps " << fmt(snap_for_output(eps_c))
              << "): " << (cr.pass ? "pass" : "FAIL") << ", slope "
              << fmt(snap_for_output(cr.slope)) << " over " << probes.size()
              << " probes\n";
  }

  write_json(out / "report.json", report);
  std::cout << "wrote green.csv, report.json\n";
  return code;
}

// ---------------------------------------------------------------------------
// oracle-check

struct OracleArgs {
  std::vector<std::string> cases;
  long long points = 0;
};

std::string resolve_case(const std::string& name,
                         const std::vector<OracleCase>& suite) {
  if (name == "exotic-pullback") return "sphere-pullback-8";
  if (name == "torus-flat") return "torus-twist-4";
  for (const OracleCase& c : suite)
    if (c.family == name) return name;
  std::string families = "exotic-pullback, torus-flat";
  for (const OracleCase& c : suite) families += ", " + c.family;
  throw ConfigError("unknown --case '" + name + "' (one of: " + families + ")");
}

int run_oracle(const OracleArgs& a, const fs::path& out, int threads) {
  (void)threads;
  const std::vector<OracleCase> suite = builtin_oracle_suite();
  std::vector<std::string> wanted;
  for (const std::string& name : a.cases)
    wanted.push_back(resolve_case(name, suite));

  std::string csv = "family,n,points,max_dev,mean_dev,tolerance,pass\n";
  int failed = 0, ran = 0;
  for (const OracleCase& c : suite) {
    if (!wanted.empty() &&
        std::find(wanted.begin(), wanted.end(), c.family) == wanted.end())
      continue;
    const long pts = a.points > 0 ? static_cast<long>(a.points) : c.points;
    const OracleDeviation dev =
        compare_closed_form(c.field, c.closed_form, pts, c.opts);
    const bool pass = dev.max_dev <= c.tolerance;
    if (!pass) ++failed;
    ++ran;
    csv += c.family + "," + std::to_string(c.field.dim) + "," +
           std::to_string(dev.n) + "," + fmt(snap_for_output(dev.max_dev)) +
           "," + fmt(snap_for_output(dev.mean_dev)) + "," +
           fmt(snap_for_output(c.tolerance)) + "," + (pass ? "yes" : "no") +
           "\n";
    std::printf("%-22s n=%d points=%-4ld max %-12s tol %-8s %s\n",
                c.family.c_str(), c.field.dim, dev.n,
                fmt(snap_for_output(dev.max_dev)).c_str(),
                fmt(snap_for_output(c.tolerance)).c_str(),
                pass ? "PASS" : "FAIL");
  }
  write_text(out / "oracle_report.csv", csv);
  if (failed == 0)
    std::cout << "errors: none (" << ran << " families)\n";
  else
    std::cout << "errors: " << failed << " of " << ran << " families failed\n";
  std::cout << "wrote oracle_report.csv\n";
  return failed == 0 ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "uecert: certified curvature bounds for singular warped-product metrics"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.set_config("--config", "",
                 "key=value file; subcommand options live in a [subcommand] "
                 "section; command-line flags win");
  app.require_subcommand(1);

  std::string out_dir = ".";
  app.add_option("--out", out_dir, "directory for output artifacts")
      ->capture_default_str();

  ConstructArgs ca;
  CLI::App* construct =
      app.add_subcommand("construct", "build a metric and emit its tables");
  add_build_flags(construct, ca.b, "conical-cap");
  construct->add_option("--grid", ca.grid, "rows in the emitted tables")
      ->check(CLI::Range(8, 100000))
      ->capture_default_str();

  CertifyArgs ya;
  CLI::App* certify =
      app.add_subcommand("certify", "emit certificates for a metric");
  add_build_flags(certify, ya.b, "conical-cap");
  certify
      ->add_option("--claim", ya.claims,
                   "claims to certify (repeatable): scal, chain, bilipschitz, "
                   "sobolev")
      ->check(CLI::IsMember({"scal", "chain", "bilipschitz", "sobolev"}))
      ->capture_default_str();
  certify->add_option("--target", ya.target, "scal lower bound, or auto")
      ->capture_default_str();
  certify->add_option("--levels", ya.levels, "exhaustion levels")
      ->check(CLI::Range(0, 40))
      ->capture_default_str();
  certify->add_option("--depth", ya.depth, "bisection depth per piece")
      ->check(CLI::Range(1, 48))
      ->capture_default_str();
  certify->add_option("--budget", ya.budget, "bisection leaf budget per piece")
      ->check(CLI::Range(16LL, 100000000LL))
      ->capture_default_str();
  certify->add_option("--p", ya.p_list, "Sobolev exponents, comma separated")
      ->capture_default_str();
  certify->add_option("--annuli", ya.annuli, "Sobolev dyadic annuli")
      ->check(CLI::Range(4, 48))
      ->capture_default_str();
  certify->add_option("--directions", ya.directions, "Sobolev sphere directions")
      ->check(CLI::Range(4, 256))
      ->capture_default_str();
  certify->add_option("--samples", ya.samples, "fiber eigenvalue samples")
      ->check(CLI::Range(0LL, 10000000LL))
      ->capture_default_str();

  BlowupArgs ba;
  CLI::App* blowup = app.add_subcommand(
      "blowup", "solve the Green function and check the conformal blow-up");
  add_build_flags(blowup, ba.b, "rn", /*cap_flags=*/false);
  blowup->add_option("--t1", ba.t1, "inner grid radius")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  blowup->add_option("--per-decade", ba.per_decade, "grid points per decade")
      ->check(CLI::Range(4, 2000))
      ->capture_default_str();
  blowup->add_option("--sigma", ba.sigma, "constant potential, or auto")
      ->capture_default_str();
  blowup->add_option("--eps", ba.eps, "blow-up strengths, comma separated")
      ->capture_default_str();
  blowup->add_option("--normalization", ba.normalization, "dirac or unit")
      ->check(CLI::IsMember({"dirac", "unit"}))
      ->capture_default_str();
  blowup->add_flag("--completeness", ba.completeness,
                   "check radial length growth of the blow-up");

  OracleArgs oa;
  CLI::App* oracle = app.add_subcommand(
      "oracle-check", "compare known-curvature families against the oracle");
  oracle->add_option("--case", oa.cases,
                     "family to run (repeatable; default: all). Aliases: "
                     "exotic-pullback, torus-flat");
  oracle->add_option("--points", oa.points, "sample count override")
      ->check(CLI::Range(0LL, 100000LL))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    const int threads = threads_from_env();
    const fs::path out(out_dir);
    fs::create_directories(out);
    if (construct->parsed()) return run_construct(ca, out, threads);
    if (certify->parsed()) return run_certify(ya, out, threads);
    if (blowup->parsed()) return run_blowup(ba, out, threads);
    if (oracle->parsed()) return run_oracle(oa, out, threads);
    std::cerr << "error: no subcommand\n";
    return 2;
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << " (minimum feasible "
              << fmt(snap_for_output(e.min_feasible)) << ")\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
