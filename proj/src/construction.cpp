#include "uecert/construction.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "uecert/errors.hpp"
#include "uecert/smoothstep.hpp"

namespace uecert {

namespace {

// certified enclosure of max |f| over [0, 1] for a kernel-derivative
// evaluator: [best rigorous point witness, bisection hull upper end]
Interval abs_max_on_unit(const std::function<Interval(const Interval&)>& f) {
  EnclosureFn fn;
  fn.domain = Interval{0.0, 1.0};
  fn.value = [f](const Interval& u) { return abs_i(f(u)); };
  BisectionOptions opt;
  opt.max_depth = 22;
  opt.leaf_budget = 60'000;
  opt.width_goal = 1e-9;  // run to stall
  const Interval hull = enclose_range(fn, fn.domain, opt);
  double witness = 0.0;
  for (int i = 0; i <= 512; ++i) {
    const Interval v = f(Interval::point(i / 512.0));
    witness = std::max(witness, std::max(v.lo, -v.hi));
  }
  return Interval{std::max(0.0, witness), hull.hi};
}

double ceil_2dec(double x) { return std::ceil(x * 100.0) / 100.0; }

}  // namespace

ProfileBounds profile_bounds(int n, double C) {
  if (n < 3) throw DomainError("profile bounds need dimension >= 3");
  if (!(C > 0.0)) throw DomainError("profile bounds need C > 0");
  const double n1 = n - 1.0, n2 = n - 2.0;
  return ProfileBounds{0.5 * std::sqrt(C / (4.0 * n1 * n2)),
                       C / (8.0 * n1)};
}

Interval kernel_max_d1(TransitionKernel k) {
  if (k == TransitionKernel::Quintic) return Interval::point(kQuinticMaxD1);
  static const Interval cached = abs_max_on_unit(
      [](const Interval& u) { return mollified_d1(u); });
  return cached;
}

Interval kernel_max_d2(TransitionKernel k) {
  if (k == TransitionKernel::Quintic) return quintic_max_d2();
  static const Interval cached = abs_max_on_unit(
      [](const Interval& u) { return mollified_d2(u); });
  return cached;
}

double min_feasible_length(const ProfileBounds& bounds, TransitionKernel k) {
  if (!(bounds.slope_bound > 0.0) || !(bounds.curvature_bound > 0.0))
    throw DomainError("profile bounds must be positive");
  const double a1 = kernel_max_d1(k).hi;
  const double a2 = kernel_max_d2(k).hi;
  return std::max(a1 / bounds.slope_bound,
                  std::sqrt(a2 / bounds.curvature_bound));
}

WarpingProfile build_alpha(int n, double C, double R, double eps,
                           TransitionKernel k) {
  const ProfileBounds bounds = profile_bounds(n, C);
  if (!(R > 1.0)) throw DomainError("alpha needs R > 1");
  if (!(eps > 0.0 && 2.0 * eps < R))
    throw DomainError("alpha needs 0 < 2 eps < R");
  const double len = R - 2.0 * eps;
  const double lmin = min_feasible_length(bounds, k);
  if (len < lmin * (1.0 - 1e-12))
    throw InfeasibleError("transition window " + std::to_string(len) +
                              " shorter than the minimum feasible length " +
                              std::to_string(lmin),
                          lmin);

  std::vector<Piece> pieces(3);
  pieces[0].span = Interval{-R, -R + eps};
  pieces[0].shift = Affine{1.0, 0.0};
  pieces[0].kernel = Kernel::One;
  pieces[1].span = Interval{-R + eps, -eps};
  pieces[1].scale = Affine{1.0, 0.0};
  pieces[1].inner = Affine{-eps / len, -1.0 / len};
  pieces[1].kernel =
      k == TransitionKernel::Quintic ? Kernel::Smoothstep : Kernel::Mollified;
  pieces[2].span = Interval{-eps, 0.0};
  pieces[2].kernel = Kernel::One;
  WarpingProfile alpha(Interval{-R, 0.0}, std::move(pieces), "alpha");

  // certify the budgets; the mollified template's extrema are enclosures,
  // so it gets a sign-slack at the scale of enclosure noise
  const double tol = k == TransitionKernel::Quintic ? 0.0 : 1e-9;
  BisectionOptions opt;
  opt.max_depth = 26;
  opt.leaf_budget = 120'000;
  opt.width_goal = 1e-9;  // run to stall
  const Interval d1 = enclose_range(alpha.d1_fn(), alpha.domain(), opt);
  const Interval d2 = enclose_range(alpha.d2_fn(), alpha.domain(), opt);
  if (!(d1.hi <= tol && d1.lo >= -bounds.slope_bound - tol))
    throw InfeasibleError(
        "cannot certify -slope_bound <= alpha' <= 0 on this window", lmin);
  if (!(abs_i(d2).hi <= bounds.curvature_bound + tol))
    throw InfeasibleError(
        "cannot certify |alpha''| <= curvature_bound on this window", lmin);
  return alpha;
}

WarpingProfile build_f(const WarpingProfile& alpha, double R, double lambda) {
  if (!(R > 0.0) || !(lambda > 0.0))
    throw DomainError("cap profile needs R > 0 and lambda > 0");
  if (lambda < R)
    throw InfeasibleError("lambda below the required maximum (lambda >= R)",
                          R);
  if (std::abs(alpha.domain().lo + R) > 1e-9 ||
      std::abs(alpha.domain().hi) > 1e-9)
    throw DomainError("alpha domain must be [-R, 0]");

  std::vector<Piece> pieces;
  for (const Piece& p : alpha.pieces()) {
    if (p.scale.c1 != 0.0 || p.shift.c1 != 0.0)
      throw DomainError("alpha pieces must have constant scale and shift");
    const double c = p.scale.c0, s = p.shift.c0;
    Piece q = p;
    // f = A * alpha + 1 with A(t) = (t+R)/lambda - 1; alpha piece = c K + s
    q.scale = Affine{c * (R / lambda - 1.0), c / lambda};
    q.shift = Affine{s * (R / lambda - 1.0) + 1.0, s / lambda};
    pieces.push_back(q);
  }
  return WarpingProfile(alpha.domain(), std::move(pieces), "cap-profile",
                        alpha.claims_c2());
}

WarpedMetric assemble_conical_cap(int n, const SphereMetric& h, double R,
                                  double eps, double lambda,
                                  TransitionKernel k) {
  if (n != h.dim + 1)
    throw DomainError("cap dimension must be fiber dimension + 1");
  const Interval sr = scal_range(h);
  if (!(sr.lo > 0.0))
    throw InfeasibleError(
        "cap construction needs a fiber with positive scalar curvature", 0.0);
  const double C = sr.lo;
  const ProfileBounds bounds = profile_bounds(n, C);
  const double lmin = min_feasible_length(bounds, k);
  if (eps == 0.0) eps = std::min(1.0, lmin / 8.0);
  if (R == 0.0) R = ceil_2dec(lmin + 2.0 * eps);
  const double lam_geo =
      (4.0 * sqrt_i(Interval::point((n - 1.0) * (n - 2.0)) /
                    Interval::point(C)))
          .hi;
  if (lambda == 0.0) lambda = std::max(R, lam_geo);
  if (lambda < lam_geo * (1.0 - 1e-12))
    throw InfeasibleError("lambda below the curvature requirement",
                          std::max(R, lam_geo));
  WarpingProfile alpha = build_alpha(n, C, R, eps, k);
  WarpingProfile f = build_f(alpha, R, lambda);
  return make_warped(std::move(f), h, "conical-cap-n" + std::to_string(n));
}

std::vector<Certificate> certify_cap_chain(const WarpedMetric& cap,
                                           const BisectionOptions& opts) {
  cap.validate();
  const int n = cap.n;
  const Interval sr = scal_range(cap.h);
  const double C = sr.lo;
  const Interval dom = cap.domain();
  const nlohmann::json params{{"n", n},
                              {"C", snap_for_output(C)},
                              {"domain_lo", snap_for_output(dom.lo)},
                              {"domain_hi", snap_for_output(dom.hi)}};

  std::vector<Certificate> chain;

  Certificate fiber;
  fiber.claim = "fiber-scal-lower";
  fiber.subject = cap.name;
  fiber.params = params;
  fiber.target = C;
  fiber.achieved = sr;
  fiber.method = "closed-form";
  fiber.samples = 1;
  fiber.status = sr.lo >= C ? CertStatus::Certified : CertStatus::Refuted;
  chain.push_back(std::move(fiber));

  Certificate upper = certify_upper_bound(cap.f.value_fn(), dom, 1.0, opts);
  upper.claim = "profile-upper";
  upper.subject = cap.name;
  upper.params = params;
  chain.push_back(std::move(upper));

  const double n1 = n - 1.0, n2 = n - 2.0;
  const WarpingProfile f = cap.f;

  EnclosureFn slope;
  slope.domain = dom;
  slope.name = "slope-chain";
  slope.value = [f, n1, n2](const Interval& t) {
    return (n1 * n2) * sqr_i(f.eval(t).d1);
  };
  Certificate sc = certify_upper_bound(slope, dom, C / 4.0, opts);
  sc.claim = "slope-chain";
  sc.subject = cap.name;
  sc.params = params;
  chain.push_back(std::move(sc));

  EnclosureFn hess;
  hess.domain = dom;
  hess.name = "hessian-chain";
  hess.value = [f, n1](const Interval& t) {
    const ProfileValues pv = f.eval(t);
    return (2.0 * n1) * (pv.v * pv.d2);
  };
  Certificate hc = certify_upper_bound(hess, dom, C / 4.0, opts);
  hc.claim = "hessian-chain";
  hc.subject = cap.name;
  hc.params = params;
  chain.push_back(std::move(hc));

  return chain;
}

WarpedMetric build_rn_counterexample(int n, const SphereMetric& h) {
  if (n != h.dim + 1)
    throw DomainError("counterexample dimension must be fiber dimension + 1");
  if (n < 3) throw DomainError("counterexample needs dimension >= 3");
  const Interval sr = scal_range(h);
  if (sr.lo < 1.0)
    throw InfeasibleError("counterexample needs scal_range(h).lo >= 1", 1.0);
  const double lambda = std::sqrt(2.0 * (n - 1.0) * (n - 2.0));
  WarpingProfile f = affine_profile(Interval{0.0, 2.0 * lambda}, 0.0,
                                    1.0 / lambda, "cone-slope");
  return make_warped(std::move(f), h,
                     "rn-counterexample-n" + std::to_string(n));
}

PullbackSingularity build_pullback_singularity(PullbackKind kind,
                                               const SphereDiffeo& f) {
  const int m = f.dim;
  if (m < 2) throw DomainError("pullback singularity needs fiber dim >= 2");
  const int n = m + 1;
  PullbackSingularity out;
  out.n = n;
  if (kind == PullbackKind::Sphere) {
    out.kind = "sphere";
    out.expected_scal = n * (n - 1.0);
    SphereMetric fiber = apply_diffeo(f, SphereMetric::round(m, 1.0));
    WarpedMetric model =
        make_warped(sin_profile(Interval{0.0, M_PI}), fiber,
                    "sphere-pullback-n" + std::to_string(n));
    out.field = warped_polar_field(model, ChartId::North, 1.0);
    out.field.box_lo[m] = 0.35;  // keep oracle stencils away from the poles
    out.field.box_hi[m] = 2.75;
    out.model = std::move(model);
  } else {
    out.kind = "torus";
    out.expected_scal = 0.0;
    const bool twist = f.kind == SphereDiffeo::Kind::LatitudeTwist;
    out.field = torus_twist_field(n, twist ? f.amp : 0.0, 0.45, 0.9, 0.05,
                                  twist ? f.s0 : 0.6, twist ? f.ramp : 0.5);
  }
  return out;
}

std::vector<OracleCase> builtin_oracle_suite() {
  std::vector<OracleCase> suite;
  const SphereDiffeo twist7 = SphereDiffeo::latitude_twist(7, 0.15);

  {
    OracleCase c;
    c.family = "flat-cone-8";
    c.field = cone_field(
        make_warped(affine_profile(Interval{0.05, 4.0}, 0.0, 1.0, "t"),
                    SphereMetric::round(7, 1.0), "flat-cone-8"),
        0.2, 3.0);
    c.closed_form = [](const Vec&) { return 0.0; };
    c.tolerance = 1e-8;
    c.opts.step = 0.02;  // constant field: large step kills roundoff
    c.points = 50;
    suite.push_back(std::move(c));
  }
  {
    OracleCase c;
    c.family = "scaled-cone-8";
    const double scale = 2.5;
    c.field = cone_field(
        make_warped(affine_profile(Interval{0.05, 4.0}, 0.0, 1.0, "t"),
                    SphereMetric::scaled_round(7, scale), "scaled-cone-8"),
        0.2, 3.0);
    c.closed_form = [scale](const Vec& x) {
      return (42.0 / scale - 42.0) / x.squaredNorm();
    };
    c.opts.step = 2e-3;
    suite.push_back(std::move(c));
  }
  {
    OracleCase c;
    c.family = "berger-cone-4";
    const double a = 0.8, b = 1.1;
    c.field = cone_field(
        make_warped(affine_profile(Interval{0.05, 4.0}, 0.0, 1.0, "t"),
                    SphereMetric::berger3(a, b), "berger-cone-4"),
        0.2, 3.0);
    c.closed_form = [a, b](const Vec& x) {
      const double scal_b = 8.0 / (b * b) - 2.0 * a * a / (b * b * b * b);
      return (scal_b - 6.0) / x.squaredNorm();
    };
    c.opts.step = 2e-3;
    suite.push_back(std::move(c));
  }
  {
    OracleCase c;
    c.family = "twist-cone-8";
    c.field = cone_field(
        make_warped(affine_profile(Interval{0.05, 4.0}, 0.0, 1.0, "t"),
                    apply_diffeo(twist7, SphereMetric::round(7, 1.0)),
                    "twist-cone-8"),
        0.2, 3.0);
    c.closed_form = [](const Vec&) { return 0.0; };
    c.opts.step = 2e-3;
    suite.push_back(std::move(c));
  }
  {
    OracleCase c;
    c.family = "twist-chart-7";
    c.field = chart_field(apply_diffeo(twist7, SphereMetric::round(7, 1.0)),
                          ChartId::North, 0.95);
    c.closed_form = [](const Vec&) { return 42.0; };
    c.opts.step = 2e-3;
    suite.push_back(std::move(c));
  }
  {
    OracleCase c;
    c.family = "sphere-pullback-8";
    PullbackSingularity s =
        build_pullback_singularity(PullbackKind::Sphere, twist7);
    c.field = std::move(s.field);
    c.closed_form = [](const Vec&) { return 56.0; };
    c.opts.step = 2e-3;
    c.points = 30;
    suite.push_back(std::move(c));
  }
  {
    OracleCase c;
    c.family = "torus-twist-4";
    PullbackSingularity s = build_pullback_singularity(
        PullbackKind::Torus, SphereDiffeo::latitude_twist(3, 0.4));
    c.field = std::move(s.field);
    c.closed_form = [](const Vec&) { return 0.0; };
    c.opts.step = 3e-3;
    suite.push_back(std::move(c));
  }
  {
    OracleCase c;
    c.family = "rn-counterexample-8";
    WarpedMetric g =
        build_rn_counterexample(8, SphereMetric::scaled_round(7, 42.0));
    c.field = warped_polar_field(g, ChartId::North, 1.0);
    c.field.box_lo[7] = 0.5;
    c.field.box_hi[7] = 17.0;
    c.closed_form = [](const Vec& x) { return 42.0 / (x[7] * x[7]); };
    suite.push_back(std::move(c));
  }
  {
    OracleCase c;
    c.family = "conical-cap-8";
    WarpedMetric cap = assemble_conical_cap(8, SphereMetric::round(7, 1.0));
    c.field = warped_polar_field(cap, ChartId::North, 1.0);
    c.field.box_lo[7] = cap.domain().lo + 0.1;
    c.field.box_hi[7] = -0.05;
    c.closed_form = [cap](const Vec& x) {
      return scal_warped(cap, Interval::point(x[7])).mid();
    };
    c.tolerance = 1e-5;  // 1/f^2 amplification near the tip
    c.points = 30;
    suite.push_back(std::move(c));
  }
  {
    OracleCase c;
    c.family = "conformal-flat-8";
    WarpedMetric g =
        make_warped(affine_profile(Interval{0.5, 3.5}, 0.0, 1.0, "t"),
                    SphereMetric::round(7, 1.0), "flat-polar-8");
    ConformalFactor u;
    u.name = "harmonic";
    u.eval = [](const Interval& t) {
      ProfileValues pv;
      pv.v = 1.0 + pow_i(t, -6L);
      pv.d1 = -6.0 * pow_i(t, -7L);
      pv.d2 = 42.0 * pow_i(t, -8L);
      return pv;
    };
    c.field = conformal_polar_field(g, u, ChartId::North, 1.0);
    c.field.box_lo[7] = 0.7;
    c.field.box_hi[7] = 3.0;
    c.closed_form = [](const Vec&) { return 0.0; };
    c.points = 30;
    suite.push_back(std::move(c));
  }
  return suite;
}

}  // namespace uecert
