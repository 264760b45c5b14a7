#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "uecert/certify.hpp"
#include "uecert/construction.hpp"
#include "uecert/errors.hpp"
#include "uecert/green.hpp"
#include "uecert/warped_metric.hpp"

using namespace uecert;

namespace {

WarpedMetric reference_cap() {
  return assemble_conical_cap(8, SphereMetric::round(7));
}

WarpedMetric euclid_cone(double lo, double hi) {
  return make_warped(affine_profile(Interval(lo, hi), 0.0, 1.0, "t"),
                     SphereMetric::round(7), "euclid-8");
}

WarpedMetric scaled_cone(double c, double hi) {
  return make_warped(affine_profile(Interval(0.0, hi), 0.0, 1.0, "t"),
                     SphereMetric::scaled_round(7, c), "scaled-cone");
}

WarpedMetric rn_metric() {
  return build_rn_counterexample(8, SphereMetric::scaled_round(7, 42.0));
}

double dense_scal_min(const WarpedMetric& g, double lo, double hi, long n) {
  double m = std::numeric_limits<double>::infinity();
  for (long i = 0; i <= n; ++i) {
    const double t = lo + (hi - lo) * i / n;
    m = std::min(m, scal_warped(g, Interval::point(t)).mid());
  }
  return m;
}

}  // namespace

TEST_CASE("scal positivity certificates exhaust the conical end") {
  const WarpedMetric cap = reference_cap();
  const Certificate c = certify_scal_positive(cap, cap.domain(), 21.0);
  CHECK(c.claim == "scal-positive-exhaustion");
  CHECK(c.subject == cap.name);
  CHECK(c.method == "interval-bisection");
  CHECK(c.status == CertStatus::Certified);
  CHECK(c.certified());
  REQUIRE(c.domain.has_value());
  CHECK(c.domain->lo == cap.domain().lo);
  CHECK(c.domain->hi == 0.0);
  CHECK(c.target == 21.0);
  CHECK(c.achieved.lo == doctest::Approx(24.439017332723328).epsilon(1e-12));
  CHECK(c.achieved.hi == doctest::Approx(4922.9902728965117).epsilon(1e-12));
  CHECK(c.depth == 0);
  CHECK(c.samples == 21);
  CHECK(c.params["levels"] == 20);
  CHECK(c.params["pieces"] == 21);

  const auto& ev = c.params["evidence"];
  REQUIRE(ev.size() == 21);
  double prev_lo = 1.0;
  for (int j = 0; j <= 20; ++j) {
    CHECK(ev[j]["margin"].get<double>() ==
          snap_for_output(std::ldexp(1.0, -j)));
    CHECK(ev[j]["status"].get<std::string>() == "CERTIFIED");
    const double lo = ev[j]["lo"].get<double>();
    CHECK(lo == doctest::Approx(cap.domain().lo + std::ldexp(1.0, -j))
                    .epsilon(1e-9));
    if (j > 0) CHECK(lo < prev_lo);
    prev_lo = lo;
    // every piece cleared the requested bound
    CHECK(ev[j]["achieved_lo"].get<double>() >= 21.0);
  }
  CHECK(ev[20]["achieved_lo"].get<double>() ==
        doctest::Approx(24.4390173327).epsilon(1e-10));
}

TEST_CASE("exhaustion covers the scaled-cone counterexample") {
  const WarpedMetric rn = rn_metric();
  const Certificate c = certify_scal_positive(rn, rn.domain(), 0.0);
  CHECK(c.status == CertStatus::Certified);
  CHECK(c.params["pieces"] == 21);
  CHECK(c.samples == 21);
  // inf scal sits at the outer edge: scal * t^2 == 42, t_max = 2 lambda
  const double t_max = rn.domain().hi;
  CHECK(c.achieved.lo ==
        doctest::Approx(42.0 / (t_max * t_max)).epsilon(1e-12));
  CHECK(c.achieved.lo == doctest::Approx(0.125).epsilon(1e-12));
  CHECK(c.achieved.hi >= c.achieved.lo);
}

TEST_CASE("flat cone certifies zero and refutes one") {
  const WarpedMetric e8 = euclid_cone(0.0, 1.0);
  const Certificate c0 = certify_scal_positive(e8, e8.domain(), 0.0);
  CHECK(c0.claim == "scal-positive-exhaustion");
  CHECK(c0.status == CertStatus::Certified);
  CHECK(c0.params["pieces"] == 20);  // margin 1 already covers nothing
  CHECK(c0.achieved.lo == 0.0);
  CHECK(c0.achieved.hi == 0.0);

  const Certificate c1 = certify_scal_positive(e8, e8.domain(), 1.0);
  CHECK(c1.status == CertStatus::Refuted);
  CHECK_FALSE(c1.certified());
  CHECK(c1.achieved.hi == 0.0);
  for (const auto& e : c1.params["evidence"])
    CHECK(e["status"].get<std::string>() == "REFUTED");

  // away from the tip the claim needs no exhaustion
  const WarpedMetric shifted = euclid_cone(0.5, 1.0);
  const Certificate cd = certify_scal_positive(shifted, shifted.domain(), 0.0);
  CHECK(cd.claim == "scal-positive");
  CHECK(cd.status == CertStatus::Certified);
  CHECK(cd.depth == 0);
}

TEST_CASE("exhaustion reports the honest status at the true minimum") {
  // the cap's scal dips to exactly 42, attained on the constant collar
  const WarpedMetric cap = reference_cap();

  const Certificate c41 = certify_scal_positive(cap, cap.domain(), 41.0);
  CHECK(c41.status == CertStatus::Certified);
  CHECK(c41.achieved.lo == doctest::Approx(41.082315573642177).epsilon(1e-12));
  CHECK(c41.depth == 1);
  CHECK(c41.samples == 24);

  const Certificate c419 = certify_scal_positive(cap, cap.domain(), 41.9);
  CHECK(c419.status == CertStatus::Certified);
  CHECK(c419.achieved.lo ==
        doctest::Approx(41.986005980567874).epsilon(1e-12));
  CHECK(c419.depth == 3);

  // target exactly on the minimum: neither certifiable nor refutable, and
  // the evidence interval pinches onto 42 from both sides
  const Certificate c42 = certify_scal_positive(cap, cap.domain(), 42.0);
  CHECK(c42.status == CertStatus::Inconclusive);
  CHECK_FALSE(c42.certified());
  CHECK(c42.achieved.lo == doctest::Approx(42.0).epsilon(1e-14));
  CHECK(c42.achieved.lo < 42.0);
  CHECK(c42.achieved.hi == 42.0);
  CHECK(c42.depth == 26);

  const Certificate c43 = certify_scal_positive(cap, cap.domain(), 43.0);
  CHECK(c43.status == CertStatus::Refuted);
  CHECK(c43.achieved.hi ==
        doctest::Approx(42.026124717804663).epsilon(1e-12));

  // a tiny budget still certifies clear targets from root enclosures
  ExhaustOptions tiny;
  tiny.bisection = BisectionOptions{3, 8, 0.0};
  CHECK(certify_scal_positive(cap, cap.domain(), 41.9, tiny).status ==
        CertStatus::Certified);
}

TEST_CASE("certified lower bounds are sound against dense sampling") {
  const WarpedMetric cap = reference_cap();
  const Certificate c21 = certify_scal_positive(cap, cap.domain(), 21.0);
  const Certificate c419 = certify_scal_positive(cap, cap.domain(), 41.9);
  const double lo = cap.domain().lo + std::ldexp(1.0, -20);
  const double cap_min = dense_scal_min(cap, lo, cap.domain().hi, 100000);
  CHECK(cap_min >= c21.achieved.lo);
  CHECK(cap_min >= c419.achieved.lo);
  CHECK(cap_min <= c21.achieved.hi);
  CHECK(cap_min == doctest::Approx(42.0).epsilon(1e-9));

  const WarpedMetric rn = rn_metric();
  const Certificate crn = certify_scal_positive(rn, rn.domain(), 0.0);
  const double rn_min =
      dense_scal_min(rn, std::ldexp(1.0, -20), rn.domain().hi, 100000);
  CHECK(rn_min >= crn.achieved.lo);
  CHECK(rn_min == doctest::Approx(0.125).epsilon(1e-9));
}

TEST_CASE("bilipschitz constants of cones against the euclidean model") {
  const Certificate cr = bilipschitz_constant(euclid_cone(0.0, 1.0));
  CHECK(cr.claim == "bilipschitz-euclidean");
  CHECK(cr.target == 1.0);
  CHECK(cr.achieved.lo == 1.0);
  CHECK(cr.achieved.hi == 1.0);
  CHECK(cr.method == "closed-form");
  CHECK(cr.status == CertStatus::Certified);

  const Certificate c2 = bilipschitz_constant(scaled_cone(2.0, 1.0));
  CHECK(c2.target == 2.0);
  CHECK(c2.achieved.lo == 1.0);
  CHECK(c2.achieved.hi == 2.0);
  const Certificate ch = bilipschitz_constant(scaled_cone(0.5, 1.0));
  CHECK(ch.target == 2.0);
  CHECK(ch.achieved.lo == 0.5);
  CHECK(ch.achieved.hi == 1.0);

  // lambda^2 = 2 (n-1)(n-2) = 84 rescales the fiber eigenvalue 42 to 1/2
  const Certificate crn = bilipschitz_constant(rn_metric());
  CHECK(crn.target == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(crn.achieved.lo == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(crn.achieved.hi == 1.0);
  CHECK(crn.params["cone_slope"].get<double>() ==
        doctest::Approx(1.0 / std::sqrt(84.0)).epsilon(1e-12));
  CHECK(crn.status == CertStatus::Certified);

  const SphereMetric tw = apply_diffeo(SphereDiffeo::latitude_twist(7, 0.15),
                                       SphereMetric::round(7));
  const WarpedMetric twc = make_warped(
      affine_profile(Interval(0.0, 1.0), 0.0, 1.0, "t"), tw, "twist-cone");
  const Certificate ct = bilipschitz_constant(twc);
  CHECK(ct.method == "grid+padding");
  CHECK(ct.status == CertStatus::Certified);
  CHECK(std::isfinite(ct.target));
  CHECK(ct.target == doctest::Approx(1.9315079191330324).epsilon(1e-12));
  CHECK(ct.target == doctest::Approx(1.0 / ct.achieved.lo).epsilon(1e-12));
  // evidence range contains 1: the twist is a diffeomorphism of the round
  // sphere, so the relative spectrum straddles the identity
  CHECK(ct.achieved.lo == doctest::Approx(0.51773020969484573).epsilon(1e-12));
  CHECK(ct.achieved.hi == doctest::Approx(1.7281421541243969).epsilon(1e-12));
  CHECK(ct.achieved.contains(1.0));
  CHECK(ct.samples == 131072);

  const WarpedMetric bc =
      make_warped(affine_profile(Interval(0.0, 1.0), 0.0, 1.0, "t"),
                  SphereMetric::berger3(1.0, 1.3), "berger-cone");
  const Certificate cb = bilipschitz_constant(bc);
  CHECK(cb.method == "closed-form");
  CHECK(cb.target == doctest::Approx(1.69).epsilon(1e-14));
}

TEST_CASE("bilipschitz field pairs are symmetric and grid-consistent") {
  const SphereMetric tw = apply_diffeo(SphereDiffeo::latitude_twist(7, 0.15),
                                       SphereMetric::round(7));
  const WarpedMetric twc = make_warped(
      affine_profile(Interval(0.25, 1.0), 0.0, 1.0, "t"), tw, "twist-cone");
  const WarpedMetric rdc =
      make_warped(affine_profile(Interval(0.25, 1.0), 0.0, 1.0, "t"),
                  SphereMetric::round(7), "round-cone");
  const MetricField a = warped_polar_field(twc, ChartId::North);
  const MetricField b = warped_polar_field(rdc, ChartId::North);

  const Certificate ab = bilipschitz_constant(a, b, 200);
  CHECK(ab.claim == "bilipschitz-pair");
  CHECK(ab.method == "grid-only");
  CHECK(ab.status == CertStatus::CertifiedOnGrid);
  CHECK(ab.samples == 200);
  CHECK(ab.target == doctest::Approx(1.5021282990014886).epsilon(1e-12));
  CHECK(ab.achieved.lo == doctest::Approx(0.66572209621823331).epsilon(1e-12));

  // the sampled relative spectrum stays inside the certified fiber sandwich
  const EigenBounds eb = eigen_bounds_vs_round(tw);
  CHECK(ab.achieved.lo >= eb.lam.lo);
  CHECK(ab.achieved.hi <= eb.lam.hi);

  // generalized eigenvalues of (B, A) are reciprocals of (A, B)
  const Certificate ba = bilipschitz_constant(b, a, 200);
  CHECK(ba.target == doctest::Approx(ab.target).epsilon(1e-12));
  CHECK(ba.achieved.lo * ab.achieved.hi == doctest::Approx(1.0).epsilon(1e-12));

  const Certificate aa = bilipschitz_constant(a, a, 100);
  CHECK(aa.target == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sobolev norms on the flat cone are constant in p") {
  const SobolevTable tab = sobolev_table(euclid_cone(0.0, 1.2));
  CHECK(tab.annuli == 40);
  CHECK(tab.f_values.size() == 40u * 16u * 16u);
  // quadrature reproduces the euclidean volume of the punctured unit ball
  const double ball = sphere_volume(7) / 8.0;
  CHECK(tab.total_volume == doctest::Approx(ball).epsilon(1e-12));

  for (double p : {2.0, 6.0, 7.0, 7.9, 9.0}) {
    const SobolevEstimate est = sobolev_norm(tab, p);
    CHECK(est.p == p);
    CHECK(est.k == 2);
    // F == sum |g_ij| == n for the identity metric, at every scale
    CHECK(est.norm_value == doctest::Approx(8.0).epsilon(1e-12));
    CHECK(est.finite);
    CHECK_FALSE(est.indeterminate);
    // annulus masses are pure volumes: ratio 2^-n exactly
    CHECK(est.tail_ratio == doctest::Approx(0.00390625).epsilon(1e-12));
    CHECK(est.coeff_sup == doctest::Approx(1.0).epsilon(1e-13));
  }

  const SobolevEstimate e6 = sobolev_norm(tab, 6.0);
  REQUIRE(e6.scale_mass.size() == 40);
  CHECK(e6.scale_mass[0] == doctest::Approx(2069.943184472555).epsilon(1e-12));
  CHECK(e6.scale_mass[39] ==
        doctest::Approx(2.4808458399491666e-91).epsilon(1e-10));
  CHECK(e6.scale_sup.front() == doctest::Approx(8.0).epsilon(1e-13));
  CHECK(e6.scale_sup.back() == doctest::Approx(8.0).epsilon(1e-13));

  double prev = 0.0;
  for (double p = 1.0; p <= 12.0; p += 0.5) {
    const double v = sobolev_norm(tab, p).norm_value;
    CHECK(v >= prev - 1e-12);
    prev = v;
  }
}

TEST_CASE("sobolev norms detect the scaled-cone membership threshold") {
  const SobolevTable tab = sobolev_table(scaled_cone(2.0, 1.2));

  const SobolevEstimate e6 = sobolev_norm(tab, 6.0);
  CHECK(e6.finite);
  CHECK(e6.tail_ratio == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(e6.norm_value == doctest::Approx(857.35952457561871).epsilon(1e-10));

  const SobolevEstimate e7 = sobolev_norm(tab, 7.0);
  CHECK(e7.finite);
  CHECK(e7.tail_ratio == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(e7.norm_value == doctest::Approx(956.89358213745913).epsilon(1e-10));

  const SobolevEstimate e79 = sobolev_norm(tab, 7.9);
  CHECK(e79.finite);
  CHECK(e79.tail_ratio ==
        doctest::Approx(std::pow(2.0, -0.1)).epsilon(1e-9));
  CHECK(e79.norm_value == doctest::Approx(1491.2168924516432).epsilon(1e-10));

  // p = n is the borderline (log-divergent) case, p > n diverges: the mass
  // ratios approach 2^(p-n) and the series is reported as not finite
  const SobolevEstimate e8 = sobolev_norm(tab, 8.0);
  CHECK_FALSE(e8.finite);
  CHECK_FALSE(e8.indeterminate);
  CHECK(e8.tail_ratio == doctest::Approx(1.0).epsilon(1e-9));

  const SobolevEstimate e9 = sobolev_norm(tab, 9.0);
  CHECK_FALSE(e9.finite);
  CHECK_FALSE(e9.indeterminate);
  CHECK(e9.tail_ratio == doctest::Approx(2.0).epsilon(1e-9));

  // degree-0 coefficients: the L-infinity sup is scale-independent and
  // bounded by the top fiber eigenvalue
  CHECK(e7.coeff_sup == doctest::Approx(1.9999818479691933).epsilon(1e-12));
  CHECK(e7.coeff_sup <= 2.0);
  double cs_min = 1e300, cs_max = 0.0;
  for (double s : tab.sup_coeff) {
    cs_min = std::min(cs_min, s);
    cs_max = std::max(cs_max, s);
  }
  CHECK(cs_max - cs_min <= 1e-12 * cs_max);

  double prev = 0.0;
  for (double p = 1.0; p <= 10.0; p += 0.5) {
    const double v = sobolev_norm(tab, p).norm_value;
    CHECK(v >= prev - 1e-12);
    prev = v;
  }
}

TEST_CASE("derivative blow-up slopes of cones") {
  const MetricField f2 = cone_field(scaled_cone(2.0, 1.2),
                                    std::ldexp(1.0, -33), 1.05);
  const auto radii = dyadic_radii(1, 30);
  REQUIRE(radii.size() == 30);
  CHECK(radii.front() == 0.5);
  CHECK(radii.back() == std::ldexp(1.0, -30));

  const SlopeReport s1 = blowup_slope(f2, 1, radii);
  CHECK_FALSE(s1.zero_field);
  CHECK(s1.used == 22);
  CHECK(s1.slope == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(s1.prefactor == doctest::Approx(0.76214496072734816).epsilon(1e-10));
  CHECK(s1.sup[0] == doctest::Approx(1.5242899214547023).epsilon(1e-10));
  CHECK(s1.sup[29] == doctest::Approx(818346920.2837944).epsilon(1e-10));

  const SlopeReport s2 = blowup_slope(f2, 2, radii);
  CHECK_FALSE(s2.zero_field);
  CHECK(s2.slope == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(s2.prefactor == doctest::Approx(1.9998164828560716).epsilon(1e-10));
  CHECK(std::abs(s2.prefactor - 2.0) < 1e-3);

  // the flat cone is the identity chart: every derivative reading sits at
  // exact zero after the roundoff clip
  const MetricField fe = cone_field(euclid_cone(0.0, 1.2),
                                    std::ldexp(1.0, -33), 1.05);
  const SlopeReport z1 = blowup_slope(fe, 1, radii);
  const SlopeReport z2 = blowup_slope(fe, 2, radii);
  CHECK(z1.zero_field);
  CHECK(z2.zero_field);
  for (double s : z1.sup) CHECK(s == 0.0);
  for (double s : z2.sup) CHECK(s == 0.0);
}

TEST_CASE("scaled-cone scal follows the certified power law") {
  const WarpedMetric rn = rn_metric();
  const auto radii = dyadic_radii(1, 30);
  std::vector<double> scal;
  for (double r : radii)
    scal.push_back(scal_warped(rn, Interval::point(r)).mid());
  const PowerLawFit fit = fit_power_law(radii, scal, 4, 4);
  CHECK(fit.slope == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(fit.prefactor == doctest::Approx(42.0).epsilon(1e-12));
  CHECK(fit.prefactor >= 42.0 - 1e-6);
}

TEST_CASE("power-law fits honor the end discards") {
  const auto t = dyadic_radii(0, 20);
  std::vector<double> v;
  for (double ti : t) v.push_back(3.0 * std::pow(ti, -1.5));
  const PowerLawFit clean = fit_power_law(t, v);
  CHECK(clean.slope == doctest::Approx(-1.5).epsilon(1e-12));
  CHECK(clean.prefactor == doctest::Approx(3.0).epsilon(1e-12));

  std::vector<double> dirty = v;
  for (int i = 0; i < 4; ++i) dirty[i] *= 100.0;
  for (int i = 17; i <= 20; ++i) dirty[i] *= 0.01;
  const PowerLawFit fit = fit_power_law(t, dirty, 4, 4);
  CHECK(fit.slope == doctest::Approx(-1.5).epsilon(1e-12));
  CHECK(fit.prefactor == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("analysis entry points reject bad input") {
  const WarpedMetric cap = reference_cap();
  CHECK_THROWS_AS(certify_scal_positive(cap, Interval::point(-1.0), 21.0),
                  DomainError);
  CHECK_THROWS_AS(certify_scal_positive(cap, Interval(-20.0, 0.0), 21.0),
                  DomainError);
  {
    ExhaustOptions o;
    o.levels = -1;
    CHECK_THROWS_AS(certify_scal_positive(cap, cap.domain(), 21.0, o),
                    DomainError);
  }
  {
    const WarpedMetric thin =
        make_warped(affine_profile(Interval(0.0, 4.0e-7), 0.0, 1.0, "t"),
                    SphereMetric::round(7), "thin");
    CHECK_THROWS_AS(certify_scal_positive(thin, thin.domain(), 0.0),
                    DomainError);
  }

  CHECK_THROWS_AS(
      bilipschitz_constant(make_warped(sin_profile(Interval(0.1, 3.0)),
                                       SphereMetric::round(7), "sin-cone")),
      DomainError);
  CHECK_THROWS_AS(
      bilipschitz_constant(make_warped(
          affine_profile(Interval(-1.0, 0.0), 0.0, 1.0, "t"),
          SphereMetric::round(7), "negative")),
      DomainError);

  const MetricField a =
      warped_polar_field(euclid_cone(0.25, 1.0), ChartId::North);
  const MetricField b =
      warped_polar_field(euclid_cone(2.0, 3.0), ChartId::North);
  CHECK_THROWS_AS(bilipschitz_constant(a, b, 50), DomainError);
  CHECK_THROWS_AS(bilipschitz_constant(a, a, 0), DomainError);
  {
    MetricField small = chart_field(SphereMetric::round(2), ChartId::North);
    CHECK_THROWS_AS(bilipschitz_constant(a, small, 50), DomainError);
  }

  const WarpedMetric e8 = euclid_cone(0.0, 1.2);
  {
    SobolevOptions o;
    o.annuli = 3;
    CHECK_THROWS_AS(sobolev_table(e8, o), DomainError);
    o.annuli = 49;
    CHECK_THROWS_AS(sobolev_table(e8, o), DomainError);
  }
  {
    SobolevOptions o;
    o.radial_order = 8;
    CHECK_THROWS_AS(sobolev_table(e8, o), DomainError);
  }
  {
    SobolevOptions o;
    o.directions = 3;
    CHECK_THROWS_AS(sobolev_table(e8, o), DomainError);
  }
  {
    SobolevOptions o;
    o.step_rel = 0.02;
    CHECK_THROWS_AS(sobolev_table(e8, o), DomainError);
  }
  // domain misses the outer collar / the deep annuli
  CHECK_THROWS_AS(sobolev_table(euclid_cone(0.0, 1.0)), DomainError);
  CHECK_THROWS_AS(sobolev_table(euclid_cone(0.25, 1.2)), DomainError);
  {
    SobolevTable tab = sobolev_table(e8);
    CHECK_THROWS_AS(sobolev_norm(tab, 0.5), DomainError);
    tab.f_values.pop_back();
    CHECK_THROWS_AS(sobolev_norm(tab, 6.0), DomainError);
  }

  const MetricField fe = cone_field(e8, std::ldexp(1.0, -33), 1.05);
  const auto radii = dyadic_radii(1, 30);
  CHECK_THROWS_AS(blowup_slope(fe, 0, radii), DomainError);
  CHECK_THROWS_AS(blowup_slope(fe, 3, radii), DomainError);
  CHECK_THROWS_AS(blowup_slope(fe, 1, {}), DomainError);
  CHECK_THROWS_AS(blowup_slope(fe, 1, {0.5, -0.25}), DomainError);

  CHECK_THROWS_AS(dyadic_radii(5, 4), DomainError);
  CHECK_THROWS_AS(fit_power_law({1.0, 0.5}, {1.0}), DomainError);
  CHECK_THROWS_AS(fit_power_law({1.0, 0.5, 0.25}, {1.0, 2.0, 3.0}, 1, 1),
                  DomainError);
  CHECK_THROWS_AS(fit_power_law({1.0, 0.5}, {1.0, -2.0}), DomainError);
  CHECK_THROWS_AS(fit_power_law({1.0, 1.0}, {1.0, 2.0}), DomainError);
  CHECK_THROWS_AS(fit_power_law({1.0, 0.5}, {1.0, 2.0}, -1, 0), DomainError);
}
