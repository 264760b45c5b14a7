#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "uecert/errors.hpp"
#include "uecert/rng.hpp"
#include "uecert/warped_metric.hpp"

using namespace uecert;

namespace {

WarpedMetric flat_cone_8() {
  return make_warped(affine_profile({0.1, 10.0}, 0.0, 1.0, "t"),
                     SphereMetric::round(7), "flat-cone-8");
}

WarpedMetric sin_cap_4() {
  return make_warped(sin_profile({0.3, 2.8}), SphereMetric::round(3),
                     "sin-cap-4");
}

}  // namespace

TEST_CASE("f = t over the unit round fiber is exactly flat") {
  const WarpedMetric g = flat_cone_8();
  const Interval whole = scal_warped(g, g.domain());
  CHECK(whole.lo == 0.0);
  CHECK(whole.hi == 0.0);
  const Interval piece = scal_warped(g, Interval(0.37, 5.11));
  CHECK(piece.width() == 0.0);
  CHECK(piece.contains(0.0));
}

TEST_CASE("f = sin over round S^3 has scal = 12") {
  const WarpedMetric g = sin_cap_4();
  const Interval at_pt = scal_warped(g, Interval::point(0.7));
  CHECK(at_pt.contains(12.0));
  CHECK(at_pt.width() < 1e-12);

  BisectionOptions opt;
  opt.max_depth = 45;
  opt.leaf_budget = 3'000'000;
  opt.width_goal = 1.2e-5;  // 1e-6 * n(n-1)
  const Interval rng = scal_warped_range(g, Interval(0.3, 0.4), opt);
  CHECK(rng.contains(12.0));
  CHECK(rng.width() <= 1.2e-5);

  // loose sweep over most of the domain still brackets the constant
  BisectionOptions loose;
  loose.max_depth = 10;
  const Interval broad = scal_warped_range(g, Interval(0.3, 2.8), loose);
  CHECK(broad.contains(12.0));
}

TEST_CASE("cone profile t/lambda over a scaled round fiber") {
  const double lambda = std::sqrt(84.0);
  const WarpedMetric g =
      make_warped(affine_profile({0.5, 20.0}, 0.0, 1.0 / lambda, "t/lambda"),
                  SphereMetric::scaled_round(7, 42.0), "rn-model");
  const Interval s1 = scal_warped(g, Interval::point(1.0));
  CHECK(std::abs(s1.mid() - 42.0) < 1e-11);
  CHECK(s1.width() < 1e-11);
  // scal scales like 1/t^2
  const Interval s2 = scal_warped(g, Interval::point(2.0));
  CHECK(std::abs(s2.mid() - 42.0 / 4.0) < 1e-11);
}

TEST_CASE("slice mean curvatures") {
  const WarpedMetric cone = flat_cone_8();
  const Interval h2 = mean_curvature_slice(cone, 2.0);
  CHECK(h2.contains(3.5));
  CHECK(h2.width() < 1e-14);

  const WarpedMetric cap = sin_cap_4();
  const Interval h9 = mean_curvature_slice(cap, 0.9);
  CHECK(std::abs(h9.mid() - 3.0 * std::cos(0.9) / std::sin(0.9)) < 1e-12);
}

TEST_CASE("curvature scaling law under profile rescaling") {
  const WarpedMetric g = sin_cap_4();
  const double c = 2.5;
  const WarpedMetric gc =
      make_warped(g.f.rescaled(c), g.h, "sin-cap-4-rescaled");
  for (double t : {0.4, 1.0, 2.0}) {
    const Interval a = scal_warped(g, Interval::point(t));
    const Interval b = scal_warped(gc, Interval::point(c * t));
    CHECK(std::abs(b.mid() - a.mid() / (c * c)) < 1e-10);
  }
}

TEST_CASE("interval evaluation is inclusion isotone") {
  const WarpedMetric g = sin_cap_4();
  Rng rng(41);
  for (int rep = 0; rep < 200; ++rep) {
    const double a = rng.uniform(0.3, 2.7);
    const double b = rng.uniform(a, 2.8);
    const Interval parent(a, b);
    const double sa = rng.uniform(a, b);
    const double sb = rng.uniform(sa, b);
    const Interval pv = scal_warped(g, parent);
    const Interval cv = scal_warped(g, Interval(sa, sb));
    CHECK(pv.contains(cv));
  }
}

TEST_CASE("conformal change: constant factor") {
  const WarpedMetric g = sin_cap_4();  // n = 4, scal = 12
  const double k = 2.3;
  const ConformalFactor u =
      profile_factor(constant_profile(g.domain(), k, "const-u"));
  // u^{4/(n-2)} g = u^2 g for n = 4, so scal becomes 12 / k^2
  const Interval s = scal_conformal(g, u, Interval::point(1.1));
  CHECK(std::abs(s.mid() - 12.0 / (k * k)) < 1e-10);
  CHECK(s.width() < 1e-10);
}

TEST_CASE("conformal change: flat metric times a harmonic factor stays flat") {
  // scal(u^{4/(n-2)} delta) = -a u^{-(n+2)/(n-2)} Lap u, and u = 1 + t^{2-n}
  // is harmonic, so the conformal scalar curvature vanishes identically.
  const WarpedMetric g = make_warped(affine_profile({0.2, 6.0}, 0.0, 1.0, "t"),
                                     SphereMetric::round(7), "flat-8");
  ConformalFactor u;
  u.name = "1+t^-6";
  u.eval = [](const Interval& t) {
    ProfileValues pv;
    pv.v = Interval::point(1.0) + pow_i(t, -6L);
    pv.d1 = -6.0 * pow_i(t, -7L);
    pv.d2 = 42.0 * pow_i(t, -8L);
    return pv;
  };
  for (double t : {0.5, 1.0, 2.0, 5.0}) {
    const Interval s = scal_conformal(g, u, Interval::point(t));
    CHECK(s.mag() < 1e-9);
  }
}

TEST_CASE("polar field matrices") {
  const WarpedMetric g = sin_cap_4();
  const MetricField field = warped_polar_field(g, ChartId::North);
  CHECK(field.dim == 4);
  Rng rng(43);
  for (int rep = 0; rep < 50; ++rep) {
    Eigen::VectorXd x(4);
    for (int i = 0; i < 3; ++i) x[i] = rng.uniform(-0.5, 0.5);
    x[3] = rng.uniform(0.4, 2.7);
    REQUIRE(field.in_box(x));
    const Eigen::MatrixXd m = field.eval(x);
    const double w = 1.0 + x.head(3).squaredNorm();
    const double ft = std::sin(x[3]);
    Eigen::MatrixXd want = Eigen::MatrixXd::Zero(4, 4);
    want.topLeftCorner(3, 3) =
        (ft * ft) * (4.0 / (w * w)) * Eigen::MatrixXd::Identity(3, 3);
    want(3, 3) = 1.0;
    CHECK((m - want).norm() < 1e-13);
    // sin profile has no interior knots; clearance is just the chart wall
    CHECK(field.clearance_at(x) == doctest::Approx(1.0 - x.head(3).norm()));
  }
  Eigen::VectorXd outside(4);
  outside << 0.9, 0.9, 0.9, 1.0;
  CHECK(!field.in_box(outside));
}

TEST_CASE("cone field matrices") {
  const WarpedMetric flat = flat_cone_8();
  const MetricField f1 = cone_field(flat, 0.2, 3.0);
  Rng rng(47);
  for (int rep = 0; rep < 50; ++rep) {
    Eigen::VectorXd x(8);
    for (int i = 0; i < 8; ++i) x[i] = rng.normal();
    x.normalize();
    x *= rng.uniform(0.3, 2.8);
    REQUIRE(f1.in_box(x));
    CHECK((f1.eval(x) - Eigen::MatrixXd::Identity(8, 8)).norm() < 1e-14);
  }

  const WarpedMetric scaled =
      make_warped(affine_profile({0.1, 10.0}, 0.0, 1.0, "t"),
                  SphereMetric::scaled_round(7, 4.0), "scaled-cone");
  const MetricField f2 = cone_field(scaled, 0.2, 3.0);
  for (int rep = 0; rep < 50; ++rep) {
    Eigen::VectorXd x(8);
    for (int i = 0; i < 8; ++i) x[i] = rng.normal();
    x.normalize();
    const Eigen::VectorXd q = x;
    x *= rng.uniform(0.3, 2.8);
    const Eigen::MatrixXd want =
        4.0 * (Eigen::MatrixXd::Identity(8, 8) - q * q.transpose()) +
        q * q.transpose();
    CHECK((f2.eval(x) - want).norm() < 1e-13);
  }

  // clearance honours the annulus walls
  Eigen::VectorXd near_wall = Eigen::VectorXd::Zero(8);
  near_wall[0] = 0.25;
  CHECK(f2.clearance_at(near_wall) == doctest::Approx(0.05));

  CHECK_THROWS_AS(cone_field(flat, 0.05, 3.0), DomainError);
  CHECK_THROWS_AS(cone_field(flat, 3.0, 0.2), DomainError);
}

TEST_CASE("cone field over a twisted fiber knows its kink cones") {
  const SphereMetric tw = apply_diffeo(SphereDiffeo::latitude_twist(7, 0.15),
                                       SphereMetric::round(7));
  const WarpedMetric g = make_warped(
      affine_profile({0.1, 10.0}, 0.0, 1.0, "t"), tw, "twist-cone");
  const MetricField field = cone_field(g, 0.2, 3.0);
  // on the latitude knot cone s = 0.6 the clearance collapses
  Eigen::VectorXd x = Eigen::VectorXd::Zero(8);
  x[0] = std::sqrt(1.0 - 0.36);
  x[7] = 0.6;
  x *= 1.7;
  CHECK(field.clearance_at(x) < 1e-12);
  // away from the cones it is positive
  Eigen::VectorXd y = Eigen::VectorXd::Zero(8);
  y[0] = 1.0;
  y[7] = 0.0;
  y *= 1.7;
  CHECK(field.clearance_at(y) > 0.1);
  // the metric is still the pullback of the flat cone: volume is preserved
  CHECK(std::abs(field.eval(y).determinant() - 1.0) < 1e-12);
}

TEST_CASE("torus twist field") {
  const MetricField field = torus_twist_field(4);
  CHECK(field.dim == 4);
  const Eigen::VectorXd c = Eigen::VectorXd::Constant(4, M_PI);

  // identity outside the taper support
  Eigen::VectorXd x = c;
  x[0] += 1.05;
  x[1] += 0.2;
  CHECK((field.eval(x) - Eigen::MatrixXd::Identity(4, 4)).norm() == 0.0);

  // identity on the inner plateau too (locally rigid rotation)
  Eigen::VectorXd xin = c;
  xin[0] += 0.3;
  CHECK((field.eval(xin) - Eigen::MatrixXd::Identity(4, 4)).norm() < 1e-15);

  // genuinely non-flat-looking in the ramp zone, but volume preserving
  Eigen::VectorXd xr = c;
  xr[0] += 0.4;
  xr[3] += 0.2;
  const Eigen::MatrixXd m = field.eval(xr);
  CHECK((m - Eigen::MatrixXd::Identity(4, 4)).norm() > 1e-3);
  CHECK((m - m.transpose()).norm() == 0.0);
  CHECK(std::abs(m.determinant() - 1.0) < 1e-12);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
  CHECK(eig.eigenvalues().minCoeff() > 0.0);

  // clearance vanishes on the taper knot sphere
  Eigen::VectorXd xk = c;
  xk[2] += 0.45;
  CHECK(field.clearance_at(xk) < 1e-12);
  CHECK(field.clearance_at(xr) > 0.0);
  CHECK(!field.in_box(c));  // center excluded

  CHECK_THROWS_AS(torus_twist_field(2), DomainError);
  CHECK_THROWS_AS(torus_twist_field(4, 0.4, 0.9, 0.45), DomainError);
}

TEST_CASE("degenerate inputs throw") {
  const WarpedMetric g = make_warped(
      affine_profile({0.0, 2.0}, -1.0, 1.0, "t-1"), SphereMetric::round(3),
      "bad-cone");
  CHECK_THROWS_AS(scal_warped(g, Interval(0.5, 1.5)), MetricError);
  CHECK_THROWS_AS(mean_curvature_slice(g, 1.0), MetricError);

  const WarpedMetric ok = sin_cap_4();
  const ConformalFactor u =
      profile_factor(constant_profile(ok.domain(), -2.0, "neg"));
  CHECK_THROWS_AS(scal_conformal(ok, u, Interval::point(1.0)), MetricError);
}
