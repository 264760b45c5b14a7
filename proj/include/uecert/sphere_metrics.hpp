#pragma once

// Metrics on S^m presented through two stereographic charts, with closed-form
// scalar-curvature ranges and relative-eigenvalue bounds against the round
// metric.
//
// Families:
//   Round(r)        metric of the radius-r sphere, r^2 * h0
//   ScaledRound(c)  c * h0 (Round(r) == ScaledRound(r^2))
//   Berger3(a, b)   left-invariant metric a^2 s1 (x) s1 + b^2 (s2 (x) s2 +
//                   s3 (x) s3) on S^3, si dual to the unit Killing frame
//   Pullback(F, h)  F^* h for a sphere diffeomorphism F
//
// Every family evaluates as an ambient symmetric form B(x) on R^{m+1}
// restricted to T_x S^m; chart matrices are J^T B J with J the stereographic
// parametrization Jacobian.  This is what makes pullbacks composable: the
// diffeomorphisms carry closed-form ambient differentials.

#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "uecert/certificate.hpp"
#include "uecert/interval.hpp"

namespace uecert {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

enum class ChartId { North, South };  // named by the projection pole

// Stereographic parametrization P : R^m -> S^m subset R^{m+1}.
// North chart: P(0) = south pole, |u| -> inf approaches the north pole.
Vec chart_point(ChartId chart, const Vec& u);
Mat chart_jacobian(ChartId chart, const Vec& u);  // (m+1) x m
Vec sphere_to_chart(ChartId chart, const Vec& x);
// Transition u |-> u/|u|^2 between the charts (defined for u != 0).
Vec chart_transition(const Vec& u);
Mat chart_transition_jacobian(const Vec& u);

// Charts are usable on |u| <= kChartRadius; the overlap annulus used by
// consistency checks is 1/2 < |u| < 2.
inline constexpr double kChartRadius = 4.0;

struct SphereDiffeo {
  enum class Kind { Identity, Rotation, LatitudeTwist };

  int dim = 2;  // m
  Kind kind = Kind::Identity;
  Mat rotation;  // (m+1)x(m+1), orthogonal

  // LatitudeTwist: x |-> R_{phi(s)} x with s = x_{m+1} and R_theta the
  // rotation of the (x1,x2)-plane; phi = amp * plateau bump of s built from
  // the quintic smoothstep, identically zero near the poles.
  double amp = 0.15;
  double s0 = 0.6;
  double ramp = 0.5;

  static SphereDiffeo identity(int m);
  static SphereDiffeo rotation_map(const Mat& q);
  static SphereDiffeo latitude_twist(int m, double amp, double s0 = 0.6,
                                     double ramp = 0.5);

  Vec apply(const Vec& x) const;
  // ambient differential; its restriction to T_x S^m is the map differential
  Mat differential(const Vec& x) const;
  SphereDiffeo inverse() const;

  // twist angle profile and derivative as functions of latitude
  double angle(double s) const;
  double angle_d1(double s) const;

  double max_twist_rate() const;   // sup |phi'|
  double max_twist_curv() const;   // sup |phi''|
  double condition_bound() const;  // stored bound on cond(dF)
  // latitudes where the twist profile joins its constant pieces
  std::vector<double> knot_latitudes() const;
};

struct SphereMetric {
  enum class Family { Round, ScaledRound, Berger3, Pullback };

  int dim = 2;  // m
  Family family = Family::Round;
  double radius = 1.0;   // Round
  double scale = 1.0;    // ScaledRound
  double berger_a = 1.0;
  double berger_b = 1.0;
  std::shared_ptr<const SphereDiffeo> map;     // Pullback
  std::shared_ptr<const SphereMetric> base;    // Pullback

  static SphereMetric round(int m, double r = 1.0);
  static SphereMetric scaled_round(int m, double c);
  static SphereMetric berger3(double a, double b);

  std::string describe() const;
};

SphereMetric apply_diffeo(const SphereDiffeo& f, const SphereMetric& h);

// Ambient symmetric form B(x) with h_x(v,w) = v^T B(x) w on T_x S^m.
Mat ambient_form(const SphereMetric& h, const Vec& x);

// Chart matrix H_ij(u) of h at chart point u (m x m, symmetric positive
// definite).  Throws MetricError outside the chart domain or on a degenerate
// result.
Mat metric_matrix_at(const SphereMetric& h, ChartId chart, const Vec& u);

// Certified enclosure of the scalar curvature range (closed forms: these
// families have constant scalar curvature; pullbacks inherit the base range).
Interval scal_range(const SphereMetric& h);

struct EigenBounds {
  Interval lam;            // padded enclosure of relative eigenvalues vs h0
  double grid_min = 1.0;   // measured extremes over the sample set
  double grid_max = 1.0;
  double padding = 0.0;    // Lipschitz padding added to the grid extremes
  long samples = 0;
  std::string method;      // "closed-form", "grid+padding", "grid-only"
  double big_lambda() const {
    if (lam.lo <= 0.0) return std::numeric_limits<double>::infinity();
    return std::max(std::max(lam.hi, 1.0 / lam.lo), 1.0);
  }
};

// Bounds on the eigenvalues of h relative to the unit round metric h0,
// i.e. lambda with  lambda_min h0 <= h <= lambda_max h0.
//
// Round / ScaledRound / Berger3 have constant relative eigenvalues (closed
// form, zero padding).  LatitudeTwist pullbacks of round-family bases are
// invariant under rotations fixing the (x1,x2)-plane and the poles, so the
// eigenvalues depend only on (latitude, |(x1,x2)|); they are sampled on a
// dense 2-D slice grid and padded by a stored Lipschitz constant.  Other
// pullbacks fall back to grid-only evidence.
EigenBounds eigen_bounds_vs_round(const SphereMetric& h, long samples = 0);

Certificate bilipschitz_certificate_vs_round(const SphereMetric& h,
                                             long samples = 0);

}  // namespace uecert
