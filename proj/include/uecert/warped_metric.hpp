#pragma once

// Warped products g = dt^2 + f(t)^2 h on I x S^{n-1} and the closed-form
// curvature quantities this project certifies:
//
//   scal_g(t) = ( scal_h - 2(n-1) f f'' - (n-1)(n-2) f'^2 ) / f^2
//   H(t0)     = (n-1) f'(t0) / f(t0)        (slice mean curvature, normal d/dt)
//
// plus the radial conformal-change law for u > 0 and exponent 4/(n-2):
//
//   scal(u^{4/(n-2)} g) = u^{-(n+2)/(n-2)} [ scal_g u - a (u'' + (n-1)(f'/f)u') ]
//   a = 4(n-1)/(n-2)
//
// Everything evaluates in interval arithmetic; range statements come from the
// adaptive bisection engine.  The module also builds the coordinate metric
// fields (polar chart, Cartesian cone, twisted flat torus) consumed by the
// finite-difference curvature oracle.

#include <string>

#include "uecert/certificate.hpp"
#include "uecert/enclosure.hpp"
#include "uecert/interval.hpp"
#include "uecert/metric_field.hpp"
#include "uecert/profile.hpp"
#include "uecert/sphere_metrics.hpp"

namespace uecert {

struct WarpedMetric {
  int n = 3;           // total dimension; fiber dimension is n-1
  WarpingProfile f;    // warping function on the t-domain
  SphereMetric h;      // fiber metric on S^{n-1}
  std::string name;

  Interval domain() const { return f.domain(); }
  void validate() const;
};

WarpedMetric make_warped(WarpingProfile f, SphereMetric h, std::string name);

// Interval enclosure of scal_g over a t-box (subdivide via enclose_range for
// tight ranges).  Requires f > 0 on the box.
Interval scal_warped(const WarpedMetric& g, const Interval& t);

EnclosureFn scal_warped_fn(const WarpedMetric& g);

Interval scal_warped_range(const WarpedMetric& g, const Interval& t,
                           const BisectionOptions& opts = {});

Certificate certify_scal_lower_bound(const WarpedMetric& g, const Interval& t,
                                     double target,
                                     const BisectionOptions& opts = {});

// mean curvature of the slice {t0} x S^{n-1} with respect to d/dt
Interval mean_curvature_slice(const WarpedMetric& g, double t0);

// radial conformal factor u(t) > 0 with two derivatives
struct ConformalFactor {
  std::function<ProfileValues(const Interval&)> eval;
  std::string name;
};

ConformalFactor profile_factor(const WarpingProfile& u);

Interval scal_conformal(const WarpedMetric& g, const ConformalFactor& u,
                        const Interval& t);

// --- coordinate fields for the finite-difference oracle --------------------

// chart realization of a fiber metric: u |-> H_chart(u) on |u| <= radius
MetricField chart_field(const SphereMetric& h, ChartId chart,
                        double radius = 0.95);

// polar chart (u, t): block matrix diag(f(t)^2 H_chart(u), 1)
MetricField warped_polar_field(const WarpedMetric& g, ChartId chart,
                               double chart_radius = 1.0);

// conformal polar chart: u(t)^{4/(n-2)} * diag(f(t)^2 H_chart(u), 1)
MetricField conformal_polar_field(const WarpedMetric& g,
                                  const ConformalFactor& u, ChartId chart,
                                  double chart_radius = 1.0);

// Cartesian cone coordinates x = t q on the annulus r in (r_lo, r_hi):
//   g_ij(x) = (f(r)/r)^2 B(q)(P e_i, P e_j) + x_i x_j / r^2,  P = I - qq^T
// For f(t) = t over the unit round fiber this is the identity matrix.
MetricField cone_field(const WarpedMetric& g, double r_lo, double r_hi);

// Flat n-torus pulled back by a compactly supported twist around the center
// of the fundamental domain [0,2pi)^n: F(x) = c + R_{theta(x)} (x - c) with
// theta = taper(rho) * bump(z/rho), rho = |x-c|, z the last coordinate of
// x - c, and R rotating the first two coordinates.  For rho <= r1 this is
// exactly the cone of a latitude twist with plateau v0 and ramp vr; identity
// outside rho = r2, so it extends periodically; scal == 0 everywhere.
MetricField torus_twist_field(int n, double amp = 0.4, double r1 = 0.45,
                              double r2 = 0.9, double rho_min = 0.05,
                              double v0 = 0.6, double vr = 0.5);

}  // namespace uecert
