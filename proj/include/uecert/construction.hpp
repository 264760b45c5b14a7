#pragma once

// Builders for the singular metrics this project certifies.
//
//  * Conical caps g = f(t)^2 h + dt^2 on S^{n-1} x (-R, 0]: f glues the cone
//    (t+R)/lambda to the constant collar f == 1 through a C^2 transition
//
//        f = alpha * ((t+R)/lambda - 1) + 1,
//
//    where alpha descends from 1 to 0 over a window of length L = R - 2 eps.
//    With the derivative budgets
//
//        slope_bound = (1/2) sqrt( C / (4 (n-1)(n-2)) ),
//        curv_bound  = C / (8 (n-1)),
//
//    and kernel extrema A1 = max|K'|, A2 = max|K''|, the template is feasible
//    iff L >= max( A1/slope_bound, sqrt(A2/curv_bound) ).  The assembled cap
//    satisfies the certifiable chain
//
//        scal_h >= C,  f <= 1,  (n-1)(n-2) f'^2 <= C/4,  2(n-1) f f'' <= C/4,
//
//    which forces scal >= C/2 pointwise down to the tip.
//
//  * The scaled-cone metric (t/lambda)^2 h + dt^2 with lambda^2 = 2(n-1)(n-2)
//    and scal_h >= 1: uniformly Euclidean on R^n minus the origin with
//    scal * t^2 >= lambda^2 / 2 > 0 and slice mean curvature (n-1)/lambda.
//
//  * Pullback singularities: smooth metrics whose coordinate expression
//    degenerates (round sphere as a sin-warped product over a twisted
//    equator; flat torus pulled back by the cone of a twist).  Closed-form
//    curvature is known exactly, so these drive the oracle.
//
// Feasibility violations throw InfeasibleError carrying the minimum feasible
// value; certification of the derivative chain runs in interval arithmetic.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "uecert/certificate.hpp"
#include "uecert/curvature_oracle.hpp"
#include "uecert/enclosure.hpp"
#include "uecert/interval.hpp"
#include "uecert/metric_field.hpp"
#include "uecert/profile.hpp"
#include "uecert/sphere_metrics.hpp"
#include "uecert/warped_metric.hpp"

namespace uecert {

// ---------------------------------------------------------------------------
// feasibility arithmetic

struct ProfileBounds {
  double slope_bound = 0.0;      // per-term budget for the f' chain
  double curvature_bound = 0.0;  // budget for the f'' chain
};

ProfileBounds profile_bounds(int n, double C);

// Transition kernel for alpha.  Quintic has certified closed-form extrema;
// the mollified (C-infinity) template's extrema come from the bisection
// engine as enclosures.
enum class TransitionKernel { Quintic, Mollified };

// Certified enclosures of (max|K'|, max|K''|) over [0, 1].
Interval kernel_max_d1(TransitionKernel k);
Interval kernel_max_d2(TransitionKernel k);

// Minimal transition length max(A1/slope, sqrt(A2/curv)); 0 for unbounded
// budgets.
double min_feasible_length(const ProfileBounds& bounds,
                           TransitionKernel k = TransitionKernel::Quintic);

// ---------------------------------------------------------------------------
// profiles

// alpha on [-R, 0]: 1 on [-R, -R+eps], kernel descent on [-R+eps, -eps],
// 0 on [-eps, 0].  Certifies -slope_bound <= alpha' <= 0 and
// |alpha''| <= curvature_bound by interval enclosure; throws InfeasibleError
// (min_feasible = minimal window length) if the window is too short.
WarpingProfile build_alpha(int n, double C, double R, double eps,
                           TransitionKernel k = TransitionKernel::Quintic);

// f = alpha * ((t+R)/lambda - 1) + 1 on [-R, 0].  Requires lambda >= R
// (so the cone factor stays in [-1, 0]); the curvature-side constraint
// lambda >= 4 sqrt((n-1)(n-2)/C) is enforced by assemble_conical_cap.
WarpingProfile build_f(const WarpingProfile& alpha, double R, double lambda);

// ---------------------------------------------------------------------------
// assembled metrics

// Conical cap over fiber h (dim n-1).  C is the certified lower end of
// scal_range(h) and must be positive.  Zero R/eps/lambda select the defaults
// eps = min(1, L_min/8), R = L_min + 2 eps rounded up to 2 decimals,
// lambda = max(R, 4 sqrt((n-1)(n-2)/C)).
WarpedMetric assemble_conical_cap(int n, const SphereMetric& h, double R = 0,
                                  double eps = 0, double lambda = 0,
                                  TransitionKernel k = TransitionKernel::Quintic);

// Interval certificates of the cap's curvature chain, in order:
//   fiber-scal-lower   scal_h >= C
//   profile-upper      f <= 1
//   slope-chain        (n-1)(n-2) f'^2 <= C/4
//   hessian-chain      2(n-1) f f'' <= C/4
// All four certified imply scal >= C/2 on the whole cap.
std::vector<Certificate> certify_cap_chain(const WarpedMetric& cap,
                                           const BisectionOptions& opts = {});

// Scaled cone (t/lambda)^2 h + dt^2 on (0, 2 lambda], lambda^2 = 2(n-1)(n-2).
// Requires scal_range(h).lo >= 1.
WarpedMetric build_rn_counterexample(int n, const SphereMetric& h);

// ---------------------------------------------------------------------------
// pullback singularities

enum class PullbackKind { Sphere, Torus };

struct PullbackSingularity {
  std::string kind;
  int n = 0;                        // total dimension
  double expected_scal = 0.0;       // exact closed-form scalar curvature
  MetricField field;                // coordinate realization for the oracle
  std::optional<WarpedMetric> model;  // sphere kind: the warped-product model
};

// sphere kind: sin(t)^2 Pullback(f, round) + dt^2 on (0, pi), the round
// S^{f.dim+1} in twisted polar coordinates (scal == n(n-1)); the field is
// the polar chart away from the poles.
// torus kind: flat T^{f.dim+1} pulled back by the cone of f around the
// center of the fundamental domain [0, 2pi)^n (scal == 0); the field is the
// punctured coordinate patch.
PullbackSingularity build_pullback_singularity(PullbackKind kind,
                                               const SphereDiffeo& f);

// ---------------------------------------------------------------------------
// oracle regression suite

struct OracleCase {
  std::string family;
  MetricField field;
  std::function<double(const Vec&)> closed_form;
  double tolerance = 1e-6;  // bound on compare_closed_form's max deviation
  OracleOptions opts{};
  long points = 40;
};

// Metric families with independently known curvature, exercising every
// closed-form route against the finite-difference oracle: flat/scaled/
// Berger/twisted cones, twisted chart, sphere and torus pullbacks, the
// scaled-cone counterexample, the assembled cap, and a conformal factor.
std::vector<OracleCase> builtin_oracle_suite();

}  // namespace uecert
