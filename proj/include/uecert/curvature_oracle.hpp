#pragma once

// Finite-difference curvature oracle: an implementation-independent route to
// the scalar curvature of a coordinate metric field, used to cross-check
// every closed-form curvature formula in the library.
//
// First derivatives of g use the 4th-order central stencil
//   f'(x) ~ [f(x-2h) - 8 f(x-h) + 8 f(x+h) - f(x+2h)] / (12h),
// Christoffel symbols come from the inverse metric, and derivatives of the
// Christoffel symbols nest the same stencil (total stencil radius 4h).
// scal_fd Richardson-extrapolates the h and h/2 evaluations,
//   (16 D(h/2) - D(h)) / 15,
// cancelling the h^4 truncation term.
//
// Step-size policy: the raw value carries truncation ~ C h^4 and roundoff
// ~ eps/h^2, so the default step sits near the balance point 2e-3 * scale,
// clamped to a fifth of the distance to the domain boundary and to the
// nearest smoothness kink (field.clearance).  Fields with large high-order
// derivatives or exactly-constant metrics may override the step.

#include <cstdint>
#include <functional>
#include <vector>

#include "uecert/metric_field.hpp"

namespace uecert {

struct OracleOptions {
  double step = 0.0;        // 0 -> automatic per-point step
  bool richardson = true;   // scal_fd: extrapolate (h, h/2)
};

// stencil radius of scal_fd_raw in units of the step
inline constexpr double kScalStencilRadius = 4.0;

double default_step(const MetricField& field, const Eigen::VectorXd& x);

// dg[k](i,j) = d_k g_ij
std::vector<Eigen::MatrixXd> metric_d1(const MetricField& field,
                                       const Eigen::VectorXd& x, double h);

// gamma[k](i,j) = Gamma^k_ij
std::vector<Eigen::MatrixXd> christoffel(const MetricField& field,
                                         const Eigen::VectorXd& x, double h);

// 4th-order scalar curvature at a single step (no extrapolation)
double scal_fd_raw(const MetricField& field, const Eigen::VectorXd& x,
                   double h);

// Richardson-extrapolated scalar curvature (or raw value if disabled)
double scal_fd(const MetricField& field, const Eigen::VectorXd& x,
               const OracleOptions& opts = {});

// Mean curvature (trace of the shape operator) of the coordinate slice
// {x_axis = const} with unit normal e_axis: H = (1/2) tr(g^{-1} d_axis g).
// Requires the axis coordinate line to be unit and orthogonal to the slice
// (g e_axis = e_axis), as in the polar fields.
double mean_curvature_fd(const MetricField& field, const Eigen::VectorXd& x,
                         int axis, const OracleOptions& opts = {});

// Deterministic rejection sampler: points whose full stencil cloud stays
// inside the box, the membership predicate, and the smoothness clearance.
// margin is the required clearance in units of the step bound.
std::vector<Eigen::VectorXd> sample_points(const MetricField& field,
                                           long count, double step_bound,
                                           std::uint64_t seed = 0,
                                           double margin = 5.0);

struct OracleDeviation {
  double max_dev = 0.0;   // max |fd - cf| / max(1, |cf|)
  double mean_dev = 0.0;
  long n = 0;
  Eigen::VectorXd worst;
  double worst_fd = 0.0;
  double worst_cf = 0.0;
};

OracleDeviation compare_closed_form(
    const MetricField& field,
    const std::function<double(const Eigen::VectorXd&)>& closed_form,
    long n_points, const OracleOptions& opts = {}, std::uint64_t seed = 0);

// log2 of the error ratio between steps h and h/2 against a known exact
// value; ~4 for a clean 4th-order stencil
double measured_order(const MetricField& field, const Eigen::VectorXd& x,
                      double exact, double h);

}  // namespace uecert
