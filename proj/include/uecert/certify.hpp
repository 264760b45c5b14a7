#pragma once
// Whole-construction certificates: uniform scalar-curvature lower bounds via
// compact exhaustion of singular ends, bilipschitz constants against model
// references, Sobolev membership of cone coefficients on the punctured disk,
// and fitted derivative blow-up rates.

#include <cstdint>
#include <string>
#include <vector>

#include "uecert/certificate.hpp"
#include "uecert/enclosure.hpp"
#include "uecert/metric_field.hpp"
#include "uecert/warped_metric.hpp"

namespace uecert {

// --- scalar curvature lower bounds -----------------------------------------

struct ExhaustOptions {
  // margins 2^-0 .. 2^-levels lifted off a singular endpoint
  int levels = 20;
  BisectionOptions bisection{26, 50000, 0.0};
};

// Certifies scal_g >= target on dom.  If the warping function is positive at
// dom.lo the claim is a single interval-bisection certificate; if it vanishes
// there (conical tip), the open end is exhausted by the compact pieces
// [dom.lo + 2^-j, dom.hi] and the returned certificate is the union claim
// with per-piece evidence in params["evidence"].  Interval arithmetic cannot
// touch the singular point itself, so the exhaustion is the strongest
// available statement.
Certificate certify_scal_positive(const WarpedMetric& g, const Interval& dom,
                                  double target,
                                  const ExhaustOptions& opts = {});

// --- bilipschitz constants ---------------------------------------------------

// Smallest Lambda with Lambda^-1 g0 <= g <= Lambda g0 as quadratic forms.
//
// Cone form: for g = (c t)^2 h + dt^2 against the Euclidean cone t^2 h0 + dt^2
// the relative eigenvalues are {c^2 eig(h vs h0), 1} at every point, so the
// constant comes from the fiber eigenvalue bounds exactly (closed form or
// grid+padding, depending on the fiber family).
Certificate bilipschitz_constant(const WarpedMetric& g, long samples = 0);

// Field form: relative eigenvalue range sampled at deterministic points of
// the common region; grid-only, so at most CERTIFIED-ON-GRID.
Certificate bilipschitz_constant(const MetricField& g, const MetricField& g0,
                                 long n_points = 200,
                                 std::uint64_t seed = 0);

// --- Sobolev membership on the punctured disk --------------------------------

struct SobolevOptions {
  int annuli = 40;        // dyadic annuli [2^-j-1, 2^-j], j = 0..annuli-1
  int radial_order = 16;  // Gauss-Legendre nodes per annulus
  int directions = 16;    // deterministic sphere directions
  double step_rel = 1e-3; // FD step relative to the radius
};

// Cached quadrature of F = sum_{|beta|<=2} |d^beta g_ij| over the dyadic
// annuli of the coordinate cone chart; one table serves every p.
struct SobolevTable {
  int n = 0;
  std::string subject;
  int annuli = 0, radial = 0, directions = 0;
  std::vector<double> f_values;  // node-major [annulus][radial][direction]
  std::vector<double> weights;   // Lebesgue weight per node
  std::vector<double> sup_f;     // sup of F per annulus
  std::vector<double> sup_coeff; // sup of max |g_ij| per annulus
  double total_volume = 0.0;
};

struct SobolevEstimate {
  double p = 0.0;
  int k = 2;                      // derivative orders included
  double norm_value = 0.0;        // (mean of F^{p/2})^{2/p}, volume-normalized
  bool finite = false;
  bool indeterminate = false;     // quadrature did not settle the ratio test
  double tail_ratio = 0.0;        // geometric mean annulus-mass ratio
  std::vector<double> scale_sup;  // sup F per annulus
  std::vector<double> scale_mass; // integral of F^{p/2} per annulus
  double coeff_sup = 0.0;         // sup over nodes of max |g_ij|
};

SobolevTable sobolev_table(const WarpedMetric& g,
                           const SobolevOptions& opts = {});
SobolevEstimate sobolev_norm(const SobolevTable& table, double p);
SobolevEstimate sobolev_norm(const WarpedMetric& g, double p,
                             const SobolevOptions& opts = {});

// --- derivative blow-up slopes ----------------------------------------------

struct SlopeOptions {
  int directions = 16;
  double step_rel = 1e-3;
  int discard = 4;  // scales dropped at each end of the fit
};

struct SlopeReport {
  int k = 1;
  std::vector<double> radii, sup;
  double slope = 0.0, prefactor = 0.0;
  bool zero_field = false;  // sup vanishes at every scale; slope undefined
  int used = 0;             // points entering the fit
};

// sup_{|x|=t} of the k-th derivative magnitude of the field coefficients,
// fitted as prefactor * t^slope over the given radii.
SlopeReport blowup_slope(const MetricField& field, int k,
                         const std::vector<double>& radii,
                         const SlopeOptions& opts = {});

std::vector<double> dyadic_radii(int j_lo, int j_hi);

// ln-ln least squares v ~ prefactor * t^slope over the window that survives
// the end discards; requires positive data there.
struct PowerLawFit {
  double slope = 0.0;
  double prefactor = 0.0;
};
PowerLawFit fit_power_law(const std::vector<double>& t,
                          const std::vector<double>& v, int discard_lo = 0,
                          int discard_hi = 0);

}  // namespace uecert
