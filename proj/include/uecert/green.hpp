#pragma once

// Radial Green-type functions of the modified conformal Laplacian
//
//   L G = -a ( G'' + (n-1) (f'/f) G' ) + sigma G,   a = 4(n-1)/(n-2),
//
// on warped metrics g = dt^2 + f(t)^2 h with a conical tip at t = 0, and the
// conformal blow-up g_eps = (1 + eps G)^{4/(n-2)} g built on top of them.
//
// The solver works in the stripped variable v = t^{n-2} G, in which the
// singular branch G ~ t^{2-n} becomes the bounded solution of
//
//   v'' + [ (3-n)/t + nu ] v' + [ (2-n) nu / t - sigma/a ] v = 0,
//   nu = (n-1) ( f'/f - 1/t )      (identically zero on cones f = c t).
//
// Integration runs downward from the top of the grid: in that direction the
// regular branch v ~ t^{n-2} decays, so whatever admixture of it the seed
// carries dies off, and the solution is rescaled at t_start = t1/10 to match
// the two-term expansion v = 1 + c1 t^2, c1 = sigma/(2a(4-n)).  Shooting
// upward instead would amplify seed error by (T/t_start)^{n-2} -- about 25
// orders of magnitude for n = 8 -- which is why it is not offered.

#include <functional>
#include <string>
#include <vector>

#include "uecert/certificate.hpp"
#include "uecert/warped_metric.hpp"

namespace uecert {

// volume of the unit round sphere S^m
double sphere_volume(int m);

// leading coefficient 1/((n-2) omega_{n-1} a) that gives L G the unit Dirac
// mass at the tip (the classical constant divided by a)
double dirac_amplitude(int n);

enum class GreenNormalization { Dirac, Unit };

struct GreenOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  // > 0: classic fixed-step RK4 with this step (for order studies);
  // 0: adaptive embedded Dormand-Prince pair under rtol/atol
  double fixed_step = 0.0;
  GreenNormalization normalization = GreenNormalization::Dirac;
};

struct RadialGreenFunction {
  int n = 0;
  std::string model;                // name of the underlying metric
  std::vector<double> grid;         // strictly increasing radii in (0, T]
  std::vector<double> values;       // G(t_k) > 0
  std::vector<double> d1;           // G'(t_k)
  std::vector<double> d2;           // G''(t_k), implied by the ODE
  double sigma0 = 0.0;              // potential at the singular end
  double amplitude = 1.0;           // lim t^{n-2} G enforced by the rescale
  double c_fit = 0.0;               // log-log fit G ~ c_fit t^{p_fit} near 0
  double p_fit = 0.0;

  double t1() const { return grid.empty() ? 0.0 : grid.front(); }
  double T() const { return grid.empty() ? 0.0 : grid.back(); }
  // throws unless G > 0 on the grid and p_fit is within 0.05 of 2-n
  void validate() const;
};

// Solve L G = 0 on (t1, T] with G ~ amplitude * t^{2-n} at the tip.
// sigma must satisfy 0 <= sigma(t) <= min(1, scal_g(t)) on the grid (the
// degenerate sigma == 0 is admitted; it is the exact-cone solver oracle).
RadialGreenFunction solve_green(const WarpedMetric& g,
                                const std::function<double(double)>& sigma,
                                const std::vector<double>& grid,
                                const GreenOptions& opts = {});

// constant sigma = (1/2) min(1, inf scal_g over the grid span)
double default_sigma(const WarpedMetric& g, const std::vector<double>& grid);

// smallest c >= 1 with c^{-1} t^{2-n} <= G(t) <= c t^{2-n} across the grid;
// grid-level evidence (CERTIFIED-ON-GRID), REFUTED if the ratio degenerates
Certificate verify_green_bounds(const RadialGreenFunction& G);

// u = 1 + eps G as a C^2 radial factor on [t1, T]: piecewise quintic from
// the solver's (G, G', G'') data, so the interpolant's second derivative is
// the ODE-implied one at every knot.  Point evaluations only (thin
// intervals); this factor is numeric evidence, not a certified enclosure.
ConformalFactor green_factor(const RadialGreenFunction& G, double eps);

struct BlowupMetric {
  WarpedMetric base;
  RadialGreenFunction green;
  double eps = 0.0;
  ConformalFactor factor;  // u = 1 + eps G
};

BlowupMetric blowup_metric(const WarpedMetric& g, const RadialGreenFunction& G,
                           double eps);

struct CompletenessReport {
  std::vector<double> t_low;   // probed lower endpoints, decreasing
  std::vector<double> length;  // L(t) = int_t^T u(s)^{2/(n-2)} ds
  double slope = 0.0;          // fitted d log L / d log t over the small t
  bool lengths_grow = false;   // L increases monotonically as t decreases
  bool pass = false;           // lengths_grow and slope within 0.25 of -1
  std::string law;
};

// radial length growth of u^{4/(n-2)} g as the inner radius drops to 0
CompletenessReport completeness_check(const ConformalFactor& u, int n,
                                      double T,
                                      const std::vector<double>& t_low);
CompletenessReport completeness_check(const BlowupMetric& g_eps,
                                      const std::vector<double>& t_low);

// geometric grid with per_decade points per factor of 10, from t1 up to T
std::vector<double> log_grid(double t1, double T, int per_decade);

}  // namespace uecert
