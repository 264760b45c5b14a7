#include "uecert/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss.hpp>

#include "uecert/curvature_oracle.hpp"
#include "uecert/errors.hpp"
#include "uecert/green.hpp"

namespace uecert {
namespace {

int status_rank(CertStatus s) {
  switch (s) {
    case CertStatus::Certified: return 0;
    case CertStatus::CertifiedOnGrid: return 1;
    case CertStatus::Inconclusive: return 2;
    case CertStatus::Refuted: return 3;
  }
  return 3;
}

CertStatus worse(CertStatus a, CertStatus b) {
  return status_rank(a) >= status_rank(b) ? a : b;
}

// deterministic, platform-stable unit directions
std::vector<Eigen::VectorXd> unit_directions(int n, int count) {
  std::vector<Eigen::VectorXd> dirs;
  dirs.reserve(count);
  for (int k = 0; k < count; ++k) {
    Eigen::VectorXd d(n);
    for (int i = 0; i < n; ++i) d[i] = std::sin(0.9 * i + 1.7 * k + 0.4);
    dirs.push_back(d / d.norm());
  }
  return dirs;
}

// Sums and maxima of |g_ij|, |d_a g_ij|, |d_a d_b g_ij| from second-order
// central differences: 1 + 2n + 4 n(n-1)/2 evaluations.  The step scales
// with the radius, so for degree-0 cone coefficients the relative roundoff
// is scale-free.  Entries below the provable roundoff floor of the stencil
// (generous bound 64 eps |g| on each evaluation) are clipped to zero:
// without the clip a derivative that is exactly zero would read as noise
// growing like eps / h^k toward the cone point, while any curvature-scale
// signal sits orders of magnitude above the floor.
struct DerivStats {
  double sum0 = 0.0, sum1 = 0.0, sum2 = 0.0;
  double max0 = 0.0, max1 = 0.0, max2 = 0.0;
};

void tally(const Eigen::MatrixXd& m, double floor, double* sum, double* mx) {
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) {
      const double a = std::abs(m(i, j));
      if (a <= floor) continue;
      *sum += a;
      *mx = std::max(*mx, a);
    }
}

DerivStats metric_derivative_stats(const MetricField& field,
                                   const Eigen::VectorXd& x, double h) {
  const int n = field.dim;
  DerivStats st;
  const Eigen::MatrixXd g0 = field.eval(x);
  tally(g0, 0.0, &st.sum0, &st.max0);
  const double eps_eval =
      64.0 * std::numeric_limits<double>::epsilon() * st.max0;
  const double floor1 = eps_eval / h;
  const double floor2 = 4.0 * eps_eval / (h * h);

  Eigen::VectorXd y = x;
  for (int a = 0; a < n; ++a) {
    y[a] = x[a] + h;
    const Eigen::MatrixXd gp = field.eval(y);
    y[a] = x[a] - h;
    const Eigen::MatrixXd gm = field.eval(y);
    y[a] = x[a];
    tally((gp - gm) / (2.0 * h), floor1, &st.sum1, &st.max1);
    tally((gp - 2.0 * g0 + gm) / (h * h), floor2, &st.sum2, &st.max2);
  }
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      y[a] = x[a] + h; y[b] = x[b] + h;
      const Eigen::MatrixXd gpp = field.eval(y);
      y[b] = x[b] - h;
      const Eigen::MatrixXd gpm = field.eval(y);
      y[a] = x[a] - h;
      const Eigen::MatrixXd gmm = field.eval(y);
      y[b] = x[b] + h;
      const Eigen::MatrixXd gmp = field.eval(y);
      y[a] = x[a]; y[b] = x[b];
      const Eigen::MatrixXd mixed = (gpp - gpm - gmp + gmm) / (4.0 * h * h);
      // mixed pairs (a,b) and (b,a) both contribute to the sum
      double dummy = 0.0;
      tally(mixed, floor2, &st.sum2, &st.max2);
      tally(mixed, floor2, &st.sum2, &dummy);
    }
  }
  return st;
}

}  // namespace

// --- scalar curvature lower bounds -------------------------------------------

Certificate certify_scal_positive(const WarpedMetric& g, const Interval& dom,
                                  double target, const ExhaustOptions& opts) {
  g.validate();
  if (!(dom.lo < dom.hi)) throw DomainError("certification domain is empty");
  if (dom.lo < g.domain().lo || dom.hi > g.domain().hi)
    throw DomainError("certification domain leaves the profile domain");
  if (opts.levels < 0) throw DomainError("exhaustion needs levels >= 0");

  const ProfileValues tip = g.f.eval(Interval::point(dom.lo));
  if (tip.v.strictly_positive()) {
    Certificate c = certify_scal_lower_bound(g, dom, target, opts.bisection);
    c.claim = "scal-positive";
    return c;
  }

  // Conical end at dom.lo: certify the compact pieces [dom.lo + 2^-j, dom.hi].
  // The pieces are covered by disjoint segments (core plus dyadic shells), so
  // each segment is bisected once and a piece inherits the min over its cover.
  std::vector<int> js;
  for (int j = 0; j <= opts.levels; ++j)
    if (dom.lo + std::ldexp(1.0, -j) < dom.hi) js.push_back(j);
  if (js.empty())
    throw DomainError("domain too short for any exhaustion piece");

  Certificate summary;
  summary.claim = "scal-positive-exhaustion";
  summary.subject = g.name;
  summary.domain = dom;
  summary.target = target;
  summary.method = "interval-bisection";
  summary.status = CertStatus::Certified;
  summary.achieved = Interval(std::numeric_limits<double>::infinity(),
                              std::numeric_limits<double>::infinity());

  nlohmann::json evidence = nlohmann::json::array();
  Interval acc = summary.achieved;  // running min over covered segments
  CertStatus acc_status = CertStatus::Certified;
  double prev_lo = dom.hi;  // upper end of the next segment to certify
  for (int j : js) {
    const double margin = std::ldexp(1.0, -j);
    const double lo = dom.lo + margin;
    Certificate seg = certify_scal_lower_bound(g, Interval(lo, prev_lo),
                                               target, opts.bisection);
    prev_lo = lo;
    acc = Interval(std::min(acc.lo, seg.achieved.lo),
                   std::min(acc.hi, seg.achieved.hi));
    acc_status = worse(acc_status, seg.status);
    summary.depth = std::max(summary.depth, seg.depth);
    summary.samples += seg.samples;
    evidence.push_back({{"margin", snap_for_output(margin)},
                        {"lo", snap_for_output(lo)},
                        {"achieved_lo", snap_for_output(acc.lo)},
                        {"achieved_hi", snap_for_output(acc.hi)},
                        {"status", to_string(acc_status)}});
  }
  summary.achieved = acc;
  summary.status = acc_status;
  summary.params["levels"] = opts.levels;
  summary.params["pieces"] = evidence.size();
  summary.params["evidence"] = std::move(evidence);
  return summary;
}

// --- bilipschitz constants ----------------------------------------------------

Certificate bilipschitz_constant(const WarpedMetric& g, long samples) {
  g.validate();
  const Interval dom = g.domain();
  const double hi = dom.hi;
  if (!(hi > 0.0)) throw DomainError("cone profile needs a positive domain");
  const double c = g.f.value(hi) / hi;
  if (!(c > 0.0)) throw DomainError("cone slope must be positive");
  for (int k = 1; k <= 15; ++k) {
    const double t = dom.lo + (hi - dom.lo) * k / 16.0;
    if (!(t > 0.0)) continue;
    const double scale = std::max(1.0, c * t);
    if (std::abs(g.f.value(t) - c * t) > 1e-9 * scale ||
        std::abs(g.f.d1(t) - c) > 1e-9 * std::max(1.0, c))
      throw DomainError(
          "bilipschitz constant against the euclidean cone needs a pure cone "
          "profile f = c t");
  }

  const EigenBounds eb = eigen_bounds_vs_round(g.h, samples);
  // relative eigenvalues of g vs t^2 h0 + dt^2: {c^2 eig(h vs h0)} + {1}
  const Interval rel = hull(sqr_i(Interval::point(c)) * eb.lam,
                            Interval(1.0, 1.0));

  Certificate cert;
  cert.claim = "bilipschitz-euclidean";
  cert.subject = g.name;
  cert.domain = dom;
  cert.achieved = rel;
  cert.method = eb.method;
  cert.samples = eb.samples;
  if (!(rel.lo > 0.0) || !std::isfinite(rel.hi)) {
    cert.target = std::numeric_limits<double>::infinity();
    cert.status = CertStatus::Inconclusive;
    return cert;
  }
  const Interval lambda =
      max_i(Interval::point(rel.hi),
            Interval(1.0, 1.0) / Interval::point(rel.lo));
  cert.target = lambda.hi;
  cert.params["cone_slope"] = snap_for_output(c);
  cert.params["fiber"] = g.h.describe();
  cert.params["grid_min"] = snap_for_output(eb.grid_min);
  cert.params["grid_max"] = snap_for_output(eb.grid_max);
  cert.params["padding"] = snap_for_output(eb.padding);
  cert.status = eb.method == "grid-only" ? CertStatus::CertifiedOnGrid
                                         : CertStatus::Certified;
  return cert;
}

Certificate bilipschitz_constant(const MetricField& g, const MetricField& g0,
                                 long n_points, std::uint64_t seed) {
  if (g.dim != g0.dim)
    throw DomainError("bilipschitz pair needs equal dimensions");
  if (n_points < 1) throw DomainError("bilipschitz pair needs sample points");
  const auto pts = sample_points(g, n_points, 1e-3, seed, 1.0);

  double gmin = std::numeric_limits<double>::infinity();
  double gmax = 0.0;
  long used = 0;
  for (const auto& x : pts) {
    if (!g0.in_box(x)) continue;
    const Eigen::MatrixXd a = g.eval(x);
    const Eigen::MatrixXd b = g0.eval(x);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(
        a, b, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
      throw MetricError("degenerate metric pair at a sample point");
    gmin = std::min(gmin, es.eigenvalues().minCoeff());
    gmax = std::max(gmax, es.eigenvalues().maxCoeff());
    ++used;
  }
  if (used < 10)
    throw DomainError("bilipschitz pair found too few common sample points");

  Certificate cert;
  cert.claim = "bilipschitz-pair";
  cert.subject = g.name + " vs " + g0.name;
  cert.achieved = Interval(gmin, gmax);
  cert.method = "grid-only";
  cert.samples = used;
  cert.params["requested"] = n_points;
  cert.params["seed"] = seed;
  if (!(gmin > 0.0) || !std::isfinite(gmax)) {
    cert.target = std::numeric_limits<double>::infinity();
    cert.status = CertStatus::Inconclusive;
    return cert;
  }
  cert.target = std::max(gmax, 1.0 / gmin);
  cert.status = CertStatus::CertifiedOnGrid;
  return cert;
}

// --- Sobolev membership -------------------------------------------------------

SobolevTable sobolev_table(const WarpedMetric& g, const SobolevOptions& opts) {
  g.validate();
  if (opts.annuli < 4 || opts.annuli > 48)
    throw DomainError("sobolev table needs 4..48 annuli");
  if (opts.radial_order != 16)
    throw DomainError("sobolev table is built on Gauss-Legendre order 16");
  if (opts.directions < 4)
    throw DomainError("sobolev table needs at least 4 directions");
  if (!(opts.step_rel > 0.0 && opts.step_rel < 0.01))
    throw DomainError("sobolev step must sit in (0, 0.01)");
  const double r_hi = 1.0 + 8.0 * opts.step_rel;
  const double r_lo = std::ldexp(1.0, -opts.annuli - 2);
  if (g.domain().hi < r_hi || g.domain().lo > r_lo)
    throw DomainError("cone domain too short for the requested annuli");
  const MetricField field = cone_field(g, r_lo, r_hi);

  const int n = g.n;
  const int rad = opts.radial_order;
  const auto dirs = unit_directions(n, opts.directions);
  const double dir_weight = sphere_volume(n - 1) / opts.directions;
  using GL = boost::math::quadrature::gauss<double, 16>;

  SobolevTable tab;
  tab.n = n;
  tab.subject = g.name;
  tab.annuli = opts.annuli;
  tab.radial = rad;
  tab.directions = opts.directions;
  tab.f_values.reserve(static_cast<size_t>(opts.annuli) * rad *
                       opts.directions);
  tab.weights.reserve(tab.f_values.capacity());

  for (int j = 0; j < opts.annuli; ++j) {
    const double b = std::ldexp(1.0, -j);
    const double a = 0.5 * b;
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double sup_f = 0.0, sup_c = 0.0;
    for (int i = 0; i < rad; ++i) {
      // order-16 rule: eight positive abscissae, nodes mid +- half*xi
      const double xi = GL::abscissa()[i / 2];
      const double r = i % 2 == 0 ? mid + half * xi : mid - half * xi;
      const double w_rad = half * GL::weights()[i / 2];
      const double lebesgue = w_rad * std::pow(r, n - 1) * dir_weight;
      for (const auto& d : dirs) {
        const DerivStats st =
            metric_derivative_stats(field, r * d, opts.step_rel * r);
        const double f_val = st.sum0 + st.sum1 + st.sum2;
        tab.f_values.push_back(f_val);
        tab.weights.push_back(lebesgue);
        tab.total_volume += lebesgue;
        sup_f = std::max(sup_f, f_val);
        sup_c = std::max(sup_c, st.max0);
      }
    }
    tab.sup_f.push_back(sup_f);
    tab.sup_coeff.push_back(sup_c);
  }
  return tab;
}

SobolevEstimate sobolev_norm(const SobolevTable& table, double p) {
  if (!(p >= 1.0)) throw DomainError("sobolev norm needs p >= 1");
  if (table.annuli < 4 || table.f_values.size() != table.weights.size() ||
      table.f_values.size() !=
          static_cast<size_t>(table.annuli) * table.radial * table.directions)
    throw DomainError("sobolev table is inconsistent");

  SobolevEstimate est;
  est.p = p;
  est.scale_sup = table.sup_f;
  est.coeff_sup =
      *std::max_element(table.sup_coeff.begin(), table.sup_coeff.end());

  const size_t per = static_cast<size_t>(table.radial) * table.directions;
  double total_mass = 0.0;
  for (int j = 0; j < table.annuli; ++j) {
    double mass = 0.0;
    for (size_t i = j * per; i < (j + 1) * per; ++i)
      mass += table.weights[i] * std::pow(table.f_values[i], 0.5 * p);
    est.scale_mass.push_back(mass);
    total_mass += mass;
  }
  est.norm_value =
      std::pow(total_mass / table.total_volume, 2.0 / p);

  // Ratio test on the innermost annuli: the masses of a convergent dyadic
  // series decay geometrically; a scattered or non-finite tail is reported
  // as indeterminate, never as finite.
  const int window = std::min(10, table.annuli / 2);
  double log_sum = 0.0;
  bool bad = !std::isfinite(est.norm_value);
  std::vector<double> logs;
  for (int j = table.annuli - window; j < table.annuli; ++j) {
    const double prev = est.scale_mass[j - 1], cur = est.scale_mass[j];
    if (!(prev > 0.0) || !(cur > 0.0) || !std::isfinite(prev) ||
        !std::isfinite(cur)) {
      bad = true;
      break;
    }
    logs.push_back(std::log(cur / prev));
    log_sum += logs.back();
  }
  if (!bad) {
    const double mean = log_sum / window;
    double scatter = 0.0;
    for (double l : logs) scatter = std::max(scatter, std::abs(l - mean));
    est.tail_ratio = std::exp(mean);
    est.indeterminate = scatter > 0.35;
    est.finite = !est.indeterminate && est.tail_ratio <= 0.98;
  } else {
    est.indeterminate = true;
    est.finite = false;
    est.tail_ratio = std::numeric_limits<double>::quiet_NaN();
  }
  return est;
}

SobolevEstimate sobolev_norm(const WarpedMetric& g, double p,
                             const SobolevOptions& opts) {
  return sobolev_norm(sobolev_table(g, opts), p);
}

// --- derivative blow-up slopes -------------------------------------------------

SlopeReport blowup_slope(const MetricField& field, int k,
                         const std::vector<double>& radii,
                         const SlopeOptions& opts) {
  if (k != 1 && k != 2)
    throw DomainError("blow-up slope is defined for k in {1, 2}");
  if (radii.empty()) throw DomainError("blow-up slope needs radii");
  for (double r : radii)
    if (!(r > 0.0)) throw DomainError("blow-up radii must be positive");

  const auto dirs = unit_directions(field.dim, opts.directions);
  SlopeReport rep;
  rep.k = k;
  rep.radii = radii;
  rep.sup.reserve(radii.size());
  bool all_zero = true;
  for (double r : radii) {
    double sup = 0.0;
    for (const auto& d : dirs) {
      const DerivStats st =
          metric_derivative_stats(field, r * d, opts.step_rel * r);
      sup = std::max(sup, k == 1 ? st.max1 : st.max2);
    }
    rep.sup.push_back(sup);
    if (sup > 0.0) all_zero = false;
  }
  // every reading sat below the stencil roundoff floor: the derivative is
  // zero at all scales and a slope is undefined
  if (all_zero) {
    rep.zero_field = true;
    return rep;
  }
  const PowerLawFit fit =
      fit_power_law(rep.radii, rep.sup, opts.discard, opts.discard);
  rep.slope = fit.slope;
  rep.prefactor = fit.prefactor;
  rep.used = static_cast<int>(radii.size()) - 2 * opts.discard;
  return rep;
}

std::vector<double> dyadic_radii(int j_lo, int j_hi) {
  if (j_lo > j_hi) throw DomainError("dyadic radii need j_lo <= j_hi");
  std::vector<double> r;
  r.reserve(j_hi - j_lo + 1);
  for (int j = j_lo; j <= j_hi; ++j) r.push_back(std::ldexp(1.0, -j));
  return r;
}

PowerLawFit fit_power_law(const std::vector<double>& t,
                          const std::vector<double>& v, int discard_lo,
                          int discard_hi) {
  if (t.size() != v.size()) throw DomainError("power-law fit needs t, v pairs");
  if (discard_lo < 0 || discard_hi < 0)
    throw DomainError("power-law discards must be nonnegative");
  const long m = static_cast<long>(t.size()) - discard_lo - discard_hi;
  if (m < 2) throw DomainError("power-law fit needs two points after discards");

  double sx = 0.0, sy = 0.0;
  std::vector<double> lx(m), ly(m);
  for (long i = 0; i < m; ++i) {
    const double ti = t[discard_lo + i], vi = v[discard_lo + i];
    if (!(ti > 0.0) || !(vi > 0.0) || !std::isfinite(vi))
      throw DomainError("power-law fit needs positive finite data");
    lx[i] = std::log(ti);
    ly[i] = std::log(vi);
    sx += lx[i];
    sy += ly[i];
  }
  const double mx = sx / m, my = sy / m;
  double cov = 0.0, var = 0.0;
  for (long i = 0; i < m; ++i) {
    cov += (lx[i] - mx) * (ly[i] - my);
    var += (lx[i] - mx) * (lx[i] - mx);
  }
  if (!(var > 0.0)) throw DomainError("power-law fit needs distinct scales");
  PowerLawFit fit;
  fit.slope = cov / var;
  fit.prefactor = std::exp(my - fit.slope * mx);
  return fit;
}

}  // namespace uecert
