#include "uecert/green.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <memory>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/numeric/odeint.hpp>

#include "uecert/enclosure.hpp"
#include "uecert/errors.hpp"

namespace uecert {

namespace {

using State = std::array<double, 2>;  // (v, v')

struct LogFit {
  double slope = 0.0;
  double intercept = 0.0;
};

LogFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y,
                  std::size_t lo, std::size_t hi) {
  double sx = 0.0, sy = 0.0;
  const double m = static_cast<double>(hi - lo);
  for (std::size_t i = lo; i < hi; ++i) {
    sx += std::log(x[i]);
    sy += std::log(y[i]);
  }
  const double mx = sx / m, my = sy / m;
  double num = 0.0, den = 0.0;
  for (std::size_t i = lo; i < hi; ++i) {
    const double dx = std::log(x[i]) - mx;
    num += dx * (std::log(y[i]) - my);
    den += dx * dx;
  }
  LogFit out;
  out.slope = num / den;
  out.intercept = my - out.slope * mx;
  return out;
}

}  // namespace

double sphere_volume(int m) {
  if (m < 0) throw DomainError("sphere volume needs m >= 0");
  const double d = m + 1;  // ambient dimension
  return 2.0 * std::pow(M_PI, 0.5 * d) / std::tgamma(0.5 * d);
}

double dirac_amplitude(int n) {
  if (n < 3) throw DomainError("dirac amplitude needs n >= 3");
  const double a = 4.0 * (n - 1.0) / (n - 2.0);
  return 1.0 / ((n - 2.0) * sphere_volume(n - 1) * a);
}

void RadialGreenFunction::validate() const {
  if (n < 3) throw DomainError("green function needs dimension >= 3");
  if (grid.size() < 2 || grid.size() != values.size() ||
      grid.size() != d1.size() || grid.size() != d2.size())
    throw DomainError("green function grid/value arrays are inconsistent");
  if (!(grid.front() > 0.0))
    throw DomainError("green function grid must start above 0");
  for (std::size_t k = 0; k + 1 < grid.size(); ++k)
    if (!(grid[k] < grid[k + 1]))
      throw DomainError("green function grid must increase strictly");
  for (double v : values)
    if (!(v > 0.0) || !std::isfinite(v))
      throw MetricError("green function lost positivity on the grid");
  if (std::fabs(p_fit - (2.0 - n)) > 0.05)
    throw MetricError("green asymptotic exponent " + std::to_string(p_fit) +
                      " is not within 0.05 of " + std::to_string(2.0 - n));
}

RadialGreenFunction solve_green(const WarpedMetric& g,
                                const std::function<double(double)>& sigma,
                                const std::vector<double>& grid,
                                const GreenOptions& opts) {
  namespace ode = boost::numeric::odeint;
  g.validate();
  const int n = g.n;
  if (n < 3) throw DomainError("green solver needs dimension >= 3");
  if (grid.size() < 5) throw DomainError("green solver needs >= 5 grid radii");
  if (!(grid.front() > 0.0))
    throw DomainError("green grid must start above 0");
  for (std::size_t k = 0; k + 1 < grid.size(); ++k)
    if (!(grid[k] < grid[k + 1]))
      throw DomainError("green grid must increase strictly");
  const Interval dom = g.domain();
  const double t_start = grid.front() / 10.0;
  if (!(dom.lo <= t_start && grid.back() <= dom.hi + 1e-12))
    throw DomainError("green grid must sit inside (t1/10, T] of the metric");
  if (!sigma) throw DomainError("sigma must be callable");

  // the ODE itself only needs 0 <= sigma <= 1 (bounded potential); the
  // sharper sigma <= scal condition belongs to the positivity conclusions
  // and is checked where those are claimed
  for (double t : grid) {
    const double s = sigma(t);
    if (!std::isfinite(s) || s < 0.0 || s > 1.0 + 1e-12)
      throw DomainError("sigma out of admissible range [0, 1]");
  }

  const double a = 4.0 * (n - 1.0) / (n - 2.0);
  const WarpingProfile f = g.f;
  const auto rhs = [n, a, &sigma, &f](const State& y, State& dy, double t) {
    const ProfileValues pv = f.eval(Interval::point(t));
    const double mu = (n - 1.0) * pv.d1.mid() / pv.v.mid();
    const double nu = mu - (n - 1.0) / t;
    dy[0] = y[1];
    dy[1] = -((3.0 - n) / t + nu) * y[1] -
            ((2.0 - n) * nu / t - sigma(t) / a) * y[0];
  };

  // descending output times: grid top ... grid bottom, then the match point
  std::vector<double> ts(grid.rbegin(), grid.rend());
  ts.push_back(t_start);

  // two-term seed v = 1 + c1 t^2 evaluated at the top (n = 4 is the
  // log-resonant case; there the one-term seed is the best polynomial data)
  const double c1 =
      n == 4 ? 0.0 : sigma(t_start) / (2.0 * a * (4.0 - n));
  const double T = ts.front();
  State y{1.0 + c1 * T * T, 2.0 * c1 * T};

  std::vector<State> out;
  out.reserve(ts.size());
  try {
    if (opts.fixed_step > 0.0) {
      ode::runge_kutta4<State> rk;
      out.push_back(y);
      for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
        const double len = ts[i] - ts[i + 1];
        const int steps =
            std::max(1, static_cast<int>(std::ceil(len / opts.fixed_step)));
        const double h = -len / steps;
        double t = ts[i];
        for (int s = 0; s < steps; ++s) {
          rk.do_step(rhs, y, t, h);
          t += h;
        }
        out.push_back(y);
      }
    } else {
      auto ctrl = ode::make_controlled(opts.atol, opts.rtol,
                                       ode::runge_kutta_dopri5<State>());
      ode::integrate_times(ctrl, rhs, y, ts.begin(), ts.end(),
                           -std::min(0.1, (T - t_start) / 100.0),
                           [&out](const State& s, double) { out.push_back(s); });
    }
  } catch (const std::exception& e) {
    throw MetricError(std::string("green ODE integration failed: ") +
                      e.what());
  }
  if (out.size() != ts.size())
    throw MetricError("green ODE integration lost output points");

  const double v_start = out.back()[0];
  if (!(v_start > 0.0))
    throw MetricError("green solution lost positivity before the tip");
  const double amp = opts.normalization == GreenNormalization::Dirac
                         ? dirac_amplitude(n)
                         : 1.0;
  const double rho = (1.0 + c1 * t_start * t_start) / v_start;

  RadialGreenFunction G;
  G.n = n;
  G.model = g.name;
  G.grid = grid;
  G.sigma0 = sigma(t_start);
  G.amplitude = amp;
  const std::size_t m = grid.size();
  G.values.resize(m);
  G.d1.resize(m);
  G.d2.resize(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double t = grid[k];
    const State& s = out[m - 1 - k];
    const double scale = amp * rho * std::pow(t, 2.0 - n);
    G.values[k] = scale * s[0];
    G.d1[k] = scale * (s[1] + (2.0 - n) * s[0] / t);
    const ProfileValues pv = f.eval(Interval::point(t));
    const double mu = (n - 1.0) * pv.d1.mid() / pv.v.mid();
    G.d2[k] = -mu * G.d1[k] + (sigma(t) / a) * G.values[k];
  }

  // log-log fit over the first decade of the grid (at least 5 points)
  std::size_t hi = 0;
  while (hi < m && grid[hi] <= grid.front() * 10.0 * (1.0 + 1e-12)) ++hi;
  hi = std::max<std::size_t>(hi, std::min<std::size_t>(5, m));
  const LogFit fit = fit_loglog(G.grid, G.values, 0, hi);
  G.p_fit = fit.slope;
  G.c_fit = std::exp(fit.intercept);

  G.validate();
  return G;
}

double default_sigma(const WarpedMetric& g, const std::vector<double>& grid) {
  if (grid.size() < 2 || !(grid.front() > 0.0) ||
      !(grid.front() < grid.back()))
    throw DomainError("default sigma needs an increasing positive grid");
  BisectionOptions opt;
  opt.max_depth = 20;
  opt.leaf_budget = 40000;
  opt.width_goal = 1e-9;
  const Interval hull = enclose_range(
      scal_warped_fn(g), Interval(grid.front(), grid.back()), opt);
  return std::max(0.0, 0.5 * std::min(1.0, hull.lo));
}

Certificate verify_green_bounds(const RadialGreenFunction& G) {
  const std::size_t m = G.grid.size();
  if (m == 0 || G.values.size() != m)
    throw DomainError("green bounds need a populated function");

  double rmin = std::numeric_limits<double>::infinity();
  double rmax = 0.0;
  bool ok = true;
  for (std::size_t k = 0; k < m; ++k) {
    const double r = G.values[k] * std::pow(G.grid[k], G.n - 2.0);
    if (!std::isfinite(r) || !(r > 0.0)) {
      ok = false;
      break;
    }
    rmin = std::min(rmin, r);
    rmax = std::max(rmax, r);
  }

  Certificate c;
  c.claim = "green-dist-bounds";
  c.subject = G.model;
  c.domain = Interval(G.t1(), G.T());
  c.method = "grid-only";
  c.samples = static_cast<std::int64_t>(m);
  if (ok) {
    const double cval = std::max({1.0, rmax, 1.0 / rmin});
    c.target = cval;
    c.achieved = Interval(rmin, rmax);
    c.status = CertStatus::CertifiedOnGrid;
    c.params = {{"n", G.n},
                {"points", m},
                {"c", snap_for_output(cval)},
                {"amplitude", snap_for_output(G.amplitude)},
                {"p_fit", snap_for_output(G.p_fit)}};
  } else {
    c.target = std::numeric_limits<double>::infinity();
    c.achieved = Interval(0.0, 0.0);
    c.status = CertStatus::Refuted;
    c.params = {{"n", G.n}, {"points", m}, {"reason", "nonpositive value"}};
  }
  return c;
}

namespace {

// C^2 quintic Hermite cells built from (u, u', u'') at the knots
struct FactorData {
  std::vector<double> t, u, du, ddu;
};

ProfileValues quintic_cell(const FactorData& d, double t) {
  const std::size_t m = d.t.size();
  const double lo = d.t.front(), hi = d.t.back();
  const double pad = 1e-12 * std::max(1.0, std::fabs(hi));
  if (!(t >= lo - pad && t <= hi + pad))
    throw DomainError("conformal factor evaluated outside its grid span");
  const double tc = std::clamp(t, lo, hi);
  std::size_t k =
      std::upper_bound(d.t.begin(), d.t.end(), tc) - d.t.begin();
  k = std::clamp<std::size_t>(k, 1, m - 1) - 1;

  const double h = d.t[k + 1] - d.t[k];
  const double s = (tc - d.t[k]) / h;
  const double p0 = d.u[k], p1 = d.u[k + 1];
  const double m0 = h * d.du[k], m1 = h * d.du[k + 1];
  const double q0 = h * h * d.ddu[k], q1 = h * h * d.ddu[k + 1];

  const double s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;
  const double H0 = 1.0 - 10.0 * s3 + 15.0 * s4 - 6.0 * s5;
  const double H1 = s - 6.0 * s3 + 8.0 * s4 - 3.0 * s5;
  const double H2 = 0.5 * (s2 - 3.0 * s3 + 3.0 * s4 - s5);
  const double H3 = 10.0 * s3 - 15.0 * s4 + 6.0 * s5;
  const double H4 = -4.0 * s3 + 7.0 * s4 - 3.0 * s5;
  const double H5 = 0.5 * (s3 - 2.0 * s4 + s5);
  const double dH0 = -30.0 * s2 + 60.0 * s3 - 30.0 * s4;
  const double dH1 = 1.0 - 18.0 * s2 + 32.0 * s3 - 15.0 * s4;
  const double dH2 = 0.5 * (2.0 * s - 9.0 * s2 + 12.0 * s3 - 5.0 * s4);
  const double dH3 = 30.0 * s2 - 60.0 * s3 + 30.0 * s4;
  const double dH4 = -12.0 * s2 + 28.0 * s3 - 15.0 * s4;
  const double dH5 = 0.5 * (3.0 * s2 - 8.0 * s3 + 5.0 * s4);
  const double cH0 = -60.0 * s + 180.0 * s2 - 120.0 * s3;
  const double cH1 = -36.0 * s + 96.0 * s2 - 60.0 * s3;
  const double cH2 = 0.5 * (2.0 - 18.0 * s + 36.0 * s2 - 20.0 * s3);
  const double cH3 = 60.0 * s - 180.0 * s2 + 120.0 * s3;
  const double cH4 = -24.0 * s + 84.0 * s2 - 60.0 * s3;
  const double cH5 = 0.5 * (6.0 * s - 24.0 * s2 + 20.0 * s3);

  const double v = p0 * H0 + m0 * H1 + q0 * H2 + p1 * H3 + m1 * H4 + q1 * H5;
  const double dv =
      (p0 * dH0 + m0 * dH1 + q0 * dH2 + p1 * dH3 + m1 * dH4 + q1 * dH5) / h;
  const double ddv =
      (p0 * cH0 + m0 * cH1 + q0 * cH2 + p1 * cH3 + m1 * cH4 + q1 * cH5) /
      (h * h);

  ProfileValues pv;
  pv.v = Interval::point(v);
  pv.d1 = Interval::point(dv);
  pv.d2 = Interval::point(ddv);
  return pv;
}

}  // namespace

ConformalFactor green_factor(const RadialGreenFunction& G, double eps) {
  if (!(eps >= 0.0)) throw DomainError("blow-up needs eps >= 0");
  G.validate();
  auto data = std::make_shared<FactorData>();
  data->t = G.grid;
  const std::size_t m = G.grid.size();
  data->u.resize(m);
  data->du.resize(m);
  data->ddu.resize(m);
  for (std::size_t k = 0; k < m; ++k) {
    data->u[k] = 1.0 + eps * G.values[k];
    data->du[k] = eps * G.d1[k];
    data->ddu[k] = eps * G.d2[k];
  }
  ConformalFactor u;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "1+%.3g*G", eps);
  u.name = buf;
  u.eval = [data](const Interval& t) { return quintic_cell(*data, t.mid()); };
  return u;
}

BlowupMetric blowup_metric(const WarpedMetric& g, const RadialGreenFunction& G,
                           double eps) {
  if (!(eps >= 0.0)) throw DomainError("blow-up needs eps >= 0");
  BlowupMetric b;
  b.base = g;
  b.green = G;
  b.eps = eps;
  b.factor = green_factor(G, eps);
  return b;
}

CompletenessReport completeness_check(const ConformalFactor& u, int n,
                                      double T,
                                      const std::vector<double>& t_low) {
  if (n < 3) throw DomainError("completeness check needs n >= 3");
  if (t_low.empty()) throw DomainError("completeness check needs probe radii");
  std::vector<double> ts = t_low;
  std::sort(ts.begin(), ts.end(), std::greater<double>());
  if (!(ts.front() < T && ts.back() > 0.0))
    throw DomainError("probe radii must lie in (0, T)");

  const double expo = 2.0 / (n - 2.0);
  const auto integrand = [&u, expo](double s) {
    return std::pow(u.eval(Interval::point(s)).v.mid(), expo);
  };

  CompletenessReport rep;
  rep.t_low = ts;
  rep.length.reserve(ts.size());
  using boost::math::quadrature::gauss_kronrod;
  // deep bisection limit: the integrand has a t^-2-type boundary layer whose
  // width shrinks with the probe radius
  for (double t : ts)
    rep.length.push_back(
        gauss_kronrod<double, 15>::integrate(integrand, t, T, 25, 1e-10));

  rep.lengths_grow = true;
  for (std::size_t k = 0; k + 1 < rep.length.size(); ++k)
    if (!(rep.length[k + 1] >= rep.length[k])) rep.lengths_grow = false;

  // fit on the small-radius half, where the asymptotic law dominates
  const std::size_t mlen = ts.size();
  const std::size_t lo = mlen >= 6 ? mlen / 2 : 0;
  const LogFit fit = fit_loglog(ts, rep.length, lo, mlen);
  rep.slope = fit.slope;
  rep.pass = rep.lengths_grow && std::fabs(rep.slope + 1.0) <= 0.25;

  char buf[96];
  std::snprintf(buf, sizeof(buf), "L(t) ~ %.6g * t^(%.4g)",
                std::exp(fit.intercept), fit.slope);
  rep.law = buf;
  return rep;
}

CompletenessReport completeness_check(const BlowupMetric& g_eps,
                                      const std::vector<double>& t_low) {
  for (double t : t_low)
    if (t < g_eps.green.t1() * (1.0 - 1e-12))
      throw DomainError("probe radius below the green grid");
  return completeness_check(g_eps.factor, g_eps.base.n, g_eps.green.T(),
                            t_low);
}

std::vector<double> log_grid(double t1, double T, int per_decade) {
  if (!(t1 > 0.0 && t1 < T)) throw DomainError("log grid needs 0 < t1 < T");
  if (per_decade < 1) throw DomainError("log grid needs >= 1 point/decade");
  const double decades = std::log10(T / t1);
  const int m = std::max(2, static_cast<int>(std::ceil(decades * per_decade)) + 1);
  std::vector<double> out(m);
  for (int k = 0; k < m; ++k)
    out[k] = t1 * std::pow(T / t1, static_cast<double>(k) / (m - 1));
  out.front() = t1;
  out.back() = T;
  return out;
}

}  // namespace uecert
