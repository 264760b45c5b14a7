#include "uecert/warped_metric.hpp"

#include <cmath>

#include "uecert/errors.hpp"

namespace uecert {

void WarpedMetric::validate() const {
  if (n != h.dim + 1)
    throw DomainError("warped metric dimension must be fiber dim + 1");
  if (n < 3) throw DomainError("warped metric needs dimension >= 3");
}

WarpedMetric make_warped(WarpingProfile f, SphereMetric h, std::string name) {
  WarpedMetric g;
  g.n = h.dim + 1;
  g.f = std::move(f);
  g.h = h;
  g.name = std::move(name);
  g.validate();
  return g;
}

Interval scal_warped(const WarpedMetric& g, const Interval& t) {
  const ProfileValues pv = g.f.eval(t);
  if (!pv.v.strictly_positive())
    throw MetricError("warping function not certainly positive on " +
                      std::string("[") + std::to_string(t.lo) + "," +
                      std::to_string(t.hi) + "]");
  const double n1 = static_cast<double>(g.n - 1);
  const double n2 = static_cast<double>(g.n - 2);
  const Interval num = scal_range(g.h) -
                       (2.0 * n1) * (pv.v * pv.d2) -
                       (n1 * n2) * sqr_i(pv.d1);
  return num / sqr_i(pv.v);
}

EnclosureFn scal_warped_fn(const WarpedMetric& g) {
  EnclosureFn fn;
  fn.domain = g.domain();
  fn.name = "scal[" + g.name + "]";
  fn.value = [g](const Interval& t) { return scal_warped(g, t); };
  return fn;
}

Interval scal_warped_range(const WarpedMetric& g, const Interval& t,
                           const BisectionOptions& opts) {
  return enclose_range(scal_warped_fn(g), t, opts);
}

Certificate certify_scal_lower_bound(const WarpedMetric& g, const Interval& t,
                                     double target,
                                     const BisectionOptions& opts) {
  Certificate cert = certify_lower_bound(scal_warped_fn(g), t, target, opts);
  cert.claim = "scal-lower-bound";
  cert.subject = g.name;
  return cert;
}

Interval mean_curvature_slice(const WarpedMetric& g, double t0) {
  const ProfileValues pv = g.f.eval(Interval::point(t0));
  if (!pv.v.strictly_positive())
    throw MetricError("warping function not positive at the slice");
  return static_cast<double>(g.n - 1) * pv.d1 / pv.v;
}

ConformalFactor profile_factor(const WarpingProfile& u) {
  ConformalFactor c;
  c.name = u.name();
  c.eval = [u](const Interval& t) { return u.eval(t); };
  return c;
}

Interval scal_conformal(const WarpedMetric& g, const ConformalFactor& u,
                        const Interval& t) {
  const ProfileValues uv = u.eval(t);
  if (!uv.v.strictly_positive())
    throw MetricError("conformal factor not certainly positive");
  const ProfileValues fv = g.f.eval(t);
  if (!fv.v.strictly_positive())
    throw MetricError("warping function not certainly positive");
  const double n1 = static_cast<double>(g.n - 1);
  const Interval a =
      Interval::point(4.0 * n1) / Interval::point(static_cast<double>(g.n - 2));
  const Interval lap = uv.d2 + n1 * (fv.d1 / fv.v) * uv.d1;
  const Interval expo = Interval::point(-static_cast<double>(g.n + 2)) /
                        Interval::point(static_cast<double>(g.n - 2));
  return pow_i(uv.v, expo) * (scal_warped(g, t) * uv.v - a * lap);
}

// ---------------------------------------------------------------------------
// coordinate fields

namespace {

// latitude knots of every twist layer in a pullback chain; null if a
// rotation layer below a twist makes the latitude coordinate unusable
bool collect_twist_knots(const SphereMetric& h, std::vector<double>* out) {
  const SphereMetric* p = &h;
  bool saw_twist = false;
  while (p->family == SphereMetric::Family::Pullback) {
    if (p->map->kind == SphereDiffeo::Kind::LatitudeTwist) {
      saw_twist = true;
      for (double s : p->map->knot_latitudes()) out->push_back(s);
    } else if (p->map->kind == SphereDiffeo::Kind::Rotation && saw_twist) {
      return false;
    }
    p = p->base.get();
  }
  return true;
}

double min_abs_dist(double x, const std::vector<double>& knots) {
  double d = std::numeric_limits<double>::infinity();
  for (double k : knots) d = std::min(d, std::abs(x - k));
  return d;
}

// sup_u |grad_u x_{m+1}(u)| over a stereographic chart is 9/(4 sqrt 3) < 1.3
constexpr double kLatitudeGrad = 1.3;

}  // namespace

MetricField chart_field(const SphereMetric& h, ChartId chart, double radius) {
  if (!(radius > 0.0 && radius <= kChartRadius))
    throw DomainError("chart field radius outside the chart");
  const int m = h.dim;
  MetricField field;
  field.dim = m;
  field.name = h.describe() + "/chart";
  field.box_lo = Eigen::VectorXd::Constant(m, -radius);
  field.box_hi = Eigen::VectorXd::Constant(m, radius);
  field.inside = [radius](const Eigen::VectorXd& u) {
    return u.norm() <= radius;
  };
  field.eval = [h, chart](const Eigen::VectorXd& u) {
    return metric_matrix_at(h, chart, u);
  };
  std::vector<double> sknots;
  const bool lat_ok = collect_twist_knots(h, &sknots);
  field.clearance = [chart, radius, sknots, lat_ok](const Eigen::VectorXd& u) {
    double c = radius - u.norm();
    if (!sknots.empty()) {
      if (!lat_ok) return 0.0;
      const Eigen::VectorXd p = chart_point(chart, u);
      c = std::min(c, min_abs_dist(p[p.size() - 1], sknots) / kLatitudeGrad);
    }
    return c;
  };
  return field;
}

MetricField warped_polar_field(const WarpedMetric& g, ChartId chart,
                               double chart_radius) {
  g.validate();
  const int m = g.n - 1;
  MetricField field;
  field.dim = g.n;
  field.name = g.name + "/polar";
  field.box_lo = Eigen::VectorXd::Constant(g.n, -chart_radius);
  field.box_hi = Eigen::VectorXd::Constant(g.n, chart_radius);
  field.box_lo[m] = g.domain().lo;
  field.box_hi[m] = g.domain().hi;
  field.inside = [m, chart_radius](const Eigen::VectorXd& x) {
    return x.head(m).norm() <= chart_radius;
  };
  const SphereMetric h = g.h;
  const WarpingProfile f = g.f;
  field.eval = [m, h, f, chart](const Eigen::VectorXd& x) {
    const Eigen::VectorXd u = x.head(m);
    const double t = x[m];
    const double ft = f.value(t);
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m + 1, m + 1);
    out.topLeftCorner(m, m) = (ft * ft) * metric_matrix_at(h, chart, u);
    out(m, m) = 1.0;
    return out;
  };
  std::vector<double> tknots = g.f.knots();
  std::vector<double> sknots;
  const bool lat_ok = collect_twist_knots(g.h, &sknots);
  field.clearance = [m, chart, chart_radius, tknots, sknots, lat_ok](
                        const Eigen::VectorXd& x) {
    double c = std::min(min_abs_dist(x[m], tknots),
                        chart_radius - x.head(m).norm());
    if (!sknots.empty()) {
      if (!lat_ok) return 0.0;  // cannot bound distance to the kink cones
      const Eigen::VectorXd p = chart_point(chart, Eigen::VectorXd(x.head(m)));
      c = std::min(c, min_abs_dist(p[m], sknots) / kLatitudeGrad);
    }
    return c;
  };
  return field;
}

MetricField conformal_polar_field(const WarpedMetric& g,
                                  const ConformalFactor& u, ChartId chart,
                                  double chart_radius) {
  MetricField field = warped_polar_field(g, chart, chart_radius);
  field.name = g.name + "/conformal-polar";
  const int m = g.n - 1;
  const double expo = 4.0 / static_cast<double>(g.n - 2);
  const auto base = field.eval;
  const auto factor = u.eval;
  field.eval = [m, expo, base, factor](const Eigen::VectorXd& x) {
    const double ut = factor(Interval::point(x[m])).v.mid();
    if (!(ut > 0.0))
      throw MetricError("conformal factor not positive at sample");
    return Eigen::MatrixXd(std::pow(ut, expo) * base(x));
  };
  return field;
}

MetricField cone_field(const WarpedMetric& g, double r_lo, double r_hi) {
  g.validate();
  if (!(r_lo > 0.0 && r_hi > r_lo))
    throw DomainError("cone field needs 0 < r_lo < r_hi");
  if (r_lo < g.domain().lo || r_hi > g.domain().hi)
    throw DomainError("cone annulus must sit inside the profile domain");
  const int d = g.n;
  MetricField field;
  field.dim = d;
  field.name = g.name + "/cone";
  field.box_lo = Eigen::VectorXd::Constant(d, -r_hi);
  field.box_hi = Eigen::VectorXd::Constant(d, r_hi);
  field.inside = [r_lo, r_hi](const Eigen::VectorXd& x) {
    const double r = x.norm();
    return r > r_lo && r < r_hi;
  };
  const SphereMetric h = g.h;
  const WarpingProfile f = g.f;
  field.eval = [d, h, f](const Eigen::VectorXd& x) {
    const double r = x.norm();
    const Eigen::VectorXd q = x / r;
    const Eigen::MatrixXd p =
        Eigen::MatrixXd::Identity(d, d) - q * q.transpose();
    const double s = f.value(r) / r;
    Eigen::MatrixXd out =
        (s * s) * (p * ambient_form(h, q) * p) + q * q.transpose();
    return Eigen::MatrixXd(0.5 * (out + out.transpose()));
  };
  std::vector<double> tknots = g.f.knots();
  std::vector<double> sknots;
  const bool lat_ok = collect_twist_knots(g.h, &sknots);
  field.clearance = [d, r_lo, r_hi, tknots, sknots, lat_ok](
                        const Eigen::VectorXd& x) {
    const double r = x.norm();
    double c = std::min(r - r_lo, r_hi - r);
    c = std::min(c, min_abs_dist(r, tknots));
    if (!sknots.empty()) {
      if (!lat_ok) return 0.0;
      c = std::min(c, r * min_abs_dist(x[d - 1] / r, sknots));
    }
    return c;
  };
  return field;
}

MetricField torus_twist_field(int n, double amp, double r1, double r2,
                              double rho_min, double v0, double vr) {
  if (n < 3) throw DomainError("torus twist needs dimension >= 3");
  if (!(0.0 < r1 && r1 < r2 && r2 < M_PI))
    throw DomainError("torus twist needs 0 < r1 < r2 < pi");
  if (!(rho_min > 0.0 && rho_min < r1))
    throw DomainError("torus twist needs 0 < rho_min < r1");
  if (!(0.0 < vr && vr <= v0 && v0 <= 1.0))
    throw DomainError("torus twist needs 0 < vr <= v0 <= 1");
  const double kV0 = v0, kVr = vr;  // latitude bump shape

  const auto taper = [r1, r2](double rho) {
    if (rho <= r1) return 1.0;
    if (rho >= r2) return 0.0;
    return quintic_value((r2 - rho) / (r2 - r1));
  };
  const auto taper_d1 = [r1, r2](double rho) {
    if (rho <= r1 || rho >= r2) return 0.0;
    return -quintic_d1((r2 - rho) / (r2 - r1)) / (r2 - r1);
  };
  const auto bump = [amp, kV0, kVr](double v) {
    const double a = std::abs(v);
    if (a >= kV0) return 0.0;
    if (a <= kV0 - kVr) return amp;
    return amp * quintic_value((kV0 - a) / kVr);
  };
  const auto bump_d1 = [amp, kV0, kVr](double v) {
    const double a = std::abs(v);
    if (a >= kV0 || a <= kV0 - kVr) return 0.0;
    const double sign = v > 0.0 ? 1.0 : -1.0;
    return -sign * amp * quintic_d1((kV0 - a) / kVr) / kVr;
  };

  MetricField field;
  field.dim = n;
  field.name = "torus-twist";
  field.box_lo = Eigen::VectorXd::Constant(n, M_PI - 1.2);
  field.box_hi = Eigen::VectorXd::Constant(n, M_PI + 1.2);
  field.inside = [n, rho_min](const Eigen::VectorXd& x) {
    return (x - Eigen::VectorXd::Constant(n, M_PI)).norm() > rho_min;
  };
  field.eval = [n, taper, taper_d1, bump, bump_d1](const Eigen::VectorXd& x) {
    const Eigen::VectorXd y = x - Eigen::VectorXd::Constant(n, M_PI);
    const double rho = y.norm();
    if (rho == 0.0) throw MetricError("torus twist is singular at the center");
    const double v = y[n - 1] / rho;
    const double theta = taper(rho) * bump(v);
    const double c = std::cos(theta), s = std::sin(theta);
    // R_theta y and the generator direction J R_theta y
    Eigen::VectorXd ry = y;
    ry[0] = c * y[0] - s * y[1];
    ry[1] = s * y[0] + c * y[1];
    Eigen::VectorXd jry = Eigen::VectorXd::Zero(n);
    jry[0] = -ry[1];
    jry[1] = ry[0];
    // grad theta = taper' bump (y/rho) + taper bump' (e_z - v y/rho)/rho
    Eigen::VectorXd grad = (taper_d1(rho) * bump(v) / rho) * y;
    Eigen::VectorXd ez = Eigen::VectorXd::Zero(n);
    ez[n - 1] = 1.0;
    grad += (taper(rho) * bump_d1(v) / rho) * (ez - (v / rho) * y);
    Eigen::MatrixXd df = Eigen::MatrixXd::Identity(n, n);
    df(0, 0) = c;
    df(0, 1) = -s;
    df(1, 0) = s;
    df(1, 1) = c;
    df += jry * grad.transpose();
    Eigen::MatrixXd out = df.transpose() * df;
    return Eigen::MatrixXd(0.5 * (out + out.transpose()));
  };
  field.clearance = [n, r1, r2, kV0, kVr](const Eigen::VectorXd& x) {
    const Eigen::VectorXd y = x - Eigen::VectorXd::Constant(n, M_PI);
    const double rho = y.norm();
    double c = std::min(rho, std::min(std::abs(rho - r1), std::abs(rho - r2)));
    if (rho > 0.0) {
      const double v = y[n - 1] / rho;
      for (double vk : {-kV0, -(kV0 - kVr), kV0 - kVr, kV0})
        c = std::min(c, rho * std::abs(v - vk));
    }
    return c;
  };
  return field;
}

}  // namespace uecert
