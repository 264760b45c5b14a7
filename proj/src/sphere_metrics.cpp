#include "uecert/sphere_metrics.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "uecert/errors.hpp"
#include "uecert/rng.hpp"
#include "uecert/smoothstep.hpp"

namespace uecert {

namespace {

double sq(double x) { return x * x; }

void check_chart_arg(const Vec& u) {
  if (u.size() < 2) throw DomainError("chart point must have dimension >= 2");
  if (!u.allFinite()) throw DomainError("chart point has non-finite entries");
  if (u.norm() > kChartRadius)
    throw MetricError("point outside chart domain |u| <= 4");
}

}  // namespace

Vec chart_point(ChartId chart, const Vec& u) {
  check_chart_arg(u);
  const long m = u.size();
  const double w = 1.0 + u.squaredNorm();
  Vec x(m + 1);
  x.head(m) = (2.0 / w) * u;
  const double last = (u.squaredNorm() - 1.0) / w;
  x[m] = chart == ChartId::North ? last : -last;
  return x;
}

Mat chart_jacobian(ChartId chart, const Vec& u) {
  check_chart_arg(u);
  const long m = u.size();
  const double w = 1.0 + u.squaredNorm();
  Mat j(m + 1, m);
  j.topRows(m) =
      (2.0 / w) * (Mat::Identity(m, m) - (2.0 / w) * u * u.transpose());
  j.bottomRows(1) = (4.0 / (w * w)) * u.transpose();
  if (chart == ChartId::South) j.bottomRows(1) *= -1.0;
  return j;
}

Vec sphere_to_chart(ChartId chart, const Vec& x) {
  const long m = x.size() - 1;
  if (m < 2) throw DomainError("sphere point must have dimension >= 3");
  const double z = chart == ChartId::North ? x[m] : -x[m];
  if (z > 1.0 - 1e-12)
    throw MetricError("sphere point too close to the projection pole");
  return x.head(m) / (1.0 - z);
}

Vec chart_transition(const Vec& u) {
  const double r2 = u.squaredNorm();
  if (r2 == 0.0) throw DomainError("chart transition undefined at u = 0");
  return u / r2;
}

Mat chart_transition_jacobian(const Vec& u) {
  const double r2 = u.squaredNorm();
  if (r2 == 0.0) throw DomainError("chart transition undefined at u = 0");
  const long m = u.size();
  return Mat::Identity(m, m) / r2 - (2.0 / (r2 * r2)) * u * u.transpose();
}

// ---------------------------------------------------------------------------
// diffeomorphisms

SphereDiffeo SphereDiffeo::identity(int m) {
  if (m < 2) throw DomainError("sphere dimension must be >= 2");
  SphereDiffeo f;
  f.dim = m;
  f.kind = Kind::Identity;
  return f;
}

SphereDiffeo SphereDiffeo::rotation_map(const Mat& q) {
  if (q.rows() != q.cols() || q.rows() < 3)
    throw DomainError("rotation must be square of size >= 3");
  if ((q.transpose() * q - Mat::Identity(q.rows(), q.cols())).norm() > 1e-12)
    throw DomainError("rotation matrix is not orthogonal");
  SphereDiffeo f;
  f.dim = static_cast<int>(q.rows()) - 1;
  f.kind = Kind::Rotation;
  f.rotation = q;
  return f;
}

SphereDiffeo SphereDiffeo::latitude_twist(int m, double amp, double s0,
                                          double ramp) {
  if (m < 2) throw DomainError("sphere dimension must be >= 2");
  if (!(s0 > 0.0 && s0 < 1.0)) throw DomainError("twist needs 0 < s0 < 1");
  if (!(ramp > 0.0 && ramp <= s0)) throw DomainError("twist needs 0 < ramp <= s0");
  if (!std::isfinite(amp)) throw DomainError("twist amplitude must be finite");
  SphereDiffeo f;
  f.dim = m;
  f.kind = Kind::LatitudeTwist;
  f.amp = amp;
  f.s0 = s0;
  f.ramp = ramp;
  return f;
}

double SphereDiffeo::angle(double s) const {
  if (kind != Kind::LatitudeTwist) return 0.0;
  const double a = std::abs(s);
  if (a >= s0) return 0.0;
  if (a <= s0 - ramp) return amp;
  return amp * quintic_value((s0 - a) / ramp);
}

double SphereDiffeo::angle_d1(double s) const {
  if (kind != Kind::LatitudeTwist) return 0.0;
  const double a = std::abs(s);
  if (a >= s0 || a <= s0 - ramp) return 0.0;
  const double d = -(s > 0.0 ? 1.0 : -1.0) / ramp;
  return amp * d * quintic_d1((s0 - a) / ramp);
}

namespace {

// y = x with the (x1,x2)-plane rotated by theta
Vec rotate_plane(const Vec& x, double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  Vec y = x;
  y[0] = c * x[0] - s * x[1];
  y[1] = s * x[0] + c * x[1];
  return y;
}

}  // namespace

Vec SphereDiffeo::apply(const Vec& x) const {
  if (x.size() != dim + 1) throw DomainError("diffeo/point dimension mismatch");
  switch (kind) {
    case Kind::Identity:
      return x;
    case Kind::Rotation:
      return rotation * x;
    case Kind::LatitudeTwist:
      return rotate_plane(x, angle(x[dim]));
  }
  throw Error("unreachable");
}

Mat SphereDiffeo::differential(const Vec& x) const {
  if (x.size() != dim + 1) throw DomainError("diffeo/point dimension mismatch");
  const long n = dim + 1;
  switch (kind) {
    case Kind::Identity:
      return Mat::Identity(n, n);
    case Kind::Rotation:
      return rotation;
    case Kind::LatitudeTwist: {
      // F(x) = R_{phi(s)} x, s = x_n:  dF = R_phi + phi'(s) (J R_phi x) e_n^T
      // with J the (x1,x2) rotation generator.
      const double phi = angle(x[dim]);
      const double dphi = angle_d1(x[dim]);
      const double c = std::cos(phi), s = std::sin(phi);
      Mat df = Mat::Identity(n, n);
      df(0, 0) = c;
      df(0, 1) = -s;
      df(1, 0) = s;
      df(1, 1) = c;
      if (dphi != 0.0) {
        const Vec y = rotate_plane(x, phi);
        Vec jy = Vec::Zero(n);
        jy[0] = -y[1];
        jy[1] = y[0];
        df.col(n - 1) += dphi * jy;
      }
      return df;
    }
  }
  throw Error("unreachable");
}

SphereDiffeo SphereDiffeo::inverse() const {
  SphereDiffeo f = *this;
  switch (kind) {
    case Kind::Identity:
      return f;
    case Kind::Rotation:
      f.rotation = rotation.transpose();
      return f;
    case Kind::LatitudeTwist:
      f.amp = -amp;  // latitude is preserved, so unwinding the angle inverts
      return f;
  }
  throw Error("unreachable");
}

double SphereDiffeo::max_twist_rate() const {
  if (kind != Kind::LatitudeTwist) return 0.0;
  return std::abs(amp) * kQuinticMaxD1 / ramp;
}

double SphereDiffeo::max_twist_curv() const {
  if (kind != Kind::LatitudeTwist) return 0.0;
  return std::abs(amp) * quintic_max_d2().hi / (ramp * ramp);
}

double SphereDiffeo::condition_bound() const {
  // dF is an isometry plus a rank-one term of norm <= tau = sup|phi'|, so
  // sigma_max <= 1 + tau and sigma_min >= 1/(1 + tau).
  const double tau = max_twist_rate();
  return sq(1.0 + tau);
}

std::vector<double> SphereDiffeo::knot_latitudes() const {
  if (kind != Kind::LatitudeTwist) return {};
  return {-s0, -(s0 - ramp), s0 - ramp, s0};
}

// ---------------------------------------------------------------------------
// metrics

SphereMetric SphereMetric::round(int m, double r) {
  if (m < 2) throw DomainError("sphere dimension must be >= 2");
  if (!(r > 0.0)) throw DomainError("round metric needs radius > 0");
  SphereMetric h;
  h.dim = m;
  h.family = Family::Round;
  h.radius = r;
  return h;
}

SphereMetric SphereMetric::scaled_round(int m, double c) {
  if (m < 2) throw DomainError("sphere dimension must be >= 2");
  if (!(c > 0.0)) throw DomainError("scaled round metric needs scale > 0");
  SphereMetric h;
  h.dim = m;
  h.family = Family::ScaledRound;
  h.scale = c;
  return h;
}

SphereMetric SphereMetric::berger3(double a, double b) {
  if (!(a > 0.0 && b > 0.0)) throw DomainError("Berger metric needs a, b > 0");
  SphereMetric h;
  h.dim = 3;
  h.family = Family::Berger3;
  h.berger_a = a;
  h.berger_b = b;
  return h;
}

SphereMetric apply_diffeo(const SphereDiffeo& f, const SphereMetric& h) {
  if (f.dim != h.dim) throw DomainError("diffeo/metric dimension mismatch");
  SphereMetric g;
  g.dim = h.dim;
  g.family = SphereMetric::Family::Pullback;
  g.map = std::make_shared<SphereDiffeo>(f);
  g.base = std::make_shared<SphereMetric>(h);
  return g;
}

std::string SphereMetric::describe() const {
  switch (family) {
    case Family::Round:
      return "round(m=" + std::to_string(dim) + ",r=" + std::to_string(radius) +
             ")";
    case Family::ScaledRound:
      return "scaled_round(m=" + std::to_string(dim) +
             ",c=" + std::to_string(scale) + ")";
    case Family::Berger3:
      return "berger3(a=" + std::to_string(berger_a) +
             ",b=" + std::to_string(berger_b) + ")";
    case Family::Pullback: {
      std::string map_name = "identity";
      if (map->kind == SphereDiffeo::Kind::Rotation) map_name = "rotation";
      if (map->kind == SphereDiffeo::Kind::LatitudeTwist)
        map_name = "twist(amp=" + std::to_string(map->amp) + ")";
      return "pullback(" + map_name + "," + base->describe() + ")";
    }
  }
  return "?";
}

Mat ambient_form(const SphereMetric& h, const Vec& x) {
  const long n = h.dim + 1;
  if (x.size() != n) throw DomainError("metric/point dimension mismatch");
  switch (h.family) {
    case SphereMetric::Family::Round:
      return sq(h.radius) * Mat::Identity(n, n);
    case SphereMetric::Family::ScaledRound:
      return h.scale * Mat::Identity(n, n);
    case SphereMetric::Family::Berger3: {
      Vec q = x.normalized();
      Vec x1(4), x2(4), x3(4);
      x1 << -q[1], q[0], q[3], -q[2];
      x2 << -q[2], -q[3], q[0], q[1];
      x3 << -q[3], q[2], -q[1], q[0];
      return sq(h.berger_a) * x1 * x1.transpose() +
             sq(h.berger_b) * (x2 * x2.transpose() + x3 * x3.transpose());
    }
    case SphereMetric::Family::Pullback: {
      const Vec y = h.map->apply(x);
      const Mat df = h.map->differential(x);
      return df.transpose() * ambient_form(*h.base, y) * df;
    }
  }
  throw Error("unreachable");
}

Mat metric_matrix_at(const SphereMetric& h, ChartId chart, const Vec& u) {
  check_chart_arg(u);
  if (u.size() != h.dim) throw DomainError("metric/chart dimension mismatch");
  const double w = 1.0 + u.squaredNorm();
  if (h.family == SphereMetric::Family::Round)
    return (4.0 * sq(h.radius) / sq(w)) * Mat::Identity(h.dim, h.dim);
  if (h.family == SphereMetric::Family::ScaledRound)
    return (4.0 * h.scale / sq(w)) * Mat::Identity(h.dim, h.dim);
  const Vec x = chart_point(chart, u);
  const Mat j = chart_jacobian(chart, u);
  Mat g = j.transpose() * ambient_form(h, x) * j;
  g = 0.5 * (g + g.transpose());  // symmetrize roundoff
  if (!g.allFinite()) throw MetricError("metric matrix is not finite");
  return g;
}

Interval scal_range(const SphereMetric& h) {
  const Interval m = Interval::point(static_cast<double>(h.dim));
  switch (h.family) {
    case SphereMetric::Family::Round:
      // m(m-1)/r^2
      return m * (m - 1.0) / sqr_i(Interval::point(h.radius));
    case SphereMetric::Family::ScaledRound:
      // the scale multiplies the metric, so curvature divides by it
      return m * (m - 1.0) / Interval::point(h.scale);
    case SphereMetric::Family::Berger3: {
      // 8/b^2 - 2 a^2/b^4 for the left-invariant metric diag(a^2, b^2, b^2)
      const Interval a2 = sqr_i(Interval::point(h.berger_a));
      const Interval b2 = sqr_i(Interval::point(h.berger_b));
      return Interval::point(8.0) / b2 - 2.0 * a2 / sqr_i(b2);
    }
    case SphereMetric::Family::Pullback:
      return scal_range(*h.base);  // diffeomorphism invariance
  }
  throw Error("unreachable");
}

// ---------------------------------------------------------------------------
// eigenvalue bounds against the round metric

namespace {

struct EigAccum {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  long n = 0;
  void add(const SphereMetric& h, const Vec& x) {
    const long m = x.size() - 1;
    const ChartId chart = x[m] <= 0.0 ? ChartId::North : ChartId::South;
    const Vec u = sphere_to_chart(chart, x);
    const double w = 1.0 + u.squaredNorm();
    const Mat g = metric_matrix_at(h, chart, u);
    Eigen::SelfAdjointEigenSolver<Mat> eig(sq(w) / 4.0 * g,
                                           Eigen::EigenvaluesOnly);
    lo = std::min(lo, eig.eigenvalues().minCoeff());
    hi = std::max(hi, eig.eigenvalues().maxCoeff());
    ++n;
  }
};

// strip identity/rotation pullback layers: they do not change the
// eigenvalue range against the round metric (rotations are round isometries)
const SphereMetric* reduce_for_eigen(const SphereMetric* h) {
  while (h->family == SphereMetric::Family::Pullback) {
    const auto kind = h->map->kind;
    if (kind == SphereDiffeo::Kind::LatitudeTwist) break;
    h = h->base.get();
  }
  return h;
}

EigenBounds closed_form_bounds(double lo, double hi) {
  EigenBounds eb;
  eb.lam = Interval(lo, hi);
  eb.grid_min = lo;
  eb.grid_max = hi;
  eb.method = "closed-form";
  return eb;
}

// Lipschitz bound for the relative-eigenvalue field of a latitude twist over
// a metric c*h0: the relative matrix in a parallel orthonormal frame is
// c dF^T dF with ||dF|| <= 1 + tau and ||grad dF|| <= kappa + 2 tau + tau^2
// (tau = sup|phi'|, kappa = sup|phi''|), so by Weyl's inequality the
// eigenvalues move at most L = 2c (1+tau)(kappa + 2 tau + tau^2) per unit of
// geodesic distance.
double twist_eigen_lipschitz(const SphereDiffeo& f, double c) {
  const double tau = f.max_twist_rate();
  const double kappa = f.max_twist_curv();
  return 2.0 * c * (1.0 + tau) * (kappa + 2.0 * tau + tau * tau);
}

// The twist commutes with rotations of the (x1,x2)-plane and of the
// remaining equatorial block, so its relative eigenvalues depend only on
// latitude s and the (x1,x2)-radius; a 2-D slice grid samples every orbit.
EigenBounds twist_slice_bounds(const SphereMetric& h, const SphereDiffeo& f,
                               double c, long samples) {
  const int m = h.dim;
  EigAccum acc;
  double mesh = 0.0;  // bound on the geodesic distance to the nearest sample
  if (m == 2) {
    const long nt = samples > 0 ? samples : 4096;
    const double dt = M_PI / static_cast<double>(nt - 1);
    Vec x(3);
    for (long i = 0; i < nt; ++i) {
      const double th = dt * static_cast<double>(i);
      x << std::sin(th), 0.0, std::cos(th);
      acc.add(h, x);
    }
    mesh = 0.5 * dt;
  } else {
    long nt = 512;
    if (samples > 0)
      nt = std::max<long>(8, static_cast<long>(std::sqrt(2.0 * samples)));
    const long np = std::max<long>(4, nt / 2);
    const double dt = M_PI / static_cast<double>(nt - 1);
    const double dp = 0.5 * M_PI / static_cast<double>(np - 1);
    Vec x(m + 1);
    for (long i = 0; i < nt; ++i) {
      const double th = dt * static_cast<double>(i);
      for (long k = 0; k < np; ++k) {
        const double ps = dp * static_cast<double>(k);
        x.setZero();
        x[0] = std::sin(th) * std::cos(ps);
        x[2] = std::sin(th) * std::sin(ps);
        x[m] = std::cos(th);
        acc.add(h, x);
      }
    }
    mesh = 0.5 * (dt + dp);
  }
  EigenBounds eb;
  eb.grid_min = acc.lo;
  eb.grid_max = acc.hi;
  eb.samples = acc.n;
  eb.padding = twist_eigen_lipschitz(f, c) * mesh;
  eb.lam = Interval(acc.lo - eb.padding, acc.hi + eb.padding);
  eb.method = "grid+padding";
  return eb;
}

EigenBounds grid_only_bounds(const SphereMetric& h, long samples) {
  const long n = samples > 0 ? samples : 4096;
  Rng rng;
  EigAccum acc;
  Vec x(h.dim + 1);
  for (long i = 0; i < n; ++i) {
    for (long k = 0; k <= h.dim; ++k) x[k] = rng.normal();
    if (x.norm() < 1e-6) continue;
    x.normalize();
    acc.add(h, x);
  }
  EigenBounds eb;
  eb.grid_min = acc.lo;
  eb.grid_max = acc.hi;
  eb.samples = acc.n;
  eb.lam = Interval(acc.lo, acc.hi);
  eb.method = "grid-only";
  return eb;
}

}  // namespace

EigenBounds eigen_bounds_vs_round(const SphereMetric& h, long samples) {
  const SphereMetric* r = reduce_for_eigen(&h);
  switch (r->family) {
    case SphereMetric::Family::Round:
      return closed_form_bounds(sq(r->radius), sq(r->radius));
    case SphereMetric::Family::ScaledRound:
      return closed_form_bounds(r->scale, r->scale);
    case SphereMetric::Family::Berger3: {
      // both Berger and round are left-invariant, so the relative
      // eigenvalues {a^2, b^2, b^2} are constant on the sphere
      const double a2 = sq(r->berger_a), b2 = sq(r->berger_b);
      return closed_form_bounds(std::min(a2, b2), std::max(a2, b2));
    }
    case SphereMetric::Family::Pullback: {
      const SphereMetric* inner = reduce_for_eigen(r->base.get());
      double c = -1.0;
      if (inner->family == SphereMetric::Family::Round) c = sq(inner->radius);
      if (inner->family == SphereMetric::Family::ScaledRound) c = inner->scale;
      if (c > 0.0) return twist_slice_bounds(*r, *r->map, c, samples);
      return grid_only_bounds(*r, samples);
    }
  }
  throw Error("unreachable");
}

Certificate bilipschitz_certificate_vs_round(const SphereMetric& h,
                                             long samples) {
  const EigenBounds eb = eigen_bounds_vs_round(h, samples);
  Certificate cert;
  cert.claim = "bilipschitz-vs-round";
  cert.subject = h.describe();
  const double lambda = eb.big_lambda();
  cert.params = {{"grid_min", snap_for_output(eb.grid_min)},
                 {"grid_max", snap_for_output(eb.grid_max)},
                 {"padding", snap_for_output(eb.padding)},
                 {"lambda", snap_for_output(lambda)},
                 {"lambda_exceeds_one", lambda > 1.0}};
  cert.target = lambda;
  cert.achieved = eb.lam;
  cert.method = eb.method;
  cert.samples = eb.samples;
  if (!(eb.lam.lo > 0.0) || !std::isfinite(lambda))
    cert.status = CertStatus::Inconclusive;
  else if (eb.method == "grid-only")
    cert.status = CertStatus::CertifiedOnGrid;
  else
    cert.status = CertStatus::Certified;
  return cert;
}

}  // namespace uecert
