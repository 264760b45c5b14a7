#include "uecert/curvature_oracle.hpp"

#include <cmath>

#include "uecert/errors.hpp"
#include "uecert/rng.hpp"

namespace uecert {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

double boundary_distance(const MetricField& field, const VectorXd& x) {
  double d = std::numeric_limits<double>::infinity();
  for (int i = 0; i < field.dim; ++i) {
    d = std::min(d, x[i] - field.box_lo[i]);
    d = std::min(d, field.box_hi[i] - x[i]);
  }
  return d;
}

MatrixXd inverse_metric(const MetricField& field, const VectorXd& x) {
  const MatrixXd g = field.eval(x);
  Eigen::LDLT<MatrixXd> ldlt(g);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
    throw MetricError("metric field not positive definite at sample point");
  return ldlt.solve(MatrixXd::Identity(field.dim, field.dim));
}

}  // namespace

double default_step(const MetricField& field, const VectorXd& x) {
  const double dist =
      std::min(boundary_distance(field, x), field.clearance_at(x));
  if (!(dist > 0.0))
    throw DomainError("sample point has no room for a finitestencil");
  const double scale = std::max(1.0, x.cwiseAbs().maxCoeff());
  return std::min(2e-3 * scale, 0.2 * dist / kScalStencilRadius);
}

std::vector<MatrixXd> metric_d1(const MetricField& field, const VectorXd& x,
                                double h) {
  std::vector<MatrixXd> dg(field.dim);
  VectorXd p = x;
  for (int k = 0; k < field.dim; ++k) {
    const double xk = x[k];
    p[k] = xk - 2.0 * h;
    const MatrixXd m2 = field.eval(p);
    p[k] = xk - h;
    const MatrixXd m1 = field.eval(p);
    p[k] = xk + h;
    const MatrixXd p1 = field.eval(p);
    p[k] = xk + 2.0 * h;
    const MatrixXd p2 = field.eval(p);
    p[k] = xk;
    dg[k] = (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h);
  }
  return dg;
}

std::vector<MatrixXd> christoffel(const MetricField& field, const VectorXd& x,
                                  double h) {
  const int d = field.dim;
  const MatrixXd ginv = inverse_metric(field, x);
  const std::vector<MatrixXd> dg = metric_d1(field, x, h);
  std::vector<MatrixXd> gamma(d, MatrixXd::Zero(d, d));
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      for (int j = i; j < d; ++j) {
        double s = 0.0;
        for (int l = 0; l < d; ++l)
          s += ginv(k, l) * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
        gamma[k](i, j) = 0.5 * s;
        gamma[k](j, i) = gamma[k](i, j);
      }
  return gamma;
}

double scal_fd_raw(const MetricField& field, const VectorXd& x, double h) {
  const int d = field.dim;
  const MatrixXd ginv = inverse_metric(field, x);
  const std::vector<MatrixXd> gamma = christoffel(field, x, h);

  // dgamma[k][l](i,j) = d_k Gamma^l_ij
  std::vector<std::vector<MatrixXd>> dgamma(
      d, std::vector<MatrixXd>(d, MatrixXd::Zero(d, d)));
  VectorXd p = x;
  for (int k = 0; k < d; ++k) {
    const double xk = x[k];
    p[k] = xk - 2.0 * h;
    const auto m2 = christoffel(field, p, h);
    p[k] = xk - h;
    const auto m1 = christoffel(field, p, h);
    p[k] = xk + h;
    const auto p1 = christoffel(field, p, h);
    p[k] = xk + 2.0 * h;
    const auto p2 = christoffel(field, p, h);
    p[k] = xk;
    for (int l = 0; l < d; ++l)
      dgamma[k][l] = (m2[l] - 8.0 * m1[l] + 8.0 * p1[l] - p2[l]) / (12.0 * h);
  }

  // scal = g^{ij} ( d_k Gamma^k_ij - d_i Gamma^k_kj
  //                 + Gamma^k_kl Gamma^l_ij - Gamma^k_il Gamma^l_kj )
  double scal = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      double ric = 0.0;
      for (int k = 0; k < d; ++k) {
        ric += dgamma[k][k](i, j) - dgamma[i][k](k, j);
        for (int l = 0; l < d; ++l)
          ric += gamma[k](k, l) * gamma[l](i, j) -
                 gamma[k](i, l) * gamma[l](k, j);
      }
      scal += ginv(i, j) * ric;
    }
  return scal;
}

double scal_fd(const MetricField& field, const VectorXd& x,
               const OracleOptions& opts) {
  const double h = opts.step > 0.0 ? opts.step : default_step(field, x);
  if (!opts.richardson) return scal_fd_raw(field, x, h);
  const double coarse = scal_fd_raw(field, x, h);
  const double fine = scal_fd_raw(field, x, 0.5 * h);
  return (16.0 * fine - coarse) / 15.0;
}

namespace {

double mean_curvature_raw(const MetricField& field, const VectorXd& x,
                          int axis, double h) {
  const MatrixXd g = field.eval(x);
  VectorXd col = g.col(axis);
  col[axis] -= 1.0;
  if (col.cwiseAbs().maxCoeff() > 1e-10)
    throw MetricError("slice normal coordinate is not unit and orthogonal");
  VectorXd p = x;
  const double xa = x[axis];
  p[axis] = xa - 2.0 * h;
  const MatrixXd m2 = field.eval(p);
  p[axis] = xa - h;
  const MatrixXd m1 = field.eval(p);
  p[axis] = xa + h;
  const MatrixXd p1 = field.eval(p);
  p[axis] = xa + 2.0 * h;
  const MatrixXd p2 = field.eval(p);
  const MatrixXd dg = (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h);
  Eigen::LDLT<MatrixXd> ldlt(g);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
    throw MetricError("metric field not positive definite at sample point");
  return 0.5 * ldlt.solve(dg).trace();
}

}  // namespace

double mean_curvature_fd(const MetricField& field, const VectorXd& x, int axis,
                         const OracleOptions& opts) {
  if (axis < 0 || axis >= field.dim)
    throw DomainError("slice axis out of range");
  const double h = opts.step > 0.0 ? opts.step : default_step(field, x);
  if (!opts.richardson) return mean_curvature_raw(field, x, axis, h);
  const double coarse = mean_curvature_raw(field, x, axis, h);
  const double fine = mean_curvature_raw(field, x, axis, 0.5 * h);
  return (16.0 * fine - coarse) / 15.0;
}

std::vector<VectorXd> sample_points(const MetricField& field, long count,
                                    double step_bound, std::uint64_t seed,
                                    double margin) {
  if (!(step_bound > 0.0)) throw DomainError("sampler needs a step bound");
  const double need = margin * step_bound;
  Rng rng(seed == 0 ? 0x5eed5eed5eedULL : seed);
  std::vector<VectorXd> out;
  out.reserve(count);
  VectorXd x(field.dim);
  long tries = 0;
  const long max_tries = 10'000 * std::max(count, 1L);
  while (static_cast<long>(out.size()) < count) {
    if (++tries > max_tries)
      throw DomainError("sampler could not find enough admissible points in " +
                        field.name);
    for (int i = 0; i < field.dim; ++i)
      x[i] = rng.uniform(field.box_lo[i], field.box_hi[i]);
    if (!field.in_box(x)) continue;
    if (boundary_distance(field, x) <= need) continue;
    if (field.clearance_at(x) <= need) continue;
    out.push_back(x);
  }
  return out;
}

OracleDeviation compare_closed_form(
    const MetricField& field,
    const std::function<double(const VectorXd&)>& closed_form, long n_points,
    const OracleOptions& opts, std::uint64_t seed) {
  const double step_bound = opts.step > 0.0 ? opts.step : 2e-3;
  const auto pts = sample_points(field, n_points, step_bound, seed,
                                 kScalStencilRadius + 1.0);
  OracleDeviation dev;
  dev.worst = VectorXd::Zero(field.dim);
  double sum = 0.0;
  for (const auto& x : pts) {
    const double fd = scal_fd(field, x, opts);
    const double cf = closed_form(x);
    const double rel = std::abs(fd - cf) / std::max(1.0, std::abs(cf));
    sum += rel;
    if (rel >= dev.max_dev) {
      dev.max_dev = rel;
      dev.worst = x;
      dev.worst_fd = fd;
      dev.worst_cf = cf;
    }
    ++dev.n;
  }
  dev.mean_dev = dev.n > 0 ? sum / static_cast<double>(dev.n) : 0.0;
  return dev;
}

double measured_order(const MetricField& field, const VectorXd& x,
                      double exact, double h) {
  const double e1 = std::abs(scal_fd_raw(field, x, h) - exact);
  const double e2 = std::abs(scal_fd_raw(field, x, 0.5 * h) - exact);
  if (e2 == 0.0) return std::numeric_limits<double>::infinity();
  return std::log2(e1 / e2);
}

}  // namespace uecert
