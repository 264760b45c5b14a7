#pragma once

// A metric presented as a coordinate field: a symmetric matrix g(x) on an
// axis box, with optional membership predicate and a clearance function
// giving (a lower bound on) the distance to the nearest locus where the
// field fails to be many-times differentiable.  Finite-difference consumers
// use the clearance to keep their stencils on smooth territory.

#include <functional>
#include <string>

#include <Eigen/Dense>

namespace uecert {

struct MetricField {
  int dim = 0;
  std::string name;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> eval;
  Eigen::VectorXd box_lo, box_hi;
  std::function<bool(const Eigen::VectorXd&)> inside;      // optional
  std::function<double(const Eigen::VectorXd&)> clearance; // optional

  bool in_box(const Eigen::VectorXd& x) const {
    for (int i = 0; i < dim; ++i)
      if (!(x[i] >= box_lo[i] && x[i] <= box_hi[i])) return false;
    return !inside || inside(x);
  }
  double clearance_at(const Eigen::VectorXd& x) const {
    return clearance ? clearance(x) : std::numeric_limits<double>::infinity();
  }
};

}  // namespace uecert
