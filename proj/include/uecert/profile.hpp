#pragma once

// Piecewise closed-form warping profiles f : domain -> R with certified
// enclosures of f, f', f''.
//
// Each piece evaluates  A(t) * K(inner(t)) + B(t)  where A, B, inner are
// affine in t and K is a transition kernel (constant one, quintic smoothstep,
// mollified exponential step, or sine).  This family is closed under the
// affine reparametrizations used by the curvature scaling law and covers all
// profiles in scope: cones t/lambda, collar constants, smoothstep transitions
// and their products, and sin(t).

#include <string>
#include <vector>

#include "uecert/enclosure.hpp"
#include "uecert/interval.hpp"
#include "uecert/smoothstep.hpp"

namespace uecert {

struct Affine {
  double c0 = 0.0;
  double c1 = 0.0;

  Interval eval(const Interval& t) const {
    return Interval::point(c0) + Interval::point(c1) * t;
  }
  double eval(double t) const { return c0 + c1 * t; }
};

enum class Kernel { One, Smoothstep, Mollified, Sin };

struct ProfileValues {
  Interval v;
  Interval d1;
  Interval d2;
};

struct Piece {
  Interval span{0.0, 1.0};
  Affine scale;  // A
  Affine shift;  // B
  Affine inner;  // argument of K
  Kernel kernel = Kernel::One;

  ProfileValues eval(const Interval& t) const;
};

class WarpingProfile {
 public:
  WarpingProfile() = default;
  WarpingProfile(Interval domain, std::vector<Piece> pieces,
                 std::string name = "f", bool claims_c2 = true);

  const Interval& domain() const { return domain_; }
  const std::vector<Piece>& pieces() const { return pieces_; }
  const std::string& name() const { return name_; }
  bool claims_c2() const { return claims_c2_; }

  // Certified enclosures over an interval (must be inside the domain).
  ProfileValues eval(const Interval& t) const;

  // Point values (midpoints of degenerate-interval enclosures).
  double value(double t) const { return eval(Interval::point(t)).v.mid(); }
  double d1(double t) const { return eval(Interval::point(t)).d1.mid(); }
  double d2(double t) const { return eval(Interval::point(t)).d2.mid(); }

  // EnclosureFn views for the bisection engine.
  EnclosureFn value_fn() const;
  EnclosureFn d1_fn() const;
  EnclosureFn d2_fn() const;

  // Profile for s |-> c * f(s/c) on the scaled domain (arclength rescaling).
  WarpingProfile rescaled(double c) const;

  // Interior knot locations (piece boundaries), for stencil clearance.
  std::vector<double> knots() const;

 private:
  void validate() const;

  Interval domain_{0.0, 1.0};
  std::vector<Piece> pieces_;
  std::string name_ = "f";
  bool claims_c2_ = true;
};

// Convenience constructors.
WarpingProfile constant_profile(Interval domain, double c,
                                std::string name = "const");
WarpingProfile affine_profile(Interval domain, double c0, double c1,
                              std::string name = "affine");
// amp * sin(rate * t + phase)
WarpingProfile sin_profile(Interval domain, double amp = 1.0,
                           double rate = 1.0, double phase = 0.0,
                           std::string name = "sin");

}  // namespace uecert
