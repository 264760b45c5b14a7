#pragma once

// Transition kernels on [0,1].
//
// Quintic smoothstep  S(u) = 6u^5 - 15u^4 + 10u^3:
//   S(0)=0, S(1)=1, S'(0)=S'(1)=S''(0)=S''(1)=0  (C^2 joins with constants)
//   max |S'|  = 15/8        at u = 1/2
//   max |S''| = 10/sqrt(3)  at u = (3 -+ sqrt(3))/6
//
// Mollified exponential step E(u) = sig(u)/(sig(u)+sig(1-u)), sig(u)=e^{-1/u}:
//   C^infinity with all derivatives vanishing at 0 and 1; extrema of E', E''
//   have no closed form and are estimated numerically where needed.

#include "uecert/interval.hpp"

namespace uecert {

// Kernels extend as constants (value 0 / 1, derivatives 0) outside [0,1];
// clamping the argument realizes that extension and also absorbs the one-ulp
// spill of outward-rounded inner affine maps.
inline Interval clamp_unit(const Interval& u) {
  auto cl = [](double x) { return std::min(std::max(x, 0.0), 1.0); };
  return Interval(cl(u.lo), cl(u.hi));
}

inline Interval quintic_value(Interval u) {
  u = clamp_unit(u);
  // monotone increasing on [0,1]: evaluate endpoints rigorously
  auto at = [](double x) {
    Interval t = Interval::point(x);
    return ((6.0 * t - 15.0) * t + 10.0) * pow_i(t, 3L);
  };
  return Interval(std::max(0.0, at(u.lo).lo), std::min(1.0, at(u.hi).hi));
}

inline Interval quintic_d1(Interval u) {
  u = clamp_unit(u);
  // 30 u^2 (1-u)^2: monotone up on [0,1/2], down on [1/2,1];
  // the max 30/16 = 15/8 at u = 1/2 is exactly representable
  auto at = [](double x) {
    Interval t = Interval::point(x);
    return 30.0 * sqr_i(t * (1.0 - t));
  };
  double lo, hi;
  if (u.hi <= 0.5) {
    lo = at(u.lo).lo;
    hi = at(u.hi).hi;
  } else if (u.lo >= 0.5) {
    lo = at(u.hi).lo;
    hi = at(u.lo).hi;
  } else {
    lo = std::min(at(u.lo).lo, at(u.hi).lo);
    hi = 1.875;
  }
  return Interval(std::max(0.0, lo), std::min(hi, 1.875));
}

inline Interval quintic_d2(Interval u) {
  u = clamp_unit(u);
  // 60 u (2u - 1)(u - 1)
  return 60.0 * u * (2.0 * u - 1.0) * (u - 1.0);
}

inline double quintic_value(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  return ((6.0 * u - 15.0) * u + 10.0) * u * u * u;
}

inline double quintic_d1(double u) {
  if (u <= 0.0 || u >= 1.0) return 0.0;
  double w = u * (1.0 - u);
  return 30.0 * w * w;
}

inline double quintic_d2(double u) {
  if (u <= 0.0 || u >= 1.0) return 0.0;
  return 60.0 * u * (2.0 * u - 1.0) * (u - 1.0);
}

// exact: 15/8
inline constexpr double kQuinticMaxD1 = 1.875;
// enclosure of 10/sqrt(3)
inline Interval quintic_max_d2() {
  return 10.0 / sqrt_i(Interval(3.0, 3.0));
}

namespace detail {

// sig(u) = exp(-1/u) for u > 0, 0 otherwise (monotone increasing)
inline Interval mollifier_sig(const Interval& u) {
  auto at_up = [](double x) {
    if (x <= 0.0) return 0.0;
    return exp_i(-1.0 / Interval::point(x)).hi;
  };
  auto at_down = [](double x) {
    if (x <= 0.0) return 0.0;
    return std::max(0.0, exp_i(-1.0 / Interval::point(x)).lo);
  };
  return Interval(at_down(u.lo), at_up(u.hi));
}

// pointwise s(u) + m(u) >= e^{-2} on (0,1) since max(u, 1-u) >= 1/2; the
// interval sum forgets that correlation on wide boxes, so clamp its floor
inline Interval mollifier_sum(const Interval& s, const Interval& m) {
  static const double floor_lo = exp_i(Interval::point(-2.0)).lo;
  Interval sm = s + m;
  sm.lo = std::max(sm.lo, floor_lo);
  return sm;
}

}  // namespace detail

inline Interval mollified_value(Interval u) {
  u = clamp_unit(u);
  if (u.hi <= 0.0) return Interval(0.0, 0.0);
  if (u.lo >= 1.0) return Interval(1.0, 1.0);
  Interval s = detail::mollifier_sig(u);
  Interval m = detail::mollifier_sig(1.0 - u);
  Interval r = s / detail::mollifier_sum(s, m);
  return intersect(r, Interval(0.0, 1.0));
}

// Within kEdge of an endpoint, sig(u) <= e^{-1000}: every derivative of E is
// below 1e-400 in magnitude there, so [-1e-300, 1e-300] is a sound (and
// irrelevantly loose) enclosure for the dead zones.
inline constexpr double kMollifierEdge = 1e-3;

// E' = s m (1/u^2 + 1/(1-u)^2) / (s+m)^2, zero outside (0,1)
inline Interval mollified_d1(Interval u) {
  u = clamp_unit(u);
  if (u.hi <= 0.0 || u.lo >= 1.0) return Interval(0.0, 0.0);
  const Interval dead(0.0, 1e-300);
  if (u.hi <= kMollifierEdge || u.lo >= 1.0 - kMollifierEdge) return dead;
  bool touches_end = u.lo < kMollifierEdge || u.hi > 1.0 - kMollifierEdge;
  Interval core(std::max(u.lo, kMollifierEdge),
                std::min(u.hi, 1.0 - kMollifierEdge));
  Interval s = detail::mollifier_sig(core);
  Interval m = detail::mollifier_sig(1.0 - core);
  Interval w = 1.0 / sqr_i(core) + 1.0 / sqr_i(1.0 - core);
  Interval r = s * m * w / sqr_i(detail::mollifier_sum(s, m));
  if (touches_end) r = hull(r, dead);
  return r;
}

inline Interval mollified_d2(Interval u) {
  u = clamp_unit(u);
  if (u.hi <= 0.0 || u.lo >= 1.0) return Interval(0.0, 0.0);
  const Interval dead(-1e-300, 1e-300);
  if (u.hi <= kMollifierEdge || u.lo >= 1.0 - kMollifierEdge) return dead;
  bool touches_end = u.lo < kMollifierEdge || u.hi > 1.0 - kMollifierEdge;
  Interval core(std::max(u.lo, kMollifierEdge),
                std::min(u.hi, 1.0 - kMollifierEdge));
  Interval s = detail::mollifier_sig(core);
  Interval m = detail::mollifier_sig(1.0 - core);
  Interval iu2 = 1.0 / sqr_i(core);
  Interval iv2 = 1.0 / sqr_i(1.0 - core);
  Interval w = iu2 + iv2;
  Interval wp = -2.0 / pow_i(core, 3L) + 2.0 / pow_i(1.0 - core, 3L);
  Interval sm = detail::mollifier_sum(s, m);
  Interval num =
      s * m * ((w * (iu2 - iv2) + wp) * sm - 2.0 * w * (s * iu2 - m * iv2));
  Interval r = num / pow_i(sm, 3L);
  if (touches_end) r = hull(r, dead);
  return r;
}

inline double mollified_value(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  double s = std::exp(-1.0 / u), m = std::exp(-1.0 / (1.0 - u));
  return s / (s + m);
}

inline double mollified_d1(double u) {
  if (u <= 0.0 || u >= 1.0) return 0.0;
  double s = std::exp(-1.0 / u), m = std::exp(-1.0 / (1.0 - u));
  double w = 1.0 / (u * u) + 1.0 / ((1.0 - u) * (1.0 - u));
  double sm = s + m;
  return s * m * w / (sm * sm);
}

}  // namespace uecert
