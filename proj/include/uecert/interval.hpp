#pragma once

// Outward-rounded interval arithmetic over IEEE-754 doubles.
//
// Every operation returns an interval that contains the exact real result of
// applying the operation to any points of the operands.  Rounding directions
// are resolved with compensated arithmetic (TwoSum / FMA residuals), so an
// operation whose result is exactly representable stays exact and an inexact
// one is padded by a single ulp on the affected endpoint.  Transcendental
// functions (sin, cos, exp, log) go through libm and are padded by a fixed
// ulp budget that covers the documented worst-case libm error.

#include <cmath>
#include <limits>
#include <string>

#include "uecert/errors.hpp"

namespace uecert {

namespace rnd {

inline double next_down(double x) {
  return std::nextafter(x, -std::numeric_limits<double>::infinity());
}

inline double next_up(double x) {
  return std::nextafter(x, std::numeric_limits<double>::infinity());
}

inline double step_down(double x, int ulps) {
  for (int i = 0; i < ulps; ++i) x = next_down(x);
  return x;
}

inline double step_up(double x, int ulps) {
  for (int i = 0; i < ulps; ++i) x = next_up(x);
  return x;
}

// glibc's sin/cos/exp/log are documented at <= 2 ulp on x86-64 doubles; pad
// by 3 to keep a margin over future libm revisions.
inline constexpr int kLibmPad = 3;
// std::pow can be slightly worse than the simple transcendentals.
inline constexpr int kPowPad = 4;

// Lower bound after an addition computed in round-to-nearest: s = fl(a+b).
// The TwoSum residual recovers the exact error, giving the rounding direction.
inline double add_down(double a, double b) {
  double s = a + b;
  if (!std::isfinite(s)) {
    return (s > 0) ? std::numeric_limits<double>::max() : s;
  }
  double bv = s - a;
  double av = s - bv;
  double err = (a - av) + (b - bv);
  return (err < 0) ? next_down(s) : s;
}

inline double add_up(double a, double b) {
  double s = a + b;
  if (!std::isfinite(s)) {
    return (s < 0) ? -std::numeric_limits<double>::max() : s;
  }
  double bv = s - a;
  double av = s - bv;
  double err = (a - av) + (b - bv);
  return (err > 0) ? next_up(s) : s;
}

inline double sub_down(double a, double b) { return add_down(a, -b); }
inline double sub_up(double a, double b) { return add_up(a, -b); }

inline double mul_down(double a, double b) {
  double p = a * b;
  if (!std::isfinite(p)) {
    return (p > 0) ? std::numeric_limits<double>::max() : p;
  }
  double err = std::fma(a, b, -p);  // exact: a*b = p + err
  return (err < 0) ? next_down(p) : p;
}

inline double mul_up(double a, double b) {
  double p = a * b;
  if (!std::isfinite(p)) {
    return (p < 0) ? -std::numeric_limits<double>::max() : p;
  }
  double err = std::fma(a, b, -p);
  return (err > 0) ? next_up(p) : p;
}

inline double div_down(double a, double b) {
  double q = a / b;
  if (!std::isfinite(q)) {
    return (q > 0) ? std::numeric_limits<double>::max() : q;
  }
  // residual r = q*b - a (exact); true quotient = q - r/b
  double r = std::fma(q, b, -a);
  double corr = r / b;  // sign is what matters
  return (corr > 0) ? next_down(q) : q;
}

inline double div_up(double a, double b) {
  double q = a / b;
  if (!std::isfinite(q)) {
    return (q < 0) ? -std::numeric_limits<double>::max() : q;
  }
  double r = std::fma(q, b, -a);
  double corr = r / b;
  return (corr < 0) ? next_up(q) : q;
}

inline double sqrt_down(double a) {
  double r = std::sqrt(a);
  double res = std::fma(r, r, -a);  // r^2 - a
  return (res > 0) ? next_down(r) : r;
}

inline double sqrt_up(double a) {
  double r = std::sqrt(a);
  double res = std::fma(r, r, -a);
  return (res < 0) ? next_up(r) : r;
}

}  // namespace rnd

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  Interval() = default;
  Interval(double l, double h) : lo(l), hi(h) { validate(); }

  static Interval point(double x) { return Interval(x, x); }

  void validate() const {
    if (std::isnan(lo) || std::isnan(hi) || lo > hi) {
      throw DomainError("invalid interval endpoints [" + std::to_string(lo) +
                        ", " + std::to_string(hi) + "]");
    }
  }

  double width() const { return hi - lo; }
  double mid() const {
    double m = 0.5 * (lo + hi);
    if (!std::isfinite(m)) m = 0.5 * lo + 0.5 * hi;
    return m;
  }
  double rad() const { return 0.5 * (hi - lo); }
  double mag() const { return std::max(std::fabs(lo), std::fabs(hi)); }
  // smallest absolute value attained on the interval
  double mig() const {
    if (lo <= 0.0 && 0.0 <= hi) return 0.0;
    return std::min(std::fabs(lo), std::fabs(hi));
  }

  bool contains(double x) const { return lo <= x && x <= hi; }
  bool contains(const Interval& o) const { return lo <= o.lo && o.hi <= hi; }
  bool strictly_positive() const { return lo > 0.0; }
};

inline Interval hull(const Interval& a, const Interval& b) {
  return Interval(std::min(a.lo, b.lo), std::max(a.hi, b.hi));
}

inline bool intersects(const Interval& a, const Interval& b) {
  return a.lo <= b.hi && b.lo <= a.hi;
}

inline Interval intersect(const Interval& a, const Interval& b) {
  if (!intersects(a, b)) {
    throw DomainError("empty interval intersection");
  }
  return Interval(std::max(a.lo, b.lo), std::min(a.hi, b.hi));
}

inline Interval operator-(const Interval& a) { return Interval(-a.hi, -a.lo); }

inline Interval operator+(const Interval& a, const Interval& b) {
  return Interval(rnd::add_down(a.lo, b.lo), rnd::add_up(a.hi, b.hi));
}

inline Interval operator-(const Interval& a, const Interval& b) {
  return Interval(rnd::sub_down(a.lo, b.hi), rnd::sub_up(a.hi, b.lo));
}

inline Interval operator*(const Interval& a, const Interval& b) {
  double cands_lo[4] = {rnd::mul_down(a.lo, b.lo), rnd::mul_down(a.lo, b.hi),
                        rnd::mul_down(a.hi, b.lo), rnd::mul_down(a.hi, b.hi)};
  double cands_hi[4] = {rnd::mul_up(a.lo, b.lo), rnd::mul_up(a.lo, b.hi),
                        rnd::mul_up(a.hi, b.lo), rnd::mul_up(a.hi, b.hi)};
  double lo = cands_lo[0], hi = cands_hi[0];
  for (int i = 1; i < 4; ++i) {
    lo = std::min(lo, cands_lo[i]);
    hi = std::max(hi, cands_hi[i]);
  }
  return Interval(lo, hi);
}

inline Interval operator/(const Interval& a, const Interval& b) {
  if (b.lo <= 0.0 && 0.0 <= b.hi) {
    throw DomainError("division by interval containing zero: [" +
                      std::to_string(b.lo) + ", " + std::to_string(b.hi) + "]");
  }
  double cands_lo[4] = {rnd::div_down(a.lo, b.lo), rnd::div_down(a.lo, b.hi),
                        rnd::div_down(a.hi, b.lo), rnd::div_down(a.hi, b.hi)};
  double cands_hi[4] = {rnd::div_up(a.lo, b.lo), rnd::div_up(a.lo, b.hi),
                        rnd::div_up(a.hi, b.lo), rnd::div_up(a.hi, b.hi)};
  double lo = cands_lo[0], hi = cands_hi[0];
  for (int i = 1; i < 4; ++i) {
    lo = std::min(lo, cands_lo[i]);
    hi = std::max(hi, cands_hi[i]);
  }
  return Interval(lo, hi);
}

inline Interval operator+(const Interval& a, double b) { return a + Interval::point(b); }
inline Interval operator+(double a, const Interval& b) { return Interval::point(a) + b; }
inline Interval operator-(const Interval& a, double b) { return a - Interval::point(b); }
inline Interval operator-(double a, const Interval& b) { return Interval::point(a) - b; }
inline Interval operator*(const Interval& a, double b) { return a * Interval::point(b); }
inline Interval operator*(double a, const Interval& b) { return Interval::point(a) * b; }
inline Interval operator/(const Interval& a, double b) { return a / Interval::point(b); }
inline Interval operator/(double a, const Interval& b) { return Interval::point(a) / b; }

inline Interval abs_i(const Interval& a) {
  if (a.lo >= 0.0) return a;
  if (a.hi <= 0.0) return -a;
  return Interval(0.0, std::max(-a.lo, a.hi));
}

inline Interval sqrt_i(const Interval& a) {
  if (a.hi < 0.0) {
    throw DomainError("sqrt of interval with negative upper end [" +
                      std::to_string(a.lo) + ", " + std::to_string(a.hi) + "]");
  }
  double lo = (a.lo <= 0.0) ? 0.0 : std::max(0.0, rnd::sqrt_down(a.lo));
  return Interval(lo, rnd::sqrt_up(a.hi));
}

inline Interval sqr_i(const Interval& a) {
  double lo_abs = a.mig(), hi_abs = a.mag();
  double lo = std::max(0.0, rnd::mul_down(lo_abs, lo_abs));
  return Interval(lo, rnd::mul_up(hi_abs, hi_abs));
}

// Integer powers: exact monotonicity casework.
inline Interval pow_i(const Interval& a, long k) {
  if (k == 0) return Interval(1.0, 1.0);
  if (k < 0) return Interval(1.0, 1.0) / pow_i(a, -k);
  if (k == 1) return a;
  if (k == 2) return sqr_i(a);
  // repeated squaring keeps the padding at O(log k) ulps
  Interval base = a;
  Interval acc(1.0, 1.0);
  long e = k;
  bool negate_possible = (a.lo < 0.0) && (k % 2 == 0);
  if (negate_possible) base = abs_i(a);
  while (e > 0) {
    if (e & 1) acc = acc * base;
    e >>= 1;
    if (e > 0) base = sqr_i(base);
  }
  if (a.lo < 0.0 && (k % 2 == 0) && a.contains(0.0)) {
    acc = Interval(0.0, acc.hi);
  }
  return acc;
}

inline Interval exp_i(const Interval& a) {
  double lo = rnd::step_down(std::exp(a.lo), rnd::kLibmPad);
  double hi = rnd::step_up(std::exp(a.hi), rnd::kLibmPad);
  return Interval(std::max(0.0, lo), hi);
}

inline Interval log_i(const Interval& a) {
  if (a.lo <= 0.0) {
    throw DomainError("log requires a strictly positive interval, got lo = " +
                      std::to_string(a.lo));
  }
  return Interval(rnd::step_down(std::log(a.lo), rnd::kLibmPad),
                  rnd::step_up(std::log(a.hi), rnd::kLibmPad));
}

// Real exponent: x^y = exp(y log x); requires x > 0.
inline Interval pow_i(const Interval& a, const Interval& y) {
  if (y.width() == 0.0 && y.lo == std::floor(y.lo) && std::fabs(y.lo) < 1e15) {
    return pow_i(a, static_cast<long>(y.lo));
  }
  return exp_i(y * log_i(a));
}

inline Interval pow_i(const Interval& a, double y) {
  return pow_i(a, Interval::point(y));
}

// Enclosure of pi: M_PI is the nearest double below pi.
inline Interval pi_i() { return Interval(M_PI, rnd::next_up(M_PI)); }

namespace detail {

// Conservative test for "does the interval contain an integer".
inline bool has_integer(const Interval& a) {
  return std::floor(a.hi) >= std::ceil(a.lo);
}

// Does [a.lo, a.hi] possibly contain a point of phase + 2*pi*k?
inline bool hits_phase(const Interval& a, const Interval& phase) {
  Interval two_pi = Interval(2.0, 2.0) * pi_i();
  Interval idx = (a - phase) / two_pi;
  return has_integer(idx);
}

}  // namespace detail

inline Interval sin_i(const Interval& a) {
  Interval two_pi = Interval(2.0, 2.0) * pi_i();
  if (a.width() >= two_pi.hi) return Interval(-1.0, 1.0);
  Interval half_pi = pi_i() / 2.0;
  bool top = detail::hits_phase(a, half_pi);           //  pi/2 + 2 pi k
  bool bot = detail::hits_phase(a, -half_pi);          // -pi/2 + 2 pi k
  double slo = std::sin(a.lo), shi = std::sin(a.hi);
  double lo = bot ? -1.0
                  : rnd::step_down(std::min(slo, shi), rnd::kLibmPad);
  double hi = top ? 1.0 : rnd::step_up(std::max(slo, shi), rnd::kLibmPad);
  return Interval(std::max(lo, -1.0), std::min(hi, 1.0));
}

inline Interval cos_i(const Interval& a) {
  Interval two_pi = Interval(2.0, 2.0) * pi_i();
  if (a.width() >= two_pi.hi) return Interval(-1.0, 1.0);
  bool top = detail::hits_phase(a, Interval::point(0.0));  // 2 pi k
  bool bot = detail::hits_phase(a, pi_i());                // pi + 2 pi k
  double clo = std::cos(a.lo), chi = std::cos(a.hi);
  double lo = bot ? -1.0
                  : rnd::step_down(std::min(clo, chi), rnd::kLibmPad);
  double hi = top ? 1.0 : rnd::step_up(std::max(clo, chi), rnd::kLibmPad);
  return Interval(std::max(lo, -1.0), std::min(hi, 1.0));
}

inline Interval min_i(const Interval& a, const Interval& b) {
  return Interval(std::min(a.lo, b.lo), std::min(a.hi, b.hi));
}

inline Interval max_i(const Interval& a, const Interval& b) {
  return Interval(std::max(a.lo, b.lo), std::max(a.hi, b.hi));
}

// Uniform dispatch used by the op-level containment test driver.
enum class IntervalOp { Add, Sub, Mul, Div, Pow, Sqrt, Sin, Cos, Exp, Log };

// Binary ops use both operands; unary ops ignore `b`.  Pow reads the exponent
// from `b` (point interval).
Interval interval_op(const Interval& a, const Interval& b, IntervalOp op);

}  // namespace uecert
