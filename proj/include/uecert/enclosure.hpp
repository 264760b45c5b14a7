#pragma once

// Range enclosure and lower-bound certification by adaptive bisection.
//
// An EnclosureFn is an interval evaluator over a 1-D domain: it must be
// inclusion-isotone (a sub-box never evaluates to a wider enclosure than any
// enclosing box; natural interval extensions have this property).  Optional
// derivative evaluators travel along for clients that need them.

#include <cstdint>
#include <functional>
#include <string>

#include "uecert/certificate.hpp"
#include "uecert/interval.hpp"

namespace uecert {

struct EnclosureFn {
  Interval domain{0.0, 1.0};
  std::function<Interval(const Interval&)> value;
  std::function<Interval(const Interval&)> deriv1;  // optional
  std::function<Interval(const Interval&)> deriv2;  // optional
  std::string name = "f";
};

struct BisectionOptions {
  int max_depth = 24;
  std::int64_t leaf_budget = 1'000'000;
  // Optional early stop for enclose_range: stop refining once the hull width
  // improvement stalls below this (0 disables).
  double width_goal = 0.0;
};

// Hull of leaf enclosures after best-first adaptive bisection of `dom`
// (widest value-enclosure first).  Always returns a valid, possibly loose,
// enclosure of the exact range of f over dom.
Interval enclose_range(const EnclosureFn& f, const Interval& dom,
                       const BisectionOptions& opt = {});

inline Interval enclose_range(const EnclosureFn& f, const Interval& dom,
                              int max_depth) {
  BisectionOptions opt;
  opt.max_depth = max_depth;
  return enclose_range(f, dom, opt);
}

// Branch-and-bound proof of "f >= target everywhere on dom".
//
//   CERTIFIED     every leaf's lower enclosure cleared the target
//   REFUTED       a rigorous point evaluation showed f(x) < target
//   INCONCLUSIVE  depth or leaf budget exhausted first
//
// achieved = [worst proven lower bound over leaves,
//             best rigorous upper bound on inf f from point evaluations].
Certificate certify_lower_bound(const EnclosureFn& f, const Interval& dom,
                                double target,
                                const BisectionOptions& opt = {});

inline Certificate certify_lower_bound(const EnclosureFn& f,
                                       const Interval& dom, double target,
                                       int max_depth) {
  BisectionOptions opt;
  opt.max_depth = max_depth;
  return certify_lower_bound(f, dom, target, opt);
}

// Convenience: proof of "f <= target" via the negated evaluator.
Certificate certify_upper_bound(const EnclosureFn& f, const Interval& dom,
                                double target,
                                const BisectionOptions& opt = {});

}  // namespace uecert
