#include "uecert/enclosure.hpp"

#include <algorithm>
#include <queue>
#include <vector>

namespace uecert {

namespace {

struct Leaf {
  Interval box;
  Interval val;
  int depth;
};

struct WiderValue {
  bool operator()(const Leaf& a, const Leaf& b) const {
    return a.val.width() < b.val.width();
  }
};

}  // namespace

Interval enclose_range(const EnclosureFn& f, const Interval& dom,
                       const BisectionOptions& opt) {
  // manual heap so the convergence check can scan leaves without copying
  std::vector<Leaf> open;
  std::vector<Leaf> done;
  const WiderValue wider;
  open.push_back({dom, f.value(dom), 0});
  std::int64_t leaves = 1;

  auto current_hull = [&]() {
    bool first = true;
    Interval h(0.0, 0.0);
    for (const Leaf& l : open) h = first ? l.val : hull(h, l.val), first = false;
    for (const Leaf& l : done) h = first ? l.val : hull(h, l.val), first = false;
    return h;
  };

  double last_width = std::numeric_limits<double>::infinity();
  std::int64_t next_check = 256;  // geometric schedule keeps checks O(total)
  while (!open.empty() && leaves < opt.leaf_budget) {
    std::pop_heap(open.begin(), open.end(), wider);
    Leaf l = open.back();
    open.pop_back();
    if (l.depth >= opt.max_depth || l.box.width() == 0.0 ||
        l.val.width() == 0.0) {
      done.push_back(l);
      continue;
    }
    double m = l.box.mid();
    if (m <= l.box.lo || m >= l.box.hi) {  // box at floating-point resolution
      done.push_back(l);
      continue;
    }
    Interval left(l.box.lo, m), right(m, l.box.hi);
    open.push_back({left, f.value(left), l.depth + 1});
    std::push_heap(open.begin(), open.end(), wider);
    open.push_back({right, f.value(right), l.depth + 1});
    std::push_heap(open.begin(), open.end(), wider);
    ++leaves;

    if (opt.width_goal > 0.0 && leaves >= next_check) {
      next_check = leaves + std::max<std::int64_t>(256, leaves / 4);
      double w = current_hull().width();
      if (w <= opt.width_goal || w >= last_width * 0.999999) break;
      last_width = w;
    }
  }

  bool first = true;
  Interval result(0.0, 0.0);
  for (const Leaf& l : open) {
    result = first ? l.val : hull(result, l.val);
    first = false;
  }
  for (const Leaf& l : done) {
    result = first ? l.val : hull(result, l.val);
    first = false;
  }
  return result;
}

namespace {

Certificate run_lower_bound(const EnclosureFn& f, const Interval& dom,
                            double target, const BisectionOptions& opt) {
  Certificate cert;
  cert.claim = "lower-bound";
  cert.subject = f.name;
  cert.domain = dom;
  cert.target = target;
  cert.method = "interval-bisection";

  std::priority_queue<Leaf, std::vector<Leaf>, WiderValue> open;
  double proven_lo = std::numeric_limits<double>::infinity();
  double witness_hi = std::numeric_limits<double>::infinity();
  std::int64_t evals = 0;
  int max_depth_seen = 0;

  auto midpoint_probe = [&](const Interval& box) {
    Interval p = f.value(Interval::point(box.mid()));
    ++evals;
    witness_hi = std::min(witness_hi, p.hi);
    return p;
  };

  Interval root_val = f.value(dom);
  ++evals;
  open.push({dom, root_val, 0});

  std::int64_t leaves = 1;
  bool budget_hit = false;
  while (!open.empty()) {
    Leaf l = open.top();
    open.pop();
    max_depth_seen = std::max(max_depth_seen, l.depth);

    if (l.val.lo >= target) {  // proven on this leaf
      proven_lo = std::min(proven_lo, l.val.lo);
      continue;
    }
    Interval probe = midpoint_probe(l.box);
    if (probe.hi < target) {
      cert.status = CertStatus::Refuted;
      cert.achieved = Interval(std::min(l.val.lo, probe.lo), probe.hi);
      cert.depth = l.depth;
      cert.samples = evals;
      return cert;
    }
    if (l.depth >= opt.max_depth || leaves >= opt.leaf_budget ||
        l.box.width() == 0.0) {
      budget_hit = true;
      proven_lo = std::min(proven_lo, l.val.lo);
      continue;
    }
    double m = l.box.mid();
    if (m <= l.box.lo || m >= l.box.hi) {
      budget_hit = true;
      proven_lo = std::min(proven_lo, l.val.lo);
      continue;
    }
    Interval left(l.box.lo, m), right(m, l.box.hi);
    open.push({left, f.value(left), l.depth + 1});
    open.push({right, f.value(right), l.depth + 1});
    evals += 2;
    ++leaves;
  }

  if (!std::isfinite(proven_lo)) proven_lo = root_val.lo;
  if (!std::isfinite(witness_hi)) witness_hi = root_val.hi;
  cert.achieved = Interval(std::min(proven_lo, witness_hi), witness_hi);
  cert.depth = max_depth_seen;
  cert.samples = evals;
  cert.status = budget_hit ? CertStatus::Inconclusive : CertStatus::Certified;
  return cert;
}

}  // namespace

Certificate certify_lower_bound(const EnclosureFn& f, const Interval& dom,
                                double target, const BisectionOptions& opt) {
  return run_lower_bound(f, dom, target, opt);
}

Certificate certify_upper_bound(const EnclosureFn& f, const Interval& dom,
                                double target, const BisectionOptions& opt) {
  EnclosureFn neg;
  neg.domain = f.domain;
  neg.name = "neg(" + f.name + ")";
  auto inner = f.value;
  neg.value = [inner](const Interval& t) { return -inner(t); };
  Certificate cert = run_lower_bound(neg, dom, -target, opt);
  cert.claim = "upper-bound";
  cert.subject = f.name;
  cert.target = target;
  // achieved for an upper bound: [best witnessed value, worst proven upper]
  cert.achieved = -cert.achieved;
  return cert;
}

Interval interval_op(const Interval& a, const Interval& b, IntervalOp op) {
  switch (op) {
    case IntervalOp::Add: return a + b;
    case IntervalOp::Sub: return a - b;
    case IntervalOp::Mul: return a * b;
    case IntervalOp::Div: return a / b;
    case IntervalOp::Pow: return pow_i(a, b);
    case IntervalOp::Sqrt: return sqrt_i(a);
    case IntervalOp::Sin: return sin_i(a);
    case IntervalOp::Cos: return cos_i(a);
    case IntervalOp::Exp: return exp_i(a);
    case IntervalOp::Log: return log_i(a);
  }
  throw DomainError("unknown interval op");
}

}  // namespace uecert
