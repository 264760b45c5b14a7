#include "uecert/profile.hpp"

#include <algorithm>
#include <cmath>

#include "uecert/errors.hpp"

namespace uecert {

namespace {

struct KernelValues {
  Interval k, k1, k2;
};

KernelValues eval_kernel(Kernel kind, const Interval& u) {
  switch (kind) {
    case Kernel::One:
      return {Interval(1.0, 1.0), Interval(0.0, 0.0), Interval(0.0, 0.0)};
    case Kernel::Smoothstep:
      return {quintic_value(u), quintic_d1(u), quintic_d2(u)};
    case Kernel::Mollified:
      return {mollified_value(u), mollified_d1(u), mollified_d2(u)};
    case Kernel::Sin:
      return {sin_i(u), cos_i(u), -sin_i(u)};
  }
  throw DomainError("unknown kernel");
}

}  // namespace

ProfileValues Piece::eval(const Interval& t) const {
  Interval u = inner.eval(t);
  KernelValues K = eval_kernel(kernel, u);
  Interval A = scale.eval(t);
  Interval B = shift.eval(t);
  Interval a1 = Interval::point(scale.c1);
  Interval b1 = Interval::point(shift.c1);
  Interval s1 = Interval::point(inner.c1);

  ProfileValues out;
  out.v = A * K.k + B;
  out.d1 = a1 * K.k + A * K.k1 * s1 + b1;
  out.d2 = 2.0 * a1 * K.k1 * s1 + A * K.k2 * sqr_i(s1);
  return out;
}

WarpingProfile::WarpingProfile(Interval domain, std::vector<Piece> pieces,
                               std::string name, bool claims_c2)
    : domain_(domain),
      pieces_(std::move(pieces)),
      name_(std::move(name)),
      claims_c2_(claims_c2) {
  validate();
}

void WarpingProfile::validate() const {
  if (pieces_.empty()) throw DomainError("profile has no pieces");
  if (pieces_.front().span.lo != domain_.lo ||
      pieces_.back().span.hi != domain_.hi) {
    throw DomainError("profile pieces do not tile the domain");
  }
  for (size_t i = 0; i + 1 < pieces_.size(); ++i) {
    if (pieces_[i].span.hi != pieces_[i + 1].span.lo) {
      throw DomainError("profile pieces are not contiguous");
    }
  }
  // C^1 (and claimed C^2) joins at interior knots, within matching tolerance
  const double tol = 1e-12;
  for (size_t i = 0; i + 1 < pieces_.size(); ++i) {
    double k = pieces_[i].span.hi;
    ProfileValues l = pieces_[i].eval(Interval::point(k));
    ProfileValues r = pieces_[i + 1].eval(Interval::point(k));
    double scale_v = 1.0 + std::max(l.v.mag(), r.v.mag());
    if (std::fabs(l.v.mid() - r.v.mid()) > tol * scale_v) {
      throw DomainError("profile value jump at knot t=" + std::to_string(k));
    }
    double scale_d = 1.0 + std::max(l.d1.mag(), r.d1.mag());
    if (std::fabs(l.d1.mid() - r.d1.mid()) > tol * scale_d) {
      throw DomainError("profile derivative jump at knot t=" +
                        std::to_string(k));
    }
    if (claims_c2_) {
      double scale_2 = 1.0 + std::max(l.d2.mag(), r.d2.mag());
      if (std::fabs(l.d2.mid() - r.d2.mid()) > tol * scale_2) {
        throw DomainError("profile second-derivative jump at knot t=" +
                          std::to_string(k));
      }
    }
  }
}

ProfileValues WarpingProfile::eval(const Interval& t) const {
  if (!domain_.contains(t)) {
    throw DomainError("profile " + name_ + " evaluated outside domain [" +
                      std::to_string(domain_.lo) + ", " +
                      std::to_string(domain_.hi) + "]");
  }
  bool first = true;
  ProfileValues out;
  for (const Piece& p : pieces_) {
    if (!intersects(p.span, t)) continue;
    Interval sub = intersect(p.span, t);
    ProfileValues pv = p.eval(sub);
    if (first) {
      out = pv;
      first = false;
    } else {
      out.v = hull(out.v, pv.v);
      out.d1 = hull(out.d1, pv.d1);
      out.d2 = hull(out.d2, pv.d2);
    }
  }
  if (first) throw DomainError("profile evaluation hit no piece");
  return out;
}

EnclosureFn WarpingProfile::value_fn() const {
  EnclosureFn f;
  f.domain = domain_;
  f.name = name_;
  WarpingProfile self = *this;
  f.value = [self](const Interval& t) { return self.eval(t).v; };
  f.deriv1 = [self](const Interval& t) { return self.eval(t).d1; };
  f.deriv2 = [self](const Interval& t) { return self.eval(t).d2; };
  return f;
}

EnclosureFn WarpingProfile::d1_fn() const {
  EnclosureFn f;
  f.domain = domain_;
  f.name = name_ + "'";
  WarpingProfile self = *this;
  f.value = [self](const Interval& t) { return self.eval(t).d1; };
  return f;
}

EnclosureFn WarpingProfile::d2_fn() const {
  EnclosureFn f;
  f.domain = domain_;
  f.name = name_ + "''";
  WarpingProfile self = *this;
  f.value = [self](const Interval& t) { return self.eval(t).d2; };
  return f;
}

WarpingProfile WarpingProfile::rescaled(double c) const {
  if (c <= 0.0) throw DomainError("rescale factor must be positive");
  std::vector<Piece> out;
  out.reserve(pieces_.size());
  for (const Piece& p : pieces_) {
    Piece q = p;
    q.span = Interval(p.span.lo * c, p.span.hi * c);
    // s |-> c * [A(s/c) K(inner(s/c)) + B(s/c)]
    q.scale = Affine{c * p.scale.c0, p.scale.c1};
    q.shift = Affine{c * p.shift.c0, p.shift.c1};
    q.inner = Affine{p.inner.c0, p.inner.c1 / c};
    out.push_back(q);
  }
  return WarpingProfile(Interval(domain_.lo * c, domain_.hi * c),
                        std::move(out), name_ + "@" + std::to_string(c),
                        claims_c2_);
}

std::vector<double> WarpingProfile::knots() const {
  std::vector<double> k;
  for (size_t i = 0; i + 1 < pieces_.size(); ++i) {
    k.push_back(pieces_[i].span.hi);
  }
  return k;
}

WarpingProfile constant_profile(Interval domain, double c, std::string name) {
  Piece p;
  p.span = domain;
  p.scale = Affine{0.0, 0.0};
  p.shift = Affine{c, 0.0};
  p.kernel = Kernel::One;
  return WarpingProfile(domain, {p}, std::move(name));
}

WarpingProfile affine_profile(Interval domain, double c0, double c1,
                              std::string name) {
  Piece p;
  p.span = domain;
  p.scale = Affine{0.0, 0.0};
  p.shift = Affine{c0, c1};
  p.kernel = Kernel::One;
  return WarpingProfile(domain, {p}, std::move(name));
}

WarpingProfile sin_profile(Interval domain, double amp, double rate,
                           double phase, std::string name) {
  Piece p;
  p.span = domain;
  p.scale = Affine{amp, 0.0};
  p.shift = Affine{0.0, 0.0};
  p.inner = Affine{phase, rate};
  p.kernel = Kernel::Sin;
  return WarpingProfile(domain, {p}, std::move(name));
}

}  // namespace uecert
