#pragma once

// Automorphisms of the unit disc E in the normal form
//
//     z -> phase * (z - center) / (1 - conj(center) * z),   |phase| = 1, |center| < 1.
//
// The form is unique, so equality of automorphisms is a comparison of two
// complex numbers. The class is templated over the complex type so that the
// covering pipeline can run the same algebra in binary128.

#include "hahn/error.hpp"
#include "hahn/holo_expr.hpp"
#include "hahn/scalar.hpp"

#include <cmath>

namespace hahn {

template <class C> class BasicDiscAut {
 public:
  using Real = real_of_t<C>;

  BasicDiscAut() : phase_(1), center_(0) {}

  static BasicDiscAut identity() { return {}; }

  static BasicDiscAut from_normal_form(const C& phase, const C& center) {
    using std::abs;
    if (!is_finite(phase) || !is_finite(center) || !(abs(center) < 1)) {
      fail(ErrorKind::Input, "disc automorphism centre must lie in the unit disc");
    }
    const Real m = abs(phase);
    if (!(m > 0)) fail(ErrorKind::Input, "disc automorphism phase must be nonzero");
    return BasicDiscAut(phase / m, center);
  }

  /// From a Moebius matrix [[a, b], [c, d]] that preserves the unit disc.
  static BasicDiscAut from_matrix(const C& a, const C& b, const C& c, const C& d) {
    using std::abs;
    if (abs(a) == 0 || abs(d) == 0) fail(ErrorKind::Numeric, "matrix does not preserve the unit disc");
    (void)c;
    return from_normal_form(a / d, -b / a);
  }

  static BasicDiscAut rotation(const C& phase) { return from_normal_form(phase, C(0)); }

  const C& phase() const { return phase_; }
  const C& center() const { return center_; }

  C apply(const C& z) const {
    using std::conj;
    return phase_ * (z - center_) / (C(1) - conj(center_) * z);
  }

  C derivative(const C& z) const {
    using std::conj;
    const C den = C(1) - conj(center_) * z;
    return phase_ * (C(1) - center_ * conj(center_)) / (den * den);
  }

  C second_derivative(const C& z) const {
    using std::conj;
    const C den = C(1) - conj(center_) * z;
    return C(2) * phase_ * conj(center_) * (C(1) - center_ * conj(center_)) / (den * den * den);
  }

  Jet<C> jet(const C& z) const { return {apply(z), derivative(z), second_derivative(z)}; }

  /// Matrix representative [[phase, -phase*center], [-conj(center), 1]].
  void matrix(C& a, C& b, C& c, C& d) const {
    using std::conj;
    a = phase_;
    b = -phase_ * center_;
    c = -conj(center_);
    d = C(1);
  }

  bool is_identity(Real tol) const {
    using std::abs;
    return abs(phase_ - C(1)) <= tol && abs(center_) <= tol;
  }

  template <class D> BasicDiscAut<D> cast() const {
    if constexpr (std::is_same_v<C, D>) {
      return *this;
    } else if constexpr (std::is_same_v<D, Complex>) {
      return BasicDiscAut<D>::from_normal_form(to_double(phase_), to_double(center_));
    } else {
      return BasicDiscAut<D>::from_normal_form(lift<D>(phase_), lift<D>(center_));
    }
  }

  /// The automorphism as a holomorphic expression (double coefficients).
  HoloExpr to_expr() const {
    const Complex ph = to_double(phase_);
    const Complex ce = to_double(center_);
    return expr::affine(ph, 0.0, expr::moebius(ce, expr::z()));
  }

 private:
  BasicDiscAut(const C& phase, const C& center) : phase_(phase), center_(center) {}

  C phase_;
  C center_;
};

using DiscAut = BasicDiscAut<Complex>;
using QDiscAut = BasicDiscAut<QComplex>;

/// h_a(z) = (z - a)/(1 - conj(a) z).
template <class C = Complex> BasicDiscAut<C> moebius_h(const C& a) {
  using std::abs;
  if (!(abs(a) < 1)) fail(ErrorKind::Input, "moebius_h needs |a| < 1");
  return BasicDiscAut<C>::from_normal_form(C(1), a);
}

/// phi o psi.
template <class C> BasicDiscAut<C> compose_auts(const BasicDiscAut<C>& phi, const BasicDiscAut<C>& psi) {
  C a1, b1, c1, d1, a2, b2, c2, d2;
  phi.matrix(a1, b1, c1, d1);
  psi.matrix(a2, b2, c2, d2);
  return BasicDiscAut<C>::from_matrix(a1 * a2 + b1 * c2, a1 * b2 + b1 * d2, c1 * a2 + d1 * c2,
                                      c1 * b2 + d1 * d2);
}

template <class C> BasicDiscAut<C> invert(const BasicDiscAut<C>& phi) {
  using std::conj;
  return BasicDiscAut<C>::from_normal_form(conj(phi.phase()), -phi.phase() * phi.center());
}

/// m(z, w) = |h_w(z)|.
template <class C> real_of_t<C> moebius_distance(const C& z, const C& w) {
  using std::abs;
  using std::conj;
  if (!(abs(z) < 1) || !(abs(w) < 1)) fail(ErrorKind::Input, "moebius_distance needs points in E");
  return abs((z - w) / (C(1) - z * conj(w)));
}

/// 1 - m(z, w)^2 evaluated without cancellation.
template <class C> real_of_t<C> moebius_codistance_sq(const C& z, const C& w) {
  using std::abs;
  using std::conj;
  using std::norm;
  using R = real_of_t<C>;
  const R az = abs(z), aw = abs(w);
  const R den = abs(C(1) - z * conj(w));
  return ((R(1) - az) * (R(1) + az)) * ((R(1) - aw) * (R(1) + aw)) / (den * den);
}

inline constexpr double kAutTolerance = 1e-10;

/// The automorphism with x1 -> y1, x2 -> y2. Requires m(x1, x2) = m(y1, y2) within tol.
template <class C>
BasicDiscAut<C> two_point_interpolant(const C& x1, const C& y1, const C& x2, const C& y2,
                                      double tol = kAutTolerance) {
  using std::abs;
  using R = real_of_t<C>;
  const R mx = moebius_distance(x1, x2);
  const R my = moebius_distance(y1, y2);
  if (abs(mx - my) > R(tol)) {
    fail(ErrorKind::Degenerate, "no disc automorphism: Moebius distances differ (" +
                                    std::to_string(to_double(mx)) + " vs " + std::to_string(to_double(my)) + ")");
  }
  const auto hx = moebius_h(x1);
  const auto hy = moebius_h(y1);
  const C v = hx.apply(x2);
  const C u = hy.apply(y2);
  C rot(1);
  if (abs(v) > 0 && abs(u) > 0) rot = (u / abs(u)) / (v / abs(v));
  return compose_auts(invert(hy), compose_auts(BasicDiscAut<C>::rotation(rot), hx));
}

/// phi_a = h_{-a} o (-id) o h_{h_a(psi(a))} o h_a: the involution exchanging a and psi(a).
template <class C> BasicDiscAut<C> phi_involution(const C& a, const BasicDiscAut<C>& psi) {
  using std::abs;
  using R = real_of_t<C>;
  if (!(abs(a) < 1)) fail(ErrorKind::Input, "phi_involution needs a in E");
  const C pa = psi.apply(a);
  if (abs(pa - a) <= R(1e-14)) fail(ErrorKind::Degenerate, "a is a fixed point of psi");
  const auto ha = moebius_h(a);
  const auto hb = moebius_h(ha.apply(pa));
  const auto minus_id = BasicDiscAut<C>::rotation(C(-1));
  return compose_auts(moebius_h(C(-a)), compose_auts(minus_id, compose_auts(hb, ha)));
}

}  // namespace hahn
