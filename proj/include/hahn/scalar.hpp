#pragma once

// Scalar types shared by every module.
//
// Double precision is used for expression work on analytic discs. Covering
// maps with long deck translations (annuli with small inner radius) push the
// relevant points to within ~1e-12 of the unit circle, where double loses the
// hyperbolic position of a point entirely; those computations run in binary128.

#include <boost/multiprecision/complex128.hpp>
#include <boost/multiprecision/float128.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

namespace hahn {

using Complex = std::complex<double>;
using QReal = boost::multiprecision::float128;
using QComplex = boost::multiprecision::complex128;

template <class C> struct RealOf;
template <> struct RealOf<Complex> { using type = double; };
template <> struct RealOf<QComplex> { using type = QReal; };
template <class C> using real_of_t = typename RealOf<C>::type;

template <class R> inline R pi_v() {
  if constexpr (std::is_same_v<R, double>) {
    return std::numbers::pi;
  } else {
    static const R value = boost::multiprecision::acos(R(-1));
    return value;
  }
}

template <class C> inline C make_complex(double re, double im) { return C(re, im); }

template <class C> inline C lift(const Complex& z) { return C(z.real(), z.imag()); }

inline Complex to_double(const QComplex& z) {
  return {static_cast<double>(z.real()), static_cast<double>(z.imag())};
}
inline Complex to_double(const Complex& z) { return z; }
inline double to_double(const QReal& x) { return static_cast<double>(x); }
inline double to_double(double x) { return x; }

template <class C> inline bool is_finite(const C& z) {
  using std::isfinite;
  using boost::multiprecision::isfinite;
  return isfinite(z.real()) && isfinite(z.imag());
}

/// Shortest-ish decimal text for a binary128 value (36 significant digits).
std::string to_string_hp(const QReal& x);
std::string to_string_hp(const QComplex& z);

}  // namespace hahn
