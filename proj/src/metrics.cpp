#include "hahn/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hahn {

namespace {

void require_member(const PlanarDomain& d, Complex z) {
  if (!d.contains(z)) fail(ErrorKind::Input, "point lies outside " + d.descriptor());
}

}  // namespace

double kappa_at_sheet(const PlanarDomain& d, Complex z, Complex x, int sheet) {
  require_member(d, z);
  const Covering cov = covering_of(d);
  if (cov.cover == CoverSpace::Plane) return 0;
  const QComplex w = cov.fiber_point(lift<QComplex>(z), sheet);
  const QComplex dp = cov.map_p.jet(w).d1;
  const QReal one_minus = moebius_codistance_sq(w, QComplex(0));  // 1 - |w|^2
  return to_double(QReal(abs(lift<QComplex>(x) / dp) / one_minus));
}

double kappa(const PlanarDomain& d, Complex z, Complex x) { return kappa_at_sheet(d, z, x, 0); }

double kappa_product(const PlanarDomain& d1, const PlanarDomain& d2, Complex a1, Complex a2, Complex x1,
                     Complex x2) {
  return std::max(kappa(d1, a1, x1), kappa(d2, a2, x2));
}

HahnBounds hahn_bounds(const PlanarDomain& d, Complex z, Complex x) {
  HahnBounds b;
  b.lower = kappa(d, z, x);
  if (d.simply_connected()) {
    b.upper = b.lower;
    b.exact = true;
    return b;
  }
  // z + dist * zeta is an injective disc through z with derivative dist.
  const double dist = d.boundary_distance(z);
  b.upper = std::isfinite(dist) && dist > 0 ? std::abs(x) / dist : std::numeric_limits<double>::infinity();
  return b;
}

EqualityVerdict classify_product(const PlanarDomain& d1, const PlanarDomain& d2) {
  if (d1.simply_connected() || d2.simply_connected()) {
    const auto& sc = d1.simply_connected() ? d1 : d2;
    return {EqualityCase::SimplyConnectedFactor,
            sc.descriptor() + " is simply connected; discs into the product can be made injective"};
  }
  if (d1.biholomorphic_to_cstar() || d2.biholomorphic_to_cstar()) {
    const auto& cs = d1.biholomorphic_to_cstar() ? d1 : d2;
    return {EqualityCase::CstarFactor,
            cs.descriptor() + " is a punctured plane; the other factor carries an injective correction"};
  }
  return {EqualityCase::NotEqual, "both factors are covered by the disc with non-injective covering maps"};
}

const char* to_string(EqualityCase c) {
  switch (c) {
    case EqualityCase::SimplyConnectedFactor: return "SimplyConnectedFactor";
    case EqualityCase::CstarFactor: return "CstarFactor";
    case EqualityCase::NotEqual: return "NotEqual";
  }
  return "?";
}

}  // namespace hahn
