#pragma once

// Kobayashi-Royden pseudometric on the model domains and their products,
// computed through the universal covering: for a disc cover,
// kappa(z; X) = |X / p'(w)| / (1 - |w|^2) at any fibre point w over z, and 0
// when the cover is the plane. The Hahn pseudometric is only bracketed.

#include "hahn/coverings.hpp"

#include <string>

namespace hahn {

double kappa(const PlanarDomain& d, Complex z, Complex x);
/// Same, at a chosen sheet of the fibre (for the fibre-independence check).
double kappa_at_sheet(const PlanarDomain& d, Complex z, Complex x, int sheet);

double kappa_product(const PlanarDomain& d1, const PlanarDomain& d2, Complex a1, Complex a2, Complex x1,
                     Complex x2);

struct HahnBounds {
  double lower = 0;
  double upper = 0;  // +inf when no injective competitor was constructed
  bool exact = false;
};

/// lower = kappa; upper from the affine disc into the largest round disc about z.
HahnBounds hahn_bounds(const PlanarDomain& d, Complex z, Complex x);

enum class EqualityCase { SimplyConnectedFactor, CstarFactor, NotEqual };

struct EqualityVerdict {
  EqualityCase which = EqualityCase::NotEqual;
  std::string witness;
  bool equal() const { return which != EqualityCase::NotEqual; }
};

EqualityVerdict classify_product(const PlanarDomain& d1, const PlanarDomain& d2);

const char* to_string(EqualityCase c);

}  // namespace hahn
