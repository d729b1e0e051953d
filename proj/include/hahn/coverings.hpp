#pragma once

// Model planar domains, their universal coverings and deck generators.
//
// Catalog (all closed form; Cayley map c(z) = i(1+z)/(1-z) from E onto the
// upper half-plane H):
//
//   disc     E -> E,          p = id,                          deck = id
//   plane    C -> C,          p = id,                          deck = id
//   cstar    C -> C \ {0},    p = exp,                         deck t -> t + 2 pi i
//   pdisc    E -> E \ {0},    p = exp(-(1+z)/(1-z)),           deck = c^-1 o (t -> t + 2 pi) o c
//   annulus  E -> {r<|w|<1},  p = exp(-(i ln r / pi) Log c),   deck = c^-1 o (t -> lambda t) o c,
//                                                              lambda = exp(2 pi^2 / ln r)
//
// Affine images alpha * D + beta of the models are supported through a
// post-composed affine map.

#include "hahn/disc_aut.hpp"
#include "hahn/holo_expr.hpp"
#include "hahn/scalar.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hahn {

enum class DomainKind { Disc, Plane, PuncturedPlane, PuncturedDisc, Annulus };

class PlanarDomain {
 public:
  static PlanarDomain disc() { return PlanarDomain(DomainKind::Disc); }
  static PlanarDomain plane() { return PlanarDomain(DomainKind::Plane); }
  static PlanarDomain punctured_plane() { return PlanarDomain(DomainKind::PuncturedPlane); }
  static PlanarDomain punctured_disc() { return PlanarDomain(DomainKind::PuncturedDisc); }
  static PlanarDomain annulus(double r);

  /// Descriptor text: disc | plane | cstar | pdisc | annulus:<r>, optionally
  /// prefixed by "affine(<scale>;<shift>):" for an affine image of the model.
  static PlanarDomain parse(std::string_view descriptor);
  std::string descriptor() const;

  /// scale * D + shift.
  PlanarDomain affine_image(Complex scale, Complex shift) const;

  DomainKind kind() const { return kind_; }
  double inner_radius() const { return r_; }
  Complex scale() const { return scale_; }
  Complex shift() const { return shift_; }
  bool is_model() const { return scale_ == Complex(1) && shift_ == Complex(0); }

  bool contains(Complex w) const;
  /// Distance to the boundary; +inf for the plane.
  double boundary_distance(Complex w) const;
  bool simply_connected() const { return kind_ == DomainKind::Disc || kind_ == DomainKind::Plane; }
  bool biholomorphic_to_cstar() const { return kind_ == DomainKind::PuncturedPlane; }

  Complex to_model(Complex w) const { return (w - shift_) / scale_; }
  QComplex to_model(const QComplex& w) const { return (w - lift<QComplex>(shift_)) / lift<QComplex>(scale_); }

 private:
  explicit PlanarDomain(DomainKind kind) : kind_(kind) {}

  DomainKind kind_;
  double r_ = 0;
  Complex scale_{1.0, 0.0};
  Complex shift_{0.0, 0.0};
};

bool operator==(const PlanarDomain& a, const PlanarDomain& b);

enum class CoverSpace { Disc, Plane };

/// Non-identity deck generator: an automorphism of E or a translation of C.
class DeckMap {
 public:
  static DeckMap identity() { return DeckMap(); }
  static DeckMap automorphism(const QDiscAut& aut);
  static DeckMap translation(const QComplex& shift);

  bool is_identity() const { return kind_ == Kind::Identity; }
  bool is_automorphism() const { return kind_ == Kind::Automorphism; }
  bool is_translation() const { return kind_ == Kind::Translation; }

  const QDiscAut& aut() const { return aut_; }
  const QComplex& shift() const { return shift_; }

  template <class C> C apply(const C& z) const;

 private:
  enum class Kind { Identity, Automorphism, Translation };
  Kind kind_ = Kind::Identity;
  QDiscAut aut_;
  QComplex shift_{};
};

struct Covering {
  PlanarDomain domain = PlanarDomain::disc();
  CoverSpace cover = CoverSpace::Disc;
  HoloExpr map_p;
  DeckMap deck;

  /// True when p is not injective (non-identity deck), i.e. the domain is not simply connected.
  bool non_injective() const { return !deck.is_identity(); }

  /// A point of the fibre p^{-1}(w); sheet k and k+1 differ by one deck step.
  QComplex fiber_point(const QComplex& w, int sheet = 0) const;
};

Covering covering_of(const PlanarDomain& domain);

// ------------------------------------------------------------------- lifting

struct LiftOptions {
  int rays = 32;
  double radius = 0.9;
  int steps = 512;
};

/// Lift of an analytic disc sampled on a polar grid: value(ray, k) is the lift at
/// radius * k / steps along direction exp(2 pi i ray / rays).
struct LiftGrid {
  int rays = 0;
  int steps = 0;
  double radius = 0;
  std::vector<Complex> values;
  double max_residual = 0;  // max |p(lift(z)) - f(z)| over the grid

  Complex point(int ray, int k) const;
  Complex value(int ray, int k) const { return values[static_cast<std::size_t>(ray) * (steps + 1) + k]; }
};

/// Continuation of f~' = f' / (p' o f~) along rays (RK4), with one Newton
/// correction of p(w) = f(z) per node. Requires p(base) = f(0).
LiftGrid lift_disc(const HoloExpr& f, const Covering& cov, Complex base, const LiftOptions& options = {});

// ------------------------------------------------------------ displacement

/// Boundary fixed points of an automorphism (empty for elliptic ones).
std::vector<QComplex> boundary_fixed_points(const QDiscAut& aut);

/// Boundary point the displacement searches head for: the point of the unit
/// circle farthest from the deck's fixed points. Displacement tends to 1 on
/// every approach to a non-fixed boundary point.
QComplex probe_target(const QDiscAut& deck);

/// m(z, psi(z)).
QReal displacement(const QDiscAut& deck, const QComplex& z);

/// max of m(z, psi(z)) along the ray from 0 towards probe_target up to radius 1 - delta.
double sup_displacement_probe(const Covering& cov, double delta);

// -------------------------------------------------------------- self-check

struct CoveringCheck {
  int samples = 0;
  int containment_failures = 0;
  double max_deck_residual = 0;     // max |p(psi(z)) - p(z)|
  double min_deck_displacement = 0; // min |psi(z) - z| over the 64x64 grid
};

CoveringCheck check_covering(const Covering& cov, int samples, std::uint64_t seed);

}  // namespace hahn
