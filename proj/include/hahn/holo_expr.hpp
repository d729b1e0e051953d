#pragma once

// Holomorphic expressions on the unit disc and their forward-mode jets.
//
// An expression is an immutable tree shared through std::shared_ptr; copies
// are cheap and evaluation is thread-safe. Every expression carries an
// analyticity radius R: it is declared holomorphic on the open disc |z| < R
// (R = +inf for entire expressions). Nodes that are only holomorphic on the
// unit disc (covering primitives, Moebius maps, non-constant quotients) cap the
// radius, and their argument images are checked against that domain by
// sampling at construction.

#include "hahn/error.hpp"
#include "hahn/scalar.hpp"

#include <limits>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace hahn {

/// Value with first and second derivative.
template <class C> struct Jet {
  C value{};
  C d1{};
  C d2{};
};
using Jet2 = Jet<Complex>;
using QJet = Jet<QComplex>;

enum class NodeKind {
  Variable,
  Constant,
  Add,
  Sub,
  Mul,
  Div,
  Neg,
  Pow,
  Exp,
  Moebius,
  Affine,
  Compose,
  CoverPdisc,
  CoverAnnulus,
};

struct Node;

class HoloExpr {
 public:
  /// The identity function z.
  HoloExpr();

  static HoloExpr variable() { return HoloExpr(); }
  static HoloExpr constant(Complex c);

  NodeKind kind() const;
  bool is_constant() const;
  /// Radius of the centred disc on which the expression is declared holomorphic.
  double analytic_radius() const;
  /// For quotient nodes: smallest sampled denominator modulus on the certificate disc.
  double quotient_certificate() const;

  /// Text in the expression grammar; parse(render()) reproduces the jets.
  std::string render() const;

  /// Full second-order jet. Throws Error(Region) outside the declared region
  /// or at a pole, and on any non-finite intermediate.
  template <class C> Jet<C> jet(const C& z) const;
  /// Value only (no derivative propagation).
  template <class C> C value(const C& z) const;

  const std::shared_ptr<const Node>& node() const { return node_; }
  explicit HoloExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

 private:
  std::shared_ptr<const Node> node_;
};

extern template Jet<Complex> HoloExpr::jet<Complex>(const Complex&) const;
extern template Jet<QComplex> HoloExpr::jet<QComplex>(const QComplex&) const;
extern template Complex HoloExpr::value<Complex>(const Complex&) const;
extern template QComplex HoloExpr::value<QComplex>(const QComplex&) const;

HoloExpr operator+(const HoloExpr& a, const HoloExpr& b);
HoloExpr operator-(const HoloExpr& a, const HoloExpr& b);
HoloExpr operator*(const HoloExpr& a, const HoloExpr& b);
HoloExpr operator/(const HoloExpr& a, const HoloExpr& b);
HoloExpr operator-(const HoloExpr& a);

// Builders. Kept in their own namespace so that unqualified exp/pow calls on
// plain numbers elsewhere in the library never resolve here.
namespace expr {
HoloExpr z();
HoloExpr c(Complex value);
HoloExpr pow(const HoloExpr& base, int exponent);
HoloExpr exp(const HoloExpr& arg);
/// h_a(arg) = (arg - a) / (1 - conj(a) arg), |a| < 1.
HoloExpr moebius(Complex a, const HoloExpr& arg);
/// alpha * arg + beta.
HoloExpr affine(Complex alpha, Complex beta, const HoloExpr& arg);
/// exp(-(1+w)/(1-w)): universal covering of the punctured disc by E.
HoloExpr cover_pdisc(const HoloExpr& arg);
/// exp(-(i ln r / pi) Log(i(1+w)/(1-w))): universal covering of {r < |w| < 1} by E.
HoloExpr cover_annulus(double r, const HoloExpr& arg);
}  // namespace expr

/// f(g(z)). Throws Error(Region) when sampled images of g leave the region of f.
HoloExpr compose(const HoloExpr& f, const HoloExpr& g);

/// Parses the expression grammar; throws ParseError (with byte position).
HoloExpr parse(std::string_view text);

/// Jet at z; order must be 1 or 2 (order 1 leaves d2 = 0).
Jet2 eval_jet(const HoloExpr& f, Complex z, int order = 1);

/// Upper bound for max |f| on the closed disc of the given radius: sampled
/// maximum over the circle inflated by the relative factor 1 + 1e-6.
double boundary_max_modulus(const HoloExpr& f, double radius, int samples = 4096);

inline constexpr double kBoundaryInflation = 1e-6;
inline constexpr int kDefaultBoundarySamples = 4096;
inline constexpr int kQuotientSamples = 1024;

/// Deterministic sample points filling the disc |z| < radius (polar grid, origin included).
std::vector<Complex> disc_samples(double radius, int count);

}  // namespace hahn
