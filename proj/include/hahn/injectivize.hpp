#pragma once

// Injective analytic discs into products D1 x D2 with prescribed 1-jet:
// given f = (f1, f2) and theta in (0, 1), build an injective g with
// g(0) = f(0) and g'(0) = theta f'(0).
//
//   prop2  D1 simply connected (disc or plane, possibly affinely moved)
//          case 1  f1'(0) != 0: g1 is an injective Moebius/affine disc, g2 = f2(theta z)
//          case 2  f1'(0) == 0: g1 = f1(0) + d/(M+1) (h - theta z), h from f2
//   prop3  D1 = C* (possibly affinely moved), D2 != C
//          swapped  f2'(0) == 0: prop2 case 2 on (f2(0) + dist E) x C* with roles exchanged
//          unit     theta F1'(0) == 1 after normalisation F1(0) = 1: g1 = 1 + z
//          general  g1 = (1 + z) h^k with h zero-free on E

#include "hahn/coverings.hpp"
#include "hahn/holo_expr.hpp"
#include "hahn/sampling.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hahn {

struct DiscPair {
  HoloExpr comp1;
  HoloExpr comp2;
  PlanarDomain target1 = PlanarDomain::disc();
  PlanarDomain target2 = PlanarDomain::disc();

  /// {"comp1": expr, "comp2": expr, "target1": descriptor, "target2": descriptor}
  static DiscPair from_json(std::string_view text);
  std::string to_json() const;

  DiscPair swapped() const { return {comp2, comp1, target2, target1}; }
};

/// Throws Error(Input) unless both components are holomorphic on E, finite at 0
/// and the sampled images (disc_samples(0.999, 1000)) lie in the targets.
void validate_disc_pair(const DiscPair& f);

enum class Branch { Prop2Case1, Prop2Case2, Prop3General, Prop3Unit, Prop3Swapped };
const char* to_string(Branch b);

struct InjectivityOptions {
  int pairs = 10000;
  std::uint64_t seed = 0;
  /// Component (1 or 2) that must be injective on its own: winding count 1 around
  /// image targets. 0 for none. The injectivize drivers set this from the branch.
  int injective_component = 0;
  /// Component (1 or 2) whose modulus in its target's model coordinates is tracked
  /// (zero-freeness of the C* factor). 0 for none.
  int zero_free_component = 0;
};

struct WindingSample {
  int component = 0;
  Complex target;
  int winding = 0;
};

struct InjectivityReport {
  int points = 0;
  int pairs = 0;
  int collisions = 0;
  double min_separation_ratio = 0;  // min max_j |g_j(z1) - g_j(z2)| / |z1 - z2|
  std::vector<WindingSample> windings;
  double min_modulus = 0;  // for zero_free_component
  bool passed = false;
};

/// Pairs are drawn from a polar lattice in the radius-0.999 disc: antipodal and
/// third-turn partners (which catch rotational symmetries such as z^2), radial
/// neighbours (local separation) and uniformly random partners.
InjectivityReport verify_injectivity(const DiscPair& g, const InjectivityOptions& options);

inline constexpr double kJetTolerance = 1e-10;
inline constexpr double kCollisionDistance = 1e-12;

struct InjectivizationResult {
  DiscPair g;
  Branch branch = Branch::Prop2Case1;
  bool components_swapped = false;  // the driver exchanged the factors to reach the branch
  double value_residual = 0;        // max_j |g_j(0) - f_j(0)|
  double derivative_residual = 0;   // max_j |g_j'(0) - theta f_j'(0)|
  // construction parameters (NaN / 0 when not used by the branch)
  Complex lambda{};       // prop2 case 1
  double big_m = 0;       // prop2 case 2, prop3 general
  double d = 0;           // prop2 case 2
  int k = 0;              // prop3 general
  Complex c_k{};          // prop3 general
  /// prop2 case 2: max |g1(z) - f1(0)| / d over the sample points (< 1 means contained).
  double containment_ratio = 0;
  InjectivityReport injectivity;
  bool passed = false;
};

/// f must map into D1 x D2 with D1 simply connected.
InjectivizationResult prop2_injectivize(const DiscPair& f, double theta, const InjectivityOptions& options = {});
/// f must map into C* x D2 with D2 not the plane.
InjectivizationResult prop3_injectivize(const DiscPair& f, double theta, const InjectivityOptions& options = {});

/// Chooses the branch from the target kinds (swapping factors when needed).
/// Throws Error(TheoremCase) when neither factor is simply connected nor C*.
InjectivizationResult injectivize(const DiscPair& f, double theta, const InjectivityOptions& options = {});

struct ThetaRow {
  double theta = 0;
  Branch branch = Branch::Prop2Case1;
  double value_residual = 0;
  double derivative_residual = 0;
  double min_separation_ratio = 0;
  bool passed = false;
};

std::vector<ThetaRow> theta_family_report(const DiscPair& f, const std::vector<double>& thetas,
                                          const InjectivityOptions& options = {});

/// Random disc pair that lands in the given branch of injectivize() at this theta.
DiscPair random_disc_pair(Branch branch, double theta, Sampler& rng);

}  // namespace hahn
