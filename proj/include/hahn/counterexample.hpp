#pragma once

// Certificates that the Hahn and Kobayashi-Royden pseudometrics differ on
// D1 x D2 when both factors are covered by E with non-injective covering maps:
// automorphisms phi_1, phi_2 and a point q = (q1, q2), q1 != q2, such that
// P_j = p_j o phi_j satisfies P_j(q1) = P_j(q2) and det[P_j'(q_k)] != 0.
//
// All geometry runs in binary128: for thin annuli the points involved sit
// within ~1e-12 of the unit circle.

#include "hahn/check.hpp"
#include "hahn/coverings.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hahn {

struct EqualDisplacement {
  QReal level = 0;  // shared value of m(z_j, psi_j(z_j))
  QComplex z1, z2;
  QComplex direction1, direction2;  // boundary points the searches headed for
  double level_residual = 0;        // max_j |m(z_j, psi_j(z_j)) - level|
};

/// Shared level max(m(0, psi_1(0)), m(0, psi_2(0)), 0.9); z_j is the first point
/// on the ray from 0 towards probe_target(psi_j) reaching it (scan in the
/// hyperbolic parameter, then bisection to full precision).
EqualDisplacement find_equal_displacement(const Covering& c1, const Covering& c2);

enum class CertificateBranch { Direct, Reduced };
const char* to_string(CertificateBranch b);

struct NormalizedPair {
  Covering cov1, cov2;
  EqualDisplacement eq;
  QReal d = 0;  // m(-d, d) = level
  QReal c = 0;  // -2d / (1 + d^2)
  QDiscAut h1, h2;            // h_j(-d) = z_j, h_j(d) = psi_j(z_j)
  QDiscAut psi1, psi2;        // h_j^-1 o psi_j o h_j
  QComplex s1, s2;            // psi~_j'(-d)
  QComplex a1, a2, b1, b2;    // (p_j o h_j)'(-d), (p_j o h_j)'(d)
  CertificateBranch branch = CertificateBranch::Direct;
  int nonunit_component = 0;  // direct branch: first j with psi~_j'(-d) != +-1
};

/// Branch tolerance on (p_j o h_j)'(-d) = +-(p_j o h_j)'(d), relative.
inline constexpr double kBranchTolerance = 1e-8;
inline constexpr double kDeterminantFloor = 1e-6;
inline constexpr double kCoveringTolerance = 1e-9;
inline constexpr double kInvolutionTolerance = 1e-10;
inline constexpr double kMarginFloor = 1e-3;

NormalizedPair normalize(const Covering& c1, const Covering& c2, const EqualDisplacement& eq);

/// Default a and the fallback sweep used by the reduced branch.
std::vector<Complex> default_a_sweep();

struct Certificate {
  Covering cov1, cov2;
  CertificateBranch branch = CertificateBranch::Direct;
  QComplex q1, q2;
  QDiscAut phi1, phi2;
  QComplex det_direct;      // det[(p_j o phi_j)'(q_k)] from jets
  QComplex det_simplified;  // closed-form product formula
  int determinant_variant = 1;  // direct branch: 1 plain, 2 with -id on nonunit_component
  int minus_id_component = 0;
  QReal level = 0, d = 0, c = 0;
  QComplex z1, z2, s1, s2;
  std::optional<QComplex> a;  // reduced branch only
  double margin_minus = 0;    // |phi'(a) + psi'(a)| / |psi'(a)|
  double margin_plus = 0;     // |phi'(a) - psi'(a)| / |psi'(a)|
  std::vector<Check> checks;
  bool passed = false;

  /// P_j(z) = p_j(phi_j(z)) with first derivative.
  QJet jet(int j, const QComplex& z) const;
};

/// Reduced branch: try `a` (must be non-real, else Error(Degenerate)) or the
/// default sweep when absent; direct branch ignores `a`.
Certificate build_certificate(const NormalizedPair& pair, std::optional<Complex> a = std::nullopt);

/// Whole pipeline from two domains. Error(TheoremCase) unless both factors are
/// covered by E with a non-identity deck.
Certificate certify(const PlanarDomain& d1, const PlanarDomain& d2, std::optional<Complex> a = std::nullopt);

/// |phi_a'(a) + psi'(a)| and |phi_a'(a) - psi'(a)|, both relative to |psi'(a)|.
struct DichotomyMargins {
  double minus = 0;
  double plus = 0;
};
DichotomyMargins dichotomy_margins(const QDiscAut& psi, const QComplex& a);

// ----------------------------------------------------------- transversality

/// h_0(z1, z2) = P(z1) - P(z2) for P = p o phi.
struct DifferenceSurface {
  Covering cov;
  QDiscAut phi;
  QJet p_jet(const QComplex& z) const;
  QComplex operator()(const QComplex& z1, const QComplex& z2) const;
};

DifferenceSurface surface(const Certificate& cert, int j);

/// Jacobian determinant of (h_{0,1}, h_{0,2}) at q, by central differences in
/// binary128 with steps scaled to the distance of q from the unit circle.
QComplex transversality_check(const DifferenceSurface& s1, const DifferenceSurface& s2, const QComplex& q1,
                              const QComplex& q2);

struct PersistenceResult {
  double delta = 0;
  bool converged = false;
  int iterations = 0;          // Newton steps, all stages included
  int continuation_stages = 0; // 0 when Newton from q converged on its own
  std::vector<double> trace;   // residual after each direct step, then after each stage
  QComplex z1, z2;
  double residual = 0;
  double displacement = 0;    // max_k |z_k - q_k|
  double constant_c = 0;      // displacement * |det| / delta
  double u_radius = 0;        // min(0.1, |q1 - q2| / 2)
  bool inside_u = false;
};

/// Damped Newton from q for a common zero of P_j(z1) - P_j(z2) + delta (e_j(z1) - e_j(z2)),
/// e_j(z) = 1 + z. When q is outside the basin of the perturbed zero (certificates
/// pressed against the boundary), the zero is tracked by continuation in delta.
PersistenceResult intersection_persistence(const DifferenceSurface& s1, const DifferenceSurface& s2,
                                           const QComplex& q1, const QComplex& q2, double delta, double det_abs);

/// Transversality and persistence evidence for a certificate, with the checks
/// Jacobian = -det (1e-9 relative), and for delta = 1e-3 and 1e-2 a located zero
/// with residual < 1e-10 inside U and off the diagonal, displacement ratio in [5, 20].
struct CertificateEvidence {
  QComplex jacobian;
  PersistenceResult persistence[2];
  std::vector<Check> checks;
  bool passed = false;
};
inline constexpr double kPersistenceDeltas[2] = {1e-3, 1e-2};

CertificateEvidence certificate_evidence(const Certificate& cert);

}  // namespace hahn
