#include "hahn/counterexample.hpp"

#include "hahn/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace hahn {

namespace {

using boost::multiprecision::abs;
using boost::multiprecision::sqrt;
using boost::multiprecision::tanh;

constexpr double kScanStep = 0.05;
constexpr double kScanEnd = 70.0;  // tanh(35) is within 1e-30 of 1
constexpr int kBisections = 200;

double qd(const QReal& x) { return to_double(x); }
double qabs(const QComplex& z) { return to_double(QReal(abs(z))); }

const QDiscAut& deck_of(const Covering& cov) {
  if (cov.cover != CoverSpace::Disc || !cov.deck.is_automorphism()) {
    fail(ErrorKind::TheoremCase, cov.domain.descriptor() +
                                     " is simply connected or a punctured plane; the metrics agree on such products");
  }
  return cov.deck.aut();
}

// First point on the ray towards dir with m(z, psi(z)) >= level.
QComplex reach_level(const QDiscAut& psi, const QComplex& dir, const QReal& level) {
  if (displacement(psi, QComplex(0)) >= level) return QComplex(0);
  QReal lo = 0, hi = -1;
  for (double s = kScanStep; s <= kScanEnd + 1e-9; s += kScanStep) {
    if (displacement(psi, dir * tanh(QReal(s) / 2)) >= level) {
      hi = s;
      break;
    }
    lo = s;
  }
  if (hi < 0) fail(ErrorKind::Numeric, "displacement search did not reach the shared level");
  for (int it = 0; it < kBisections && hi - lo > QReal(1e-32); ++it) {
    const QReal mid = (lo + hi) / 2;
    if (displacement(psi, dir * tanh(mid / 2)) >= level) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return dir * tanh(hi / 2);
}

QComplex derivative_of_p(const Covering& cov, const QDiscAut& phi, const QComplex& z) {
  return cov.map_p.jet(phi.apply(z)).d1 * phi.derivative(z);
}

double aut_gap(const QDiscAut& f, const QDiscAut& g) {
  return std::max(qabs(f.phase() - g.phase()), qabs(f.center() - g.center()));
}

double relative(const QComplex& x, const QComplex& y) {
  const double scale = std::max(qabs(x), qabs(y));
  return scale == 0 ? 0 : qabs(x - y) / scale;
}

QComplex det2(const QComplex& a, const QComplex& b, const QComplex& c, const QComplex& d) { return a * d - b * c; }

void add_common_checks(Certificate& cert) {
  for (int j = 1; j <= 2; ++j) {
    const QComplex gap = cert.jet(j, cert.q1).value - cert.jet(j, cert.q2).value;
    cert.checks.push_back(Check::below("covering equality P" + std::to_string(j) + "(q1) = P" + std::to_string(j) + "(q2)",
                                       qabs(gap), kCoveringTolerance));
  }
  cert.checks.push_back(Check::above("|q1 - q2|", qabs(cert.q1 - cert.q2), 0));
  cert.checks.push_back(Check::above("|det|", qabs(cert.det_direct), kDeterminantFloor));
  cert.checks.push_back(
      Check::below("determinant: direct vs simplified (relative)", relative(cert.det_direct, cert.det_simplified), 1e-9));
}

}  // namespace

// --------------------------------------------------------------- search

EqualDisplacement find_equal_displacement(const Covering& c1, const Covering& c2) {
  const QDiscAut& psi1 = deck_of(c1);
  const QDiscAut& psi2 = deck_of(c2);
  EqualDisplacement out;
  out.level = std::max({displacement(psi1, QComplex(0)), displacement(psi2, QComplex(0)), QReal(0.9)});
  out.direction1 = probe_target(psi1);
  out.direction2 = probe_target(psi2);
  out.z1 = reach_level(psi1, out.direction1, out.level);
  out.z2 = reach_level(psi2, out.direction2, out.level);
  out.level_residual = std::max(qd(abs(displacement(psi1, out.z1) - out.level)),
                                qd(abs(displacement(psi2, out.z2) - out.level)));
  return out;
}

const char* to_string(CertificateBranch b) { return b == CertificateBranch::Direct ? "direct" : "reduced"; }

// ------------------------------------------------------------ normalize

NormalizedPair normalize(const Covering& c1, const Covering& c2, const EqualDisplacement& eq) {
  NormalizedPair n;
  n.cov1 = c1;
  n.cov2 = c2;
  n.eq = eq;
  const QReal& level = eq.level;
  // root of 2d / (1 + d^2) = level in (0, 1)
  n.d = level / (1 + sqrt((1 - level) * (1 + level)));
  n.c = -2 * n.d / (1 + n.d * n.d);
  const QComplex md(-n.d), pd(n.d);

  const auto side = [&](const Covering& cov, const QComplex& z, QDiscAut& h, QDiscAut& psi_t, QComplex& s,
                        QComplex& a, QComplex& b) {
    const QDiscAut& psi = deck_of(cov);
    h = two_point_interpolant(md, z, pd, psi.apply(z));
    psi_t = compose_auts(invert(h), compose_auts(psi, h));
    s = psi_t.derivative(md);
    a = derivative_of_p(cov, h, md);
    b = derivative_of_p(cov, h, pd);
  };
  side(c1, eq.z1, n.h1, n.psi1, n.s1, n.a1, n.b1);
  side(c2, eq.z2, n.h2, n.psi2, n.s2, n.a2, n.b2);

  const auto nonunit = [](const QComplex& a, const QComplex& b) {
    const double scale = std::max(qabs(a), qabs(b));
    return qabs(a - b) > kBranchTolerance * scale && qabs(a + b) > kBranchTolerance * scale;
  };
  if (nonunit(n.a1, n.b1)) {
    n.nonunit_component = 1;
  } else if (nonunit(n.a2, n.b2)) {
    n.nonunit_component = 2;
  }
  n.branch = n.nonunit_component ? CertificateBranch::Direct : CertificateBranch::Reduced;
  return n;
}

std::vector<Complex> default_a_sweep() { return {{0, 0.5}, {0, 0.3}, {0, 0.7}, {0.2, 0.4}, {-0.4, 0.3}}; }

DichotomyMargins dichotomy_margins(const QDiscAut& psi, const QComplex& a) {
  const QDiscAut phi = phi_involution(a, psi);
  const QComplex dphi = phi.derivative(a), dpsi = psi.derivative(a);
  const double scale = qabs(dpsi);
  return {qabs(dphi + dpsi) / scale, qabs(dphi - dpsi) / scale};
}

QJet Certificate::jet(int j, const QComplex& z) const {
  const Covering& cov = j == 1 ? cov1 : cov2;
  const QDiscAut& phi = j == 1 ? phi1 : phi2;
  const QJet pj = cov.map_p.jet(phi.apply(z));
  return {pj.value, pj.d1 * phi.derivative(z), QComplex(0)};
}

// ---------------------------------------------------------- certificates

namespace {

Certificate direct_certificate(const NormalizedPair& n) {
  Certificate cert;
  cert.cov1 = n.cov1;
  cert.cov2 = n.cov2;
  cert.branch = CertificateBranch::Direct;
  cert.level = n.eq.level;
  cert.d = n.d;
  cert.c = n.c;
  cert.z1 = n.eq.z1;
  cert.z2 = n.eq.z2;
  cert.s1 = n.s1;
  cert.s2 = n.s2;
  cert.q1 = QComplex(-n.d);
  cert.q2 = QComplex(n.d);

  // With A_j = s_j B_j (chain rule through p o psi = p):
  //   plain               det = B1 B2 (s1 - s2)
  //   -id on component 1  det = B1 B2 (s1 s2 - 1)
  //   -id on component 2  det = B1 B2 (1 - s1 s2)
  const QComplex bb = n.b1 * n.b2;
  const QComplex plain = bb * (n.s1 - n.s2);
  const QComplex flipped = n.nonunit_component == 1 ? bb * (n.s1 * n.s2 - QComplex(1)) : bb * (QComplex(1) - n.s1 * n.s2);
  const QDiscAut minus_id = QDiscAut::rotation(QComplex(-1));
  cert.phi1 = n.h1;
  cert.phi2 = n.h2;
  if (qabs(flipped) > kDeterminantFloor) {
    cert.determinant_variant = 2;
    cert.minus_id_component = n.nonunit_component;
    (n.nonunit_component == 1 ? cert.phi1 : cert.phi2) =
        compose_auts(n.nonunit_component == 1 ? n.h1 : n.h2, minus_id);
    cert.det_simplified = flipped;
  } else {
    cert.determinant_variant = 1;
    cert.det_simplified = plain;
  }
  cert.det_direct = det2(cert.jet(1, cert.q1).d1, cert.jet(1, cert.q2).d1, cert.jet(2, cert.q1).d1,
                         cert.jet(2, cert.q2).d1);

  // the automorphism attached to the determinant is an involution swapping -d and d
  const QDiscAut& h = cert.minus_id_component == 2 ? n.h2 : n.h1;
  const QDiscAut sigma = cert.determinant_variant == 2 ? compose_auts(h, compose_auts(minus_id, invert(h))) : minus_id;
  cert.checks.push_back(Check::below("involution residual", aut_gap(compose_auts(sigma, sigma), QDiscAut()),
                                     kInvolutionTolerance));
  add_common_checks(cert);
  cert.passed = all_pass(cert.checks);
  return cert;
}

Certificate reduced_certificate(const NormalizedPair& n, const QComplex& a) {
  Certificate cert;
  cert.cov1 = n.cov1;
  cert.cov2 = n.cov2;
  cert.branch = CertificateBranch::Reduced;
  cert.level = n.eq.level;
  cert.d = n.d;
  cert.c = n.c;
  cert.z1 = n.eq.z1;
  cert.z2 = n.eq.z2;
  cert.s1 = n.s1;
  cert.s2 = n.s2;
  cert.a = a;

  const QDiscAut& psi = n.psi1;  // both conjugated decks equal h_c
  const QDiscAut hc = moebius_h(QComplex(n.c));
  const QComplex md(-n.d), pd(n.d);
  double deck_gap = 0, image_gap = 0, square_gap = 0;
  for (const QDiscAut* p : {&n.psi1, &n.psi2}) {
    deck_gap = std::max(deck_gap, aut_gap(*p, hc));
    image_gap = std::max(image_gap, qabs(p->apply(md) - pd));
    const QComplex s = p->derivative(md);
    square_gap = std::max(square_gap, qabs(s * s - QComplex(1)));
  }
  cert.checks.push_back(Check::below("conjugated decks equal h_c", deck_gap, 1e-9));
  cert.checks.push_back(Check::below("conjugated deck maps -d to d", image_gap, 1e-10));
  cert.checks.push_back(Check::below("(psi~'(-d))^2 = 1", square_gap, 1e-9));

  const QDiscAut phi = phi_involution(a, psi);
  cert.q1 = a;
  cert.q2 = psi.apply(a);
  cert.phi1 = n.h1;
  cert.phi2 = compose_auts(n.h2, phi);

  const QComplex dphi = phi.derivative(a), dpsi = psi.derivative(a);
  const auto margins = dichotomy_margins(psi, a);
  cert.margin_minus = margins.minus;
  cert.margin_plus = margins.plus;
  const QComplex p1 = derivative_of_p(n.cov1, n.h1, cert.q2);
  const QComplex p2 = derivative_of_p(n.cov2, n.h2, cert.q2);
  cert.det_simplified = p1 * p2 * (dpsi * dpsi / dphi - dphi);
  cert.det_direct = det2(cert.jet(1, cert.q1).d1, cert.jet(1, cert.q2).d1, cert.jet(2, cert.q1).d1,
                         cert.jet(2, cert.q2).d1);

  cert.checks.push_back(Check::below("involution residual", aut_gap(compose_auts(phi, phi), QDiscAut()),
                                     kInvolutionTolerance));
  cert.checks.push_back(Check::below("phi'(a) phi'(psi(a)) = 1", qabs(dphi * phi.derivative(cert.q2) - QComplex(1)),
                                     kInvolutionTolerance));
  cert.checks.push_back(Check::above("margin |phi'(a) + psi'(a)| / |psi'(a)|", margins.minus, kMarginFloor));
  cert.checks.push_back(Check::above("margin |phi'(a) - psi'(a)| / |psi'(a)|", margins.plus, kMarginFloor));
  add_common_checks(cert);
  cert.passed = all_pass(cert.checks);
  return cert;
}

}  // namespace

Certificate build_certificate(const NormalizedPair& pair, std::optional<Complex> a) {
  if (pair.branch == CertificateBranch::Direct) return direct_certificate(pair);
  if (a) {
    if (a->imag() == 0) {
      fail(ErrorKind::Degenerate, "a must be non-real: for real a, phi_a'(a) = -psi'(a) and the determinant vanishes");
    }
    if (!(std::abs(*a) < 1)) fail(ErrorKind::Input, "a must lie in the unit disc");
    return reduced_certificate(pair, lift<QComplex>(*a));
  }
  Certificate last;
  for (const Complex& candidate : default_a_sweep()) {
    last = reduced_certificate(pair, lift<QComplex>(candidate));
    if (last.passed) return last;
  }
  return last;
}

Certificate certify(const PlanarDomain& d1, const PlanarDomain& d2, std::optional<Complex> a) {
  const Covering c1 = covering_of(d1), c2 = covering_of(d2);
  deck_of(c1);
  deck_of(c2);
  const EqualDisplacement eq = find_equal_displacement(c1, c2);
  Certificate cert = build_certificate(normalize(c1, c2, eq), a);
  cert.checks.insert(cert.checks.begin(), Check::below("equal displacement level residual", eq.level_residual, 1e-10));
  cert.passed = all_pass(cert.checks);
  return cert;
}

// ------------------------------------------------------- transversality

QJet DifferenceSurface::p_jet(const QComplex& z) const {
  const QJet pj = cov.map_p.jet(phi.apply(z));
  return {pj.value, pj.d1 * phi.derivative(z), QComplex(0)};
}

QComplex DifferenceSurface::operator()(const QComplex& z1, const QComplex& z2) const {
  return cov.map_p.value(phi.apply(z1)) - cov.map_p.value(phi.apply(z2));
}

DifferenceSurface surface(const Certificate& cert, int j) {
  return j == 1 ? DifferenceSurface{cert.cov1, cert.phi1} : DifferenceSurface{cert.cov2, cert.phi2};
}

QComplex transversality_check(const DifferenceSurface& s1, const DifferenceSurface& s2, const QComplex& q1,
                              const QComplex& q2) {
  const QReal room = 1 - std::max(QReal(abs(q1)), QReal(abs(q2)));
  const QComplex h(room * QReal(1e-7), 0);
  const auto partial = [&](const DifferenceSurface& s, int k) {
    if (k == 1) return (s(q1 + h, q2) - s(q1 - h, q2)) / (QComplex(2) * h);
    return (s(q1, q2 + h) - s(q1, q2 - h)) / (QComplex(2) * h);
  };
  return det2(partial(s1, 1), partial(s1, 2), partial(s2, 1), partial(s2, 2));
}

namespace {

struct NewtonOutcome {
  QComplex z1, z2;
  double residual = 0;
  int iterations = 0;
  bool converged = false;
};

// Damped Newton for F_j(z1, z2) = P_j(z1) - P_j(z2) + delta (z1 - z2); iterates stay in E^2.
NewtonOutcome perturbed_newton(const DifferenceSurface& s1, const DifferenceSurface& s2, QComplex z1, QComplex z2,
                               double delta, double tolerance, int max_iterations, std::vector<double>* trace) {
  const QComplex dl(delta);
  QComplex f1, f2;
  const auto residual_at = [&](const QComplex& w1, const QComplex& w2) {
    f1 = s1(w1, w2) + dl * (w1 - w2);
    f2 = s2(w1, w2) + dl * (w1 - w2);
    return std::max(qabs(f1), qabs(f2));
  };
  NewtonOutcome out;
  double res = residual_at(z1, z2);
  while (res >= tolerance && out.iterations < max_iterations) {
    const QComplex a1 = s1.p_jet(z1).d1 + dl, b1 = -s1.p_jet(z2).d1 - dl;
    const QComplex a2 = s2.p_jet(z1).d1 + dl, b2 = -s2.p_jet(z2).d1 - dl;
    const QComplex det = a1 * b2 - b1 * a2;
    if (qabs(det) == 0) break;
    const QComplex step1 = (f1 * b2 - b1 * f2) / det;
    const QComplex step2 = (a1 * f2 - f1 * a2) / det;
    ++out.iterations;
    bool accepted = false;
    QReal t = 1;
    for (int halving = 0; halving < 60 && !accepted; ++halving, t /= 2) {
      const QComplex w1 = z1 - QComplex(t) * step1, w2 = z2 - QComplex(t) * step2;
      if (!(abs(w1) < 1) || !(abs(w2) < 1)) continue;
      const double trial = residual_at(w1, w2);
      if (trial < res) {
        z1 = w1;
        z2 = w2;
        res = trial;
        accepted = true;
      }
    }
    if (trace) trace->push_back(res);
    if (!accepted) break;
  }
  out.z1 = z1;
  out.z2 = z2;
  out.residual = res;
  out.converged = res < tolerance;
  return out;
}

constexpr double kPersistenceTolerance = 1e-10;
constexpr int kMaxIterations = 50;
constexpr int kMaxStages = 4096;

}  // namespace

PersistenceResult intersection_persistence(const DifferenceSurface& s1, const DifferenceSurface& s2,
                                           const QComplex& q1, const QComplex& q2, double delta, double det_abs) {
  if (!(delta >= 0 && delta <= 1e-2)) fail(ErrorKind::Input, "perturbation size must lie in [0, 1e-2]");
  PersistenceResult r;
  r.delta = delta;
  r.u_radius = std::min(0.1, qabs(q1 - q2) / 2);

  NewtonOutcome direct = perturbed_newton(s1, s2, q1, q2, delta, kPersistenceTolerance, kMaxIterations, &r.trace);
  r.iterations = direct.iterations;
  NewtonOutcome found = direct;

  if (!direct.converged) {
    // q lies outside the Newton basin of the perturbed zero: follow the zero
    // from delta' = 0 (where it is q) to delta' = delta, halving the step on failure.
    QComplex z1 = q1, z2 = q2;
    double reached = 0, step = delta / 64;
    found.converged = false;
    while (r.continuation_stages < kMaxStages) {
      const double next = std::min(delta, reached + step);
      const NewtonOutcome stage = perturbed_newton(s1, s2, z1, z2, next, 1e-12, 8, nullptr);
      ++r.continuation_stages;
      r.iterations += stage.iterations;
      if (stage.converged) {
        z1 = stage.z1;
        z2 = stage.z2;
        reached = next;
        r.trace.push_back(stage.residual);
        if (reached == delta) {
          found = stage;
          break;
        }
        if (stage.iterations <= 3) step *= 2;
      } else {
        step /= 2;
        if (step < delta * 1e-9) break;
      }
    }
  }

  r.z1 = found.z1;
  r.z2 = found.z2;
  r.residual = found.residual;
  r.converged = found.converged && found.residual < kPersistenceTolerance && abs(found.z1) < 1 && abs(found.z2) < 1;
  r.displacement = std::max(qabs(r.z1 - q1), qabs(r.z2 - q2));
  r.constant_c = delta > 0 ? r.displacement * det_abs / delta : 0;
  r.inside_u = r.displacement < r.u_radius && qabs(r.z1 - r.z2) > 0;
  return r;
}

CertificateEvidence certificate_evidence(const Certificate& cert) {
  CertificateEvidence ev;
  const DifferenceSurface s1 = surface(cert, 1), s2 = surface(cert, 2);
  ev.jacobian = transversality_check(s1, s2, cert.q1, cert.q2);
  ev.checks.push_back(Check::below("Jacobian = -det (relative)", relative(ev.jacobian, -cert.det_direct), 1e-9));
  const double det = qabs(cert.det_direct);
  for (int i = 0; i < 2; ++i) {
    const PersistenceResult& p = ev.persistence[i] =
        intersection_persistence(s1, s2, cert.q1, cert.q2, kPersistenceDeltas[i], det);
    const std::string tag = i == 0 ? "delta 1e-3: " : "delta 1e-2: ";
    ev.checks.push_back(Check::below(tag + "perturbed residual", p.converged ? p.residual : HUGE_VAL, 1e-10));
    ev.checks.push_back(Check::below(tag + "displacement / radius of U", p.displacement / p.u_radius, 1));
    ev.checks.push_back(Check::above(tag + "|z1 - z2|", qabs(p.z1 - p.z2), 0));
  }
  // first-order scaling: ratio 10 within a factor 2
  const double ratio = ev.persistence[1].displacement / ev.persistence[0].displacement;
  ev.checks.push_back(Check::above("displacement ratio (delta 1e-2 over 1e-3), lower", ratio, 5));
  ev.checks.push_back(Check::below("displacement ratio (delta 1e-2 over 1e-3), upper", ratio, 20));
  ev.passed = all_pass(ev.checks);
  return ev;
}

}  // namespace hahn
