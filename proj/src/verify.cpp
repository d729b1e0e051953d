#include "hahn/verify.hpp"

#include "hahn/counterexample.hpp"
#include "hahn/disc_aut.hpp"
#include "hahn/injectivize.hpp"
#include "hahn/metrics.hpp"
#include "hahn/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hahn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kPi = std::numbers::pi;

// Running extremes for a check measured over many trials.
struct Worst {
  double value = 0;
  void see(double v) { value = std::isnan(v) ? kInf : std::max(value, v); }
};
struct Least {
  double value = kInf;
  void see(double v) { value = std::isnan(v) ? -kInf : std::min(value, v); }
};

DiscAut random_aut(Sampler& rng) {
  return DiscAut::from_normal_form(std::polar(1.0, 2 * kPi * rng.uniform()), rng.disc_point(0.9));
}

double pointwise_gap(const DiscAut& f, const DiscAut& g, Sampler& rng, int points) {
  double gap = 0;
  for (int k = 0; k < points; ++k) {
    const Complex z = rng.disc_point(0.95);
    gap = std::max(gap, std::abs(f.apply(z) - g.apply(z)));
  }
  return gap;
}

HoloExpr random_expr(Sampler& rng) {
  using namespace expr;
  const Complex a = rng.box_point(1), b = rng.disc_point(0.8), c0 = rng.box_point(1);
  switch (static_cast<int>(rng.uniform() * 5)) {
    case 0:
      return c(a) * exp(c(b) * z()) + c(c0) * pow(z(), 3);
    case 1:
      return moebius(b, c(0.9) * z()) * (c(c0) + z());
    case 2:
      return cover_pdisc(moebius(0.5 * b, c(0.5) * z()));
    case 3:
      return cover_annulus(0.4, c(0.6) * z() + c(0.3 * b));
    default:
      return (c(1) + z()) / (c(2.5) - z()) + c(a) * pow(z(), 2);
  }
}

std::vector<PlanarDomain> catalog() {
  return {PlanarDomain::disc(),          PlanarDomain::plane(),        PlanarDomain::punctured_plane(),
          PlanarDomain::punctured_disc(), PlanarDomain::annulus(0.3), PlanarDomain::annulus(0.5)};
}

Complex random_member(const PlanarDomain& d, Sampler& rng) {
  for (;;) {
    const Complex w = rng.disc_point(1.0);
    if (d.contains(w) && d.boundary_distance(w) > 1e-2) return w;
  }
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"auts", "coverings", "metrics", "injectivize", "counterexample"};
  return names;
}

// ----------------------------------------------------------------- auts

SuiteResult verify_auts(std::uint64_t seed) {
  SuiteResult out{"auts", {}};
  Sampler rng(seed);

  {
    Sampler r = rng.split();
    Worst jet_gap;
    int checked = 0;
    while (checked < 200) {
      const HoloExpr f = random_expr(r);
      const Complex s = r.box_point(0.35);
      const double h = 1e-6 * std::max(1.0, std::abs(s));
      const Jet2 j = eval_jet(f, s, 1);
      const Complex fd = (f.value(s + h) - f.value(s - h)) / (2 * h);
      jet_gap.see(std::abs(fd - j.d1) / std::max(std::abs(j.d1), 1.0));
      ++checked;
    }
    out.checks.push_back(Check::below("expr: d1 vs central difference (relative, 200 pairs)", jet_gap.value, 1e-6));
  }
  {
    const HoloExpr f = parse("exp(z) + z^2"), g = parse("moebius(0.3i; 0.8*z)"), h = parse("0.5*z + 0.1*z^3");
    const HoloExpr left = compose(compose(f, g), h), right = compose(f, compose(g, h));
    Worst gap;
    for (const Complex& s : disc_samples(0.9, 50)) {
      const Jet2 a = eval_jet(left, s, 2), b = eval_jet(right, s, 2);
      gap.see(std::max({std::abs(a.value - b.value), std::abs(a.d1 - b.d1), std::abs(a.d2 - b.d2)}));
    }
    out.checks.push_back(Check::below("expr: composition associativity on jets", gap.value, 1e-12));
  }
  {
    const HoloExpr f = parse("exp(2*z) + (0.3+0.1i)*z^5 - z");
    int decreases = 0;
    double previous = 0;
    for (int samples : {1024, 2048, 4096, 8192}) {
      const double m = boundary_max_modulus(f, 1.0, samples);
      if (m < previous) ++decreases;
      previous = m;
    }
    out.checks.push_back(Check::below("expr: boundary max modulus decreases under doubling", decreases, 0.5));
  }

  {
    Sampler r = rng.split();
    Worst assoc, inverse, distance;
    for (int t = 0; t < 100; ++t) {
      const DiscAut f = random_aut(r), g = random_aut(r), h = random_aut(r);
      assoc.see(pointwise_gap(compose_auts(compose_auts(f, g), h), compose_auts(f, compose_auts(g, h)), r, 10));
      inverse.see(pointwise_gap(compose_auts(f, invert(f)), DiscAut::identity(), r, 10));
      inverse.see(pointwise_gap(compose_auts(DiscAut::identity(), f), f, r, 10));
      const Complex z = r.disc_point(0.95), w = r.disc_point(0.95);
      distance.see(std::abs(moebius_distance(f.apply(z), f.apply(w)) - moebius_distance(z, w)));
    }
    out.checks.push_back(Check::below("aut: associativity (100 triples)", assoc.value, 1e-12));
    out.checks.push_back(Check::below("aut: identity and inverse laws", inverse.value, 1e-12));
    out.checks.push_back(Check::below("aut: Moebius distance invariance", distance.value, 1e-12));
  }
  {
    Sampler r = rng.split();
    Worst involution;
    Least minus, plus;
    for (int t = 0; t < 100; ++t) {
      const DiscAut psi = moebius_h(Complex(r.uniform(-0.95, -0.2)));
      Complex a;
      do {
        a = r.disc_point(0.9);
      } while (std::abs(a.imag()) < 0.05);
      const DiscAut phi = phi_involution(a, psi);
      involution.see(pointwise_gap(compose_auts(phi, phi), DiscAut::identity(), r, 10));
      const Complex dphi = phi.derivative(a), dpsi = psi.derivative(a);
      minus.see(std::abs(dphi + dpsi) / std::abs(dpsi));
      plus.see(std::abs(dphi - dpsi) / std::abs(dpsi));
    }
    out.checks.push_back(Check::below("aut: phi_a involution (non-real a)", involution.value, 1e-10));
    out.checks.push_back(Check::above("aut: |phi_a'(a) + psi'(a)| / |psi'(a)|, non-real a", minus.value, 1e-3));
    out.checks.push_back(Check::above("aut: |phi_a'(a) - psi'(a)| / |psi'(a)|, non-real a", plus.value, 1e-3));

    Worst real_gap;
    for (double c : {-0.8, -0.5, -0.3}) {
      const DiscAut psi = moebius_h(Complex(c));
      for (int i = 0; i < 20; ++i) {
        const Complex a(-0.95 + 1.9 * i / 19.0, 0);
        const DiscAut phi = phi_involution(a, psi);
        real_gap.see(std::abs(phi.derivative(a) + psi.derivative(a)));
      }
    }
    out.checks.push_back(Check::below("aut: |phi_a'(a) + psi'(a)| on a real grid", real_gap.value, 1e-10));
  }
  return out;
}

// ------------------------------------------------------------ coverings

SuiteResult verify_coverings(std::uint64_t seed) {
  SuiteResult out{"coverings", {}};
  std::uint64_t stream = seed;
  for (const PlanarDomain& d : catalog()) {
    const std::string tag = d.descriptor() + ": ";
    const Covering cov = covering_of(d);
    const CoveringCheck cc = check_covering(cov, 1000, stream++);
    out.checks.push_back(Check::below(tag + "p o psi = p (1000 points)", cc.max_deck_residual, 1e-9));
    out.checks.push_back(Check::below(tag + "image containment failures", cc.containment_failures, 0.5));
    if (cov.non_injective()) {
      out.checks.push_back(Check::above(tag + "min |psi(z) - z| on the grid", cc.min_deck_displacement, 1e-3));
    }
    if (cov.cover == CoverSpace::Disc && cov.non_injective()) {
      out.checks.push_back(Check::above(tag + "sup displacement probe", sup_displacement_probe(cov, 1e-12), 1 - 1e-6));
    }
  }

  // two lifts with the same base, different step counts, compared at shared nodes
  const std::pair<PlanarDomain, const char*> lifts[] = {
      {PlanarDomain::punctured_disc(), "0.3 + 0.5*z"},
      {PlanarDomain::annulus(0.3), "moebius(0.2; 0.6*z)"},
      {PlanarDomain::annulus(0.5), "0.1i + 0.4*z - 0.2*z^2"},
      {PlanarDomain::punctured_plane(), "1 + 2*z + z^3"},
  };
  for (const auto& [d, lift_text] : lifts) {
    const Covering cov = covering_of(d);
    const HoloExpr g = parse(lift_text);
    const HoloExpr f = compose(cov.map_p, g);
    const Complex base = g.value(Complex(0));
    const LiftGrid coarse = lift_disc(f, cov, base, {16, 0.9, 512});
    const LiftGrid fine = lift_disc(f, cov, base, {16, 0.9, 1024});
    Worst gap;
    for (int ray = 0; ray < coarse.rays; ++ray) {
      for (int k = 0; k <= coarse.steps; ++k) gap.see(std::abs(coarse.value(ray, k) - fine.value(ray, 2 * k)));
    }
    out.checks.push_back(Check::below(d.descriptor() + ": lifting uniqueness", gap.value, 1e-8));
  }
  return out;
}

// -------------------------------------------------------------- metrics

SuiteResult verify_metrics(std::uint64_t seed) {
  SuiteResult out{"metrics", {}};
  Sampler rng(seed);
  const PlanarDomain E = PlanarDomain::disc();

  {
    Worst gap;
    for (int t = 0; t < 100; ++t) {
      const Complex z = rng.disc_point(0.99);
      gap.see(std::abs(kappa(E, z, 1.0) * (1 - std::norm(z)) - 1));
    }
    out.checks.push_back(Check::below("kappa_E(z;1) (1 - |z|^2) = 1 (100 points)", gap.value, 1e-10));
  }
  {
    Worst homogeneity, fibre, density;
    for (const char* text : {"disc", "pdisc", "annulus:0.3", "annulus:0.5"}) {
      const PlanarDomain d = PlanarDomain::parse(text);
      for (int t = 0; t < 50; ++t) {
        const Complex z = random_member(d, rng);
        const Complex x = rng.disc_point(3.0), lambda = rng.box_point(4.0);
        const double k = kappa(d, z, x);
        homogeneity.see(std::abs(kappa(d, z, lambda * x) - std::abs(lambda) * k) / std::max(1.0, std::abs(lambda) * k));
        if (!d.simply_connected()) {
          for (int sheet : {-1, 1}) fibre.see(std::abs(kappa_at_sheet(d, z, x, sheet) - k) / std::max(1.0, k));
        }
        // closed-form densities, independent of the covering machinery
        const double rho = std::abs(z);
        double closed = 0;
        if (d.kind() == DomainKind::PuncturedDisc) {
          closed = 1 / (2 * rho * std::log(1 / rho));
        } else if (d.kind() == DomainKind::Annulus) {
          const double r = d.inner_radius();
          closed = kPi / (2 * rho * std::log(1 / r)) / std::sin(kPi * std::log(rho) / std::log(r));
        } else {
          closed = 1 / (1 - rho * rho);
        }
        density.see(std::abs(kappa(d, z, 1.0) - closed) / closed);
      }
    }
    out.checks.push_back(Check::below("homogeneity in X (relative)", homogeneity.value, 1e-12));
    out.checks.push_back(Check::below("fibre independence (relative)", fibre.value, 1e-9));
    out.checks.push_back(Check::below("closed-form densities (relative)", density.value, 1e-9));
  }
  {
    Worst gap;
    for (int t = 0; t < 100; ++t) {
      const Complex a1 = rng.disc_point(0.99), a2 = rng.disc_point(0.99);
      const Complex x1 = rng.box_point(2), x2 = rng.box_point(2);
      const double direct = std::max(std::abs(x1) / (1 - std::norm(a1)), std::abs(x2) / (1 - std::norm(a2)));
      gap.see(std::abs(kappa_product(E, E, a1, a2, x1, x2) - direct) / direct);
    }
    out.checks.push_back(Check::below("product max formula vs Schwarz-Pick on the bidisc", gap.value, 1e-12));
  }
  {
    int order_violations = 0, exact_mismatches = 0;
    for (const PlanarDomain& d : catalog()) {
      for (int t = 0; t < 20; ++t) {
        const Complex z = random_member(d, rng);
        const HahnBounds b = hahn_bounds(d, z, rng.disc_point(2.0));
        if (!(b.lower <= b.upper)) ++order_violations;
        if (b.exact != d.simply_connected()) ++exact_mismatches;
      }
    }
    out.checks.push_back(Check::below("hahn bounds: lower > upper", order_violations, 0.5));
    out.checks.push_back(Check::below("hahn bounds: exact flag differs from simple connectivity", exact_mismatches, 0.5));
  }
  {
    const char* models[] = {"disc", "plane", "cstar", "pdisc", "annulus:0.3"};
    const auto expected = [](const PlanarDomain& a, const PlanarDomain& b) {
      const auto sc = [](const PlanarDomain& d) {
        return d.kind() == DomainKind::Disc || d.kind() == DomainKind::Plane;
      };
      if (sc(a) || sc(b)) return EqualityCase::SimplyConnectedFactor;
      if (a.kind() == DomainKind::PuncturedPlane || b.kind() == DomainKind::PuncturedPlane) {
        return EqualityCase::CstarFactor;
      }
      return EqualityCase::NotEqual;
    };
    int mismatches = 0;
    for (const char* t1 : models) {
      for (const char* t2 : models) {
        const PlanarDomain d1 = PlanarDomain::parse(t1), d2 = PlanarDomain::parse(t2);
        if (classify_product(d1, d2).which != expected(d1, d2)) ++mismatches;
      }
    }
    out.checks.push_back(Check::below("classification table mismatches (25 pairs)", mismatches, 0.5));
  }
  return out;
}

// ---------------------------------------------------------- injectivize

SuiteResult verify_injectivize(std::uint64_t seed, int discs_per_case) {
  SuiteResult out{"injectivize", {}};
  Sampler rng(seed);
  const Branch branches[] = {Branch::Prop2Case1, Branch::Prop2Case2, Branch::Prop3General, Branch::Prop3Unit,
                             Branch::Prop3Swapped};
  for (Branch branch : branches) {
    const std::string tag = std::string(to_string(branch)) + ": ";
    const bool prop3 = branch != Branch::Prop2Case1 && branch != Branch::Prop2Case2;
    const bool ball = branch == Branch::Prop2Case2 || branch == Branch::Prop3Swapped;
    int routing = 0, failures = 0, collisions = 0;
    Worst value, derivative, containment;
    Least modulus;
    for (double theta : {0.3, 0.6, 0.9}) {
      Sampler r = rng.split();
      for (int i = 0; i < discs_per_case; ++i) {
        const DiscPair f = random_disc_pair(branch, theta, r);
        InjectivityOptions options;
        options.seed = seed + static_cast<std::uint64_t>(i);
        const InjectivizationResult res = injectivize(f, theta, options);
        if (res.branch != branch) ++routing;
        if (!res.passed) ++failures;
        collisions += res.injectivity.collisions;
        value.see(res.value_residual);
        derivative.see(res.derivative_residual);
        if (ball) containment.see(res.containment_ratio);
        if (prop3) modulus.see(res.injectivity.min_modulus);
      }
    }
    out.checks.push_back(Check::below(tag + "routed to another branch", routing, 0.5));
    out.checks.push_back(Check::below(tag + "|g(0) - f(0)|", value.value, kJetTolerance));
    out.checks.push_back(Check::below(tag + "|g'(0) - theta f'(0)|", derivative.value, kJetTolerance));
    out.checks.push_back(Check::below(tag + "collisions (10^4 pairs per disc)", collisions, 0.5));
    out.checks.push_back(Check::below(tag + "failed constructions", failures, 0.5));
    if (ball) {
      out.checks.push_back(Check::below(tag + "max |g - f(0)| / d on the ball factor", containment.value, 1));
    }
    if (prop3) {
      out.checks.push_back(Check::above(tag + "min sampled modulus of the C* factor", modulus.value, 0));
    }
  }
  return out;
}

// ------------------------------------------------------- counterexample

SuiteResult verify_counterexample(std::uint64_t seed) {
  SuiteResult out{"counterexample", {}};
  const std::pair<const char*, const char*> pairs[] = {{"pdisc", "pdisc"},
                                                       {"annulus:0.3", "pdisc"},
                                                       {"pdisc", "annulus:0.3"},
                                                       {"annulus:0.3", "annulus:0.5"},
                                                       {"annulus:0.3", "annulus:0.3"}};
  for (const auto& [t1, t2] : pairs) {
    const std::string tag = std::string(t1) + " x " + t2 + ": ";
    const Certificate cert = certify(PlanarDomain::parse(t1), PlanarDomain::parse(t2));
    for (const Check& c : cert.checks) out.checks.push_back({tag + c.name, c.value, c.bound, c.rel});
    for (const Check& c : certificate_evidence(cert).checks) out.checks.push_back({tag + c.name, c.value, c.bound, c.rel});
  }

  // the dichotomy on psi = h_c, c = -0.8 (the level 0.8, i.e. d = 0.5)
  const QDiscAut psi = moebius_h(QComplex(-0.8));
  Worst real_gap;
  for (int i = 0; i < 20; ++i) {
    const QComplex a(-0.95 + 1.9 * i / 19.0);
    real_gap.see(to_double(QReal(abs(phi_involution(a, psi).derivative(a) + psi.derivative(a)))));
  }
  out.checks.push_back(Check::below("real a: |phi_a'(a) + psi'(a)| (20 values)", real_gap.value, 1e-10));
  Sampler rng(seed);
  Least minus, plus;
  for (int i = 0; i < 20; ++i) {
    Complex a;
    do {
      a = rng.disc_point(0.9);
    } while (std::abs(a.imag()) < 0.05);
    const QComplex qa = lift<QComplex>(a);
    const QComplex dphi = phi_involution(qa, psi).derivative(qa), dpsi = psi.derivative(qa);
    minus.see(to_double(QReal(abs(dphi + dpsi))));
    plus.see(to_double(QReal(abs(dphi - dpsi))));
  }
  out.checks.push_back(Check::above("non-real a: |phi_a'(a) + psi'(a)| (20 values)", minus.value, kMarginFloor));
  out.checks.push_back(Check::above("non-real a: |phi_a'(a) - psi'(a)| (20 values)", plus.value, kMarginFloor));
  return out;
}

std::vector<SuiteResult> run_verify(std::string_view suite, std::uint64_t seed) {
  std::vector<SuiteResult> out;
  const auto run = [&](const std::string& name) {
    if (name == "auts") out.push_back(verify_auts(seed));
    if (name == "coverings") out.push_back(verify_coverings(seed));
    if (name == "metrics") out.push_back(verify_metrics(seed));
    if (name == "injectivize") out.push_back(verify_injectivize(seed));
    if (name == "counterexample") out.push_back(verify_counterexample(seed));
  };
  if (suite == "all") {
    for (const std::string& name : suite_names()) run(name);
    return out;
  }
  if (std::find(suite_names().begin(), suite_names().end(), suite) == suite_names().end()) {
    fail(ErrorKind::Input, "unknown suite '" + std::string(suite) +
                               "' (expected auts, coverings, metrics, injectivize, counterexample or all)");
  }
  run(std::string(suite));
  return out;
}

}  // namespace hahn
