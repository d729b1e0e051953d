#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "hahn/metrics.hpp"
#include "hahn/sampling.hpp"

#include <cmath>

using namespace hahn;

namespace {

const double kPi = std::numbers::pi;

// Closed-form densities of the punctured disc and the annulus (Kobayashi
// normalisation, i.e. 1/(1-|z|^2) on E). Independent of the covering code.
double pdisc_density(Complex z) { return 1 / (2 * std::abs(z) * std::log(1 / std::abs(z))); }

double annulus_density(double r, Complex z) {
  const double rho = std::abs(z), L = std::log(1 / r);
  return kPi / (2 * rho * L) / std::sin(kPi * std::log(rho) / std::log(r));
}

Complex random_member(const PlanarDomain& d, Sampler& rng) {
  for (;;) {
    const Complex w = rng.disc_point(1.0);
    if (d.contains(w) && d.boundary_distance(w) > 1e-2) return w;
  }
}

}  // namespace

TEST_CASE("kappa examples") {
  CHECK(kappa(PlanarDomain::disc(), 0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(kappa(PlanarDomain::plane(), {3, 1}, 7.0) == 0);
  CHECK(kappa(PlanarDomain::punctured_plane(), {3, 1}, 7.0) == 0);
  CHECK(kappa(PlanarDomain::disc(), 0.5, 1.0) == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  CHECK_THROWS_AS(kappa(PlanarDomain::disc(), 1.5, 1.0), Error);
  CHECK_THROWS_AS(kappa(PlanarDomain::punctured_disc(), 0.0, 1.0), Error);
}

TEST_CASE("Disc kappa against brute force over Moebius competitors") {
  // discs zeta -> h_{-z}(rho e^{it} zeta) pass through z; the smallest |alpha| with
  // alpha * f'(0) = X over the family is the Schwarz-Pick value
  const Complex z(0.5);
  double best = 1e300;
  for (int i = 1; i <= 200; ++i) {
    const double rho = i / 200.0;
    const DiscAut f = invert(moebius_h(z));
    best = std::min(best, 1.0 / std::abs(rho * f.derivative(0.0)));
  }
  CHECK(kappa(PlanarDomain::disc(), z, 1.0) == doctest::Approx(best).epsilon(1e-12));
}

TEST_CASE("kappa matches closed-form densities") {
  Sampler rng(8);
  for (int t = 0; t < 100; ++t) {
    const Complex z = random_member(PlanarDomain::punctured_disc(), rng);
    CHECK(kappa(PlanarDomain::punctured_disc(), z, 1.0) == doctest::Approx(pdisc_density(z)).epsilon(1e-12));
  }
  for (double r : {0.3, 0.5}) {
    const auto d = PlanarDomain::annulus(r);
    for (int t = 0; t < 100; ++t) {
      const Complex z = random_member(d, rng);
      CHECK(kappa(d, z, 1.0) == doctest::Approx(annulus_density(r, z)).epsilon(1e-12));
    }
  }
  // affine images scale by 1/|alpha|
  const auto big = PlanarDomain::punctured_disc().affine_image({0, 2}, 1.0);
  const Complex z(0.3, -0.2);
  CHECK(kappa(big, 1.0 + Complex(0, 2) * z, 1.0) == doctest::Approx(pdisc_density(z) / 2).epsilon(1e-12));
}

TEST_CASE("property: homogeneity and fibre independence") {
  Sampler rng(9);
  for (const char* text : {"disc", "pdisc", "annulus:0.5", "annulus:0.3"}) {
    const auto d = PlanarDomain::parse(text);
    for (int t = 0; t < 50; ++t) {
      const Complex z = random_member(d, rng);
      const Complex x = rng.disc_point(3.0);
      const Complex lambda = rng.box_point(4.0);
      const double k = kappa(d, z, x);
      CHECK(std::abs(kappa(d, z, lambda * x) - std::abs(lambda) * k) <= 1e-12 * std::max(1.0, std::abs(lambda) * k));
      if (!d.simply_connected()) {
        for (int sheet : {-1, 1}) {
          CHECK(std::abs(kappa_at_sheet(d, z, x, sheet) - k) <= 1e-9 * std::max(1.0, k));
        }
      }
    }
  }
}

TEST_CASE("kappa_product") {
  const auto E = PlanarDomain::disc();
  CHECK(kappa_product(E, E, 0.0, 0.0, 1.0, 2.0) == doctest::Approx(2.0));
  CHECK(kappa_product(PlanarDomain::punctured_plane(), E, 1.0, 0.0, 5.0, 1.0) == doctest::Approx(1.0));
  CHECK(kappa_product(PlanarDomain::annulus(0.3), PlanarDomain::punctured_disc(), 0.5, 0.5, 0.0, 0.0) == 0);
  CHECK_THROWS_AS(kappa_product(E, E, 0.0, 2.0, 1.0, 1.0), Error);

  // Schwarz-Pick on the bidisc: max_j |X_j| / (1 - |a_j|^2)
  Sampler rng(10);
  for (int t = 0; t < 100; ++t) {
    const Complex a1 = rng.disc_point(0.99), a2 = rng.disc_point(0.99);
    const Complex x1 = rng.box_point(2), x2 = rng.box_point(2);
    const double direct = std::max(std::abs(x1) / (1 - std::norm(a1)), std::abs(x2) / (1 - std::norm(a2)));
    CHECK(std::abs(kappa_product(E, E, a1, a2, x1, x2) - direct) <= 1e-12 * direct);
  }
}

TEST_CASE("hahn_bounds") {
  const auto exact = hahn_bounds(PlanarDomain::disc(), 0.0, 1.0);
  CHECK(exact.lower == doctest::Approx(1.0));
  CHECK(exact.upper == doctest::Approx(1.0));
  CHECK(exact.exact);

  const auto pd = hahn_bounds(PlanarDomain::punctured_disc(), -0.5, 1.0);
  CHECK(pd.lower == doctest::Approx(1 / std::log(2.0)).epsilon(1e-12));
  CHECK(pd.upper == doctest::Approx(2.0));
  CHECK_FALSE(pd.exact);

  const auto cs = hahn_bounds(PlanarDomain::punctured_plane(), 1.0, 1.0);
  CHECK(cs.lower == 0);
  CHECK(cs.upper == doctest::Approx(1.0));

  Sampler rng(12);
  for (const char* text : {"disc", "plane", "cstar", "pdisc", "annulus:0.3"}) {
    const auto d = PlanarDomain::parse(text);
    for (int t = 0; t < 30; ++t) {
      const Complex z = random_member(d, rng);
      const auto b = hahn_bounds(d, z, rng.box_point(2));
      CHECK(b.lower <= b.upper);
      CHECK(b.exact == d.simply_connected());
    }
  }
}

TEST_CASE("classify_product") {
  CHECK(classify_product(PlanarDomain::disc(), PlanarDomain::annulus(0.3)).which == EqualityCase::SimplyConnectedFactor);
  CHECK(classify_product(PlanarDomain::punctured_plane(), PlanarDomain::annulus(0.3)).which == EqualityCase::CstarFactor);
  CHECK(classify_product(PlanarDomain::annulus(0.3), PlanarDomain::punctured_disc()).which == EqualityCase::NotEqual);
  CHECK(classify_product(PlanarDomain::plane(), PlanarDomain::punctured_plane()).equal());
  CHECK_FALSE(classify_product(PlanarDomain::punctured_disc(), PlanarDomain::punctured_disc()).equal());
}
