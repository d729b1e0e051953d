#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "hahn/holo_expr.hpp"

#include <cmath>
#include <random>

using namespace hahn;

namespace {

const double kE = std::exp(1.0);

bool close(Complex a, Complex b, double tol) { return std::abs(a - b) <= tol; }

// Central difference oracle, independent of the jet propagation.
Complex central_difference(const HoloExpr& f, Complex z, double h) {
  return (f.value(z + h) - f.value(z - h)) / (2 * h);
}

HoloExpr random_expr(std::mt19937_64& rng, int depth) {
  std::uniform_real_distribution<double> u(-0.4, 0.4);
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 9);
  switch (pick(rng)) {
    case 0:
      return expr::z();
    case 1:
      return expr::c({u(rng), u(rng)});
    case 2:
      return random_expr(rng, depth - 1) + random_expr(rng, depth - 1);
    case 3:
      return random_expr(rng, depth - 1) * random_expr(rng, depth - 1);
    case 4:
      return random_expr(rng, depth - 1) / (expr::c(2.0) + expr::moebius({u(rng), 0}, expr::z()));
    case 5:
      return expr::pow(random_expr(rng, depth - 1), 3);
    case 6:
      return expr::exp(random_expr(rng, depth - 1));
    case 7:
      return expr::moebius({u(rng), u(rng)}, expr::affine(0.5, 0.0, expr::z()));
    case 8:
      return expr::cover_pdisc(expr::affine({0.5, 0.1}, {u(rng), 0}, expr::z()));
    default:
      return expr::cover_annulus(0.3, expr::affine(0.4, {0.1, u(rng)}, expr::z()));
  }
}

}  // namespace

TEST_CASE("parse: documented examples") {
  const auto id = parse("z");
  CHECK(id.kind() == NodeKind::Variable);
  const auto j = eval_jet(id, 3.0);
  CHECK(close(j.value, 3.0, 1e-15));
  CHECK(close(j.d1, 1.0, 1e-15));

  const auto e = parse("exp(-(1+z)/(1-z))");
  CHECK(close(e.value(Complex(0)), std::exp(-1.0), 1e-15));

  const auto prod = parse("(1+z)*(1-0.5*z)");
  CHECK(prod.kind() == NodeKind::Mul);
  const auto pj = eval_jet(prod, 0.0);
  CHECK(close(pj.value, 1.0, 1e-15));
  CHECK(close(pj.d1, 0.5, 1e-15));
}

TEST_CASE("parse: literals and whitespace") {
  CHECK(close(parse(" 2 + 3i ").value(Complex(0)), {2, 3}, 1e-15));
  CHECK(close(parse("i*i").value(Complex(0)), -1.0, 1e-15));
  CHECK(close(parse("1e-3 + 2.5e+1i").value(Complex(0)), {1e-3, 25}, 1e-15));
  CHECK(close(parse("-z^2").value(Complex(2)), -4.0, 1e-15));
  CHECK(close(parse("moebius(0.5; z)").value(Complex(0.5)), 0.0, 1e-15));
  CHECK(close(parse("cover_annulus(0.3; 0)").value(Complex(0)),
              expr::cover_annulus(0.3, expr::c(0.0)).value(Complex(0)), 0));
}

TEST_CASE("parse: errors carry positions") {
  try {
    parse("z + foo(z)");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.position() == 4);
    CHECK(std::string(e.what()).find("unknown identifier") != std::string::npos);
  }
  CHECK_THROWS_AS(parse("(z + 1"), ParseError);
  CHECK_THROWS_AS(parse("z^-1"), ParseError);
  CHECK_THROWS_AS(parse("moebius(z; z)"), ParseError);
  CHECK_THROWS_AS(parse("moebius(2; z)"), ParseError);
  CHECK_THROWS_AS(parse("cover_annulus(1.5; z)"), ParseError);
  CHECK_THROWS_AS(parse("1/(z-0)"), ParseError);  // sampled denominator hits 0
  CHECK_THROWS_AS(parse("2x"), ParseError);
  CHECK_THROWS_AS(parse(""), ParseError);
}

TEST_CASE("eval_jet: power rule, exp, product") {
  const auto sq = expr::pow(expr::z(), 2);
  const auto j = eval_jet(sq, 3.0, 2);
  CHECK(close(j.value, 9.0, 1e-14));
  CHECK(close(j.d1, 6.0, 1e-14));
  CHECK(close(j.d2, 2.0, 1e-14));

  const auto je = eval_jet(expr::exp(expr::z()), 0.0);
  CHECK(close(je.value, 1.0, 1e-15));
  CHECK(close(je.d1, 1.0, 1e-15));
  CHECK(je.d2 == Complex(0));  // order 1 drops d2

  CHECK_THROWS_AS(eval_jet(sq, 0.0, 3), Error);
}

TEST_CASE("eval_jet: region and pole errors") {
  const auto cay = parse("(1+z)/(1-z)");
  CHECK(cay.analytic_radius() == doctest::Approx(1.0));
  CHECK(cay.quotient_certificate() > 0);
  CHECK_THROWS_AS(cay.jet(Complex(1.0)), Error);
  CHECK_THROWS_AS(eval_jet(expr::cover_pdisc(expr::z()), 1.2), Error);
  const auto quotient_by_const = parse("(z - 1)/2");
  CHECK(std::isinf(quotient_by_const.analytic_radius()));
  CHECK(close(eval_jet(quotient_by_const, 5.0).value, 2.0, 1e-15));
}

TEST_CASE("compose: examples") {
  const auto e = expr::exp(expr::z());
  const auto k = compose(e, expr::c(0.0) * expr::z());
  CHECK(close(k.value(Complex(0.7)), 1.0, 1e-15));

  const auto f = parse("cover_pdisc(0.3 + 0.5*z)");
  for (Complex s : {Complex(0.1, 0.2), Complex(-0.5, 0.3)}) {
    const auto a = eval_jet(compose(f, expr::z()), s, 2);
    const auto b = eval_jet(f, s, 2);
    CHECK(close(a.value, b.value, 1e-15));
    CHECK(close(a.d1, b.d1, 1e-15));
    CHECK(close(a.d2, b.d2, 1e-15));
  }

  const auto inner = parse("-(1+z)/(1-z)");
  const auto ce = eval_jet(compose(e, inner), 0.0);
  CHECK(close(ce.value, 1 / kE, 1e-15));
  CHECK(close(ce.d1, -2 / kE, 1e-15));
  // finite difference oracle for d/dz of the inner map at 0
  CHECK(close(central_difference(inner, 0.0, 1e-6), -2.0, 1e-8));

  // region violation: the image of 2z leaves the unit disc
  CHECK_THROWS_AS(compose(expr::cover_pdisc(expr::z()), parse("2*z^2 + 0.3*z")), Error);
  // affine inner maps shrink the radius exactly
  const auto shrunk = compose(expr::cover_pdisc(expr::z()), expr::affine(0.5, 0.0, expr::z()));
  CHECK(shrunk.analytic_radius() == doctest::Approx(2.0));
}

TEST_CASE("compose: chain rule matches f'(g(z)) g'(z)") {
  const auto f = parse("exp(z)*moebius(0.2+0.1i; 0.5*z)");
  const auto g = parse("0.3*z + 0.2*z^2");
  const auto fg = compose(f, g);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-0.6, 0.6);
  for (int k = 0; k < 100; ++k) {
    const Complex s(u(rng), u(rng));
    const auto gj = g.jet(s);
    const auto fj = f.jet(gj.value);
    const auto cj = fg.jet(s);
    CHECK(std::abs(cj.d1 - fj.d1 * gj.d1) <= 1e-12 * std::max(1.0, std::abs(cj.d1)));
  }
}

TEST_CASE("property: jets agree with central differences on 200 random pairs") {
  std::mt19937_64 rng(20240617);
  std::uniform_real_distribution<double> u(-0.35, 0.35);
  int checked = 0;
  while (checked < 200) {
    const HoloExpr f = random_expr(rng, 3);
    const Complex s(u(rng), u(rng));
    const double h = 1e-6 * std::max(1.0, std::abs(s));
    Jet2 j;
    try {
      j = eval_jet(f, s, 2);
    } catch (const Error&) {
      continue;
    }
    const Complex fd = central_difference(f, s, h);
    const double scale = std::max({std::abs(j.d1), 1.0});
    INFO(f.render());
    CHECK(std::abs(fd - j.d1) / scale < 1e-6);
    // second derivative through differences of the first
    const Complex fd2 = (f.jet(s + h).d1 - f.jet(s - h).d1) / (2 * h);
    CHECK(std::abs(fd2 - j.d2) / std::max(std::abs(j.d2), 1.0) < 1e-5);
    ++checked;
  }
}

TEST_CASE("property: composition is associative on jets") {
  const auto f = parse("exp(z) + z^2");
  const auto g = parse("moebius(0.3i; 0.8*z)");
  const auto h = parse("0.5*z + 0.1*z^3");
  const auto left = compose(compose(f, g), h);
  const auto right = compose(f, compose(g, h));
  for (const Complex& s : disc_samples(0.9, 50)) {
    const auto a = eval_jet(left, s, 2);
    const auto b = eval_jet(right, s, 2);
    CHECK(std::abs(a.value - b.value) <= 1e-12);
    CHECK(std::abs(a.d1 - b.d1) <= 1e-12);
    CHECK(std::abs(a.d2 - b.d2) <= 1e-12);
  }
}

TEST_CASE("property: render/parse round trip preserves jets") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  for (int k = 0; k < 60; ++k) {
    const HoloExpr f = random_expr(rng, 3);
    const HoloExpr g = parse(f.render());
    for (int m = 0; m < 3; ++m) {
      const Complex s(u(rng), u(rng));
      const auto a = eval_jet(f, s, 2);
      const auto b = eval_jet(g, s, 2);
      INFO(f.render());
      CHECK(std::abs(a.value - b.value) <= 1e-12 * std::max(1.0, std::abs(a.value)));
      CHECK(std::abs(a.d1 - b.d1) <= 1e-12 * std::max(1.0, std::abs(a.d1)));
    }
  }
}

TEST_CASE("boundary_max_modulus") {
  CHECK(boundary_max_modulus(expr::z(), 1.0) == doctest::Approx(1.0).epsilon(2e-6));
  CHECK(boundary_max_modulus(parse("0.1+0.5*z"), 0.5) == doctest::Approx(0.35).epsilon(2e-6));
  CHECK(boundary_max_modulus(parse("exp(z)"), 1.0) == doctest::Approx(kE).epsilon(2e-6));
  // the inflation makes it an upper bound for the sampled maximum
  CHECK(boundary_max_modulus(expr::z(), 1.0) > 1.0);
  CHECK_THROWS_AS(boundary_max_modulus(expr::z(), 1.0, 32), Error);
  CHECK_THROWS_AS(boundary_max_modulus(expr::cover_pdisc(expr::z()), 1.0), Error);

  const auto f = parse("exp(3*z) * (z - 0.4i)^2");
  double previous = 0;
  for (int n : {128, 256, 512, 1024}) {
    const double m = boundary_max_modulus(f, 0.9, n);
    CHECK(m >= previous);
    previous = m;
  }
}

TEST_CASE("binary128 evaluation agrees with double") {
  const auto f = parse("cover_annulus(0.3; 0.2+0.3*z) * cover_pdisc(moebius(0.1; 0.5*z))");
  const Complex s(0.3, -0.2);
  const auto jd = f.jet(s);
  const auto jq = f.jet(QComplex(0.3, -0.2));
  CHECK(std::abs(jd.value - to_double(jq.value)) < 1e-14);
  CHECK(std::abs(jd.d1 - to_double(jq.d1)) < 1e-13);
  CHECK(std::abs(jd.d2 - to_double(jq.d2)) < 1e-12);
}
