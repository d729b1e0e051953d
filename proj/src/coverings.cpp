#include "hahn/coverings.hpp"

#include "hahn/sampling.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

namespace hahn {

namespace {

using boost::multiprecision::abs;
using boost::multiprecision::arg;
using boost::multiprecision::exp;
using boost::multiprecision::log;

Complex parse_constant(std::string_view text) {
  const HoloExpr e = parse(text);
  if (!e.is_constant()) fail(ErrorKind::Input, "affine domain parameters must be constants");
  return e.value(Complex(0));
}

std::string constant_text(Complex c) { return HoloExpr::constant(c).render(); }

// 2x2 complex matrix product, row-major.
struct Mat {
  QComplex a, b, c, d;
};

Mat operator*(const Mat& x, const Mat& y) {
  return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

// Deck generator of the form c^-1 o T o c for a Moebius matrix T acting on H.
QDiscAut conjugated_by_cayley(const Mat& t) {
  const QComplex i(0, 1);
  const Mat cayley{i, i, QComplex(-1), QComplex(1)};
  const Mat cayley_inv{QComplex(1), -i, QComplex(1), i};
  const Mat m = cayley_inv * t * cayley;
  return QDiscAut::from_matrix(m.a, m.b, m.c, m.d);
}

}  // namespace

// ------------------------------------------------------------------ domains

PlanarDomain PlanarDomain::annulus(double r) {
  if (!(r > 0 && r < 1)) fail(ErrorKind::Input, "annulus inner radius must lie in (0, 1)");
  PlanarDomain d(DomainKind::Annulus);
  d.r_ = r;
  return d;
}

PlanarDomain PlanarDomain::parse(std::string_view text) {
  const auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  constexpr std::string_view prefix = "affine(";
  if (text.starts_with(prefix)) {
    const auto close = text.find("):");
    const auto semi = text.find(';');
    if (close == std::string_view::npos || semi == std::string_view::npos || semi > close) {
      fail(ErrorKind::Input, "malformed affine domain descriptor '" + std::string(text) + "'");
    }
    const Complex scale = parse_constant(text.substr(prefix.size(), semi - prefix.size()));
    const Complex shift = parse_constant(text.substr(semi + 1, close - semi - 1));
    return parse(text.substr(close + 2)).affine_image(scale, shift);
  }
  if (text == "disc") return disc();
  if (text == "plane") return plane();
  if (text == "cstar") return punctured_plane();
  if (text == "pdisc") return punctured_disc();
  if (text.starts_with("annulus:")) {
    const std::string number(text.substr(8));
    char* end = nullptr;
    const double r = std::strtod(number.c_str(), &end);
    if (number.empty() || end != number.c_str() + number.size()) {
      fail(ErrorKind::Input, "malformed annulus radius '" + number + "'");
    }
    return annulus(r);
  }
  fail(ErrorKind::Input, "unknown domain descriptor '" + std::string(text) + "'");
}

std::string PlanarDomain::descriptor() const {
  std::string base;
  switch (kind_) {
    case DomainKind::Disc: base = "disc"; break;
    case DomainKind::Plane: base = "plane"; break;
    case DomainKind::PuncturedPlane: base = "cstar"; break;
    case DomainKind::PuncturedDisc: base = "pdisc"; break;
    case DomainKind::Annulus: {
      char buf[40];
      const auto res = std::to_chars(buf, buf + sizeof buf, r_);
      base = "annulus:" + std::string(buf, res.ptr);
      break;
    }
  }
  if (is_model()) return base;
  return "affine(" + constant_text(scale_) + ";" + constant_text(shift_) + "):" + base;
}

PlanarDomain PlanarDomain::affine_image(Complex scale, Complex shift) const {
  if (!(std::abs(scale) > 0) || !is_finite(scale) || !is_finite(shift)) {
    fail(ErrorKind::Input, "affine image needs a finite nonzero scale");
  }
  PlanarDomain out = *this;
  out.scale_ = scale * scale_;
  out.shift_ = scale * shift_ + shift;
  return out;
}

bool PlanarDomain::contains(Complex w) const {
  if (!is_finite(w)) return false;
  const double m = std::abs(to_model(w));
  switch (kind_) {
    case DomainKind::Disc: return m < 1;
    case DomainKind::Plane: return true;
    case DomainKind::PuncturedPlane: return m > 0;
    case DomainKind::PuncturedDisc: return m > 0 && m < 1;
    case DomainKind::Annulus: return m > r_ && m < 1;
  }
  return false;
}

double PlanarDomain::boundary_distance(Complex w) const {
  if (!contains(w)) return 0;
  const double m = std::abs(to_model(w));
  double d = 0;
  switch (kind_) {
    case DomainKind::Disc: d = 1 - m; break;
    case DomainKind::Plane: return std::numeric_limits<double>::infinity();
    case DomainKind::PuncturedPlane: d = m; break;
    case DomainKind::PuncturedDisc: d = std::min(m, 1 - m); break;
    case DomainKind::Annulus: d = std::min(m - r_, 1 - m); break;
  }
  return std::abs(scale_) * d;
}

bool operator==(const PlanarDomain& a, const PlanarDomain& b) {
  return a.kind() == b.kind() && a.inner_radius() == b.inner_radius() && a.scale() == b.scale() &&
         a.shift() == b.shift();
}

// --------------------------------------------------------------------- deck

DeckMap DeckMap::automorphism(const QDiscAut& aut) {
  DeckMap d;
  d.kind_ = Kind::Automorphism;
  d.aut_ = aut;
  return d;
}

DeckMap DeckMap::translation(const QComplex& shift) {
  DeckMap d;
  d.kind_ = Kind::Translation;
  d.shift_ = shift;
  return d;
}

template <> QComplex DeckMap::apply<QComplex>(const QComplex& z) const {
  switch (kind_) {
    case Kind::Identity: return z;
    case Kind::Automorphism: return aut_.apply(z);
    case Kind::Translation: return z + shift_;
  }
  return z;
}

template <> Complex DeckMap::apply<Complex>(const Complex& z) const {
  return to_double(apply(lift<QComplex>(z)));
}

// ----------------------------------------------------------------- coverings

Covering covering_of(const PlanarDomain& domain) {
  Covering cov;
  cov.domain = domain;
  HoloExpr model;
  const QReal pi = pi_v<QReal>();
  switch (domain.kind()) {
    case DomainKind::Disc:
      cov.cover = CoverSpace::Disc;
      model = expr::z();
      break;
    case DomainKind::Plane:
      cov.cover = CoverSpace::Plane;
      model = expr::z();
      break;
    case DomainKind::PuncturedPlane:
      cov.cover = CoverSpace::Plane;
      model = expr::exp(expr::z());
      cov.deck = DeckMap::translation(QComplex(0, 2 * pi));
      break;
    case DomainKind::PuncturedDisc:
      cov.cover = CoverSpace::Disc;
      model = expr::cover_pdisc(expr::z());
      cov.deck = DeckMap::automorphism(
          conjugated_by_cayley({QComplex(1), QComplex(2 * pi), QComplex(0), QComplex(1)}));
      break;
    case DomainKind::Annulus: {
      cov.cover = CoverSpace::Disc;
      model = expr::cover_annulus(domain.inner_radius(), expr::z());
      const QReal lambda = exp(2 * pi * pi / log(QReal(domain.inner_radius())));
      cov.deck = DeckMap::automorphism(
          conjugated_by_cayley({QComplex(lambda), QComplex(0), QComplex(0), QComplex(1)}));
      break;
    }
  }
  cov.map_p = domain.is_model() ? model : expr::affine(domain.scale(), domain.shift(), model);
  return cov;
}

QComplex Covering::fiber_point(const QComplex& w_in, int sheet) const {
  const QComplex w = domain.to_model(w_in);
  if (!domain.contains(to_double(w_in))) fail(ErrorKind::Input, "fibre point requested outside the domain");
  const QReal pi = pi_v<QReal>();
  const QComplex two_pi_ik(0, 2 * pi * sheet);
  switch (domain.kind()) {
    case DomainKind::Disc:
    case DomainKind::Plane:
      return w;
    case DomainKind::PuncturedPlane:
      return log(w) + two_pi_ik;
    case DomainKind::PuncturedDisc: {
      const QComplex u = log(w) + two_pi_ik;
      return (u + QComplex(1)) / (u - QComplex(1));
    }
    case DomainKind::Annulus: {
      const QReal lr = log(QReal(domain.inner_radius()));
      const QComplex logw(log(abs(w)), arg(w) + 2 * pi * sheet);
      const QComplex c = exp(QComplex(0, pi) * logw / lr);
      const QComplex i(0, 1);
      return (c - i) / (c + i);
    }
  }
  return w;
}

// ------------------------------------------------------------------ lifting

Complex LiftGrid::point(int ray, int k) const {
  return std::polar(radius * k / steps, 2 * std::numbers::pi * ray / rays);
}

LiftGrid lift_disc(const HoloExpr& f, const Covering& cov, Complex base, const LiftOptions& options) {
  if (options.rays < 1 || options.steps < 1 || !(options.radius > 0 && options.radius < 1)) {
    fail(ErrorKind::Input, "lift_disc: bad grid options");
  }
  const Complex f0 = f.value(Complex(0));
  const Complex p0 = cov.map_p.value(base);
  if (std::abs(p0 - f0) > 1e-9 * std::max(1.0, std::abs(f0))) {
    fail(ErrorKind::Input, "lift_disc: base point does not lie over f(0)");
  }
  const bool disc_cover = cov.cover == CoverSpace::Disc;
  LiftGrid grid;
  grid.rays = options.rays;
  grid.steps = options.steps;
  grid.radius = options.radius;
  grid.values.reserve(static_cast<std::size_t>(options.rays) * (options.steps + 1));

  const double h = options.radius / options.steps;
  for (int ray = 0; ray < options.rays; ++ray) {
    const Complex dir = std::polar(1.0, 2 * std::numbers::pi * ray / options.rays);
    // dw/dt = f'(t dir) dir / p'(w)
    const auto rhs = [&](double t, Complex w) {
      return f.jet(t * dir).d1 * dir / cov.map_p.jet(w).d1;
    };
    Complex w = base;
    grid.values.push_back(w);
    for (int k = 0; k < options.steps; ++k) {
      const double t = k * h;
      const Complex k1 = rhs(t, w);
      const Complex k2 = rhs(t + h / 2, w + h / 2 * k1);
      const Complex k3 = rhs(t + h / 2, w + h / 2 * k2);
      const Complex k4 = rhs(t + h, w + h * k3);
      w += h / 6 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      const Complex target = f.value((t + h) * dir);
      const auto pj = cov.map_p.jet(w);
      w -= (pj.value - target) / pj.d1;
      if (disc_cover && !(std::abs(w) < 1)) fail(ErrorKind::Numeric, "lift left the unit disc");
      grid.max_residual = std::max(grid.max_residual, std::abs(cov.map_p.value(w) - target));
      grid.values.push_back(w);
    }
  }
  return grid;
}

// ------------------------------------------------------------- displacement

std::vector<QComplex> boundary_fixed_points(const QDiscAut& aut) {
  std::vector<QComplex> out;
  const QComplex& p = aut.phase();
  const QComplex& a = aut.center();
  if (abs(a) < QReal(1e-30)) return out;  // rotation: fixed point 0 (or everything)
  // conj(a) z^2 + (p - 1) z - p a = 0
  const QComplex qa = conj(a), qb = p - QComplex(1), qc = -p * a;
  const QComplex root = sqrt(qb * qb - QComplex(4) * qa * qc);
  const QComplex plus = -(qb + root) / QComplex(2), minus = -(qb - root) / QComplex(2);
  const QComplex q = abs(plus) >= abs(minus) ? plus : minus;
  for (const QComplex& z : {q / qa, qc / q}) {
    if (abs(abs(z) - 1) > QReal(1e-12)) continue;
    const bool duplicate = std::any_of(out.begin(), out.end(), [&](const QComplex& x) { return abs(x - z) < QReal(1e-12); });
    if (!duplicate) out.push_back(z);
  }
  return out;
}

QComplex probe_target(const QDiscAut& deck) {
  const auto fixed = boundary_fixed_points(deck);
  if (fixed.empty()) return QComplex(1);
  constexpr int kCandidates = 720;
  const QReal pi = pi_v<QReal>();
  QComplex best(1);
  QReal best_gap = -1;
  for (int k = 0; k < kCandidates; ++k) {
    const QReal theta = 2 * pi * k / kCandidates;
    const QComplex u(cos(theta), sin(theta));
    QReal gap = 4;
    for (const QComplex& f : fixed) gap = std::min(gap, QReal(abs(u - f)));
    if (gap > best_gap + QReal(1e-12)) {
      best_gap = gap;
      best = u;
    }
  }
  return best;
}

QReal displacement(const QDiscAut& deck, const QComplex& z) { return moebius_distance(z, deck.apply(z)); }

double sup_displacement_probe(const Covering& cov, double delta) {
  if (!(delta > 0 && delta < 1)) fail(ErrorKind::Input, "probe margin must lie in (0, 1)");
  if (cov.cover != CoverSpace::Disc) fail(ErrorKind::Input, "displacement probe needs a disc covering");
  if (!cov.deck.is_automorphism()) return 0;
  const QDiscAut& deck = cov.deck.aut();
  const QComplex dir = probe_target(deck);
  // uniform steps in the hyperbolic parameter s, t = tanh(s / 2)
  constexpr int kSteps = 400;
  const QReal t_end = 1 - QReal(delta);
  const QReal s_end = log((1 + t_end) / (1 - t_end));
  QReal best = 0;
  for (int k = 0; k <= kSteps; ++k) {
    const QReal t = k == kSteps ? t_end : tanh(s_end * k / kSteps / 2);
    best = std::max(best, displacement(deck, dir * t));
  }
  return to_double(best);
}

// --------------------------------------------------------------- self-check

CoveringCheck check_covering(const Covering& cov, int samples, std::uint64_t seed) {
  CoveringCheck out;
  out.samples = samples;
  Sampler rng(seed);
  const bool disc_cover = cov.cover == CoverSpace::Disc;
  const double reach = disc_cover ? 0.95 : 3.0;
  for (int k = 0; k < samples; ++k) {
    const Complex z = disc_cover ? rng.disc_point(reach) : rng.box_point(reach);
    const QComplex zq = lift<QComplex>(z);
    const QComplex w = cov.map_p.value(zq);
    if (!cov.domain.contains(to_double(w))) ++out.containment_failures;
    if (cov.non_injective()) {
      const QComplex w2 = cov.map_p.value(cov.deck.apply(zq));
      out.max_deck_residual = std::max(out.max_deck_residual, to_double(QReal(abs(w2 - w))));
    }
  }
  if (cov.non_injective()) {
    constexpr int kGrid = 64;
    QReal best = std::numeric_limits<QReal>::max();
    for (int i = 0; i < kGrid; ++i) {
      for (int j = 0; j < kGrid; ++j) {
        const QComplex z(reach * (2.0 * i / (kGrid - 1) - 1), reach * (2.0 * j / (kGrid - 1) - 1));
        if (disc_cover && !(abs(z) < QReal(reach))) continue;
        best = std::min(best, QReal(abs(cov.deck.apply(z) - z)));
      }
    }
    out.min_deck_displacement = to_double(best);
  }
  return out;
}

}  // namespace hahn
