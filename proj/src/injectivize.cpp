#include "hahn/injectivize.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hahn {

namespace {

using json = nlohmann::ordered_json;

constexpr double kZeroDerivative = 1e-14;
constexpr double kVerifyRadius = 0.999;
constexpr int kLatticeAngles = 60;
constexpr int kWindingTargets = 8;
constexpr int kContainmentSamples = 2000;

bool is_zero(Complex v) { return std::abs(v) <= kZeroDerivative; }

void check_theta(double theta) {
  if (!(theta > 0 && theta < 1)) fail(ErrorKind::Input, "theta must lie in the open interval (0, 1)");
}

HoloExpr shrink(const HoloExpr& f, double theta) { return compose(f, expr::affine(theta, 0.0, expr::z())); }

// Everything a branch produces before verification.
struct Construction {
  DiscPair g;
  Branch branch = Branch::Prop2Case1;
  Complex lambda{};
  double big_m = 0;
  double d = 0;
  int k = 0;
  Complex c_k{};
  int injective_component = 0;
  int zero_free_component = 0;
  int contained_component = 0;  // g_c stays in the ball B(contain_center, d)
  Complex contain_center{};

  Construction swapped() const {
    Construction out = *this;
    out.g = g.swapped();
    const auto flip = [](int c) { return c == 0 ? 0 : 3 - c; };
    out.injective_component = flip(injective_component);
    out.zero_free_component = flip(zero_free_component);
    out.contained_component = flip(contained_component);
    return out;
  }
};

const HoloExpr& component(const DiscPair& p, int c) { return c == 1 ? p.comp1 : p.comp2; }
const PlanarDomain& target(const DiscPair& p, int c) { return c == 1 ? p.target1 : p.target2; }

Construction build_prop2(const DiscPair& f, double theta) {
  check_theta(theta);
  if (!f.target1.simply_connected()) {
    fail(ErrorKind::Input, "prop2 needs a simply connected first factor, got " + f.target1.descriptor());
  }
  const Jet2 j1 = eval_jet(f.comp1, 0.0), j2 = eval_jet(f.comp2, 0.0);
  if (is_zero(j1.d1) && is_zero(j2.d1)) fail(ErrorKind::Degenerate, "f'(0) = (0, 0)");

  Construction out;
  const HoloExpr g2 = shrink(f.comp2, theta);
  const HoloExpr z = expr::z();
  if (!is_zero(j1.d1)) {
    out.branch = Branch::Prop2Case1;
    out.injective_component = 1;
    if (f.target1.kind() == DomainKind::Disc) {
      const PlanarDomain& t = f.target1;
      const Complex a = t.to_model(j1.value);
      const Complex lambda = theta * (j1.d1 / t.scale()) / (1 - std::norm(a));
      if (!(std::abs(lambda) < 1)) {
        fail(ErrorKind::Input, "first component violates Schwarz-Pick; does it map into " + t.descriptor() + "?");
      }
      out.lambda = lambda;
      out.g.comp1 = expr::affine(t.scale(), t.shift(), expr::moebius(-a, expr::affine(lambda, 0.0, z)));
    } else {
      out.lambda = theta * j1.d1;
      out.g.comp1 = expr::affine(theta * j1.d1, j1.value, z);
    }
  } else {
    out.branch = Branch::Prop2Case2;
    const HoloExpr h = (g2 - expr::c(j2.value)) / expr::c(j2.d1);
    out.big_m = boundary_max_modulus(h, 1.0);
    const double dist = f.target1.boundary_distance(j1.value);
    out.d = std::isfinite(dist) ? dist / 2 : 1.0;
    out.g.comp1 = expr::c(j1.value) + expr::c(out.d / (out.big_m + 1)) * (h - expr::affine(theta, 0.0, z));
    out.contained_component = 1;
    out.contain_center = j1.value;
  }
  out.g.comp2 = g2;
  out.g.target1 = f.target1;
  out.g.target2 = f.target2;
  return out;
}

Construction build_prop3(const DiscPair& f, double theta) {
  check_theta(theta);
  if (f.target1.kind() != DomainKind::PuncturedPlane) {
    fail(ErrorKind::Input, "prop3 needs a punctured-plane first factor, got " + f.target1.descriptor());
  }
  if (f.target2.kind() == DomainKind::Plane) {
    fail(ErrorKind::Input, "prop3 needs a second factor other than the plane; exchange the factors and use prop2");
  }
  const Jet2 j1 = eval_jet(f.comp1, 0.0), j2 = eval_jet(f.comp2, 0.0);
  if (is_zero(j1.d1) && is_zero(j2.d1)) fail(ErrorKind::Degenerate, "f'(0) = (0, 0)");

  if (is_zero(j2.d1)) {
    const double dist = f.target2.boundary_distance(j2.value);
    const PlanarDomain ball = PlanarDomain::disc().affine_image(dist, j2.value);
    const DiscPair tilde{expr::c(j2.value), f.comp1, ball, f.target1};
    Construction out = build_prop2(tilde, theta).swapped();
    out.branch = Branch::Prop3Swapped;
    out.g.target1 = f.target1;
    out.g.target2 = f.target2;
    out.zero_free_component = 1;
    return out;
  }

  // normalise the C* factor so that F1(0) = 1: F1 = (f1 - shift) / base
  const Complex shift = f.target1.shift();
  const Complex base = j1.value - shift;
  const Complex f1p = j1.d1 / base;
  const HoloExpr z = expr::z();
  Construction out;
  out.zero_free_component = 1;
  if (std::abs(theta * f1p - 1.0) <= kZeroDerivative) {
    out.branch = Branch::Prop3Unit;
    out.injective_component = 1;
    out.g.comp1 = expr::affine(base, shift, expr::c(1.0) + z);
  } else {
    out.branch = Branch::Prop3General;
    out.big_m = boundary_max_modulus(f.comp2, theta);
    const Complex step = theta * j2.d1 / (theta * f1p - 1.0);
    constexpr int kMaxPower = 1000000;
    int k = 1;
    while (std::abs(j2.value - double(k) * step) <= out.big_m) {
      if (++k > kMaxPower) fail(ErrorKind::Numeric, "no admissible power k below 1e6");
    }
    out.k = k;
    out.c_k = j2.value - double(k) * step;
    const HoloExpr h = (shrink(f.comp2, theta) - expr::c(out.c_k)) / expr::c(j2.value - out.c_k);
    out.g.comp1 = expr::affine(base, shift, (expr::c(1.0) + z) * expr::pow(h, k));
  }
  out.g.comp2 = shrink(f.comp2, theta);
  out.g.target1 = f.target1;
  out.g.target2 = f.target2;
  return out;
}

InjectivizationResult finalize(const DiscPair& f, double theta, const Construction& c, bool swapped,
                               const InjectivityOptions& options) {
  InjectivizationResult r;
  r.g = c.g;
  r.branch = c.branch;
  r.components_swapped = swapped;
  r.lambda = c.lambda;
  r.big_m = c.big_m;
  r.d = c.d;
  r.k = c.k;
  r.c_k = c.c_k;
  for (int j = 1; j <= 2; ++j) {
    const Jet2 fj = eval_jet(component(f, j), 0.0);
    const Jet2 gj = eval_jet(component(c.g, j), 0.0);
    r.value_residual = std::max(r.value_residual, std::abs(gj.value - fj.value));
    r.derivative_residual = std::max(r.derivative_residual, std::abs(gj.d1 - theta * fj.d1));
  }
  bool contained = true;
  if (c.contained_component != 0) {
    const HoloExpr& gc = component(c.g, c.contained_component);
    for (const Complex& s : disc_samples(kVerifyRadius, kContainmentSamples)) {
      r.containment_ratio = std::max(r.containment_ratio, std::abs(gc.value(s) - c.contain_center) / c.d);
    }
    contained = r.containment_ratio < 1;
  }
  InjectivityOptions opts = options;
  opts.injective_component = c.injective_component;
  opts.zero_free_component = c.zero_free_component;
  r.injectivity = verify_injectivity(c.g, opts);
  r.passed = r.value_residual < kJetTolerance && r.derivative_residual < kJetTolerance && contained &&
             r.injectivity.passed;
  return r;
}

int winding_number(const HoloExpr& g, Complex w, double radius) {
  for (int n = 1024; n <= (1 << 17); n *= 2) {
    double total = 0;
    bool fine = true;
    Complex previous = g.value(Complex(radius)) - w;
    for (int k = 1; k <= n; ++k) {
      const Complex current = g.value(std::polar(radius, 2 * std::numbers::pi * k / n)) - w;
      const double step = std::arg(current / previous);
      if (std::abs(step) > std::numbers::pi / 4) {
        fine = false;
        break;
      }
      total += step;
      previous = current;
    }
    if (fine) return static_cast<int>(std::lround(total / (2 * std::numbers::pi)));
  }
  fail(ErrorKind::Numeric, "winding number did not resolve");
}

HoloExpr random_unit_disc(Sampler& rng, double reach = 0.9) {
  // u + v (z + eps z^2) with |u| + |v| (1 + |eps|) <= reach
  const Complex u = rng.disc_point(0.5 * reach);
  const Complex eps = rng.disc_point(0.3);
  const double room = (reach - std::abs(u)) / (1 + std::abs(eps));
  const Complex v = std::polar(rng.uniform(0.2, 1.0) * room, rng.uniform(0, 2 * std::numbers::pi));
  return expr::c(u) + expr::c(v) * (expr::z() + expr::c(eps) * expr::pow(expr::z(), 2));
}

PlanarDomain random_target(Sampler& rng, bool allow_cstar) {
  const int pick = static_cast<int>(rng.uniform() * (allow_cstar ? 5 : 4));
  switch (pick) {
    case 0: return PlanarDomain::disc();
    case 1: return PlanarDomain::punctured_disc();
    case 2: return PlanarDomain::annulus(0.3);
    case 3: return PlanarDomain::annulus(0.5);
    default: return PlanarDomain::punctured_plane();
  }
}

HoloExpr random_cstar_disc(Sampler& rng, Complex linear) {
  const Complex b0 = rng.box_point(0.5), b2 = rng.disc_point(0.3);
  return expr::exp(expr::c(b0) + expr::c(linear) * expr::z() + expr::c(b2) * expr::pow(expr::z(), 2));
}

HoloExpr random_disc_into(const PlanarDomain& d, Sampler& rng) {
  switch (d.kind()) {
    case DomainKind::Disc: return random_unit_disc(rng);
    case DomainKind::PuncturedDisc: return expr::cover_pdisc(random_unit_disc(rng));
    case DomainKind::Annulus: return expr::cover_annulus(d.inner_radius(), random_unit_disc(rng));
    case DomainKind::PuncturedPlane:
      return random_cstar_disc(rng, std::polar(rng.uniform(0.2, 1.5), rng.uniform(0, 2 * std::numbers::pi)));
    case DomainKind::Plane: return expr::c(rng.box_point(1.0)) + expr::c(rng.box_point(2.0)) * expr::z();
  }
  return expr::z();
}

Complex random_point_in(const PlanarDomain& d, Sampler& rng) {
  for (;;) {
    const Complex w = rng.box_point(1.2);
    if (d.contains(w) && d.boundary_distance(w) > 0.05) return w;
  }
}

}  // namespace

// -------------------------------------------------------------- disc pairs

DiscPair DiscPair::from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorKind::Input, std::string("disc pair JSON: ") + e.what());
  }
  for (const char* key : {"comp1", "comp2", "target1", "target2"}) {
    if (!j.is_object() || !j.contains(key) || !j[key].is_string()) {
      fail(ErrorKind::Input, std::string("disc pair JSON needs a string field '") + key + "'");
    }
  }
  DiscPair p{parse(j["comp1"].get<std::string>()), parse(j["comp2"].get<std::string>()),
             PlanarDomain::parse(j["target1"].get<std::string>()), PlanarDomain::parse(j["target2"].get<std::string>())};
  validate_disc_pair(p);
  return p;
}

std::string DiscPair::to_json() const {
  json j;
  j["comp1"] = comp1.render();
  j["comp2"] = comp2.render();
  j["target1"] = target1.descriptor();
  j["target2"] = target2.descriptor();
  return j.dump();
}

void validate_disc_pair(const DiscPair& f) {
  for (int c = 1; c <= 2; ++c) {
    const HoloExpr& fc = component(f, c);
    const PlanarDomain& t = target(f, c);
    const std::string label = "component " + std::to_string(c);
    if (fc.analytic_radius() < 1) fail(ErrorKind::Input, label + " is not holomorphic on the unit disc");
    try {
      const Jet2 j = eval_jet(fc, 0.0);
      if (!is_finite(j.value) || !is_finite(j.d1)) fail(ErrorKind::Input, label + " has a non-finite jet at 0");
      for (const Complex& s : disc_samples(kVerifyRadius, 1000)) {
        if (!t.contains(fc.value(s))) {
          fail(ErrorKind::Input, label + " leaves " + t.descriptor() + " near z = " + std::to_string(s.real()) +
                                     (s.imag() < 0 ? "" : "+") + std::to_string(s.imag()) + "i");
        }
      }
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::Input) throw;
      fail(ErrorKind::Input, label + ": " + e.what());
    }
  }
}

const char* to_string(Branch b) {
  switch (b) {
    case Branch::Prop2Case1: return "prop2-case1";
    case Branch::Prop2Case2: return "prop2-case2";
    case Branch::Prop3General: return "prop3-general";
    case Branch::Prop3Unit: return "prop3-unit";
    case Branch::Prop3Swapped: return "prop3-swapped";
  }
  return "?";
}

// ------------------------------------------------------------ verification

InjectivityReport verify_injectivity(const DiscPair& g, const InjectivityOptions& options) {
  if (options.pairs < 1000) fail(ErrorKind::Input, "injectivity check needs at least 1000 pairs");
  Sampler rng(options.seed);
  InjectivityReport rep;

  const int wanted = (options.pairs + 3) / 4;
  const int rings = (wanted + kLatticeAngles - 1) / kLatticeAngles;
  std::vector<Complex> pts, v1, v2;
  pts.reserve(static_cast<std::size_t>(rings) * kLatticeAngles);
  for (int i = 0; i < rings; ++i) {
    const double rho = kVerifyRadius * std::sqrt((i + 0.25 + 0.5 * rng.uniform()) / rings);
    const double offset = rng.uniform(0, 2 * std::numbers::pi);
    for (int j = 0; j < kLatticeAngles; ++j) {
      pts.push_back(std::polar(rho, offset + 2 * std::numbers::pi * j / kLatticeAngles));
    }
  }
  for (const Complex& p : pts) {
    v1.push_back(g.comp1.value(p));
    v2.push_back(g.comp2.value(p));
  }
  const int n = static_cast<int>(pts.size());
  rep.points = n;
  rep.pairs = options.pairs;

  double ratio = std::numeric_limits<double>::infinity();
  for (int q = 0; q < options.pairs; ++q) {
    const int a = q % n;
    const int ring = a / kLatticeAngles, slot = a % kLatticeAngles;
    int b = a;
    switch ((q / n) % 4) {
      case 0: b = ring * kLatticeAngles + (slot + kLatticeAngles / 2) % kLatticeAngles; break;
      case 1: b = ring * kLatticeAngles + (slot + kLatticeAngles / 3) % kLatticeAngles; break;
      case 2: b = (ring + 1 < rings ? ring + 1 : ring - 1) * kLatticeAngles + slot; break;
      default:
        b = static_cast<int>(rng.uniform() * (n - 1));
        if (b >= a) ++b;
        break;
    }
    if (b < 0 || b == a) continue;
    const double gap = std::max(std::abs(v1[a] - v1[b]), std::abs(v2[a] - v2[b]));
    if (gap <= kCollisionDistance) ++rep.collisions;
    ratio = std::min(ratio, gap / std::abs(pts[a] - pts[b]));
  }
  rep.min_separation_ratio = ratio;

  bool windings_ok = true;
  if (options.injective_component != 0) {
    const HoloExpr& gc = component(g, options.injective_component);
    for (int t = 0; t < kWindingTargets; ++t) {
      const Complex w = gc.value(rng.disc_point(0.9));
      const int wn = winding_number(gc, w, kVerifyRadius);
      rep.windings.push_back({options.injective_component, w, wn});
      windings_ok = windings_ok && wn == 1;
    }
  }
  bool zero_free = true;
  if (options.zero_free_component != 0) {
    const auto& vals = options.zero_free_component == 1 ? v1 : v2;
    const PlanarDomain& t = target(g, options.zero_free_component);
    double m = std::numeric_limits<double>::infinity();
    for (const Complex& v : vals) m = std::min(m, std::abs(t.to_model(v)));
    rep.min_modulus = m;
    zero_free = m > 0;
  }
  rep.passed = rep.collisions == 0 && ratio > 0 && windings_ok && zero_free;
  return rep;
}

// ---------------------------------------------------------------- drivers

InjectivizationResult prop2_injectivize(const DiscPair& f, double theta, const InjectivityOptions& options) {
  return finalize(f, theta, build_prop2(f, theta), false, options);
}

InjectivizationResult prop3_injectivize(const DiscPair& f, double theta, const InjectivityOptions& options) {
  return finalize(f, theta, build_prop3(f, theta), false, options);
}

InjectivizationResult injectivize(const DiscPair& f, double theta, const InjectivityOptions& options) {
  check_theta(theta);
  const auto& t1 = f.target1;
  const auto& t2 = f.target2;
  if (t1.biholomorphic_to_cstar() && t2.kind() != DomainKind::Plane) {
    return finalize(f, theta, build_prop3(f, theta), false, options);
  }
  if (t2.biholomorphic_to_cstar() && t1.kind() != DomainKind::Plane) {
    return finalize(f, theta, build_prop3(f.swapped(), theta).swapped(), true, options);
  }
  if (t1.simply_connected()) return finalize(f, theta, build_prop2(f, theta), false, options);
  if (t2.simply_connected()) return finalize(f, theta, build_prop2(f.swapped(), theta).swapped(), true, options);
  fail(ErrorKind::TheoremCase,
       "neither factor is simply connected or a punctured plane; the pair admits a counterexample instead");
}

std::vector<ThetaRow> theta_family_report(const DiscPair& f, const std::vector<double>& thetas,
                                          const InjectivityOptions& options) {
  std::vector<ThetaRow> rows;
  for (double theta : thetas) {
    const auto r = injectivize(f, theta, options);
    rows.push_back({theta, r.branch, r.value_residual, r.derivative_residual, r.injectivity.min_separation_ratio,
                    r.passed});
  }
  return rows;
}

// -------------------------------------------------------------- generators

DiscPair random_disc_pair(Branch branch, double theta, Sampler& rng) {
  check_theta(theta);
  DiscPair f;
  switch (branch) {
    case Branch::Prop2Case1:
    case Branch::Prop2Case2: {
      const int pick = static_cast<int>(rng.uniform() * 3);
      f.target1 = pick == 0 ? PlanarDomain::disc()
                  : pick == 1 ? PlanarDomain::plane()
                              : PlanarDomain::disc().affine_image({0, 2}, {1, 0});
      f.target2 = random_target(rng, false);
      f.comp2 = random_disc_into(f.target2, rng);
      if (branch == Branch::Prop2Case1) {
        f.comp1 = f.target1.kind() == DomainKind::Plane
                      ? random_disc_into(f.target1, rng)
                      : expr::affine(f.target1.scale(), f.target1.shift(), random_unit_disc(rng));
      } else {
        const Complex u = rng.disc_point(0.4), w2 = rng.disc_point(0.3), w3 = rng.disc_point(0.2);
        const HoloExpr flat = expr::c(u) + expr::c(w2) * expr::pow(expr::z(), 2) + expr::c(w3) * expr::pow(expr::z(), 3);
        f.comp1 = expr::affine(f.target1.scale(), f.target1.shift(), flat);
      }
      break;
    }
    case Branch::Prop3General:
    case Branch::Prop3Unit:
    case Branch::Prop3Swapped: {
      f.target1 = PlanarDomain::punctured_plane();
      f.target2 = random_target(rng, true);
      Complex linear;
      if (branch == Branch::Prop3Unit) {
        linear = 1.0 / theta;
      } else {
        do {
          linear = std::polar(rng.uniform(0.2, 2.0), rng.uniform(0, 2 * std::numbers::pi));
        } while (std::abs(theta * linear - 1.0) < 0.05);
      }
      f.comp1 = random_cstar_disc(rng, linear);
      f.comp2 = branch == Branch::Prop3Swapped ? expr::c(random_point_in(f.target2, rng))
                                               : random_disc_into(f.target2, rng);
      break;
    }
  }
  return f;
}

}  // namespace hahn
