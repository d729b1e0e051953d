#include "hahn/holo_expr.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace hahn {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

struct Node {
  NodeKind kind = NodeKind::Variable;
  Complex c0{};  // constant value, Moebius centre, affine slope
  Complex c1{};  // affine offset
  double r = 0;  // annulus inner radius
  int power = 0;
  std::shared_ptr<const Node> a, b;
  double radius = kInf;
  double denominator_min = std::numeric_limits<double>::quiet_NaN();
};

namespace {

using NodePtr = std::shared_ptr<const Node>;

bool node_is_constant(const Node& n) {
  switch (n.kind) {
    case NodeKind::Variable:
      return false;
    case NodeKind::Constant:
      return true;
    case NodeKind::Compose:
      return node_is_constant(*n.a) || node_is_constant(*n.b);
    default:
      return (!n.a || node_is_constant(*n.a)) && (!n.b || node_is_constant(*n.b));
  }
}

// Affine-in-z view: returns true with (alpha, beta) when n == alpha*z + beta.
bool affine_in_z(const Node& n, Complex& alpha, Complex& beta) {
  if (n.kind == NodeKind::Variable) {
    alpha = 1.0;
    beta = 0.0;
    return true;
  }
  if (n.kind == NodeKind::Constant) {
    alpha = 0.0;
    beta = n.c0;
    return true;
  }
  if (n.kind == NodeKind::Affine) {
    Complex a, b;
    if (!affine_in_z(*n.a, a, b)) return false;
    alpha = n.c0 * a;
    beta = n.c0 * b + n.c1;
    return true;
  }
  return false;
}

// ---------------------------------------------------------------- evaluation

template <class C> [[noreturn]] void region_fail(const char* what) {
  throw Error(ErrorKind::Region, what);
}

template <class C> C checked(const C& v, const char* what) {
  if (!is_finite(v)) region_fail<C>(what);
  return v;
}

template <class C> Jet<C> apply_unary(const C& f0, const C& f1, const C& f2, const Jet<C>& in) {
  return {f0, f1 * in.d1, f2 * in.d1 * in.d1 + f1 * in.d2};
}

template <class C> C int_pow(C base, int k) {
  C result(1);
  while (k > 0) {
    if (k & 1) result *= base;
    base *= base;
    k >>= 1;
  }
  return result;
}

// (p, p', p'') of the punctured-disc covering at w.
template <class C> void pdisc_terms(const C& w, C& p0, C& p1, C& p2) {
  using std::abs;
  using std::exp;
  if (!(abs(w) < 1)) region_fail<C>("cover_pdisc argument outside the unit disc");
  const C one(1);
  const C den = one - w;
  const C u = -(one + w) / den;
  const C u1 = C(-2) / (den * den);
  const C u2 = C(-4) / (den * den * den);
  p0 = exp(u);
  p1 = p0 * u1;
  p2 = p0 * (u1 * u1 + u2);
}

template <class C> void annulus_terms(double r_in, const C& w, C& p0, C& p1, C& p2) {
  using std::abs;
  using std::exp;
  using std::log;
  using R = real_of_t<C>;
  if (!(abs(w) < 1)) region_fail<C>("cover_annulus argument outside the unit disc");
  const R r(r_in);
  const C one(1);
  const C i(0, 1);
  const C beta = C(0, -log(r) / pi_v<R>());
  const C den = one - w;
  const C c0 = i * (one + w) / den;
  const C c1 = C(0, 2) / (den * den);
  const C c2 = C(0, 4) / (den * den * den);
  const C l0 = log(c0);
  const C l1 = c1 / c0;
  const C l2 = c2 / c0 - l1 * l1;
  p0 = exp(beta * l0);
  p1 = p0 * beta * l1;
  p2 = p0 * (beta * beta * l1 * l1 + beta * l2);
}

template <class C> Jet<C> eval_node(const Node& n, const Jet<C>& in) {
  using std::abs;
  using std::conj;
  using std::exp;
  switch (n.kind) {
    case NodeKind::Variable:
      return in;
    case NodeKind::Constant:
      return {lift<C>(n.c0), C(0), C(0)};
    case NodeKind::Add: {
      const auto x = eval_node(*n.a, in);
      const auto y = eval_node(*n.b, in);
      return {x.value + y.value, x.d1 + y.d1, x.d2 + y.d2};
    }
    case NodeKind::Sub: {
      const auto x = eval_node(*n.a, in);
      const auto y = eval_node(*n.b, in);
      return {x.value - y.value, x.d1 - y.d1, x.d2 - y.d2};
    }
    case NodeKind::Neg: {
      const auto x = eval_node(*n.a, in);
      return {-x.value, -x.d1, -x.d2};
    }
    case NodeKind::Mul: {
      const auto x = eval_node(*n.a, in);
      const auto y = eval_node(*n.b, in);
      return {x.value * y.value, x.d1 * y.value + x.value * y.d1,
              x.d2 * y.value + C(2) * x.d1 * y.d1 + x.value * y.d2};
    }
    case NodeKind::Div: {
      const auto x = eval_node(*n.a, in);
      const auto y = eval_node(*n.b, in);
      if (abs(y.value) == 0) region_fail<C>("division by zero (pole)");
      const C q = x.value / y.value;
      const C q1 = (x.d1 - q * y.d1) / y.value;
      const C q2 = (x.d2 - C(2) * q1 * y.d1 - q * y.d2) / y.value;
      return {checked(q, "non-finite quotient"), q1, q2};
    }
    case NodeKind::Pow: {
      const auto x = eval_node(*n.a, in);
      const int k = n.power;
      if (k == 0) return {C(1), C(0), C(0)};
      const C f1 = C(k) * int_pow(x.value, k - 1);
      const C f2 = k >= 2 ? C(k) * C(k - 1) * int_pow(x.value, k - 2) : C(0);
      return apply_unary(int_pow(x.value, k), f1, f2, x);
    }
    case NodeKind::Exp: {
      const auto x = eval_node(*n.a, in);
      const C e = checked(exp(x.value), "exp overflow");
      return apply_unary(e, e, e, x);
    }
    case NodeKind::Moebius: {
      const auto x = eval_node(*n.a, in);
      const C a = lift<C>(n.c0);
      const C den = C(1) - conj(a) * x.value;
      if (abs(den) == 0) region_fail<C>("moebius pole");
      const C s = C(1) - a * conj(a);
      return apply_unary((x.value - a) / den, s / (den * den), C(2) * conj(a) * s / (den * den * den), x);
    }
    case NodeKind::Affine: {
      const auto x = eval_node(*n.a, in);
      const C alpha = lift<C>(n.c0);
      return {alpha * x.value + lift<C>(n.c1), alpha * x.d1, alpha * x.d2};
    }
    case NodeKind::Compose:
      return eval_node(*n.a, eval_node(*n.b, in));
    case NodeKind::CoverPdisc: {
      const auto x = eval_node(*n.a, in);
      C p0, p1, p2;
      pdisc_terms(x.value, p0, p1, p2);
      return apply_unary(p0, p1, p2, x);
    }
    case NodeKind::CoverAnnulus: {
      const auto x = eval_node(*n.a, in);
      C p0, p1, p2;
      annulus_terms(n.r, x.value, p0, p1, p2);
      return apply_unary(p0, p1, p2, x);
    }
  }
  region_fail<C>("unknown node");
}

template <class C> C value_node(const Node& n, const C& z) {
  using std::abs;
  using std::conj;
  using std::exp;
  switch (n.kind) {
    case NodeKind::Variable:
      return z;
    case NodeKind::Constant:
      return lift<C>(n.c0);
    case NodeKind::Add:
      return value_node(*n.a, z) + value_node(*n.b, z);
    case NodeKind::Sub:
      return value_node(*n.a, z) - value_node(*n.b, z);
    case NodeKind::Neg:
      return -value_node(*n.a, z);
    case NodeKind::Mul:
      return value_node(*n.a, z) * value_node(*n.b, z);
    case NodeKind::Div: {
      const C y = value_node(*n.b, z);
      if (abs(y) == 0) region_fail<C>("division by zero (pole)");
      return checked(value_node(*n.a, z) / y, "non-finite quotient");
    }
    case NodeKind::Pow:
      return int_pow(value_node(*n.a, z), n.power);
    case NodeKind::Exp:
      return checked(exp(value_node(*n.a, z)), "exp overflow");
    case NodeKind::Moebius: {
      const C w = value_node(*n.a, z);
      const C a = lift<C>(n.c0);
      const C den = C(1) - conj(a) * w;
      if (abs(den) == 0) region_fail<C>("moebius pole");
      return (w - a) / den;
    }
    case NodeKind::Affine:
      return lift<C>(n.c0) * value_node(*n.a, z) + lift<C>(n.c1);
    case NodeKind::Compose:
      return value_node(*n.a, value_node(*n.b, z));
    case NodeKind::CoverPdisc: {
      const C w = value_node(*n.a, z);
      if (!(abs(w) < 1)) region_fail<C>("cover_pdisc argument outside the unit disc");
      return exp(-(C(1) + w) / (C(1) - w));
    }
    case NodeKind::CoverAnnulus: {
      C p0, p1, p2;
      annulus_terms(n.r, value_node(*n.a, z), p0, p1, p2);
      return p0;
    }
  }
  region_fail<C>("unknown node");
}

template <class C> void check_region(const Node& n, const C& z) {
  using std::abs;
  if (std::isfinite(n.radius) && !(abs(z) < real_of_t<C>(n.radius))) {
    throw Error(ErrorKind::Region, "evaluation point outside the analyticity region |z| < " +
                                       std::to_string(n.radius));
  }
  if (!is_finite(z)) throw Error(ErrorKind::Region, "non-finite evaluation point");
}

// ------------------------------------------------------------- construction

NodePtr make(Node n) { return std::make_shared<const Node>(std::move(n)); }

double min_radius(const NodePtr& a, const NodePtr& b = nullptr) {
  double r = a ? a->radius : kInf;
  if (b) r = std::min(r, b->radius);
  return r;
}

// Radius on which inner maps into the disc |w| < outer_radius.
double inner_radius_into(const Node& inner, double outer_radius, const char* what) {
  if (!std::isfinite(outer_radius)) return inner.radius;
  Complex alpha, beta;
  if (affine_in_z(inner, alpha, beta)) {
    if (std::abs(beta) >= outer_radius) {
      throw Error(ErrorKind::Region, std::string(what) + ": constant argument outside the region");
    }
    const double r = std::abs(alpha) == 0 ? kInf : (outer_radius - std::abs(beta)) / std::abs(alpha);
    return std::min(inner.radius, r);
  }
  const double r = std::min(inner.radius, 1.0);
  for (const Complex& s : disc_samples(0.999 * r, kQuotientSamples)) {
    Complex w;
    try {
      w = value_node(inner, s);
    } catch (const Error&) {
      throw Error(ErrorKind::Region, std::string(what) + ": argument not evaluable on the sample disc");
    }
    if (!(std::abs(w) < outer_radius)) {
      throw Error(ErrorKind::Region,
                  std::string(what) + ": sampled argument image leaves the region of the outer map");
    }
  }
  return r;
}

HoloExpr binary(NodeKind kind, const HoloExpr& a, const HoloExpr& b) {
  Node n;
  n.kind = kind;
  n.a = a.node();
  n.b = b.node();
  n.radius = min_radius(n.a, n.b);
  return HoloExpr(make(std::move(n)));
}

HoloExpr unary_on_disc(NodeKind kind, const HoloExpr& arg, const char* what) {
  Node n;
  n.kind = kind;
  n.a = arg.node();
  n.radius = inner_radius_into(*n.a, 1.0, what);
  if (!(n.radius > 0)) throw Error(ErrorKind::Region, std::string(what) + ": empty analyticity region");
  return HoloExpr(make(std::move(n)));
}

// -------------------------------------------------------------------- render

std::string fmt_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt_complex(Complex c) {
  const double re = c.real() == 0 ? 0.0 : c.real();
  const double im = c.imag() == 0 ? 0.0 : c.imag();
  if (im == 0) return re < 0 ? "(" + fmt_real(re) + ")" : fmt_real(re);
  const std::string sign = im < 0 ? "-" : "+";
  return "(" + fmt_real(re) + sign + fmt_real(std::abs(im)) + "i)";
}

std::string render_node(const Node& n, const std::string& var) {
  switch (n.kind) {
    case NodeKind::Variable:
      return var;
    case NodeKind::Constant:
      return fmt_complex(n.c0);
    case NodeKind::Add:
      return "(" + render_node(*n.a, var) + " + " + render_node(*n.b, var) + ")";
    case NodeKind::Sub:
      return "(" + render_node(*n.a, var) + " - " + render_node(*n.b, var) + ")";
    case NodeKind::Mul:
      return "(" + render_node(*n.a, var) + "*" + render_node(*n.b, var) + ")";
    case NodeKind::Div:
      return "(" + render_node(*n.a, var) + "/" + render_node(*n.b, var) + ")";
    case NodeKind::Neg:
      return "(-" + render_node(*n.a, var) + ")";
    case NodeKind::Pow:
      return "(" + render_node(*n.a, var) + ")^" + std::to_string(n.power);
    case NodeKind::Exp:
      return "exp(" + render_node(*n.a, var) + ")";
    case NodeKind::Moebius:
      return "moebius(" + fmt_complex(n.c0) + "; " + render_node(*n.a, var) + ")";
    case NodeKind::Affine:
      return "(" + fmt_complex(n.c0) + "*" + render_node(*n.a, var) + " + " + fmt_complex(n.c1) + ")";
    case NodeKind::Compose:
      return render_node(*n.a, "(" + render_node(*n.b, var) + ")");
    case NodeKind::CoverPdisc:
      return "cover_pdisc(" + render_node(*n.a, var) + ")";
    case NodeKind::CoverAnnulus:
      return "cover_annulus(" + fmt_real(n.r) + "; " + render_node(*n.a, var) + ")";
  }
  return "?";
}

}  // namespace

// ------------------------------------------------------------------ HoloExpr

HoloExpr::HoloExpr() : node_(make(Node{})) {}

HoloExpr HoloExpr::constant(Complex c) {
  if (!is_finite(c)) throw Error(ErrorKind::Input, "non-finite constant");
  Node n;
  n.kind = NodeKind::Constant;
  n.c0 = c;
  return HoloExpr(make(std::move(n)));
}

NodeKind HoloExpr::kind() const { return node_->kind; }
bool HoloExpr::is_constant() const { return node_is_constant(*node_); }
double HoloExpr::analytic_radius() const { return node_->radius; }
double HoloExpr::quotient_certificate() const { return node_->denominator_min; }
std::string HoloExpr::render() const { return render_node(*node_, "z"); }

template <class C> Jet<C> HoloExpr::jet(const C& z) const {
  check_region(*node_, z);
  Jet<C> out = eval_node(*node_, Jet<C>{z, C(1), C(0)});
  if (!is_finite(out.value) || !is_finite(out.d1) || !is_finite(out.d2)) {
    throw Error(ErrorKind::Region, "non-finite jet");
  }
  return out;
}

template <class C> C HoloExpr::value(const C& z) const {
  check_region(*node_, z);
  C out = value_node(*node_, z);
  if (!is_finite(out)) throw Error(ErrorKind::Region, "non-finite value");
  return out;
}

template Jet<Complex> HoloExpr::jet<Complex>(const Complex&) const;
template Jet<QComplex> HoloExpr::jet<QComplex>(const QComplex&) const;
template Complex HoloExpr::value<Complex>(const Complex&) const;
template QComplex HoloExpr::value<QComplex>(const QComplex&) const;

HoloExpr operator+(const HoloExpr& a, const HoloExpr& b) { return binary(NodeKind::Add, a, b); }
HoloExpr operator-(const HoloExpr& a, const HoloExpr& b) { return binary(NodeKind::Sub, a, b); }
HoloExpr operator*(const HoloExpr& a, const HoloExpr& b) { return binary(NodeKind::Mul, a, b); }

HoloExpr operator/(const HoloExpr& a, const HoloExpr& b) {
  Node n;
  n.kind = NodeKind::Div;
  n.a = a.node();
  n.b = b.node();
  n.radius = min_radius(n.a, n.b);
  if (b.is_constant()) {
    const Complex den = value_node(*n.b, Complex(0));
    if (std::abs(den) == 0) throw Error(ErrorKind::Region, "division by the zero constant");
    n.denominator_min = std::abs(den);
  } else {
    n.radius = std::min(n.radius, 1.0);
    double smallest = kInf;
    for (const Complex& s : disc_samples(0.999 * n.radius, kQuotientSamples)) {
      Complex den;
      try {
        den = value_node(*n.b, s);
      } catch (const Error&) {
        throw Error(ErrorKind::Region, "denominator not evaluable on the certificate disc");
      }
      const double m = std::abs(den);
      if (!(m > 0) || !std::isfinite(m)) {
        throw Error(ErrorKind::Region, "denominator vanishes on the certificate disc");
      }
      smallest = std::min(smallest, m);
    }
    n.denominator_min = smallest;
  }
  return HoloExpr(make(std::move(n)));
}

HoloExpr operator-(const HoloExpr& a) {
  Node n;
  n.kind = NodeKind::Neg;
  n.a = a.node();
  n.radius = a.analytic_radius();
  return HoloExpr(make(std::move(n)));
}

namespace expr {

HoloExpr z() { return HoloExpr(); }
HoloExpr c(Complex value) { return HoloExpr::constant(value); }

HoloExpr pow(const HoloExpr& base, int exponent) {
  if (exponent < 0) throw Error(ErrorKind::Input, "negative integer power");
  Node n;
  n.kind = NodeKind::Pow;
  n.a = base.node();
  n.power = exponent;
  n.radius = base.analytic_radius();
  return HoloExpr(make(std::move(n)));
}

HoloExpr exp(const HoloExpr& arg) {
  Node n;
  n.kind = NodeKind::Exp;
  n.a = arg.node();
  n.radius = arg.analytic_radius();
  return HoloExpr(make(std::move(n)));
}

HoloExpr moebius(Complex a, const HoloExpr& arg) {
  if (!is_finite(a) || !(std::abs(a) < 1)) throw Error(ErrorKind::Input, "moebius centre must lie in the unit disc");
  HoloExpr out = unary_on_disc(NodeKind::Moebius, arg, "moebius");
  auto n = std::make_shared<Node>(*out.node());
  n->c0 = a;
  return HoloExpr(std::shared_ptr<const Node>(std::move(n)));
}

HoloExpr affine(Complex alpha, Complex beta, const HoloExpr& arg) {
  if (!is_finite(alpha) || !is_finite(beta)) throw Error(ErrorKind::Input, "non-finite affine coefficients");
  Node n;
  n.kind = NodeKind::Affine;
  n.c0 = alpha;
  n.c1 = beta;
  n.a = arg.node();
  n.radius = arg.analytic_radius();
  return HoloExpr(make(std::move(n)));
}

HoloExpr cover_pdisc(const HoloExpr& arg) { return unary_on_disc(NodeKind::CoverPdisc, arg, "cover_pdisc"); }

HoloExpr cover_annulus(double r, const HoloExpr& arg) {
  if (!(r > 0 && r < 1)) throw Error(ErrorKind::Input, "annulus radius must lie in (0, 1)");
  HoloExpr out = unary_on_disc(NodeKind::CoverAnnulus, arg, "cover_annulus");
  auto n = std::make_shared<Node>(*out.node());
  n->r = r;
  return HoloExpr(std::shared_ptr<const Node>(std::move(n)));
}

}  // namespace expr

HoloExpr compose(const HoloExpr& f, const HoloExpr& g) {
  Node n;
  n.kind = NodeKind::Compose;
  n.a = f.node();
  n.b = g.node();
  n.radius = inner_radius_into(*n.b, f.analytic_radius(), "compose");
  if (!(n.radius > 0)) throw Error(ErrorKind::Region, "compose: empty analyticity region");
  return HoloExpr(make(std::move(n)));
}

Jet2 eval_jet(const HoloExpr& f, Complex z, int order) {
  if (order != 1 && order != 2) throw Error(ErrorKind::Input, "jet order must be 1 or 2");
  Jet2 j = f.jet(z);
  if (order == 1) j.d2 = 0;
  return j;
}

double boundary_max_modulus(const HoloExpr& f, double radius, int samples) {
  if (samples < 64) throw Error(ErrorKind::Input, "boundary_max_modulus needs at least 64 samples");
  if (!(radius > 0) || !std::isfinite(radius)) throw Error(ErrorKind::Input, "radius must be positive");
  if (!(radius < f.analytic_radius())) {
    throw Error(ErrorKind::Region, "closed disc of radius " + std::to_string(radius) +
                                       " is not inside the analyticity region");
  }
  double m = 0;
  for (int k = 0; k < samples; ++k) {
    const double t = 2 * std::numbers::pi * k / samples;
    m = std::max(m, std::abs(f.value(std::polar(radius, t))));
  }
  return m * (1 + kBoundaryInflation);
}

std::vector<Complex> disc_samples(double radius, int count) {
  std::vector<Complex> out;
  out.reserve(count);
  const int rings = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(count))));
  const int per_ring = std::max(1, count / rings);
  out.emplace_back(0.0, 0.0);
  for (int i = 1; i <= rings && static_cast<int>(out.size()) < count; ++i) {
    const double rho = radius * i / rings;
    for (int k = 0; k < per_ring && static_cast<int>(out.size()) < count; ++k) {
      const double t = 2 * std::numbers::pi * (k + 0.5 * (i % 2)) / per_ring;
      out.push_back(std::polar(rho, t));
    }
  }
  return out;
}

std::string to_string_hp(const QReal& x) {
  std::ostringstream os;
  os << std::setprecision(36) << x;
  return os.str();
}

std::string to_string_hp(const QComplex& z) {
  return to_string_hp(z.real()) + (z.imag() < 0 ? "" : "+") + to_string_hp(z.imag()) + "i";
}

}  // namespace hahn
