#include "hahn/report.hpp"

#include "hahn/counterexample.hpp"
#include "hahn/injectivize.hpp"
#include "hahn/metrics.hpp"
#include "hahn/verify.hpp"

#include "json.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace hahn {

namespace {

using ojson = nlohmann::ordered_json;

ojson cjson(Complex z) { return ojson{{"re", z.real()}, {"im", z.imag()}}; }
ojson cjson(const QComplex& z) { return cjson(to_double(z)); }

ojson aut_json(const QDiscAut& f) { return ojson{{"phase", cjson(f.phase())}, {"center", cjson(f.center())}}; }

ojson residuals_json(const std::vector<Check>& checks) {
  ojson r = ojson::object();
  for (const Check& c : checks) {
    r[c.name] = ojson{{"value", c.value},
                      {"bound", c.bound},
                      {"relation", c.rel == Check::Rel::Below ? "below" : "above"},
                      {"pass", c.pass()}};
  }
  return r;
}

// ------------------------------------------------------------ table text

std::string number_text(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::string scalar_text(const ojson& v) {
  if (v.is_null()) return "null";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer() || v.is_number_unsigned()) return v.dump();
  if (v.is_number()) return number_text(v.get<double>());
  return v.dump();
}

bool is_complex(const ojson& v) { return v.is_object() && v.size() == 2 && v.contains("re") && v.contains("im"); }

std::string complex_text(const ojson& v) {
  const double im = v["im"].is_number() ? v["im"].get<double>() : 0;
  return number_text(v["re"].is_number() ? v["re"].get<double>() : 0) + (im < 0 ? " - " : " + ") +
         number_text(std::abs(im)) + "i";
}

void flatten(const ojson& v, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& rows) {
  if (is_complex(v)) {
    rows.emplace_back(prefix, complex_text(v));
  } else if (v.is_object()) {
    for (const auto& [key, item] : v.items()) flatten(item, prefix.empty() ? key : prefix + "." + key, rows);
  } else if (v.is_array()) {
    const bool scalars = std::all_of(v.begin(), v.end(), [](const ojson& x) { return x.is_primitive(); });
    if (scalars && v.size() > 8) {
      rows.emplace_back(prefix, "[" + std::to_string(v.size()) + " values, last " + scalar_text(v.back()) + "]");
    } else {
      for (std::size_t i = 0; i < v.size(); ++i) flatten(v[i], prefix + "[" + std::to_string(i) + "]", rows);
    }
  } else {
    rows.emplace_back(prefix, scalar_text(v));
  }
}

std::string pad(const std::string& s, std::size_t width) { return s.size() >= width ? s : s + std::string(width - s.size(), ' '); }

std::string render_table(const ojson& doc) {
  std::ostringstream out;
  out << "hahn " << doc["command"].get<std::string>() << "    verdict: "
      << (doc["verdict"] == "pass" ? "PASS" : "FAIL") << "\n";
  for (const char* section : {"inputs", "outputs"}) {
    std::vector<std::pair<std::string, std::string>> rows;
    flatten(doc[section], "", rows);
    if (rows.empty()) continue;
    std::size_t width = 0;
    for (const auto& r : rows) width = std::max(width, r.first.size());
    out << "\n" << section << "\n";
    for (const auto& [k, v] : rows) out << "  " << pad(k, width) << "  " << v << "\n";
  }
  const ojson& res = doc["residuals"];
  if (!res.empty()) {
    std::size_t width = 5;
    for (const auto& [name, _] : res.items()) width = std::max(width, name.size());
    out << "\nchecks\n  " << pad("check", width) << "  " << pad("value", 14) << "   " << pad("bound", 10) << "  result\n";
    for (const auto& [name, c] : res.items()) {
      const bool below = c["relation"] == "below";
      out << "  " << pad(name, width) << "  " << pad(scalar_text(c["value"]), 14) << (below ? " < " : " > ")
          << pad(scalar_text(c["bound"]), 10) << "  " << (c["pass"].get<bool>() ? "ok" : "FAIL") << "\n";
    }
  }
  return out.str();
}

Report finish(ojson inputs, ojson outputs, const std::vector<Check>& checks, const std::string& command,
              bool extra_pass = true) {
  const bool passed = extra_pass && all_pass(checks);
  ojson doc;
  doc["schema_version"] = kSchemaVersion;
  doc["command"] = command;
  doc["inputs"] = std::move(inputs);
  doc["outputs"] = std::move(outputs);
  doc["residuals"] = residuals_json(checks);
  doc["verdict"] = passed ? "pass" : "fail";
  Report r;
  r.command = command;
  r.json = doc.dump(2) + "\n";
  r.table = render_table(doc);
  r.passed = passed;
  return r;
}

}  // namespace

Complex parse_complex_literal(std::string_view text) {
  if (text.find('z') != std::string_view::npos) fail(ErrorKind::Input, "expected a complex literal such as 0.0+0.5i");
  return parse(text).value(Complex(0));
}

Report classify_report(std::string_view d1, std::string_view d2) {
  const PlanarDomain a = PlanarDomain::parse(d1), b = PlanarDomain::parse(d2);
  const EqualityVerdict v = classify_product(a, b);
  ojson outputs{{"equal", v.equal()}, {"case", to_string(v.which)}, {"witness", v.witness}};
  return finish({{"d1", a.descriptor()}, {"d2", b.descriptor()}}, std::move(outputs), {}, "classify");
}

Report injectivize_report(std::string_view disc_pair_json, double theta, std::uint64_t seed) {
  const DiscPair f = DiscPair::from_json(disc_pair_json);
  InjectivityOptions options;
  options.seed = seed;
  const InjectivizationResult res = injectivize(f, theta, options);
  const bool prop3 = res.branch == Branch::Prop3General || res.branch == Branch::Prop3Unit ||
                     res.branch == Branch::Prop3Swapped;

  ojson g{{"comp1", res.g.comp1.render()},
          {"comp2", res.g.comp2.render()},
          {"target1", res.g.target1.descriptor()},
          {"target2", res.g.target2.descriptor()}};
  ojson params = ojson::object();
  switch (res.branch) {
    case Branch::Prop2Case1:
      params["lambda"] = cjson(res.lambda);
      break;
    case Branch::Prop2Case2:
    case Branch::Prop3Swapped:
      params["M"] = res.big_m;
      params["d"] = res.d;
      break;
    case Branch::Prop3General:
      params["M"] = res.big_m;
      params["k"] = res.k;
      params["c_k"] = cjson(res.c_k);
      break;
    case Branch::Prop3Unit:
      break;
  }
  const InjectivityReport& inj = res.injectivity;
  ojson windings = ojson::array();
  for (const WindingSample& w : inj.windings) {
    windings.push_back({{"component", w.component}, {"target", cjson(w.target)}, {"winding", w.winding}});
  }
  ojson outputs{{"branch", to_string(res.branch)},
                {"components_swapped", res.components_swapped},
                {"g", std::move(g)},
                {"parameters", std::move(params)},
                {"injectivity",
                 {{"points", inj.points},
                  {"pairs", inj.pairs},
                  {"collisions", inj.collisions},
                  {"min_separation_ratio", inj.min_separation_ratio},
                  {"windings", std::move(windings)}}}};
  if (prop3) outputs["injectivity"]["min_modulus"] = inj.min_modulus;
  const bool ball = res.branch == Branch::Prop2Case2 || res.branch == Branch::Prop3Swapped;
  if (ball) outputs["containment_ratio"] = res.containment_ratio;

  std::vector<Check> checks{Check::below("|g(0) - f(0)|", res.value_residual, kJetTolerance),
                            Check::below("|g'(0) - theta f'(0)|", res.derivative_residual, kJetTolerance),
                            Check::below("collisions", inj.collisions, 0.5),
                            Check::below("injectivity verifier failures", inj.passed ? 0 : 1, 0.5)};
  if (ball) {
    checks.push_back(Check::below("max |g - f(0)| / d on the ball factor", res.containment_ratio, 1));
  }
  if (prop3) checks.push_back(Check::above("min sampled modulus of the C* factor", inj.min_modulus, 0));

  ojson inputs{{"disc_pair", ojson::parse(f.to_json())}, {"theta", theta}, {"seed", seed}};
  return finish(std::move(inputs), std::move(outputs), checks, "injectivize", res.passed);
}

Report counterexample_report(std::string_view d1, std::string_view d2, std::optional<Complex> a) {
  const PlanarDomain p1 = PlanarDomain::parse(d1), p2 = PlanarDomain::parse(d2);
  const Certificate cert = certify(p1, p2, a);
  const CertificateEvidence ev = certificate_evidence(cert);

  ojson persistence = ojson::array();
  for (const PersistenceResult& p : ev.persistence) {
    persistence.push_back({{"delta", p.delta},
                           {"converged", p.converged},
                           {"iterations", p.iterations},
                           {"continuation_stages", p.continuation_stages},
                           {"residual", p.residual},
                           {"displacement", p.displacement},
                           {"constant_c", p.constant_c},
                           {"u_radius", p.u_radius},
                           {"z1", cjson(p.z1)},
                           {"z2", cjson(p.z2)},
                           {"trace", p.trace}});
  }
  ojson outputs{{"branch", to_string(cert.branch)},
                {"level", to_double(cert.level)},
                {"one_minus_level", to_double(QReal(1 - cert.level))},
                {"d", to_double(cert.d)},
                {"c", to_double(cert.c)},
                {"z1", cjson(cert.z1)},
                {"z2", cjson(cert.z2)},
                {"s1", cjson(cert.s1)},
                {"s2", cjson(cert.s2)},
                {"q1", cjson(cert.q1)},
                {"q2", cjson(cert.q2)},
                {"q1_hp", to_string_hp(cert.q1)},
                {"q2_hp", to_string_hp(cert.q2)},
                {"phi1", aut_json(cert.phi1)},
                {"phi2", aut_json(cert.phi2)},
                {"det_value", cjson(cert.det_direct)},
                {"det_abs", to_double(QReal(abs(cert.det_direct)))},
                {"det_simplified", cjson(cert.det_simplified)}};
  if (cert.branch == CertificateBranch::Direct) {
    outputs["determinant_variant"] = cert.determinant_variant;
    outputs["minus_id_component"] = cert.minus_id_component;
  } else {
    outputs["a"] = cjson(*cert.a);
    outputs["margin_minus"] = cert.margin_minus;
    outputs["margin_plus"] = cert.margin_plus;
  }
  outputs["transversality"] = {{"jacobian", cjson(ev.jacobian)}};
  outputs["persistence"] = std::move(persistence);

  std::vector<Check> checks = cert.checks;
  checks.insert(checks.end(), ev.checks.begin(), ev.checks.end());
  ojson inputs{{"d1", p1.descriptor()}, {"d2", p2.descriptor()}};
  inputs["a"] = a ? cjson(*a) : ojson(nullptr);
  return finish(std::move(inputs), std::move(outputs), checks, "counterexample");
}

Report verify_report(std::string_view suite, std::uint64_t seed) {
  const std::vector<SuiteResult> results = run_verify(suite, seed);
  ojson suites = ojson::array();
  std::vector<Check> checks;
  for (const SuiteResult& s : results) {
    suites.push_back({{"name", s.name}, {"checks", s.checks.size()}, {"passed", s.passed()}});
    for (const Check& c : s.checks) checks.push_back({s.name + "/" + c.name, c.value, c.bound, c.rel});
  }
  return finish({{"suite", std::string(suite)}, {"seed", seed}}, {{"suites", std::move(suites)}}, checks, "verify");
}

}  // namespace hahn
