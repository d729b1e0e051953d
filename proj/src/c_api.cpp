#include "hahn.h"

#include "hahn/holo_expr.hpp"
#include "hahn/report.hpp"

#include <exception>
#include <new>
#include <string>

struct hahn_report {
  hahn::Report report;
};

struct hahn_expr {
  hahn::HoloExpr expr;
  std::string text;
};

namespace {

thread_local std::string last_error;

hahn_status status_of(hahn::ErrorKind kind) {
  switch (kind) {
    case hahn::ErrorKind::Input:
      return HAHN_E_INPUT;
    case hahn::ErrorKind::Degenerate:
      return HAHN_E_DEGENERATE;
    case hahn::ErrorKind::TheoremCase:
      return HAHN_E_THEOREM_CASE;
    case hahn::ErrorKind::Region:
      return HAHN_E_REGION;
    case hahn::ErrorKind::Numeric:
      return HAHN_E_NUMERIC;
  }
  return HAHN_E_INTERNAL;
}

template <class F> hahn_status guarded(F&& body) {
  last_error.clear();
  try {
    return body();
  } catch (const hahn::Error& e) {
    last_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
  } catch (const std::exception& e) {
    last_error = e.what();
  } catch (...) {
    last_error = "unknown failure";
  }
  return HAHN_E_INTERNAL;
}

hahn_status need(const void* p, const char* what) {
  if (p) return HAHN_OK;
  last_error = std::string(what) + " must not be NULL";
  return HAHN_E_INPUT;
}

template <class Make> hahn_status emit(hahn_report** out, Make&& make) {
  if (!out) return need(out, "output handle");
  *out = nullptr;
  return guarded([&] {
    auto* r = new hahn_report{make()};
    *out = r;
    return r->report.passed ? HAHN_OK : HAHN_VERIFY_FAILED;
  });
}

}  // namespace

extern "C" {

const char* hahn_version(void) { return "1.0.0"; }

const char* hahn_last_error(void) { return last_error.c_str(); }

const char* hahn_status_name(hahn_status status) {
  switch (status) {
    case HAHN_OK:
      return "ok";
    case HAHN_VERIFY_FAILED:
      return "verification failed";
    case HAHN_E_INPUT:
      return "input error";
    case HAHN_E_DEGENERATE:
      return "degenerate input";
    case HAHN_E_THEOREM_CASE:
      return "theorem case mismatch";
    case HAHN_E_REGION:
      return "outside analyticity region";
    case HAHN_E_NUMERIC:
      return "numerical failure";
    case HAHN_E_INTERNAL:
      break;
  }
  return "internal error";
}

hahn_status hahn_classify(const char* d1, const char* d2, hahn_report** out) {
  if (!d1 || !d2) return need(nullptr, "domain descriptor");
  return emit(out, [&] { return hahn::classify_report(d1, d2); });
}

hahn_status hahn_injectivize(const char* disc_pair_json, double theta, uint64_t seed, hahn_report** out) {
  if (!disc_pair_json) return need(nullptr, "disc pair");
  return emit(out, [&] { return hahn::injectivize_report(disc_pair_json, theta, seed); });
}

hahn_status hahn_counterexample(const char* d1, const char* d2, const char* a, hahn_report** out) {
  if (!d1 || !d2) return need(nullptr, "domain descriptor");
  return emit(out, [&] {
    std::optional<hahn::Complex> av;
    if (a) av = hahn::parse_complex_literal(a);
    return hahn::counterexample_report(d1, d2, av);
  });
}

hahn_status hahn_verify(const char* suite, uint64_t seed, hahn_report** out) {
  if (!suite) return need(nullptr, "suite");
  return emit(out, [&] { return hahn::verify_report(suite, seed); });
}

const char* hahn_report_json(const hahn_report* report) { return report ? report->report.json.c_str() : ""; }
const char* hahn_report_table(const hahn_report* report) { return report ? report->report.table.c_str() : ""; }
int hahn_report_passed(const hahn_report* report) { return report && report->report.passed ? 1 : 0; }
void hahn_report_free(hahn_report* report) { delete report; }

hahn_status hahn_expr_parse(const char* text, hahn_expr** out) {
  if (!out) return need(out, "output handle");
  *out = nullptr;
  if (!text) return need(nullptr, "expression text");
  return guarded([&] {
    hahn::HoloExpr e = hahn::parse(text);
    std::string rendered = e.render();
    *out = new hahn_expr{std::move(e), std::move(rendered)};
    return HAHN_OK;
  });
}

hahn_status hahn_expr_eval(const hahn_expr* expr, double re, double im, double out[6]) {
  if (!expr) return need(nullptr, "expression");
  if (!out) return need(nullptr, "output array");
  return guarded([&] {
    const hahn::Jet2 j = hahn::eval_jet(expr->expr, {re, im}, 2);
    const hahn::Complex parts[3] = {j.value, j.d1, j.d2};
    for (int k = 0; k < 3; ++k) {
      out[2 * k] = parts[k].real();
      out[2 * k + 1] = parts[k].imag();
    }
    return HAHN_OK;
  });
}

const char* hahn_expr_render(const hahn_expr* expr) { return expr ? expr->text.c_str() : ""; }

void hahn_expr_free(hahn_expr* expr) { delete expr; }

}  // extern "C"
