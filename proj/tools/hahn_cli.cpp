// hahn: command-line front end over the C interface in hahn.h.
//
// Exit codes: 0 pass, 1 verification failure, 2 input error,
// 3 degenerate mathematical input, 4 theorem-case mismatch.

#include "hahn.h"

#include "CLI11.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

int exit_code(hahn_status s) {
  switch (s) {
    case HAHN_OK:
      return 0;
    case HAHN_E_INPUT:
    case HAHN_E_REGION:
      return 2;
    case HAHN_E_DEGENERATE:
      return 3;
    case HAHN_E_THEOREM_CASE:
      return 4;
    default:
      return 1;
  }
}

struct Output {
  std::string out_path;
  bool json = false;
};

int deliver(hahn_status status, hahn_report* report, const Output& o) {
  if (!report) {
    std::cerr << "hahn: " << hahn_status_name(status) << ": " << hahn_last_error() << "\n";
    return exit_code(status);
  }
  int code = exit_code(status);
  if (!o.out_path.empty()) {
    std::ofstream f(o.out_path, std::ios::binary);
    f << hahn_report_json(report);
    if (!f) {
      std::cerr << "hahn: cannot write " << o.out_path << "\n";
      code = 2;
    }
  }
  std::cout << (o.json ? hahn_report_json(report) : hahn_report_table(report));
  hahn_report_free(report);
  return code;
}

bool read_file(const std::string& path, std::string& text) {
  std::ifstream f(path, std::ios::binary);
  if (!f) return false;
  std::ostringstream ss;
  ss << f.rdbuf();
  text = ss.str();
  return true;
}

void output_flags(CLI::App* cmd, Output& o) {
  cmd->add_option("--out", o.out_path, "Write the JSON report to this path");
  cmd->add_flag("--json", o.json, "Print the JSON report instead of the table");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hahn and Kobayashi-Royden pseudometrics on planar products"};
  app.set_version_flag("--version", std::string(hahn_version()));
  app.require_subcommand(1);

  Output out;
  std::string d1, d2, a, pair_path, suite = "all";
  double theta = 0.5;
  std::uint64_t seed = 0;

  CLI::App* classify = app.add_subcommand("classify", "Decide whether the Hahn and Kobayashi metrics agree on D1 x D2");
  classify->add_option("--d1", d1, "First factor descriptor")->required();
  classify->add_option("--d2", d2, "Second factor descriptor")->required();
  output_flags(classify, out);

  CLI::App* inj = app.add_subcommand("injectivize", "Injective disc with the 1-jet of theta * f");
  inj->add_option("disc_pair", pair_path, "Disc-pair JSON file")->required();
  inj->add_option("--theta", theta, "Scaling factor in (0, 1)");
  inj->add_option("--seed", seed, "Seed of the injectivity sampler");
  output_flags(inj, out);

  CLI::App* cex = app.add_subcommand("counterexample", "Certificate that the metrics differ on D1 x D2");
  cex->add_option("--d1", d1, "First factor descriptor")->required();
  cex->add_option("--d2", d2, "Second factor descriptor")->required();
  cex->add_option("--a", a, "Non-real point of E for the reduced branch, e.g. 0.0+0.5i");
  output_flags(cex, out);

  CLI::App* ver = app.add_subcommand("verify", "Run the invariant suites");
  ver->add_option("--suite", suite, "auts | coverings | metrics | injectivize | counterexample | all");
  ver->add_option("--seed", seed, "Seed of every sampler");
  output_flags(ver, out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  hahn_report* report = nullptr;
  hahn_status status = HAHN_OK;
  if (*classify) {
    status = hahn_classify(d1.c_str(), d2.c_str(), &report);
  } else if (*inj) {
    std::string text;
    if (!read_file(pair_path, text)) {
      std::cerr << "hahn: cannot read " << pair_path << "\n";
      return 2;
    }
    status = hahn_injectivize(text.c_str(), theta, seed, &report);
  } else if (*cex) {
    status = hahn_counterexample(d1.c_str(), d2.c_str(), cex->count("--a") ? a.c_str() : nullptr, &report);
  } else {
    status = hahn_verify(suite.c_str(), seed, &report);
  }
  return deliver(status, report, out);
}
