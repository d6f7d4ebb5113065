#include <algorithm>
#include <cctype>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pnglab/errors.hpp"
#include "pnglab/experiment.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kCertificateError = 3;

// "--s -6:3:0.05" would otherwise read as a short option named 6
std::vector<std::string> join_negative_values(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a.rfind("--", 0) == 0 && a.find('=') == std::string::npos && i + 1 < argc) {
      const std::string next = argv[i + 1];
      if (next.size() > 1 && next[0] == '-' && (std::isdigit(static_cast<unsigned char>(next[1])) || next[1] == '.')) {
        a += "=" + next;
        ++i;
      }
    }
    args.push_back(a);
  }
  return args;
}

const char* describe(pnglab::ExperimentKind k) {
  using pnglab::ExperimentKind;
  switch (k) {
    case ExperimentKind::PngHeight: return "sample the half-flat PNG height at time 2N";
    case ExperimentKind::PngLayers: return "sample one multilayer configuration";
    case ExperimentKind::RmtEdge: return "sample the largest eigenvalue of a Gaussian ensemble";
    case ExperimentKind::RmtDyson: return "sample largest eigenvalues along a Dyson Brownian chain";
    case ExperimentKind::DistEval: return "evaluate a one-point distribution on a grid";
    case ExperimentKind::DistJoint: return "evaluate a multi-time distribution on a grid";
    case ExperimentKind::Compare: return "compare a sample file with a reference law";
  }
  return "";
}

void print_summary(std::ostream& os, const pnglab::Report& r) {
  os << r.description << '\n';
  for (const auto& [k, v] : r.summary) os << "  " << k << ": " << v << '\n';
  if (!r.certified) os << "  certificate failure: " << r.failure << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  using namespace pnglab;
  CLI::App app{"pnglab: PNG growth, random matrices and Fredholm determinants"};
  app.require_subcommand(1);

  struct Sub {
    ExperimentKind kind;
    CLI::App* app;
    std::map<std::string, std::string> values;
    std::string config;
    bool finite_n = false;
  };
  std::vector<Sub> subs;
  subs.reserve(all_experiments().size());
  for (ExperimentKind k : all_experiments()) {
    subs.push_back({k, nullptr, {}, {}, false});
  }
  for (Sub& s : subs) {
    s.app = app.add_subcommand(to_string(s.kind), describe(s.kind));
    for (const ParameterSpec& p : parameter_specs(s.kind)) {
      std::string help = p.help;
      if (!p.default_value.empty()) help += " [default " + p.default_value + "]";
      if (p.required) help += " (required)";
      s.app->add_option_function<std::string>("--" + p.key, [&s, key = p.key](const std::string& v) { s.values[key] = v; },
                                              help);
    }
    s.app->add_option("--config", s.config, "flat key = value file; flags override it");
    if (s.kind == ExperimentKind::DistJoint) s.app->add_flag("--finite-n", s.finite_n, "same as --kernel finite-n");
  }

  std::vector<std::string> args = join_negative_values(argc, argv);
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  for (Sub& s : subs) {
    if (!s.app->parsed()) continue;
    try {
      ExperimentConfig cfg;
      cfg.experiment = s.kind;
      if (!s.config.empty()) cfg.parameters = read_config_file(s.config);
      for (const auto& [k, v] : s.values) cfg.parameters[k] = v;
      if (s.finite_n) cfg.parameters["kernel"] = "finite-n";

      const Report report = run_experiment(cfg);
      const std::string out = cfg.has("out") ? cfg.get("out") : "";
      if (out.empty()) {
        write_report(report, std::cout, cfg.format());
        print_summary(std::cerr, report);
      } else {
        write_report_file(report, out, cfg.format());
        print_summary(std::cout, report);
      }
      return report.certified ? 0 : kCertificateError;
    } catch (const ConfigurationError& e) {
      std::cerr << "configuration error: " << e.what() << '\n';
      return kConfigError;
    } catch (const DomainError& e) {
      std::cerr << "configuration error: " << e.what() << '\n';
      return kConfigError;
    } catch (const AccuracyError& e) {
      std::cerr << "certificate failure: " << e.what() << '\n';
      return kCertificateError;
    } catch (const NumericError& e) {
      std::cerr << "numeric failure: " << e.what() << '\n';
      return kCertificateError;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return 1;
    }
  }
  return kConfigError;
}
