#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "otelbaev/otelbaev.hpp"

using namespace otelbaev;

namespace {

Measure load_measure(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw InvalidInput(path + ": cannot open measure file");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(is);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidInput(path + ": JSON parse error at byte " + std::to_string(e.byte));
  }
  return scenario_measure(j, path);
}

int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code::bad_input;
  } catch (const NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return exit_code::numerical_failure;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Otelbaev-function spectral estimates for Schrodinger operators with measure potentials"};
  app.set_version_flag("--version", std::string(OTELBAEV_VERSION));
  app.require_subcommand(1);

  std::string scenario, out_dir;
  unsigned threads = 1;
  double tol = 0.0;
  auto* run = app.add_subcommand("run", "run a scenario file and write CSV/JSON reports");
  run->add_option("scenario", scenario, "scenario JSON file")->required();
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--threads", threads, "worker threads")->check(CLI::Range(1u, 1024u));
  auto* run_tol = run->add_option("--tol", tol, "eigenvalue bisection tolerance")->check(CLI::PositiveNumber);

  std::string measure_path;
  double alpha = 2.0, from = 0.0, to = 0.0, step = 0.0;
  auto* eval = app.add_subcommand("eval", "print x, d_alpha, q*_alpha on a grid");
  eval->add_option("--measure", measure_path, "measure JSON file")->required();
  eval->add_option("--alpha", alpha, "alpha")->required()->check(CLI::PositiveNumber);
  eval->add_option("--from", from, "first x")->required();
  eval->add_option("--to", to, "last x")->required();
  eval->add_option("--step", step, "grid step")->required()->check(CLI::PositiveNumber);

  double spec_tol = 1e-12;
  auto* spectrum = app.add_subcommand("spectrum", "print the negative eigenvalues");
  spectrum->add_option("--measure", measure_path, "measure JSON file")->required();
  spectrum->add_option("--tol", spec_tol, "bisection tolerance in kappa")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_code::bad_input;
  }

  if (*run) {
    RunOptions opt;
    opt.out_dir = out_dir;
    opt.threads = threads;
    if (*run_tol) opt.tol = tol;
    const RunResult r = run_scenario(scenario, opt);
    if (!r.message.empty()) std::cerr << r.message << "\n";
    if (!r.out_dir.empty() && r.exit != exit_code::bad_input)
      std::cout << "pass " << r.pass << " fail " << r.fail << " cross-check failures " << r.check_fail << " -> "
                << r.out_dir << "\n";
    return r.exit;
  }
  if (*eval) {
    return guarded([&] {
      if (!(from <= to)) throw InvalidInput("--from must not exceed --to");
      if ((to - from) / step > 1e8) throw InvalidInput("grid has more than 1e8 points");
      const Measure m = load_measure(measure_path);
      std::cout << "x,d,q,err\n";
      const auto n = static_cast<long long>(std::floor((to - from) / step + 1e-9));
      for (long long i = 0; i <= n; ++i) {
        const double x = from + static_cast<double>(i) * step;
        const auto p = eval_point(m, alpha, x);
        std::cout << format_double(x) << ',' << format_double(p.d) << ',' << format_double(p.q) << ','
                  << format_double(p.err) << '\n';
      }
      return exit_code::ok;
    });
  }
  return guarded([&] {
    const Measure m = load_measure(measure_path);
    const Spectrum sp = negative_spectrum(m, spec_tol);
    std::cout << "nu,lambda,kappa,err\n";
    for (int i = 0; i < sp.count; ++i) {
      const auto u = static_cast<std::size_t>(i);
      std::cout << i + 1 << ',' << format_double(sp.eigenvalues[u]) << ',' << format_double(sp.kappas[u]) << ','
                << format_double(sp.errors[u]) << '\n';
    }
    return exit_code::ok;
  });
}
