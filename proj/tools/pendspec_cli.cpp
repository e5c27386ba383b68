// Command line front end: bound states of -psi'' + V psi = E psi through the
// angle-equation shooting method, winding-number eigenvalue search, critical
// curve construction and the independent cross checks.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pendspec/errors.hpp"
#include "pendspec/run.hpp"

namespace {

pendspec::Params parse_params(const std::vector<std::string>& kvs) {
  pendspec::Params out;
  for (const auto& kv : kvs) {
    auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0)
      throw pendspec::ConfigError("--param expects key=value, got '" + kv + "'");
    try {
      out[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
    } catch (const std::exception&) {
      throw pendspec::ConfigError("--param value is not a number in '" + kv + "'");
    }
  }
  return out;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"1D bound states via the driven-pendulum angle equation"};
  app.require_subcommand(1);

  std::string config_path, out_dir, potential;
  std::vector<std::string> params;
  double lambda_max = -1.0, tol = -1.0;
  int threads = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config file; flags override its fields");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--potential", potential,
                    "catalog id or CSV path (construct: the curve id)");
    sub->add_option("--param", params, "parameter as key=value (repeatable)");
    sub->add_option("--lambda-max", lambda_max, "upper end of the search range");
    sub->add_option("--tol", tol, "integrator tolerance");
    sub->add_option("--threads", threads, "worker threads for winding scans");
  };

  const std::vector<std::string> commands = {"solve",    "winding-scan", "count", "construct",
                                             "zs-check", "oracle",       "verify"};
  const std::vector<std::string> descriptions = {
      "find eigenvalues and eigenfunctions",
      "emit the winding staircase as CSV",
      "count bound states with one run at lambda = 1",
      "build a potential from a critical curve and verify it",
      "round-trip the two-component system at each eigenvalue",
      "independent finite-difference spectrum",
      "run the consolidated property suites"};
  for (std::size_t i = 0; i < commands.size(); ++i)
    add_common(app.add_subcommand(commands[i], descriptions[i]));

  CLI11_PARSE(app, argc, argv);

  try {
    pendspec::RunConfig cfg;
    if (!config_path.empty()) cfg = pendspec::load_config_file(config_path);
    cfg.command = app.get_subcommands().front()->get_name();

    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (!potential.empty()) {
      if (cfg.command == "construct") {
        cfg.curve_id = potential;
      } else if (ends_with(potential, ".csv")) {
        cfg.potential = {};
        cfg.potential.csv_path = potential;
      } else {
        cfg.potential.csv_path.clear();
        cfg.potential.id = potential;
      }
    }
    if (!params.empty()) {
      pendspec::Params p = parse_params(params);
      if (cfg.command == "construct")
        for (const auto& [k, v] : p) cfg.curve_params[k] = v;
      else
        for (const auto& [k, v] : p) cfg.potential.params[k] = v;
    }
    if (lambda_max >= 0.0) cfg.lambda_max = lambda_max;
    if (tol > 0.0) cfg.tol = tol;
    if (threads > 0) cfg.threads = threads;

    return pendspec::run_command(cfg);
  } catch (const pendspec::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
