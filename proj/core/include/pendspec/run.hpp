#pragma once

#include <string>
#include <vector>

#include "pendspec/force_function.hpp"

namespace pendspec {

struct PotentialSpec {
  std::string id;        // catalog id; empty when csv_path is set
  Params params;
  std::string csv_path;  // tabulated input
};

// One structured document drives every command; flags override fields.
struct RunConfig {
  std::string command;
  PotentialSpec potential;
  std::string curve_id;  // construct command
  Params curve_params;
  double half_width = 0.0;  // 0: force-function default
  double tol = 1e-10;       // integrator tolerance
  double tol_lambda = 1e-10;
  double lambda_lo = 0.0;
  double lambda_max = 0.0;  // 0: auto
  int scan_points = 1000;
  double grid_step = 0.002;
  int threads = 1;
  unsigned seed = 12345;
  std::string out_dir = ".";
  int oracle_m = 4000;
  int oracle_k = 8;
  // verify command: potential selection and sampling effort
  std::vector<std::string> verify_potentials{"constant", "sech_well", "eq10_example",
                                             "eq14_generated", "linear_harmonic"};
  int monotonicity_pairs = 200;
};

RunConfig load_config_file(const std::string& path);

ForceFunction resolve_potential(const PotentialSpec& spec);

// Exit codes: 0 ok, 1 config error, 2 suspect intervals, 3 singular construction.
int run_command(const RunConfig& cfg);

int cmd_solve(const RunConfig& cfg);
int cmd_winding_scan(const RunConfig& cfg);
int cmd_count(const RunConfig& cfg);
int cmd_construct(const RunConfig& cfg);
int cmd_zs_check(const RunConfig& cfg);
int cmd_oracle(const RunConfig& cfg);
int cmd_verify(const RunConfig& cfg);

}  // namespace pendspec
