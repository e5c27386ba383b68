#pragma once

#include <complex>
#include <vector>

#include "pendspec/force_function.hpp"

namespace pendspec::zs {

// Two-component system
//   i U1' + phi U2 =  lambda U1
//   i U2' - phi* U1 = -lambda U2
// with phi(x) = A(x) e^{iS}; only constant S is supported (S = 0 by default).
struct State {
  std::complex<double> U1;
  std::complex<double> U2;
};

struct Trajectory {
  double lambda = 0.0;
  double S = 0.0;
  std::vector<double> xs;
  std::vector<std::complex<double>> U1;
  std::vector<std::complex<double>> U2;
};

struct Options {
  double tol = 1e-12;
  double max_step = 1.0;
};

Trajectory integrate_zs(const ForceFunction& A, double S, double lambda, State init,
                        double half_width, const Options& opt = {});

// Bound-state seed matching a pendulum shot with alpha(-L) = alpha0:
// theta = pi/2 - alpha0, U1 = e^{i theta/2}, U2 = e^{-i theta/2} (rho = 1).
State seed_from_pendulum(double alpha0);

// theta = arg U1 - arg U2 (unwrapped), alpha = pi/2 - theta + S, rho = |U1|^2.
// Valid on the discrete-eigenvalue branch where |U1| = |U2|.
struct PendulumView {
  std::vector<double> xs;
  std::vector<double> alpha;
  std::vector<double> log_rho;
  double max_amplitude_mismatch = 0.0;  // max | |U1| - |U2| |
};

PendulumView to_pendulum(const Trajectory& t, double mismatch_tol = 1e-6);

// psi_pm = (U1 e^{-iS/2} +- i U2 e^{iS/2}) / sqrt(2 lambda); psi_minus solves
// the problem for V = A^2 - A', psi_plus for V~ = A^2 + A'. lambda must be
// nonzero.
struct SchrodingerView {
  std::vector<double> xs;
  std::vector<std::complex<double>> psi_minus;
  std::vector<std::complex<double>> psi_plus;
};

SchrodingerView to_schrodinger(const Trajectory& t);

// Full round trip at one detected eigenvalue: a pendulum shot and a seeded
// run of the two-component system, compared on a common grid over the region
// where the shot still tracks the critical solution.
struct CrossCheck {
  double lambda = 0.0;
  double max_alpha_dev = 0.0;          // pendulum alpha vs round-trip alpha
  double amplitude_mismatch = 0.0;     // max | |U1| - |U2| |
  double residual_minus = 0.0;         // second-difference residual, relative to max |psi|
  double residual_plus = 0.0;
  double compare_end = 0.0;            // right end of the compared region
};

struct CrossCheckConfig {
  double tol = 1e-13;
  double grid_step = 0.002;
  double half_width = 0.0;   // 0: force function default
  double keep_margin = 2.0;  // distance kept clear of the envelope turn-around
};

CrossCheck cross_check(const ForceFunction& A, double lambda_n,
                       const CrossCheckConfig& cfg = {});

}  // namespace pendspec::zs
