#pragma once

#include <optional>
#include <string>

#include "pendspec/pendulum.hpp"

namespace pendspec {

struct WindingConfig {
  double tol = 1e-10;        // integrator tolerance
  double class_tol = 1e-3;   // terminal classification distance
  double settle_tol = 1e-8;  // angle distance that counts as settled on an attractor
  double half_width = 0.0;   // 0: use the force function default
  double tail_cap = 4000.0;  // maximum boundary extension past half_width
  double max_step = 1.0;
};

// Winding of the shot started on the stable boundary fixed point (well-shaped)
// or at pi (divergent). W is (alpha(+L) - alpha(-L)) / 2 pi for well-shaped
// runs; divergent runs report the attractor branch so the staircase keeps unit
// steps. Integration extends past half_width until the terminal settles, which
// is what lets eigenvalue bisection resolve far below the bare-domain limit.
struct WindingResult {
  double lambda = 0.0;
  double W = 0.0;
  TerminalClass terminal;
  double domain_end = 0.0;  // x where classification finished
};

// Integer staircase value; empty when the terminal never settled.
std::optional<int> winding_step(const WindingResult& r);
// True when the terminal sits on the repulser family, i.e. lambda is pinned on
// an eigenvalue to within the resolvable window.
bool winding_at_jump(const WindingResult& r);

WindingResult winding_number(const ForceFunction& A, double lambda,
                             const WindingConfig& cfg = {});

// One integration at lambda = 1 from alpha(-L) = pi/2; the winding rounds to
// the number of bound states. Well-shaped force functions only.
int count_bound_states(const ForceFunction& A, const WindingConfig& cfg = {});

struct Eigenpair {
  int n = 0;  // 0-based level index
  double lambda = 0.0;
  double E = 0.0;  // lambda^2
  std::vector<double> xs;
  std::vector<double> psi;  // normalized, trapezoid integral of psi^2 is 1
  int nodes = 0;
  int winding_below = 0;
  int winding_above = 1;
  double bracket_width = 0.0;
  std::size_t pad_begin = 0;  // first index of the analytic tail pad; xs.size() if none
};

struct ReconstructConfig {
  double tol = 1e-11;
  double grid_step = 0.002;
  double half_width = 0.0;
  // log rho rebound past its post-well minimum that triggers truncation
  double rise_margin = 0.3;
};

// Integrates at lambda_n, forms psi = exp(log_rho / 2) sin(alpha / 2),
// truncates where the envelope starts regrowing (the shot cannot end exactly
// on the repulser), pads with the local exponential tail and normalizes.
Eigenpair reconstruct_eigenfunction(const ForceFunction& A, double lambda_n, int expected_index,
                                    const ReconstructConfig& cfg = {});

struct SuspectInterval {
  double lo = 0.0;
  double hi = 0.0;
  std::string reason;
};

struct EigenSearchConfig {
  WindingConfig winding;
  ReconstructConfig reconstruct;
  double lambda_lo = 0.0;
  double lambda_hi = 0.0;  // 0: auto (1 for well-shaped)
  double tol_lambda = 1e-10;
  int scan_points = 1000;
  int threads = 1;
  bool build_eigenfunctions = true;
};

struct SpectrumResult {
  std::vector<Eigenpair> levels;
  std::vector<SuspectInterval> suspects;
};

// Scans the winding staircase on a coarse grid, brackets every unit jump
// (multi-jump cells are split recursively), bisects each bracket to
// tol_lambda and reports eigenvalues at bracket midpoints, ascending.
SpectrumResult find_eigenvalues(const ForceFunction& A, const EigenSearchConfig& cfg = {});

// lambda = 0 test for divergent force functions: alpha stays pinned on an odd
// multiple of pi and the magnitude decays at both ends iff E = 0 is an
// eigenvalue.
struct ZeroLambdaTest {
  bool is_eigenvalue = false;
  double max_angle_dev = 0.0;
  double left_decay = 0.0;   // interior max of log rho minus the value at -L
  double right_decay = 0.0;  // ... minus the value at the kept right end
};

ZeroLambdaTest test_zero_lambda(const ForceFunction& A, const ReconstructConfig& cfg = {});

// Where a critical shot stops tracking the true eigenfunction: the log rho
// minimum reached after the last visit to the repulser band, provided the
// envelope rebounds by more than rise_margin afterwards.
struct EnvelopeCut {
  std::size_t cut = 0;  // last kept sample index
  bool truncated = false;
};

EnvelopeCut envelope_cut(const std::vector<double>& alpha, const std::vector<double>& log_rho,
                         BoundaryClass bc, double lambda, double rise_margin = 0.3);

struct IsospectralLevel {
  int n = 0;
  double E_minus = 0.0;
  double E_plus = 0.0;
  double diff = 0.0;
};

struct IsospectralReport {
  std::vector<IsospectralLevel> levels;
  double max_abs_diff = 0.0;
  int count_minus = 0;
  int count_plus = 0;
};

// Runs the oracle on both Riccati partners V = A^2 - A' and V~ = A^2 + A' and
// reports per-level differences. Report only; nothing is asserted here.
IsospectralReport isospectral_check(const ForceFunction& A, double half_width = 0.0,
                                    int M = 4000, int kmax = 8);

}  // namespace pendspec
