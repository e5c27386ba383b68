#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "pendspec/force_function.hpp"

namespace pendspec {

// Boundary-region equilibria of dalpha/dx = 2 lambda - 2 sin(alpha):
// stable = 2 N pi + asin(lambda), unstable = (2N+1) pi - asin(lambda).
// Defined for 0 <= lambda <= 1; the pair merges at lambda = 1.
struct FixedPoints {
  double stable;
  double unstable;
  int branch;
};

FixedPoints fixed_points(double lambda, int branch = 0);

// Negative driving strengths map onto positive ones: alpha(x) solves the
// equation for lambda iff -alpha(x) solves it for -lambda.
struct SymmetryReduced {
  double magnitude;
  bool flip;
};

SymmetryReduced symmetry_reduce(double lambda) noexcept;

enum class TerminalKind { AtStable, AtUnstable, AtEvenPi, AtOddPi, Unresolved };

struct TerminalClass {
  TerminalKind kind = TerminalKind::Unresolved;
  int branch = 0;     // N for fixed-point targets, n for pi-multiple targets
  double angle = 0.0; // raw terminal angle, never reduced mod 2 pi
  double distance = std::numeric_limits<double>::infinity();
};

// Nearest classification target for the terminal angle. Well-shaped force
// functions classify against the fixed points; divergent ones against even
// (attractor) and odd (repulser) multiples of pi, corrected by the
// quasi-static offset asin(lambda / A) + lambda A' / (2 A (A^2 - lambda^2))
// when the boundary force and its slope are known.
TerminalClass classify_angle(BoundaryClass bc, double lambda, double angle, double class_tol,
                             double boundary_force = 1.0, double boundary_slope = 0.0);

// Sampled solution of the angle/log-magnitude pair
//   dalpha/dx   = 2 lambda - 2 A(x) sin(alpha)
//   dlogrho/dx  = 2 A(x) cos(alpha)
// for one driving strength. alpha is kept unwrapped so the winding number is
// a plain difference.
struct PendulumTrajectory {
  double lambda = 0.0;
  std::vector<double> xs;
  std::vector<double> alpha;
  std::vector<double> log_rho;
  std::vector<double> alpha_slope;    // stored RHS values at the samples
  std::vector<double> log_rho_slope;
  TerminalClass terminal;

  double winding() const {
    return (alpha.back() - alpha.front()) / (2.0 * 3.14159265358979323846);
  }
};

struct IntegrateOptions {
  double tol = 1e-10;       // absolute and relative integrator tolerance
  double max_step = 1.0;
  double class_tol = 1e-3;  // terminal classification distance
  // stop once pinned on an even-pi attractor of a divergent force function
  bool divergent_lock_stop = false;
};

// Step cap that keeps cubic Hermite resampling of the accepted steps well
// below the integration error itself.
inline double resample_max_step(double tol) {
  double h = 0.5 * std::pow(tol, 0.25);
  return h < 1e-3 ? 1e-3 : (h > 0.5 ? 0.5 : h);
}

// Integrates from x = -half_width to +half_width with alpha(-L) = alpha0 and
// log_rho(-L) = 0. lambda must be >= 0; route negative values through
// symmetry_reduce first.
PendulumTrajectory integrate(const ForceFunction& A, double lambda, double alpha0,
                             double half_width, const IntegrateOptions& opt = {});

}  // namespace pendspec
