#include "pendspec/pendulum.hpp"

#include <cmath>
#include <numbers>

#include "pendspec/errors.hpp"
#include "pendspec/ode.hpp"

namespace pendspec {

namespace {
constexpr double kPi = std::numbers::pi;
}

FixedPoints fixed_points(double lambda, int branch) {
  if (lambda < 0.0)
    throw NoFixedPointsError(
        "negative lambda: reduce through symmetry_reduce before asking for fixed points");
  if (lambda > 1.0)
    throw NoFixedPointsError("no boundary fixed points for lambda > 1");
  const double a = std::asin(lambda);
  return FixedPoints{2.0 * branch * kPi + a, (2.0 * branch + 1.0) * kPi - a, branch};
}

SymmetryReduced symmetry_reduce(double lambda) noexcept {
  if (lambda < 0.0) return {-lambda, true};
  return {lambda, false};
}

TerminalClass classify_angle(BoundaryClass bc, double lambda, double angle, double class_tol,
                             double boundary_force, double boundary_slope) {
  TerminalClass out;
  out.angle = angle;

  if (bc == BoundaryClass::WellShaped) {
    if (lambda < 0.0 || lambda > 1.0) return out;
    const double a = std::asin(lambda);
    // nearest stable target 2 N pi + a
    const double ns = std::round((angle - a) / (2.0 * kPi));
    const double ds = std::abs(angle - (2.0 * kPi * ns + a));
    // nearest unstable target (2 N + 1) pi - a
    const double nu = std::round((angle + a - kPi) / (2.0 * kPi));
    const double du = std::abs(angle - ((2.0 * nu + 1.0) * kPi - a));
    if (ds <= du && ds < class_tol) {
      out.kind = TerminalKind::AtStable;
      out.branch = static_cast<int>(ns);
      out.distance = ds;
    } else if (du < ds && du < class_tol) {
      out.kind = TerminalKind::AtUnstable;
      out.branch = static_cast<int>(nu);
      out.distance = du;
    } else {
      out.distance = std::min(ds, du);
    }
    return out;
  }

  if (bc == BoundaryClass::Divergent) {
    // In the tail the solution parks on the quasi-static branch
    // alpha = 2 n pi + asin(lambda/A) + lag (attractor) or
    // alpha = (2n+1) pi - asin(lambda/A) + lag (repulser), with the
    // slow-drift lag lambda A' / (2 A (A^2 - lambda^2)).
    double shift = 0.0, lag = 0.0;
    const double a = boundary_force;
    if (a > lambda && lambda >= 0.0) {
      shift = std::asin(lambda / a);
      lag = lambda * boundary_slope / (2.0 * a * (a * a - lambda * lambda));
    }
    const double ne = std::round((angle - shift - lag) / (2.0 * kPi));
    const double de = std::abs(angle - (2.0 * kPi * ne + shift + lag));
    const double no = std::round((angle + shift - lag - kPi) / (2.0 * kPi));
    const double dodd = std::abs(angle - ((2.0 * no + 1.0) * kPi - shift + lag));
    if (de <= dodd && de < class_tol) {
      out.kind = TerminalKind::AtEvenPi;
      out.branch = static_cast<int>(ne);
      out.distance = de;
    } else if (dodd < de && dodd < class_tol) {
      out.kind = TerminalKind::AtOddPi;
      out.branch = static_cast<int>(no);
      out.distance = dodd;
    } else {
      out.distance = std::min(de, dodd);
    }
    return out;
  }

  return out;
}

PendulumTrajectory integrate(const ForceFunction& A, double lambda, double alpha0,
                             double half_width, const IntegrateOptions& opt) {
  if (!A.valid()) throw ConfigError("integrate: empty force function");
  if (lambda < 0.0)
    throw ConfigError("integrate: lambda must be >= 0; use symmetry_reduce for negatives");
  if (!(opt.tol > 0.0)) throw ConfigError("integrate: tolerance must be positive");

  auto rhs = [&A, lambda](double x, const std::array<double, 2>& y,
                          std::array<double, 2>& dy) {
    const double a = A(x);
    dy[0] = 2.0 * lambda - 2.0 * a * std::sin(y[0]);
    dy[1] = 2.0 * a * std::cos(y[0]);
  };

  ode::StepOptions sopt;
  sopt.rel_tol = opt.tol;
  sopt.abs_tol = opt.tol;
  sopt.max_step = opt.max_step;
  sopt.max_component_delta = 3.0;  // keeps |d alpha| < pi per accepted step

  auto stop = [&](double x, const std::array<double, 2>& y) {
    if (!opt.divergent_lock_stop || A.boundary_class() != BoundaryClass::Divergent)
      return false;
    const double n = std::round(y[0] / (2.0 * kPi));
    if (std::abs(y[0] - 2.0 * kPi * n) >= 1e-12) return false;
    return A(x) * std::cos(y[0]) > 1.0;  // firmly contracting attractor
  };

  std::array<double, 2> y0{alpha0, 0.0};
  ode::Solution<2> sol = ode::integrate<2>(rhs, -half_width, half_width, y0, sopt, stop);

  PendulumTrajectory traj;
  traj.lambda = lambda;
  traj.xs.reserve(sol.samples.size());
  traj.alpha.reserve(sol.samples.size());
  traj.log_rho.reserve(sol.samples.size());
  traj.alpha_slope.reserve(sol.samples.size());
  traj.log_rho_slope.reserve(sol.samples.size());
  for (const auto& s : sol.samples) {
    traj.xs.push_back(s.x);
    traj.alpha.push_back(s.y[0]);
    traj.log_rho.push_back(s.y[1]);
    traj.alpha_slope.push_back(s.dy[0]);
    traj.log_rho_slope.push_back(s.dy[1]);
  }
  traj.terminal = classify_angle(A.boundary_class(), lambda, traj.alpha.back(), opt.class_tol,
                                 A(traj.xs.back()), A.derivative(traj.xs.back()));
  return traj;
}

}  // namespace pendspec
