#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "pendspec/errors.hpp"

// Adaptive embedded Runge-Kutta 5(4), Dormand-Prince coefficients, FSAL.
// State is a fixed-size array of doubles; the right-hand side is any callable
// rhs(x, y, dydx). Integration direction follows sign(x1 - x0).

namespace pendspec::ode {

struct StepOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-10;
  double max_step = 1.0;
  double initial_step = 1e-4;
  // when finite, a step is rejected if any component changes by more than
  // this (the angle equation caps steps below pi)
  double max_component_delta = std::numeric_limits<double>::infinity();
  // below min_step_factor * (|x| + 1) the step size counts as underflow
  double min_step_factor = 1e-14;
};

template <std::size_t N>
struct Sample {
  double x;
  std::array<double, N> y;
  std::array<double, N> dy;
};

template <std::size_t N>
struct Solution {
  std::vector<Sample<N>> samples;
  bool stopped_early = false;
  std::size_t n_accepted = 0;
  std::size_t n_rejected = 0;
};

namespace detail {

template <std::size_t N, typename Rhs>
void dopri5_step(Rhs&& rhs, double x, const std::array<double, N>& y,
                 const std::array<double, N>& k1, double h,
                 std::array<double, N>& y_out, std::array<double, N>& err,
                 std::array<double, N>& k7) {
  constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
  constexpr double a21 = 1.0 / 5.0;
  constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
  constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
  constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                   a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
  constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                   a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
  constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                   b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
  // b - bhat, the 5th/4th order difference used for the error estimate
  constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                   e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

  std::array<double, N> k2, k3, k4, k5, k6, t;

  for (std::size_t i = 0; i < N; ++i) t[i] = y[i] + h * a21 * k1[i];
  rhs(x + c2 * h, t, k2);
  for (std::size_t i = 0; i < N; ++i) t[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
  rhs(x + c3 * h, t, k3);
  for (std::size_t i = 0; i < N; ++i)
    t[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
  rhs(x + c4 * h, t, k4);
  for (std::size_t i = 0; i < N; ++i)
    t[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
  rhs(x + c5 * h, t, k5);
  for (std::size_t i = 0; i < N; ++i)
    t[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
  rhs(x + h, t, k6);
  for (std::size_t i = 0; i < N; ++i)
    y_out[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
  rhs(x + h, y_out, k7);
  for (std::size_t i = 0; i < N; ++i)
    err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
}

}  // namespace detail

// Integrate from x0 to x1 recording every accepted step. stop(x, y) is
// evaluated on accepted states; returning true ends the run early.
template <std::size_t N, typename Rhs, typename Stop>
Solution<N> integrate(Rhs&& rhs, double x0, double x1, std::array<double, N> y,
                      const StepOptions& opt, Stop&& stop) {
  Solution<N> sol;
  const double dir = (x1 >= x0) ? 1.0 : -1.0;
  const double span = std::abs(x1 - x0);
  if (span == 0.0) {
    std::array<double, N> dy;
    rhs(x0, y, dy);
    sol.samples.push_back({x0, y, dy});
    return sol;
  }

  double x = x0;
  std::array<double, N> k1, y_new, err, k7;
  rhs(x, y, k1);
  sol.samples.push_back({x, y, k1});

  double h = std::min(opt.initial_step, std::max(1e-8, opt.max_step));
  h = std::min(h, span);

  while ((x1 - x) * dir > 0.0) {
    h = std::min(h, opt.max_step);
    double remaining = (x1 - x) * dir;
    if (h >= remaining) h = remaining;

    detail::dopri5_step(rhs, x, y, k1, dir * h, y_new, err, k7);

    double err_norm = 0.0;
    double max_delta = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      double scale = opt.abs_tol + opt.rel_tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
      double r = err[i] / scale;
      err_norm += r * r;
      max_delta = std::max(max_delta, std::abs(y_new[i] - y[i]));
    }
    err_norm = std::sqrt(err_norm / static_cast<double>(N));

    if (err_norm <= 1.0 && max_delta <= opt.max_component_delta) {
      x += dir * h;
      y = y_new;
      k1 = k7;  // FSAL
      ++sol.n_accepted;
      sol.samples.push_back({x, y, k1});
      if (stop(x, y)) {
        sol.stopped_early = true;
        break;
      }
      double grow = (err_norm > 0.0) ? 0.9 * std::pow(err_norm, -0.2) : 5.0;
      h *= std::clamp(grow, 0.2, 5.0);
    } else {
      ++sol.n_rejected;
      double shrink = (err_norm > 0.0) ? 0.9 * std::pow(err_norm, -0.2) : 0.5;
      if (max_delta > opt.max_component_delta) shrink = std::min(shrink, 0.5);
      h *= std::clamp(shrink, 0.1, 0.9);
    }

    if (h < opt.min_step_factor * (std::abs(x) + 1.0)) {
      throw IntegrationError("step size underflow in adaptive integration", x);
    }
  }

  return sol;
}

template <std::size_t N, typename Rhs>
Solution<N> integrate(Rhs&& rhs, double x0, double x1, const std::array<double, N>& y0,
                      const StepOptions& opt) {
  return integrate<N>(rhs, x0, x1, y0, opt,
                      [](double, const std::array<double, N>&) { return false; });
}

}  // namespace pendspec::ode
