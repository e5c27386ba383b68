#pragma once

#include <functional>
#include <memory>
#include <string>

#include "pendspec/force_function.hpp"

namespace pendspec {

// A phase-space curve dalpha/dx = f(alpha) joining two zeros of f, used to
// manufacture exactly solvable potentials. f must have no zero strictly
// between the endpoints and its sign must point from alpha_start to
// alpha_end.
struct CriticalCurve {
  std::string id;
  std::function<double(double)> f;   // dalpha/dx as a function of alpha
  std::function<double(double)> df;  // analytic derivative of f
  double lambda = 0.0;               // driving strength the curve is designed for
  double alpha_start = 0.0;
  double alpha_end = 0.0;
};

// Shipped curves:
//   eq10   f = sin(2 alpha - pi/2), lambda = 1/sqrt(2), ends (pi/4, 3 pi/4)
//   sech   f = -2 lb + 2 sin(alpha), lambda = lb, ends (asin lb, pi - asin lb)
//   eq14   f = 2 sqrt(2) sin(alpha/2 - pi/4), lambda = 1, ends (pi/2, 5 pi/2)
//   counted  lambda = 1 curve joining 2 N1 pi + pi/2 to 2 N2 pi + pi/2
//            (params N1, N2, gamma), N2 - N1 bound states by construction
CriticalCurve curve_catalog(const std::string& id, const Params& params = {});
std::vector<std::string> curve_catalog_ids();

// Endpoint zeros to 1e-12, no interior zero, consistent direction.
void validate_curve(const CriticalCurve& curve);

// Monotone alpha(x) for a critical curve: cumulative quadrature of
// x(alpha) = x0 + integral dalpha / f(alpha) on a grid clustered toward the
// endpoint zeros, inverted by monotone Hermite interpolation, with analytic
// exponential (simple zero) or algebraic (double zero) tails beyond the table.
class CurveSolution {
 public:
  double operator()(double x) const;
  double slope(double x) const;  // f(alpha(x))
  double table_x_min() const;
  double table_x_max() const;

  struct Data;
  explicit CurveSolution(std::shared_ptr<const Data> d) : data_(std::move(d)) {}

 private:
  std::shared_ptr<const Data> data_;
};

// The anchor fixes alpha(x0_anchor) = midpoint of the endpoints.
CurveSolution solve_curve(const CriticalCurve& curve, double x0_anchor = 0.0);

// A(x) = (2 lambda - f(alpha(x))) / (2 sin alpha(x)); removable 0/0 points at
// multiples of pi are filled with the l'Hopital limit, non-removable ones
// reject the construction.
ForceFunction force_from_curve(const CriticalCurve& curve, const CurveSolution& sol);
ForceFunction force_from_curve(const CriticalCurve& curve);  // solves with anchor 0

// Well with exactly n2 - n1 bound states from a lambda = 1 curve between
// merged fixed points. n1 == n2 degenerates to A = 1.
ForceFunction predetermined_spectrum(int n1, int n2, double gamma = 0.8);

}  // namespace pendspec
