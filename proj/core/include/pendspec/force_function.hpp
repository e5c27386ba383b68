#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace pendspec {

// Boundary behaviour of a force function A(x).
//   WellShaped: A <= 1 everywhere and A(+-infinity) = 1, so the potential is
//               constant at the boundaries with a dip in between.
//   Divergent:  |A| grows without bound as |x| grows (e.g. A(x) = x).
//   Other:      anything else; spectral searches refuse it.
enum class BoundaryClass { WellShaped, Divergent, Other };

// Which partner potential the Riccati relation produces:
//   Minus: V = A^2 - A', Plus: V~ = A^2 + A'.
enum class Partner { Minus, Plus };

using Params = std::map<std::string, double>;

// The force function A(x) generating a potential through V = A^2 - A'.
// Immutable and cheap to copy; safe to share across threads.
class ForceFunction {
 public:
  ForceFunction() = default;

  static ForceFunction closed_form(std::string id, std::function<double(double)> value,
                                   std::function<double(double)> slope, BoundaryClass bc,
                                   double half_width);
  // Tabulated A on a strictly increasing grid of >= 3 points; evaluation uses
  // cubic Hermite interpolation with centered-difference node slopes and
  // clamps to the end values outside the grid.
  static ForceFunction sampled(std::vector<double> xs, std::vector<double> values);

  double operator()(double x) const;
  double derivative(double x) const;

  BoundaryClass boundary_class() const;
  bool closed() const;  // true for closed-form entries
  const std::string& id() const;
  // Recommended half-domain for truncating the infinite line.
  double half_width() const;
  bool valid() const { return impl_ != nullptr; }

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

// One component of the Riccati pair, evaluable as a plain potential V(x).
struct Potential {
  ForceFunction source;
  Partner partner = Partner::Minus;
  double operator()(double x) const {
    double a = source(x);
    double s = source.derivative(x);
    return partner == Partner::Minus ? a * a - s : a * a + s;
  }
};

Potential riccati_potential(const ForceFunction& A, Partner partner);

struct PotentialPair {
  ForceFunction source;
  Potential V;        // A^2 - A'
  Potential V_tilde;  // A^2 + A'
};

PotentialPair potential_pair(const ForceFunction& A);

// Catalog of shipped force functions. Ids:
//   constant         A = 1
//   sech_well        params: lambda_bar in (0,1); V = 1 - 2(1-lb^2)/cosh^2(sqrt(1-lb^2) x)
//   eq10_example     cosh-ratio well with a single level at E = 1/2
//   eq14_generated   well built from a merged-fixed-point curve, single level near E = 0.5
//   linear_harmonic  A = x, V = x^2 - 1
//   custom_sampled   tabulated input; load through load_sampled_csv
ForceFunction catalog(const std::string& id, const Params& params = {});
std::vector<std::string> catalog_ids();

// Two-column CSV (x, A); an optional non-numeric header line is skipped.
ForceFunction load_sampled_csv(const std::string& path);

// Verifies the well-shaped invariants on a sampling grid:
// A(x) <= 1 + tol everywhere and |A(+-L) - 1| < boundary_tol.
bool check_well_shaped(const ForceFunction& A, double tol = 1e-9, double boundary_tol = 1e-6);

}  // namespace pendspec
