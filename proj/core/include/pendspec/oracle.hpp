#pragma once

#include <functional>
#include <vector>

namespace pendspec::oracle {

// Uniform-grid central-difference discretization of -psi'' + V psi = E psi on
// [-L, L] with Dirichlet ends. Symmetric tridiagonal: diagonal 2/h^2 + V(x_i),
// off-diagonal -1/h^2, h = 2L/(M+1).
struct Discretization {
  double L = 0.0;
  int M = 0;
  double h = 0.0;
  std::vector<double> diag;
  double off = 0.0;
  double gersh_lo = 0.0;
  double gersh_hi = 0.0;

  static Discretization build(const std::function<double(double)>& V, double L, int M);
  double x_of(int i) const { return -L + h * (i + 1); }  // interior index 0..M-1
};

// Number of eigenvalues strictly below E (Sturm sequence / LDL^T sign count).
int sturm_count(const Discretization& d, double E);

struct Level {
  int k = 0;       // 0-based index
  double E = 0.0;  // Richardson-refined when enabled
  double error_bound = 0.0;
  int nodes = 0;
  std::vector<double> xs;   // interior grid
  std::vector<double> psi;  // normalized eigenvector (trapezoid, integral 1)
  bool above_continuum = false;
};

struct Spectrum {
  std::vector<Level> levels;
  bool truncated = false;  // fewer levels below the continuum edge than requested
  double continuum_edge = 0.0;
};

struct Options {
  // drop levels at/above min(V(-L), V(L)); disable for box-style tests
  bool respect_continuum_edge = true;
  // refine each eigenvalue against a 2M grid and attach |E(M) - E(2M)| bounds
  bool richardson = true;
  bool eigenvectors = true;
};

// k-th (0-based) eigenvalue at resolution M, plain bisection, no refinement.
double raw_eigenvalue(const std::function<double(double)>& V, double L, int M, int k);

// The k lowest levels. Eigenvectors come from the M grid; eigenvalues are
// Richardson-extrapolated from the (M, 2M) pair when enabled.
Spectrum lowest_eigenvalues(const std::function<double(double)>& V, double L, int M, int k,
                            const Options& opt = {});

}  // namespace pendspec::oracle
