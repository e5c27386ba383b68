#include "pendspec/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pendspec/errors.hpp"

namespace pendspec::oracle {

Discretization Discretization::build(const std::function<double(double)>& V, double L, int M) {
  if (M < 3) throw ConfigError("oracle: need at least 3 interior points");
  if (!(L > 0.0)) throw ConfigError("oracle: half width must be positive");
  Discretization d;
  d.L = L;
  d.M = M;
  d.h = 2.0 * L / (M + 1);
  d.off = -1.0 / (d.h * d.h);
  d.diag.resize(M);
  for (int i = 0; i < M; ++i) d.diag[i] = 2.0 / (d.h * d.h) + V(d.x_of(i));
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int i = 0; i < M; ++i) {
    double r = (i == 0 || i == M - 1) ? std::abs(d.off) : 2.0 * std::abs(d.off);
    lo = std::min(lo, d.diag[i] - r);
    hi = std::max(hi, d.diag[i] + r);
  }
  d.gersh_lo = lo;
  d.gersh_hi = hi;
  return d;
}

int sturm_count(const Discretization& d, double E) {
  // LDL^T of (T - E I): the number of negative pivots equals the number of
  // eigenvalues below E.
  const double e2 = d.off * d.off;
  const double tiny = 1e-300;
  int count = 0;
  double q = d.diag[0] - E;
  if (q < 0.0) ++count;
  for (int i = 1; i < d.M; ++i) {
    if (q == 0.0) q = tiny;
    q = d.diag[i] - E - e2 / q;
    if (q < 0.0) ++count;
  }
  return count;
}

namespace {

double bisect_eigenvalue(const Discretization& d, int k) {
  // smallest E with sturm_count(E) >= k+1; resolved at the eigenvalue's own
  // scale, not the matrix norm
  double lo = d.gersh_lo, hi = d.gersh_hi;
  while (hi - lo > 1e-15 * (std::abs(lo) + std::abs(hi)) + 1e-300) {
    double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (sturm_count(d, mid) >= k + 1)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

// Inverse iteration against a slightly shifted eigenvalue. The guarded
// unpivoted LU of a shifted symmetric tridiagonal matrix is the classic
// dstein-style approach; a handful of iterations is plenty for the
// nondegenerate 1D spectra handled here.
std::vector<double> inverse_iteration(const Discretization& d, double E) {
  const int n = d.M;
  std::vector<double> v(n);
  // deterministic jitter avoids an unlucky orthogonal start
  for (int i = 0; i < n; ++i) v[i] = 1.0 + 1e-3 * std::sin(7.0 * (i + 1));

  const double guard = 1e-12 * std::max(1.0, std::abs(E)) + 1e-300;
  const double shift = E + guard;
  std::vector<double> c(n), b(n), w(n);
  c[0] = d.diag[0] - shift;
  if (std::abs(c[0]) < 1e-300) c[0] = 1e-300;
  for (int i = 1; i < n; ++i) {
    b[i] = d.off / c[i - 1];
    c[i] = d.diag[i] - shift - b[i] * d.off;
    if (std::abs(c[i]) < 1e-300) c[i] = 1e-300;
  }
  for (int iter = 0; iter < 4; ++iter) {
    // solve L y = v then U w = y
    w[0] = v[0];
    for (int i = 1; i < n; ++i) w[i] = v[i] - b[i] * w[i - 1];
    w[n - 1] /= c[n - 1];
    for (int i = n - 2; i >= 0; --i) w[i] = (w[i] - d.off * w[i + 1]) / c[i];

    double norm = 0.0;
    for (double x : w) norm += x * x;
    norm = std::sqrt(norm);
    for (int i = 0; i < n; ++i) v[i] = w[i] / norm;
  }
  return v;
}

int count_nodes(const std::vector<double>& v) {
  // sign changes above the noise floor; deep Dirichlet tails sit at round-off
  double peak = 0.0;
  for (double x : v) peak = std::max(peak, std::abs(x));
  const double floor = 1e-9 * peak;
  int nodes = 0;
  double prev = 0.0;
  for (double x : v) {
    if (std::abs(x) <= floor) continue;
    if (prev != 0.0 && x * prev < 0.0) ++nodes;
    prev = x;
  }
  return nodes;
}

}  // namespace

double raw_eigenvalue(const std::function<double(double)>& V, double L, int M, int k) {
  auto d = Discretization::build(V, L, M);
  if (k >= M) throw ConfigError("oracle: eigenvalue index beyond matrix size");
  return bisect_eigenvalue(d, k);
}

namespace {

Spectrum solve_at(const std::function<double(double)>& V, double L, int M, int k,
                  const Options& opt) {
  auto d = Discretization::build(V, L, M);
  Spectrum out;
  out.continuum_edge = std::min(V(-L), V(L));

  Discretization d2;
  if (opt.richardson) d2 = Discretization::build(V, L, 2 * M);

  for (int i = 0; i < k; ++i) {
    Level lv;
    lv.k = i;
    double em = bisect_eigenvalue(d, i);
    if (opt.richardson) {
      double e2m = bisect_eigenvalue(d2, i);
      lv.E = e2m + (e2m - em) / 3.0;  // second-order extrapolation
      lv.error_bound = std::abs(e2m - em);
    } else {
      lv.E = em;
      lv.error_bound = 0.0;
    }
    lv.above_continuum = opt.respect_continuum_edge && lv.E >= out.continuum_edge;
    if (lv.above_continuum) {
      out.truncated = true;
      break;  // everything higher is box artifact
    }
    if (opt.eigenvectors) {
      auto v = inverse_iteration(d, em);
      lv.xs.resize(d.M);
      lv.psi.resize(d.M);
      double norm2 = 0.0;
      for (int j = 0; j < d.M; ++j) norm2 += v[j] * v[j];
      norm2 *= d.h;  // trapezoid with zero Dirichlet ends
      double s = 1.0 / std::sqrt(norm2);
      // sign convention: first significant lobe positive
      double lead = 0.0;
      for (int j = 0; j < d.M; ++j)
        if (std::abs(v[j]) > 0.1 * std::abs(v[d.M / 2]) || std::abs(v[j]) > 1e-3) {
          lead = v[j];
          break;
        }
      if (lead < 0.0) s = -s;
      for (int j = 0; j < d.M; ++j) {
        lv.xs[j] = d.x_of(j);
        lv.psi[j] = s * v[j];
      }
      lv.nodes = count_nodes(lv.psi);
    }
    out.levels.push_back(std::move(lv));
  }
  return out;
}

}  // namespace

Spectrum lowest_eigenvalues(const std::function<double(double)>& V, double L, int M, int k,
                            const Options& opt) {
  if (k < 1) throw ConfigError("oracle: request at least one level");
  if (k > M) throw ConfigError("oracle: more levels than interior points");

  // Dirichlet walls must sit where the deepest kept level has decayed below
  // 1e-8: exp(-sqrt(edge - E) L) small, i.e. sqrt(edge - E) L > ln(1e8).
  const double need = std::log(1e8);
  double L_eff = L;
  int M_eff = M;
  Spectrum out;
  for (int attempt = 0; attempt < 4; ++attempt) {
    out = solve_at(V, L_eff, M_eff, k, opt);
    if (!opt.respect_continuum_edge || out.levels.empty()) break;
    double e_top = out.levels.back().E;
    double kappa = std::sqrt(std::max(out.continuum_edge - e_top, 0.0));
    if (kappa * L_eff >= need) break;
    L_eff *= 1.5;
    M_eff = static_cast<int>(std::lround(M * L_eff / L));
  }
  return out;
}

}  // namespace pendspec::oracle
