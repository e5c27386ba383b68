#include "pendspec/zakharov_shabat.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pendspec/errors.hpp"
#include "pendspec/interp.hpp"
#include "pendspec/ode.hpp"
#include "pendspec/pendulum.hpp"
#include "pendspec/spectrum.hpp"

namespace pendspec::zs {

namespace {
constexpr double kPi = std::numbers::pi;
}

State seed_from_pendulum(double alpha0) {
  const double theta = 0.5 * kPi - alpha0;
  return State{std::polar(1.0, 0.5 * theta), std::polar(1.0, -0.5 * theta)};
}

Trajectory integrate_zs(const ForceFunction& A, double S, double lambda, State init,
                        double half_width, const Options& opt) {
  if (!A.valid()) throw ConfigError("integrate_zs: empty force function");

  const double cs = std::cos(S), sn = std::sin(S);
  // state layout: Re U1, Im U1, Re U2, Im U2
  auto rhs = [&A, lambda, cs, sn](double x, const std::array<double, 4>& y,
                                  std::array<double, 4>& dy) {
    const double a = A(x);
    const double pr = a * cs, pi = a * sn;  // phi = A e^{iS}
    // U1' = -i lambda U1 + i phi U2
    dy[0] = lambda * y[1] - pi * y[2] - pr * y[3];
    dy[1] = -lambda * y[0] + pr * y[2] - pi * y[3];
    // U2' = i lambda U2 - i phi* U1
    dy[2] = -lambda * y[3] - pi * y[0] + pr * y[1];
    dy[3] = lambda * y[2] - pr * y[0] - pi * y[1];
  };

  ode::StepOptions sopt;
  sopt.rel_tol = opt.tol;
  sopt.abs_tol = opt.tol;
  sopt.max_step = opt.max_step;

  std::array<double, 4> y0{init.U1.real(), init.U1.imag(), init.U2.real(), init.U2.imag()};
  ode::Solution<4> sol = ode::integrate<4>(rhs, -half_width, half_width, y0, sopt);

  Trajectory t;
  t.lambda = lambda;
  t.S = S;
  t.xs.reserve(sol.samples.size());
  t.U1.reserve(sol.samples.size());
  t.U2.reserve(sol.samples.size());
  for (const auto& s : sol.samples) {
    t.xs.push_back(s.x);
    t.U1.emplace_back(s.y[0], s.y[1]);
    t.U2.emplace_back(s.y[2], s.y[3]);
  }
  return t;
}

namespace {

// cumulative unwrapped phase along a complex sample path
std::vector<double> unwrapped_arg(const std::vector<std::complex<double>>& u) {
  std::vector<double> out(u.size());
  if (u.empty()) return out;
  out[0] = std::arg(u[0]);
  for (std::size_t i = 1; i < u.size(); ++i)
    out[i] = out[i - 1] + std::arg(u[i] * std::conj(u[i - 1]));
  return out;
}

}  // namespace

PendulumView to_pendulum(const Trajectory& t, double mismatch_tol) {
  PendulumView v;
  v.xs = t.xs;
  for (std::size_t i = 0; i < t.xs.size(); ++i) {
    double d = std::abs(std::abs(t.U1[i]) - std::abs(t.U2[i]));
    v.max_amplitude_mismatch = std::max(v.max_amplitude_mismatch, d);
  }
  if (v.max_amplitude_mismatch > mismatch_tol)
    throw ConsistencyError("not on the bound-state branch: |U1| and |U2| differ by " +
                           std::to_string(v.max_amplitude_mismatch));

  std::vector<double> th1 = unwrapped_arg(t.U1);
  std::vector<double> th2 = unwrapped_arg(t.U2);
  v.alpha.resize(t.xs.size());
  v.log_rho.resize(t.xs.size());
  for (std::size_t i = 0; i < t.xs.size(); ++i) {
    double theta = th1[i] - th2[i];
    v.alpha[i] = 0.5 * kPi - theta + t.S;
    v.log_rho[i] = 2.0 * std::log(std::abs(t.U1[i]));
  }
  return v;
}

SchrodingerView to_schrodinger(const Trajectory& t) {
  if (t.lambda == 0.0)
    throw ConfigError("to_schrodinger: lambda must be nonzero (1/sqrt(2 lambda) factor)");
  SchrodingerView v;
  v.xs = t.xs;
  const double inv = 1.0 / std::sqrt(2.0 * std::abs(t.lambda));
  const std::complex<double> em = std::polar(1.0, -0.5 * t.S);
  const std::complex<double> ep = std::polar(1.0, 0.5 * t.S);
  const std::complex<double> i1(0.0, 1.0);
  v.psi_minus.resize(t.xs.size());
  v.psi_plus.resize(t.xs.size());
  for (std::size_t k = 0; k < t.xs.size(); ++k) {
    v.psi_minus[k] = (t.U1[k] * em - i1 * t.U2[k] * ep) * inv;
    v.psi_plus[k] = (t.U1[k] * em + i1 * t.U2[k] * ep) * inv;
  }
  return v;
}

CrossCheck cross_check(const ForceFunction& A, double lambda_n, const CrossCheckConfig& cfg) {
  if (!(lambda_n > 0.0)) throw ConfigError("cross_check requires lambda > 0");
  const double L = cfg.half_width > 0.0 ? cfg.half_width : A.half_width();
  const double alpha0 = A.boundary_class() == BoundaryClass::WellShaped
                            ? fixed_points(std::min(lambda_n, 1.0)).stable
                            : kPi;

  IntegrateOptions iopt;
  iopt.tol = cfg.tol;
  iopt.max_step = std::min(0.05, resample_max_step(cfg.tol));
  PendulumTrajectory pend = integrate(A, lambda_n, alpha0, L, iopt);

  Options zopt;
  zopt.tol = cfg.tol;
  zopt.max_step = iopt.max_step;
  Trajectory zt = integrate_zs(A, 0.0, lambda_n, seed_from_pendulum(alpha0), L, zopt);
  PendulumView view = to_pendulum(zt);

  // Keep clear of the point where the shot leaves the critical solution, and
  // stay within the error-amplification budget of the repulser tail: mutual
  // deviations of order tol grow like exp(rate * (x - x_peak)) past the well.
  EnvelopeCut cut = envelope_cut(pend.alpha, pend.log_rho, A.boundary_class(), lambda_n);
  const double x_cut = cut.truncated ? pend.xs[cut.cut] : L;
  std::size_t i_peak = 0;
  for (std::size_t i = 1; i < pend.log_rho.size(); ++i)
    if (pend.log_rho[i] > pend.log_rho[i_peak]) i_peak = i;
  const double x_peak = pend.xs[i_peak];
  const double a_end = A(L);
  const double rate = 2.0 * std::sqrt(std::max(a_end * a_end - lambda_n * lambda_n, 0.01));
  const double budget = std::log(std::max(1e-7 / (10.0 * cfg.tol), 2.0)) / rate;
  const double compare_end =
      std::max(-L + 1.0, std::min({x_peak + budget, x_cut - cfg.keep_margin, L}));

  const std::size_t m = static_cast<std::size_t>((compare_end + L) / cfg.grid_step) + 1;
  std::vector<double> xs(m);
  for (std::size_t i = 0; i < m; ++i) xs[i] = -L + static_cast<double>(i) * cfg.grid_step;

  // resample the pendulum angle and the round-trip angle on the common grid;
  // the round-trip nodes get their slopes from the angle equation itself
  HermiteTable pend_alpha(pend.xs, pend.alpha, pend.alpha_slope);
  std::vector<double> zs_slope(view.alpha.size());
  for (std::size_t i = 0; i < view.alpha.size(); ++i)
    zs_slope[i] = 2.0 * lambda_n - 2.0 * A(view.xs[i]) * std::sin(view.alpha[i]);
  HermiteTable zs_alpha(view.xs, view.alpha, zs_slope);

  CrossCheck out;
  out.lambda = lambda_n;
  out.amplitude_mismatch = view.max_amplitude_mismatch;
  out.compare_end = compare_end;
  for (double x : xs)
    out.max_alpha_dev = std::max(out.max_alpha_dev, std::abs(pend_alpha.value(x) - zs_alpha.value(x)));

  // resample U1, U2 with slopes from the system itself, then form psi_pm
  const std::size_t zn = zt.xs.size();
  std::vector<double> u1r(zn), u1i(zn), u2r(zn), u2i(zn), d1r(zn), d1i(zn), d2r(zn), d2i(zn);
  for (std::size_t i = 0; i < zn; ++i) {
    const double a = A(zt.xs[i]);
    const std::complex<double> i1(0.0, 1.0);
    std::complex<double> dU1 = -i1 * lambda_n * zt.U1[i] + i1 * a * zt.U2[i];
    std::complex<double> dU2 = i1 * lambda_n * zt.U2[i] - i1 * a * zt.U1[i];
    u1r[i] = zt.U1[i].real();
    u1i[i] = zt.U1[i].imag();
    u2r[i] = zt.U2[i].real();
    u2i[i] = zt.U2[i].imag();
    d1r[i] = dU1.real();
    d1i[i] = dU1.imag();
    d2r[i] = dU2.real();
    d2i[i] = dU2.imag();
  }
  HermiteTable t1r(zt.xs, u1r, d1r), t1i(zt.xs, u1i, d1i);
  HermiteTable t2r(zt.xs, u2r, d2r), t2i(zt.xs, u2i, d2i);

  const double inv = 1.0 / std::sqrt(2.0 * lambda_n);
  std::vector<std::complex<double>> pm(m), pp(m);
  double peak = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    std::complex<double> U1(t1r.value(xs[i]), t1i.value(xs[i]));
    std::complex<double> U2(t2r.value(xs[i]), t2i.value(xs[i]));
    const std::complex<double> i1(0.0, 1.0);
    pm[i] = (U1 - i1 * U2) * inv;
    pp[i] = (U1 + i1 * U2) * inv;
    peak = std::max({peak, std::abs(pm[i]), std::abs(pp[i])});
  }

  const Potential Vm = riccati_potential(A, Partner::Minus);
  const Potential Vp = riccati_potential(A, Partner::Plus);
  const double h2 = cfg.grid_step * cfg.grid_step;
  const double E = lambda_n * lambda_n;
  for (std::size_t i = 1; i + 1 < m; ++i) {
    std::complex<double> dm = -(pm[i + 1] - 2.0 * pm[i] + pm[i - 1]) / h2 +
                              (Vm(xs[i]) - E) * pm[i];
    std::complex<double> dp = -(pp[i + 1] - 2.0 * pp[i] + pp[i - 1]) / h2 +
                              (Vp(xs[i]) - E) * pp[i];
    out.residual_minus = std::max(out.residual_minus, std::abs(dm));
    out.residual_plus = std::max(out.residual_plus, std::abs(dp));
  }
  out.residual_minus /= peak;
  out.residual_plus /= peak;
  return out;
}

}  // namespace pendspec::zs
