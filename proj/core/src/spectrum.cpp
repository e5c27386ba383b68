#include "pendspec/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>

#include "pendspec/errors.hpp"
#include "pendspec/interp.hpp"
#include "pendspec/ode.hpp"
#include "pendspec/oracle.hpp"

namespace pendspec {

namespace {

constexpr double kPi = std::numbers::pi;

// A well-shaped run settles once it sits tightly on a stable fixed point.
// A divergent run is committed to its attractor branch as soon as it is
// classified inside the basin with the force comfortably above lambda: the
// contraction only strengthens outward, so the branch cannot change.
bool settled_kind(BoundaryClass bc, const TerminalClass& t, const WindingConfig& cfg,
                  double lambda, double boundary_force) {
  if (bc == BoundaryClass::WellShaped)
    return t.kind == TerminalKind::AtStable && t.distance < cfg.settle_tol;
  return t.kind == TerminalKind::AtEvenPi && t.distance < cfg.class_tol &&
         boundary_force >= std::max(2.0 * lambda, 2.0);
}

// Winding at lambda = 1 for a well-shaped force function: the fixed points
// merge at pi/2 + 2 N pi and are approached algebraically from below, so the
// staircase value comes from rounding rather than from settling.
WindingResult winding_at_unit_lambda(const ForceFunction& A, const WindingConfig& cfg) {
  const double L = cfg.half_width > 0.0 ? cfg.half_width : A.half_width();
  IntegrateOptions iopt;
  iopt.tol = cfg.tol;
  iopt.max_step = cfg.max_step;
  iopt.class_tol = cfg.class_tol;
  PendulumTrajectory traj = integrate(A, 1.0, 0.5 * kPi, L, iopt);
  const double turns = (traj.alpha.back() - 0.5 * kPi) / (2.0 * kPi);
  const int w = static_cast<int>(std::llround(turns));

  WindingResult out;
  out.lambda = 1.0;
  // merged fixed points are approached algebraically from below, so the
  // staircase value comes from rounding; raw turns stay in terminal.angle
  out.W = w;
  out.domain_end = traj.xs.back();
  out.terminal.kind = TerminalKind::AtStable;
  out.terminal.branch = w;
  out.terminal.angle = traj.alpha.back();
  out.terminal.distance = std::abs(traj.alpha.back() - (2.0 * kPi * w + 0.5 * kPi));
  return out;
}

}  // namespace

std::optional<int> winding_step(const WindingResult& r) {
  switch (r.terminal.kind) {
    case TerminalKind::AtStable:
    case TerminalKind::AtUnstable:
    case TerminalKind::AtEvenPi:
    case TerminalKind::AtOddPi:
      return r.terminal.branch;
    default:
      return std::nullopt;
  }
}

bool winding_at_jump(const WindingResult& r) {
  return r.terminal.kind == TerminalKind::AtUnstable ||
         r.terminal.kind == TerminalKind::AtOddPi;
}

WindingResult winding_number(const ForceFunction& A, double lambda, const WindingConfig& cfg) {
  const BoundaryClass bc = A.boundary_class();
  if (bc == BoundaryClass::Other)
    throw ClassificationError("winding_number needs a well-shaped or divergent force function");
  if (lambda < 0.0)
    throw ConfigError("winding_number: lambda must be >= 0 (use symmetry_reduce)");
  if (bc == BoundaryClass::WellShaped && lambda > 1.0)
    throw ConfigError("winding_number: well-shaped search is limited to lambda <= 1");

  if (bc == BoundaryClass::WellShaped && lambda == 1.0) return winding_at_unit_lambda(A, cfg);

  const double L = cfg.half_width > 0.0 ? cfg.half_width : A.half_width();
  const double alpha0 = bc == BoundaryClass::WellShaped ? fixed_points(lambda).stable : kPi;

  auto rhs = [&A, lambda](double x, const std::array<double, 2>& y, std::array<double, 2>& dy) {
    const double a = A(x);
    dy[0] = 2.0 * lambda - 2.0 * a * std::sin(y[0]);
    dy[1] = 2.0 * a * std::cos(y[0]);
  };

  ode::StepOptions sopt;
  sopt.rel_tol = cfg.tol;
  sopt.abs_tol = cfg.tol;
  sopt.max_step = cfg.max_step;
  sopt.max_component_delta = 3.0;  // keeps |d alpha| < pi per accepted step

  auto no_stop = [](double, const std::array<double, 2>&) { return false; };

  std::array<double, 2> y{alpha0, 0.0};
  {
    auto sol = ode::integrate<2>(rhs, -L, L, y, sopt, no_stop);
    y = sol.samples.back().y;
  }
  double x_end = L;
  TerminalClass cls =
      classify_angle(bc, lambda, y[0], cfg.class_tol, A(x_end), A.derivative(x_end));

  // Extend the boundary run until the terminal settles on an attractor. Shots
  // near an eigenvalue hug the repulser for a while before committing, which
  // is exactly what lets bisection resolve far below the bare-domain limit.
  auto settle_stop = [&](double x, const std::array<double, 2>& yy) {
    TerminalClass t =
        classify_angle(bc, lambda, yy[0], cfg.class_tol, A(x), A.derivative(x));
    return settled_kind(bc, t, cfg, lambda, A(x));
  };

  double chunk = std::max(5.0, 0.25 * L);
  while (!settled_kind(bc, cls, cfg, lambda, A(x_end)) && (x_end - L) < cfg.tail_cap) {
    double next = std::min(x_end + chunk, L + cfg.tail_cap);
    auto sol = ode::integrate<2>(rhs, x_end, next, y, sopt, settle_stop);
    y = sol.samples.back().y;
    x_end = sol.samples.back().x;
    cls = classify_angle(bc, lambda, y[0], cfg.class_tol, A(x_end), A.derivative(x_end));
    chunk = std::min(2.0 * chunk, 400.0);
  }

  WindingResult out;
  out.lambda = lambda;
  out.terminal = cls;
  out.domain_end = x_end;
  if (bc == BoundaryClass::Divergent && cls.kind == TerminalKind::AtEvenPi) {
    out.W = cls.branch;  // attractor branch; keeps the staircase on unit steps
  } else {
    out.W = (y[0] - alpha0) / (2.0 * kPi);
  }
  return out;
}

int count_bound_states(const ForceFunction& A, const WindingConfig& cfg) {
  if (A.boundary_class() != BoundaryClass::WellShaped)
    throw ClassificationError("count_bound_states requires a well-shaped force function");
  WindingResult r = winding_at_unit_lambda(A, cfg);
  return static_cast<int>(std::llround(r.W));
}

// ---------------------------------------------------------------------------
// eigenvalue search

namespace {

struct StepEval {
  std::optional<int> step;
  bool at_jump = false;
};

StepEval eval_step(const ForceFunction& A, double lambda, const WindingConfig& cfg) {
  if (A.boundary_class() == BoundaryClass::WellShaped && lambda >= 1.0) {
    StepEval e;
    e.step = count_bound_states(A, cfg);
    return e;
  }
  WindingResult r = winding_number(A, lambda, cfg);
  StepEval e;
  e.step = winding_step(r);
  e.at_jump = winding_at_jump(r);
  if (!e.step) {
    // one retry with a longer boundary run before giving up
    WindingConfig retry = cfg;
    retry.tail_cap = 4.0 * cfg.tail_cap;
    r = winding_number(A, lambda, retry);
    e.step = winding_step(r);
    e.at_jump = winding_at_jump(r);
  }
  return e;
}

struct Bracket {
  double lo, hi;
  int w_lo, w_hi;
};

}  // namespace

SpectrumResult find_eigenvalues(const ForceFunction& A, const EigenSearchConfig& cfg) {
  const BoundaryClass bc = A.boundary_class();
  if (bc == BoundaryClass::Other)
    throw ClassificationError("find_eigenvalues needs a well-shaped or divergent force function");

  double lo = std::max(cfg.lambda_lo, 0.0);
  double hi = cfg.lambda_hi;
  if (bc == BoundaryClass::WellShaped) {
    hi = hi <= 0.0 ? 1.0 : std::min(hi, 1.0);
  } else if (hi <= 0.0) {
    hi = 3.2;
  }
  if (!(hi > lo)) throw ConfigError("find_eigenvalues: empty lambda range");

  SpectrumResult out;
  std::vector<double> found;           // bracket midpoints, plus lambda = 0 when detected
  std::vector<Eigenpair> proto;        // winding bookkeeping per found value

  if (bc == BoundaryClass::Divergent && lo <= 0.0) {
    ZeroLambdaTest zt = test_zero_lambda(A, cfg.reconstruct);
    if (zt.is_eigenvalue) {
      Eigenpair p;
      p.lambda = 0.0;
      p.E = 0.0;
      p.winding_below = 0;
      p.winding_above = 1;
      p.bracket_width = 0.0;
      found.push_back(0.0);
      proto.push_back(p);
    }
  }

  // keep lambda = 0 off the scan grid; the divergent case handles it above
  // and the well-shaped shot at 0 is pinned at alpha = 0
  const double scan_lo = std::max(lo, std::min(1e-9, cfg.tol_lambda));
  const int n = std::max(2, cfg.scan_points);
  std::vector<double> grid(n + 1);
  for (int i = 0; i <= n; ++i) grid[i] = scan_lo + (hi - scan_lo) * i / n;

  std::vector<StepEval> evals(grid.size());
  auto eval_guarded = [&](std::size_t i) {
    try {
      evals[i] = eval_step(A, grid[i], cfg.winding);
    } catch (const Error&) {
      evals[i] = StepEval{};  // unresolved; reported as a suspect below
    }
  };
  const int threads = std::max(1, cfg.threads);
  if (threads == 1) {
    for (std::size_t i = 0; i < grid.size(); ++i) eval_guarded(i);
  } else {
    std::vector<std::thread> pool;
    std::size_t per = (grid.size() + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      std::size_t b = t * per, e = std::min(grid.size(), b + per);
      if (b >= e) break;
      pool.emplace_back([&, b, e] {
        for (std::size_t i = b; i < e; ++i) eval_guarded(i);
      });
    }
    for (auto& th : pool) th.join();
  }

  // fill unresolved grid points from their nearest resolved neighbor so they
  // cannot fake a jump
  for (std::size_t i = 0; i < evals.size(); ++i) {
    if (evals[i].step) continue;
    out.suspects.push_back({grid[i > 0 ? i - 1 : 0], grid[std::min(i + 1, grid.size() - 1)],
                            "unresolved winding at scan point"});
    for (std::size_t d = 1; d < evals.size() && !evals[i].step; ++d) {
      if (i >= d && evals[i - d].step) evals[i].step = evals[i - d].step;
      if (i + d < evals.size() && evals[i + d].step) evals[i].step = evals[i + d].step;
    }
  }
  for (const auto& e : evals)
    if (!e.step)
      throw ClassificationError("winding scan could not classify any grid point");

  std::vector<Bracket> stack;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    int wl = *evals[i].step, wr = *evals[i + 1].step;
    if (wr > wl) stack.push_back({grid[i], grid[i + 1], wl, wr});
  }

  while (!stack.empty()) {
    Bracket b = stack.back();
    stack.pop_back();

    // split multi-jump cells until each bracket carries exactly one unit jump
    while (b.w_hi - b.w_lo > 1 && (b.hi - b.lo) > cfg.tol_lambda) {
      double mid = 0.5 * (b.lo + b.hi);
      StepEval em = eval_step(A, mid, cfg.winding);
      if (!em.step) {
        out.suspects.push_back({b.lo, b.hi, "unresolved winding while splitting bracket"});
        b.w_hi = b.w_lo;  // drop
        break;
      }
      int wm = *em.step;
      if (wm > b.w_lo) stack.push_back({b.lo, mid, b.w_lo, wm});
      b.lo = mid;
      b.w_lo = wm;
    }
    if (b.w_hi - b.w_lo > 1) {
      out.suspects.push_back({b.lo, b.hi, "multiple eigenvalues within tol_lambda"});
      continue;
    }
    if (b.w_hi - b.w_lo != 1) continue;

    bool bad = false;
    while ((b.hi - b.lo) > cfg.tol_lambda) {
      double mid = 0.5 * (b.lo + b.hi);
      if (mid == b.lo || mid == b.hi) break;
      StepEval em = eval_step(A, mid, cfg.winding);
      if (!em.step) {
        out.suspects.push_back({b.lo, b.hi, "unresolved winding inside bracket"});
        bad = true;
        break;
      }
      // a repulser terminal means mid sits on the jump itself; treat it as
      // already past the lower plateau
      bool upper = em.at_jump ? (*em.step + 1 > b.w_lo) : (*em.step > b.w_lo);
      if (upper)
        b.hi = mid;
      else
        b.lo = mid;
    }
    if (bad) continue;

    Eigenpair p;
    p.lambda = 0.5 * (b.lo + b.hi);
    p.E = p.lambda * p.lambda;
    p.winding_below = b.w_lo;
    p.winding_above = b.w_hi;
    p.bracket_width = b.hi - b.lo;
    found.push_back(p.lambda);
    proto.push_back(p);
  }

  // ascending order fixes the level indices
  std::vector<std::size_t> order(found.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b2) { return found[a] < found[b2]; });

  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    Eigenpair p = proto[order[rank]];
    p.n = static_cast<int>(rank);
    if (cfg.build_eigenfunctions) {
      Eigenpair full = reconstruct_eigenfunction(A, p.lambda, p.n, cfg.reconstruct);
      full.winding_below = p.winding_below;
      full.winding_above = p.winding_above;
      full.bracket_width = p.bracket_width;
      out.levels.push_back(std::move(full));
    } else {
      out.levels.push_back(std::move(p));
    }
  }
  std::sort(out.suspects.begin(), out.suspects.end(),
            [](const SuspectInterval& a, const SuspectInterval& b2) { return a.lo < b2.lo; });
  return out;
}

// ---------------------------------------------------------------------------
// eigenfunction reconstruction

EnvelopeCut envelope_cut(const std::vector<double>& alpha, const std::vector<double>& log_rho,
                         BoundaryClass bc, double lambda, double rise_margin) {
  const std::size_t n = log_rho.size();
  if (n < 3) return {n - 1, false};

  // band around the repulser family the critical solution ends on
  double band = 0.3;
  auto repulser_distance = [&](double a) {
    if (bc == BoundaryClass::WellShaped) {
      const double s = std::asin(std::min(lambda, 1.0));
      const double nu = std::round((a + s - kPi) / (2.0 * kPi));
      return std::abs(a - ((2.0 * nu + 1.0) * kPi - s));
    }
    const double no = std::round((a - kPi) / (2.0 * kPi));
    return std::abs(a - ((2.0 * no + 1.0) * kPi));
  };
  if (bc == BoundaryClass::WellShaped)
    band = std::min(band, 0.4 * (kPi - 2.0 * std::asin(std::min(lambda, 1.0))));

  std::size_t i_hug = n;  // last sample inside the band
  for (std::size_t i = n; i-- > 0;) {
    if (repulser_distance(alpha[i]) < band) {
      i_hug = i;
      break;
    }
  }
  if (i_hug == n) return {n - 1, false};  // never reached the repulser

  std::size_t i_min = i_hug;
  for (std::size_t i = i_hug; i < n; ++i)
    if (log_rho[i] < log_rho[i_min]) i_min = i;
  double rebound = 0.0;
  for (std::size_t i = i_min; i < n; ++i)
    rebound = std::max(rebound, log_rho[i] - log_rho[i_min]);
  if (i_min + 1 < n && rebound > rise_margin) return {i_min, true};
  return {n - 1, false};
}

Eigenpair reconstruct_eigenfunction(const ForceFunction& A, double lambda_n, int expected_index,
                                    const ReconstructConfig& cfg) {
  const BoundaryClass bc = A.boundary_class();
  if (bc == BoundaryClass::Other)
    throw ClassificationError("reconstruct_eigenfunction: unsupported boundary class");
  const double L = cfg.half_width > 0.0 ? cfg.half_width : A.half_width();

  const std::size_t half = static_cast<std::size_t>(std::llround(L / cfg.grid_step));
  const std::size_t npts = 2 * half + 1;
  std::vector<double> xs(npts);
  for (std::size_t i = 0; i < npts; ++i) xs[i] = (static_cast<double>(i) - half) * cfg.grid_step;
  xs.front() = -L;
  xs.back() = L;

  const double alpha0 =
      bc == BoundaryClass::WellShaped ? fixed_points(std::min(lambda_n, 1.0)).stable : kPi;

  IntegrateOptions iopt;
  iopt.tol = cfg.tol;
  iopt.max_step = resample_max_step(cfg.tol);
  PendulumTrajectory traj = integrate(A, lambda_n, alpha0, L, iopt);

  const HermiteTable alpha_tab(traj.xs, traj.alpha, traj.alpha_slope);
  const HermiteTable rho_tab(traj.xs, traj.log_rho, traj.log_rho_slope);
  std::vector<double> alpha(npts), log_rho(npts);
  for (std::size_t i = 0; i < npts; ++i) {
    alpha[i] = alpha_tab.value(xs[i]);
    log_rho[i] = rho_tab.value(xs[i]);
  }

  EnvelopeCut cut = envelope_cut(alpha, log_rho, bc, lambda_n, cfg.rise_margin);

  // scale by the peak of log psi so the exponentials stay in range
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i <= cut.cut; ++i) {
    double s = std::abs(std::sin(0.5 * alpha[i]));
    double lp = 0.5 * log_rho[i] + std::log(s + 1e-300);
    m = std::max(m, lp);
  }

  std::vector<double> psi(npts, 0.0);
  for (std::size_t i = 0; i <= cut.cut; ++i)
    psi[i] = std::exp(0.5 * log_rho[i] - m) * std::sin(0.5 * alpha[i]);

  // analytic decay tail past the cut: psi ~ exp(-integral sqrt(V - E))
  const Potential V = riccati_potential(A, Partner::Minus);
  const double E = lambda_n * lambda_n;
  if (cut.truncated) {
    double accum = 0.0;
    double prev_k = std::sqrt(std::max(V(xs[cut.cut]) - E, 0.0));
    for (std::size_t i = cut.cut + 1; i < npts; ++i) {
      double k = std::sqrt(std::max(V(xs[i]) - E, 0.0));
      accum += 0.5 * (k + prev_k) * (xs[i] - xs[i - 1]);
      prev_k = k;
      psi[i] = psi[cut.cut] * std::exp(-accum);
    }
  }

  // normalize; lead lobe positive
  std::vector<double> psi2(npts);
  for (std::size_t i = 0; i < npts; ++i) psi2[i] = psi[i] * psi[i];
  double nrm = std::sqrt(trapezoid(xs, psi2));
  if (!(nrm > 0.0)) throw ConsistencyError("reconstruction produced a null wavefunction");
  double peak = 0.0;
  for (double v : psi) peak = std::max(peak, std::abs(v));
  double lead = 0.0;
  for (double v : psi)
    if (std::abs(v) > 0.01 * peak) {
      lead = v;
      break;
    }
  double scale = (lead < 0.0 ? -1.0 : 1.0) / nrm;
  for (double& v : psi) v *= scale;

  int nodes = 0;
  {
    double prev = 0.0;
    for (std::size_t i = 0; i <= cut.cut; ++i) {
      double v = psi[i];
      if (v == 0.0) continue;
      if (prev != 0.0 && v * prev < 0.0) ++nodes;
      prev = v;
    }
  }
  if (nodes != expected_index)
    throw ConsistencyError("node count " + std::to_string(nodes) + " does not match level index " +
                           std::to_string(expected_index) + " (tol_lambda too loose?)");

  Eigenpair p;
  p.n = expected_index;
  p.lambda = lambda_n;
  p.E = E;
  p.xs = std::move(xs);
  p.psi = std::move(psi);
  p.nodes = nodes;
  p.winding_below = expected_index;
  p.winding_above = expected_index + 1;
  p.pad_begin = cut.truncated ? cut.cut + 1 : npts;
  return p;
}

ZeroLambdaTest test_zero_lambda(const ForceFunction& A, const ReconstructConfig& cfg) {
  if (A.boundary_class() != BoundaryClass::Divergent)
    throw ClassificationError("test_zero_lambda applies to divergent force functions");
  const double L = cfg.half_width > 0.0 ? cfg.half_width : A.half_width();

  IntegrateOptions iopt;
  iopt.tol = cfg.tol;
  iopt.max_step = resample_max_step(cfg.tol);
  PendulumTrajectory traj = integrate(A, 0.0, kPi, L, iopt);

  EnvelopeCut cut =
      envelope_cut(traj.alpha, traj.log_rho, BoundaryClass::Divergent, 0.0, cfg.rise_margin);

  ZeroLambdaTest out;
  for (std::size_t i = 0; i <= cut.cut; ++i)
    out.max_angle_dev = std::max(out.max_angle_dev, std::abs(traj.alpha[i] - kPi));
  double peak = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i <= cut.cut; ++i) peak = std::max(peak, traj.log_rho[i]);
  out.left_decay = peak - traj.log_rho.front();
  out.right_decay = peak - traj.log_rho[cut.cut];
  constexpr double kDecayMargin = 10.0;  // e^-10 suppression at the kept ends
  out.is_eigenvalue =
      out.max_angle_dev < 1e-3 && out.left_decay > kDecayMargin && out.right_decay > kDecayMargin;
  return out;
}

IsospectralReport isospectral_check(const ForceFunction& A, double half_width, int M, int kmax) {
  const double L = half_width > 0.0 ? half_width : A.half_width();
  const Potential Vm = riccati_potential(A, Partner::Minus);
  const Potential Vp = riccati_potential(A, Partner::Plus);
  oracle::Options opt;
  opt.eigenvectors = false;
  auto sm = oracle::lowest_eigenvalues([&](double x) { return Vm(x); }, L, M, kmax, opt);
  auto sp = oracle::lowest_eigenvalues([&](double x) { return Vp(x); }, L, M, kmax, opt);

  IsospectralReport rep;
  rep.count_minus = static_cast<int>(sm.levels.size());
  rep.count_plus = static_cast<int>(sp.levels.size());
  const std::size_t n = std::min(sm.levels.size(), sp.levels.size());
  for (std::size_t i = 0; i < n; ++i) {
    IsospectralLevel lv;
    lv.n = static_cast<int>(i);
    lv.E_minus = sm.levels[i].E;
    lv.E_plus = sp.levels[i].E;
    lv.diff = lv.E_minus - lv.E_plus;
    rep.max_abs_diff = std::max(rep.max_abs_diff, std::abs(lv.diff));
    rep.levels.push_back(lv);
  }
  return rep;
}

}  // namespace pendspec
