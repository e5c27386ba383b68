// Acceptance suite: end-to-end checks of the solver pipeline at pinned
// tolerances, one pass/fail line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "pendspec/critical_curve.hpp"
#include "pendspec/interp.hpp"
#include "pendspec/oracle.hpp"
#include "pendspec/spectrum.hpp"
#include "pendspec/zakharov_shabat.hpp"

using namespace pendspec;

namespace {

constexpr double kPi = std::numbers::pi;

struct Criterion {
  int id;
  std::string label;
  bool pass = true;
  double seconds = 0.0;
  std::string note;
};

std::vector<Criterion> g_results;
std::vector<std::pair<int, int>> g_node_pairs;  // (nodes, index) pooled from criteria 1-4

void run(int id, const std::string& label, double budget_s,
         const std::function<bool(std::string&)>& body) {
  Criterion c;
  c.id = id;
  c.label = label;
  auto t0 = std::chrono::steady_clock::now();
  try {
    c.pass = body(c.note);
  } catch (const std::exception& e) {
    c.pass = false;
    c.note = std::string("exception: ") + e.what();
  }
  c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (c.seconds > budget_s) {
    c.pass = false;
    c.note += " [over time budget " + std::to_string(budget_s) + " s]";
  }
  g_results.push_back(c);
  std::printf("%s criterion %d: %s (%.2f s)%s%s\n", c.pass ? "PASS" : "FAIL", id,
              label.c_str(), c.seconds, c.note.empty() ? "" : " -- ", c.note.c_str());
  std::fflush(stdout);
}

double normalized_dev(const Eigenpair& p, const std::function<double(double)>& ref,
                      double window) {
  std::vector<double> r(p.xs.size()), r2(p.xs.size());
  for (std::size_t i = 0; i < p.xs.size(); ++i) {
    r[i] = ref(p.xs[i]);
    r2[i] = r[i] * r[i];
  }
  double s = 1.0 / std::sqrt(trapezoid(p.xs, r2));
  double worst = 0.0;
  for (std::size_t i = 0; i < p.xs.size(); ++i) {
    if (window > 0.0 && std::abs(p.xs[i]) > window) continue;
    worst = std::max(worst, std::abs(p.psi[i] - s * r[i]));
  }
  return worst;
}

char buf[256];

std::string fmt(const char* f, double a, double b = 0.0) {
  std::snprintf(buf, sizeof(buf), f, a, b);
  return buf;
}

}  // namespace

int main() {
  std::printf("acceptance suite\n================\n");

  // 1. sech-well exactness: one level at lambda_bar^2, |E0 - lb^2| < 1e-6,
  //    under 5 s per case
  for (double lb : {0.3, 0.5, 0.8, 1.0 / std::sqrt(2.0)}) {
    run(1, fmt("sech well exactness, lambda_bar = %.6f", lb), 5.0, [lb](std::string& note) {
      ForceFunction A = catalog("sech_well", {{"lambda_bar", lb}});
      SpectrumResult res = find_eigenvalues(A);
      if (res.levels.size() != 1) {
        note = "expected exactly one level, got " + std::to_string(res.levels.size());
        return false;
      }
      double err = std::abs(res.levels[0].E - lb * lb);
      note = fmt("|E0 - lb^2| = %.3e", err);
      g_node_pairs.push_back({res.levels[0].nodes, res.levels[0].n});
      return err < 1e-6;
    });
  }

  // 2. construction golden test: curve-built potential has E0 = 1/2 and its
  //    ground state matches the printed eigenfunction on [-8, 8]
  run(2, "constructed cosh-ratio well: E0 = 1/2 and printed ground state", 10.0,
      [](std::string& note) {
        CriticalCurve c = curve_catalog("eq10");
        ForceFunction A = force_from_curve(c);
        SpectrumResult res = find_eigenvalues(A);
        if (res.levels.size() != 1) {
          note = "expected one level";
          return false;
        }
        double e_err = std::abs(res.levels[0].E - 0.5);
        auto ref = [](double x) {
          double mag = std::sqrt(std::sqrt(2.0 * std::cosh(2 * x)) /
                                 std::pow(2.0 * std::cosh(x), 1.0 + std::sqrt(2.0)));
          return mag * std::sin((kPi + std::atan(std::sinh(2 * x))) / 4.0);
        };
        double psi_err = normalized_dev(res.levels[0], ref, 8.0);
        note = fmt("|E0 - 1/2| = %.3e, max |psi - ref| = %.3e", e_err, psi_err);
        g_node_pairs.push_back({res.levels[0].nodes, res.levels[0].n});
        return e_err < 1e-6 && psi_err < 1e-6;
      });

  // 3. merged-pair well: count is one, level near 0.5, and within the
  //    reference-solver bound at M = 8000
  run(3, "merged-pair well: count 1, E0 near 0.5, oracle agreement", 20.0,
      [](std::string& note) {
        ForceFunction A = catalog("eq14_generated");
        if (count_bound_states(A) != 1) {
          note = "count_bound_states != 1";
          return false;
        }
        SpectrumResult res = find_eigenvalues(A);
        if (res.levels.size() != 1) {
          note = "expected one level";
          return false;
        }
        double E = res.levels[0].E;
        Potential V = riccati_potential(A, Partner::Minus);
        oracle::Options opt;
        opt.eigenvectors = false;
        auto spec =
            oracle::lowest_eigenvalues([&](double x) { return V(x); }, 20.0, 8000, 4, opt);
        if (spec.levels.size() != 1) {
          note = "oracle level count mismatch";
          return false;
        }
        double bound = std::max(1e-4, spec.levels[0].error_bound);
        double diff = std::abs(E - spec.levels[0].E);
        note = fmt("|E0 - 0.5| = %.3e, |E0 - oracle| = %.3e", std::abs(E - 0.5), diff);
        g_node_pairs.push_back({res.levels[0].nodes, res.levels[0].n});
        return std::abs(E - 0.5) < 0.02 && diff < bound;
      });

  // 4. harmonic spectrum {0, 2, 4, 6, 8} within 1e-3 and gaussian ground state
  run(4, "harmonic force: first five levels and gaussian ground state", 30.0,
      [](std::string& note) {
        ForceFunction A = catalog("linear_harmonic");
        EigenSearchConfig cfg;
        cfg.lambda_hi = 3.1;
        SpectrumResult res = find_eigenvalues(A, cfg);
        if (res.levels.size() != 5) {
          note = "expected five levels, got " + std::to_string(res.levels.size());
          return false;
        }
        double worst_e = 0.0;
        for (int n = 0; n < 5; ++n) {
          worst_e = std::max(worst_e, std::abs(res.levels[n].E - 2.0 * n));
          g_node_pairs.push_back({res.levels[n].nodes, res.levels[n].n});
        }
        double psi_err = normalized_dev(
            res.levels[0], [](double x) { return std::exp(-0.5 * x * x); }, 0.0);
        note = fmt("max |E_n - 2n| = %.3e, max |psi0 - gaussian| = %.3e", worst_e, psi_err);
        return worst_e < 1e-3 && psi_err < 1e-6;
      });

  // 5. monotone staircase over random pairs, and unit jumps at every detected
  //    eigenvalue
  run(5, "monotone winding staircase and unit jumps (>= 200 pairs per entry)", 60.0,
      [](std::string& note) {
        std::mt19937 rng(20240601u);
        auto unit = [&rng]() {
          return (static_cast<double>(rng()) + 0.5) / (static_cast<double>(rng.max()) + 1.0);
        };
        int violations = 0;
        const std::vector<std::pair<std::string, Params>> entries = {
            {"constant", {}},
            {"sech_well", {{"lambda_bar", 0.8}}},
            {"eq10_example", {}},
            {"eq14_generated", {}},
            {"linear_harmonic", {}}};
        for (const auto& [id, params] : entries) {
          ForceFunction A = catalog(id, params);
          for (int i = 0; i < 200; ++i) {
            double l1 = 0.999998 * unit() + 1e-6;
            double l2 = 0.999998 * unit() + 1e-6;
            if (l1 > l2) std::swap(l1, l2);
            auto w1 = winding_step(winding_number(A, l1));
            auto w2 = winding_step(winding_number(A, l2));
            if (!w1 || !w2 || *w2 < *w1) ++violations;
          }
        }
        // unit jumps across the catalog eigenvalues
        int bad_jumps = 0;
        const double delta = 1e-9;  // 10 * tol_lambda
        for (const auto& [id, params] : entries) {
          ForceFunction A = catalog(id, params);
          EigenSearchConfig cfg;
          cfg.build_eigenfunctions = false;
          if (A.boundary_class() == BoundaryClass::Divergent) cfg.lambda_hi = 3.1;
          SpectrumResult res = find_eigenvalues(A, cfg);
          for (const auto& p : res.levels) {
            int below = p.lambda - delta > 0.0
                            ? winding_step(winding_number(A, p.lambda - delta)).value_or(-99)
                            : 0;
            int above = winding_step(winding_number(A, p.lambda + delta)).value_or(-99);
            if (above - below != 1) ++bad_jumps;
          }
        }
        note = fmt("violations = %.0f, bad jumps = %.0f", violations, bad_jumps);
        return violations == 0 && bad_jumps == 0;
      });

  // 6. node-winding identity over every eigenpair produced above
  run(6, "node count equals level index for every eigenpair", 1.0, [](std::string& note) {
    int bad = 0;
    for (auto [nodes, n] : g_node_pairs)
      if (nodes != n) ++bad;
    note = fmt("%.0f eigenpairs checked, %.0f mismatches",
               static_cast<double>(g_node_pairs.size()), static_cast<double>(bad));
    return bad == 0 && !g_node_pairs.empty();
  });

  // 7. isospectral Riccati partners
  run(7, "isospectral partners agree level by level within 1e-5", 30.0,
      [](std::string& note) {
        IsospectralReport a = isospectral_check(catalog("sech_well", {{"lambda_bar", 0.8}}));
        IsospectralReport b = isospectral_check(catalog("eq10_example"));
        note = fmt("max |dE| = %.3e / %.3e", a.max_abs_diff, b.max_abs_diff);
        bool has_design = false;
        for (const auto& lv : a.levels) has_design |= std::abs(lv.E_minus - 0.64) < 1e-5;
        return a.max_abs_diff < 1e-5 && b.max_abs_diff < 1e-5 && has_design &&
               !a.levels.empty() && !b.levels.empty();
      });

  // 8. round trip through the two-component system at each detected level
  run(8, "two-component round trip: angles within 1e-6, residuals within 1e-5", 20.0,
      [](std::string& note) {
        ForceFunction A = catalog("sech_well", {{"lambda_bar", 0.8}});
        EigenSearchConfig cfg;
        cfg.build_eigenfunctions = false;
        SpectrumResult res = find_eigenvalues(A, cfg);
        if (res.levels.empty()) {
          note = "no levels found";
          return false;
        }
        double worst_alpha = 0.0, worst_res = 0.0;
        for (const auto& p : res.levels) {
          zs::CrossCheck r = zs::cross_check(A, p.lambda);
          worst_alpha = std::max(worst_alpha, r.max_alpha_dev);
          worst_res = std::max({worst_res, r.residual_minus, r.residual_plus});
        }
        note = fmt("max |dalpha| = %.3e, max residual = %.3e", worst_alpha, worst_res);
        return worst_alpha < 1e-6 && worst_res < 1e-5;
      });

  // 9. reference-solver convergence: Richardson ratios near 4
  run(9, "oracle Richardson ratios in [3.5, 4.5] for box and harmonic", 60.0,
      [](std::string& note) {
        auto ratio_for = [](const std::function<double(double)>& V, double L, int M, int k) {
          double e1 = oracle::raw_eigenvalue(V, L, M, k);
          double e2 = oracle::raw_eigenvalue(V, L, 2 * M, k);
          double e4 = oracle::raw_eigenvalue(V, L, 4 * M, k);
          return std::abs(e1 - e2) / std::abs(e2 - e4);
        };
        double lo = 10.0, hi = 0.0;
        for (int k : {0, 1, 2}) {
          double r = ratio_for([](double) { return 0.0; }, kPi / 2, 500, k);
          lo = std::min(lo, r);
          hi = std::max(hi, r);
        }
        for (int k : {0, 2, 4}) {
          double r = ratio_for([](double x) { return x * x - 1.0; }, 8.0, 500, k);
          lo = std::min(lo, r);
          hi = std::max(hi, r);
        }
        note = fmt("ratios in [%.3f, %.3f]", lo, hi);
        return lo > 3.5 && hi < 4.5;
      });

  int failures = 0;
  for (const auto& c : g_results)
    if (!c.pass) ++failures;
  std::printf("================\n%zu criteria run, %d failed\n", g_results.size(), failures);
  return failures == 0 ? 0 : 1;
}
