#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>

#include "pendspec/errors.hpp"
#include "pendspec/force_function.hpp"

using namespace pendspec;

namespace {

double max_on_grid(double lo, double hi, int n, const std::function<double(double)>& f) {
  double worst = 0.0;
  for (int i = 0; i <= n; ++i) {
    double x = lo + (hi - lo) * i / n;
    worst = std::max(worst, f(x));
  }
  return worst;
}

}  // namespace

TEST_SUITE("forcefields") {

TEST_CASE("catalog: constant force gives the flat unit potential") {
  ForceFunction A = catalog("constant");
  CHECK(A.boundary_class() == BoundaryClass::WellShaped);
  Potential V = riccati_potential(A, Partner::Minus);
  for (double x : {-20.0, -3.2, 0.0, 7.7, 20.0}) {
    CHECK(A(x) == 1.0);
    CHECK(V(x) == 1.0);
  }
}

TEST_CASE("catalog: linear force gives the shifted harmonic potential") {
  ForceFunction A = catalog("linear_harmonic");
  CHECK(A.boundary_class() == BoundaryClass::Divergent);
  CHECK(A.half_width() == 8.0);
  Potential V = riccati_potential(A, Partner::Minus);
  for (double x : {-5.0, -1.0, 0.0, 0.5, 3.0}) {
    CHECK(A(x) == x);
    CHECK(V(x) == doctest::Approx(x * x - 1.0).epsilon(1e-15));
  }
}

TEST_CASE("catalog: sech_well matches the sech-squared potential") {
  const double lb = 0.8;
  const double k = std::sqrt(1.0 - lb * lb);
  ForceFunction A = catalog("sech_well", {{"lambda_bar", lb}});
  CHECK(A.boundary_class() == BoundaryClass::WellShaped);
  Potential V = riccati_potential(A, Partner::Minus);
  double worst = max_on_grid(-15, 15, 600, [&](double x) {
    double ref = 1.0 - 2.0 * (1.0 - lb * lb) / std::pow(std::cosh(k * x), 2);
    return std::abs(V(x) - ref);
  });
  CHECK(worst < 1e-13);
}

TEST_CASE("catalog: sech_well rejects lambda_bar outside (0,1)") {
  CHECK_THROWS_AS(catalog("sech_well", {{"lambda_bar", 1.0}}), ConfigError);
  CHECK_THROWS_AS(catalog("sech_well", {{"lambda_bar", 1.3}}), ConfigError);
  CHECK_THROWS_AS(catalog("sech_well", {{"lambda_bar", 0.0}}), ConfigError);
  CHECK_THROWS_AS(catalog("sech_well", {}), ConfigError);
}

TEST_CASE("catalog: eq10_example force and potential match their closed forms") {
  ForceFunction A = catalog("eq10_example");
  CHECK(A(0.0) == doctest::Approx((std::sqrt(2.0) - 1.0) / 2.0).epsilon(1e-15));
  Potential V = riccati_potential(A, Partner::Minus);

  auto ref_a = [](double x) {
    double c1 = std::cosh(x), c2 = std::cosh(2 * x);
    return (std::sqrt(2.0) * c2 - 1.0) / (2.0 * c1 * std::sqrt(c2));
  };
  auto ref_v = [](double x) {
    double c1 = std::cosh(x), c2 = std::cosh(2 * x);
    double s1 = std::sinh(x), s3 = std::sinh(3 * x);
    return (s1 - (std::sqrt(2.0) + 1.0) * s3) /
               (2.0 * std::sqrt(2.0) * c1 * c1 * std::pow(c2, 1.5)) +
           std::pow(1.0 - std::sqrt(2.0) * c2, 2) / (4.0 * c1 * c1 * c2);
  };
  double worst_a = max_on_grid(-8, 8, 400, [&](double x) { return std::abs(A(x) - ref_a(x)); });
  double worst_v = max_on_grid(-8, 8, 400, [&](double x) { return std::abs(V(x) - ref_v(x)); });
  CHECK(worst_a < 1e-14);
  CHECK(worst_v < 1e-13);
  CHECK(V(0.0) == doctest::Approx(ref_v(0.0)).epsilon(1e-14));
}

TEST_CASE("catalog: eq14_generated potential matches the cosh-ratio closed form") {
  ForceFunction A = catalog("eq14_generated");
  Potential V = riccati_potential(A, Partner::Minus);
  const double r2 = std::sqrt(2.0);
  double worst = max_on_grid(-10, 10, 500, [&](double x) {
    double ref = (std::cosh(2 * r2 * x) - 4 * std::sinh(r2 * x) + 1.0) /
                 (std::cosh(2 * r2 * x) + 4 * r2 * std::cosh(r2 * x) + 5.0);
    return std::abs(V(x) - ref);
  });
  CHECK(worst < 1e-13);
  CHECK(V(0.0) == doctest::Approx(2.0 / (6.0 + 4.0 * r2)).epsilon(1e-14));
}

TEST_CASE("catalog: unknown and indirect ids") {
  CHECK_THROWS_AS(catalog("not_a_potential"), ConfigError);
  CHECK_THROWS_AS(catalog("custom_sampled"), ConfigError);
}

TEST_CASE("partner potentials: V + V~ = 2 A^2 pointwise for the whole catalog") {
  for (const std::string id : {"constant", "sech_well", "eq10_example", "eq14_generated",
                               "linear_harmonic"}) {
    ForceFunction A = id == "sech_well" ? catalog(id, {{"lambda_bar", 0.37}}) : catalog(id);
    PotentialPair pair = potential_pair(A);
    double L = std::min(A.half_width(), 12.0);
    double worst = max_on_grid(-L, L, 500, [&](double x) {
      double a = A(x);
      return std::abs(pair.V(x) + pair.V_tilde(x) - 2.0 * a * a);
    });
    CAPTURE(id);
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("riccati: centered differences converge to the analytic slope at second order") {
  for (const std::string id : {"sech_well", "eq10_example", "eq14_generated"}) {
    ForceFunction A = id == "sech_well" ? catalog(id, {{"lambda_bar", 0.55}}) : catalog(id);
    auto resid = [&](double h) {
      return max_on_grid(-5, 5, 200, [&](double x) {
        return std::abs((A(x + h) - A(x - h)) / (2.0 * h) - A.derivative(x));
      });
    };
    double ratio = resid(1e-3) / resid(5e-4);
    CAPTURE(id);
    CHECK(ratio > 3.5);
    CHECK(ratio < 4.5);
  }
}

TEST_CASE("well-shaped catalog entries satisfy the boundary invariants") {
  for (const std::string id : {"constant", "sech_well", "eq10_example", "eq14_generated"}) {
    ForceFunction A = id == "sech_well" ? catalog(id, {{"lambda_bar", 0.8}}) : catalog(id);
    CAPTURE(id);
    CHECK(check_well_shaped(A));
  }
}

TEST_CASE("sampled: grids must be strictly increasing with at least 3 points") {
  CHECK_THROWS_AS(ForceFunction::sampled({0.0, 1.0}, {1.0, 1.0}), GridError);
  CHECK_THROWS_AS(ForceFunction::sampled({0.0, 1.0, 0.5}, {1.0, 1.0, 1.0}), GridError);
  CHECK_THROWS_AS(ForceFunction::sampled({0.0, 0.0, 1.0}, {1.0, 1.0, 1.0}), GridError);
  CHECK_THROWS_AS(ForceFunction::sampled({0.0, 1.0, 2.0}, {1.0, 1.0}), GridError);
}

TEST_CASE("sampled: cubic interpolation tracks a smooth force function") {
  const double lb = 0.6;
  ForceFunction ref = catalog("sech_well", {{"lambda_bar", lb}});
  std::vector<double> xs, as;
  for (double x = -20.0; x <= 20.0 + 1e-9; x += 0.05) {
    xs.push_back(x);
    as.push_back(ref(x));
  }
  ForceFunction A = ForceFunction::sampled(xs, as);
  CHECK(A.boundary_class() == BoundaryClass::WellShaped);
  CHECK_FALSE(A.closed());
  // centered-difference node slopes bound the scheme at O(h^3) in values
  double worst_v = max_on_grid(-18, 18, 1000, [&](double x) { return std::abs(A(x) - ref(x)); });
  double worst_d = max_on_grid(-18, 18, 1000, [&](double x) {
    return std::abs(A.derivative(x) - ref.derivative(x));
  });
  CHECK(worst_v < 1e-5);
  CHECK(worst_d < 1e-3);
  // clamped outside the table
  CHECK(A(25.0) == A(20.0));
  CHECK(A.derivative(25.0) == 0.0);
}

TEST_CASE("sampled: divergent-looking data classifies as divergent") {
  std::vector<double> xs, as;
  for (double x = -8.0; x <= 8.0 + 1e-9; x += 0.1) {
    xs.push_back(x);
    as.push_back(x);
  }
  ForceFunction A = ForceFunction::sampled(xs, as);
  CHECK(A.boundary_class() == BoundaryClass::Divergent);
}

TEST_CASE("csv loader: header optional, separators tolerated, junk rejected") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "pendspec_csv_test";
  fs::create_directories(dir);

  {
    std::ofstream f(dir / "ok.csv");
    f << "x,A\n";
    for (double x = -10.0; x <= 10.0 + 1e-9; x += 0.1) f << x << "," << 1.0 << "\n";
  }
  ForceFunction A = load_sampled_csv((dir / "ok.csv").string());
  CHECK(A(0.3) == doctest::Approx(1.0));
  CHECK(A.boundary_class() == BoundaryClass::WellShaped);

  {
    std::ofstream f(dir / "bad.csv");
    f << "0,1\nnot,numbers\n";
  }
  CHECK_THROWS_AS(load_sampled_csv((dir / "bad.csv").string()), ConfigError);
  CHECK_THROWS_AS(load_sampled_csv((dir / "missing.csv").string()), ConfigError);
}

}  // TEST_SUITE
