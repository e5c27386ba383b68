#include "pendspec/force_function.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "pendspec/errors.hpp"
#include "pendspec/interp.hpp"

namespace pendspec {

struct ForceFunction::Impl {
  std::string id;
  std::function<double(double)> value;
  std::function<double(double)> slope;
  BoundaryClass bc = BoundaryClass::Other;
  double half_width = 20.0;
  bool closed = true;
};

ForceFunction ForceFunction::closed_form(std::string id, std::function<double(double)> value,
                                         std::function<double(double)> slope, BoundaryClass bc,
                                         double half_width) {
  ForceFunction f;
  auto impl = std::make_shared<Impl>();
  impl->id = std::move(id);
  impl->value = std::move(value);
  impl->slope = std::move(slope);
  impl->bc = bc;
  impl->half_width = half_width;
  impl->closed = true;
  f.impl_ = std::move(impl);
  return f;
}

ForceFunction ForceFunction::sampled(std::vector<double> xs, std::vector<double> values) {
  if (xs.size() < 3)
    throw GridError("sampled force function grid too coarse: need at least 3 points");
  if (xs.size() != values.size())
    throw GridError("sampled force function: grid/value size mismatch");
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (!(xs[i] > xs[i - 1]))
      throw GridError("sampled force function grid must be strictly increasing");

  const std::size_t n = xs.size();
  std::vector<double> slopes(n);
  for (std::size_t i = 1; i + 1 < n; ++i)
    slopes[i] = (values[i + 1] - values[i - 1]) / (xs[i + 1] - xs[i - 1]);
  slopes[0] = (values[1] - values[0]) / (xs[1] - xs[0]);
  slopes[n - 1] = (values[n - 1] - values[n - 2]) / (xs[n - 1] - xs[n - 2]);

  // classify from the data
  BoundaryClass bc = BoundaryClass::Other;
  double max_a = values[0];
  for (double v : values) max_a = std::max(max_a, v);
  const double front = values.front(), back = values.back();
  if (max_a <= 1.0 + 1e-9 && std::abs(front - 1.0) < 1e-6 && std::abs(back - 1.0) < 1e-6) {
    bc = BoundaryClass::WellShaped;
  } else if (std::abs(front) > 1.5 && std::abs(back) > 1.5 &&
             std::abs(front) > std::abs(values[n / 4]) &&
             std::abs(back) > std::abs(values[3 * n / 4])) {
    bc = BoundaryClass::Divergent;
  }

  double hw = std::min(-xs.front(), xs.back());
  if (hw <= 0.0) hw = 0.5 * (xs.back() - xs.front());

  auto table = std::make_shared<HermiteTable>(std::move(xs), std::move(values), std::move(slopes));

  ForceFunction f;
  auto impl = std::make_shared<Impl>();
  impl->id = "custom_sampled";
  impl->value = [table](double x) { return table->value(x); };
  impl->slope = [table](double x) {
    // clamp: constant extension outside the table
    if (x <= table->x_min() || x >= table->x_max()) return 0.0;
    return table->slope(x);
  };
  impl->bc = bc;
  impl->half_width = hw;
  impl->closed = false;
  f.impl_ = std::move(impl);
  return f;
}

double ForceFunction::operator()(double x) const { return impl_->value(x); }
double ForceFunction::derivative(double x) const { return impl_->slope(x); }
BoundaryClass ForceFunction::boundary_class() const { return impl_->bc; }
bool ForceFunction::closed() const { return impl_->closed; }
const std::string& ForceFunction::id() const { return impl_->id; }
double ForceFunction::half_width() const { return impl_->half_width; }

Potential riccati_potential(const ForceFunction& A, Partner partner) {
  if (!A.valid()) throw ConfigError("riccati_potential: empty force function");
  return Potential{A, partner};
}

PotentialPair potential_pair(const ForceFunction& A) {
  return PotentialPair{A, riccati_potential(A, Partner::Minus),
                       riccati_potential(A, Partner::Plus)};
}

namespace {

double get_param(const Params& p, const std::string& key) {
  auto it = p.find(key);
  if (it == p.end()) throw ConfigError("missing parameter '" + key + "'");
  return it->second;
}

ForceFunction make_constant() {
  return ForceFunction::closed_form(
      "constant", [](double) { return 1.0; }, [](double) { return 0.0; },
      BoundaryClass::WellShaped, 20.0);
}

// A = kappa*tanh(kappa x) + lb^2 / (1 + kappa*tanh(kappa x)), kappa = sqrt(1-lb^2).
// Gives V = A^2 - A' = 1 - 2 kappa^2 / cosh^2(kappa x) with the single level E = lb^2.
ForceFunction make_sech_well(const Params& params) {
  double lb = get_param(params, "lambda_bar");
  if (!(lb > 0.0 && lb < 1.0))
    throw ConfigError("sech_well requires lambda_bar in (0, 1)");
  const double k = std::sqrt(1.0 - lb * lb);
  const double lb2 = lb * lb;
  auto value = [k, lb2](double x) {
    double t = std::tanh(k * x);
    return k * t + lb2 / (1.0 + k * t);
  };
  auto slope = [k, lb2](double x) {
    double t = std::tanh(k * x);
    double p = 1.0 + k * t;
    double sech2 = 1.0 - t * t;
    return k * k * sech2 * (1.0 - lb2 / (p * p));
  };
  double hw = std::max(20.0, 12.0 / k);
  return ForceFunction::closed_form("sech_well", value, slope, BoundaryClass::WellShaped, hw);
}

// A = (sqrt(2) cosh(2x) - 1) / (2 cosh(x) sqrt(cosh(2x))); single level at E = 1/2.
// |A - 1| < 1e-20 beyond |x| = 25, where the cosh terms start to overflow.
ForceFunction make_eq10() {
  auto value = [](double x) {
    if (std::abs(x) > 25.0) return 1.0;
    double c1 = std::cosh(x), c2 = std::cosh(2 * x);
    return (std::sqrt(2.0) * c2 - 1.0) / (2.0 * c1 * std::sqrt(c2));
  };
  auto slope = [](double x) {
    if (std::abs(x) > 25.0) return 0.0;
    double c1 = std::cosh(x), c2 = std::cosh(2 * x);
    double s2 = std::sinh(2 * x), s3 = std::sinh(3 * x);
    double num = 2.0 * std::sqrt(2.0) * s2 * c1 * c2 - (std::sqrt(2.0) * c2 - 1.0) * s3;
    return num / (2.0 * c1 * c1 * std::pow(c2, 1.5));
  };
  return ForceFunction::closed_form("eq10_example", value, slope, BoundaryClass::WellShaped,
                                    20.0);
}

// A = 1 / (1 + sqrt(2) sech(sqrt(2) x)); asymmetric well with one level near E = 0.5.
ForceFunction make_eq14() {
  const double r2 = std::sqrt(2.0);
  auto value = [r2](double x) {
    if (std::abs(x) > 400.0) return 1.0;  // cosh would overflow; A is 1 to 1e-200
    double sech = 1.0 / std::cosh(r2 * x);
    return 1.0 / (1.0 + r2 * sech);
  };
  auto slope = [r2](double x) {
    if (std::abs(x) > 400.0) return 0.0;
    double sech = 1.0 / std::cosh(r2 * x);
    double tanh = std::tanh(r2 * x);
    double d = 1.0 + r2 * sech;
    return 2.0 * sech * tanh / (d * d);
  };
  return ForceFunction::closed_form("eq14_generated", value, slope, BoundaryClass::WellShaped,
                                    20.0);
}

ForceFunction make_linear_harmonic() {
  return ForceFunction::closed_form(
      "linear_harmonic", [](double x) { return x; }, [](double) { return 1.0; },
      BoundaryClass::Divergent, 8.0);
}

}  // namespace

ForceFunction catalog(const std::string& id, const Params& params) {
  if (id == "constant") return make_constant();
  if (id == "sech_well") return make_sech_well(params);
  if (id == "eq10_example") return make_eq10();
  if (id == "eq14_generated") return make_eq14();
  if (id == "linear_harmonic") return make_linear_harmonic();
  if (id == "custom_sampled")
    throw ConfigError("custom_sampled needs a CSV file; pass the path instead of the id");
  std::string known;
  for (const auto& k : catalog_ids()) known += " " + k;
  throw ConfigError("unknown catalog id '" + id + "'; known ids:" + known);
}

std::vector<std::string> catalog_ids() {
  return {"constant", "sech_well", "eq10_example", "eq14_generated", "linear_harmonic",
          "custom_sampled"};
}

ForceFunction load_sampled_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open CSV file '" + path + "'");
  std::vector<double> xs, as;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    for (char& c : line)
      if (c == ',' || c == ';' || c == '\t') c = ' ';
    std::istringstream ss(line);
    double x, a;
    if (!(ss >> x >> a)) {
      if (first) {
        first = false;  // header line
        continue;
      }
      throw ConfigError("malformed CSV line in '" + path + "': " + line);
    }
    first = false;
    xs.push_back(x);
    as.push_back(a);
  }
  return ForceFunction::sampled(std::move(xs), std::move(as));
}

bool check_well_shaped(const ForceFunction& A, double tol, double boundary_tol) {
  const double L = A.half_width();
  const int n = 2001;
  for (int i = 0; i < n; ++i) {
    double x = -L + 2.0 * L * i / (n - 1);
    if (A(x) > 1.0 + tol) return false;
  }
  return std::abs(A(-L) - 1.0) < boundary_tol && std::abs(A(L) - 1.0) < boundary_tol;
}

}  // namespace pendspec
