#include "pendspec/critical_curve.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "pendspec/errors.hpp"
#include "pendspec/interp.hpp"

namespace pendspec {

namespace {

constexpr double kPi = std::numbers::pi;

double get_param(const Params& p, const std::string& key, double fallback,
                 bool required = false) {
  auto it = p.find(key);
  if (it == p.end()) {
    if (required) throw ConfigError("missing curve parameter '" + key + "'");
    return fallback;
  }
  return it->second;
}

// 7-point Gauss-Legendre on [a, b]
double gauss7(const std::function<double(double)>& g, double a, double b) {
  static const double xi[7] = {-0.9491079123427585, -0.7415311855993945, -0.4058451513773972,
                               0.0,                 0.4058451513773972,  0.7415311855993945,
                               0.9491079123427585};
  static const double wi[7] = {0.1294849661688697, 0.2797053914892766, 0.3818300505051189,
                               0.4179591836734694, 0.3818300505051189, 0.2797053914892766,
                               0.1294849661688697};
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < 7; ++i) s += wi[i] * g(c + h * xi[i]);
  return s * h;
}

enum class ZeroOrder { Simple, Double };

struct EndpointInfo {
  ZeroOrder order;
  double rate;  // f'(alpha_e) for simple zeros, f''(alpha_e)/2 for double zeros
};

EndpointInfo classify_endpoint(const CriticalCurve& c, double alpha_e) {
  const double d1 = c.df(alpha_e);
  if (std::abs(d1) > 1e-8) return {ZeroOrder::Simple, d1};
  const double h = 1e-5;
  const double d2 = (c.df(alpha_e + h) - c.df(alpha_e - h)) / (2.0 * h);
  if (std::abs(d2) > 1e-8) return {ZeroOrder::Double, 0.5 * d2};
  throw ConstructionError("endpoint zero of order higher than two is not supported", alpha_e);
}

}  // namespace

void validate_curve(const CriticalCurve& c) {
  if (!(c.alpha_end != c.alpha_start))
    throw ConstructionError("curve endpoints coincide", c.alpha_start);
  if (std::abs(c.f(c.alpha_start)) > 1e-12)
    throw ConstructionError("curve does not vanish at alpha_start", c.alpha_start);
  if (std::abs(c.f(c.alpha_end)) > 1e-12)
    throw ConstructionError("curve does not vanish at alpha_end", c.alpha_end);

  const double span = c.alpha_end - c.alpha_start;
  const double want = span > 0.0 ? 1.0 : -1.0;
  const int n = 20000;
  for (int i = 1; i < n; ++i) {
    // probe away from the endpoint zeros
    double t = static_cast<double>(i) / n;
    double margin = 1e-6 * std::abs(span);
    double a = c.alpha_start + span * (margin / std::abs(span) + t * (1.0 - 2.0 * margin / std::abs(span)));
    double v = c.f(a);
    if (v == 0.0 || v * want < 0.0)
      throw ConstructionError("curve has an interior zero or flips direction", a);
  }
}

struct CurveSolution::Data {
  HermiteTable table;  // alpha(x) with exact slopes f(alpha)
  double x_lo = 0.0, x_hi = 0.0;
  double alpha_start = 0.0, alpha_end = 0.0;
  double alpha_at_lo = 0.0, alpha_at_hi = 0.0;
  EndpointInfo start_info{ZeroOrder::Simple, 0.0}, end_info{ZeroOrder::Simple, 0.0};
  std::function<double(double)> f;
};

double CurveSolution::operator()(double x) const {
  const Data& d = *data_;
  if (x < d.x_lo) {
    // approach alpha_start backwards in x
    double delta0 = d.alpha_at_lo - d.alpha_start;
    if (d.start_info.order == ZeroOrder::Simple) {
      // d delta / dx = f'(a_s) delta with f'(a_s) > 0 toward the interior
      return d.alpha_start + delta0 * std::exp(d.start_info.rate * (x - d.x_lo));
    }
    // double zero: d delta / dx = c2 delta^2
    double c2 = d.start_info.rate;
    double denom = 1.0 - c2 * delta0 * (x - d.x_lo);
    return d.alpha_start + delta0 / denom;
  }
  if (x > d.x_hi) {
    double delta0 = d.alpha_at_hi - d.alpha_end;  // opposite sign to the motion
    if (d.end_info.order == ZeroOrder::Simple) {
      // f'(a_e) < 0 on the approach side
      return d.alpha_end + delta0 * std::exp(d.end_info.rate * (x - d.x_hi));
    }
    double c2 = d.end_info.rate;
    double denom = 1.0 - c2 * delta0 * (x - d.x_hi);
    return d.alpha_end + delta0 / denom;
  }
  return d.table.value(x);
}

double CurveSolution::slope(double x) const { return data_->f((*this)(x)); }
double CurveSolution::table_x_min() const { return data_->x_lo; }
double CurveSolution::table_x_max() const { return data_->x_hi; }

CurveSolution solve_curve(const CriticalCurve& c, double x0_anchor) {
  validate_curve(c);

  const double a0 = c.alpha_start, a1 = c.alpha_end;
  const double span = a1 - a0;
  const double mid = 0.5 * (a0 + a1);

  EndpointInfo info_start = classify_endpoint(c, a0);
  EndpointInfo info_end = classify_endpoint(c, a1);

  // alpha nodes: uniform through the middle, geometrically clustered toward
  // both endpoint zeros. The smallest offset must keep f(alpha) clear of
  // cancellation noise: f ~ f' delta at a simple zero but f ~ delta^2 at a
  // double one, where anything below 1e-6 evaluates as pure round-off.
  const double edge = 0.25 * std::abs(span);
  const double ratio = std::pow(2.0, 1.0 / 12.0);
  auto offsets_for = [&](const EndpointInfo& info) {
    double floor = info.order == ZeroOrder::Simple ? 1e-13 * std::abs(span) : 1e-6;
    std::vector<double> out;  // decreasing
    for (double d = edge; d > floor; d /= ratio) out.push_back(d);
    return out;
  };
  std::vector<double> off_start = offsets_for(info_start);
  std::vector<double> off_end = offsets_for(info_end);

  std::vector<double> alphas;
  for (auto it = off_start.rbegin(); it != off_start.rend(); ++it)
    alphas.push_back(a0 + (span > 0 ? *it : -*it));
  {
    const double lo = a0 + (span > 0 ? edge : -edge);
    const double hi = a1 - (span > 0 ? edge : -edge);
    const int n_mid = 600;
    for (int i = 1; i < n_mid; ++i) alphas.push_back(lo + (hi - lo) * i / n_mid);
  }
  for (double d : off_end) alphas.push_back(a1 - (span > 0 ? d : -d));

  // cumulative x(alpha) = integral dalpha / f
  std::function<double(double)> inv = [&c](double a) { return 1.0 / c.f(a); };
  std::vector<double> xs(alphas.size(), 0.0);
  for (std::size_t i = 1; i < alphas.size(); ++i) {
    xs[i] = xs[i - 1] + gauss7(inv, alphas[i - 1], alphas[i]);
    if (!std::isfinite(xs[i]))
      throw ConstructionError("curve quadrature diverged between nodes", alphas[i]);
  }

  // shift so that alpha(x0_anchor) = midpoint
  double x_mid = 0.0;
  {
    // locate the midpoint in the alpha table (alphas are monotone)
    auto cmp = [span](double a, double b) { return span > 0 ? a < b : a > b; };
    std::size_t j = 0;
    while (j + 1 < alphas.size() && cmp(alphas[j + 1], mid)) ++j;
    x_mid = xs[j] + gauss7(inv, alphas[j], mid);
  }
  for (double& x : xs) x += x0_anchor - x_mid;

  // the table wants increasing x; for span < 0 f < 0 and x(alpha) already
  // decreases along alphas, so reverse
  std::vector<double> slopes(alphas.size());
  for (std::size_t i = 0; i < alphas.size(); ++i) slopes[i] = c.f(alphas[i]);
  if (xs.back() < xs.front()) {
    std::reverse(xs.begin(), xs.end());
    std::reverse(alphas.begin(), alphas.end());
    std::reverse(slopes.begin(), slopes.end());
  }

  auto data = std::make_shared<CurveSolution::Data>();
  data->x_lo = xs.front();
  data->x_hi = xs.back();
  data->alpha_start = a0;
  data->alpha_end = a1;
  data->alpha_at_lo = alphas.front();
  data->alpha_at_hi = alphas.back();
  data->start_info = info_start;
  data->end_info = info_end;
  data->f = c.f;
  data->table = HermiteTable(std::move(xs), std::move(alphas), std::move(slopes));
  return CurveSolution(std::move(data));
}

namespace {

// A along the curve, with the l'Hopital fill near sin(alpha) = 0.
double force_value(const CriticalCurve& c, double alpha) {
  const double k = std::round(alpha / kPi);
  const double delta = alpha - k * kPi;
  const double sgn = (static_cast<long>(k) % 2 == 0) ? 1.0 : -1.0;  // sign of cos(k pi)

  if (std::abs(delta) >= 1e-4) {
    return (2.0 * c.lambda - c.f(alpha)) / (2.0 * std::sin(alpha));
  }
  // residual of the numerator at the multiple of pi decides removability
  const double r = 2.0 * c.lambda - c.f(k * kPi);
  if (std::abs(r) > 1e-10 * std::max(1.0, std::abs(2.0 * c.lambda)))
    throw ConstructionError("non-removable singularity: sin(alpha) = 0 with nonzero numerator",
                            k * kPi);
  // numerator ~ -f'(kpi) delta - f''(kpi) delta^2/2, sin(alpha) ~ cos(kpi) delta (1 - delta^2/6)
  const double h = 1e-5;
  const double d1 = c.df(k * kPi);
  const double d2 = (c.df(k * kPi + h) - c.df(k * kPi - h)) / (2.0 * h);
  double num = -d1 - 0.5 * d2 * delta;
  return num / (2.0 * sgn) * (1.0 + delta * delta / 6.0);
}

}  // namespace

ForceFunction force_from_curve(const CriticalCurve& c, const CurveSolution& sol) {
  // probe for non-removable singularities up front so construction fails fast
  const double lo = std::min(c.alpha_start, c.alpha_end);
  const double hi = std::max(c.alpha_start, c.alpha_end);
  for (double k = std::ceil(lo / kPi); k * kPi < hi; k += 1.0) {
    if (k * kPi <= lo) continue;
    const double r = 2.0 * c.lambda - c.f(k * kPi);
    if (std::abs(r) > 1e-10 * std::max(1.0, std::abs(2.0 * c.lambda)))
      throw ConstructionError("non-removable singularity: sin(alpha) = 0 with nonzero numerator",
                              k * kPi);
  }

  CriticalCurve curve = c;  // captured by value; curves are cheap
  CurveSolution s = sol;
  auto value = [curve, s](double x) { return force_value(curve, s(x)); };
  auto slope = [value](double x) {
    const double h = 1e-5;
    return (value(x + h) - value(x - h)) / (2.0 * h);
  };

  // classify numerically on a generous domain; double-zero tables stretch to
  // astronomical x, so cap the working half-width and let the boundary check
  // below sort the slow algebraic tails into Other
  double hw = std::max({20.0, std::abs(sol.table_x_min()), std::abs(sol.table_x_max())});
  // simple-zero tails approach at rate |f'|; pick L so |A - 1| settles below 1e-9
  double rate = std::min(std::abs(c.df(c.alpha_start)), std::abs(c.df(c.alpha_end)));
  if (rate > 1e-8) hw = std::max(hw, 23.0 / rate);
  hw = std::min(hw, 2000.0);

  bool well = true;
  for (int i = 0; i <= 400; ++i) {
    double x = -hw + 2.0 * hw * i / 400;
    if (value(x) > 1.0 + 1e-9) {
      well = false;
      break;
    }
  }
  if (std::abs(value(-hw) - 1.0) > 1e-6 || std::abs(value(hw) - 1.0) > 1e-6) well = false;

  return ForceFunction::closed_form("curve:" + c.id, value, slope,
                                    well ? BoundaryClass::WellShaped : BoundaryClass::Other, hw);
}

ForceFunction force_from_curve(const CriticalCurve& c) {
  return force_from_curve(c, solve_curve(c));
}

CriticalCurve curve_catalog(const std::string& id, const Params& params) {
  CriticalCurve c;
  c.id = id;
  if (id == "eq10") {
    c.f = [](double a) { return std::sin(2.0 * a - 0.5 * kPi); };
    c.df = [](double a) { return 2.0 * std::cos(2.0 * a - 0.5 * kPi); };
    c.lambda = 1.0 / std::sqrt(2.0);
    c.alpha_start = 0.25 * kPi;
    c.alpha_end = 0.75 * kPi;
    return c;
  }
  if (id == "sech") {
    double lb = get_param(params, "lambda_bar", 0.0, true);
    if (!(lb > 0.0 && lb < 1.0)) throw ConfigError("sech curve requires lambda_bar in (0, 1)");
    c.f = [lb](double a) { return -2.0 * lb + 2.0 * std::sin(a); };
    c.df = [](double a) { return 2.0 * std::cos(a); };
    c.lambda = lb;
    c.alpha_start = std::asin(lb);
    c.alpha_end = kPi - std::asin(lb);
    return c;
  }
  if (id == "eq14") {
    const double r2 = std::sqrt(2.0);
    c.f = [r2](double a) { return 2.0 * r2 * std::sin(0.5 * a - 0.25 * kPi); };
    c.df = [r2](double a) { return r2 * std::cos(0.5 * a - 0.25 * kPi); };
    c.lambda = 1.0;
    c.alpha_start = 0.5 * kPi;
    c.alpha_end = 2.5 * kPi;
    return c;
  }
  if (id == "counted") {
    int n1 = static_cast<int>(get_param(params, "N1", 0.0));
    int n2 = static_cast<int>(get_param(params, "N2", 0.0, true));
    double gamma = get_param(params, "gamma", 0.8);
    if (n2 <= n1) throw ConfigError("counted curve requires N2 > N1");
    if (!(gamma > 0.0 && gamma < 1.0)) throw ConfigError("counted curve gamma must be in (0, 1)");
    const double a = 2.0 * n1 * kPi + 0.5 * kPi;
    const int dn = n2 - n1;
    // gravity profile along the curve: Abar = 1 - gamma sin(u), u in [0, pi]
    auto abar = [a, dn, gamma](double alpha) {
      double u = (alpha - a) / (2.0 * dn);
      return 1.0 - gamma * std::sin(u);
    };
    c.f = [abar](double alpha) { return 2.0 - 2.0 * abar(alpha) * std::sin(alpha); };
    c.df = [a, dn, gamma, abar](double alpha) {
      double u = (alpha - a) / (2.0 * dn);
      double dabar = -gamma * std::cos(u) / (2.0 * dn);
      return -2.0 * dabar * std::sin(alpha) - 2.0 * abar(alpha) * std::cos(alpha);
    };
    c.lambda = 1.0;
    c.alpha_start = a;
    c.alpha_end = 2.0 * n2 * kPi + 0.5 * kPi;
    return c;
  }
  throw ConfigError("unknown curve id '" + id + "'; known: eq10 sech eq14 counted");
}

std::vector<std::string> curve_catalog_ids() { return {"eq10", "sech", "eq14", "counted"}; }

ForceFunction predetermined_spectrum(int n1, int n2, double gamma) {
  if (n2 < n1) throw ConfigError("predetermined_spectrum requires N2 >= N1");
  if (n1 == n2) return catalog("constant");
  if (n2 - n1 == 1) {
    // the merged-pair generator already joins pi/2 to 5 pi/2
    CriticalCurve c = curve_catalog("eq14");
    return force_from_curve(c, solve_curve(c));
  }
  Params p{{"N1", static_cast<double>(n1)}, {"N2", static_cast<double>(n2)}, {"gamma", gamma}};
  CriticalCurve c = curve_catalog("counted", p);
  CurveSolution sol = solve_curve(c);
  // Along a counted curve the gravity profile is explicit, so A(x) comes from
  // it directly with no 0/0 handling at the pi crossings.
  const double a = c.alpha_start;
  const int dn = n2 - n1;
  auto value = [sol, a, dn, gamma](double x) {
    double u = (sol(x) - a) / (2.0 * dn);
    return 1.0 - gamma * std::sin(u);
  };
  auto slope = [sol, a, dn, gamma](double x) {
    double alpha = sol(x);
    double u = (alpha - a) / (2.0 * dn);
    return -gamma * std::cos(u) / (2.0 * dn) * sol.slope(x);
  };
  // simple endpoint zeros with rate gamma / dn: pick the half width so the
  // boundary value settles to 1 within 1e-9
  double rate = gamma / dn;
  double hw = std::max(20.0, 23.0 / rate);
  return ForceFunction::closed_form("counted(" + std::to_string(n1) + "," + std::to_string(n2) +
                                        ")",
                                    value, slope, BoundaryClass::WellShaped, hw);
}

}  // namespace pendspec
