#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "pendspec/errors.hpp"

namespace pendspec {

// Piecewise cubic Hermite interpolation on a strictly increasing grid with
// prescribed node slopes. C1 by construction.
class HermiteTable {
 public:
  HermiteTable() = default;
  HermiteTable(std::vector<double> xs, std::vector<double> ys, std::vector<double> slopes)
      : xs_(std::move(xs)), ys_(std::move(ys)), dy_(std::move(slopes)) {
    if (xs_.size() < 2 || xs_.size() != ys_.size() || xs_.size() != dy_.size())
      throw GridError("Hermite table needs matching arrays with at least 2 points");
    for (std::size_t i = 1; i < xs_.size(); ++i)
      if (!(xs_[i] > xs_[i - 1])) throw GridError("Hermite table grid must be strictly increasing");
  }

  double x_min() const { return xs_.front(); }
  double x_max() const { return xs_.back(); }
  std::size_t size() const { return xs_.size(); }

  double value(double x) const {
    auto [i, t, h] = locate(x);
    const double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
    const double h10 = t * (1 - t) * (1 - t);
    const double h01 = t * t * (3 - 2 * t);
    const double h11 = t * t * (t - 1);
    return h00 * ys_[i] + h10 * h * dy_[i] + h01 * ys_[i + 1] + h11 * h * dy_[i + 1];
  }

  double slope(double x) const {
    auto [i, t, h] = locate(x);
    const double d00 = 6 * t * (t - 1);
    const double d10 = (1 - t) * (1 - 3 * t);
    const double d01 = 6 * t * (1 - t);
    const double d11 = t * (3 * t - 2);
    return (d00 * ys_[i] + d01 * ys_[i + 1]) / h + d10 * dy_[i] + d11 * dy_[i + 1];
  }

 private:
  struct Loc {
    std::size_t i;
    double t;
    double h;
  };
  Loc locate(double x) const {
    // clamp outside the grid: constant extension with the end value/slope
    if (x <= xs_.front()) return {0, 0.0, xs_[1] - xs_[0]};
    if (x >= xs_.back()) {
      std::size_t i = xs_.size() - 2;
      return {i, 1.0, xs_[i + 1] - xs_[i]};
    }
    auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    std::size_t i = static_cast<std::size_t>(it - xs_.begin()) - 1;
    double h = xs_[i + 1] - xs_[i];
    return {i, (x - xs_[i]) / h, h};
  }

  std::vector<double> xs_, ys_, dy_;
};

inline double trapezoid(const std::vector<double>& xs, const std::vector<double>& ys) {
  double s = 0.0;
  for (std::size_t i = 1; i < xs.size(); ++i)
    s += 0.5 * (ys[i] + ys[i - 1]) * (xs[i] - xs[i - 1]);
  return s;
}

}  // namespace pendspec
