#pragma once

#include <string>
#include <vector>

#include "pendspec/spectrum.hpp"

namespace pendspec {

// CSV writers; '.' decimal separator, %.17g, header always emitted.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns);

// columns (x, alpha, log_rho) for plotting
void write_trajectory_csv(const std::string& path, const PendulumTrajectory& traj);

std::string format_g17(double v);

}  // namespace pendspec
