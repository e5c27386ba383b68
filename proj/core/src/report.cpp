#include "pendspec/report.hpp"

#include <cstdio>
#include <fstream>

#include "pendspec/errors.hpp"

namespace pendspec {

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_trajectory_csv(const std::string& path, const PendulumTrajectory& traj) {
  write_csv(path, {"x", "alpha", "log_rho"}, {traj.xs, traj.alpha, traj.log_rho});
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns) {
  if (columns.empty() || header.size() != columns.size())
    throw ConfigError("write_csv: header/column mismatch");
  const std::size_t rows = columns.front().size();
  for (const auto& c : columns)
    if (c.size() != rows) throw ConfigError("write_csv: ragged columns");

  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (j) out << ',';
    out << header[j];
  }
  out << '\n';
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < columns.size(); ++j) {
      if (j) out << ',';
      out << format_g17(columns[j][i]);
    }
    out << '\n';
  }
}

}  // namespace pendspec
