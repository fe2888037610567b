#include <cmath>
#include <string>

#include "advbandit/harness.hpp"

namespace advbandit {

double loglog_slope(std::span<const LogLogPoint> points) {
  if (points.size() < 2) {
    throw ParameterError("log-log fit needs at least 2 points, got " +
                         std::to_string(points.size()));
  }
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (const auto& p : points) {
    if (!(p.x > 0.0) || !(p.y > 0.0)) {
      throw ParameterError("log-log fit needs positive values, got (" + format_real(p.x) + ", " +
                           format_real(p.y) + ")");
    }
    mean_x += std::log(p.x);
    mean_y += std::log(p.y);
  }
  const double n = static_cast<double>(points.size());
  mean_x /= n;
  mean_y /= n;

  double sxy = 0.0;
  double sxx = 0.0;
  for (const auto& p : points) {
    const double dx = std::log(p.x) - mean_x;
    sxy += dx * (std::log(p.y) - mean_y);
    sxx += dx * dx;
  }
  if (sxx == 0.0) {
    throw ParameterError("log-log fit needs at least two distinct x values");
  }
  return sxy / sxx;
}

}  // namespace advbandit
