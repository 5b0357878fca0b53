#pragma once

#include <map>
#include <optional>
#include <string>

#include "confhedge/core.hpp"

namespace confhedge {

/// Trapezoidal membership over a feature axis: 1 on the plateau, linear
/// ramps of width slope_width on both sides, 0 beyond. With a cyclic
/// period the distance to the plateau wraps around. slope_width = 0 gives
/// the crisp 0/1 sleeping-experts indicator. The value at exactly
/// plateau_edge + slope_width is 0.
struct Trapezoid {
  double plateau_start = 0.0;
  double plateau_end = 0.0;
  double slope_width = 0.0;
  std::optional<double> cyclic_period;

  void validate() const;
};

double trapezoid_eval(const Trapezoid& t, double x);

/// Product of trapezoidal factors, one per specialization.
struct ConfidenceProfile {
  std::vector<std::pair<std::string, Trapezoid>> factors;
};

double profile_eval(const ConfidenceProfile& profile,
                    const std::map<std::string, double>& features);

}  // namespace confhedge
