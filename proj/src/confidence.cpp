#include "confhedge/confidence.hpp"

#include <cmath>

namespace confhedge {

void Trapezoid::validate() const {
  if (!(slope_width >= 0.0)) throw std::invalid_argument("Trapezoid: negative slope width");
  if (!(plateau_end >= plateau_start))
    throw std::invalid_argument("Trapezoid: plateau_end < plateau_start");
  if (cyclic_period && !(*cyclic_period > 0.0))
    throw std::invalid_argument("Trapezoid: cyclic period must be positive");
}

double trapezoid_eval(const Trapezoid& t, double x) {
  t.validate();
  // signed distance to the plateau; 0 when inside
  double dist;
  if (t.cyclic_period) {
    const double period = *t.cyclic_period;
    const double rel = x - t.plateau_start;
    const double pos = rel - period * std::floor(rel / period);  // in [0, period)
    const double len = t.plateau_end - t.plateau_start;
    if (pos <= len) return 1.0;
    // distance across whichever end of the plateau is nearer, wrapping
    dist = std::min(pos - len, period - pos);
  } else {
    if (x >= t.plateau_start && x <= t.plateau_end) return 1.0;
    dist = x < t.plateau_start ? t.plateau_start - x : x - t.plateau_end;
  }
  if (t.slope_width <= 0.0 || dist >= t.slope_width) return 0.0;
  return 1.0 - dist / t.slope_width;
}

double profile_eval(const ConfidenceProfile& profile,
                    const std::map<std::string, double>& features) {
  if (profile.factors.empty())
    throw std::invalid_argument("profile_eval: profile has no factors");
  double value = 1.0;
  for (const auto& [name, trap] : profile.factors) {
    auto it = features.find(name);
    if (it == features.end())
      throw std::invalid_argument("profile_eval: missing feature '" + name + "'");
    value *= trapezoid_eval(trap, it->second);
    if (value == 0.0) break;
  }
  return value;
}

}  // namespace confhedge
