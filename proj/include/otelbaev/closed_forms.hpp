#pragma once

#include <cmath>

#include "otelbaev/errors.hpp"

namespace otelbaev::closed_form {

// 4^(g+1) * integral of (q*_2)^(g+1/2) for delta_0 + delta_y, y > 0.
inline double two_delta_lt_upper(double y, double g) {
  if (!(y > 0.0) || !(g > 0.0)) throw InvalidInput("two_delta_lt_upper needs y > 0 and gamma > 0");
  const double p16 = std::pow(16.0, g), p4 = std::pow(4.0, g), yn = std::pow(y, -2.0 * g);
  if (y >= 0.5) return 4.0 * p16 / g + 8.0 * p16 - 2.0 * p4 * yn / g;
  if (y >= 0.25) return (g * std::pow(4.0, 2.0 * g + 2.0) * y + yn * std::pow(4.0, g + 0.5)) / g;
  return (std::pow(4.0, 3.0 * g + 0.5) + y * g * std::pow(4.0, 2.0 * g + 2.0) +
          g * std::pow(4.0, 3.0 * g + 2.5) * (0.125 - 0.5 * y)) /
         g;
}

inline double two_delta_lt_upper_far(double g) { return 4.0 * std::pow(16.0, g) / g + 8.0 * std::pow(16.0, g); }

inline double two_delta_lt_upper_near(double g) {
  return (std::pow(4.0, 3.0 * g + 0.5) + g * std::pow(4.0, 3.0 * g + 1.0)) / g;
}

}  // namespace otelbaev::closed_form
