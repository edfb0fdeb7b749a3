#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "otelbaev/errors.hpp"
#include "otelbaev/measure.hpp"
#include "otelbaev/qstar.hpp"

namespace otelbaev {

struct EnvelopeCell {
  double x_lo = 0.0;
  double x_hi = 0.0;
  double q_lower = 0.0;
  double q_upper = 0.0;
};

// Bounds on q*_alpha over each cell from the endpoint values and |d(x) - d(y)| <= 2|x - y|.
inline std::vector<EnvelopeCell> envelope(const Measure& m, double alpha, double lo, double hi, double max_cell) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) throw InvalidInput("envelope window must be finite with lo < hi");
  if (!(max_cell > 0.0)) throw InvalidInput("envelope cell width must be > 0");
  const auto cells = static_cast<std::size_t>(std::ceil((hi - lo) / max_cell));
  std::vector<double> xs(cells + 1);
  for (std::size_t i = 0; i <= cells; ++i) xs[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(cells);
  xs.back() = hi;
  std::vector<double> ds(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) ds[i] = eval_point(m, alpha, xs[i]).d;
  std::vector<EnvelopeCell> out;
  out.reserve(cells);
  for (std::size_t i = 0; i < cells; ++i) {
    EnvelopeCell c{xs[i], xs[i + 1], 0.0, 0.0};
    if (ds[i] != kInf) {
      const double w = xs[i + 1] - xs[i];
      const double mid = 0.5 * (ds[i] + ds[i + 1]);
      const double dlo = std::max((mid - w) * (1.0 - 1e-15), 0.0);
      const double dhi = (mid + w) * (1.0 + 1e-15);
      c.q_lower = 1.0 / (dhi * dhi);
      c.q_upper = dlo > 0.0 ? 1.0 / (dlo * dlo) : kInf;
    }
    out.push_back(c);
  }
  return out;
}

}  // namespace otelbaev
