#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "otelbaev/errors.hpp"
#include "otelbaev/measure.hpp"

namespace otelbaev {

// Where the two ends of the window Delta_x(d) sit relative to the structural points
// p_0 < ... < p_{n-1}: code 2i+1 means "exactly at p_i", code 2i means "inside the
// open cell before p_i" (cell n lies right of the last point).
struct WindowCode {
  int left = -1;
  int right = -1;

  static constexpr int cell(std::ptrdiff_t i) { return static_cast<int>(2 * i); }
  static constexpr int point(std::ptrdiff_t i) { return static_cast<int>(2 * i + 1); }
  static constexpr bool is_point(int code) { return (code & 1) != 0; }
  static constexpr std::ptrdiff_t index(int code) { return code >> 1; }

  friend bool operator==(const WindowCode&, const WindowCode&) = default;
};

struct OtelbaevPoint {
  double x = 0.0;
  double alpha = 0.0;
  double d = kInf;
  double q = 0.0;
  double err = 0.0;
  WindowCode code;
};

// d_alpha(x) = first d where the closed window mass g(d) = mu(Delta_x(d)) reaches 1/(alpha d).
// g is piecewise linear in d with breakpoints at d = 2|p - x|, so each piece is a quadratic.
inline OtelbaevPoint eval_point(const Measure& m, double alpha, double x) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InvalidInput("alpha must be finite and > 0");
  if (!std::isfinite(x)) throw InvalidInput("evaluation point must be finite");
  OtelbaevPoint out;
  out.x = x;
  out.alpha = alpha;
  if (m.is_zero()) return out;

  const auto& p = m.points();
  const std::ptrdiff_t n = m.num_points();
  const std::ptrdiff_t j = std::lower_bound(p.begin(), p.end(), x) - p.begin();
  std::ptrdiff_t li = j - 1;
  std::ptrdiff_t ri = j;
  double g = 0.0;
  double vl = m.cell_density(j);
  double vr = vl;
  if (j < n && p[static_cast<std::size_t>(j)] == x) {
    g = m.point_mass(j);
    ri = j + 1;
    vr = m.cell_density(j + 1);
  }

  double dcur = 0.0;
  for (;;) {
    const double dl = li >= 0 ? 2.0 * (x - p[static_cast<std::size_t>(li)]) : kInf;
    const double dr = ri < n ? 2.0 * (p[static_cast<std::size_t>(ri)] - x) : kInf;
    const double dn = std::min(dl, dr);
    const double s = 0.5 * (vl + vr);
    // g(dcur + e) = g + s e;  alpha (g + s e)(dcur + e) = 1
    const double c = 1.0 - alpha * g * dcur;
    const double b = alpha * (g + s * dcur);
    const double denom = b + std::sqrt(b * b + 4.0 * alpha * s * c);
    if (denom > 0.0) {
      const double e = 2.0 * c / denom;
      if (dcur + e < dn) {
        out.d = dcur + e;
        out.code = {WindowCode::cell(li + 1), WindowCode::cell(ri)};
        break;
      }
    }
    if (dn == kInf) return out;
    g += s * (dn - dcur);
    dcur = dn;
    const bool hit_l = dl == dn;
    const bool hit_r = dr == dn;
    if (hit_l) {
      g += m.point_mass(li);
      vl = m.cell_density(li);
      --li;
    }
    if (hit_r) {
      g += m.point_mass(ri);
      vr = m.cell_density(ri + 1);
      ++ri;
    }
    if (alpha * g * dcur >= 1.0) {
      out.d = dcur;
      out.code.left = hit_l ? WindowCode::point(li + 1) : WindowCode::cell(li + 1);
      out.code.right = hit_r ? WindowCode::point(ri - 1) : WindowCode::cell(ri);
      break;
    }
  }
  out.q = 1.0 / (out.d * out.d);
  return out;
}

inline double d_alpha(const Measure& m, double alpha, double x) { return eval_point(m, alpha, x).d; }
inline double q_star(const Measure& m, double alpha, double x) { return eval_point(m, alpha, x).q; }

}  // namespace otelbaev
