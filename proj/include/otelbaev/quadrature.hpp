#pragma once

#include <algorithm>
#include <array>
#include <cmath>

namespace otelbaev {

struct QuadResult {
  double value = 0.0;
  double err = 0.0;
};

namespace detail {

// Gauss-Kronrod 7/15 abscissae and weights.
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851, 0.864864423359769072789712788640926,
    0.741531185599394439863864773280788, 0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204, 0.104790010322250183839876322541518,
    0.140653259715525918745189590510238, 0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                              0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
QuadResult gk15(const F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double k = fc * kWgk[7];
  double g = fc * kWg[3];
  for (int i = 0; i < 7; ++i) {
    const double dx = h * kXgk[static_cast<std::size_t>(i)];
    const double s = f(c - dx) + f(c + dx);
    k += kWgk[static_cast<std::size_t>(i)] * s;
    if (i % 2 == 1) g += kWg[static_cast<std::size_t>(i / 2)] * s;
  }
  return {k * h, std::abs((k - g) * h)};
}

template <class F>
QuadResult adapt(const F& f, double a, double b, double tol, int depth) {
  QuadResult r = gk15(f, a, b);
  if (r.err <= tol || depth >= 40 || !(a < 0.5 * (a + b) && 0.5 * (a + b) < b)) return r;
  const double m = 0.5 * (a + b);
  const QuadResult l = adapt(f, a, m, 0.5 * tol, depth + 1);
  const QuadResult rr = adapt(f, m, b, 0.5 * tol, depth + 1);
  return {l.value + rr.value, l.err + rr.err};
}

}  // namespace detail

// Adaptive Gauss-Kronrod on [a, b]; the error is the sum of local |K15 - G7| estimates.
template <class F>
QuadResult integrate(const F& f, double a, double b, double abs_tol, double rel_tol) {
  if (!(a < b)) return {};
  const QuadResult first = detail::gk15(f, a, b);
  const double tol = std::max(abs_tol, rel_tol * std::abs(first.value));
  if (first.err <= tol) return first;
  const double m = 0.5 * (a + b);
  const QuadResult l = detail::adapt(f, a, m, 0.5 * tol, 1);
  const QuadResult r = detail::adapt(f, m, b, 0.5 * tol, 1);
  return {l.value + r.value, l.err + r.err};
}

}  // namespace otelbaev
