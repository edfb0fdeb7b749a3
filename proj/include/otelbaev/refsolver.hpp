#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "otelbaev/errors.hpp"
#include "otelbaev/measure.hpp"
#include "otelbaev/profile.hpp"

namespace otelbaev {

// Solution of -u'' - mu u = -kappa^2 u that decays on the left, carried across the support.
struct SecularTrace {
  double kappa = 0.0;
  double u = 1.0;
  double du = 0.0;
  int zeros = 0;    // zeros of u on the whole line, the one beyond the support included
  double W = 0.0;   // u' + kappa u at the right end of the support
};

inline SecularTrace secular(const Measure& m, double kappa) {
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) throw InvalidInput("secular needs a finite kappa >= 0");
  SecularTrace t;
  t.kappa = kappa;
  t.u = 1.0;
  t.du = kappa;
  if (m.is_zero()) {
    t.W = t.du + kappa * t.u;
    return t;
  }
  const auto& p = m.points();
  const std::ptrdiff_t n = m.num_points();
  double u = 1.0, du = kappa;
  int zeros = 0;
  auto renorm = [&] {
    const double s = std::max(std::abs(u), std::abs(du));
    if (s > 0.0) {
      u /= s;
      du /= s;
    }
  };
  du -= m.point_mass(0) * u;
  renorm();
  const double k2 = kappa * kappa;
  for (std::ptrdiff_t i = 1; i < n; ++i) {
    const double len = p[static_cast<std::size_t>(i)] - p[static_cast<std::size_t>(i - 1)];
    const double v = m.cell_density(i);
    const double w2 = k2 - v;
    const double u0 = u;
    if (w2 > 0.0) {
      const double w = std::sqrt(w2);
      const double th = std::tanh(w * len);
      u = u0 + du / w * th;
      du = u0 * w * th + du;
      if (u0 != 0.0 && (u == 0.0 || (u > 0.0) != (u0 > 0.0))) ++zeros;
    } else if (w2 == 0.0) {
      u = u0 + du * len;
      if (u0 != 0.0 && (u == 0.0 || (u > 0.0) != (u0 > 0.0))) ++zeros;
    } else {
      const double w = std::sqrt(-w2);
      const double theta0 = std::atan2(u0, du / w);
      const double phase = w * len;
      zeros += static_cast<int>(std::floor((theta0 + phase) / M_PI) - std::floor(theta0 / M_PI));
      const double c = std::cos(phase), s = std::sin(phase);
      u = u0 * c + du / w * s;
      du = -u0 * w * s + du * c;
    }
    du -= m.point_mass(i) * u;
    renorm();
  }
  const double W = du + kappa * u;
  if (kappa > 0.0 ? u * W < 0.0 : u * du < 0.0) ++zeros;
  t.u = u;
  t.du = du;
  t.zeros = zeros;
  t.W = W;
  return t;
}

// Number of eigenvalues strictly below -kappa^2.
inline int zero_count(const Measure& m, double kappa) { return secular(m, kappa).zeros; }

struct Spectrum {
  std::vector<double> eigenvalues;  // ascending, all < 0
  std::vector<double> kappas;       // kappa_nu = sqrt(-lambda_nu)
  std::vector<double> errors;       // bound on |lambda_nu - true value|
  int count = 0;
  double kappa_max = 0.0;
};

inline Spectrum negative_spectrum(const Measure& m, double tol = 1e-12) {
  if (!(tol > 0.0)) throw InvalidInput("spectrum tolerance must be > 0");
  Spectrum sp;
  if (m.is_zero()) return sp;
  const double q2 = OtelbaevProfile::build(m, 2.0).sup_q();
  sp.kappa_max = 2.0 * std::sqrt(q2) * 1.01 + 1e-6;
  if (zero_count(m, sp.kappa_max) != 0)
    throw NumericalFailure("a bound state lies below -4 sup q*_2; the transfer-matrix count is unreliable");
  sp.count = zero_count(m, 0.0);
  for (int j = 1; j <= sp.count; ++j) {
    double lo = 0.0, hi = sp.kappa_max;
    while (hi - lo > tol) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      (zero_count(m, mid) >= j ? lo : hi) = mid;
    }
    if (lo > 0.0) {
      // W flips sign once per eigenvalue inside the bracket; clustered eigenvalues may share one.
      const SecularTrace tl = secular(m, lo);
      const SecularTrace th = secular(m, hi);
      const bool flips = (tl.W > 0.0) != (th.W > 0.0);
      if (flips != ((tl.zeros - th.zeros) % 2 == 1))
        throw NumericalFailure("zero counting and the sign of W disagree for eigenvalue " + std::to_string(j));
    }
    const double k = 0.5 * (lo + hi);
    const double dk = 0.5 * (hi - lo);
    sp.kappas.push_back(k);
    sp.errors.push_back(2.0 * k * dk + dk * dk);
  }
  // kappa_1 > kappa_2 > ...; eigenvalues ascend.
  for (double k : sp.kappas) sp.eigenvalues.push_back(-k * k);
  return sp;
}

struct CountResult {
  int count = 0;
  bool boundary_ambiguous = false;
};

// N(-lambda) = #{nu : lambda_nu < -lambda}, by zero counting and from the spectrum.
inline CountResult counting_exact(const Measure& m, const Spectrum& sp, double lambda) {
  if (!(lambda > 0.0)) throw InvalidInput("counting needs lambda > 0");
  CountResult r;
  r.count = zero_count(m, std::sqrt(lambda));
  int from_list = 0;
  for (std::size_t i = 0; i < sp.eigenvalues.size(); ++i) {
    if (sp.eigenvalues[i] < -lambda) ++from_list;
    if (std::abs(sp.eigenvalues[i] + lambda) <= sp.errors[i] + 1e-14 * lambda) r.boundary_ambiguous = true;
  }
  if (from_list != r.count && !r.boundary_ambiguous)
    throw NumericalFailure("counting by zeros (" + std::to_string(r.count) + ") and by eigenvalues (" +
                           std::to_string(from_list) + ") disagree at lambda=" + std::to_string(lambda));
  return r;
}

inline CountResult counting_exact(const Measure& m, double lambda) {
  return counting_exact(m, negative_spectrum(m), lambda);
}

struct LtSum {
  double value = 0.0;       // sum |lambda_nu|^gamma
  double quadrature = 0.0;  // gamma * integral of lambda^(gamma-1) N(-lambda)
  double err = 0.0;         // propagated from the kappa brackets
};

namespace detail {

template <class Count>
double step_integral(const Count& count, double s0, double s1, int n0, int n1, double tol) {
  if (n0 == n1) return n0 * (s1 - s0);
  if (s1 - s0 <= tol) return 0.5 * (n0 + n1) * (s1 - s0);
  const double mid = 0.5 * (s0 + s1);
  const int nm = count(mid);
  return step_integral(count, s0, mid, n0, nm, tol) + step_integral(count, mid, s1, nm, n1, tol);
}

}  // namespace detail

inline LtSum lt_sum_exact(const Measure& m, const Spectrum& sp, double gamma) {
  if (!(gamma > 0.0)) throw InvalidInput("LT sums need gamma > 0");
  LtSum r;
  for (std::size_t i = 0; i < sp.kappas.size(); ++i) {
    const double k = sp.kappas[i];
    r.value += std::pow(k * k, gamma);
    const double l = k * k, e = sp.errors[i];
    r.err += std::max(std::pow(l + e, gamma) - std::pow(l, gamma), std::pow(l, gamma) - std::pow(std::max(l - e, 0.0), gamma));
  }
  if (sp.count == 0) return r;
  // Substituting s = lambda^gamma turns the integral into the area under s -> N(-s^(1/gamma)).
  const double smax = std::pow(sp.kappa_max * sp.kappa_max, gamma);
  auto count = [&](double s) { return s <= 0.0 ? sp.count : zero_count(m, std::pow(s, 0.5 / gamma)); };
  r.quadrature = detail::step_integral(count, 0.0, smax, sp.count, count(smax), 1e-11 * smax);
  if (std::abs(r.quadrature - r.value) > 1e-6 * std::max(r.value, 1e-300))
    throw NumericalFailure("LT sum " + std::to_string(r.value) + " disagrees with its counting-function integral " +
                           std::to_string(r.quadrature));
  return r;
}

inline LtSum lt_sum_exact(const Measure& m, double gamma) { return lt_sum_exact(m, negative_spectrum(m), gamma); }

struct FdSpectrum {
  std::vector<double> eigenvalues;
  double h = 0.0;
  double pad = 0.0;
  std::size_t nodes = 0;
  std::string warning;
};

namespace detail {

struct Tridiagonal {
  std::vector<double> diag;
  double off2 = 0.0;

  // Number of eigenvalues < sigma.
  int count_below(double sigma) const {
    int c = 0;
    double q = 1.0;
    for (std::size_t i = 0; i < diag.size(); ++i) {
      q = diag[i] - sigma - (i == 0 ? 0.0 : off2 / q);
      if (q == 0.0) q = -1e-300;
      if (q < 0.0) ++c;
    }
    return c;
  }
};

inline Tridiagonal fd_matrix(const Measure& m, double h, double lo, std::size_t nodes) {
  Tridiagonal t;
  t.diag.assign(nodes, 2.0 / (h * h));
  t.off2 = 1.0 / (h * h * h * h);
  for (std::size_t i = 0; i < nodes; ++i) {
    const double x = lo + static_cast<double>(i + 1) * h;
    double dens = 0.0;
    for (const auto& s : m.density()) {
      const double l = std::max(s.left, x - 0.5 * h);
      const double r = std::min(s.right, x + 0.5 * h);
      if (l < r) dens += s.value * (r - l);
    }
    t.diag[i] -= dens / h;
  }
  for (const auto& a : m.atoms()) {
    const double idx = std::round((a.position - lo) / h) - 1.0;
    if (idx < 0.0 || idx >= static_cast<double>(nodes)) continue;
    t.diag[static_cast<std::size_t>(idx)] -= a.mass / h;
  }
  return t;
}

inline void fd_bisect(const Tridiagonal& t, double lo, double hi, int clo, int chi, double tol, std::vector<double>& out) {
  if (clo == chi) return;
  if (hi - lo <= tol) {
    for (int i = clo; i < chi; ++i) out.push_back(0.5 * (lo + hi));
    return;
  }
  const double mid = 0.5 * (lo + hi);
  const int cm = t.count_below(mid);
  fd_bisect(t, lo, mid, clo, cm, tol, out);
  fd_bisect(t, mid, hi, cm, chi, tol, out);
}

inline std::vector<double> fd_eigenvalues(const Measure& m, double h, double pad, std::size_t& nodes_out) {
  const auto hull = *m.support_hull();
  const double lo = hull.first - pad;
  const double hi = hull.second + pad;
  const auto cells = static_cast<std::size_t>(std::ceil((hi - lo) / h));
  const double step = (hi - lo) / static_cast<double>(cells);
  const std::size_t nodes = cells - 1;
  nodes_out = nodes;
  const Tridiagonal t = fd_matrix(m, step, lo, nodes);
  double floor_v = 0.0;
  for (std::size_t i = 0; i < nodes; ++i) floor_v = std::min(floor_v, t.diag[i] - 2.0 / (step * step));
  const double bottom = floor_v - 1.0;
  std::vector<double> out;
  const int total = t.count_below(0.0);
  fd_bisect(t, bottom, 0.0, t.count_below(bottom), total, 1e-11 * std::max(1.0, -bottom), out);
  return out;
}

}  // namespace detail

// Dirichlet second-difference discretisation on [hull - pad, hull + pad]; atoms go to the nearest node.
inline FdSpectrum fd_oracle(const Measure& m, double h, double pad, bool check_pad = false) {
  if (!(h > 0.0)) throw InvalidInput("fd_oracle needs h > 0");
  if (!(pad > 0.0)) throw InvalidInput("fd_oracle needs pad > 0");
  FdSpectrum r;
  r.h = h;
  r.pad = pad;
  if (m.is_zero()) return r;
  r.eigenvalues = detail::fd_eigenvalues(m, h, pad, r.nodes);
  if (check_pad) {
    std::size_t nodes2 = 0;
    const auto wide = detail::fd_eigenvalues(m, h, 2.0 * pad, nodes2);
    bool same = wide.size() == r.eigenvalues.size();
    for (std::size_t i = 0; same && i < wide.size(); ++i) same = std::abs(wide[i] - r.eigenvalues[i]) <= h;
    if (!same) r.warning = "eigenvalues move when the padding doubles; pad is too small";
  }
  return r;
}

}  // namespace otelbaev
