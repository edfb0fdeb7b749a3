#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "otelbaev/errors.hpp"
#include "otelbaev/measure.hpp"
#include "otelbaev/qstar.hpp"

namespace otelbaev {

// I_k = [lo, hi] carries mu on the open interval plus `left_share` of the atom at lo
// and `right_share` of the atom at hi.
struct DecompositionInterval {
  int k = 0;
  double lo = -kInf;
  double hi = kInf;
  double left_share = 0.0;
  double right_share = 0.0;
  double mass = 0.0;
  Measure measure;

  bool bounded() const { return std::isfinite(lo) && std::isfinite(hi); }
  double length() const { return hi - lo; }
  double midpoint() const { return 0.5 * (lo + hi); }
};

struct Decomposition {
  double alpha = 0.0;
  double origin = 0.0;
  std::vector<DecompositionInterval> intervals;  // left to right, tiling the line
  std::vector<double> points;                    // finite endpoints a_k, sorted
  std::vector<int> point_index;                  // k of each point
  // For k >= 1 the part of the atom at a_k given to I_{k-1}; for k <= -1 the part given to I_k; 0 at a_0.
  std::vector<double> gammas;

  double gamma_at(double a) const {
    auto it = std::lower_bound(points.begin(), points.end(), a);
    if (it == points.end() || *it != a) return 0.0;
    return gammas[static_cast<std::size_t>(it - points.begin())];
  }
};

namespace detail {

struct SweepStep {
  double next = kInf;
  double gamma_next = 0.0;
  double mass = 0.0;
};

// Rightward steps from a with gamma of the atom at a already assigned to the left.
// a_{k+1} = sup{x > a_k : mu([a_k, x)) - gamma_k <= 1/(alpha (x - a_k))}.
inline std::vector<SweepStep> sweep_right(const Measure& m, double a, double gamma, double alpha, std::size_t cap) {
  std::vector<SweepStep> steps;
  const auto& p = m.points();
  const std::ptrdiff_t n = m.num_points();
  const double tiny = 1e-14 * std::max(m.total_mass(), 1e-300);
  for (;;) {
    const double own = m.atom_at(a) - gamma;
    const double rest = own + m.mass(IntervalSpec::open(a, kInf));
    if (rest <= tiny) {
      steps.push_back({kInf, 0.0, 0.0});
      break;
    }
    if (steps.size() >= cap) throw NumericalFailure("decomposition exceeded " + std::to_string(cap) + " intervals");

    // F(x) = G + v (x - pos) on (pos, p_j]; F excludes the atom at x itself.
    std::ptrdiff_t j = std::upper_bound(p.begin(), p.end(), a) - p.begin();
    double g = std::max(own, 0.0);
    double v = m.cell_density(j);
    double pos = a;
    SweepStep st;
    for (;;) {
      const double pj = j < n ? p[static_cast<std::size_t>(j)] : kInf;
      const double dcur = pos - a;
      const double c = 1.0 - alpha * g * dcur;
      const double b = alpha * (g + v * dcur);
      const double denom = b + std::sqrt(b * b + 4.0 * alpha * v * std::max(c, 0.0));
      if (c <= 0.0) {
        st.next = pos;
        break;
      }
      if (denom > 0.0) {
        const double e = 2.0 * c / denom;
        if (pos + e <= pj) {
          st.next = pos + e;
          g += v * e;
          break;
        }
      }
      g += v * (pj - pos);
      pos = pj;
      const double h = 1.0 / (alpha * (pj - a));
      const double atom = m.point_mass(j);
      if (g + atom >= h) {
        st.next = pj;
        break;
      }
      g += atom;
      v = m.cell_density(j + 1);
      ++j;
    }
    const double h = 1.0 / (alpha * (st.next - a));
    const double atom_next = m.atom_at(st.next);
    st.gamma_next = std::clamp(h - g, 0.0, atom_next);
    if (atom_next - st.gamma_next <= 1e-13 * atom_next) st.gamma_next = atom_next;
    if (atom_next == 0.0) st.gamma_next = 0.0;
    st.mass = g + st.gamma_next;
    steps.push_back(st);
    a = st.next;
    gamma = st.gamma_next;
  }
  return steps;
}

}  // namespace detail

// Covering of the line by I_k = [a_k, a_{k+1}] with mu_k(I_k) |I_k| = 1/alpha, built outward from
// a_0 = origin.  The atom at the origin belongs to I_0 in full.
inline Decomposition build_decomposition(const Measure& m, double alpha, double origin = 0.0,
                                         std::size_t cap = 1000000) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InvalidInput("alpha must be finite and > 0");
  if (!std::isfinite(origin)) throw InvalidInput("decomposition origin must be finite");
  Decomposition dec;
  dec.alpha = alpha;
  dec.origin = origin;
  const double a0_atom = m.atom_at(origin);
  const auto right = detail::sweep_right(m, origin, 0.0, alpha, cap);
  const Measure refl = m.reflected();
  const auto left = detail::sweep_right(refl, -origin, a0_atom, alpha, cap);

  auto make = [&](int k, double lo, double hi, double ls, double rs) {
    DecompositionInterval iv;
    iv.k = k;
    iv.lo = lo;
    iv.hi = hi;
    iv.left_share = ls;
    iv.right_share = rs;
    if (iv.bounded()) {
      std::vector<Atom> atoms;
      std::vector<DensitySegment> segs;
      const Measure inner = m.restricted(IntervalSpec::open(lo, hi));
      atoms = inner.atoms();
      segs = inner.density();
      atoms.push_back({lo, ls});
      atoms.push_back({hi, rs});
      iv.measure = Measure::build(std::move(atoms), std::move(segs));
      iv.mass = iv.measure.total_mass();
    }
    return iv;
  };

  // Left side, outermost first. In reflected coordinates step i covers [b_i, b_{i+1}].
  std::vector<double> b{-origin};
  std::vector<double> bg{a0_atom};
  for (const auto& st : left) {
    b.push_back(st.next);
    bg.push_back(st.gamma_next);
  }
  const int nl = static_cast<int>(left.size());
  for (int i = nl - 1; i >= 0; --i) {
    const auto ui = static_cast<std::size_t>(i);
    const double lo = -b[ui + 1];
    const double hi = -b[ui];
    const double ls = std::isfinite(lo) ? bg[ui + 1] : 0.0;
    const double rs = refl.atom_at(b[ui]) - bg[ui];
    dec.intervals.push_back(make(-(i + 1), lo, hi, ls, rs));
    if (std::isfinite(lo)) {
      dec.points.push_back(lo);
      dec.point_index.push_back(-(i + 1));
      dec.gammas.push_back(ls);
    }
  }
  dec.points.push_back(origin);
  dec.point_index.push_back(0);
  dec.gammas.push_back(0.0);

  double a = origin;
  double prev_gamma = 0.0;
  for (std::size_t i = 0; i < right.size(); ++i) {
    const auto& st = right[i];
    const double ls = m.atom_at(a) - prev_gamma;
    const double rs = std::isfinite(st.next) ? st.gamma_next : 0.0;
    dec.intervals.push_back(make(static_cast<int>(i), a, st.next, ls, rs));
    if (std::isfinite(st.next)) {
      dec.points.push_back(st.next);
      dec.point_index.push_back(static_cast<int>(i) + 1);
      dec.gammas.push_back(st.gamma_next);
    }
    a = st.next;
    prev_gamma = st.gamma_next;
  }
  return dec;
}

struct DecompositionReport {
  bool tiling_ok = true;
  bool gamma_ok = true;
  bool ends_empty = true;
  double max_product_residual = 0.0;  // max |mu_k(I_k)|I_k| alpha - 1|
  double max_d_residual = 0.0;        // max |d_alpha(x_k) - |I_k|| / |I_k|
  double mass_residual = 0.0;         // |sum mu_k(I_k) - mu(R)| / mu(R)
  std::size_t bounded_intervals = 0;
  std::vector<std::string> failures;

  bool passed(double product_tol = 1e-12, double d_tol = 1e-9, double mass_tol = 1e-12) const {
    return tiling_ok && gamma_ok && ends_empty && max_product_residual <= product_tol && max_d_residual <= d_tol &&
           mass_residual <= mass_tol;
  }
};

inline DecompositionReport verify_decomposition(const Measure& m, const Decomposition& dec) {
  DecompositionReport r;
  const auto& iv = dec.intervals;
  if (iv.empty() || iv.front().lo != -kInf || iv.back().hi != kInf) {
    r.tiling_ok = false;
    r.failures.push_back("intervals do not reach both infinities");
  }
  for (std::size_t i = 0; i + 1 < iv.size(); ++i) {
    if (iv[i].hi != iv[i + 1].lo || !(iv[i].lo < iv[i].hi)) {
      r.tiling_ok = false;
      r.failures.push_back("intervals " + std::to_string(iv[i].k) + " and " + std::to_string(iv[i + 1].k) +
                           " do not tile");
    }
    const double atom = m.atom_at(iv[i].hi);
    const double shares = iv[i].right_share + iv[i + 1].left_share;
    if (iv[i].right_share < 0.0 || iv[i + 1].left_share < 0.0 || std::abs(shares - atom) > 1e-12 * std::max(atom, 1.0)) {
      r.gamma_ok = false;
      r.failures.push_back("atom split at a=" + std::to_string(iv[i].hi) + " is inconsistent");
    }
  }
  for (std::size_t i = 0; i < dec.points.size(); ++i) {
    if (dec.gammas[i] < 0.0 || dec.gammas[i] > m.atom_at(dec.points[i])) {
      r.gamma_ok = false;
      r.failures.push_back("gamma outside [0, atom] at a=" + std::to_string(dec.points[i]));
    }
  }
  double sum = 0.0;
  for (const auto& I : iv) {
    sum += I.mass;
    if (!I.bounded()) {
      if (I.mass != 0.0) {
        r.ends_empty = false;
        r.failures.push_back("unbounded interval carries mass");
      }
      continue;
    }
    if (!(I.mass > 0.0)) continue;
    ++r.bounded_intervals;
    const double prod = std::abs(I.mass * I.length() * dec.alpha - 1.0);
    r.max_product_residual = std::max(r.max_product_residual, prod);
    const double d = d_alpha(m, dec.alpha, I.midpoint());
    r.max_d_residual = std::max(r.max_d_residual, std::abs(d - I.length()) / I.length());
  }
  const double total = m.total_mass();
  r.mass_residual = total > 0.0 ? std::abs(sum - total) / total : std::abs(sum);
  return r;
}

}  // namespace otelbaev
