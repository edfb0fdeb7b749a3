#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "otelbaev/errors.hpp"

namespace otelbaev {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Atom {
  double position = 0.0;
  double mass = 0.0;
  friend bool operator==(const Atom&, const Atom&) = default;
};

struct DensitySegment {
  double left = 0.0;
  double right = 0.0;
  double value = 0.0;
  friend bool operator==(const DensitySegment&, const DensitySegment&) = default;
};

struct IntervalSpec {
  double lo = 0.0;
  double hi = 0.0;
  bool lo_closed = true;
  bool hi_closed = true;

  static IntervalSpec closed(double lo, double hi) { return {lo, hi, true, true}; }
  static IntervalSpec open(double lo, double hi) { return {lo, hi, false, false}; }
  static IntervalSpec closed_open(double lo, double hi) { return {lo, hi, true, false}; }
  static IntervalSpec open_closed(double lo, double hi) { return {lo, hi, false, true}; }
};

// Finite sum of point masses plus a compactly supported piecewise-constant density.
// Kept in canonical form: atoms sorted with distinct positions, density segments
// sorted, disjoint, positive and with no two adjacent segments of equal value.
class Measure {
 public:
  Measure() = default;

  static Measure build(std::vector<Atom> atoms, std::vector<DensitySegment> density) {
    Measure m;
    m.atoms_ = normalize_atoms(std::move(atoms));
    m.density_ = normalize_density(std::move(density));
    m.index();
    return m;
  }

  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::vector<DensitySegment>& density() const { return density_; }

  bool is_zero() const { return points_.empty(); }
  double total_mass() const { return total_; }

  // Sorted union of atom positions and segment endpoints.
  const std::vector<double>& points() const { return points_; }
  std::ptrdiff_t num_points() const { return static_cast<std::ptrdiff_t>(points_.size()); }

  // Atom mass sitting at points()[i].
  double point_mass(std::ptrdiff_t i) const {
    return (i >= 0 && i < num_points()) ? point_mass_[static_cast<std::size_t>(i)] : 0.0;
  }

  // Density on the open cell between points()[i-1] and points()[i]; cells 0 and n are unbounded.
  double cell_density(std::ptrdiff_t i) const {
    return (i > 0 && i < num_points()) ? cell_density_[static_cast<std::size_t>(i)] : 0.0;
  }

  double atom_at(double x) const {
    auto it = std::lower_bound(points_.begin(), points_.end(), x);
    if (it != points_.end() && *it == x) return point_mass_[static_cast<std::size_t>(it - points_.begin())];
    return 0.0;
  }

  // mu((-inf, x)) or mu((-inf, x]).
  double mass_below(double x, bool inclusive) const {
    const auto n = num_points();
    const auto i = std::lower_bound(points_.begin(), points_.end(), x) - points_.begin();
    if (i == n) return total_;
    const auto ui = static_cast<std::size_t>(i);
    if (points_[ui] == x) return below_[ui] + (inclusive ? point_mass_[ui] : 0.0);
    if (i == 0) return 0.0;
    return below_[ui - 1] + point_mass_[ui - 1] + cell_density_[ui] * (x - points_[ui - 1]);
  }

  double mass(const IntervalSpec& iv) const {
    if (!(iv.lo <= iv.hi)) return 0.0;
    if (iv.lo == iv.hi) return (iv.lo_closed && iv.hi_closed) ? atom_at(iv.lo) : 0.0;
    const double v = mass_below(iv.hi, iv.hi_closed) - mass_below(iv.lo, !iv.lo_closed);
    return v > 0.0 ? v : 0.0;
  }

  std::optional<std::pair<double, double>> support_hull() const {
    if (points_.empty()) return std::nullopt;
    return std::make_pair(points_.front(), points_.back());
  }

  Measure reflected() const {
    std::vector<Atom> a;
    std::vector<DensitySegment> s;
    for (const auto& at : atoms_) a.push_back({-at.position, at.mass});
    for (const auto& seg : density_) s.push_back({-seg.right, -seg.left, seg.value});
    return build(std::move(a), std::move(s));
  }

  Measure translated(double shift) const {
    std::vector<Atom> a;
    std::vector<DensitySegment> s;
    for (const auto& at : atoms_) a.push_back({at.position + shift, at.mass});
    for (const auto& seg : density_) s.push_back({seg.left + shift, seg.right + shift, seg.value});
    return build(std::move(a), std::move(s));
  }

  Measure scaled(double c) const {
    if (!(c >= 0.0) || !std::isfinite(c)) throw InvalidInput("measure scale factor must be finite and >= 0");
    std::vector<Atom> a;
    std::vector<DensitySegment> s;
    for (const auto& at : atoms_) a.push_back({at.position, c * at.mass});
    for (const auto& seg : density_) s.push_back({seg.left, seg.right, c * seg.value});
    return build(std::move(a), std::move(s));
  }

  // mu_s([a,b]) = s * mu([s a, s b]).
  Measure dilated(double s) const {
    if (!(s > 0.0) || !std::isfinite(s)) throw InvalidInput("dilation factor must be finite and > 0");
    std::vector<Atom> a;
    std::vector<DensitySegment> d;
    for (const auto& at : atoms_) a.push_back({at.position / s, s * at.mass});
    for (const auto& seg : density_) d.push_back({seg.left / s, seg.right / s, s * s * seg.value});
    return build(std::move(a), std::move(d));
  }

  Measure restricted(const IntervalSpec& iv) const {
    std::vector<Atom> a;
    std::vector<DensitySegment> d;
    for (const auto& at : atoms_) {
      const bool in_lo = iv.lo_closed ? at.position >= iv.lo : at.position > iv.lo;
      const bool in_hi = iv.hi_closed ? at.position <= iv.hi : at.position < iv.hi;
      if (in_lo && in_hi) a.push_back(at);
    }
    for (const auto& seg : density_) {
      const double l = std::max(seg.left, iv.lo);
      const double r = std::min(seg.right, iv.hi);
      if (l < r) d.push_back({l, r, seg.value});
    }
    return build(std::move(a), std::move(d));
  }

  friend Measure operator+(const Measure& x, const Measure& y) {
    std::vector<Atom> a = x.atoms_;
    a.insert(a.end(), y.atoms_.begin(), y.atoms_.end());
    std::vector<DensitySegment> d = x.density_;
    d.insert(d.end(), y.density_.begin(), y.density_.end());
    return build(std::move(a), std::move(d));
  }

  friend bool operator==(const Measure& x, const Measure& y) {
    return x.atoms_ == y.atoms_ && x.density_ == y.density_;
  }

 private:
  static std::vector<Atom> normalize_atoms(std::vector<Atom> atoms) {
    std::vector<Atom> out;
    for (const auto& a : atoms) {
      if (!std::isfinite(a.position)) throw InvalidInput("atom position is not finite");
      if (!std::isfinite(a.mass)) throw InvalidInput("atom mass is not finite");
      if (a.mass < 0.0)
        throw InvalidInput("negative atom mass " + std::to_string(a.mass) + " at x=" + std::to_string(a.position));
      if (a.mass > 0.0) out.push_back(a);
    }
    std::stable_sort(out.begin(), out.end(), [](const Atom& l, const Atom& r) { return l.position < r.position; });
    std::vector<Atom> merged;
    for (const auto& a : out) {
      if (!merged.empty() && merged.back().position == a.position)
        merged.back().mass += a.mass;
      else
        merged.push_back(a);
    }
    return merged;
  }

  // Overlapping segments add up.
  static std::vector<DensitySegment> normalize_density(std::vector<DensitySegment> segs) {
    std::vector<DensitySegment> in;
    for (const auto& s : segs) {
      if (!std::isfinite(s.left) || !std::isfinite(s.right)) throw InvalidInput("density segment endpoint is not finite");
      if (!std::isfinite(s.value)) throw InvalidInput("density value is not finite");
      if (s.value < 0.0)
        throw InvalidInput("negative density " + std::to_string(s.value) + " on [" + std::to_string(s.left) + ", " +
                           std::to_string(s.right) + "]");
      if (s.left > s.right)
        throw InvalidInput("density segment has left > right: [" + std::to_string(s.left) + ", " +
                           std::to_string(s.right) + "]");
      if (s.left < s.right && s.value > 0.0) in.push_back(s);
    }
    std::vector<double> cuts;
    for (const auto& s : in) {
      cuts.push_back(s.left);
      cuts.push_back(s.right);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    std::vector<DensitySegment> out;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const double l = cuts[i], r = cuts[i + 1];
      double v = 0.0;
      for (const auto& s : in)
        if (s.left <= l && r <= s.right) v += s.value;
      if (v <= 0.0) continue;
      if (!out.empty() && out.back().right == l && out.back().value == v)
        out.back().right = r;
      else
        out.push_back({l, r, v});
    }
    return out;
  }

  void index() {
    points_.clear();
    for (const auto& a : atoms_) points_.push_back(a.position);
    for (const auto& s : density_) {
      points_.push_back(s.left);
      points_.push_back(s.right);
    }
    std::sort(points_.begin(), points_.end());
    points_.erase(std::unique(points_.begin(), points_.end()), points_.end());
    const std::size_t n = points_.size();
    point_mass_.assign(n, 0.0);
    cell_density_.assign(n + 1, 0.0);
    below_.assign(n, 0.0);
    std::size_t j = 0;
    for (const auto& a : atoms_) {
      while (points_[j] < a.position) ++j;
      point_mass_[j] = a.mass;
    }
    std::size_t s = 0;
    for (std::size_t i = 1; i < n; ++i) {
      const double mid = 0.5 * (points_[i - 1] + points_[i]);
      while (s < density_.size() && density_[s].right <= points_[i - 1]) ++s;
      if (s < density_.size() && density_[s].left <= mid && mid <= density_[s].right) cell_density_[i] = density_[s].value;
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (i > 0) acc += point_mass_[i - 1] + cell_density_[i] * (points_[i] - points_[i - 1]);
      below_[i] = acc;
    }
    total_ = n == 0 ? 0.0 : acc + point_mass_[n - 1];
  }

  std::vector<Atom> atoms_;
  std::vector<DensitySegment> density_;
  std::vector<double> points_;
  std::vector<double> point_mass_;
  std::vector<double> cell_density_;
  std::vector<double> below_;
  double total_ = 0.0;
};

// sup_x mu([x, x+1]); the supremum is attained with a window edge on a structural point.
inline double brinck_constant(const Measure& m) {
  double best = 0.0;
  for (double p : m.points()) {
    best = std::max(best, m.mass(IntervalSpec::closed(p, p + 1.0)));
    best = std::max(best, m.mass(IntervalSpec::closed(p - 1.0, p)));
  }
  return best;
}

// mu((x-a, x+a)) -> 0 as |x| -> inf.  Checked at the first centres whose windows clear the support.
inline bool tail_decay_check(const Measure& m, double a) {
  if (!(a > 0.0)) throw InvalidInput("tail_decay_check needs a > 0");
  const auto hull = m.support_hull();
  if (!hull) return true;
  return m.mass(IntervalSpec::open(hull->second, hull->second + 2.0 * a)) == 0.0 &&
         m.mass(IntervalSpec::open(hull->first - 2.0 * a, hull->first)) == 0.0;
}

}  // namespace otelbaev
