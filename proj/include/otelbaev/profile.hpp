#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "otelbaev/errors.hpp"
#include "otelbaev/measure.hpp"
#include "otelbaev/quadrature.hpp"
#include "otelbaev/qstar.hpp"

namespace otelbaev {

enum class PieceKind { Linear, Quadratic, Sampled };

// One stretch of x on which the window ends stay in the same cells/points, so d_alpha
// has a single closed form:
//   Linear:    d = c0 + c1 x  (c1 = +-2, one window end pinned to an atom)
//   Quadratic: alpha s d^2 + alpha (c0 + c1 x) d = 1
//   Sampled:   transition slivers resolved to rounding level; evaluated pointwise.
// d is monotone on every Linear or Quadratic piece.
struct ProfilePiece {
  double x0 = 0.0;
  double x1 = 0.0;
  double d0 = 0.0;
  double d1 = 0.0;
  PieceKind kind = PieceKind::Sampled;
  double c0 = 0.0;
  double c1 = 0.0;
  double s = 0.0;
  WindowCode code;
};

// Exact d_alpha beyond the outermost structural point, t = distance from it.
//   atom at the edge:      d = 2t                 for t >= 1/(2 alpha a)
//   bare density v there:  d = t + sqrt(t^2 + 4k) for t >= max(0, k/L - L), k = 1/(2 alpha v)
struct TailModel {
  bool atom = true;
  double edge = 0.0;
  double t0 = 0.0;
  double k = 0.0;

  double d(double t) const { return atom ? 2.0 * t : t + std::sqrt(t * t + 4.0 * k); }

  // Largest t with d(t) <= dmax.
  double t_at(double dmax) const {
    if (dmax == kInf) return kInf;
    return atom ? 0.5 * dmax : (dmax * dmax - 4.0 * k) / (2.0 * dmax);
  }

  // Integral of d(t)^m over t in [ta, tb].
  double power_integral(double m, double ta, double tb) const {
    if (!(ta < tb)) return 0.0;
    const bool log1 = std::abs(m + 1.0) < 1e-12;
    if (atom) {
      auto f = [&](double t) {
        if (t == kInf) return (m + 1.0 < 0.0) ? 0.0 : kInf;
        return log1 ? 0.5 * std::log(2.0 * t) : std::pow(2.0 * t, m + 1.0) / (2.0 * (m + 1.0));
      };
      return f(tb) - f(ta);
    }
    const bool logm = std::abs(m - 1.0) < 1e-12;
    auto g = [&](double t) {
      if (t == kInf) return (m + 1.0 < 0.0) ? 0.0 : kInf;
      const double u = d(t);
      const double a = log1 ? 0.5 * std::log(u) : std::pow(u, m + 1.0) / (2.0 * (m + 1.0));
      const double b = logm ? 2.0 * k * std::log(u) : 2.0 * k * std::pow(u, m - 1.0) / (m - 1.0);
      return a + b;
    };
    return g(tb) - g(ta);
  }
};

struct Component {
  double lo = 0.0;
  double hi = 0.0;
};

struct SublevelSet {
  double alpha = 0.0;
  double lambda = 0.0;
  std::vector<Component> components;
  double total_length = 0.0;
  double err = 0.0;
};

struct PowerIntegral {
  double alpha = 0.0;
  double exponent = 0.0;
  double value = 0.0;
  double err = 0.0;
  double window_lo = 0.0;
  double window_hi = 0.0;
  double tail = 0.0;
};

// Piecewise closed-form representation of d_alpha for one (measure, alpha).
class OtelbaevProfile {
 public:
  OtelbaevProfile() = default;

  static OtelbaevProfile build(const Measure& m, double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InvalidInput("alpha must be finite and > 0");
    OtelbaevProfile pr;
    pr.measure_ = m;
    pr.alpha_ = alpha;
    if (m.is_zero()) return pr;
    const auto& p = m.points();
    const std::ptrdiff_t n = m.num_points();
    pr.right_ = make_tail(m, alpha, n - 1, n - 2, p.back());
    const Measure r = m.reflected();
    pr.left_ = make_tail(r, alpha, n - 1, n - 2, r.points().back());
    pr.left_.edge = p.front();
    pr.window_lo_ = p.front() - pr.left_.t0;
    pr.window_hi_ = p.back() + pr.right_.t0;
    const OtelbaevPoint ea = eval_point(m, alpha, pr.window_lo_);
    const OtelbaevPoint eb = eval_point(m, alpha, pr.window_hi_);
    pr.split(pr.window_lo_, ea, pr.window_hi_, eb);
    return pr;
  }

  double alpha() const { return alpha_; }
  const Measure& measure() const { return measure_; }
  bool is_zero() const { return measure_.is_zero(); }
  double window_lo() const { return window_lo_; }
  double window_hi() const { return window_hi_; }
  const std::vector<ProfilePiece>& pieces() const { return pieces_; }
  const TailModel& left_tail() const { return left_; }
  const TailModel& right_tail() const { return right_; }

  double d_at(double x) const {
    if (is_zero()) return kInf;
    if (x <= window_lo_) return left_.d(left_.edge - x);
    if (x >= window_hi_) return right_.d(x - right_.edge);
    auto it = std::upper_bound(pieces_.begin(), pieces_.end(), x,
                               [](double v, const ProfilePiece& pc) { return v < pc.x1; });
    if (it == pieces_.end()) it = std::prev(pieces_.end());
    return piece_d(*it, x);
  }

  double q_at(double x) const {
    const double d = d_at(x);
    return 1.0 / (d * d);
  }

  double sup_q() const {
    if (is_zero()) return 0.0;
    double dmin = kInf;
    for (const auto& pc : pieces_) dmin = std::min({dmin, pc.d0, pc.d1});
    return 1.0 / (dmin * dmin);
  }

  // {x : d_alpha(x) <= dmax}, i.e. {q* >= 1/dmax^2}.
  SublevelSet sublevel_d(double dmax) const {
    SublevelSet out;
    out.alpha = alpha_;
    out.lambda = 1.0 / (dmax * dmax);
    if (is_zero() || !(dmax > 0.0)) return out;
    std::vector<Component> raw;
    double err = 0.0;
    if (left_.d(left_.t0) <= dmax) {
      const double t = left_.t_at(dmax);
      raw.push_back({left_.edge - t, window_lo_});
    }
    for (const auto& pc : pieces_) {
      const auto sub = in_set(pc, dmax, err);
      if (sub) raw.push_back(*sub);
    }
    if (right_.d(right_.t0) <= dmax) {
      const double t = right_.t_at(dmax);
      raw.push_back({window_hi_, right_.edge + t});
    }
    for (const auto& c : raw) {
      if (!out.components.empty() && c.lo <= out.components.back().hi)
        out.components.back().hi = std::max(out.components.back().hi, c.hi);
      else
        out.components.push_back(c);
    }
    for (const auto& c : out.components) out.total_length += c.hi - c.lo;
    out.err = err;
    return out;
  }

  SublevelSet sublevel(double lambda) const {
    if (!(lambda > 0.0)) throw InvalidInput("sublevel threshold must be > 0");
    SublevelSet s = sublevel_d(1.0 / std::sqrt(lambda));
    s.lambda = lambda;
    return s;
  }

  // Smallest and largest d_alpha on {d_alpha <= dmax}; nullopt when that set is empty.
  std::optional<std::pair<double, double>> d_range(double dmax) const {
    if (is_zero()) return std::nullopt;
    double lo = kInf, hi = -kInf;
    auto take = [&](double v) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    };
    double err = 0.0;
    for (const auto& pc : pieces_) {
      const auto sub = in_set(pc, dmax, err);
      if (!sub) continue;
      take(piece_d(pc, sub->lo));
      take(piece_d(pc, sub->hi));
    }
    for (const TailModel* t : {&left_, &right_}) {
      if (t->d(t->t0) > dmax) continue;
      take(t->d(t->t0));
      take(std::min(dmax, t->d(t->t_at(dmax))));
    }
    if (lo == kInf) return std::nullopt;
    return std::make_pair(lo, std::min(hi, dmax));
  }

  // Integral of d_alpha(x)^m over {d_alpha <= dmax}.
  QuadResult integrate_d_power(double m, double dmax = kInf) const {
    QuadResult out;
    if (is_zero()) return out;
    double err = 0.0;
    for (const auto& pc : pieces_) {
      const auto sub = in_set(pc, dmax, err);
      if (!sub || !(sub->lo < sub->hi)) continue;
      const QuadResult r = piece_power(pc, m, sub->lo, sub->hi);
      out.value += r.value;
      out.err += r.err;
    }
    out.value += tail_power(m, dmax);
    out.err += err * std::pow(dmax == kInf ? 1.0 : dmax, m);
    return out;
  }

  double tail_power(double m, double dmax = kInf) const {
    if (is_zero()) return 0.0;
    double v = 0.0;
    for (const TailModel* t : {&left_, &right_}) {
      if (t->d(t->t0) > dmax) continue;
      v += t->power_integral(m, t->t0, t->t_at(dmax));
    }
    return v;
  }

  double piece_d(const ProfilePiece& pc, double x) const {
    switch (pc.kind) {
      case PieceKind::Linear:
        return pc.c0 + pc.c1 * x;
      case PieceKind::Quadratic:
        return quadratic_d(pc, x);
      case PieceKind::Sampled:
        break;
    }
    return eval_point(measure_, alpha_, x).d;
  }

 private:
  static TailModel make_tail(const Measure& m, double alpha, std::ptrdiff_t last, std::ptrdiff_t prev, double edge) {
    TailModel t;
    t.edge = edge;
    const double a = m.point_mass(last);
    if (a > 0.0) {
      t.atom = true;
      t.t0 = 1.0 / (2.0 * alpha * a);
      return t;
    }
    const double v = m.cell_density(last);
    const double len = m.points()[static_cast<std::size_t>(last)] - m.points()[static_cast<std::size_t>(prev)];
    t.atom = false;
    t.k = 1.0 / (2.0 * alpha * v);
    t.t0 = std::max(0.0, t.k / len - len);
    return t;
  }

  double quadratic_d(const ProfilePiece& pc, double x) const {
    const double a = alpha_ * (pc.c0 + pc.c1 * x);
    if (pc.s == 0.0) return 1.0 / a;
    const double as = alpha_ * pc.s;
    const double disc = std::sqrt(a * a + 4.0 * as);
    return a >= 0.0 ? 2.0 / (a + disc) : (disc - a) / (2.0 * as);
  }

  void split(double a, const OtelbaevPoint& ea, double b, const OtelbaevPoint& eb) {
    if (ea.code == eb.code) {
      add_piece(a, ea, b, eb);
      return;
    }
    const double mid = a + 0.5 * (b - a);
    const double scale = std::max({1.0, std::abs(a), std::abs(b)});
    if (!(a < mid && mid < b) || b - a <= 1e-14 * scale) {
      pieces_.push_back({a, b, ea.d, eb.d, PieceKind::Sampled, 0.0, 0.0, 0.0, ea.code});
      return;
    }
    const OtelbaevPoint em = eval_point(measure_, alpha_, mid);
    split(a, ea, mid, em);
    split(mid, em, b, eb);
  }

  void add_piece(double a, const OtelbaevPoint& ea, double b, const OtelbaevPoint& eb) {
    ProfilePiece pc{a, b, ea.d, eb.d, PieceKind::Sampled, 0.0, 0.0, 0.0, ea.code};
    const auto& p = measure_.points();
    const WindowCode c = ea.code;
    if (WindowCode::is_point(c.left)) {
      pc.kind = PieceKind::Linear;
      pc.c0 = -2.0 * p[static_cast<std::size_t>(WindowCode::index(c.left))];
      pc.c1 = 2.0;
    } else if (WindowCode::is_point(c.right)) {
      pc.kind = PieceKind::Linear;
      pc.c0 = 2.0 * p[static_cast<std::size_t>(WindowCode::index(c.right))];
      pc.c1 = -2.0;
    } else {
      const std::ptrdiff_t cl = WindowCode::index(c.left);
      const std::ptrdiff_t cr = WindowCode::index(c.right);
      pc.kind = PieceKind::Quadratic;
      if (cl == cr) {
        pc.s = measure_.cell_density(cl);
      } else {
        const double vl = measure_.cell_density(cl);
        const double vr = measure_.cell_density(cr);
        const double pl = p[static_cast<std::size_t>(cl)];
        const double pr = p[static_cast<std::size_t>(cr - 1)];
        const double mid = measure_.mass(IntervalSpec::closed(pl, pr));
        pc.s = 0.5 * (vl + vr);
        pc.c0 = mid + vl * pl - vr * pr;
        pc.c1 = vr - vl;
      }
    }
    if (pc.kind != PieceKind::Sampled) {
      auto close = [](double u, double v) { return std::abs(u - v) <= 1e-9 * std::max(std::abs(u), std::abs(v)); };
      if (!close(piece_d(pc, a), ea.d) || !close(piece_d(pc, b), eb.d)) pc.kind = PieceKind::Sampled;
    }
    pieces_.push_back(pc);
  }

  // Part of the piece where d <= dmax; the piece is monotone so this is one interval.
  std::optional<Component> in_set(const ProfilePiece& pc, double dmax, double& err) const {
    const bool in0 = pc.d0 <= dmax;
    const bool in1 = pc.d1 <= dmax;
    if (in0 && in1) return Component{pc.x0, pc.x1};
    if (!in0 && !in1) return std::nullopt;
    double xb = 0.0;
    double e = 0.0;
    const double eps = std::numeric_limits<double>::epsilon();
    if (pc.kind == PieceKind::Linear) {
      xb = (dmax - pc.c0) / pc.c1;
      e = 4.0 * eps * (std::abs(dmax) + std::abs(pc.c0)) / std::abs(pc.c1);
    } else if (pc.kind == PieceKind::Quadratic && pc.c1 != 0.0) {
      const double astar = 1.0 / (alpha_ * dmax) - pc.s * dmax;
      xb = (astar - pc.c0) / pc.c1;
      e = 8.0 * eps * (std::abs(astar) + std::abs(pc.c0) + std::abs(pc.c1 * xb)) / std::abs(pc.c1);
    } else {
      double lo = pc.x0, hi = pc.x1;
      for (int it = 0; it < 200 && lo < hi; ++it) {
        const double mid = lo + 0.5 * (hi - lo);
        if (mid <= lo || mid >= hi) break;
        if ((piece_d(pc, mid) <= dmax) == in0)
          lo = mid;
        else
          hi = mid;
      }
      xb = in0 ? lo : hi;
      e = pc.x1 - pc.x0 < 1e-9 ? pc.x1 - pc.x0 : hi - lo;
    }
    xb = std::clamp(xb, pc.x0, pc.x1);
    err += e;
    if (in0) return Component{pc.x0, xb};
    return Component{xb, pc.x1};
  }

  QuadResult piece_power(const ProfilePiece& pc, double m, double u0, double u1) const {
    if (pc.kind == PieceKind::Linear) {
      const double da = pc.c0 + pc.c1 * u0;
      const double db = pc.c0 + pc.c1 * u1;
      double v;
      if (std::abs(m + 1.0) < 1e-12)
        v = (std::log(db) - std::log(da)) / pc.c1;
      else
        v = (std::pow(db, m + 1.0) - std::pow(da, m + 1.0)) / (pc.c1 * (m + 1.0));
      const double e = 8.0 * std::numeric_limits<double>::epsilon() *
                       (std::pow(da, m + 1.0) + std::pow(db, m + 1.0)) / std::abs(pc.c1 * (m + 1.0) + 1e-300);
      return {v, std::min(e, std::abs(v))};
    }
    auto f = [&](double x) { return std::pow(piece_d(pc, x), m); };
    return integrate(f, u0, u1, 0.0, 1e-13);
  }

  Measure measure_;
  double alpha_ = 1.0;
  double window_lo_ = 0.0;
  double window_hi_ = 0.0;
  TailModel left_;
  TailModel right_;
  std::vector<ProfilePiece> pieces_;
};

struct SupNorm {
  double value = 0.0;
  double err = 0.0;
};

inline SublevelSet sublevel_measure(const Measure& m, double alpha, double lambda) {
  return OtelbaevProfile::build(m, alpha).sublevel(lambda);
}

inline SupNorm sup_norm(const Measure& m, double alpha) {
  const OtelbaevProfile pr = OtelbaevProfile::build(m, alpha);
  const double v = pr.sup_q();
  return {v, 4.0 * std::numeric_limits<double>::epsilon() * v};
}

// Integral of q*_alpha^(1/2 + gamma) over the line.
inline PowerIntegral power_integral(const OtelbaevProfile& pr, double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw InvalidInput("power_integral needs gamma > 0");
  PowerIntegral out;
  out.alpha = pr.alpha();
  out.exponent = 0.5 + gamma;
  if (pr.is_zero()) return out;
  const double m = -2.0 * out.exponent;
  const QuadResult r = pr.integrate_d_power(m);
  out.value = r.value;
  out.err = r.err + 4.0 * std::numeric_limits<double>::epsilon() * std::abs(r.value);
  out.window_lo = pr.window_lo();
  out.window_hi = pr.window_hi();
  out.tail = pr.tail_power(m);
  return out;
}

inline PowerIntegral power_integral(const Measure& m, double alpha, double gamma) {
  return power_integral(OtelbaevProfile::build(m, alpha), gamma);
}

}  // namespace otelbaev
