#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "otelbaev/decomposition.hpp"
#include "otelbaev/errors.hpp"
#include "otelbaev/measure.hpp"
#include "otelbaev/profile.hpp"

namespace otelbaev {

inline const double kAlphaLower = 1.0 / (M_PI * M_PI + 0.75);
inline constexpr double kBeta = 2.0;

struct BoundValue {
  double value = 0.0;
  double err = 0.0;
  std::string source;
};

struct CountingBounds {
  double lambda = 0.0;
  BoundValue lower1, lower2, lower3_literal, lower3_variant;
  BoundValue upper1, upper2, upper3, upper_bracketing;

  double best_lower() const { return std::max(lower1.value, lower2.value); }
  double best_upper() const {
    return std::min({upper1.value, upper2.value, upper3.value, upper_bracketing.value});
  }
};

struct EigenvalueBounds {
  int n = 0;
  double lo = 0.0;
  double hi = 0.0;
};

struct SpectralEdgeBounds {
  double lambda1_lo = 0.0;
  double lambda1_hi = 0.0;
  double Lambda_lo = 0.0;
  double Lambda_hi = 0.0;
  double Q1 = 0.0;
  double Q2 = 0.0;
};

struct LTBounds {
  double gamma = 0.0;
  BoundValue lower_qstar, upper_qstar;
  std::optional<BoundValue> lower_mass, upper_mass;
  BoundValue lower_c1, upper_c2;
  BoundValue upper_decomp;
};

// Everything the bound formulas need for one measure, built once; const methods are thread safe.
class SpectralEstimator {
 public:
  explicit SpectralEstimator(Measure m)
      : m_(std::move(m)),
        low_(OtelbaevProfile::build(m_, kAlphaLower)),
        one_(OtelbaevProfile::build(m_, 1.0)),
        two_(OtelbaevProfile::build(m_, kBeta)),
        dec_(build_decomposition(m_, kBeta)) {
    sup_low_ = low_.sup_q();
    sup_two_ = two_.sup_q();
    if (m_.is_zero()) return;
    // eta -> L(M_alpha(4 eta)) on a log grid, shared by every lambda of the third lower bound.
    const double top = 0.25 * sup_low_;
    const int per_decade = 64;
    const int decades = 16;
    for (int i = per_decade * decades; i >= 0; --i) {
      const double eta = top * std::pow(10.0, -static_cast<double>(i) / per_decade);
      eta_.push_back(eta);
      eta_len_.push_back(low_.sublevel(4.0 * eta).total_length);
    }
  }

  const Measure& measure() const { return m_; }
  const OtelbaevProfile& profile_lower() const { return low_; }
  const OtelbaevProfile& profile_one() const { return one_; }
  const OtelbaevProfile& profile_beta() const { return two_; }
  const Decomposition& decomposition() const { return dec_; }
  double sup_q_lower() const { return sup_low_; }
  double sup_q_beta() const { return sup_two_; }

  CountingBounds counting(double lambda) const {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InvalidInput("counting bounds need a finite lambda > 0");
    CountingBounds b;
    b.lambda = lambda;
    b.lower1.source = "half min sqrt(q*_alpha) times L(M_alpha(4 lambda))";
    b.lower2.source = "sqrt(lambda) L(M_alpha(4 lambda))";
    b.lower3_literal.source = "sup over sqrt(eta) >= lambda of eta L(M_alpha(4 eta)), literal reading";
    b.lower3_variant.source = "sup over eta >= lambda of sqrt(eta) L(M_alpha(4 eta)), dimensional reading";
    b.upper1.source = "max sqrt(q*_beta) times L(M_beta(lambda/4))";
    b.upper2.source = "sqrt(sup q*_beta) L(M_beta(lambda/4))";
    b.upper3.source = "4 times integral of sqrt(q*_beta) over M_beta(lambda/4)";
    b.upper_bracketing.source = "#{k : lambda <= 1/|I_k|^2}, alpha = 2 decomposition";
    if (m_.is_zero()) return b;

    const double sl = std::sqrt(lambda);
    const SublevelSet lo_set = low_.sublevel(4.0 * lambda);
    if (const auto r = low_.d_range(0.5 / sl)) {
      b.lower1.value = 0.5 / r->second * lo_set.total_length;
      b.lower1.err = 0.5 / r->second * lo_set.err;
    }
    b.lower2.value = sl * lo_set.total_length;
    b.lower2.err = sl * lo_set.err;

    auto third = [&](double eta_min, bool literal) {
      auto value = [&](double eta, double len) { return (literal ? eta : std::sqrt(eta)) * len; };
      double best = value(eta_min, low_.sublevel(4.0 * eta_min).total_length);
      for (std::size_t i = 0; i < eta_.size(); ++i)
        if (eta_[i] >= eta_min) best = std::max(best, value(eta_[i], eta_len_[i]));
      return best;
    };
    b.lower3_literal.value = third(lambda * lambda, true);
    b.lower3_variant.value = third(lambda, false);

    const SublevelSet up_set = two_.sublevel(0.25 * lambda);
    if (const auto r = two_.d_range(2.0 / sl)) {
      b.upper1.value = up_set.total_length / r->first;
      b.upper1.err = up_set.err / r->first;
    }
    b.upper2.value = std::sqrt(sup_two_) * up_set.total_length;
    b.upper2.err = std::sqrt(sup_two_) * up_set.err;
    const QuadResult inv = two_.integrate_d_power(-1.0, 2.0 / sl);
    b.upper3.value = 4.0 * inv.value;
    b.upper3.err = 4.0 * inv.err;

    int k = 0;
    for (const auto& I : dec_.intervals)
      if (I.bounded() && I.mass > 0.0 && lambda * I.length() * I.length() <= 1.0) ++k;
    b.upper_bracketing.value = k;
    return b;
  }

  // lambda_n in [lo, hi]; lo = -4 sup q*_beta and hi = 0 when the defining sets are empty.
  EigenvalueBounds eigenvalue(int n) const {
    if (n < 1) throw InvalidInput("eigenvalue index must be >= 1");
    EigenvalueBounds e;
    e.n = n;
    if (m_.is_zero()) return e;

    // lo = -inf{lambda : L(M_beta(lambda/4)) <= (n-1)/sqrt(sup q*_beta)}; the length is nonincreasing.
    const double cap = (n - 1) / std::sqrt(sup_two_);
    auto lo_ok = [&](double lambda) { return two_.sublevel(0.25 * lambda).total_length <= cap; };
    double a = 0.0, b = 4.0 * sup_two_ * (1.0 + 1e-12);
    if (!lo_ok(b)) {
      e.lo = -4.0 * sup_two_;
    } else {
      for (int it = 0; it < 200 && b - a > 1e-14 * b; ++it) {
        const double mid = 0.5 * (a + b);
        (lo_ok(mid) ? b : a) = mid;
      }
      e.lo = -b;
    }

    // hi = -sup{lambda : sqrt(lambda) L(M_alpha(4 lambda)) >= n}; scan down from the support of the set.
    auto hi_ok = [&](double lambda) { return std::sqrt(lambda) * low_.sublevel(4.0 * lambda).total_length >= n; };
    const double top = 0.25 * sup_low_;
    const int per_decade = 64;
    double prev = top;
    e.hi = 0.0;
    if (hi_ok(top)) {
      e.hi = -top;
      return e;
    }
    for (int i = 1; i <= per_decade * 16; ++i) {
      const double lam = top * std::pow(10.0, -static_cast<double>(i) / per_decade);
      if (hi_ok(lam)) {
        double l = lam, h = prev;
        for (int it = 0; it < 200 && h - l > 1e-14 * h; ++it) {
          const double mid = 0.5 * (l + h);
          (hi_ok(mid) ? l : h) = mid;
        }
        e.hi = -l;
        break;
      }
      prev = lam;
    }
    return e;
  }

  // sup over eps of (eps^(3/2)/2) integral over {q*_alpha >= eps} of 1/q*_alpha.
  double n_minus_lower() const {
    if (m_.is_zero()) return 0.0;
    const int per_decade = 64;
    double best = 0.0;
    for (int i = 0; i <= per_decade * 6; ++i) {
      const double eps = sup_low_ * std::pow(10.0, -static_cast<double>(i) / per_decade);
      const double v = 0.5 * std::pow(eps, 1.5) * low_.integrate_d_power(2.0, 1.0 / std::sqrt(eps)).value;
      best = std::max(best, v);
    }
    return best;
  }

  SpectralEdgeBounds edges() const {
    SpectralEdgeBounds s;
    if (m_.is_zero()) return s;
    s.lambda1_lo = -4.0 * sup_two_;
    s.lambda1_hi = -0.25 * sup_low_;
    return s;
  }

  LTBounds lt(double gamma) const {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) throw InvalidInput("LT bounds need a finite gamma > 0");
    LTBounds b;
    b.gamma = gamma;
    b.lower_qstar.source = "gamma/(gamma+1/2) 4^-(gamma+1/2) integral of q*_alpha^(gamma+1/2)";
    b.upper_qstar.source = "4^(gamma+1) integral of q*_2^(gamma+1/2)";
    b.lower_c1.source = "gamma/(gamma+1/2) (2 pi^2 + 3/2)^-(1+2 gamma) integral of q*_1^(gamma+1/2)";
    b.upper_c2.source = "2^(4 gamma+3) integral of q*_1^(gamma+1/2)";
    b.upper_decomp.source = "2^(2 gamma) sum of mu_k(I_k)^(2 gamma), alpha = 2 decomposition";
    if (gamma == 0.5) {
      b.lower_mass = BoundValue{kAlphaLower / 32.0 * m_.total_mass(), 0.0, "alpha/32 mu(R)"};
      b.upper_mass = BoundValue{0.5 * m_.total_mass(), 0.0, "mu(R)/2"};
    }
    if (m_.is_zero()) return b;
    const double g = gamma / (gamma + 0.5);
    const PowerIntegral pl = power_integral(low_, gamma);
    const PowerIntegral p2 = power_integral(two_, gamma);
    const PowerIntegral p1 = power_integral(one_, gamma);
    const double cl = g * std::pow(0.25, gamma + 0.5);
    b.lower_qstar.value = cl * pl.value;
    b.lower_qstar.err = cl * pl.err;
    const double cu = std::pow(4.0, gamma + 1.0);
    b.upper_qstar.value = cu * p2.value;
    b.upper_qstar.err = cu * p2.err;
    const double c1 = g * std::pow(1.0 / (2.0 * M_PI * M_PI + 1.5), 1.0 + 2.0 * gamma);
    b.lower_c1.value = c1 * p1.value;
    b.lower_c1.err = c1 * p1.err;
    const double c2 = std::pow(2.0, 4.0 * gamma + 3.0);
    b.upper_c2.value = c2 * p1.value;
    b.upper_c2.err = c2 * p1.err;
    double s = 0.0;
    for (const auto& I : dec_.intervals)
      if (I.mass > 0.0) s += std::pow(I.mass, 2.0 * gamma);
    b.upper_decomp.value = std::pow(2.0, 2.0 * gamma) * s;
    return b;
  }

 private:
  Measure m_;
  OtelbaevProfile low_, one_, two_;
  Decomposition dec_;
  double sup_low_ = 0.0;
  double sup_two_ = 0.0;
  std::vector<double> eta_;
  std::vector<double> eta_len_;
};

inline CountingBounds counting_bounds(const Measure& m, double lambda) { return SpectralEstimator(m).counting(lambda); }
inline EigenvalueBounds eigenvalue_bounds(const Measure& m, int n) { return SpectralEstimator(m).eigenvalue(n); }
inline double n_minus_lower(const Measure& m) { return SpectralEstimator(m).n_minus_lower(); }
inline SpectralEdgeBounds spectral_edges(const Measure& m) { return SpectralEstimator(m).edges(); }
inline LTBounds lt_bounds(const Measure& m, double gamma) { return SpectralEstimator(m).lt(gamma); }

}  // namespace otelbaev
