#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "otelbaev/errors.hpp"
#include "otelbaev/measure.hpp"

namespace otelbaev {

// F_0 = [-1, 1], F_k = [-2^k, -2^(k-1)] u [2^(k-1), 2^k]; F_k^+ = [2^(k-1), 2^k] with centre x_k.
struct DyadicBlocks {
  int K = 0;

  explicit DyadicBlocks(int depth) : K(depth) {
    if (depth < 0) throw InvalidInput("dyadic truncation depth must be >= 0");
  }

  static double center(int k) { return 3.0 * std::ldexp(1.0, k - 2); }

  static std::vector<std::pair<double, double>> block(int k) {
    if (k == 0) return {{-1.0, 1.0}};
    const double a = std::ldexp(1.0, k - 1), b = std::ldexp(1.0, k);
    return {{-b, -a}, {a, b}};
  }
};

namespace detail {

inline void require_ac(const Measure& m, const char* what) {
  if (!m.atoms().empty()) throw InvalidInput(std::string(what) + " needs an absolutely continuous measure (atoms present)");
}

// Integral of (1+|x|)^s over [a, b].
inline double weight_integral(double s, double a, double b) {
  auto F = [s](double x) {
    const double v = std::pow(1.0 + std::abs(x), s + 1.0) / (s + 1.0);
    return x < 0.0 ? -v : v;
  };
  return F(b) - F(a);
}

}  // namespace detail

inline double classical_lt_integral(const Measure& m, double gamma) {
  detail::require_ac(m, "classical_lt_integral");
  if (!(gamma > 0.0)) throw InvalidInput("classical_lt_integral needs gamma > 0");
  double s = 0.0;
  for (const auto& seg : m.density()) s += (seg.right - seg.left) * std::pow(seg.value, 0.5 + gamma);
  return s;
}

// sup over r > 0 of mu((x-r, x+r)) / (2r), exact for piecewise-constant densities.
inline double maximal_function(const Measure& m, double x) {
  detail::require_ac(m, "maximal_function");
  if (m.is_zero()) return 0.0;
  const auto& p = m.points();
  const auto i = std::upper_bound(p.begin(), p.end(), x) - p.begin();
  double best;
  if (i > 0 && p[static_cast<std::size_t>(i - 1)] == x)
    best = 0.5 * (m.cell_density(i - 1) + m.cell_density(i));
  else
    best = m.cell_density(i);
  for (double q : p) {
    const double r = std::abs(q - x);
    if (r > 0.0) best = std::max(best, m.mass(IntervalSpec::open(x - r, x + r)) / (2.0 * r));
  }
  return best;
}

struct NwFunctionals {
  double gamma = 0.0;
  double sigma = 0.0;
  int K = 0;
  double A = 0.0;
  double B = 0.0;
  std::vector<double> block_terms;  // (integral over F_k of (1+|x|)^sigma q)^(1/2+gamma), k = 0..K
};

inline double nw_sigma(double gamma) { return (0.5 - gamma) / (0.5 + gamma); }

// Truncated A_gamma over F_0..F_K and B_gamma over the unit intervals inside [-2^K, 2^K].
inline NwFunctionals nw_functionals(const Measure& m, double gamma, int K) {
  detail::require_ac(m, "nw_functionals");
  if (!(gamma > 0.0 && gamma < 0.5)) throw InvalidInput("nw_functionals needs 0 < gamma < 1/2");
  NwFunctionals r;
  r.gamma = gamma;
  r.sigma = nw_sigma(gamma);
  r.K = K;
  const DyadicBlocks blocks(K);
  const double p = 0.5 + gamma;
  double sum = 0.0;
  for (int k = 0; k <= K; ++k) {
    double t = 0.0;
    for (const auto& [a, b] : DyadicBlocks::block(k))
      for (const auto& seg : m.density()) {
        const double l = std::max(a, seg.left), h = std::min(b, seg.right);
        if (l < h) t += seg.value * detail::weight_integral(r.sigma, l, h);
      }
    r.block_terms.push_back(std::pow(t, p));
    sum += r.block_terms.back();
  }
  r.A = sum + std::pow(sum, 2.0 * gamma / p);
  const double half = std::ldexp(1.0, K);
  for (double j = -half; j < half; j += 1.0) {
    const double w = m.mass(IntervalSpec::closed(j, j + 1.0));
    if (w > 0.0) r.B += std::pow(w, 2.0 * gamma) + std::pow(w, p);
  }
  return r;
}

namespace detail {

inline double param(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw InvalidInput(std::string("missing example parameter '") + key + "'");
  if (!j.at(key).is_number()) throw InvalidInput(std::string("example parameter '") + key + "' must be a number");
  const double v = j.at(key).get<double>();
  if (!std::isfinite(v)) throw InvalidInput(std::string("example parameter '") + key + "' must be finite");
  return v;
}

inline int depth(const nlohmann::json& j) {
  const double K = param(j, "K");
  if (K != std::floor(K) || K < 2 || K > 40) throw InvalidInput("truncation depth K must be an integer in [2, 40]");
  return static_cast<int>(K);
}

}  // namespace detail

// Boxes of height 2^(k/p) and width 2^-k centred at x_k, even k = 2..K.
inline Measure lt_counterexample(double p, int K) {
  if (!(p > 1.0)) throw InvalidInput("lt_counterexample needs p > 1");
  std::vector<DensitySegment> d;
  for (int k = 2; k <= K; k += 2) {
    const double x = DyadicBlocks::center(k), h = std::ldexp(1.0, -k - 1);
    d.push_back({x - h, x + h, std::pow(2.0, k / p)});
  }
  return Measure::build({}, d);
}

// q_1 = 1 on width 2^(-k sigma) plus q_2 = 8 / 2^(k/(2 gamma)) on (x_k - 2^(k-3), x_k + 2^(k-3)), even k = 2..K.
inline Measure nw_counterexample(double gamma, int K) {
  if (!(gamma > 0.0 && gamma < 0.5)) throw InvalidInput("nw_counterexample needs 0 < gamma < 1/2");
  const double sigma = nw_sigma(gamma);
  std::vector<DensitySegment> d;
  for (int k = 2; k <= K; k += 2) {
    const double x = DyadicBlocks::center(k);
    const double h1 = 0.5 * std::pow(2.0, -k * sigma);
    d.push_back({x - h1, x + h1, 1.0});
    const double h2 = std::ldexp(1.0, k - 3);
    d.push_back({x - h2, x + h2, 8.0 / std::pow(2.0, k / (2.0 * gamma))});
  }
  return Measure::build({}, d);
}

// Atoms a_k with gaps factor * max(1/(alpha a_k), 1/(alpha a_{k+1})), or at given positions after checking the gaps.
inline Measure sparse_comb(double alpha, const std::vector<double>& masses, double factor,
                           const std::vector<double>& positions = {}) {
  if (!(alpha > 0.0)) throw InvalidInput("sparse_comb needs alpha > 0");
  for (double a : masses)
    if (!(a > 0.0) || !std::isfinite(a)) throw InvalidInput("sparse_comb masses must be finite and > 0");
  auto need = [&](std::size_t k) { return std::max(1.0 / (alpha * masses[k]), 1.0 / (alpha * masses[k + 1])); };
  std::vector<Atom> atoms;
  if (positions.empty()) {
    if (!(factor > 1.0)) throw InvalidInput("sparse_comb spacing factor must be > 1 so that x_{k+1} - x_k > max{(alpha a_k)^-1, (alpha a_{k+1})^-1}");
    double x = 0.0;
    for (std::size_t k = 0; k < masses.size(); ++k) {
      atoms.push_back({x, masses[k]});
      if (k + 1 < masses.size()) x += factor * need(k);
    }
  } else {
    if (positions.size() != masses.size()) throw InvalidInput("sparse_comb positions and masses differ in length");
    for (std::size_t k = 0; k + 1 < masses.size(); ++k) {
      const double gap = positions[k + 1] - positions[k];
      if (!(gap > need(k)))
        throw InvalidInput("sparse_comb violates x_{k+1} - x_k > max{(alpha a_k)^-1, (alpha a_{k+1})^-1} at k=" +
                           std::to_string(k) + ": gap " + std::to_string(gap) + " <= " + std::to_string(need(k)));
    }
    for (std::size_t k = 0; k < masses.size(); ++k) atoms.push_back({positions[k], masses[k]});
  }
  return Measure::build(atoms, {});
}

inline Measure generate_example(const std::string& name, const nlohmann::json& params) {
  using detail::param;
  if (!params.is_object() && !params.is_null()) throw InvalidInput("example parameters must be an object");
  const nlohmann::json& j = params.is_null() ? nlohmann::json::object() : params;
  if (name == "lt_counterexample") return lt_counterexample(param(j, "p"), detail::depth(j));
  if (name == "nw_counterexample") return nw_counterexample(param(j, "gamma"), detail::depth(j));
  if (name == "double_delta") {
    const double y = param(j, "y");
    if (!(y > 0.0)) throw InvalidInput("double_delta needs y > 0");
    return Measure::build({{0.0, 1.0}, {y, 1.0}}, {});
  }
  if (name == "single_delta") {
    const double c = param(j, "c");
    if (!(c >= 0.0)) throw InvalidInput("single_delta needs c >= 0");
    return Measure::build({{0.0, c}}, {});
  }
  if (name == "compact_uniform") {
    const double c = param(j, "c"), R = param(j, "R");
    if (!(c >= 0.0) || !(R > 0.0)) throw InvalidInput("compact_uniform needs c >= 0 and R > 0");
    return Measure::build({}, {{-R, R, c}});
  }
  if (name == "sparse_comb") {
    if (!j.contains("masses") || !j.at("masses").is_array()) throw InvalidInput("sparse_comb needs a 'masses' array");
    std::vector<double> masses, positions;
    for (const auto& v : j.at("masses")) {
      if (!v.is_number()) throw InvalidInput("sparse_comb masses must be numbers");
      masses.push_back(v.get<double>());
    }
    if (j.contains("positions")) {
      if (!j.at("positions").is_array()) throw InvalidInput("sparse_comb 'positions' must be an array");
      for (const auto& v : j.at("positions")) {
        if (!v.is_number()) throw InvalidInput("sparse_comb positions must be numbers");
        positions.push_back(v.get<double>());
      }
    }
    const double factor = positions.empty() ? param(j, "spacing_factor") : 2.0;
    return sparse_comb(param(j, "alpha"), masses, factor, positions);
  }
  throw InvalidInput("unknown example '" + name + "'");
}

}  // namespace otelbaev
