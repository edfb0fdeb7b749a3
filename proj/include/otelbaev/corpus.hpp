#pragma once

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#include "otelbaev/errors.hpp"
#include "otelbaev/measure.hpp"

namespace otelbaev {

inline constexpr std::uint64_t kDefaultSeed = 20240611;

// Seed for every randomized corpus; OTELBAEV_SEED overrides the default.
inline std::uint64_t corpus_seed() {
  const char* env = std::getenv("OTELBAEV_SEED");
  if (env == nullptr || *env == '\0') return kDefaultSeed;
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(env, &used, 0);
    if (used != std::string(env).size()) throw InvalidInput("");
    return v;
  } catch (...) {
    throw InvalidInput(std::string("OTELBAEV_SEED is not an unsigned integer: ") + env);
  }
}

// mt19937_64 with hand-written mappings so that streams agree across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
  int integer(int lo, int hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<int>(eng_() % span);
  }
  std::uint64_t raw() { return eng_(); }

 private:
  std::mt19937_64 eng_;
};

struct CorpusOptions {
  int max_atoms = 20;
  int max_segments = 10;
  double position_lo = -8.0;
  double position_hi = 8.0;
  double mass_lo = 0.05;
  double mass_hi = 1.5;
  double density_lo = 0.01;
  double density_hi = 1.0;
  double width_lo = 0.1;
  double width_hi = 3.0;
};

inline Measure random_measure(Rng& rng, const CorpusOptions& opt = {}) {
  int na = rng.integer(0, opt.max_atoms);
  int ns = rng.integer(0, opt.max_segments);
  if (na == 0 && ns == 0) {
    if (opt.max_atoms > 0)
      na = 1;
    else if (opt.max_segments > 0)
      ns = 1;
  }
  std::vector<Atom> atoms;
  std::vector<DensitySegment> segs;
  for (int i = 0; i < na; ++i)
    atoms.push_back({rng.uniform(opt.position_lo, opt.position_hi), rng.uniform(opt.mass_lo, opt.mass_hi)});
  for (int i = 0; i < ns; ++i) {
    const double l = rng.uniform(opt.position_lo, opt.position_hi);
    const double w = rng.uniform(opt.width_lo, opt.width_hi);
    segs.push_back({l, l + w, rng.uniform(opt.density_lo, opt.density_hi)});
  }
  return Measure::build(std::move(atoms), std::move(segs));
}

inline std::vector<Measure> random_corpus(std::size_t count, std::uint64_t seed, const CorpusOptions& opt = {}) {
  Rng rng(seed);
  std::vector<Measure> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(random_measure(rng, opt));
  return out;
}

}  // namespace otelbaev
