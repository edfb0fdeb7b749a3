#include <catch_amalgamated.hpp>

#include <cmath>

#include "oracles.hpp"
#include "otelbaev/corpus.hpp"
#include "otelbaev/refsolver.hpp"

using namespace otelbaev;
using Catch::Approx;

TEST_CASE("single delta has one bound state at -c^2/4", "[refsolver]") {
  const auto sp = negative_spectrum(Measure::build({{0, 1}}, {}), 1e-13);
  REQUIRE(sp.count == 1);
  CHECK(std::abs(sp.eigenvalues[0] + 0.25) <= 1e-10);
  CHECK(sp.errors[0] <= 1e-12);
  for (double c : {0.1, 0.7, 3.0}) {
    const auto s = negative_spectrum(Measure::build({{2.5, c}}, {}));
    REQUIRE(s.count == 1);
    CHECK(s.eigenvalues[0] == Approx(-c * c / 4).epsilon(1e-10));
  }
}

TEST_CASE("two unit deltas against the secular equation", "[refsolver]") {
  for (double y : {0.3, 1.0, 1.9, 2.5, 3.0, 6.0}) {
    INFO("y " << y);
    const auto sp = negative_spectrum(Measure::build({{0, 1}, {y, 1}}, {}));
    const auto ks = oracle::two_delta_kappas(y);
    REQUIRE(sp.count == static_cast<int>(ks.size()));
    for (std::size_t i = 0; i < ks.size(); ++i) CHECK(sp.kappas[i] == Approx(ks[i]).epsilon(1e-10));
  }
  CHECK(negative_spectrum(Measure::build({{0, 1}, {1.99, 1}}, {})).count == 1);
  CHECK(negative_spectrum(Measure::build({{0, 1}, {2.01, 1}}, {})).count == 2);
}

TEST_CASE("square well ground state", "[refsolver]") {
  for (auto [v, L] : {std::pair{1.0, 1.0}, {4.0, 0.5}, {0.3, 6.0}, {2.0, 3.0}}) {
    const auto sp = negative_spectrum(Measure::build({}, {{-1, -1 + L, v}}));
    REQUIRE(sp.count >= 1);
    CHECK(sp.kappas[0] == Approx(oracle::square_well_ground_kappa(v, L)).epsilon(1e-10));
    // Bound states of the well: ceil(L sqrt(v) / pi).
    CHECK(sp.count == static_cast<int>(std::ceil(L * std::sqrt(v) / M_PI)));
  }
}

TEST_CASE("counting function", "[refsolver]") {
  const Measure one = Measure::build({{0, 1}}, {});
  CHECK(counting_exact(one, 0.1).count == 1);
  CHECK(counting_exact(one, 0.3).count == 0);
  CHECK(counting_exact(one, 0.25).boundary_ambiguous);
  std::vector<Atom> comb;
  for (int i = 0; i < 5; ++i) comb.push_back({10.0 * i, 1});
  const Measure m = Measure::build(comb, {});
  CHECK(counting_exact(m, 0.01).count == 5);
  CHECK(counting_exact(m, 0.3).count == 0);
  CHECK(negative_spectrum(Measure{}).count == 0);
  CHECK_THROWS_AS(counting_exact(one, 0.0), InvalidInput);
}

TEST_CASE("LT sums", "[refsolver]") {
  for (double c : {0.2, 1.0, 2.5}) {
    const Measure m = Measure::build({{1, c}}, {});
    const auto r = lt_sum_exact(m, 0.5);
    CHECK(r.value == Approx(c / 2).epsilon(1e-10));
    CHECK(r.quadrature == Approx(r.value).epsilon(1e-6));
  }
  CHECK(lt_sum_exact(Measure::build({{0, 1}}, {}), 1.0).value == Approx(0.25).epsilon(1e-10));
  CHECK(lt_sum_exact(Measure::build({{0, 1}}, {}), 2.0).value == Approx(1.0 / 16).epsilon(1e-10));
  CHECK(lt_sum_exact(Measure{}, 1.0).value == 0);
  // A loose bracket widens the reported error enough to cover the true value.
  const Measure d2 = Measure::build({{0, 2}}, {});
  for (double g : {0.25, 0.5, 1.0}) {
    const auto loose = lt_sum_exact(d2, negative_spectrum(d2, 1e-6), g);
    CHECK(loose.err > 0);
    CHECK(std::abs(loose.value - 1.0) <= loose.err);
  }
  Rng rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const Measure m = random_measure(rng);
    const auto sp = negative_spectrum(m);
    for (double g : {0.25, 0.5, 1.0, 2.0}) CHECK_NOTHROW(lt_sum_exact(m, sp, g));
  }
}

TEST_CASE("spectrum is invariant under reflection and translation", "[refsolver][property]") {
  Rng rng(42);
  for (int trial = 0; trial < 30; ++trial) {
    const Measure m = random_measure(rng);
    const auto a = negative_spectrum(m);
    const auto b = negative_spectrum(m.reflected());
    const auto c = negative_spectrum(m.translated(rng.uniform(-5, 5)));
    REQUIRE(a.count == b.count);
    REQUIRE(a.count == c.count);
    for (int i = 0; i < a.count; ++i) {
      CHECK(b.eigenvalues[i] == Approx(a.eigenvalues[i]).margin(1e-9));
      CHECK(c.eigenvalues[i] == Approx(a.eigenvalues[i]).margin(1e-9));
    }
  }
}

TEST_CASE("finite differences", "[refsolver][fd]") {
  const auto fd = fd_oracle(Measure::build({{0, 1}}, {}), 1e-3, 40, true);
  REQUIRE(fd.eigenvalues.size() == 1);
  CHECK(std::abs(fd.eigenvalues[0] + 0.25) <= 2e-3);
  CHECK(fd.warning.empty());
  Rng rng(43);
  for (int trial = 0; trial < 5; ++trial) {
    const Measure m = random_measure(rng);
    const auto sp = negative_spectrum(m);
    const auto f = fd_oracle(m, 1e-3, 40);
    const double tol = std::max(5e-3 * std::sqrt(OtelbaevProfile::build(m, 2).sup_q()), 1e-6);
    const std::size_t n = std::max(f.eigenvalues.size(), sp.eigenvalues.size());
    for (std::size_t i = 0; i < n; ++i) {
      const double a = i < sp.eigenvalues.size() ? sp.eigenvalues[i] : 0.0;
      const double b = i < f.eigenvalues.size() ? f.eigenvalues[i] : 0.0;
      INFO("trial " << trial << " nu " << i);
      CHECK(std::abs(a - b) <= tol);
    }
  }
  CHECK_THROWS_AS(fd_oracle(Measure{}, 0, 1), InvalidInput);
}
