#include <catch_amalgamated.hpp>

#include "otelbaev/corpus.hpp"
#include "otelbaev/measure.hpp"
#include "otelbaev/measure_io.hpp"

using namespace otelbaev;
using Catch::Approx;

TEST_CASE("build merges, sorts and drops empty pieces", "[measure]") {
  SECTION("two unit atoms") {
    const Measure m = Measure::build({{1, 1}, {-1, 1}}, {});
    REQUIRE(m.atoms().size() == 2);
    CHECK(m.atoms()[0].position == -1);
    CHECK(m.total_mass() == 2);
  }
  SECTION("empty input is the zero measure") {
    const Measure m = Measure::build({}, {});
    CHECK(m.is_zero());
    CHECK(m.total_mass() == 0);
    CHECK_FALSE(m.support_hull().has_value());
  }
  SECTION("atoms at one position merge") {
    const Measure m = Measure::build({{0, 0.5}, {0, 0.5}}, {});
    REQUIRE(m.atoms().size() == 1);
    CHECK(m.atoms()[0].mass == 1.0);
  }
  SECTION("overlapping density adds, zero values vanish, equal neighbours fuse") {
    const Measure m = Measure::build({}, {{2, 5, 1}, {0, 3, 1}, {5, 6, 0}, {5, 7, 2}});
    REQUIRE(m.density().size() == 4);
    CHECK(m.density()[0] == DensitySegment{0, 2, 1});
    CHECK(m.density()[1] == DensitySegment{2, 3, 2});
    CHECK(m.density()[2] == DensitySegment{3, 5, 1});
    CHECK(m.density()[3] == DensitySegment{5, 7, 2});
    CHECK(m.total_mass() == Approx(2 + 2 + 2 + 4));
    const Measure fused = Measure::build({}, {{0, 1, 1}, {1, 2, 1}});
    CHECK(fused.density().size() == 1);
  }
}

TEST_CASE("build rejects bad input", "[measure]") {
  CHECK_THROWS_AS(Measure::build({{0, -1}}, {}), InvalidInput);
  CHECK_THROWS_AS(Measure::build({}, {{0, 1, -0.5}}), InvalidInput);
  CHECK_THROWS_AS(Measure::build({{std::nan(""), 1}}, {}), InvalidInput);
  CHECK_THROWS_AS(Measure::build({}, {{0, kInf, 1}}), InvalidInput);
  CHECK_THROWS_AS(Measure::build({}, {{2, 1, 1}}), InvalidInput);
}

TEST_CASE("interval masses", "[measure]") {
  const Measure two = Measure::build({{-1, 1}, {1, 1}}, {});
  CHECK(two.mass(IntervalSpec::closed(-1, 1)) == 2);
  CHECK(two.mass(IntervalSpec::closed(-0.9, 0.9)) == 0);
  CHECK(two.mass(IntervalSpec::open(-1, 1)) == 0);
  CHECK(two.mass(IntervalSpec::closed_open(-1, 1)) == 1);
  CHECK(two.mass(IntervalSpec::closed(1, 1)) == 1);
  CHECK(two.mass(IntervalSpec::closed_open(1, 1)) == 0);

  const Measure u = Measure::build({}, {{0, 10, 1}});
  CHECK(u.mass(IntervalSpec::closed_open(2, 5)) == Approx(3));
  CHECK(u.mass(IntervalSpec::closed(-5, 20)) == Approx(10));
  CHECK(u.mass(IntervalSpec::closed(-kInf, kInf)) == Approx(10));
}

TEST_CASE("additivity and monotonicity on random measures", "[measure]") {
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const Measure m = random_measure(rng);
    const double a = rng.uniform(-10, 10);
    const double b = a + rng.uniform(0, 5);
    const double c = b + rng.uniform(0, 5);
    const double whole = m.mass(IntervalSpec::closed(a, c));
    const double split = m.mass(IntervalSpec::closed_open(a, b)) + m.mass(IntervalSpec::closed(b, c));
    CHECK(split == Approx(whole).margin(1e-12));
    CHECK(m.mass(IntervalSpec::closed(a, b)) <= whole + 1e-12);
    // Snap a bound onto an atom and check endpoint semantics.
    if (!m.atoms().empty()) {
      const Atom at = m.atoms()[static_cast<std::size_t>(rng.integer(0, static_cast<int>(m.atoms().size()) - 1))];
      CHECK(m.mass(IntervalSpec::closed(at.position, at.position)) == at.mass);
      CHECK(m.mass(IntervalSpec::closed(at.position, c + 20)) - m.mass(IntervalSpec::open_closed(at.position, c + 20)) ==
            Approx(at.mass).margin(1e-12));
    }
  }
}

TEST_CASE("support hull", "[measure]") {
  CHECK(Measure::build({{0, 1}, {3, 1}}, {}).support_hull() == std::make_pair(0.0, 3.0));
  CHECK(Measure::build({}, {{-2, -1, 1}, {4, 5, 1}}).support_hull() == std::make_pair(-2.0, 5.0));
}

TEST_CASE("brinck constant", "[measure]") {
  CHECK(brinck_constant(Measure::build({{-1, 1}, {1, 1}}, {})) == 1);
  CHECK(brinck_constant(Measure::build({}, {{0, 3, 0.7}})) == Approx(0.7));
  CHECK(brinck_constant(Measure{}) == 0);
  CHECK(brinck_constant(Measure::build({{0, 1}, {1, 1}}, {})) == 2);

  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const Measure m = random_measure(rng);
    const double c = rng.uniform(0.1, 5);
    CHECK(brinck_constant(m.scaled(c)) == Approx(c * brinck_constant(m)).epsilon(1e-12));
    // Brute force over a fine grid never exceeds the exact value.
    double grid = 0;
    for (double x = -12; x < 12; x += 0.01) grid = std::max(grid, m.mass(IntervalSpec::closed(x, x + 1)));
    CHECK(grid <= brinck_constant(m) + 1e-12);
  }
}

TEST_CASE("tail decay check is true for compact support", "[measure]") {
  CHECK(tail_decay_check(Measure{}, 1.0));
  CHECK(tail_decay_check(Measure::build({{0, 1}}, {}), 1.0));
  Rng rng(3);
  for (int i = 0; i < 20; ++i) CHECK(tail_decay_check(random_measure(rng), rng.uniform(0.1, 10)));
}

TEST_CASE("json round trip is exact", "[measure][io]") {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const Measure m = random_measure(rng);
    const std::string text = measure_to_json(m).dump();
    const Measure back = measure_from_json(nlohmann::json::parse(text));
    CHECK(back == m);
  }
  const Measure dec = measure_from_json(nlohmann::json::parse(R"({"atoms":[{"x":0.1,"mass":0.3}],"density":[]})"));
  CHECK(dec.atoms()[0].position == 0.1);
  CHECK(dec.atoms()[0].mass == 0.3);
  CHECK(measure_to_json(dec).dump() == R"({"atoms":[{"mass":0.3,"x":0.1}],"density":[]})");
}

TEST_CASE("json errors name the offending field", "[measure][io]") {
  try {
    measure_from_json(nlohmann::json::parse(R"({"atoms":[{"x":0,"mass":1},{"x":1}]})"));
    FAIL("expected rejection");
  } catch (const InvalidInput& e) {
    CHECK(std::string(e.what()).find("atoms[1]") != std::string::npos);
  }
  CHECK_THROWS_AS(measure_from_json(nlohmann::json::parse(R"({"atoms":[{"x":0,"mass":-1}]})")), InvalidInput);
}

TEST_CASE("transformations", "[measure]") {
  const Measure m = Measure::build({{1, 2}}, {{2, 4, 0.5}});
  CHECK(m.reflected().support_hull() == std::make_pair(-4.0, -1.0));
  CHECK(m.translated(1).support_hull() == std::make_pair(2.0, 5.0));
  const Measure d = m.dilated(2);
  CHECK(d.total_mass() == Approx(2 * m.total_mass()));
  CHECK(d.mass(IntervalSpec::closed(0.5, 1.5)) == Approx(2 * m.mass(IntervalSpec::closed(1, 3))));
  const Measure r = m.restricted(IntervalSpec::closed_open(1.5, 3));
  CHECK(r.atoms().empty());
  CHECK(r.total_mass() == Approx(0.5));
}
