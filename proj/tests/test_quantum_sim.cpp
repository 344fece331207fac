#include <doctest.h>

#include <bit>
#include <cmath>
#include <numbers>

#include "qdl/error.hpp"
#include "qdl/quantum_sim.hpp"

using namespace qdl;

namespace {

void apply_h(StateVector& s, int q) {
  auto& a = s.amplitudes();
  const std::uint64_t bit = std::uint64_t{1} << q;
  const double r = std::sqrt(0.5);
  for (std::uint64_t i = 0; i < a.size(); ++i) {
    if (i & bit) continue;
    const auto x = a[i], y = a[i | bit];
    a[i] = r * (x + y);
    a[i | bit] = r * (x - y);
  }
}

void apply_ry(StateVector& s, int q, double theta) {
  auto& a = s.amplitudes();
  const std::uint64_t bit = std::uint64_t{1} << q;
  const double c = std::cos(theta / 2), sn = std::sin(theta / 2);
  for (std::uint64_t i = 0; i < a.size(); ++i) {
    if (i & bit) continue;
    const auto x = a[i], y = a[i | bit];
    a[i] = c * x - sn * y;
    a[i | bit] = sn * x + c * y;
  }
}

PredicateOracle below(std::uint64_t t) {
  return PredicateOracle([t](std::uint64_t x) { return x < t; });
}

}  // namespace

TEST_CASE("state vectors") {
  auto s = StateVector::basis(5, 3);
  CHECK(s.probability(3) == doctest::Approx(1.0));
  s.hadamard_all();
  for (std::uint64_t i = 0; i < 32; ++i) CHECK(s.probability(i) == doctest::Approx(1.0 / 32));
  s.hadamard_all();
  CHECK(s.probability(3) == doctest::Approx(1.0));
  auto oracle = below(3);
  auto u = StateVector::uniform(6);
  for (int i = 0; i < 50; ++i) {
    oracle.apply(u);
    u.invert_about_mean();
    u.reflect_zero();
  }
  CHECK(u.norm_squared() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(oracle.queries() == 50);
  CHECK_THROWS_AS(StateVector::basis(25), Error);
  CHECK_THROWS_AS(StateVector::basis(3, 8), Error);
}

TEST_CASE("Grover search") {
  SUBCASE("four items, one marked, is certain") {
    PredicateOracle o([](std::uint64_t x) { return x == 2; });
    const auto r = grover_search(o, 4, 1);
    CHECK(r.iterations == 1);
    CHECK(r.success_probability == doctest::Approx(1.0));
    CHECK(r.found == 2);
    CHECK(r.marked);
    CHECK(r.queries == 2);
  }
  SUBCASE("simulation matches the closed form") {
    for (std::uint64_t N : {64u, 1024u}) {
      for (std::uint64_t t : {1u, 3u, 16u}) {
        auto o = below(t);
        const auto r = grover_search(o, N, t);
        const double theta = std::asin(std::sqrt(double(t) / double(N)));
        const auto j = static_cast<std::uint64_t>(std::floor(std::numbers::pi / 4 * std::sqrt(double(N) / double(t))));
        CHECK(r.iterations == j);
        CHECK(r.success_probability == doctest::Approx(std::pow(std::sin((2 * j + 1) * theta), 2)));
        CHECK(grover_success_closed_form(N, t, j) == doctest::Approx(r.success_probability));
        CHECK(r.queries == j + 1);
      }
    }
  }
  SUBCASE("nothing marked") {
    PredicateOracle o([](std::uint64_t) { return false; });
    const auto r = grover_search(o, 1024, 1);
    CHECK(r.success_probability == 0.0);
    CHECK_FALSE(r.marked);
  }
  SUBCASE("bad arguments") {
    auto o = below(1);
    CHECK_THROWS_AS(grover_search(o, 1000, 1), Error);
    CHECK_THROWS_AS(grover_iterations(16, 0), Error);
    CHECK_THROWS_AS(grover_iterations(16, 17), Error);
  }
  SUBCASE("unknown marked count") {
    int found = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      auto o = below(4);
      CounterRng rng(seed);
      const auto r = grover_search_unknown(o, 256, rng);
      found += r.marked;
      CHECK(r.queries <= static_cast<std::uint64_t>(std::ceil(9 * 16.0)) + 2 + 16);
    }
    CHECK(found >= 18);
  }
}

TEST_CASE("amplitude amplification") {
  SUBCASE("a = 1 needs no rounds") {
    PredicateOracle all([](std::uint64_t) { return true; });
    const auto r = amplitude_amplify(uniform_prep(4), all, 1.0);
    CHECK(r.rounds == 0);
    CHECK(r.success_probability == doctest::Approx(1.0));
  }
  SUBCASE("biased preparation") {
    const double a = 0.05;
    const double theta = 2 * std::asin(std::sqrt(a));
    StatePrep prep{8,
                   [theta](StateVector& s) {
                     apply_ry(s, 0, theta);
                     for (int q = 1; q < 8; ++q) apply_h(s, q);
                   },
                   [theta](StateVector& s) {
                     for (int q = 1; q < 8; ++q) apply_h(s, q);
                     apply_ry(s, 0, -theta);
                   }};
    auto probe = StateVector::basis(8, 0);
    prep.forward(probe);
    PredicateOracle good([](std::uint64_t x) { return (x & 1) != 0; });
    CHECK(probe.probability_of(good.predicate()) == doctest::Approx(a));
    const auto r = amplitude_amplify(prep, good, a);
    CHECK(r.rounds == 3);
    CHECK(r.oracle_queries == 3);
    CHECK(r.prep_calls == 7);
    CHECK(r.success_probability >= 0.95);
    CHECK(r.success_probability == doctest::Approx(std::pow(std::sin(7 * std::asin(std::sqrt(a))), 2)));
  }
  SUBCASE("uniform preparation is Grover") {
    auto o1 = below(5);
    auto o2 = below(5);
    const auto g = grover_search(o1, 512, 5);
    const auto r = amplitude_amplify(uniform_prep(9), o2, 5.0 / 512);
    CHECK(r.rounds == g.iterations);
    CHECK(r.success_probability == doctest::Approx(g.success_probability));
  }
  auto o = below(1);
  CHECK_THROWS_AS(amplitude_amplify(uniform_prep(3), o, 0.0), Error);
}

TEST_CASE("quantum counting") {
  CounterRng rng(1);
  SUBCASE("p = 0") {
    PredicateOracle none([](std::uint64_t) { return false; });
    CHECK(quantum_count(none, 64, 16, rng).estimate == doctest::Approx(0.0));
  }
  SUBCASE("p = 1") {
    PredicateOracle all([](std::uint64_t) { return true; });
    CHECK(quantum_count(all, 64, 16, rng).estimate == doctest::Approx(1.0));
  }
  SUBCASE("distribution") {
    auto o = below(5);
    const auto d = counting_distribution(o, 256, 32);
    CHECK(d.size() == 32);
    double total = 0, near = 0;
    const double p = 5.0 / 256;
    for (std::size_t y = 0; y < d.size(); ++y) {
      total += d[y];
      const double e = std::pow(std::sin(std::numbers::pi * y / 32.0), 2);
      if (std::abs(e - p) <= counting_bound(p, 32)) near += d[y];
    }
    CHECK(total == doctest::Approx(1.0));
    CHECK(near >= 8 / (std::numbers::pi * std::numbers::pi));
  }
  SUBCASE("median of repetitions") {
    auto o = below(3);
    const auto r = quantum_count(o, 64, 8, rng, 5);
    CHECK(r.outcomes.size() == 5);
    CHECK(r.register_size == 8);
  }
  CHECK(counting_bound(0.25, 10) == doctest::Approx(2 * std::numbers::pi * 0.5 / 10 + std::numbers::pi * std::numbers::pi / 100));
}

TEST_CASE("pair-search accounting") {
  auto m = charge_pair_search(4096, 1);
  CHECK(m.charged_cost.bits() == doctest::Approx(8.0));
  CHECK(m.algorithm == WalkAlgorithm::pair_search_promise);
  m = charge_pair_search(4096, 64);
  CHECK(m.charged_cost.bits() == doctest::Approx(6.0));
  CHECK(m.subset_size.bits() == doctest::Approx(9.0));
  double last = 100;
  for (double k = 1; k <= 4096; k *= 2) {
    const double c = charge_pair_search(4096, k).charged_cost.bits();
    CHECK(c < last);
    last = c;
  }
  m = charge_pair_search(4096, 0);
  CHECK(m.not_found);
  CHECK(m.algorithm == WalkAlgorithm::ambainis);
  CHECK(m.charged_cost.bits() == doctest::Approx(8.0));
  CHECK_THROWS_AS(charge_pair_search(0.5, 1), Error);
}

TEST_CASE("subset hit probability against enumeration") {
  const std::uint64_t n = 10, k = 2;  // pairs {0,1} and {2,3}
  for (std::uint64_t s = 0; s <= n; ++s) {
    int hits = 0, total = 0;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      if (std::popcount(mask) != static_cast<int>(s)) continue;
      ++total;
      hits += (mask & 3u) == 3u || (mask & 12u) == 12u;
    }
    CHECK(subset_hit_probability(n, k, s) == doctest::Approx(double(hits) / total));
  }
  const auto e = subset_hit_experiment(4096, 16, 2000, 3);
  CHECK(e.subset_size == 1024);
  CHECK(std::abs(e.frequency - e.exact) <= 4 * std::sqrt(e.exact * (1 - e.exact) / 2000) + 1.0 / 2000);
}

TEST_CASE("right-pair search demo") {
  const auto spec = reference_spn12(3);
  const ToyCipher c(spec, expand_master_key(spec, 0x5a5a));
  const auto trivial = q2_simple_differential_demo(c, 0, 0, 0.0);
  CHECK(trivial.grover.iterations == 0);
  CHECK(trivial.found);
  CHECK(trivial.marked == 4096);

  // An output difference no plaintext reaches.
  Block dead = 0;
  for (Block d = 1; d < 4096 && !dead; ++d) {
    bool any = false;
    for (Block x = 0; x < 4096 && !any; ++x) any = (c.encrypt(x) ^ c.encrypt(x ^ 1)) == d;
    if (!any) dead = d;
  }
  REQUIRE(dead != 0);
  const auto miss = q2_simple_differential_demo(c, 1, dead, 8.0);
  CHECK(miss.marked == 0);
  CHECK_FALSE(miss.found);

  CHECK_THROWS_AS(q2_simple_differential_demo(c, 1, 1, -1.0), Error);
}
