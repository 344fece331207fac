#include <doctest.h>

#include "property_checks.hpp"

using namespace qdl;

namespace {

void require_all(const std::vector<props::Outcome>& outcomes) {
  for (const auto& o : outcomes) {
    INFO(o.name, ": ", o.failures, " of ", o.cases, " failed, first: ", o.first_failure);
    CHECK(o.pass());
  }
}

}  // namespace

TEST_CASE("random S-box tables") { require_all(props::sbox_properties(128, 1)); }

TEST_CASE("log2_sum algebra") { require_all(props::log2_sum_properties(10000, 2)); }

TEST_CASE("model grid") { require_all(props::model_grid_properties(500, 3)); }

TEST_CASE("grid points are valid for every kind") {
  CounterRng rng(4);
  for (int i = 0; i < 200; ++i) {
    const auto p = props::random_valid_params(rng);
    CHECK_NOTHROW(p.validate());
    CHECK(*p.h_T + *p.Delta_fin - *p.n >= 0);
    CHECK(2 * *p.Delta_in - 1 - *p.n + *p.Delta_fin >= 0);
    const auto c = truncated_last_rounds(p, AdversaryModel::classical);
    CHECK(c.term("key-search")->value <= std::max(c.term("data-collection")->value, c.term("key-generation")->value));
  }
}

// Outside the grid: when a structure yields less than one filtered pair the
// q2 attack amplifies over all structures, which can cost more than the
// classical attack that only touches the filtered pairs.
TEST_CASE("degenerate truncated regime can exceed classical") {
  AttackParams p;
  p.n = 64;
  p.k = 48;
  p.h_T = 30;
  p.Delta_in = 4;
  p.Delta_fin = 34;
  p.h_out = 30;
  p.k_out = 40;
  p.log2_C_kout = 40;
  const auto c = truncated_last_rounds(p, AdversaryModel::classical);
  const auto q2 = truncated_last_rounds(p, AdversaryModel::q2);
  CHECK(q2.detail("branch-degenerate") != nullptr);
  CHECK(q2.time.bits() > c.time.bits());
}

// Bias counting with tiny structures: the 4 pi constant outweighs the
// 2^{Delta_in / 3} pair-search saving.
TEST_CASE("bias counting with small structures can exceed classical") {
  AttackParams p;
  p.n = 32;
  p.Delta_in = 2;
  p.Delta_out = 29;
  p.h_T_path = 3.5;
  const auto c = bias_counting_distinguisher(p, AdversaryModel::classical);
  const auto q2 = bias_counting_distinguisher(p, AdversaryModel::q2);
  CHECK(q2.time.bits() > c.time.bits());
}

// Also outside the grid: once the search over the remaining key bits is the
// only term that matters, both models pay for it and Grover halves it, so the
// speedup is exactly quadratic.
TEST_CASE("key-search dominated truncated attack is exactly quadratic") {
  AttackParams p;
  p.n = 128;
  p.k = 203;
  p.h_T = 10.224;
  p.Delta_in = 27;
  p.Delta_fin = 121.014;
  p.h_out = 18.8878;
  p.k_out = 57;
  p.log2_C_kout = 42.6659;
  const auto c = truncated_last_rounds(p, AdversaryModel::classical);
  const auto q2 = truncated_last_rounds(p, AdversaryModel::q2);
  CHECK(q2.time.bits() / c.time.bits() == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(q2.time.bits() / c.time.bits() >= 0.5 - 1e-12);
}
