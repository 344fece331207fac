#include <doctest.h>

#include <bit>
#include <cmath>
#include <set>

#include "qdl/characteristic.hpp"
#include "qdl/classical_attacks.hpp"
#include "qdl/error.hpp"
#include "qdl/tables.hpp"

using namespace qdl;

namespace {

bool same_cipher(const ToyCipherSpec& s, std::uint64_t a, std::uint64_t b) {
  const ToyCipher ca(s, expand_master_key(s, a)), cb(s, expand_master_key(s, b));
  for (Block x = 0; x <= s.block_mask(); x += 97) {
    if (ca.encrypt(x) != cb.encrypt(x)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("subspaces") {
  const Subspace s(12, {0x003, 0x006, 0x005});
  CHECK(s.dim() == 2);
  CHECK(s.contains(0x000));
  CHECK(s.contains(0x005));
  CHECK_FALSE(s.contains(0x001));
  const auto e = s.elements();
  CHECK(std::set<Block>(e.begin(), e.end()) == std::set<Block>{0x0, 0x3, 0x5, 0x6});
  // x and y share a reduction exactly when x ^ y lies in the span.
  for (Block x = 0; x < 64; ++x) {
    for (Block y = 0; y < 64; ++y) CHECK((s.reduce(x) == s.reduce(y)) == s.contains(x ^ y));
  }
  CHECK(Subspace::of_bits(12, {9, 10, 11}).contains(0xe00));
}

TEST_CASE("structures") {
  CounterRng rng(2);
  const auto d9 = Subspace::of_bits(16, {0, 1, 2, 3, 4, 5, 6, 7, 8});
  auto s = build_structures(d9, 17, rng);
  CHECK(s.size() == 1);
  CHECK(s[0].elements.size() == 512);
  CHECK(pair_count(s) == 512u * 511u / 2u);

  const auto d3 = Subspace::of_bits(16, {0, 1, 2});
  s = build_structures(d3, 9, rng);
  CHECK(s.size() == 16);
  for (const auto& st : s) {
    CHECK(st.elements.size() == 8);
    for (Block x : st.elements) CHECK(d3.contains(x ^ st.base));
  }
  CHECK(pair_count(s) >= std::exp2(9) * (1 - 1.0 / 8));

  s = build_structures(d3, 0, rng);
  CHECK(s.size() == 1);
  CHECK(s[0].elements.size() == 2);
  CHECK_THROWS_AS(build_structures(d3, -1, rng), Error);
}

TEST_CASE("simple distinguisher") {
  const auto spec = reference_spn12(3);
  CounterRng rng(3);
  CipherOracle oracle(ToyCipher(spec, expand_master_key(spec, 0x1234)));
  auto r = run_simple_distinguisher(oracle, 0, 0, 10, rng);
  CHECK(r.verdict == DistinguisherVerdict::concrete);
  CHECK(r.pairs_used == 1);
  CHECK(r.ledger.encryption_queries == 2);

  PermutationOracle perm(12, 77);
  r = run_simple_distinguisher(perm, 0x001, 0x002, 16, rng);
  CHECK(r.verdict == DistinguisherVerdict::random);
  CHECK(r.pairs_used == 16);
  CHECK(r.ledger.encryption_queries == 32);
}

TEST_CASE("truncated distinguisher") {
  const auto spec = reference_spn12(3);
  CounterRng rng(4);
  CipherOracle oracle(ToyCipher(spec, expand_master_key(spec, 0xbeef)));
  const auto d_in = Subspace::of_bits(12, {0, 1, 2});
  const auto everything = Subspace::of_bits(12, {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11});
  const auto r = run_truncated_distinguisher(oracle, d_in, everything, 5, rng);
  CHECK(r.observed == r.pairs);
  // A random permutation collides just as often here, so nothing is learned.
  CHECK(r.expected_random == doctest::Approx(double(r.pairs)));
  CHECK(r.verdict == DistinguisherVerdict::random);
  CounterRng rng2(5);
  CipherOracle one_round(ToyCipher(reference_spn12(1), expand_master_key(reference_spn12(1), 0x77)));
  const auto low = Subspace::of_bits(12, {0, 1, 2});
  const auto spread = Subspace::of_bits(12, {0, 4, 8});
  // One round sends S-box 0 onto bits 0, 4 and 8.
  const auto r1 = run_truncated_distinguisher(one_round, low, spread, 6, rng2);
  CHECK(r1.observed == r1.pairs);
  CHECK(r1.verdict == DistinguisherVerdict::concrete);
  CHECK(r.ledger.encryption_queries == r.structures * 8);
}

TEST_CASE("last-rounds attack on the 12-bit SPN") {
  const auto spec = reference_spn12(5);
  CounterRng mk(50);
  std::vector<RoundKeys> keys;
  for (int i = 0; i < 16; ++i) keys.push_back(random_round_keys(spec, mk));
  const auto est = empirical_diff_probability(spec, keys, 0x002, 0x888, 4);
  REQUIRE_FALSE(est.lower_bound_only);
  const LastRoundsSetup setup{spec, 1, 0x002, 0x888, -est.log2_p, 3};
  int recovered = 0;
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    CounterRng rng(seed);
    const std::uint64_t key = rng.below(1 << 16);
    CipherOracle oracle(ToyCipher(spec, expand_master_key(spec, key)));
    const auto r = run_last_rounds_attack(oracle, setup, rng);
    CHECK(r.ledger.encryption_queries == 2 * r.pairs_used);
    CHECK(r.ledger.encryption_queries == oracle.queries());
    CHECK(same_cipher(spec, r.key, key));
    recovered += r.key == key;
  }
  CHECK(recovered >= 3);
  const auto g = last_round_geometry(setup);
  CHECK(g.k_out == static_cast<int>(g.master_bits.size()));
  PermutationOracle wide(16, 1);
  CHECK_THROWS_AS(run_last_rounds_attack(wide, setup, mk), Error);
}

TEST_CASE("truncated last-rounds attack on the 16-bit SPN") {
  const auto spec = reference_spn16(4);
  const Subspace d_in(16, {0x1, 0x2, 0x4, 0x8});
  const Subspace d_out(16, {0x100, 0xc00});
  CounterRng mk(9);
  std::vector<RoundKeys> keys;
  for (int i = 0; i < 8; ++i) keys.push_back(random_round_keys(spec, mk));
  const auto est = empirical_truncated_probability(spec, keys, d_in, d_out, 3);
  REQUIRE_FALSE(est.lower_bound_only);
  const TruncatedSetup setup{spec, 1, d_in, d_out, -est.log2_p, 3};
  CounterRng rng(21);
  const std::uint64_t key = rng.below(1 << 20);
  CipherOracle oracle(ToyCipher(spec, expand_master_key(spec, key)));
  const auto r = run_truncated_attack(oracle, setup, rng);
  CHECK(same_cipher(spec, r.key, key));
  CHECK(r.ledger.encryption_queries == oracle.queries());
  CHECK(r.ledger.key_trials > 0);
  const auto p = predicted_params(setup);
  CHECK(*p.Delta_in == 4);
  CHECK(*p.Delta_out == 2);
  CHECK(*p.k == 20);
}

TEST_CASE("affine key spaces") {
  const AffineKeySpace small(3, {0b011, 0b110}, {1, 0});
  CHECK(small.rank() == 2);
  CHECK(small.log2_size() == 1);
  std::set<std::uint64_t> sols{small.nth(0), small.nth(1)};
  CHECK(sols == std::set<std::uint64_t>{0b001, 0b110});

  CHECK_FALSE(AffineKeySpace(3, {1, 1}, {0, 1}).consistent());

  CounterRng rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<std::uint64_t> masks;
    std::vector<int> rhs;
    const int m = 1 + static_cast<int>(rng.below(6));
    for (int i = 0; i < m; ++i) {
      masks.push_back(rng.below(255) + 1);
      rhs.push_back(static_cast<int>(rng.below(2)));
    }
    const AffineKeySpace space(8, masks, rhs);
    std::set<std::uint64_t> brute;
    for (std::uint64_t k = 0; k < 256; ++k) {
      bool ok = true;
      for (int i = 0; i < m; ++i) ok = ok && (std::popcount(k & masks[i]) & 1) == rhs[i];
      if (ok) brute.insert(k);
      CHECK(space.contains(k) == ok);
    }
    CHECK(space.consistent() == !brute.empty());
    if (space.consistent()) {
      std::set<std::uint64_t> listed;
      for (std::uint64_t i = 0; i < (std::uint64_t{1} << space.log2_size()); ++i) listed.insert(space.nth(i));
      CHECK(listed == brute);
    }
  }
}

TEST_CASE("Matsui algorithm 1") {
  SUBCASE("a linear cipher gives the key parity from one text") {
    auto spec = reference_spn12(2);
    spec.sbox = identity_sbox(3);
    const Layer L(spec);
    const Block a = 0x021;
    const Characteristic ch{CharacteristicKind::linear, {a, L.permute(a), L.permute(L.permute(a))}, -1};
    const auto approx = approximation_from(spec, ch);
    CHECK(approx.bias_log2 == doctest::Approx(-1.0));
    CounterRng rng(6);
    for (int i = 0; i < 10; ++i) {
      const std::uint64_t key = rng.below(1 << 16);
      const ToyCipher c(spec, expand_master_key(spec, key));
      CipherOracle oracle(c);
      const auto r = matsui_alg1(oracle, {approx}, 1, rng, &spec, true);
      CHECK(r.parities[0] == (std::popcount(key & approx.key_mask) & 1));
      REQUIRE(r.key);
      CHECK(same_cipher(spec, *r.key, key));
      CHECK(r.ledger.encryption_queries == 1);
    }
  }
  SUBCASE("a random permutation gives a coin flip") {
    CounterRng rng(7);
    const LinearApproximation approx{0x005, 0x030, 0x1, 0, -3};
    int ones = 0;
    for (int i = 0; i < 200; ++i) {
      PermutationOracle perm(12, 1000 + i);
      ones += matsui_alg1(perm, {approx}, 64, rng).parities[0];
    }
    CHECK(ones >= 80);
    CHECK(ones <= 120);
  }
  CHECK(matsui_budget(-3) == 640);
  CHECK_THROWS_AS(matsui_budget(-1, 0), Error);
}

TEST_CASE("Matsui algorithm 2 on the 16-bit SPN") {
  const auto spec = reference_spn16(3);
  const Characteristic ch{CharacteristicKind::linear, {0x0003, 0x1001, 0x0999}, 0};
  const auto value = characteristic_probability(spec, ch);
  const std::uint64_t texts = matsui_budget(value.log2);
  int recovered = 0;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    CounterRng rng(seed);
    const std::uint64_t key = rng.below(1 << 20);
    const ToyCipher c(spec, expand_master_key(spec, key));
    CipherOracle oracle(c);
    const Matsui2Setup setup{spec, 1, 0x0003, 0x0999, 0};
    CounterRng replay = rng;
    const auto r = matsui_alg2(oracle, setup, texts, rng);
    const std::uint64_t guesses = std::uint64_t{1} << r.k_out;
    CHECK(r.counters.size() == guesses);
    CHECK(r.ledger.partial_decryptions == texts * guesses);
    CHECK(r.ledger.encryption_queries == texts);
    CHECK(r.ledger.key_trials >= 1);
    CHECK(r.ledger.key_trials <= std::uint64_t{1} << (20 - r.k_out));
    if (r.key && *r.key == key) {
      ++recovered;
      // The winning counter, recounted on the same texts with two-round encryption.
      std::uint64_t x_true = 0;
      for (std::uint64_t i = 0; i < texts; ++i) {
        const Block x = static_cast<Block>(replay.below(1 << 16));
        x_true += parity(x & 0x0003) == parity(c.encrypt(x, 2) & 0x0999);
      }
      CHECK(r.counters[r.partial_key] == x_true);
    }
  }
  CHECK(recovered >= 2);
}
