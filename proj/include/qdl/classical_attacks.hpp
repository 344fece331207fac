#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qdl/attack_models.hpp"
#include "qdl/characteristic.hpp"
#include "qdl/error.hpp"
#include "qdl/rng.hpp"
#include "qdl/toy_cipher.hpp"

namespace qdl {

struct WorkLedger {
  std::uint64_t encryption_queries = 0;
  std::uint64_t partial_decryptions = 0;
  std::uint64_t key_trials = 0;

  WorkLedger& operator+=(const WorkLedger& o) {
    encryption_queries += o.encryption_queries;
    partial_decryptions += o.partial_decryptions;
    key_trials += o.key_trials;
    return *this;
  }
  friend bool operator==(const WorkLedger&, const WorkLedger&) = default;
};

/// Errc::attack_failed with the work spent before giving up.
class AttackFailure : public Error {
 public:
  AttackFailure(const std::string& what, WorkLedger ledger)
      : Error(Errc::attack_failed, what), ledger_(ledger) {}
  const WorkLedger& ledger() const { return ledger_; }

 private:
  WorkLedger ledger_;
};

/// Encryption oracle with a query counter.
class BlockOracle {
 public:
  virtual ~BlockOracle() = default;

  virtual int block_bits() const = 0;
  Block query(Block x) {
    ++queries_;
    return evaluate(x);
  }
  std::uint64_t queries() const { return queries_; }

 protected:
  virtual Block evaluate(Block x) const = 0;

 private:
  std::uint64_t queries_ = 0;
};

class CipherOracle final : public BlockOracle {
 public:
  explicit CipherOracle(ToyCipher cipher) : cipher_(std::move(cipher)) {}
  int block_bits() const override { return cipher_.spec().block_n; }
  /// Test access only; attacks never look at it.
  const ToyCipher& cipher() const { return cipher_; }

 protected:
  Block evaluate(Block x) const override { return cipher_.encrypt(x); }

 private:
  ToyCipher cipher_;
};

/// Uniformly random permutation of n-bit blocks, drawn from a seed.
class PermutationOracle final : public BlockOracle {
 public:
  PermutationOracle(int bits, std::uint64_t seed);
  int block_bits() const override { return bits_; }

 protected:
  Block evaluate(Block x) const override { return table_[x]; }

 private:
  int bits_;
  std::vector<Block> table_;
};

/// Linear subspace of GF(2)^n kept in reduced echelon form.
class Subspace {
 public:
  Subspace() = default;
  Subspace(int n, const std::vector<Block>& generators);
  /// Span of the given bit positions.
  static Subspace of_bits(int n, const std::vector<int>& bits);

  int ambient_bits() const { return n_; }
  int dim() const { return static_cast<int>(basis_.size()); }
  const std::vector<Block>& basis() const { return basis_; }
  bool contains(Block x) const { return reduce(x) == 0; }
  /// Canonical coset representative: x reduced by the basis pivots. Two
  /// values collide on the n - dim projection iff their reductions match.
  Block reduce(Block x) const;
  /// Element with index i, 0 <= i < 2^dim (index bits select basis vectors).
  Block element(std::uint64_t i) const;
  std::vector<Block> elements() const;

 private:
  int n_ = 0;
  std::vector<Block> basis_;
};

struct Structure {
  Block base = 0;
  std::vector<Block> elements;
};

/// One structure of 2^{ceil((h_T+1)/2)} texts when that fits in span(D_in),
/// otherwise ceil(2^{h_T - 2 Delta_in + 1}) full structures. Each structure
/// of N texts yields N(N-1)/2 pairs, so the total is at least
/// 2^{h_T} (1 - 1/N).
std::vector<Structure> build_structures(const Subspace& d_in, double h_T, CounterRng& rng);
std::uint64_t pair_count(const std::vector<Structure>& structures);

enum class DistinguisherVerdict { concrete, random };
const char* to_string(DistinguisherVerdict v);

struct SimpleDistinguisherResult {
  DistinguisherVerdict verdict = DistinguisherVerdict::random;
  std::uint64_t pairs_used = 0;
  std::optional<Block> right_pair;
  WorkLedger ledger;
};

/// Queries pairs (x, x ^ din) for random x and stops at the first output
/// difference dout.
SimpleDistinguisherResult run_simple_distinguisher(BlockOracle& oracle, Block din, Block dout,
                                                   std::uint64_t budget_pairs, CounterRng& rng);

struct TruncatedDistinguisherResult {
  DistinguisherVerdict verdict = DistinguisherVerdict::random;
  std::uint64_t structures = 0;
  std::uint64_t pairs = 0;
  std::uint64_t observed = 0;
  /// Expected hits for a random permutation: pairs (2^Delta_out - 1) / (2^n - 1).
  double expected_random = 0.0;
  WorkLedger ledger;
};

/// Counts pairs inside each structure whose outputs agree modulo D_out
/// (a collision on n - Delta_out bits), by bucketing on the canonical coset
/// representative. Structures are built for 2^{log2_pairs} pairs. The verdict
/// is "concrete" when the count exceeds the random expectation.
TruncatedDistinguisherResult run_truncated_distinguisher(BlockOracle& oracle, const Subspace& d_in,
                                                         const Subspace& d_out, double log2_pairs,
                                                         CounterRng& rng);

/// Pr[E_t(x) ^ E_t(x ^ d) in D_out, nonzero] over every x, every nonzero
/// d in D_in and every key, by enumeration.
DifferentialEstimate empirical_truncated_probability(const ToyCipherSpec& spec,
                                                     const std::vector<RoundKeys>& keys,
                                                     const Subspace& d_in, const Subspace& d_out,
                                                     int t);

/// Inputs of a last-rounds attack on a toy cipher whose key fits in 24 bits.
/// The first spec.rounds - r_out rounds carry the differential; r_out is 0
/// or 1.
struct LastRoundsSetup {
  ToyCipherSpec spec;
  int r_out = 1;
  Block din = 0;
  Block dout = 0;
  /// -log2 Pr of the differential; one attempt uses ceil(2^{h_S}) pairs.
  double h_S = 0.0;
  int max_retries = 3;
};

/// Truncated variant: pairs come from structures over D_in and the partial
/// decryption accepts differences in D_out.
struct TruncatedSetup {
  ToyCipherSpec spec;
  int r_out = 1;
  Subspace d_in;
  Subspace d_out;
  /// -log2 Pr[output difference in D_out | input difference in D_in].
  double h_T = 0.0;
  int max_retries = 3;
};

/// Filter and partial-key geometry of the appended round.
struct LastRoundGeometry {
  double log2_D_fin = 0.0;
  int k_out = 0;
  double h_out = 0.0;
  /// Master-key bit of each guessed round-key bit, guess bit i -> entry i.
  std::vector<int> master_bits;
};

struct KeyRecoveryResult {
  std::uint64_t key = 0;
  int attempts = 0;
  std::uint64_t pairs_used = 0;
  std::uint64_t survivors = 0;
  std::uint64_t candidates = 0;
  LastRoundGeometry geometry;
  WorkLedger ledger;
};

/// Simple differential last-rounds attack. Pairs are filtered on the fly
/// against D_fin, every survivor is partially decrypted under all 2^{k_out}
/// guesses, and every surviving guess is completed by exhaustive search over
/// the other key bits. Throws AttackFailure when no key survives after the
/// retries.
KeyRecoveryResult run_last_rounds_attack(BlockOracle& oracle, const LastRoundsSetup& setup,
                                         CounterRng& rng);
KeyRecoveryResult run_truncated_attack(BlockOracle& oracle, const TruncatedSetup& setup,
                                       CounterRng& rng);

LastRoundGeometry last_round_geometry(const LastRoundsSetup& setup);
LastRoundGeometry last_round_geometry(const TruncatedSetup& setup);

/// Parameter records matching the setups, for comparison with the formulas.
AttackParams predicted_params(const LastRoundsSetup& setup);
AttackParams predicted_params(const TruncatedSetup& setup);

/// x[alpha] ^ E(x)[beta] = K[key_mask] ^ chi0 with probability 1/2 + |bias|.
struct LinearApproximation {
  Block alpha = 0;
  Block beta = 0;
  std::uint64_t key_mask = 0;
  int chi0 = 0;
  double bias_log2 = -1.0;  // log2 |bias|
};

/// Reads the key mask and constant off a linear characteristic of an
/// xor-master-key SPN.
LinearApproximation approximation_from(const ToyCipherSpec& spec, const Characteristic& ch);

/// Solutions of a GF(2) system key[mask_i] = rhs_i.
class AffineKeySpace {
 public:
  AffineKeySpace(int key_bits, const std::vector<std::uint64_t>& masks,
                 const std::vector<int>& rhs);

  int key_bits() const { return key_bits_; }
  int rank() const { return static_cast<int>(rows_.size()); }
  bool consistent() const { return consistent_; }
  int log2_size() const { return key_bits_ - rank(); }
  bool contains(std::uint64_t key) const;
  /// The i-th solution, 0 <= i < 2^{key_bits - rank}.
  std::uint64_t nth(std::uint64_t i) const;

 private:
  int key_bits_;
  bool consistent_ = true;
  std::vector<std::pair<std::uint64_t, int>> rows_;  // reduced echelon
  std::vector<int> pivots_;
  std::vector<int> free_bits_;
};

struct Matsui1Result {
  std::vector<int> parities;
  std::vector<std::uint64_t> agreements;
  std::uint64_t texts = 0;
  std::optional<AffineKeySpace> key_space;
  /// Set when the completion search ran and found a key.
  std::optional<std::uint64_t> key;
  WorkLedger ledger;
};

/// Matsui's Algorithm 1: one batch of `texts` known plaintexts shared by all
/// approximations; K[key_mask] = chi0 when more than half agree, else the
/// complement. With `complete` set, the parities define an affine key space
/// that is searched exhaustively (needs `spec`).
Matsui1Result matsui_alg1(BlockOracle& oracle, const std::vector<LinearApproximation>& approx,
                          std::uint64_t texts, CounterRng& rng,
                          const ToyCipherSpec* spec = nullptr, bool complete = false);

/// Default A in the D = A / eps^2 budget.
inline constexpr double default_matsui_A = 10.0;
std::uint64_t matsui_budget(double bias_log2, double A = default_matsui_A);

struct Matsui2Setup {
  ToyCipherSpec spec;
  int r_out = 1;
  /// Approximation over the first spec.rounds - r_out rounds.
  Block alpha = 0;
  Block beta = 0;
  int chi0 = 0;
};

struct Matsui2Result {
  std::uint64_t partial_key = 0;
  bool tie = false;
  std::vector<std::uint64_t> counters;  // X_{k'}, indexed by guess
  std::uint64_t texts = 0;
  int k_out = 0;
  std::vector<int> master_bits;
  std::optional<std::uint64_t> key;
  WorkLedger ledger;
};

/// Matsui's Algorithm 2: X_{k'} counts texts with P[alpha] ^ chi0 equal to
/// the partially decrypted bit x[beta] under guess k'. The guess maximizing
/// |X_{k'} - D/2| wins (lowest guess on ties), then the remaining key bits
/// are searched exhaustively.
Matsui2Result matsui_alg2(BlockOracle& oracle, const Matsui2Setup& setup, std::uint64_t texts,
                          CounterRng& rng);

}  // namespace qdl
