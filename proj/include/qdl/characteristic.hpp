#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "qdl/rng.hpp"
#include "qdl/toy_cipher.hpp"

namespace qdl {

enum class CharacteristicKind { differential, linear };

/// masks[0] enters round 1 and masks[i] leaves round i. Differential masks
/// are full-block differences. Linear masks are SPN block masks; the key
/// parities picked up along the way only affect the sign.
struct Characteristic {
  CharacteristicKind kind = CharacteristicKind::differential;
  std::vector<Block> masks;
  /// log2 probability (differential) or log2 |bias| (linear).
  double claimed_log2 = 0.0;

  int rounds() const { return static_cast<int>(masks.size()) - 1; }
  Block input() const { return masks.front(); }
  Block output() const { return masks.back(); }
};

struct CharacteristicValue {
  double log2 = 0.0;  // log2 probability, or log2 |bias| (Pr = 1/2 + bias)
  int sign = 1;       // sign of the bias before key parities; +1 for differentials
  int active_sboxes = 0;
};

/// Throws Errc::invalid_argument for structural mismatches and
/// Errc::impossible_characteristic when a transition has a zero table entry.
CharacteristicValue characteristic_probability(const ToyCipherSpec& spec,
                                               const Characteristic& ch);

struct DifferentialEstimate {
  std::uint64_t hits = 0;
  std::uint64_t trials = 0;
  double p = 0.0;
  double stderr_p = 0.0;
  /// Point estimate; only meaningful when !lower_bound_only.
  double log2_p = 0.0;
  /// Standard error propagated to log2 (stderr_p / (p ln 2)).
  double stderr_log2 = 0.0;
  /// No hit was seen. Only log2 p <= bound_log2 = -log2(trials) is known.
  bool lower_bound_only = false;
  double bound_log2 = 0.0;
};

using DiffPredicate = std::function<bool(Block)>;

/// Fraction of (x, key) with E_t(x) ^ E_t(x ^ din) accepted by `accept`.
/// Without `samples` every plaintext is enumerated for every key.
DifferentialEstimate empirical_diff_probability(
    const ToyCipherSpec& spec, const std::vector<RoundKeys>& keys, Block din,
    const DiffPredicate& accept, int t,
    std::optional<std::uint64_t> samples = {}, std::uint64_t seed = 0);

DifferentialEstimate empirical_diff_probability(
    const ToyCipherSpec& spec, const std::vector<RoundKeys>& keys, Block din,
    Block dout, int t, std::optional<std::uint64_t> samples = {},
    std::uint64_t seed = 0);

/// Exact bias of x[alpha] ^ E_t(x)[beta] for one key, by enumeration.
double exact_linear_bias(const ToyCipher& cipher, Block alpha, Block beta, int t);

struct SearchOptions {
  int rounds = 1;
  /// States kept per round; exceeding it prunes and clears `exhaustive`.
  std::size_t beam = 1u << 14;
  /// Cap on enumerated transitions per round; hitting it also prunes.
  std::uint64_t max_transitions = 1ULL << 28;
  std::optional<Block> input;
  std::optional<Block> output;
};

struct SearchResult {
  Characteristic best;
  /// Nothing was pruned, so `best` is optimal among single characteristics.
  bool exhaustive = false;
  std::uint64_t transitions = 0;
};

/// Round-by-round dynamic programming over masks (a beam-limited Viterbi
/// pass). SPN only for linear; block_n <= 20. Throws Errc::not_found when no
/// nonzero characteristic satisfies the constraints.
SearchResult find_best_characteristic(const ToyCipherSpec& spec,
                                      CharacteristicKind kind,
                                      const SearchOptions& options);

inline SearchResult find_best_differential(const ToyCipherSpec& spec,
                                           const SearchOptions& options) {
  return find_best_characteristic(spec, CharacteristicKind::differential, options);
}

/// Set of differences reachable from `din` through the last `r_out` rounds'
/// S-box layers (keys do not matter), i.e. the D_fin filter for a last-rounds
/// attack.
struct ForwardSet {
  std::vector<Block> members;
  double log2_size = 0.0;
};

ForwardSet reachable_differences(const ToyCipherSpec& spec, Block din, int r_out);

}  // namespace qdl
