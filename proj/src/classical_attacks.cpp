#include "qdl/classical_attacks.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <numeric>
#include <unordered_map>

#include "qdl/error.hpp"
#include "qdl/tables.hpp"

namespace qdl {

namespace {

[[noreturn]] void invalid(const std::string& msg) {
  throw Error(Errc::invalid_argument, msg);
}

std::uint64_t pow2_ceil(double log2_value) {
  if (log2_value > 40) throw Error(Errc::infeasible, "pair budget above 2^40");
  return static_cast<std::uint64_t>(std::ceil(std::exp2(log2_value) - 1e-9));
}

/// Known plaintext/ciphertext pairs used to confirm a full key guess.
class KeyVerifier {
 public:
  explicit KeyVerifier(const ToyCipherSpec& spec)
      : spec_(spec), cipher_(spec, RoundKeys(spec.rounds + 1, 0)) {}

  void offer(Block x, Block y) {
    if (known_.size() < kWanted) known_.emplace_back(x, y);
  }

  bool matches(std::uint64_t master) {
    cipher_.set_round_keys(expand_master_key(spec_, master));
    for (const auto& [x, y] : known_) {
      if (cipher_.encrypt(x) != y) return false;
    }
    return true;
  }

 private:
  static constexpr std::size_t kWanted = 4;
  const ToyCipherSpec& spec_;
  ToyCipher cipher_;
  std::vector<std::pair<Block, Block>> known_;
};

/// Enumerates the master keys that agree with `fixed_bits` = value on the
/// positions in `positions`, counting one key trial per candidate.
void complete_key(const ToyCipherSpec& spec, const std::vector<int>& positions,
                  std::uint64_t guess, KeyVerifier& verifier, WorkLedger& ledger,
                  std::vector<std::uint64_t>& found) {
  const int k = spec.master_key_bits();
  std::uint64_t fixed_mask = 0;
  std::uint64_t fixed_value = 0;
  for (std::size_t i = 0; i < positions.size(); ++i) {
    const std::uint64_t bit = std::uint64_t{1} << positions[i];
    const std::uint64_t v = (guess >> i) & 1u;
    if ((fixed_mask & bit) && ((fixed_value & bit) != 0) != (v != 0)) return;  // contradictory
    fixed_mask |= bit;
    if (v) fixed_value |= bit;
  }
  std::vector<int> free_bits;
  for (int b = 0; b < k; ++b) {
    if (!(fixed_mask >> b & 1u)) free_bits.push_back(b);
  }
  const std::uint64_t count = std::uint64_t{1} << free_bits.size();
  for (std::uint64_t i = 0; i < count; ++i) {
    std::uint64_t key = fixed_value;
    for (std::size_t j = 0; j < free_bits.size(); ++j) {
      if (i >> j & 1u) key |= std::uint64_t{1} << free_bits[j];
    }
    ++ledger.key_trials;
    if (verifier.matches(key)) found.push_back(key);
  }
}

void check_attackable(const ToyCipherSpec& spec, int r_out, int block_bits) {
  spec.validate();
  if (spec.structure != CipherStructure::spn) invalid("last-rounds attacks need an SPN");
  if (r_out < 0 || r_out > 1) invalid("r_out must be 0 or 1");
  if (spec.rounds - r_out < 1) invalid("no rounds left for the distinguisher");
  if (spec.master_key_bits() > 24) {
    throw Error(Errc::infeasible, "key completion needs a master key of at most 24 bits");
  }
  if (block_bits != spec.block_n) invalid("oracle block size differs from the spec");
}

/// Partial decryption of the last round under guessed key bits.
class LastRound {
 public:
  /// `active` has the S-box slots whose output difference may be nonzero.
  LastRound(const ToyCipherSpec& spec, int r_out, Block active_slots_mask)
      : layer_(spec), r_out_(r_out) {
    if (r_out == 0) return;
    const int w = layer_.sbox_width();
    for (int j = 0; j < layer_.sbox_count(); ++j) {
      if (!layer_.slot(active_slots_mask, j)) continue;
      for (int b = 0; b < w; ++b) {
        const Block pos = layer_.permute(Block{1} << (j * w + b));
        positions_.push_back(std::countr_zero(pos));
      }
    }
    for (int pos : positions_) master_bits_.push_back(spec.master_bit(spec.rounds, pos));
  }

  int k_out() const { return static_cast<int>(positions_.size()); }
  const std::vector<int>& master_bits() const { return master_bits_; }

  Block round_key(std::uint64_t guess) const {
    Block key = 0;
    for (std::size_t i = 0; i < positions_.size(); ++i) {
      if (guess >> i & 1u) key |= Block{1} << positions_[i];
    }
    return key;
  }

  /// State before the last round (after its key addition) for one guess.
  Block peel(Block y, Block key) const {
    if (r_out_ == 0) return y;
    return layer_.inverse_substitute(layer_.inverse_permute(y ^ key));
  }

 private:
  Layer layer_;
  int r_out_;
  std::vector<int> positions_;
  std::vector<int> master_bits_;
};

/// Shared state of one simple or truncated last-rounds attack.
class KeyRecovery {
 public:
  KeyRecovery(const ToyCipherSpec& spec, int r_out, Block active, std::function<bool(Block)> filter,
              std::function<bool(Block)> target)
      : spec_(spec),
        last_(spec, r_out, active),
        filter_(std::move(filter)),
        target_(std::move(target)),
        verifier_(spec) {}

  const LastRound& last() const { return last_; }
  bool passes_filter(Block dy) const { return filter_(dy); }
  void offer(Block x, Block y) { verifier_.offer(x, y); }

  /// Partial decryption of one filtered pair under every guess; each
  /// surviving guess is completed right away, so nothing is stored.
  void process(Block y0, Block y1, KeyRecoveryResult& res) {
    ++res.survivors;
    const std::uint64_t guesses = std::uint64_t{1} << last_.k_out();
    for (std::uint64_t g = 0; g < guesses; ++g) {
      ++res.ledger.partial_decryptions;
      const Block key = last_.round_key(g);
      if (!target_(last_.peel(y0, key) ^ last_.peel(y1, key))) continue;
      ++res.candidates;
      complete_key(spec_, last_.master_bits(), g, verifier_, res.ledger, found_);
    }
  }

  /// Keys accepted while few known pairs were available are checked again
  /// against the full verification set.
  const std::vector<std::uint64_t>& found() {
    std::erase_if(found_, [this](std::uint64_t key) { return !verifier_.matches(key); });
    return found_;
  }

 private:
  const ToyCipherSpec& spec_;
  LastRound last_;
  std::function<bool(Block)> filter_;
  std::function<bool(Block)> target_;
  KeyVerifier verifier_;
  std::vector<std::uint64_t> found_;
};

/// Mean over nonzero d in D_fin and over guesses of Pr[target accepts].
double backward_h_out(const LastRound& last, const std::vector<Block>& d_fin,
                      const std::function<bool(Block)>& target) {
  const std::uint64_t guesses = std::uint64_t{1} << last.k_out();
  double hits = 0;
  double total = 0;
  for (Block d : d_fin) {
    if (d == 0) continue;
    for (std::uint64_t g = 0; g < guesses; ++g) {
      const Block key = last.round_key(g);
      hits += target(last.peel(0, key) ^ last.peel(d, key)) ? 1 : 0;
      total += 1;
    }
  }
  if (hits == 0) throw Error(Errc::impossible_characteristic, "no guess maps D_fin back to the target");
  return -std::log2(hits / total);
}

Block slot_mask_of(const Layer& layer, const std::vector<Block>& diffs) {
  Block active = 0;
  const Block full = (Block{1} << layer.sbox_width()) - 1;
  for (Block d : diffs) {
    for (int j = 0; j < layer.sbox_count(); ++j) {
      if (layer.slot(d, j)) active |= full << (j * layer.sbox_width());
    }
  }
  return active;
}

struct SimplePlan {
  std::vector<Block> d_fin;
  Block active = 0;
};

SimplePlan simple_plan(const LastRoundsSetup& s) {
  SimplePlan plan;
  if (s.r_out == 0) {
    plan.d_fin = {s.dout};
    return plan;
  }
  plan.d_fin = reachable_differences(s.spec, s.dout, 1).members;
  plan.active = slot_mask_of(Layer(s.spec), {s.dout});
  return plan;
}

struct TruncatedPlan {
  Subspace d_fin;
  Block active = 0;
};

TruncatedPlan truncated_plan(const TruncatedSetup& s) {
  TruncatedPlan plan;
  if (s.r_out == 0) {
    plan.d_fin = s.d_out;
    return plan;
  }
  const Layer layer(s.spec);
  plan.active = slot_mask_of(layer, s.d_out.basis());
  std::vector<Block> gens;
  for (int b = 0; b < s.spec.block_n; ++b) {
    if (plan.active >> b & 1u) gens.push_back(layer.permute(Block{1} << b));
  }
  plan.d_fin = Subspace(s.spec.block_n, gens);
  return plan;
}

std::uint64_t pick_key(const std::vector<std::uint64_t>& found) {
  return *std::min_element(found.begin(), found.end());
}

}  // namespace

PermutationOracle::PermutationOracle(int bits, std::uint64_t seed) : bits_(bits) {
  if (bits < 1 || bits > max_block_bits) invalid("permutation width out of range");
  table_.resize(std::size_t{1} << bits);
  std::iota(table_.begin(), table_.end(), Block{0});
  CounterRng rng(seed, 0x7065726d);
  for (std::size_t i = table_.size() - 1; i > 0; --i) std::swap(table_[i], table_[rng.below(i + 1)]);
}

Subspace::Subspace(int n, const std::vector<Block>& generators) : n_(n) {
  if (n < 1 || n > 32) invalid("subspace ambient dimension out of range");
  for (Block g : generators) {
    if (n < 32 && (g >> n)) invalid("generator wider than the ambient space");
    Block v = reduce(g);
    if (v == 0) continue;
    const Block pivot = Block{1} << (31 - std::countl_zero(v));
    for (auto& b : basis_) {
      if (b & pivot) b ^= v;
    }
    basis_.push_back(v);
    std::sort(basis_.begin(), basis_.end(), std::greater<>());
  }
}

Subspace Subspace::of_bits(int n, const std::vector<int>& bits) {
  std::vector<Block> gens;
  for (int b : bits) {
    if (b < 0 || b >= n) invalid("bit position outside the ambient space");
    gens.push_back(Block{1} << b);
  }
  return Subspace(n, gens);
}

Block Subspace::reduce(Block x) const {
  for (Block b : basis_) {
    const Block pivot = Block{1} << (31 - std::countl_zero(b));
    if (x & pivot) x ^= b;
  }
  return x;
}

Block Subspace::element(std::uint64_t i) const {
  Block x = 0;
  for (std::size_t j = 0; j < basis_.size(); ++j) {
    if (i >> j & 1u) x ^= basis_[j];
  }
  return x;
}

std::vector<Block> Subspace::elements() const {
  std::vector<Block> out(std::size_t{1} << dim());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = element(i);
  return out;
}

std::vector<Structure> build_structures(const Subspace& d_in, double h_T, CounterRng& rng) {
  if (!(h_T >= 0) || h_T > 40) invalid("h_T must lie in [0, 40]");
  const int n = d_in.ambient_bits();
  if (n < 1) invalid("D_in has no ambient space");
  const int delta_in = d_in.dim();
  const int single_log = static_cast<int>(std::ceil((h_T + 1) / 2 - 1e-12));
  std::uint64_t count = 1;
  std::uint64_t size = std::uint64_t{1} << delta_in;
  if (single_log <= delta_in) {
    size = std::uint64_t{1} << single_log;
  } else {
    count = pow2_ceil(h_T - 2.0 * delta_in + 1);
  }
  const std::uint64_t domain = std::uint64_t{1} << n;
  std::vector<Structure> out(count);
  for (auto& s : out) {
    s.base = d_in.reduce(static_cast<Block>(rng.below(domain)));
    s.elements.reserve(size);
    for (std::uint64_t i = 0; i < size; ++i) s.elements.push_back(s.base ^ d_in.element(i));
  }
  return out;
}

std::uint64_t pair_count(const std::vector<Structure>& structures) {
  std::uint64_t total = 0;
  for (const auto& s : structures) {
    const std::uint64_t m = s.elements.size();
    total += m * (m - 1) / 2;
  }
  return total;
}

const char* to_string(DistinguisherVerdict v) {
  return v == DistinguisherVerdict::concrete ? "concrete" : "random";
}

SimpleDistinguisherResult run_simple_distinguisher(BlockOracle& oracle, Block din, Block dout,
                                                   std::uint64_t budget_pairs, CounterRng& rng) {
  if (budget_pairs < 1) invalid("budget must allow at least one pair");
  const std::uint64_t start = oracle.queries();
  const std::uint64_t domain = std::uint64_t{1} << oracle.block_bits();
  SimpleDistinguisherResult res;
  for (std::uint64_t i = 0; i < budget_pairs; ++i) {
    const Block x = static_cast<Block>(rng.below(domain));
    const Block d = oracle.query(x) ^ oracle.query(x ^ din);
    ++res.pairs_used;
    if (d == dout) {
      res.verdict = DistinguisherVerdict::concrete;
      res.right_pair = x;
      break;
    }
  }
  res.ledger.encryption_queries = oracle.queries() - start;
  return res;
}

TruncatedDistinguisherResult run_truncated_distinguisher(BlockOracle& oracle, const Subspace& d_in,
                                                         const Subspace& d_out, double log2_pairs,
                                                         CounterRng& rng) {
  const int n = oracle.block_bits();
  if (d_in.ambient_bits() != n || d_out.ambient_bits() != n) invalid("subspace width differs from the block");
  if (d_in.dim() == 0) invalid("D_in must be nonzero");
  const std::uint64_t start = oracle.queries();
  const auto structures = build_structures(d_in, log2_pairs, rng);
  TruncatedDistinguisherResult res;
  res.structures = structures.size();
  res.pairs = pair_count(structures);
  std::unordered_map<Block, std::uint64_t> buckets;
  for (const auto& s : structures) {
    buckets.clear();
    for (Block x : s.elements) ++buckets[d_out.reduce(oracle.query(x))];
    for (const auto& [rep, c] : buckets) res.observed += c * (c - 1) / 2;
  }
  res.expected_random = static_cast<double>(res.pairs) * (std::exp2(d_out.dim()) - 1) /
                        (std::exp2(n) - 1);
  res.verdict = res.observed > res.expected_random ? DistinguisherVerdict::concrete
                                                   : DistinguisherVerdict::random;
  res.ledger.encryption_queries = oracle.queries() - start;
  return res;
}

LastRoundGeometry last_round_geometry(const LastRoundsSetup& s) {
  check_attackable(s.spec, s.r_out, s.spec.block_n);
  const auto plan = simple_plan(s);
  const LastRound last(s.spec, s.r_out, plan.active);
  LastRoundGeometry g;
  g.log2_D_fin = std::log2(static_cast<double>(plan.d_fin.size()));
  g.k_out = last.k_out();
  g.master_bits = last.master_bits();
  const Block dout = s.dout;
  g.h_out = s.r_out == 0 ? 0.0 : backward_h_out(last, plan.d_fin, [dout](Block d) { return d == dout; });
  return g;
}

LastRoundGeometry last_round_geometry(const TruncatedSetup& s) {
  check_attackable(s.spec, s.r_out, s.spec.block_n);
  const auto plan = truncated_plan(s);
  const LastRound last(s.spec, s.r_out, plan.active);
  LastRoundGeometry g;
  g.log2_D_fin = plan.d_fin.dim();
  g.k_out = last.k_out();
  g.master_bits = last.master_bits();
  const Subspace& d_out = s.d_out;
  g.h_out = s.r_out == 0 ? 0.0
                         : backward_h_out(last, plan.d_fin.elements(),
                                          [&d_out](Block d) { return d != 0 && d_out.contains(d); });
  return g;
}

AttackParams predicted_params(const LastRoundsSetup& s) {
  const auto g = last_round_geometry(s);
  AttackParams p;
  p.cipher_name = s.spec.name;
  p.n = s.spec.block_n;
  p.k = s.spec.master_key_bits();
  p.h_S = s.h_S;
  p.Delta_fin = g.log2_D_fin;
  p.h_out = g.h_out;
  p.k_out = g.k_out;
  p.log2_C_kout = g.k_out;
  return p;
}

AttackParams predicted_params(const TruncatedSetup& s) {
  const auto g = last_round_geometry(s);
  AttackParams p;
  p.cipher_name = s.spec.name;
  p.n = s.spec.block_n;
  p.k = s.spec.master_key_bits();
  p.h_T = s.h_T;
  p.Delta_in = s.d_in.dim();
  p.Delta_out = s.d_out.dim();
  p.Delta_fin = g.log2_D_fin;
  p.h_out = g.h_out;
  p.k_out = g.k_out;
  p.log2_C_kout = g.k_out;
  p.allow_weak_truncated = true;
  return p;
}

KeyRecoveryResult run_last_rounds_attack(BlockOracle& oracle, const LastRoundsSetup& s,
                                         CounterRng& rng) {
  check_attackable(s.spec, s.r_out, oracle.block_bits());
  if (s.din == 0 || s.dout == 0) invalid("differences must be nonzero");
  if (s.max_retries < 0) invalid("max_retries must be >= 0");
  const auto plan = simple_plan(s);
  std::vector<char> in_fin(std::size_t{1} << s.spec.block_n, 0);
  for (Block d : plan.d_fin) in_fin[d] = 1;
  const Block dout = s.dout;
  KeyRecovery attack(
      s.spec, s.r_out, plan.active, [&in_fin](Block d) { return in_fin[d] != 0; },
      [dout](Block d) { return d == dout; });

  KeyRecoveryResult res;
  res.geometry = last_round_geometry(s);
  const std::uint64_t start = oracle.queries();
  const std::uint64_t budget = pow2_ceil(s.h_S);
  const std::uint64_t domain = std::uint64_t{1} << s.spec.block_n;
  for (int attempt = 0; attempt <= s.max_retries; ++attempt) {
    ++res.attempts;
    CounterRng stream = rng.fork(attempt);
    for (std::uint64_t i = 0; i < budget; ++i) {
      const Block x = static_cast<Block>(stream.below(domain));
      const Block y0 = oracle.query(x);
      const Block y1 = oracle.query(x ^ s.din);
      attack.offer(x, y0);
      attack.offer(x ^ s.din, y1);
      ++res.pairs_used;
      if (attack.passes_filter(y0 ^ y1)) attack.process(y0, y1, res);
    }
    if (!attack.found().empty()) break;
  }
  res.ledger.encryption_queries = oracle.queries() - start;
  if (attack.found().empty()) {
    throw AttackFailure("no key survived after " + std::to_string(res.attempts) + " attempts", res.ledger);
  }
  res.key = pick_key(attack.found());
  return res;
}

DifferentialEstimate empirical_truncated_probability(const ToyCipherSpec& spec,
                                                     const std::vector<RoundKeys>& keys,
                                                     const Subspace& d_in, const Subspace& d_out,
                                                     int t) {
  if (keys.empty()) invalid("need at least one key");
  if (d_in.ambient_bits() != spec.block_n || d_out.ambient_bits() != spec.block_n) {
    invalid("subspace width differs from the block");
  }
  if (d_in.dim() == 0) invalid("D_in must be nonzero");
  const std::uint64_t domain = std::uint64_t{1} << spec.block_n;
  const auto diffs = d_in.elements();
  std::vector<Block> table(domain);
  DifferentialEstimate est;
  for (const auto& key : keys) {
    const ToyCipher cipher(spec, key);
    for (std::uint64_t x = 0; x < domain; ++x) table[x] = cipher.encrypt(static_cast<Block>(x), t);
    for (std::uint64_t x = 0; x < domain; ++x) {
      for (std::size_t i = 1; i < diffs.size(); ++i) {
        const Block d = table[x] ^ table[x ^ diffs[i]];
        est.hits += d != 0 && d_out.contains(d) ? 1 : 0;
      }
    }
    est.trials += domain * (diffs.size() - 1);
  }
  const double n = static_cast<double>(est.trials);
  est.p = est.hits / n;
  est.stderr_p = std::sqrt(est.p * (1.0 - est.p) / n);
  if (est.hits == 0) {
    est.lower_bound_only = true;
    est.bound_log2 = -std::log2(n);
  } else {
    est.log2_p = std::log2(est.p);
    est.stderr_log2 = est.stderr_p / (est.p * std::log(2.0));
  }
  return est;
}

KeyRecoveryResult run_truncated_attack(BlockOracle& oracle, const TruncatedSetup& s,
                                       CounterRng& rng) {
  check_attackable(s.spec, s.r_out, oracle.block_bits());
  if (s.d_in.dim() == 0 || s.d_out.dim() == 0) invalid("D_in and D_out must be nonzero");
  if (s.d_in.ambient_bits() != s.spec.block_n || s.d_out.ambient_bits() != s.spec.block_n) {
    invalid("subspace width differs from the block");
  }
  if (s.max_retries < 0) invalid("max_retries must be >= 0");
  const auto plan = truncated_plan(s);
  const Subspace& d_out = s.d_out;
  const Subspace& d_fin = plan.d_fin;
  KeyRecovery attack(
      s.spec, s.r_out, plan.active, [&d_fin](Block d) { return d_fin.contains(d); },
      [&d_out](Block d) { return d != 0 && d_out.contains(d); });

  KeyRecoveryResult res;
  res.geometry = last_round_geometry(s);
  const std::uint64_t start = oracle.queries();
  std::unordered_map<Block, std::vector<Block>> buckets;
  for (int attempt = 0; attempt <= s.max_retries; ++attempt) {
    ++res.attempts;
    CounterRng stream = rng.fork(attempt);
    for (const auto& st : build_structures(s.d_in, s.h_T, stream)) {
      // Bucketing on the output coset of D_fin pairs up exactly the filtered
      // pairs while the structure is queried.
      buckets.clear();
      for (Block x : st.elements) {
        const Block y = oracle.query(x);
        attack.offer(x, y);
        buckets[d_fin.reduce(y)].push_back(y);
      }
      const std::uint64_t m = st.elements.size();
      res.pairs_used += m * (m - 1) / 2;
      for (const auto& [rep, ys] : buckets) {
        for (std::size_t i = 0; i < ys.size(); ++i) {
          for (std::size_t j = i + 1; j < ys.size(); ++j) attack.process(ys[i], ys[j], res);
        }
      }
    }
    if (!attack.found().empty()) break;
  }
  res.ledger.encryption_queries = oracle.queries() - start;
  if (attack.found().empty()) {
    throw AttackFailure("no key survived after " + std::to_string(res.attempts) + " attempts", res.ledger);
  }
  res.key = pick_key(attack.found());
  return res;
}

LinearApproximation approximation_from(const ToyCipherSpec& spec, const Characteristic& ch) {
  if (ch.kind != CharacteristicKind::linear) invalid("need a linear characteristic");
  if (spec.master_key_bits() > 64) invalid("key mask needs a master key of at most 64 bits");
  const auto v = characteristic_probability(spec, ch);
  LinearApproximation a;
  a.alpha = ch.input();
  a.beta = ch.output();
  a.bias_log2 = v.log2;
  a.chi0 = v.sign < 0 ? 1 : 0;
  // Key addition r meets mask r: K_0 with masks[0], K_r with masks[r].
  for (int r = 0; r <= ch.rounds(); ++r) {
    for (int b = 0; b < spec.block_n; ++b) {
      if (ch.masks[r] >> b & 1u) a.key_mask ^= std::uint64_t{1} << spec.master_bit(r, b);
    }
  }
  return a;
}

AffineKeySpace::AffineKeySpace(int key_bits, const std::vector<std::uint64_t>& masks,
                               const std::vector<int>& rhs)
    : key_bits_(key_bits) {
  if (key_bits < 1 || key_bits > 64) invalid("key_bits must lie in [1, 64]");
  if (masks.size() != rhs.size()) invalid("mask and parity counts differ");
  for (std::size_t i = 0; i < masks.size(); ++i) {
    std::uint64_t m = masks[i];
    int r = rhs[i] & 1;
    for (std::size_t j = 0; j < rows_.size(); ++j) {
      if (m >> pivots_[j] & 1u) {
        m ^= rows_[j].first;
        r ^= rows_[j].second;
      }
    }
    if (m == 0) {
      if (r) consistent_ = false;
      continue;
    }
    const int p = std::countr_zero(m);
    for (auto& row : rows_) {
      if (row.first >> p & 1u) {
        row.first ^= m;
        row.second ^= r;
      }
    }
    rows_.emplace_back(m, r);
    pivots_.push_back(p);
  }
  for (int b = 0; b < key_bits; ++b) {
    if (std::find(pivots_.begin(), pivots_.end(), b) == pivots_.end()) free_bits_.push_back(b);
  }
}

bool AffineKeySpace::contains(std::uint64_t key) const {
  if (!consistent_) return false;
  for (const auto& [m, r] : rows_) {
    if (std::popcount(key & m) % 2 != r) return false;
  }
  return true;
}

std::uint64_t AffineKeySpace::nth(std::uint64_t i) const {
  if (!consistent_) throw Error(Errc::not_found, "key equations are inconsistent");
  std::uint64_t key = 0;
  for (std::size_t j = 0; j < free_bits_.size(); ++j) {
    if (i >> j & 1u) key |= std::uint64_t{1} << free_bits_[j];
  }
  // Each row has exactly one pivot and the pivots do not appear in other rows.
  for (std::size_t j = 0; j < rows_.size(); ++j) {
    const int par = std::popcount(key & rows_[j].first) % 2;
    if (par != rows_[j].second) key ^= std::uint64_t{1} << pivots_[j];
  }
  return key;
}

std::uint64_t matsui_budget(double bias_log2, double A) {
  if (!(A > 0)) invalid("A must be positive");
  if (!(bias_log2 < 0)) invalid("bias must be below 1/2");
  return pow2_ceil(std::log2(A) - 2 * bias_log2);
}

Matsui1Result matsui_alg1(BlockOracle& oracle, const std::vector<LinearApproximation>& approx,
                          std::uint64_t texts, CounterRng& rng, const ToyCipherSpec* spec,
                          bool complete) {
  if (approx.empty()) invalid("need at least one approximation");
  if (texts < 1) invalid("need at least one text");
  if (complete && !spec) invalid("key completion needs the cipher spec");
  const std::uint64_t start = oracle.queries();
  const std::uint64_t domain = std::uint64_t{1} << oracle.block_bits();
  Matsui1Result res;
  res.texts = texts;
  res.agreements.assign(approx.size(), 0);
  std::optional<KeyVerifier> verifier;
  if (complete) verifier.emplace(*spec);
  for (std::uint64_t i = 0; i < texts; ++i) {
    const Block x = static_cast<Block>(rng.below(domain));
    const Block y = oracle.query(x);
    if (verifier) verifier->offer(x, y);
    for (std::size_t a = 0; a < approx.size(); ++a) {
      if (parity(x & approx[a].alpha) == parity(y & approx[a].beta)) ++res.agreements[a];
    }
  }
  std::vector<std::uint64_t> masks;
  for (std::size_t a = 0; a < approx.size(); ++a) {
    const bool more_than_half = 2 * res.agreements[a] > texts;
    res.parities.push_back(more_than_half ? approx[a].chi0 : 1 - approx[a].chi0);
    masks.push_back(approx[a].key_mask);
  }
  res.ledger.encryption_queries = oracle.queries() - start;
  if (spec) {
    res.key_space.emplace(spec->master_key_bits(), masks, res.parities);
    if (complete && res.key_space->consistent()) {
      if (res.key_space->log2_size() > 24) throw Error(Errc::infeasible, "reduced key space above 2^24");
      const std::uint64_t count = std::uint64_t{1} << res.key_space->log2_size();
      for (std::uint64_t i = 0; i < count; ++i) {
        ++res.ledger.key_trials;
        const std::uint64_t key = res.key_space->nth(i);
        if (verifier->matches(key)) {
          res.key = key;
          break;
        }
      }
    }
  }
  return res;
}

Matsui2Result matsui_alg2(BlockOracle& oracle, const Matsui2Setup& s, std::uint64_t texts,
                          CounterRng& rng) {
  check_attackable(s.spec, s.r_out, oracle.block_bits());
  if (texts < 1) invalid("need at least one text");
  if (s.beta == 0 || (s.beta & ~s.spec.block_mask()) || (s.alpha & ~s.spec.block_mask())) {
    invalid("masks must fit the block and beta must be nonzero");
  }
  const Layer layer(s.spec);
  const LastRound last(s.spec, s.r_out, s.r_out == 0 ? 0 : slot_mask_of(layer, {s.beta}));
  const std::uint64_t guesses = std::uint64_t{1} << last.k_out();
  std::vector<Block> keys(guesses);
  for (std::uint64_t g = 0; g < guesses; ++g) keys[g] = last.round_key(g);

  Matsui2Result res;
  res.texts = texts;
  res.k_out = last.k_out();
  res.master_bits = last.master_bits();
  res.counters.assign(guesses, 0);
  const std::uint64_t start = oracle.queries();
  const std::uint64_t domain = std::uint64_t{1} << s.spec.block_n;
  KeyVerifier verifier(s.spec);
  for (std::uint64_t i = 0; i < texts; ++i) {
    const Block x = static_cast<Block>(rng.below(domain));
    const Block y = oracle.query(x);
    verifier.offer(x, y);
    const int lhs = parity(x & s.alpha) ^ s.chi0;
    for (std::uint64_t g = 0; g < guesses; ++g) {
      if (lhs == parity(last.peel(y, keys[g]) & s.beta)) ++res.counters[g];
    }
    res.ledger.partial_decryptions += guesses;
  }
  res.ledger.encryption_queries = oracle.queries() - start;

  const double half = static_cast<double>(texts) / 2;
  double best = -1;
  for (std::uint64_t g = 0; g < guesses; ++g) {
    const double score = std::abs(static_cast<double>(res.counters[g]) - half);
    if (score > best) {
      best = score;
      res.partial_key = g;
      res.tie = false;
    } else if (score == best) {
      res.tie = true;
    }
  }
  std::vector<std::uint64_t> found;
  complete_key(s.spec, res.master_bits, res.partial_key, verifier, res.ledger, found);
  if (!found.empty()) res.key = pick_key(found);
  return res;
}

}  // namespace qdl
