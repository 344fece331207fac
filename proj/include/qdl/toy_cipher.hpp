#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "qdl/rng.hpp"

namespace qdl {

using Block = std::uint32_t;

inline constexpr int max_block_bits = 24;

/// A bijective w-bit S-box, w in {3, 4}.
struct SboxSpec {
  int width = 0;
  std::vector<std::uint8_t> table;

  void validate() const;
  int size() const { return 1 << width; }
  std::vector<std::uint8_t> inverse() const;

  friend bool operator==(const SboxSpec&, const SboxSpec&) = default;
};

/// x -> x^3 over GF(2^3) = GF(2)[t]/(t^3 + t + 1). Almost perfect nonlinear.
SboxSpec cube_apn3_sbox();
/// The 4-bit S-box of Heys' SPN tutorial (first row of DES S1).
SboxSpec heys4_sbox();
SboxSpec identity_sbox(int width);
SboxSpec random_sbox(int width, CounterRng& rng);

enum class CipherStructure { spn, feistel };
enum class KeySchedule { independent, xor_master };

const char* to_string(CipherStructure s);
const char* to_string(KeySchedule s);

/// Parametric toy cipher.
///
/// SPN round r (1-based): x = P(S(x)) ^ K_r, after the whitening x ^= K_0.
/// Feistel round r: (L, R) = (R, L ^ P(S(R ^ K_r))) on n/2-bit halves, L in
/// the high half, again after a full-width whitening K_0.
///
/// `permutation[i]` is the destination of bit i (over n bits for SPN, over
/// n/2 bits for the Feistel round function).
///
/// Key schedules: `independent` round keys (the master key is their
/// concatenation, K_0 in the low bits), or `xor_master`, where bit j of K_r
/// is master bit (j + r * key_rotation) mod key_bits.
struct ToyCipherSpec {
  std::string name;
  CipherStructure structure = CipherStructure::spn;
  int block_n = 0;
  int rounds = 1;
  SboxSpec sbox;
  std::vector<int> permutation;
  KeySchedule key_schedule = KeySchedule::independent;
  int key_bits = 0;
  int key_rotation = 0;

  void validate() const;
  Block block_mask() const { return (Block{1} << block_n) - 1; }
  int layer_bits() const;
  int sboxes_per_layer() const { return layer_bits() / sbox.width; }
  int round_key_bits(int round) const;
  int master_key_bits() const;
  /// Master-key bit feeding bit `bit` of round key `round`.
  int master_bit(int round, int bit) const;

  friend bool operator==(const ToyCipherSpec&, const ToyCipherSpec&) = default;
};

/// PRESENT-style bit permutation on n bits: i -> i*(n/w) mod (n-1), with the
/// top bit fixed. Bit 0 and bit n-1 are fixed points.
std::vector<int> present_style_permutation(int n, int sbox_width);
/// Heys-style transposition: bit b of S-box j goes to bit j of S-box b.
/// Requires n == w*w.
std::vector<int> transpose_permutation(int n, int sbox_width);

/// The 12-bit reference SPN: four 3-bit cube S-boxes, PRESENT-style wiring,
/// 16-bit rotating master key.
ToyCipherSpec reference_spn12(int rounds = 5);
/// The 16-bit reference SPN: four Heys S-boxes, transposition wiring, 20-bit
/// rotating master key.
ToyCipherSpec reference_spn16(int rounds = 4);

using RoundKeys = std::vector<Block>;

RoundKeys expand_master_key(const ToyCipherSpec& spec, std::uint64_t master);
RoundKeys random_round_keys(const ToyCipherSpec& spec, CounterRng& rng);

/// Keyless S-box and bit-permutation layer of one round (n bits for SPN,
/// n/2 bits for the Feistel round function).
class Layer {
 public:
  explicit Layer(const ToyCipherSpec& spec);

  Block substitute(Block x) const;
  Block inverse_substitute(Block x) const;
  Block permute(Block x) const;
  Block inverse_permute(Block x) const;

  int bits() const { return bits_; }
  int sbox_width() const { return width_; }
  int sbox_count() const { return bits_ / width_; }
  unsigned sbox(unsigned x) const { return sbox_[x]; }
  unsigned inverse_sbox(unsigned x) const { return inverse_[x]; }
  /// Value of S-box slot j in x.
  unsigned slot(Block x, int j) const { return (x >> (j * width_)) & slot_mask_; }
  Block with_slot(Block x, int j, unsigned v) const {
    return (x & ~(Block(slot_mask_) << (j * width_))) | (Block(v) << (j * width_));
  }

 private:
  static Block apply_tables(const std::vector<std::array<Block, 256>>& t, Block x);

  int bits_;
  int width_;
  unsigned slot_mask_;
  std::vector<std::uint8_t> sbox_;
  std::vector<std::uint8_t> inverse_;
  std::vector<std::array<Block, 256>> forward_perm_;
  std::vector<std::array<Block, 256>> inverse_perm_;
};

class ToyCipher {
 public:
  ToyCipher(ToyCipherSpec spec, RoundKeys keys);

  /// E^{(t)}: whitening plus the first t rounds.
  Block encrypt(Block x, int t) const;
  Block encrypt(Block x) const { return encrypt(x, spec_.rounds); }
  Block decrypt(Block y, int t) const;
  Block decrypt(Block y) const { return decrypt(y, spec_.rounds); }

  const ToyCipherSpec& spec() const { return spec_; }
  const Layer& layer() const { return layer_; }
  const RoundKeys& round_keys() const { return keys_; }
  /// Swap in another key without rebuilding the layer tables.
  void set_round_keys(RoundKeys keys);

 private:
  void check(Block x, int t) const;
  Block round_function(Block half, Block key) const;

  ToyCipherSpec spec_;
  Layer layer_;
  RoundKeys keys_;
};

}  // namespace qdl
