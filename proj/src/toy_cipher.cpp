#include "qdl/toy_cipher.hpp"

#include <algorithm>
#include <numeric>

#include "qdl/error.hpp"

namespace qdl {

namespace {

[[noreturn]] void invalid(const std::string& msg) {
  throw Error(Errc::invalid_argument, msg);
}

unsigned gf8_mul(unsigned a, unsigned b) {
  unsigned r = 0;
  for (int i = 0; i < 3; ++i) {
    if (b & (1u << i)) r ^= a << i;
  }
  for (int bit = 4; bit >= 3; --bit) {
    if (r & (1u << bit)) r ^= 0b1011u << (bit - 3);
  }
  return r;
}

void check_permutation(const std::vector<int>& perm, int bits) {
  if (static_cast<int>(perm.size()) != bits) {
    invalid("permutation must have " + std::to_string(bits) + " entries");
  }
  std::vector<bool> seen(bits, false);
  for (int p : perm) {
    if (p < 0 || p >= bits || seen[p]) invalid("permutation is not a bijection");
    seen[p] = true;
  }
}

}  // namespace

void SboxSpec::validate() const {
  if (width < 1 || width > 8) invalid("S-box width must be in [1, 8]");
  if (static_cast<int>(table.size()) != size()) {
    invalid("S-box table must have 2^width entries");
  }
  std::vector<bool> seen(size(), false);
  for (auto v : table) {
    if (v >= size() || seen[v]) invalid("S-box table is not a permutation");
    seen[v] = true;
  }
}

std::vector<std::uint8_t> SboxSpec::inverse() const {
  std::vector<std::uint8_t> inv(table.size());
  for (std::size_t x = 0; x < table.size(); ++x) inv[table[x]] = static_cast<std::uint8_t>(x);
  return inv;
}

SboxSpec cube_apn3_sbox() {
  SboxSpec s{3, {}};
  for (unsigned x = 0; x < 8; ++x) {
    s.table.push_back(static_cast<std::uint8_t>(gf8_mul(gf8_mul(x, x), x)));
  }
  return s;
}

SboxSpec heys4_sbox() {
  return {4, {0xE, 0x4, 0xD, 0x1, 0x2, 0xF, 0xB, 0x8,
              0x3, 0xA, 0x6, 0xC, 0x5, 0x9, 0x0, 0x7}};
}

SboxSpec identity_sbox(int width) {
  SboxSpec s{width, std::vector<std::uint8_t>(1u << width)};
  std::iota(s.table.begin(), s.table.end(), 0);
  return s;
}

SboxSpec random_sbox(int width, CounterRng& rng) {
  auto s = identity_sbox(width);
  for (int i = s.size() - 1; i > 0; --i) {
    std::swap(s.table[i], s.table[rng.below(i + 1)]);
  }
  return s;
}

const char* to_string(CipherStructure s) {
  return s == CipherStructure::spn ? "spn" : "feistel";
}

const char* to_string(KeySchedule s) {
  return s == KeySchedule::independent ? "independent" : "xor_master";
}

int ToyCipherSpec::layer_bits() const {
  return structure == CipherStructure::spn ? block_n : block_n / 2;
}

void ToyCipherSpec::validate() const {
  if (block_n < 2 || block_n > max_block_bits) {
    invalid("block_n must lie in [2, " + std::to_string(max_block_bits) + "]");
  }
  if (rounds < 1) invalid("rounds must be >= 1");
  sbox.validate();
  if (structure == CipherStructure::feistel && block_n % 2 != 0) {
    invalid("Feistel block size must be even");
  }
  if (layer_bits() % sbox.width != 0) {
    invalid("layer width must be a multiple of the S-box width");
  }
  check_permutation(permutation, layer_bits());
  if (key_schedule == KeySchedule::xor_master) {
    if (key_bits < 1 || key_bits > 64) invalid("key_bits must lie in [1, 64]");
    if (key_rotation < 0) invalid("key_rotation must be >= 0");
  }
}

int ToyCipherSpec::round_key_bits(int round) const {
  return round == 0 ? block_n : layer_bits();
}

int ToyCipherSpec::master_key_bits() const {
  if (key_schedule == KeySchedule::xor_master) return key_bits;
  int total = 0;
  for (int r = 0; r <= rounds; ++r) total += round_key_bits(r);
  return total;
}

int ToyCipherSpec::master_bit(int round, int bit) const {
  if (round < 0 || round > rounds || bit < 0 || bit >= round_key_bits(round)) {
    invalid("round-key bit out of range");
  }
  if (key_schedule == KeySchedule::xor_master) {
    return static_cast<int>((bit + static_cast<long long>(round) * key_rotation) % key_bits);
  }
  int offset = 0;
  for (int r = 0; r < round; ++r) offset += round_key_bits(r);
  return offset + bit;
}

std::vector<int> present_style_permutation(int n, int sbox_width) {
  std::vector<int> p(n);
  const int m = n / sbox_width;
  for (int i = 0; i < n - 1; ++i) p[i] = (i * m) % (n - 1);
  p[n - 1] = n - 1;
  return p;
}

std::vector<int> transpose_permutation(int n, int sbox_width) {
  if (n != sbox_width * sbox_width) invalid("transposition needs n = w^2");
  std::vector<int> p(n);
  for (int j = 0; j < sbox_width; ++j) {
    for (int b = 0; b < sbox_width; ++b) p[j * sbox_width + b] = b * sbox_width + j;
  }
  return p;
}

ToyCipherSpec reference_spn12(int rounds) {
  ToyCipherSpec s;
  s.name = "toy12";
  s.structure = CipherStructure::spn;
  s.block_n = 12;
  s.rounds = rounds;
  s.sbox = cube_apn3_sbox();
  s.permutation = present_style_permutation(12, 3);
  s.key_schedule = KeySchedule::xor_master;
  s.key_bits = 16;
  s.key_rotation = 3;
  return s;
}

ToyCipherSpec reference_spn16(int rounds) {
  ToyCipherSpec s;
  s.name = "toy16";
  s.structure = CipherStructure::spn;
  s.block_n = 16;
  s.rounds = rounds;
  s.sbox = heys4_sbox();
  s.permutation = transpose_permutation(16, 4);
  s.key_schedule = KeySchedule::xor_master;
  s.key_bits = 20;
  s.key_rotation = 5;
  return s;
}

RoundKeys expand_master_key(const ToyCipherSpec& spec, std::uint64_t master) {
  const int total = spec.master_key_bits();
  if (total > 64) invalid("master key wider than 64 bits; use explicit round keys");
  if (total < 64 && (master >> total) != 0) invalid("master key has bits above key size");
  RoundKeys keys(spec.rounds + 1, 0);
  for (int r = 0; r <= spec.rounds; ++r) {
    for (int j = 0; j < spec.round_key_bits(r); ++j) {
      keys[r] |= static_cast<Block>((master >> spec.master_bit(r, j)) & 1u) << j;
    }
  }
  return keys;
}

RoundKeys random_round_keys(const ToyCipherSpec& spec, CounterRng& rng) {
  if (spec.key_schedule == KeySchedule::xor_master) {
    const std::uint64_t mask =
        spec.key_bits == 64 ? ~0ULL : ((1ULL << spec.key_bits) - 1);
    return expand_master_key(spec, rng() & mask);
  }
  RoundKeys keys(spec.rounds + 1);
  for (int r = 0; r <= spec.rounds; ++r) {
    keys[r] = static_cast<Block>(rng() & ((1ULL << spec.round_key_bits(r)) - 1));
  }
  return keys;
}

Layer::Layer(const ToyCipherSpec& spec)
    : bits_(spec.layer_bits()),
      width_(spec.sbox.width),
      slot_mask_((1u << spec.sbox.width) - 1),
      sbox_(spec.sbox.table),
      inverse_(spec.sbox.inverse()) {
  const int chunks = (bits_ + 7) / 8;
  forward_perm_.assign(chunks, {});
  inverse_perm_.assign(chunks, {});
  std::vector<int> inv(bits_);
  for (int i = 0; i < bits_; ++i) inv[spec.permutation[i]] = i;
  for (int c = 0; c < chunks; ++c) {
    for (unsigned v = 0; v < 256; ++v) {
      Block f = 0;
      Block g = 0;
      for (int b = 0; b < 8 && c * 8 + b < bits_; ++b) {
        if (v & (1u << b)) {
          f |= Block{1} << spec.permutation[c * 8 + b];
          g |= Block{1} << inv[c * 8 + b];
        }
      }
      forward_perm_[c][v] = f;
      inverse_perm_[c][v] = g;
    }
  }
}

Block Layer::apply_tables(const std::vector<std::array<Block, 256>>& t, Block x) {
  Block y = 0;
  for (std::size_t c = 0; c < t.size(); ++c) y |= t[c][(x >> (8 * c)) & 0xff];
  return y;
}

Block Layer::substitute(Block x) const {
  Block y = 0;
  for (int j = 0; j < sbox_count(); ++j) y |= Block(sbox_[slot(x, j)]) << (j * width_);
  return y;
}

Block Layer::inverse_substitute(Block x) const {
  Block y = 0;
  for (int j = 0; j < sbox_count(); ++j) y |= Block(inverse_[slot(x, j)]) << (j * width_);
  return y;
}

Block Layer::permute(Block x) const { return apply_tables(forward_perm_, x); }
Block Layer::inverse_permute(Block x) const { return apply_tables(inverse_perm_, x); }

ToyCipher::ToyCipher(ToyCipherSpec spec, RoundKeys keys)
    : spec_((spec.validate(), std::move(spec))), layer_(spec_) {
  set_round_keys(std::move(keys));
}

void ToyCipher::set_round_keys(RoundKeys keys) {
  keys_ = std::move(keys);
  if (static_cast<int>(keys_.size()) != spec_.rounds + 1) {
    invalid("expected one round key per round plus the whitening key");
  }
  for (int r = 0; r <= spec_.rounds; ++r) {
    if (keys_[r] >> spec_.round_key_bits(r)) invalid("round key wider than its slot");
  }
}

void ToyCipher::check(Block x, int t) const {
  if (t < 0 || t > spec_.rounds) invalid("round count out of range");
  if (x & ~spec_.block_mask()) invalid("block out of range");
}

Block ToyCipher::round_function(Block half, Block key) const {
  return layer_.permute(layer_.substitute(half ^ key));
}

Block ToyCipher::encrypt(Block x, int t) const {
  check(x, t);
  x ^= keys_[0];
  if (spec_.structure == CipherStructure::spn) {
    for (int r = 1; r <= t; ++r) x = layer_.permute(layer_.substitute(x)) ^ keys_[r];
    return x;
  }
  const int h = spec_.block_n / 2;
  const Block hm = (Block{1} << h) - 1;
  Block left = x >> h;
  Block right = x & hm;
  for (int r = 1; r <= t; ++r) {
    const Block next = left ^ round_function(right, keys_[r]);
    left = right;
    right = next;
  }
  return (left << h) | right;
}

Block ToyCipher::decrypt(Block y, int t) const {
  check(y, t);
  if (spec_.structure == CipherStructure::spn) {
    for (int r = t; r >= 1; --r) {
      y = layer_.inverse_substitute(layer_.inverse_permute(y ^ keys_[r]));
    }
    return y ^ keys_[0];
  }
  const int h = spec_.block_n / 2;
  const Block hm = (Block{1} << h) - 1;
  Block left = y >> h;
  Block right = y & hm;
  for (int r = t; r >= 1; --r) {
    const Block prev = right ^ round_function(left, keys_[r]);
    right = left;
    left = prev;
  }
  return ((left << h) | right) ^ keys_[0];
}

}  // namespace qdl
