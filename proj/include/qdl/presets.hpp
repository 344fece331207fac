#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qdl/classical_attacks.hpp"
#include "qdl/json_io.hpp"
#include "qdl/params.hpp"

namespace qdl {

// Paper case studies.

const std::vector<std::string>& reproduction_targets();
/// Parameter record of "lac", "klein64" or "klein96"; Errc::invalid_argument
/// otherwise.
AttackParams preset_params(const std::string& target);

struct ReproductionCheck {
  std::string label;
  /// Numeric checks carry expected/tolerance/actual; the others compare text.
  std::optional<double> expected;
  std::optional<double> tolerance;
  std::optional<double> actual;
  std::string expected_text;
  std::string actual_text;
  bool pass = false;
};

struct Reproduction {
  std::string target;
  AttackParams params;
  std::vector<ReproductionCheck> checks;
  std::vector<std::string> notes;
  ordered_json report;  // full per-model evaluation plus the checks
  bool passed() const;
};

Reproduction reproduce(const std::string& target);

// Toy-cipher attack presets.

enum class ToyAttackKind {
  simple_distinguisher,
  last_rounds,
  truncated_distinguisher,
  truncated_attack,
  matsui1,
  matsui2,
};

const char* to_string(ToyAttackKind kind);

struct ToyAttackPreset {
  std::string name;
  std::string cipher;  // spec name the preset was built for
  int block_n = 0;
  int rounds = 0;      // spec rounds the preset was tuned for
  ToyAttackKind kind = ToyAttackKind::last_rounds;
  std::string description;
  int r_out = 0;
  Block din = 0;
  Block dout = 0;
  std::vector<Block> d_in;   // generators
  std::vector<Block> d_out;  // generators
  /// Budget above the measured 2^{h}: pairs for distinguishers.
  double extra_log2 = 0.0;
  /// Linear characteristic (masks) for Matsui presets.
  std::vector<Block> masks;
  /// Keys used to measure the differential probability by enumeration.
  int measure_keys = 16;
};

const std::vector<ToyAttackPreset>& toy_attack_presets();
const ToyAttackPreset& find_toy_preset(const std::string& name);

struct ToyRunOptions {
  std::uint64_t seed = 1;
  /// Round count to run. Without it the preset's own count replaces the
  /// spec's. 0 is rejected by the feasibility check.
  std::optional<int> rounds;
  bool force = false;
};

/// log2 of the encryptions spent measuring the preset's probability by
/// enumeration.
double toy_measurement_work_log2(const ToyCipherSpec& spec, const ToyAttackPreset& preset);

/// Runs the preset against an oracle keyed from the seed. Throws
/// Errc::infeasible when the measurement or the predicted attack time
/// exceeds 2^30 without `force`, or when the round count cannot carry the
/// preset. The report holds the key, the ledger and the predicted-vs-measured
/// table; `success` means the key was recovered or the distinguisher
/// answered "concrete".
struct ToyRun {
  bool success = false;
  ordered_json report;
};

inline constexpr double toy_work_limit_log2 = 30.0;

ToyRun run_toy_preset(const ToyCipherSpec& spec, const ToyAttackPreset& preset,
                      const ToyRunOptions& options);

}  // namespace qdl
