#pragma once

#include <cstdint>
#include <optional>

#include "qdl/json_io.hpp"
#include "qdl/toy_cipher.hpp"

namespace qdl {

/// Outcome of a qsim experiment: `bounds_hold` drives the exit code.
struct QsimRun {
  bool bounds_hold = false;
  ordered_json report;
};

/// Grover search over N = 2^q items with t random marked items. Checks the
/// simulated success probability against sin^2((2j+1) theta) (within 1e-9)
/// and the query count against floor(pi/4 sqrt(N/t)) + 1, the last query
/// verifying the measured item.
QsimRun qsim_grover(std::uint64_t N, std::uint64_t t, std::uint64_t seed);

/// `trials` independent quantum-counting estimates with a D-point register,
/// each the median of `repetitions` runs. Passes when the fraction with
/// |p' - p| <= 2 pi sqrt(p)/D + pi^2/D^2 is >= 0.81.
inline constexpr double counting_pass_fraction = 0.81;
QsimRun qsim_count(std::uint64_t N, std::uint64_t t, std::uint64_t D, std::uint64_t trials,
                   std::uint64_t seed, int repetitions = 5);

/// Amplitude amplification from the uniform state with a = t/N.
QsimRun qsim_aa(std::uint64_t N, std::uint64_t t, std::uint64_t seed);

/// Random-subset step of the promised pair search: frequency against the
/// exact hypergeometric value, plus the charged query cost.
QsimRun qsim_pairs(std::uint64_t n, std::uint64_t k, std::uint64_t trials, std::uint64_t seed);

struct DemoOptions {
  std::uint64_t seed = 1;
  std::optional<int> rounds;
  std::optional<Block> din;   // default 0x1
  std::optional<Block> dout;  // default: the most frequent output difference
};

/// Q2 right-pair search on a toy cipher keyed from the seed. h_S is measured
/// by enumerating every plaintext under the oracle key; passes when a
/// verified right pair is found with an iteration count within a factor 2 of
/// 2^{h_S/2}.
QsimRun qsim_demo(const ToyCipherSpec& spec, const DemoOptions& options);

}  // namespace qdl
