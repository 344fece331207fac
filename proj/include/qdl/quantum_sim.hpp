#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "qdl/log_work.hpp"
#include "qdl/rng.hpp"
#include "qdl/toy_cipher.hpp"

namespace qdl {

inline constexpr int max_qubits = 24;

/// Dense state of q qubits.
class StateVector {
 public:
  using amplitude = std::complex<double>;

  /// |index>; throws Errc::infeasible above max_qubits.
  static StateVector basis(int qubits, std::uint64_t index = 0);
  /// Uniform superposition over all 2^q basis states.
  static StateVector uniform(int qubits);

  int qubits() const { return qubits_; }
  std::uint64_t size() const { return amps_.size(); }
  const std::vector<amplitude>& amplitudes() const { return amps_; }
  std::vector<amplitude>& amplitudes() { return amps_; }

  double norm_squared() const;
  double probability(std::uint64_t index) const { return std::norm(amps_[index]); }
  /// Sum of |a_i|^2 over indices accepted by `pred`.
  double probability_of(const std::function<bool(std::uint64_t)>& pred) const;
  /// Most likely basis state, lowest index on ties.
  std::uint64_t most_likely() const;
  /// Samples a basis state without collapsing.
  std::uint64_t sample(CounterRng& rng) const;

  /// H on every qubit (normalized Walsh-Hadamard transform).
  void hadamard_all();
  /// I - 2|0><0|.
  void reflect_zero();
  /// 2|s><s| - I for the uniform state |s>.
  void invert_about_mean();

 private:
  StateVector(int qubits, std::vector<amplitude> amps) : qubits_(qubits), amps_(std::move(amps)) {}

  int qubits_ = 0;
  std::vector<amplitude> amps_;
};

/// Phase oracle |x> -> (-1)^{f(x)}|x> with a query counter.
class PredicateOracle {
 public:
  explicit PredicateOracle(std::function<bool(std::uint64_t)> predicate)
      : predicate_(std::move(predicate)) {}

  /// One query: phase flip of the whole state.
  void apply(StateVector& state);
  /// One query on a single classical input (used for the final check).
  bool check(std::uint64_t x);
  /// Uncounted evaluation, for analysis only.
  bool peek(std::uint64_t x) const { return predicate_(x); }
  std::uint64_t marked_count(std::uint64_t domain) const;

  std::uint64_t queries() const { return queries_; }
  const std::function<bool(std::uint64_t)>& predicate() const { return predicate_; }

 private:
  std::function<bool(std::uint64_t)> predicate_;
  std::uint64_t queries_ = 0;
};

/// floor(pi/4 * sqrt(N / t)).
std::uint64_t grover_iterations(std::uint64_t N, std::uint64_t t);
/// sin^2((2j + 1) asin(sqrt(t / N))).
double grover_success_closed_form(std::uint64_t N, std::uint64_t t, std::uint64_t j);

struct GroverResult {
  std::uint64_t found = 0;
  bool marked = false;
  double success_probability = 0.0;
  std::uint64_t iterations = 0;
  std::uint64_t queries = 0;
};

/// Grover search with the iteration count set from the hint. The output is
/// the most likely basis state, confirmed with one more oracle query.
GroverResult grover_search(PredicateOracle& oracle, std::uint64_t N, std::uint64_t t_hint);

/// Unknown number of marked elements: random iteration counts below a bound
/// that grows by 6/5 after every miss. Gives up after about 9 sqrt(N)
/// queries.
GroverResult grover_search_unknown(PredicateOracle& oracle, std::uint64_t N, CounterRng& rng);

/// A measurement-free state preparation, given as forward/inverse actions on
/// a q-qubit state.
struct StatePrep {
  int qubits = 0;
  std::function<void(StateVector&)> forward;
  std::function<void(StateVector&)> inverse;
};

StatePrep uniform_prep(int qubits);

struct AmplificationResult {
  std::uint64_t outcome = 0;
  double success_probability = 0.0;
  std::uint64_t rounds = 0;
  std::uint64_t prep_calls = 0;
  std::uint64_t oracle_queries = 0;
};

/// floor((pi/4) / sqrt(a_hint)) rounds of A S_0 A^{-1} S_good on A|0>.
AmplificationResult amplitude_amplify(const StatePrep& prep, PredicateOracle& good, double a_hint);

/// Error guarantee 2 pi sqrt(p) / D + pi^2 / D^2.
double counting_bound(double p, std::uint64_t D);

struct CountResult {
  double estimate = 0.0;
  /// counting_bound with the estimate substituted for p.
  double bound_at_estimate = 0.0;
  std::vector<std::uint64_t> outcomes;  // measured phase registers
  std::uint64_t register_size = 0;      // M = 2^{ceil(log2 D)}
  std::uint64_t queries = 0;
};

/// Phase estimation of the Grover iterate on a ceil(log2 D)-qubit register,
/// p' = sin^2(pi y / M). With several repetitions the median estimate is
/// returned. The outcome distribution is computed exactly and then sampled.
CountResult quantum_count(PredicateOracle& oracle, std::uint64_t N, std::uint64_t D,
                          CounterRng& rng, int repetitions = 1);

/// Exact distribution of the phase register for quantum_count (M entries).
std::vector<double> counting_distribution(PredicateOracle& oracle, std::uint64_t N,
                                          std::uint64_t D);

enum class WalkAlgorithm { ambainis, pair_search_promise };
const char* to_string(WalkAlgorithm a);

/// Query-cost accounting for the collision-finding walks. Costs in log2.
struct QueryCostModel {
  WalkAlgorithm algorithm = WalkAlgorithm::ambainis;
  double n = 0;
  double k = 0;
  LogWork charged_cost;
  /// log2 |X'| of the random subset (pair-search only).
  LogWork subset_size;
  bool not_found = false;
};

/// (2/3) log2 n for element distinctness; (2/3) log2 n - (1/3) log2 k when
/// k disjoint pairs are promised, on a random subset of n / sqrt(k) items.
/// k = 0 is charged at the full Ambainis rate and flagged not-found.
QueryCostModel charge_pair_search(double n, double k);

struct SubsetHitStats {
  std::uint64_t trials = 0;
  std::uint64_t hits = 0;
  std::uint64_t subset_size = 0;
  double frequency = 0.0;
  double exact = 0.0;
};

/// Probability that a uniform s-subset of n items contains both members of
/// at least one of k disjoint pairs.
double subset_hit_probability(std::uint64_t n, std::uint64_t k, std::uint64_t s);

/// Runs the classical part of the pair search: plants k disjoint colliding
/// pairs in a list of n values, samples subsets of size ceil(n / sqrt(k))
/// and looks for a collision inside each one.
SubsetHitStats subset_hit_experiment(std::uint64_t n, std::uint64_t k, std::uint64_t trials,
                                     std::uint64_t seed);

struct DemoResult {
  std::uint64_t t_hint = 0;
  std::uint64_t marked = 0;  // true number of right plaintexts for this key
  GroverResult grover;
  bool found = false;
  Block x = 0;
};

/// Q2 search for a right pair E(x ^ din) = E(x) ^ dout over all x, with
/// t_hint = round(2^{n - h_S}).
DemoResult q2_simple_differential_demo(const ToyCipher& cipher, Block din, Block dout, double h_S);

}  // namespace qdl
