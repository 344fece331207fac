#include "qdl/quantum_sim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <unordered_set>

#include "qdl/error.hpp"

namespace qdl {

namespace {

[[noreturn]] void invalid(const std::string& msg) {
  throw Error(Errc::invalid_argument, msg);
}

int qubits_for(std::uint64_t N) {
  if (N < 1 || !std::has_single_bit(N)) invalid("N must be a power of two");
  const int q = std::countr_zero(N);
  if (q > max_qubits) throw Error(Errc::infeasible, "more than " + std::to_string(max_qubits) + " qubits");
  return q;
}

}  // namespace

StateVector StateVector::basis(int qubits, std::uint64_t index) {
  if (qubits < 0) invalid("negative qubit count");
  if (qubits > max_qubits) throw Error(Errc::infeasible, "more than " + std::to_string(max_qubits) + " qubits");
  std::vector<amplitude> amps(std::size_t{1} << qubits);
  if (index >= amps.size()) invalid("basis index out of range");
  amps[index] = 1.0;
  return StateVector(qubits, std::move(amps));
}

StateVector StateVector::uniform(int qubits) {
  auto s = basis(qubits, 0);
  const double a = 1.0 / std::sqrt(static_cast<double>(s.size()));
  std::fill(s.amps_.begin(), s.amps_.end(), amplitude(a, 0.0));
  return s;
}

double StateVector::norm_squared() const {
  double total = 0;
  for (const auto& a : amps_) total += std::norm(a);
  return total;
}

double StateVector::probability_of(const std::function<bool(std::uint64_t)>& pred) const {
  double total = 0;
  for (std::uint64_t i = 0; i < amps_.size(); ++i) {
    if (pred(i)) total += std::norm(amps_[i]);
  }
  return total;
}

std::uint64_t StateVector::most_likely() const {
  std::uint64_t best = 0;
  double p = -1;
  for (std::uint64_t i = 0; i < amps_.size(); ++i) {
    if (std::norm(amps_[i]) > p + 1e-15) {
      p = std::norm(amps_[i]);
      best = i;
    }
  }
  return best;
}

std::uint64_t StateVector::sample(CounterRng& rng) const {
  double u = rng.uniform01() * norm_squared();
  for (std::uint64_t i = 0; i < amps_.size(); ++i) {
    u -= std::norm(amps_[i]);
    if (u < 0) return i;
  }
  return amps_.size() - 1;
}

void StateVector::hadamard_all() {
  const double scale = 1.0 / std::sqrt(static_cast<double>(amps_.size()));
  for (std::size_t h = 1; h < amps_.size(); h <<= 1) {
    for (std::size_t i = 0; i < amps_.size(); i += 2 * h) {
      for (std::size_t j = i; j < i + h; ++j) {
        const amplitude a = amps_[j];
        const amplitude b = amps_[j + h];
        amps_[j] = a + b;
        amps_[j + h] = a - b;
      }
    }
  }
  for (auto& a : amps_) a *= scale;
}

void StateVector::reflect_zero() { amps_[0] = -amps_[0]; }

void StateVector::invert_about_mean() {
  amplitude mean = 0;
  for (const auto& a : amps_) mean += a;
  mean /= static_cast<double>(amps_.size());
  for (auto& a : amps_) a = 2.0 * mean - a;
}

void PredicateOracle::apply(StateVector& state) {
  ++queries_;
  auto& amps = state.amplitudes();
  for (std::uint64_t i = 0; i < amps.size(); ++i) {
    if (predicate_(i)) amps[i] = -amps[i];
  }
}

bool PredicateOracle::check(std::uint64_t x) {
  ++queries_;
  return predicate_(x);
}

std::uint64_t PredicateOracle::marked_count(std::uint64_t domain) const {
  std::uint64_t t = 0;
  for (std::uint64_t i = 0; i < domain; ++i) t += predicate_(i) ? 1 : 0;
  return t;
}

std::uint64_t grover_iterations(std::uint64_t N, std::uint64_t t) {
  if (t == 0 || t > N) invalid("marked-count hint must lie in [1, N]");
  return static_cast<std::uint64_t>(
      std::floor(std::numbers::pi / 4 * std::sqrt(static_cast<double>(N) / static_cast<double>(t))));
}

double grover_success_closed_form(std::uint64_t N, std::uint64_t t, std::uint64_t j) {
  const double theta = std::asin(std::sqrt(static_cast<double>(t) / static_cast<double>(N)));
  const double s = std::sin((2.0 * static_cast<double>(j) + 1.0) * theta);
  return s * s;
}

GroverResult grover_search(PredicateOracle& oracle, std::uint64_t N, std::uint64_t t_hint) {
  const int q = qubits_for(N);
  GroverResult res;
  res.iterations = grover_iterations(N, t_hint);
  const std::uint64_t start = oracle.queries();
  auto state = StateVector::uniform(q);
  for (std::uint64_t j = 0; j < res.iterations; ++j) {
    oracle.apply(state);
    state.invert_about_mean();
  }
  res.success_probability = state.probability_of(oracle.predicate());
  res.found = state.most_likely();
  res.marked = oracle.check(res.found);
  res.queries = oracle.queries() - start;
  return res;
}

GroverResult grover_search_unknown(PredicateOracle& oracle, std::uint64_t N, CounterRng& rng) {
  const int q = qubits_for(N);
  const double root = std::sqrt(static_cast<double>(N));
  const std::uint64_t cap = static_cast<std::uint64_t>(std::ceil(9 * root)) + 2;
  const std::uint64_t start = oracle.queries();
  GroverResult res;
  double m = 1.0;
  while (oracle.queries() - start < cap) {
    const std::uint64_t j = rng.below(static_cast<std::uint64_t>(std::max(1.0, std::floor(m))));
    auto state = StateVector::uniform(q);
    for (std::uint64_t i = 0; i < j; ++i) {
      oracle.apply(state);
      state.invert_about_mean();
    }
    res.iterations += j;
    res.success_probability = state.probability_of(oracle.predicate());
    res.found = state.sample(rng);
    res.marked = oracle.check(res.found);
    if (res.marked) break;
    m = std::min(m * 6.0 / 5.0, root);
  }
  res.queries = oracle.queries() - start;
  return res;
}

StatePrep uniform_prep(int qubits) {
  return {qubits, [](StateVector& s) { s.hadamard_all(); }, [](StateVector& s) { s.hadamard_all(); }};
}

AmplificationResult amplitude_amplify(const StatePrep& prep, PredicateOracle& good, double a_hint) {
  if (!(a_hint > 0) || a_hint > 1) invalid("a_hint must lie in (0, 1]");
  if (!prep.forward || !prep.inverse) invalid("state preparation needs forward and inverse");
  AmplificationResult res;
  res.rounds = static_cast<std::uint64_t>(std::floor(std::numbers::pi / 4 / std::sqrt(a_hint)));
  const std::uint64_t start = good.queries();
  auto state = StateVector::basis(prep.qubits, 0);
  prep.forward(state);
  ++res.prep_calls;
  for (std::uint64_t r = 0; r < res.rounds; ++r) {
    // -A S_0 A^{-1} S_good; the global sign is dropped.
    good.apply(state);
    prep.inverse(state);
    state.reflect_zero();
    prep.forward(state);
    res.prep_calls += 2;
  }
  res.success_probability = state.probability_of(good.predicate());
  res.outcome = state.most_likely();
  res.oracle_queries = good.queries() - start;
  return res;
}

double counting_bound(double p, std::uint64_t D) {
  if (D == 0) invalid("D must be positive");
  const double d = static_cast<double>(D);
  return 2 * std::numbers::pi * std::sqrt(p) / d + std::numbers::pi * std::numbers::pi / (d * d);
}

std::vector<double> counting_distribution(PredicateOracle& oracle, std::uint64_t N, std::uint64_t D) {
  const int q = qubits_for(N);
  if (D < 2) invalid("D must be >= 2");
  const std::uint64_t M = std::bit_ceil(D);
  if (static_cast<double>(M) * static_cast<double>(M) * static_cast<double>(N) > 0x1.0p34) {
    throw Error(Errc::infeasible, "phase-estimation simulation too large");
  }
  // Column c holds G^c |u>; the control register is uniform over c.
  std::vector<std::vector<std::complex<double>>> powers;
  powers.reserve(M);
  auto state = StateVector::uniform(q);
  powers.push_back(state.amplitudes());
  for (std::uint64_t c = 1; c < M; ++c) {
    oracle.apply(state);
    state.invert_about_mean();
    powers.push_back(state.amplitudes());
  }
  std::vector<std::complex<double>> twiddle(M);
  for (std::uint64_t j = 0; j < M; ++j) {
    twiddle[j] = std::polar(1.0, -2 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(M));
  }
  std::vector<double> dist(M, 0.0);
  const double scale = 1.0 / (static_cast<double>(M) * static_cast<double>(M));
  for (std::uint64_t i = 0; i < N; ++i) {
    for (std::uint64_t y = 0; y < M; ++y) {
      std::complex<double> acc = 0;
      for (std::uint64_t c = 0; c < M; ++c) acc += twiddle[(y * c) % M] * powers[c][i];
      dist[y] += std::norm(acc) * scale;
    }
  }
  return dist;
}

CountResult quantum_count(PredicateOracle& oracle, std::uint64_t N, std::uint64_t D, CounterRng& rng,
                          int repetitions) {
  if (repetitions < 1) invalid("need at least one repetition");
  CountResult res;
  res.register_size = std::bit_ceil(D);
  const std::uint64_t start = oracle.queries();
  std::vector<double> estimates;
  for (int r = 0; r < repetitions; ++r) {
    const auto dist = counting_distribution(oracle, N, D);
    double u = rng.uniform01();
    std::uint64_t y = dist.size() - 1;
    for (std::uint64_t i = 0; i < dist.size(); ++i) {
      u -= dist[i];
      if (u < 0) {
        y = i;
        break;
      }
    }
    res.outcomes.push_back(y);
    const double s = std::sin(std::numbers::pi * static_cast<double>(y) / static_cast<double>(res.register_size));
    estimates.push_back(s * s);
  }
  std::sort(estimates.begin(), estimates.end());
  res.estimate = estimates[(estimates.size() - 1) / 2];
  res.bound_at_estimate = counting_bound(res.estimate, D);
  res.queries = oracle.queries() - start;
  return res;
}

const char* to_string(WalkAlgorithm a) {
  return a == WalkAlgorithm::ambainis ? "ambainis" : "pair-search-promise";
}

QueryCostModel charge_pair_search(double n, double k) {
  if (!(n >= 1) || !std::isfinite(n)) invalid("n must be >= 1");
  if (!(k >= 0) || k > n * n) invalid("k must lie in [0, n^2]");
  QueryCostModel m;
  m.n = n;
  m.k = k;
  const double ln = std::log2(n);
  if (k == 0) {
    m.algorithm = WalkAlgorithm::ambainis;
    m.charged_cost = LogWork::bits(2.0 / 3.0 * ln);
    m.subset_size = LogWork::bits(ln);
    m.not_found = true;
    return m;
  }
  const double lk = std::log2(k);
  m.algorithm = WalkAlgorithm::pair_search_promise;
  m.charged_cost = LogWork::bits(2.0 / 3.0 * ln - lk / 3.0);
  m.subset_size = LogWork::bits(ln - lk / 2.0);
  return m;
}

double subset_hit_probability(std::uint64_t n, std::uint64_t k, std::uint64_t s) {
  if (2 * k > n) invalid("k disjoint pairs need 2k <= n");
  if (s > n) invalid("subset larger than the list");
  auto lchoose = [](double a, double b) {
    return std::lgamma(a + 1) - std::lgamma(b + 1) - std::lgamma(a - b + 1);
  };
  // Subsets that miss every pair take at most one member of each pair.
  const double total = lchoose(static_cast<double>(n), static_cast<double>(s));
  long double miss = 0;
  for (std::uint64_t a = 0; a <= std::min(k, s); ++a) {
    if (s - a > n - 2 * k) continue;
    const double l = lchoose(static_cast<double>(k), static_cast<double>(a)) + static_cast<double>(a) * std::log(2.0) +
                     lchoose(static_cast<double>(n - 2 * k), static_cast<double>(s - a)) - total;
    miss += std::exp(static_cast<long double>(l));
  }
  return static_cast<double>(1.0L - miss);
}

SubsetHitStats subset_hit_experiment(std::uint64_t n, std::uint64_t k, std::uint64_t trials,
                                     std::uint64_t seed) {
  if (k == 0 || 2 * k > n) invalid("need 1 <= k and 2k <= n");
  if (n > (std::uint64_t{1} << 24)) throw Error(Errc::infeasible, "list too large");
  SubsetHitStats st;
  st.trials = trials;
  st.subset_size = std::min<std::uint64_t>(
      n, static_cast<std::uint64_t>(std::ceil(static_cast<double>(n) / std::sqrt(static_cast<double>(k)))));
  st.exact = subset_hit_probability(n, k, st.subset_size);
  CounterRng rng(seed);
  std::vector<std::uint64_t> values(n);
  std::vector<std::uint64_t> order(n);
  std::unordered_set<std::uint64_t> seen;
  for (std::uint64_t t = 0; t < trials; ++t) {
    // Fresh instance: k disjoint pairs share a value, everything else is distinct.
    for (std::uint64_t i = 0; i < n; ++i) values[i] = order[i] = i;
    for (std::uint64_t i = 0; i < 2 * k; ++i) std::swap(order[i], order[i + rng.below(n - i)]);
    for (std::uint64_t p = 0; p < k; ++p) values[order[2 * p + 1]] = values[order[2 * p]];
    // Random subset by a partial shuffle, then a collision scan.
    for (std::uint64_t i = 0; i < n; ++i) order[i] = i;
    seen.clear();
    bool hit = false;
    for (std::uint64_t i = 0; i < st.subset_size; ++i) {
      std::swap(order[i], order[i + rng.below(n - i)]);
      if (!seen.insert(values[order[i]]).second) hit = true;
    }
    st.hits += hit ? 1 : 0;
  }
  st.frequency = trials ? static_cast<double>(st.hits) / static_cast<double>(trials) : 0.0;
  return st;
}

DemoResult q2_simple_differential_demo(const ToyCipher& cipher, Block din, Block dout, double h_S) {
  const int n = cipher.spec().block_n;
  if (n > 16) throw Error(Errc::infeasible, "statevector demo needs block_n <= 16");
  if (!(h_S >= 0)) invalid("h_S must be >= 0");
  const std::uint64_t N = std::uint64_t{1} << n;
  DemoResult res;
  PredicateOracle oracle([&cipher, din, dout](std::uint64_t x) {
    const Block b = static_cast<Block>(x);
    return cipher.encrypt(b ^ din) == (cipher.encrypt(b) ^ dout);
  });
  const double hint = std::round(std::exp2(n - h_S));
  res.t_hint = static_cast<std::uint64_t>(std::clamp(hint, 1.0, static_cast<double>(N)));
  res.marked = oracle.marked_count(N);
  res.grover = grover_search(oracle, N, res.t_hint);
  res.found = res.grover.marked;
  res.x = static_cast<Block>(res.grover.found);
  return res;
}

}  // namespace qdl
