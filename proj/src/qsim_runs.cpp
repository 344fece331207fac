#include "qdl/qsim_runs.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <unordered_set>

#include "qdl/cipher_io.hpp"
#include "qdl/error.hpp"
#include "qdl/quantum_sim.hpp"
#include "qdl/report.hpp"

namespace qdl {
namespace {

void check_domain(std::uint64_t N, std::uint64_t t) {
  if (N < 2 || !std::has_single_bit(N)) {
    throw Error(Errc::invalid_argument, "--n must be a power of two >= 2");
  }
  if (N > (std::uint64_t{1} << 24)) throw Error(Errc::infeasible, "--n above 2^24 qubit limit");
  if (t < 1 || t > N) throw Error(Errc::invalid_argument, "--marked must lie in [1, n]");
}

std::unordered_set<std::uint64_t> random_marked(std::uint64_t N, std::uint64_t t, CounterRng& rng) {
  std::unordered_set<std::uint64_t> marked;
  while (marked.size() < t) marked.insert(rng.below(N));
  return marked;
}

PredicateOracle set_oracle(const std::unordered_set<std::uint64_t>& marked) {
  return PredicateOracle([&marked](std::uint64_t x) { return marked.count(x) != 0; });
}

ordered_json bound(const std::string& label, bool holds) {
  ordered_json j;
  j["bound"] = label;
  j["holds"] = holds;
  return j;
}

void finish(QsimRun& run, const ordered_json& bounds) {
  run.bounds_hold = true;
  for (const auto& b : bounds) run.bounds_hold = run.bounds_hold && b.at("holds").get<bool>();
  run.report["bounds"] = bounds;
  run.report["bounds_hold"] = run.bounds_hold;
}

}  // namespace

QsimRun qsim_grover(std::uint64_t N, std::uint64_t t, std::uint64_t seed) {
  check_domain(N, t);
  CounterRng rng(seed);
  const auto marked = random_marked(N, t, rng);
  auto oracle = set_oracle(marked);
  const auto r = grover_search(oracle, N, t);
  const double closed = grover_success_closed_form(N, t, r.iterations);
  const auto expected_queries = static_cast<std::uint64_t>(
      std::floor(std::numbers::pi / 4 * std::sqrt(static_cast<double>(N) / static_cast<double>(t)))) + 1;

  QsimRun run;
  auto& rep = run.report;
  rep = report_header("qsim grover", {seed});
  rep["input"] = {{"n", N}, {"marked", t}};
  rep["iterations"] = r.iterations;
  rep["queries"] = r.queries;
  rep["expected_queries"] = expected_queries;
  rep["success_probability"] = r.success_probability;
  rep["closed_form"] = closed;
  rep["found"] = r.found;
  rep["found_marked"] = r.marked;
  ordered_json bounds = ordered_json::array();
  bounds.push_back(bound("|simulated - sin^2((2j+1)theta)| <= 1e-9",
                         std::abs(r.success_probability - closed) <= 1e-9));
  bounds.push_back(bound("queries == floor(pi/4 sqrt(N/t)) + 1", r.queries == expected_queries));
  finish(run, bounds);
  return run;
}

QsimRun qsim_count(std::uint64_t N, std::uint64_t t, std::uint64_t D, std::uint64_t trials,
                   std::uint64_t seed, int repetitions) {
  check_domain(N, t);
  if (D < 2) throw Error(Errc::invalid_argument, "--d must be >= 2");
  if (std::bit_ceil(D) * N > (std::uint64_t{1} << 24)) {
    throw Error(Errc::infeasible, "counting register plus search space above 2^24 amplitudes");
  }
  if (trials < 1) throw Error(Errc::invalid_argument, "--trials must be >= 1");
  if (repetitions < 1) throw Error(Errc::invalid_argument, "--repetitions must be >= 1");
  CounterRng rng(seed);
  const auto marked = random_marked(N, t, rng);
  auto oracle = set_oracle(marked);
  const double p = static_cast<double>(t) / static_cast<double>(N);
  const double err = counting_bound(p, D);

  // Exact mass of the outcomes inside the bound.
  const auto dist = counting_distribution(oracle, N, D);
  const double M = static_cast<double>(dist.size());
  double exact = 0.0;
  for (std::size_t y = 0; y < dist.size(); ++y) {
    const double s = std::sin(std::numbers::pi * static_cast<double>(y) / M);
    if (std::abs(s * s - p) <= err) exact += dist[y];
  }

  std::uint64_t within = 0;
  std::uint64_t queries = 0;
  ordered_json estimates = ordered_json::array();
  CounterRng trial_rng = rng.fork(1);
  for (std::uint64_t i = 0; i < trials; ++i) {
    const auto r = quantum_count(oracle, N, D, trial_rng, repetitions);
    queries = r.queries;
    if (std::abs(r.estimate - p) <= err) ++within;
    estimates.push_back(r.estimate);
  }
  const double fraction = static_cast<double>(within) / static_cast<double>(trials);

  QsimRun run;
  auto& rep = run.report;
  rep = report_header("qsim count", {seed});
  rep["input"] = {{"n", N}, {"marked", t}, {"d", D}, {"trials", trials}, {"repetitions", repetitions}};
  rep["p"] = p;
  rep["error_bound"] = err;
  rep["register_size"] = dist.size();
  rep["queries_per_trial"] = queries;
  rep["within_bound"] = within;
  rep["fraction_within"] = fraction;
  rep["single_run_probability_within"] = exact;
  rep["estimates"] = estimates;
  ordered_json bounds = ordered_json::array();
  bounds.push_back(bound("fraction within 2 pi sqrt(p)/D + pi^2/D^2 >= 0.81",
                         fraction >= counting_pass_fraction));
  finish(run, bounds);
  return run;
}

QsimRun qsim_aa(std::uint64_t N, std::uint64_t t, std::uint64_t seed) {
  check_domain(N, t);
  CounterRng rng(seed);
  const auto marked = random_marked(N, t, rng);
  auto oracle = set_oracle(marked);
  const double a = static_cast<double>(t) / static_cast<double>(N);
  const auto r = amplitude_amplify(uniform_prep(std::countr_zero(N)), oracle, a);
  const double theta = std::asin(std::sqrt(a));
  const double s = std::sin((2.0 * static_cast<double>(r.rounds) + 1.0) * theta);

  QsimRun run;
  auto& rep = run.report;
  rep = report_header("qsim aa", {seed});
  rep["input"] = {{"n", N}, {"marked", t}};
  rep["a"] = a;
  rep["rounds"] = r.rounds;
  rep["oracle_queries"] = r.oracle_queries;
  rep["prep_calls"] = r.prep_calls;
  rep["success_probability"] = r.success_probability;
  rep["closed_form"] = s * s;
  rep["outcome_marked"] = marked.count(r.outcome) != 0;
  ordered_json bounds = ordered_json::array();
  bounds.push_back(bound("|simulated - sin^2((2m+1)theta)| <= 1e-9",
                         std::abs(r.success_probability - s * s) <= 1e-9));
  bounds.push_back(bound("success >= max(a, 1 - a)", r.success_probability >= std::max(a, 1 - a) - 1e-12));
  bounds.push_back(bound("oracle queries == floor(pi/(4 sqrt(a)))", r.oracle_queries == r.rounds));
  finish(run, bounds);
  return run;
}

QsimRun qsim_pairs(std::uint64_t n, std::uint64_t k, std::uint64_t trials, std::uint64_t seed) {
  if (trials < 1) throw Error(Errc::invalid_argument, "--trials must be >= 1");
  const auto st = subset_hit_experiment(n, k, trials, seed);
  const auto cost = charge_pair_search(static_cast<double>(n), static_cast<double>(k));
  const double sigma = std::sqrt(st.exact * (1 - st.exact) / static_cast<double>(trials));

  QsimRun run;
  auto& rep = run.report;
  rep = report_header("qsim pairs", {seed});
  rep["input"] = {{"n", n}, {"k", k}, {"trials", trials}};
  rep["subset_size"] = st.subset_size;
  rep["hits"] = st.hits;
  rep["frequency"] = st.frequency;
  rep["exact"] = st.exact;
  rep["algorithm"] = to_string(cost.algorithm);
  rep["charged_queries_log2"] = to_json(cost.charged_cost);
  rep["subset_size_log2"] = to_json(cost.subset_size);
  ordered_json bounds = ordered_json::array();
  bounds.push_back(bound("|frequency - exact| <= 4 sigma + 1/trials",
                         std::abs(st.frequency - st.exact) <= 4 * sigma + 1.0 / static_cast<double>(trials)));
  bounds.push_back(bound("exact hit probability >= 1/2", st.exact >= 0.5));
  finish(run, bounds);
  return run;
}

QsimRun qsim_demo(const ToyCipherSpec& base, const DemoOptions& opt) {
  ToyCipherSpec spec = base;
  if (opt.rounds) spec.rounds = *opt.rounds;
  if (spec.rounds < 1) throw Error(Errc::infeasible, "demo needs at least one round");
  spec.validate();
  if (spec.block_n > 16) throw Error(Errc::infeasible, "statevector demo needs block_n <= 16");
  const Block din = opt.din.value_or(1);
  if (din == 0 || din > spec.block_mask()) throw Error(Errc::invalid_argument, "--din must be a nonzero block");
  if (opt.dout && *opt.dout > spec.block_mask()) throw Error(Errc::invalid_argument, "--dout exceeds the block");

  CounterRng key_rng = CounterRng(opt.seed).fork(1);
  RoundKeys keys;
  std::optional<std::uint64_t> master;
  if (spec.key_schedule == KeySchedule::xor_master) {
    master = key_rng.below(std::uint64_t{1} << spec.master_key_bits());
    keys = expand_master_key(spec, *master);
  } else {
    keys = random_round_keys(spec, key_rng);
  }
  const ToyCipher cipher(spec, keys);

  // Every plaintext under the oracle key: the differential's exact count.
  const std::uint64_t N = std::uint64_t{1} << spec.block_n;
  std::vector<std::uint64_t> counts(N, 0);
  for (std::uint64_t x = 0; x < N; ++x) {
    const auto b = static_cast<Block>(x);
    ++counts[cipher.encrypt(b) ^ cipher.encrypt(b ^ din)];
  }
  Block dout = 0;
  if (opt.dout) {
    dout = *opt.dout;
  } else {
    dout = 1;
    for (std::uint64_t d = 1; d < N; ++d) {
      if (counts[d] > counts[dout]) dout = static_cast<Block>(d);
    }
  }
  const std::uint64_t right = counts[dout];
  if (right == 0) throw Error(Errc::infeasible, "no right pair exists for this differential and key");
  const double h_S = static_cast<double>(spec.block_n) - std::log2(static_cast<double>(right));

  const auto r = q2_simple_differential_demo(cipher, din, dout, h_S);
  const double target = std::exp2(h_S / 2);
  const double it = static_cast<double>(r.grover.iterations);

  QsimRun run;
  auto& rep = run.report;
  rep = report_header("qsim demo", {opt.seed});
  rep["input"]["cipher"] = cipher_to_json(spec);
  if (master) rep["oracle_key"] = hex_string(*master, spec.master_key_bits());
  rep["din"] = hex_string(din, spec.block_n);
  rep["dout"] = hex_string(dout, spec.block_n);
  rep["right_plaintexts"] = right;
  rep["h_S"] = to_json(LogWork::bits(h_S));
  rep["t_hint"] = r.t_hint;
  rep["iterations"] = r.grover.iterations;
  rep["queries"] = r.grover.queries;
  rep["sqrt_target"] = target;
  rep["success_probability"] = r.grover.success_probability;
  rep["found"] = r.found;
  rep["x"] = hex_string(r.x, spec.block_n);
  ordered_json bounds = ordered_json::array();
  bounds.push_back(bound("verified right pair found", r.found));
  bounds.push_back(bound("iterations within a factor 2 of 2^{h_S/2}", it >= target / 2 && it <= target * 2));
  finish(run, bounds);
  return run;
}

}  // namespace qdl
