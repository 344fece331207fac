#include <cmath>
#include <cstdio>
#include <limits>

#include "qdl/attack_models.hpp"
#include "qdl/cipher_io.hpp"
#include "qdl/error.hpp"
#include "qdl/presets.hpp"
#include "qdl/report.hpp"

namespace qdl {
namespace {

[[noreturn]] void infeasible(const std::string& msg) { throw Error(Errc::infeasible, msg); }

double log2_count(std::uint64_t v) {
  return v == 0 ? -std::numeric_limits<double>::infinity() : std::log2(static_cast<double>(v));
}

bool is_linear(ToyAttackKind k) {
  return k == ToyAttackKind::matsui1 || k == ToyAttackKind::matsui2;
}

bool is_truncated(ToyAttackKind k) {
  return k == ToyAttackKind::truncated_distinguisher || k == ToyAttackKind::truncated_attack;
}

/// Table of predicted terms against ledger counters.
class Comparison {
 public:
  void add(const std::string& term, const Complexity& c, const std::string& counter,
           std::uint64_t measured) {
    const Term* t = c.term(term);
    if (!t) throw Error(Errc::not_found, "no predicted term " + term);
    add(term, t->value.bits(), counter, measured);
  }
  void add(const std::string& term, double predicted, const std::string& counter,
           std::uint64_t measured) {
    const double m = log2_count(measured);
    ordered_json row;
    row["term"] = term;
    row["counter"] = counter;
    row["predicted_log2"] = fixed2(predicted);
    row["measured"] = measured;
    row["measured_log2"] = measured ? ordered_json(fixed2(m)) : ordered_json(nullptr);
    const bool within = measured > 0 && std::abs(m - predicted) <= 3.0;
    row["within_factor_8"] = within;
    all_within_ = all_within_ && within;
    rows_.push_back(std::move(row));
  }
  const ordered_json& rows() const { return rows_; }
  bool all_within() const { return all_within_; }

 private:
  ordered_json rows_ = ordered_json::array();
  bool all_within_ = true;
};

int distinguisher_rounds(const ToyCipherSpec& spec, const ToyAttackPreset& p) {
  return spec.rounds - p.r_out;
}

std::vector<RoundKeys> measurement_keys(const ToyCipherSpec& spec, const ToyAttackPreset& p,
                                        std::uint64_t seed) {
  CounterRng rng = CounterRng(seed).fork(3);
  std::vector<RoundKeys> keys;
  for (int i = 0; i < p.measure_keys; ++i) keys.push_back(random_round_keys(spec, rng));
  return keys;
}

ordered_json preset_json(const ToyAttackPreset& p) {
  ordered_json j;
  j["name"] = p.name;
  j["kind"] = to_string(p.kind);
  j["r_out"] = p.r_out;
  if (is_linear(p.kind)) {
    j["masks"] = ordered_json::array();
    for (Block m : p.masks) j["masks"].push_back(hex_string(m, 1));
  } else if (is_truncated(p.kind)) {
    j["d_in"] = ordered_json::array();
    for (Block g : p.d_in) j["d_in"].push_back(hex_string(g, 1));
    j["d_out"] = ordered_json::array();
    for (Block g : p.d_out) j["d_out"].push_back(hex_string(g, 1));
  } else {
    j["din"] = hex_string(p.din, 1);
    j["dout"] = hex_string(p.dout, 1);
  }
  if (p.extra_log2 != 0.0) j["extra_log2"] = p.extra_log2;
  j["measure_keys"] = p.measure_keys;
  return j;
}

ordered_json measurement_json(const char* quantity, const DifferentialEstimate& e, int rounds) {
  ordered_json j;
  j["quantity"] = quantity;
  j["rounds"] = rounds;
  j["hits"] = e.hits;
  j["trials"] = e.trials;
  j["value"] = fixed2(-e.log2_p);
  j["raw"] = -e.log2_p;
  return j;
}

/// -log2 p of the measured differential. Refuses estimates that are not
/// clearly (3 standard errors) above what a random permutation gives.
double measured_h(const DifferentialEstimate& e, const char* what, int n, int out_dim) {
  if (e.lower_bound_only) {
    infeasible(std::string(what) + " never holds under the measurement keys; the preset cannot fire");
  }
  const double random_p = (std::exp2(out_dim) - 1) / (std::exp2(n) - 1);
  if (e.p - 3 * e.stderr_p <= random_p) {
    infeasible(std::string(what) + " has probability 2^-" + fixed2(-e.log2_p) +
               ", not distinguishable from random (2^-" + fixed2(-std::log2(random_p)) +
               ") at this round count");
  }
  return -e.log2_p;
}

void guard(double work_log2, const char* what, bool force) {
  if (!force && work_log2 > toy_work_limit_log2) {
    infeasible(std::string(what) + " estimated at 2^" + fixed2(work_log2) +
               " exceeds the 2^30 guard; pass --force to run anyway");
  }
}

}  // namespace

const char* to_string(ToyAttackKind kind) {
  switch (kind) {
    case ToyAttackKind::simple_distinguisher: return "simple-distinguisher";
    case ToyAttackKind::last_rounds: return "last-rounds";
    case ToyAttackKind::truncated_distinguisher: return "truncated-distinguisher";
    case ToyAttackKind::truncated_attack: return "truncated-attack";
    case ToyAttackKind::matsui1: return "matsui1";
    case ToyAttackKind::matsui2: return "matsui2";
  }
  return "unknown";
}

const std::vector<ToyAttackPreset>& toy_attack_presets() {
  static const std::vector<ToyAttackPreset> presets = [] {
    std::vector<ToyAttackPreset> v;
    ToyAttackPreset p;

    p = {};
    p.name = "toy12-simple-dist";
    p.cipher = "toy12";
    p.block_n = 12;
    p.rounds = 3;
    p.kind = ToyAttackKind::simple_distinguisher;
    p.description = "simple differential distinguisher, 0x001 -> 0x001, budget 2^{h_S+2} pairs";
    p.din = 0x001;
    p.dout = 0x001;
    p.extra_log2 = 2;
    v.push_back(p);

    p = {};
    p.name = "toy12-last-rounds";
    p.cipher = "toy12";
    p.block_n = 12;
    p.rounds = 5;
    p.kind = ToyAttackKind::last_rounds;
    p.description = "4-round differential 0x002 -> 0x888 plus one partially decrypted round";
    p.r_out = 1;
    p.din = 0x002;
    p.dout = 0x888;
    p.measure_keys = 64;
    v.push_back(p);

    p = {};
    p.name = "toy12-trunc-dist";
    p.cipher = "toy12";
    p.block_n = 12;
    p.rounds = 5;
    p.kind = ToyAttackKind::truncated_distinguisher;
    p.description = "truncated distinguisher, top S-box to top S-box, budget 2^{h_T+3} pairs";
    p.d_in = {0x200, 0x400, 0x800};
    p.d_out = {0x200, 0x400, 0x800};
    p.extra_log2 = 3;
    v.push_back(p);

    p = {};
    p.name = "toy16-trunc-attack";
    p.cipher = "toy16";
    p.block_n = 16;
    p.rounds = 4;
    p.kind = ToyAttackKind::truncated_attack;
    p.description = "3-round truncated differential, S-box 0 -> 2-dim subspace of S-box 2, one extra round";
    p.r_out = 1;
    p.d_in = {0x1, 0x2, 0x4, 0x8};
    p.d_out = {0x100, 0xc00};
    p.measure_keys = 8;
    v.push_back(p);

    p = {};
    p.name = "toy12-matsui1";
    p.cipher = "toy12";
    p.block_n = 12;
    p.rounds = 4;
    p.kind = ToyAttackKind::matsui1;
    p.description = "Matsui algorithm 1 with the 4-round approximation 0x001 -> 0x001";
    p.masks = {0x001, 0x001, 0x001, 0x001, 0x001};
    v.push_back(p);

    p = {};
    p.name = "toy16-matsui2";
    p.cipher = "toy16";
    p.block_n = 16;
    p.rounds = 3;
    p.kind = ToyAttackKind::matsui2;
    p.description = "Matsui algorithm 2, 2-round approximation 0x0003 -> 0x0999 plus one round";
    p.r_out = 1;
    p.masks = {0x0003, 0x1001, 0x0999};
    v.push_back(p);
    return v;
  }();
  return presets;
}

const ToyAttackPreset& find_toy_preset(const std::string& name) {
  for (const auto& p : toy_attack_presets()) {
    if (p.name == name) return p;
  }
  std::string names;
  for (const auto& p : toy_attack_presets()) names += (names.empty() ? "" : ", ") + p.name;
  throw Error(Errc::invalid_argument, "unknown attack preset '" + name + "' (" + names + ")");
}

double toy_measurement_work_log2(const ToyCipherSpec& spec, const ToyAttackPreset& p) {
  const double n = spec.block_n;
  if (is_linear(p.kind)) return n;  // exact bias under the oracle key
  const double pairs_per_x = is_truncated(p.kind) ? std::exp2(p.d_in.size()) : 2.0;
  return std::log2(static_cast<double>(p.measure_keys)) + n + std::log2(pairs_per_x);
}

ToyRun run_toy_preset(const ToyCipherSpec& base, const ToyAttackPreset& p,
                      const ToyRunOptions& opt) {
  if (base.block_n != p.block_n) {
    throw Error(Errc::invalid_argument, "preset " + p.name + " needs a " +
                                            std::to_string(p.block_n) + "-bit block, spec has " +
                                            std::to_string(base.block_n));
  }
  ToyCipherSpec spec = base;
  std::string rounds_note;
  if (opt.rounds) {
    spec.rounds = *opt.rounds;
  } else if (spec.rounds != p.rounds) {
    spec.rounds = p.rounds;
    rounds_note = "spec has " + std::to_string(base.rounds) + " rounds; the preset runs " +
                  std::to_string(p.rounds) + " (pass --rounds to override)";
  }
  if (spec.rounds < p.r_out + 1) {
    infeasible("preset " + p.name + " needs at least " + std::to_string(p.r_out + 1) +
               " rounds, got " + std::to_string(spec.rounds));
  }
  if (is_linear(p.kind) && static_cast<int>(p.masks.size()) - 1 + p.r_out != spec.rounds) {
    infeasible("preset " + p.name + " carries a " + std::to_string(p.masks.size() - 1) +
               "-round approximation and needs exactly " +
               std::to_string(p.masks.size() - 1 + p.r_out) + " rounds");
  }
  spec.validate();
  if (spec.key_schedule != KeySchedule::xor_master || spec.master_key_bits() > 24) {
    infeasible("toy attacks need an xor_master key of at most 24 bits");
  }
  const int k = spec.master_key_bits();
  const int t = distinguisher_rounds(spec, p);
  guard(toy_measurement_work_log2(spec, p), "measurement", opt.force);

  ToyRun run;
  auto& rep = run.report;
  rep = report_header("attack", {opt.seed});
  rep["input"]["cipher"] = cipher_to_json(spec);
  rep["input"]["preset"] = preset_json(p);
  if (!rounds_note.empty()) rep["notes"].push_back(rounds_note);
  if (spec.name != p.cipher) {
    rep["notes"].push_back("preset was tuned for " + p.cipher + ", spec is " + spec.name);
  }

  CounterRng root(opt.seed);
  CounterRng key_rng = root.fork(1);
  const std::uint64_t key = key_rng.below(std::uint64_t{1} << k);
  CounterRng rng = root.fork(2);
  CipherOracle oracle(ToyCipher(spec, expand_master_key(spec, key)));
  rep["oracle_key"] = hex_string(key, k);

  Comparison cmp;
  ordered_json result;
  WorkLedger ledger;
  const auto cls = AdversaryModel::classical;

  switch (p.kind) {
    case ToyAttackKind::simple_distinguisher: {
      const auto est =
          empirical_diff_probability(spec, measurement_keys(spec, p, opt.seed), p.din, p.dout, t);
      const double h = measured_h(est, "the differential", spec.block_n, 1);
      rep["measurement"] = measurement_json("h_S", est, t);
      AttackParams ap;
      ap.n = spec.block_n;
      ap.h_S = h;
      const auto pred = simple_diff_distinguisher(ap, cls);
      guard(pred.time.bits() + p.extra_log2, "attack", opt.force);
      const auto budget = static_cast<std::uint64_t>(std::ceil(std::exp2(h + p.extra_log2)));
      const auto r = run_simple_distinguisher(oracle, p.din, p.dout, budget, rng);
      ledger = r.ledger;
      result["verdict"] = to_string(r.verdict);
      result["budget_pairs"] = budget;
      result["pairs_used"] = r.pairs_used;
      if (r.right_pair) result["right_pair"] = hex_string(*r.right_pair, spec.block_n);
      run.success = r.verdict == DistinguisherVerdict::concrete;
      cmp.add("data-collection", pred, "encryption_queries", ledger.encryption_queries);
      break;
    }
    case ToyAttackKind::last_rounds: {
      const auto est =
          empirical_diff_probability(spec, measurement_keys(spec, p, opt.seed), p.din, p.dout, t);
      const double h = measured_h(est, "the differential", spec.block_n, 1);
      rep["measurement"] = measurement_json("h_S", est, t);
      const LastRoundsSetup setup{spec, p.r_out, p.din, p.dout, h, 3};
      const auto pred = simple_diff_last_rounds(predicted_params(setup), cls);
      guard(pred.time.bits(), "attack", opt.force);
      const auto r = run_last_rounds_attack(oracle, setup, rng);
      ledger = r.ledger;
      result["recovered_key"] = hex_string(r.key, k);
      result["attempts"] = r.attempts;
      result["pairs_used"] = r.pairs_used;
      result["survivors"] = r.survivors;
      result["candidates"] = r.candidates;
      result["Delta_fin"] = r.geometry.log2_D_fin;
      result["k_out"] = r.geometry.k_out;
      result["h_out"] = fixed2(r.geometry.h_out);
      run.success = r.key == key;
      cmp.add("data-collection", pred, "encryption_queries", ledger.encryption_queries);
      cmp.add("key-generation", pred, "partial_decryptions", ledger.partial_decryptions);
      cmp.add("key-search", pred, "key_trials", ledger.key_trials);
      break;
    }
    case ToyAttackKind::truncated_distinguisher: {
      const Subspace d_in(spec.block_n, p.d_in), d_out(spec.block_n, p.d_out);
      const auto est =
          empirical_truncated_probability(spec, measurement_keys(spec, p, opt.seed), d_in, d_out, t);
      const double h = measured_h(est, "the truncated differential", spec.block_n, d_out.dim());
      rep["measurement"] = measurement_json("h_T", est, t);
      const double log2_pairs = h + p.extra_log2;
      AttackParams ap;
      ap.n = spec.block_n;
      ap.h_T = log2_pairs;  // the formula's pair target is the budget
      ap.Delta_in = d_in.dim();
      ap.Delta_out = d_out.dim();
      ap.allow_weak_truncated = true;
      const auto pred = truncated_distinguisher(ap, cls);
      guard(pred.time.bits(), "attack", opt.force);
      const auto r = run_truncated_distinguisher(oracle, d_in, d_out, log2_pairs, rng);
      ledger = r.ledger;
      result["verdict"] = to_string(r.verdict);
      result["structures"] = r.structures;
      result["pairs"] = r.pairs;
      result["observed"] = r.observed;
      result["expected_random"] = r.expected_random;
      result["expected_cipher"] = static_cast<double>(r.pairs) * est.p;
      run.success = r.verdict == DistinguisherVerdict::concrete;
      cmp.add("data-collection", pred, "encryption_queries", ledger.encryption_queries);
      break;
    }
    case ToyAttackKind::truncated_attack: {
      const Subspace d_in(spec.block_n, p.d_in), d_out(spec.block_n, p.d_out);
      const auto est =
          empirical_truncated_probability(spec, measurement_keys(spec, p, opt.seed), d_in, d_out, t);
      const double h = measured_h(est, "the truncated differential", spec.block_n, d_out.dim());
      rep["measurement"] = measurement_json("h_T", est, t);
      const TruncatedSetup setup{spec, p.r_out, d_in, d_out, h, 3};
      const auto pred = truncated_last_rounds(predicted_params(setup), cls);
      guard(pred.time.bits(), "attack", opt.force);
      const auto r = run_truncated_attack(oracle, setup, rng);
      ledger = r.ledger;
      result["recovered_key"] = hex_string(r.key, k);
      result["attempts"] = r.attempts;
      result["pairs_used"] = r.pairs_used;
      result["survivors"] = r.survivors;
      result["candidates"] = r.candidates;
      result["Delta_fin"] = r.geometry.log2_D_fin;
      result["k_out"] = r.geometry.k_out;
      result["h_out"] = fixed2(r.geometry.h_out);
      run.success = r.key == key;
      cmp.add("data-collection", pred, "encryption_queries", ledger.encryption_queries);
      cmp.add("key-generation", pred, "partial_decryptions", ledger.partial_decryptions);
      cmp.add("key-search", pred, "key_trials", ledger.key_trials);
      break;
    }
    case ToyAttackKind::matsui1: {
      const Characteristic ch{CharacteristicKind::linear, p.masks, 0.0};
      const auto approx = approximation_from(spec, ch);
      const double bias = exact_linear_bias(oracle.cipher(), approx.alpha, approx.beta, t);
      ordered_json m;
      m["quantity"] = "epsilon_log2";
      m["piling_up"] = fixed2(approx.bias_log2);
      m["exact_under_oracle_key"] = bias == 0 ? ordered_json(nullptr) : ordered_json(fixed2(std::log2(std::abs(bias))));
      rep["measurement"] = m;
      const std::uint64_t texts = matsui_budget(approx.bias_log2);
      // The formula's 1/eps^2 with the budget constant A folded in.
      const double eps_a = approx.bias_log2 - 0.5 * std::log2(default_matsui_A);
      const auto pred = matsui1(eps_a, 1, k, cls);
      guard(pred.time.bits(), "attack", opt.force);
      const auto r = matsui_alg1(oracle, {approx}, texts, rng, &spec, true);
      ledger = r.ledger;
      result["texts"] = texts;
      result["A"] = default_matsui_A;
      result["parity"] = r.parities.front();
      result["true_parity"] = std::popcount(key & approx.key_mask) & 1;
      if (r.key) result["recovered_key"] = hex_string(*r.key, k);
      run.success = r.key && *r.key == key;
      cmp.add("parity-recovery", pred, "encryption_queries", ledger.encryption_queries);
      cmp.add("key-search", pred, "key_trials", ledger.key_trials);
      break;
    }
    case ToyAttackKind::matsui2: {
      const Characteristic ch{CharacteristicKind::linear, p.masks, 0.0};
      const auto approx = approximation_from(spec, ch);
      ordered_json m;
      m["quantity"] = "epsilon_log2";
      m["piling_up"] = fixed2(approx.bias_log2);
      rep["measurement"] = m;
      const Matsui2Setup setup{spec, p.r_out, approx.alpha, approx.beta, approx.chi0};
      const std::uint64_t texts = matsui_budget(approx.bias_log2);
      const double eps_a = approx.bias_log2 - 0.5 * std::log2(default_matsui_A);
      const auto r = matsui_alg2(oracle, setup, texts, rng);
      const auto pred = matsui2(eps_a, r.k_out, k, cls);
      ledger = r.ledger;
      std::uint64_t true_partial = 0;
      for (std::size_t i = 0; i < r.master_bits.size(); ++i) {
        true_partial |= ((key >> r.master_bits[i]) & 1u) << i;
      }
      result["texts"] = texts;
      result["A"] = default_matsui_A;
      result["k_out"] = r.k_out;
      result["partial_key"] = hex_string(r.partial_key, r.k_out);
      result["true_partial_key"] = hex_string(true_partial, r.k_out);
      result["tie"] = r.tie;
      if (r.key) result["recovered_key"] = hex_string(*r.key, k);
      run.success = r.key && *r.key == key;
      cmp.add("data", pred.data.bits(), "encryption_queries", ledger.encryption_queries);
      cmp.add("counter-update", pred, "partial_decryptions", ledger.partial_decryptions);
      cmp.add("key-search", pred, "key_trials", ledger.key_trials);
      break;
    }
  }

  rep["result"] = std::move(result);
  rep["ledger"] = to_json(ledger);
  rep["comparison"] = cmp.rows();
  rep["within_factor_8"] = cmp.all_within();
  rep["success"] = run.success;
  return run;
}

}  // namespace qdl
