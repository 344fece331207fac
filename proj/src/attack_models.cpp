#include "qdl/attack_models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qdl/error.hpp"

namespace qdl {

namespace {

LogWork bits(double v) { return LogWork::bits(v); }

Complexity finish(std::vector<Term> terms, LogWork data) {
  Complexity c;
  std::vector<LogWork> values;
  values.reserve(terms.size());
  for (const auto& t : terms) values.push_back(t.value);
  c.time = log2_sum(values);
  c.data = std::min(data, c.time);
  c.terms = std::move(terms);
  return c;
}

// Quantum partial-key generation. A quantum adversary can always fall back to
// the classical procedure, so the bound is capped at log2_C_kout.
Term quantum_key_generation(const AttackParams& p, double filtered_log2,
                            std::vector<std::string>& notes) {
  const LogWork bound = c_kout_quantum(*p.k_out, *p.h_out);
  const LogWork classical = bits(*p.log2_C_kout);
  LogWork cost = bound;
  if (classical < bound) {
    cost = classical;
    notes.push_back("quantum partial-key cost capped at the classical C_kout");
  }
  return Term{"key-generation", cost.shifted(filtered_log2), cost == bound};
}

void check_truncated_validity(const AttackParams& p, Complexity& c) {
  if (!p.Delta_out) {
    c.notes.push_back("distinguisher validity not checked (Delta_out absent)");
    return;
  }
  const double limit = *p.n - *p.Delta_out - 4.0;
  if (*p.h_T > limit) {
    if (!p.allow_weak_truncated) {
      throw Error(Errc::distinguisher_invalid,
                  "h_T exceeds n - Delta_out - 4; the truncated distinguisher "
                  "does not separate from a random permutation");
    }
    c.notes.push_back("weak truncated distinguisher accepted by override");
  }
}

double truncated_data_classical(const AttackParams& p) {
  return std::max((*p.h_T + 1.0) / 2.0, *p.h_T - *p.Delta_in + 1.0);
}

}  // namespace

const Term* Complexity::term(const std::string& label) const {
  for (const auto& t : terms) {
    if (t.label == label) return &t;
  }
  return nullptr;
}

const Term* Complexity::detail(const std::string& label) const {
  for (const auto& t : details) {
    if (t.label == label) return &t;
  }
  return nullptr;
}

const char* to_string(AttackKind kind) {
  switch (kind) {
    case AttackKind::simple_diff_dist: return "simple-dist";
    case AttackKind::simple_diff_last_rounds: return "simple-attack";
    case AttackKind::trunc_diff_dist: return "trunc-dist";
    case AttackKind::trunc_diff_last_rounds: return "trunc-attack";
    case AttackKind::bias_counting_dist: return "bias-counting";
    case AttackKind::linear_dist: return "linear-dist";
    case AttackKind::matsui1: return "matsui1";
    case AttackKind::matsui2: return "matsui2";
  }
  return "unknown";
}

const std::vector<AttackKind>& all_attack_kinds() {
  static const std::vector<AttackKind> kinds = {
      AttackKind::simple_diff_dist,   AttackKind::simple_diff_last_rounds,
      AttackKind::trunc_diff_dist,    AttackKind::trunc_diff_last_rounds,
      AttackKind::bias_counting_dist, AttackKind::linear_dist,
      AttackKind::matsui1,            AttackKind::matsui2};
  return kinds;
}

AttackKind parse_attack_kind(const std::string& text) {
  for (auto kind : all_attack_kinds()) {
    if (text == to_string(kind)) return kind;
  }
  throw Error(Errc::invalid_argument, "unknown attack kind '" + text + "'");
}

Complexity simple_diff_distinguisher(const AttackParams& p, AdversaryModel m) {
  p.require({"n", "h_S"});
  if (*p.h_S >= *p.n) {
    throw Error(Errc::characteristic_unusable, "h_S must be below n");
  }
  const double e = m == AdversaryModel::q2 ? *p.h_S / 2.0 + 1.0 : *p.h_S + 1.0;
  return finish({{"data-collection", bits(e)}}, bits(e));
}

LogWork c_kout_quantum(double k_out, double h_out) {
  if (k_out < 0 || h_out < 0) {
    throw Error(Errc::invalid_argument, "k_out and h_out must be >= 0");
  }
  if (k_out < h_out) return bits(k_out / 2.0);
  return bits(1.5 * k_out - h_out);
}

Complexity simple_diff_last_rounds(const AttackParams& p, AdversaryModel m) {
  p.require({"n", "k", "h_S", "Delta_fin", "h_out", "k_out", "log2_C_kout"});
  if (*p.h_S >= *p.n) {
    throw Error(Errc::characteristic_unusable, "h_S must be below n");
  }
  const double filtered = *p.h_S + *p.Delta_fin - *p.n;
  const double search = *p.k - *p.h_out;
  std::vector<std::string> notes;
  if (filtered < 0) {
    notes.push_back("degenerate: expected filtered list holds fewer than one pair");
  }
  std::vector<Term> terms;
  LogWork data;
  switch (m) {
    case AdversaryModel::classical:
      data = bits(*p.h_S + 1.0);
      terms = {{"data-collection", data},
               {"key-generation", bits(filtered + *p.log2_C_kout)},
               {"key-search", bits(filtered + search)}};
      break;
    case AdversaryModel::q1:
    case AdversaryModel::q2:
      data = bits(m == AdversaryModel::q1 ? *p.h_S + 1.0 : *p.h_S / 2.0 + 1.0);
      terms = {{"data-collection", data},
               quantum_key_generation(p, filtered / 2.0, notes),
               {"key-search", bits(filtered / 2.0 + search / 2.0)}};
      break;
  }
  auto c = finish(std::move(terms), data);
  c.notes = std::move(notes);
  return c;
}

Complexity truncated_distinguisher(const AttackParams& p, AdversaryModel m) {
  p.require({"n", "h_T", "Delta_in"});
  Complexity probe;
  check_truncated_validity(p, probe);
  double e;
  if (m == AdversaryModel::q2) {
    e = std::max((*p.h_T + 1.0) / 3.0, (*p.h_T + 1.0) / 2.0 - *p.Delta_in / 3.0);
  } else {
    e = truncated_data_classical(p);
  }
  auto c = finish({{"data-collection", bits(e)}}, bits(e));
  c.notes = std::move(probe.notes);
  return c;
}

Complexity truncated_last_rounds(const AttackParams& p, AdversaryModel m) {
  p.require({"n", "k", "h_T", "Delta_in", "Delta_fin", "h_out", "k_out",
             "log2_C_kout"});
  Complexity probe;
  check_truncated_validity(p, probe);
  auto& notes = probe.notes;

  const double n = *p.n;
  const double h_T = *p.h_T;
  const double d_in = *p.Delta_in;
  const double d_fin = *p.Delta_fin;
  const double filtered = h_T + d_fin - n;
  const double search = *p.k - *p.h_out;
  std::vector<Term> terms;
  std::vector<Term> details;
  LogWork data;

  if (m != AdversaryModel::q2) {
    data = bits(truncated_data_classical(p));
    if (m == AdversaryModel::classical) {
      terms = {{"data-collection", data},
               {"key-generation", bits(filtered + *p.log2_C_kout)},
               {"key-search", bits(filtered + search)}};
    } else {
      terms = {{"data-collection", data},
               quantum_key_generation(p, filtered / 2.0, notes),
               {"key-search", bits(filtered / 2.0 + search / 2.0)}};
    }
  } else {
    const double per_structure = 2.0 * d_in - 1.0 - n + d_fin;
    bool degenerate = per_structure < 0;
    const bool pairs_only = p.q2_branch == Q2TruncatedBranch::filtered_pairs;
    if (p.q2_branch == Q2TruncatedBranch::structured || pairs_only) degenerate = false;
    if (p.q2_branch == Q2TruncatedBranch::degenerate) degenerate = true;

    double first;
    double multiplier;
    if (degenerate) {
      first = (h_T + 1.0) / 2.0 - d_in / 3.0;
      multiplier = (h_T + 1.0) / 2.0 - d_in;
    } else {
      first = (h_T + 1.0) / 2.0 +
              std::max(-d_in / 3.0, -(n + 1.0 - d_fin) / 6.0);
      multiplier = pairs_only ? filtered / 2.0
                              : std::max(filtered / 2.0, (h_T + 1.0) / 2.0 - d_in);
    }
    if (p.q2_branch != Q2TruncatedBranch::automatic &&
        degenerate != (per_structure < 0)) {
      notes.push_back(std::string("q2 branch forced to ") + to_string(p.q2_branch));
    }
    details.push_back({degenerate ? "branch-degenerate" : pairs_only ? "branch-filtered-pairs" : "branch-structured",
                       bits(per_structure)});
    data = bits(first);
    terms = {{"pair-search", data},
             quantum_key_generation(p, multiplier, notes),
             {"key-search", bits(multiplier + search / 2.0)}};
  }
  auto c = finish(std::move(terms), data);
  c.details = std::move(details);
  c.notes = std::move(notes);
  return c;
}

Complexity truncated_last_rounds_q1_weighted(const AttackParams& p,
                                             Fraction key_generation,
                                             Fraction key_search) {
  auto base = truncated_last_rounds(p, AdversaryModel::q1);
  std::vector<Term> terms = base.terms;
  terms[1].value = log2_scaled(terms[1].value, key_generation.numerator,
                               key_generation.denominator);
  terms[2].value = log2_scaled(terms[2].value, key_search.numerator,
                               key_search.denominator);
  auto c = finish(std::move(terms), base.data);
  c.notes = std::move(base.notes);
  return c;
}

Complexity bias_counting_distinguisher(double p0_log2, double delta_log2,
                                       LogWork unit_cost, AdversaryModel m) {
  if (!(p0_log2 <= 0.0) || !(delta_log2 < p0_log2)) {
    throw Error(Errc::invalid_bias, "bias counting requires 0 < delta < p0 <= 1");
  }
  double samples;
  if (m == AdversaryModel::q2) {
    samples = std::log2(4.0 * std::numbers::pi) + p0_log2 / 2.0 - delta_log2;
  } else {
    samples = 1.0 + p0_log2 - 2.0 * delta_log2;
  }
  const LogWork total = unit_cost * bits(samples);
  auto c = finish({{"sample-collection", total}}, total);
  c.details = {{"samples", bits(samples)}, {"unit-cost", unit_cost}};
  return c;
}

Complexity bias_counting_distinguisher(const AttackParams& p, AdversaryModel m) {
  p.require({"n", "Delta_in", "Delta_out", "h_T_path"});
  const double pairs = 2.0 * *p.Delta_in - 1.0;
  const double p0 = pairs + *p.Delta_out - *p.n;
  const double delta = pairs - *p.h_T_path;
  const double unit = m == AdversaryModel::q2 ? 2.0 * *p.Delta_in / 3.0 : *p.Delta_in;
  return bias_counting_distinguisher(p0, delta, bits(unit), m);
}

Complexity linear_distinguisher(double epsilon_log2, AdversaryModel m,
                                std::optional<double> block_bits) {
  if (!std::isfinite(epsilon_log2) || epsilon_log2 > 0) {
    throw Error(Errc::invalid_argument, "epsilon must lie in (0, 1]");
  }
  const double inv = -epsilon_log2;
  const double e = m == AdversaryModel::q2 ? inv : 2.0 * inv;
  auto c = finish({{"data-collection", bits(e)}}, bits(e));
  if (block_bits && inv >= *block_bits / 2.0) {
    c.notes.push_back("epsilon is not much larger than 2^{-n/2}");
  }
  return c;
}

Complexity matsui1(double epsilon_log2, int ell, double key_bits,
                   AdversaryModel m) {
  if (!std::isfinite(epsilon_log2) || epsilon_log2 > 0) {
    throw Error(Errc::invalid_argument, "epsilon must lie in (0, 1]");
  }
  if (ell < 1 || ell > key_bits) {
    throw Error(Errc::invalid_argument, "matsui1 needs 1 <= ell <= k");
  }
  const double inv = -epsilon_log2;
  const double log_ell = std::log2(static_cast<double>(ell));
  const double rest = key_bits - ell;
  std::vector<Term> terms;
  LogWork data;
  std::vector<std::string> notes;
  switch (m) {
    case AdversaryModel::classical:
      data = bits(2.0 * inv);
      terms = {{"parity-recovery", bits(log_ell + 2.0 * inv)},
               {"key-search", bits(rest)}};
      break;
    case AdversaryModel::q1:
      data = bits(2.0 * inv);
      terms = {{"parity-recovery", bits(log_ell + 2.0 * inv)},
               {"key-search", bits(rest / 2.0)}};
      notes.push_back("q1 data: the classical sample is reused for every approximation");
      break;
    case AdversaryModel::q2:
      data = bits(log_ell + inv);
      terms = {{"parity-recovery", data}, {"key-search", bits(rest / 2.0)}};
      notes.push_back("modeling assumption: q2 data ell/epsilon, no reuse across approximations");
      break;
  }
  auto c = finish(std::move(terms), data);
  c.notes = std::move(notes);
  return c;
}

Complexity matsui2(double epsilon_log2, double k_out, double key_bits,
                   AdversaryModel m) {
  if (!std::isfinite(epsilon_log2) || epsilon_log2 > 0) {
    throw Error(Errc::invalid_argument, "epsilon must lie in (0, 1]");
  }
  if (k_out < 0 || k_out > key_bits) {
    throw Error(Errc::invalid_argument, "matsui2 needs 0 <= k_out <= k");
  }
  const double inv = -epsilon_log2;
  const double rest = key_bits - k_out;
  std::vector<Term> terms;
  LogWork data;
  std::vector<std::string> notes;
  switch (m) {
    case AdversaryModel::classical:
      data = bits(2.0 * inv);
      terms = {{"counter-update", bits(k_out + 2.0 * inv)},
               {"key-search", bits(rest)}};
      break;
    case AdversaryModel::q1:
      data = bits(2.0 * inv);
      terms = {{"data-collection", data},
               {"partial-key-search", bits(k_out / 2.0 + inv)},
               {"key-search", bits(rest / 2.0)}};
      break;
    case AdversaryModel::q2:
      data = bits(k_out / 2.0 + inv);
      terms = {{"partial-key-search", data}, {"key-search", bits(rest / 2.0)}};
      notes.push_back("modeling assumption: q2 data 2^{k_out/2}/epsilon");
      break;
  }
  auto c = finish(std::move(terms), data);
  c.notes = std::move(notes);
  return c;
}

Complexity evaluate(AttackKind kind, const AttackParams& p, AdversaryModel m) {
  switch (kind) {
    case AttackKind::simple_diff_dist: return simple_diff_distinguisher(p, m);
    case AttackKind::simple_diff_last_rounds: return simple_diff_last_rounds(p, m);
    case AttackKind::trunc_diff_dist: return truncated_distinguisher(p, m);
    case AttackKind::trunc_diff_last_rounds: return truncated_last_rounds(p, m);
    case AttackKind::bias_counting_dist: return bias_counting_distinguisher(p, m);
    case AttackKind::linear_dist:
      p.require({"epsilon_log2"});
      return linear_distinguisher(*p.epsilon_log2, m, p.n);
    case AttackKind::matsui1:
      p.require({"epsilon_log2", "ell", "k"});
      return matsui1(*p.epsilon_log2, *p.ell, *p.k, m);
    case AttackKind::matsui2:
      p.require({"epsilon_log2", "k_out", "k"});
      return matsui2(*p.epsilon_log2, *p.k_out, *p.k, m);
  }
  throw Error(Errc::invalid_argument, "unknown attack kind");
}

std::vector<RankedAttack> best_attack(const AttackParams& p, AdversaryModel m,
                                      const std::set<AttackKind>& kinds) {
  p.require({"k"});
  std::vector<RankedAttack> ranked;
  for (auto kind : all_attack_kinds()) {
    if (!kinds.contains(kind)) continue;
    try {
      auto c = evaluate(kind, p, m);
      auto v = make_verdict(c.time, c.data, *p.k, m);
      ranked.push_back({kind, std::move(c), v});
    } catch (const Error& e) {
      switch (e.code()) {
        case Errc::incomplete_params:
        case Errc::distinguisher_invalid:
        case Errc::characteristic_unusable:
        case Errc::invalid_bias:
        case Errc::invalid_argument:
          continue;
        default:
          throw;
      }
    }
  }
  if (ranked.empty()) {
    throw Error(Errc::no_applicable_attack,
                "no requested attack kind is applicable to these parameters");
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const RankedAttack& a, const RankedAttack& b) {
                     return a.complexity.time < b.complexity.time;
                   });
  return ranked;
}

}  // namespace qdl
