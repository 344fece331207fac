#pragma once

#include <set>
#include <string>
#include <vector>

#include "qdl/log_work.hpp"
#include "qdl/params.hpp"

namespace qdl {

struct Term {
  std::string label;
  LogWork value;
  /// The value is an upper bound (quantum partial-key generation).
  bool upper_bound = false;
};

/// Time is always log2_sum(terms); data never exceeds time. `details` carries
/// informational quantities that are not summed into the time.
struct Complexity {
  LogWork time;
  LogWork data;
  std::vector<Term> terms;
  std::vector<Term> details;
  std::vector<std::string> notes;

  const Term* term(const std::string& label) const;
  const Term* detail(const std::string& label) const;
};

enum class AttackKind {
  simple_diff_dist,
  simple_diff_last_rounds,
  trunc_diff_dist,
  trunc_diff_last_rounds,
  bias_counting_dist,
  linear_dist,
  matsui1,
  matsui2,
};

const char* to_string(AttackKind kind);
AttackKind parse_attack_kind(const std::string& text);
const std::vector<AttackKind>& all_attack_kinds();

Complexity simple_diff_distinguisher(const AttackParams& p, AdversaryModel m);

/// Quantum cost of listing the partial keys compatible with one pair: a
/// Grover search when at most one candidate is expected, otherwise the
/// successive-search bound 2^{3k_out/2 - h_out}.
LogWork c_kout_quantum(double k_out, double h_out);

Complexity simple_diff_last_rounds(const AttackParams& p, AdversaryModel m);
Complexity truncated_distinguisher(const AttackParams& p, AdversaryModel m);
Complexity truncated_last_rounds(const AttackParams& p, AdversaryModel m);

struct Fraction {
  long long numerator = 1;
  long long denominator = 1;
};

/// Q1 truncated last-rounds attack with per-term cost weights relative to one
/// full encryption (e.g. 13/14 when the key-generation step evaluates 13 of 14
/// rounds). With both weights 1/1 this is truncated_last_rounds(p, q1).
Complexity truncated_last_rounds_q1_weighted(const AttackParams& p,
                                             Fraction key_generation = {13, 14},
                                             Fraction key_search = {1, 14});

/// Distinguisher that detects a small excess `delta` over a baseline
/// per-sample probability `p0` by counting. Classical/Q1 need 2*p0/delta^2
/// samples; Q2 uses quantum counting with 4*pi*sqrt(p0)/delta samples.
/// Each sample costs 2^{unit_cost_log2}.
Complexity bias_counting_distinguisher(double p0_log2, double delta_log2,
                                       LogWork unit_cost, AdversaryModel m);

/// Bias counting on structures, derived from a parameter record: the
/// baseline is 2^{2Delta_in - 1 + Delta_out - n} hits per structure and the
/// excess 2^{2Delta_in - 1 - h_T_path}. A structure costs 2^{Delta_in}
/// queries classically and 2^{2Delta_in/3} with quantum pair search.
Complexity bias_counting_distinguisher(const AttackParams& p, AdversaryModel m);

Complexity linear_distinguisher(double epsilon_log2, AdversaryModel m,
                                std::optional<double> block_bits = {});
Complexity matsui1(double epsilon_log2, int ell, double key_bits,
                   AdversaryModel m);
Complexity matsui2(double epsilon_log2, double k_out, double key_bits,
                   AdversaryModel m);

/// Evaluate one kind from a parameter record.
Complexity evaluate(AttackKind kind, const AttackParams& p, AdversaryModel m);

struct RankedAttack {
  AttackKind kind;
  Complexity complexity;
  Verdict verdict;
};

/// Evaluates every applicable kind (skipping ones whose parameters are
/// absent or whose preconditions fail), sorted by time, ties broken by kind
/// order. Throws Errc::no_applicable_attack when nothing applies.
std::vector<RankedAttack> best_attack(const AttackParams& p, AdversaryModel m,
                                      const std::set<AttackKind>& kinds);

}  // namespace qdl
