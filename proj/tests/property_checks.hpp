#pragma once

// Randomized property checks shared by the unit suite and the acceptance
// runner. Each check returns one line per property.

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qdl/attack_models.hpp"
#include "qdl/log_work.hpp"
#include "qdl/rng.hpp"
#include "qdl/tables.hpp"
#include "qdl/toy_cipher.hpp"

namespace qdl::props {

struct Outcome {
  explicit Outcome(std::string n) : name(std::move(n)) {}

  std::string name;
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::string first_failure;

  bool pass() const { return cases > 0 && failures == 0; }
  void fail(const std::string& what) {
    if (failures++ == 0) first_failure = what;
  }
};

inline double uniform(CounterRng& rng, double lo, double hi) { return lo + (hi - lo) * rng.uniform01(); }

/// DDT/LAT invariants of random bijective S-boxes, each table also
/// recounted directly from the S-box.
inline std::vector<Outcome> sbox_properties(int count, std::uint64_t seed) {
  Outcome direct{"ddt/lat agree with direct counts"}, ddt{"ddt row sums, parity, row 0"},
      lat{"lat corner, zero row/column, parity, Parseval"};
  CounterRng rng(seed);
  for (int i = 0; i < count; ++i) {
    const int w = i % 2 == 0 ? 3 : 4;
    const unsigned size = 1u << w;
    const auto s = random_sbox(w, rng);
    const auto d = compute_ddt(s);
    const auto l = compute_lat(s);
    ++direct.cases;
    ++ddt.cases;
    ++lat.cases;
    for (unsigned a = 0; a < size; ++a) {
      int row = 0, sq = 0;
      for (unsigned b = 0; b < size; ++b) {
        int dc = 0, lc = 0;
        for (unsigned x = 0; x < size; ++x) {
          dc += (s.table[x] ^ s.table[x ^ a]) == b;
          lc += parity(x & a) == parity(s.table[x] & b);
        }
        if (d.at(a, b) != dc || l.at(a, b) != lc - static_cast<int>(size / 2)) {
          direct.fail("sbox " + std::to_string(i));
        }
        row += d.at(a, b);
        sq += l.at(a, b) * l.at(a, b);
        if (d.at(a, b) % 2 != 0) ddt.fail("odd ddt entry, sbox " + std::to_string(i));
        if (l.at(a, b) % 2 != 0) lat.fail("odd lat entry, sbox " + std::to_string(i));
        if (a == 0 && b != 0 && (d.at(a, b) != 0 || l.at(a, b) != 0)) ddt.fail("row 0, sbox " + std::to_string(i));
        if (b == 0 && a != 0 && l.at(a, b) != 0) lat.fail("column 0, sbox " + std::to_string(i));
      }
      if (row != static_cast<int>(size)) ddt.fail("row sum, sbox " + std::to_string(i));
      if (sq != static_cast<int>(size * size / 4)) lat.fail("Parseval, sbox " + std::to_string(i));
    }
    if (d.at(0, 0) != static_cast<int>(size)) ddt.fail("ddt[0][0]");
    if (l.at(0, 0) != static_cast<int>(size / 2)) lat.fail("lat[0][0]");
  }
  return {direct, ddt, lat};
}

/// log2_sum over random term sets (up to 16 terms, some zero sentinels).
inline std::vector<Outcome> log2_sum_properties(int sets, std::uint64_t seed) {
  Outcome exact{"log2_sum matches a long-double sum"}, perm{"log2_sum order independence"},
      assoc{"log2_sum associativity"}, bounds{"max <= log2_sum <= max + log2(m), equality iff rest zero"};
  CounterRng rng(seed);
  for (int i = 0; i < sets; ++i) {
    const int m = 1 + static_cast<int>(rng.below(16));
    std::vector<LogWork> terms;
    for (int j = 0; j < m; ++j) {
      terms.push_back(rng.below(8) == 0 ? LogWork::zero() : LogWork::bits(uniform(rng, -40, 120)));
    }
    const auto total = log2_sum(terms);
    const auto top = *std::max_element(terms.begin(), terms.end());
    const std::string tag = "set " + std::to_string(i);

    ++exact.cases;
    if (top.is_zero()) {
      if (!total.is_zero()) exact.fail(tag);
    } else {
      long double acc = 0;
      for (const auto& t : terms) {
        if (!t.is_zero()) acc += std::exp2l(static_cast<long double>(t.bits() - top.bits()));
      }
      const double want = top.bits() + static_cast<double>(std::log2l(acc));
      if (total.is_zero() || std::abs(total.bits() - want) > 1e-9) exact.fail(tag);
    }

    ++perm.cases;
    auto shuffled = terms;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const auto again = log2_sum(shuffled);
    if (total.is_zero() != again.is_zero() || (!total.is_zero() && std::abs(total.bits() - again.bits()) > 1e-6)) {
      perm.fail(tag);
    }

    ++assoc.cases;
    const auto cut = static_cast<std::ptrdiff_t>(rng.below(static_cast<std::uint64_t>(m) + 1));
    std::vector<LogWork> left(terms.begin(), terms.begin() + cut), right(terms.begin() + cut, terms.end());
    const auto l = left.empty() ? LogWork::zero() : log2_sum(left);
    const auto r = right.empty() ? LogWork::zero() : log2_sum(right);
    const auto grouped = log2_sum({l, r});
    if (total.is_zero() != grouped.is_zero() ||
        (!total.is_zero() && std::abs(total.bits() - grouped.bits()) > 1e-6)) {
      assoc.fail(tag);
    }

    ++bounds.cases;
    if (!top.is_zero()) {
      const int nonzero = static_cast<int>(std::count_if(terms.begin(), terms.end(), [](const LogWork& t) { return !t.is_zero(); }));
      if (total.bits() < top.bits() - 1e-12 || total.bits() > top.bits() + std::log2(double(m)) + 1e-9) bounds.fail(tag);
      // Terms more than 40 bits below the maximum can vanish in double precision.
      int visible = 0;
      for (const auto& t : terms) visible += !t.is_zero() && t.bits() > top.bits() - 40;
      if (nonzero == 1 && total.bits() != top.bits()) bounds.fail(tag + " equality");
      if (visible > 1 && !(total.bits() > top.bits())) bounds.fail(tag + " strict");
    }
  }
  return {exact, perm, assoc, bounds};
}

/// A random parameter record inside the valid region: every distinguisher
/// passes its validity margin, every last-rounds attack expects at least one
/// filtered pair, truncated structures hold at least 2^8 texts and yield at
/// least one filtered pair each (the structured Q2 regime), the classical
/// partial-key cost lies between the number of survivors and 2^{k_out}, and
/// the truncated attack is driven by its differential phase: the final search
/// over the k - h_out remaining key bits is not its largest classical term.
inline AttackParams random_valid_params(CounterRng& rng);

inline AttackParams random_params_once(CounterRng& rng) {
  static const double widths[] = {32, 48, 64, 80, 96, 128};
  AttackParams p;
  const double n = widths[rng.below(6)];
  p.n = n;
  p.k = std::round(uniform(rng, n / 2, 2 * n));
  p.h_S = uniform(rng, 4, n - 1);
  const double d_in = std::round(uniform(rng, 8, n / 2 - 4));
  p.Delta_in = d_in;
  const double d_out = std::round(uniform(rng, 1, std::min(n - 2 * d_in + 1, n - 8)));
  p.Delta_out = d_out;
  p.h_T = uniform(rng, 2, n - d_out - 4);
  const double lo = std::max({n + 1 - 2 * d_in, n - *p.h_T, n - *p.h_S, 0.0});
  p.Delta_fin = uniform(rng, lo, n);
  p.k_out = std::round(uniform(rng, 1, std::min(*p.k, 64.0)));
  p.h_out = uniform(rng, 0, std::min(*p.k_out, *p.Delta_fin));
  p.log2_C_kout = uniform(rng, *p.k_out - *p.h_out, *p.k_out);
  p.h_T_path = uniform(rng, n - d_out + 0.5, n - d_out + 20);
  p.epsilon_log2 = uniform(rng, -n / 2, -1);
  p.ell = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(std::min(*p.k, 16.0))));
  return p;
}

inline AttackParams random_valid_params(CounterRng& rng) {
  for (;;) {
    auto p = random_params_once(rng);
    const double filtered = *p.h_T + *p.Delta_fin - *p.n;
    const double data = std::max((*p.h_T + 1) / 2, *p.h_T - *p.Delta_in + 1);
    if (filtered + *p.k - *p.h_out <= std::max(data, filtered + *p.log2_C_kout)) return p;
  }
}

inline bool is_truncated(AttackKind k) {
  return k == AttackKind::trunc_diff_dist || k == AttackKind::trunc_diff_last_rounds ||
         k == AttackKind::bias_counting_dist;
}

inline std::vector<Outcome> model_grid_properties(int points, std::uint64_t seed) {
  Outcome below{"q2 time <= classical time + 0.001"}, floor{"q2 time >= classical time / 2 - 2"},
      data{"q1 data = classical data"}, speedup{"truncated q2 speedup exponent > 1/2"},
      evaluated{"every kind evaluates on the grid"};
  CounterRng rng(seed);
  for (int i = 0; i < points; ++i) {
    const auto p = random_valid_params(rng);
    for (auto kind : all_attack_kinds()) {
      std::ostringstream tag;
      tag << to_string(kind) << " at point " << i;
      ++evaluated.cases;
      Complexity c, q1, q2;
      try {
        c = evaluate(kind, p, AdversaryModel::classical);
        q1 = evaluate(kind, p, AdversaryModel::q1);
        q2 = evaluate(kind, p, AdversaryModel::q2);
      } catch (const std::exception& e) {
        evaluated.fail(tag.str() + ": " + e.what());
        continue;
      }
      const double ct = c.time.bits(), qt = q2.time.bits();
      ++below.cases;
      if (qt > ct + 0.001) below.fail(tag.str());
      ++floor.cases;
      if (qt < ct / 2 - 2) floor.fail(tag.str());
      ++data.cases;
      if (std::abs(q1.data.bits() - c.data.bits()) > 1e-12) data.fail(tag.str());
      if (is_truncated(kind)) {
        ++speedup.cases;
        if (!(ct > 0 && qt / ct > 0.5)) speedup.fail(tag.str());
      }
    }
  }
  return {evaluated, below, floor, data, speedup};
}

}  // namespace qdl::props
