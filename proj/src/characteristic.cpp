#include "qdl/characteristic.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>
#include <unordered_map>

#include "qdl/error.hpp"
#include "qdl/tables.hpp"

namespace qdl {

namespace {

struct Edge {
  unsigned out;
  double weight;  // log2 probability or log2 |correlation|
};

/// Nonzero transitions of one S-box, grouped by input value.
std::vector<std::vector<Edge>> sbox_edges(const SboxSpec& s, CharacteristicKind kind) {
  std::vector<std::vector<Edge>> edges(s.size());
  if (kind == CharacteristicKind::differential) {
    const auto t = compute_ddt(s);
    for (int a = 0; a < s.size(); ++a) {
      for (int b = 0; b < s.size(); ++b) {
        if (t.at(a, b) != 0) {
          edges[a].push_back({static_cast<unsigned>(b),
                              std::log2(static_cast<double>(t.at(a, b)) / s.size())});
        }
      }
    }
  } else {
    const auto t = compute_lat(s);
    const double half = s.size() / 2.0;
    for (int a = 0; a < s.size(); ++a) {
      for (int b = 0; b < s.size(); ++b) {
        if (t.at(a, b) != 0) {
          edges[a].push_back({static_cast<unsigned>(b), std::log2(std::abs(t.at(a, b)) / half)});
        }
      }
    }
  }
  for (auto& row : edges) {
    std::sort(row.begin(), row.end(),
              [](const Edge& x, const Edge& y) { return x.weight > y.weight; });
  }
  return edges;
}

const ToyCipherSpec& checked(const ToyCipherSpec& spec) {
  spec.validate();
  return spec;
}

/// Round structure shared by the search and the evaluator.
class RoundModel {
 public:
  RoundModel(const ToyCipherSpec& spec, CharacteristicKind kind)
      : spec_(checked(spec)), layer_(spec), edges_(sbox_edges(spec.sbox, kind)) {
    if (kind == CharacteristicKind::linear && spec.structure != CipherStructure::spn) {
      throw Error(Errc::invalid_argument, "linear characteristics need an SPN");
    }
  }

  bool feistel() const { return spec_.structure == CipherStructure::feistel; }
  int half() const { return spec_.block_n / 2; }
  Block half_mask() const { return (Block{1} << half()) - 1; }

  /// Mask that enters the S-box layer.
  Block sbox_input(Block state) const { return feistel() ? (state & half_mask()) : state; }

  /// Next state given the S-box layer output mask.
  Block next(Block state, Block sbox_out) const {
    const Block f = layer_.permute(sbox_out);
    if (!feistel()) return f;
    const Block left = state >> half();
    const Block right = state & half_mask();
    return (right << half()) | (left ^ f);
  }

  /// Calls visit(sbox_out, weight) for every nonzero S-layer transition.
  template <class Visit>
  void expand(Block in, Visit&& visit) const {
    expand_slot(in, 0, 0, 0.0, visit);
  }

  const std::vector<Edge>& edges(unsigned in) const { return edges_[in]; }
  const Layer& layer() const { return layer_; }

 private:
  template <class Visit>
  void expand_slot(Block in, int j, Block acc, double w, Visit& visit) const {
    if (j == layer_.sbox_count()) {
      visit(acc, w);
      return;
    }
    const unsigned a = layer_.slot(in, j);
    if (a == 0) {
      expand_slot(in, j + 1, acc, w, visit);
      return;
    }
    for (const auto& e : edges_[a]) {
      expand_slot(in, j + 1, layer_.with_slot(acc, j, e.out), w + e.weight, visit);
    }
  }

  const ToyCipherSpec& spec_;
  Layer layer_;
  std::vector<std::vector<Edge>> edges_;
};

}  // namespace

CharacteristicValue characteristic_probability(const ToyCipherSpec& spec,
                                               const Characteristic& ch) {
  const RoundModel model(spec, ch.kind);
  if (ch.rounds() < 1) throw Error(Errc::invalid_argument, "characteristic needs >= 1 round");
  for (auto m : ch.masks) {
    if (m & ~spec.block_mask()) throw Error(Errc::invalid_argument, "mask wider than the block");
  }
  const Layer& layer = model.layer();
  const DiffTable ddt = compute_ddt(spec.sbox);
  const LinTable lat = compute_lat(spec.sbox);
  CharacteristicValue v;
  for (int r = 0; r < ch.rounds(); ++r) {
    const Block state = ch.masks[r];
    const Block in = model.sbox_input(state);
    Block f = ch.masks[r + 1];
    if (model.feistel()) {
      if ((f >> model.half()) != (state & model.half_mask())) {
        throw Error(Errc::invalid_argument,
                    "round " + std::to_string(r + 1) + ": left half must equal previous right half");
      }
      f = (f & model.half_mask()) ^ (state >> model.half());
    }
    const Block out = layer.inverse_permute(f);
    for (int j = 0; j < layer.sbox_count(); ++j) {
      const unsigned a = layer.slot(in, j);
      const unsigned b = layer.slot(out, j);
      if (a == 0 && b == 0) continue;
      const int entry = ch.kind == CharacteristicKind::differential ? ddt.at(a, b) : lat.at(a, b);
      if (entry == 0) {
        throw Error(Errc::impossible_characteristic,
                    "round " + std::to_string(r + 1) + ", S-box " + std::to_string(j) +
                        ": zero table entry");
      }
      ++v.active_sboxes;
      if (ch.kind == CharacteristicKind::differential) {
        v.log2 += std::log2(static_cast<double>(entry) / ddt.size());
      } else {
        v.log2 += std::log2(std::abs(entry) / (lat.size() / 2.0));
        if (entry < 0) v.sign = -v.sign;
      }
    }
  }
  if (ch.kind == CharacteristicKind::linear) {
    // Piling-up: bias = 2^{m-1} prod(bias_i) = (prod correlation_i) / 2.
    v.log2 -= 1.0;
  }
  return v;
}

DifferentialEstimate empirical_diff_probability(const ToyCipherSpec& spec,
                                                const std::vector<RoundKeys>& keys,
                                                Block din, const DiffPredicate& accept,
                                                int t, std::optional<std::uint64_t> samples,
                                                std::uint64_t seed) {
  if (keys.empty()) throw Error(Errc::invalid_argument, "need at least one key");
  if (din & ~spec.block_mask()) throw Error(Errc::invalid_argument, "difference wider than the block");
  const std::uint64_t domain = std::uint64_t{1} << spec.block_n;
  if (samples && *samples == 0) throw Error(Errc::invalid_argument, "sample count must be >= 1");
  DifferentialEstimate est;
  CounterRng rng(seed);
  for (const auto& key : keys) {
    const ToyCipher cipher(spec, key);
    if (!samples) {
      for (std::uint64_t x = 0; x < domain; ++x) {
        const Block b = static_cast<Block>(x);
        est.hits += accept(cipher.encrypt(b, t) ^ cipher.encrypt(b ^ din, t)) ? 1 : 0;
      }
      est.trials += domain;
    } else {
      for (std::uint64_t i = 0; i < *samples; ++i) {
        const Block b = static_cast<Block>(rng.below(domain));
        est.hits += accept(cipher.encrypt(b, t) ^ cipher.encrypt(b ^ din, t)) ? 1 : 0;
      }
      est.trials += *samples;
    }
  }
  const double n = static_cast<double>(est.trials);
  est.p = est.hits / n;
  est.stderr_p = std::sqrt(est.p * (1.0 - est.p) / n);
  if (est.hits == 0) {
    est.lower_bound_only = true;
    est.bound_log2 = -std::log2(n);
  } else {
    est.log2_p = std::log2(est.p);
    est.stderr_log2 = est.stderr_p / (est.p * std::log(2.0));
  }
  return est;
}

DifferentialEstimate empirical_diff_probability(const ToyCipherSpec& spec,
                                                const std::vector<RoundKeys>& keys,
                                                Block din, Block dout, int t,
                                                std::optional<std::uint64_t> samples,
                                                std::uint64_t seed) {
  return empirical_diff_probability(
      spec, keys, din, [dout](Block d) { return d == dout; }, t, samples, seed);
}

double exact_linear_bias(const ToyCipher& cipher, Block alpha, Block beta, int t) {
  const std::uint64_t domain = std::uint64_t{1} << cipher.spec().block_n;
  std::uint64_t agree = 0;
  for (std::uint64_t x = 0; x < domain; ++x) {
    const Block b = static_cast<Block>(x);
    agree += parity(b & alpha) == parity(cipher.encrypt(b, t) & beta) ? 1 : 0;
  }
  return static_cast<double>(agree) / static_cast<double>(domain) - 0.5;
}

SearchResult find_best_characteristic(const ToyCipherSpec& spec, CharacteristicKind kind,
                                      const SearchOptions& options) {
  if (spec.block_n > 20) throw Error(Errc::invalid_argument, "search supports block_n <= 20");
  if (options.rounds < 1) throw Error(Errc::invalid_argument, "search needs >= 1 round");
  if (options.beam < 1) throw Error(Errc::invalid_argument, "beam must be >= 1");
  const RoundModel model(spec, kind);

  struct Node {
    double weight;
    Block parent;
  };
  using Frontier = std::unordered_map<Block, Node>;
  std::vector<Frontier> layers;
  SearchResult result;
  result.exhaustive = true;

  Frontier start;
  if (options.input) {
    if (*options.input == 0 || (*options.input & ~spec.block_mask())) {
      throw Error(Errc::invalid_argument, "input mask must be nonzero and fit the block");
    }
    start[*options.input] = {0.0, 0};
  } else {
    for (Block x = 1; x <= spec.block_mask(); ++x) start[x] = {0.0, 0};
  }
  layers.push_back(std::move(start));

  for (int r = 0; r < options.rounds; ++r) {
    // Best states first so a transition cap drops the least promising ones.
    std::vector<std::pair<Block, double>> order;
    order.reserve(layers.back().size());
    for (const auto& [mask, node] : layers.back()) order.emplace_back(mask, node.weight);
    std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second > b.second;
      const int pa = std::popcount(a.first), pb = std::popcount(b.first);
      return pa != pb ? pa < pb : a.first < b.first;
    });
    Frontier next;
    const std::uint64_t round_start = result.transitions;
    for (const auto& [mask, weight] : order) {
      if (result.transitions - round_start >= options.max_transitions) {
        result.exhaustive = false;
        break;
      }
      model.expand(model.sbox_input(mask), [&](Block out, double w) {
        ++result.transitions;
        const Block to = model.next(mask, out);
        if (to == 0) return;
        const double total = weight + w;
        auto [it, fresh] = next.try_emplace(to, Node{total, mask});
        if (!fresh && (total > it->second.weight ||
                       (total == it->second.weight && mask < it->second.parent))) {
          it->second = {total, mask};
        }
      });
    }
    if (next.size() > options.beam) {
      result.exhaustive = false;
      std::vector<std::pair<double, Block>> ranked;
      ranked.reserve(next.size());
      for (const auto& [mask, node] : next) ranked.emplace_back(node.weight, mask);
      std::nth_element(ranked.begin(), ranked.begin() + options.beam, ranked.end(),
                       [](const auto& a, const auto& b) {
                         return a.first != b.first ? a.first > b.first : a.second < b.second;
                       });
      Frontier kept;
      for (std::size_t i = 0; i < options.beam; ++i) kept.emplace(ranked[i].second, next[ranked[i].second]);
      next = std::move(kept);
    }
    layers.push_back(std::move(next));
  }

  const Frontier& last = layers.back();
  std::optional<std::pair<Block, double>> best;
  for (const auto& [mask, node] : last) {
    if (options.output && mask != *options.output) continue;
    if (!best || node.weight > best->second ||
        (node.weight == best->second && mask < best->first)) {
      best = std::make_pair(mask, node.weight);
    }
  }
  if (!best) throw Error(Errc::not_found, "no characteristic found within the search budget");

  std::vector<Block> masks(options.rounds + 1);
  masks[options.rounds] = best->first;
  for (int r = options.rounds; r > 0; --r) masks[r - 1] = layers[r].at(masks[r]).parent;
  result.best.kind = kind;
  result.best.masks = std::move(masks);
  result.best.claimed_log2 =
      kind == CharacteristicKind::linear ? best->second - 1.0 : best->second;
  return result;
}

ForwardSet reachable_differences(const ToyCipherSpec& spec, Block din, int r_out) {
  if (r_out < 0) throw Error(Errc::invalid_argument, "r_out must be >= 0");
  const RoundModel model(spec, CharacteristicKind::differential);
  std::set<Block> current{din};
  for (int r = 0; r < r_out; ++r) {
    std::set<Block> next;
    for (Block d : current) {
      model.expand(model.sbox_input(d), [&](Block out, double) { next.insert(model.next(d, out)); });
    }
    current = std::move(next);
  }
  ForwardSet fs;
  fs.members.assign(current.begin(), current.end());
  fs.log2_size = std::log2(static_cast<double>(fs.members.size()));
  return fs;
}

}  // namespace qdl
