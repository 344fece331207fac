#pragma once

#include <vector>

#include "qdl/toy_cipher.hpp"

namespace qdl {

inline int parity(unsigned x) { return __builtin_parity(x); }

/// Difference distribution table: at(a, b) = #{x : S(x ^ a) ^ S(x) = b}.
struct DiffTable {
  int width = 0;
  std::vector<int> ddt;

  int size() const { return 1 << width; }
  int at(unsigned a, unsigned b) const { return ddt[(a << width) | b]; }
  /// Largest entry outside row 0 (the differential uniformity).
  int uniformity() const;
};

/// Linear approximation table: at(a, b) = #{x : x[a] = S(x)[b]} - 2^{w-1}.
struct LinTable {
  int width = 0;
  std::vector<int> lat;

  int size() const { return 1 << width; }
  int at(unsigned a, unsigned b) const { return lat[(a << width) | b]; }
  /// Largest |entry| outside row and column 0.
  int linearity() const;
};

DiffTable compute_ddt(const SboxSpec& s);
LinTable compute_lat(const SboxSpec& s);

}  // namespace qdl
