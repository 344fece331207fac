#include "qdl/tables.hpp"

#include <algorithm>
#include <cstdlib>

namespace qdl {

int DiffTable::uniformity() const {
  int best = 0;
  for (int a = 1; a < size(); ++a) {
    for (int b = 0; b < size(); ++b) best = std::max(best, at(a, b));
  }
  return best;
}

int LinTable::linearity() const {
  int best = 0;
  for (int a = 1; a < size(); ++a) {
    for (int b = 1; b < size(); ++b) best = std::max(best, std::abs(at(a, b)));
  }
  return best;
}

DiffTable compute_ddt(const SboxSpec& s) {
  s.validate();
  DiffTable t{s.width, std::vector<int>(s.size() * s.size(), 0)};
  for (int a = 0; a < s.size(); ++a) {
    for (int x = 0; x < s.size(); ++x) {
      ++t.ddt[(a << s.width) | (s.table[x ^ a] ^ s.table[x])];
    }
  }
  return t;
}

LinTable compute_lat(const SboxSpec& s) {
  s.validate();
  const int half = s.size() / 2;
  LinTable t{s.width, std::vector<int>(s.size() * s.size(), -half)};
  for (int a = 0; a < s.size(); ++a) {
    for (int b = 0; b < s.size(); ++b) {
      for (int x = 0; x < s.size(); ++x) {
        if (parity(x & a) == parity(s.table[x] & b)) ++t.lat[(a << s.width) | b];
      }
    }
  }
  return t;
}

}  // namespace qdl
