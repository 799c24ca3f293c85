#pragma once

// Increasing multi-index bookkeeping for p-forms in ambient dimension <= 4.
// Components of a p-form are stored against the lexicographically ordered
// list of strictly increasing index tuples; access with an arbitrary
// (possibly unsorted, possibly repeating) tuple resolves to a slot plus the
// sign of the sorting permutation.

#include <array>
#include <cstdint>
#include <vector>

#include "hodgelab/errors.hpp"

namespace hodgelab {

inline constexpr int kMaxDim = 4;

constexpr int binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  long r = 1;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return static_cast<int>(r);
}

using IndexTuple = std::array<int, kMaxDim>; // only the first `degree` entries used

struct SignedSlot {
  int slot = -1; // position among increasing tuples, -1 when the tuple repeats an index
  int sign = 0;  // sign of the sorting permutation, 0 when degenerate
};

class MultiIndexTable {
public:
  // Table for p-index tuples in {0,...,dim-1}.
  MultiIndexTable(int dim, int degree);

  int dim() const { return dim_; }
  int degree() const { return degree_; }
  int count() const { return static_cast<int>(tuples_.size()); }

  const IndexTuple& tuple(int slot) const { return tuples_[slot]; }

  // Slot of a strictly increasing tuple.
  int slot_of(const IndexTuple& sorted) const;

  // Slot+sign of an arbitrary tuple; sign 0 when an index repeats.
  SignedSlot lookup(const IndexTuple& raw) const;

  // Complementary tuple (the indices not in `tuple(slot)`, increasing) and the
  // sign of the permutation (tuple, complement) relative to (0,...,dim-1).
  // This is the Euclidean Hodge star sign for an orthonormal frame.
  int complement_slot(int slot, const MultiIndexTable& comp_table) const;
  int star_sign(int slot) const;

  static const MultiIndexTable& get(int dim, int degree);

private:
  int dim_;
  int degree_;
  std::vector<IndexTuple> tuples_;
};

inline MultiIndexTable::MultiIndexTable(int dim, int degree) : dim_(dim), degree_(degree) {
  if (dim < 0 || dim > kMaxDim) throw UnsupportedDimension("multi-index table: dim out of range");
  if (degree < 0 || degree > dim) { return; } // empty table: zero-dimensional form space
  IndexTuple t{};
  for (int i = 0; i < degree; ++i) t[i] = i;
  if (degree == 0) { tuples_.push_back(IndexTuple{}); return; }
  while (true) {
    tuples_.push_back(t);
    // advance to next increasing tuple
    int i = degree - 1;
    while (i >= 0 && t[i] == dim - degree + i) --i;
    if (i < 0) break;
    ++t[i];
    for (int j = i + 1; j < degree; ++j) t[j] = t[j - 1] + 1;
  }
}

inline int MultiIndexTable::slot_of(const IndexTuple& sorted) const {
  // Tables are tiny (<= 6 entries); linear scan is fine and branch-predictable.
  for (int s = 0; s < count(); ++s) {
    bool eq = true;
    for (int i = 0; i < degree_; ++i)
      if (tuples_[s][i] != sorted[i]) { eq = false; break; }
    if (eq) return s;
  }
  return -1;
}

inline SignedSlot MultiIndexTable::lookup(const IndexTuple& raw) const {
  IndexTuple t = raw;
  int sign = 1;
  // insertion sort, tracking parity
  for (int i = 1; i < degree_; ++i) {
    int v = t[i], j = i - 1;
    while (j >= 0 && t[j] > v) { t[j + 1] = t[j]; --j; sign = -sign; }
    t[j + 1] = v;
  }
  for (int i = 0; i + 1 < degree_; ++i)
    if (t[i] == t[i + 1]) return {-1, 0};
  int s = slot_of(t);
  if (s < 0) return {-1, 0};
  return {s, sign};
}

inline int MultiIndexTable::complement_slot(int slot, const MultiIndexTable& comp_table) const {
  const IndexTuple& t = tuples_[slot];
  IndexTuple c{};
  int k = 0;
  for (int i = 0; i < dim_; ++i) {
    bool in = false;
    for (int j = 0; j < degree_; ++j)
      if (t[j] == i) { in = true; break; }
    if (!in) c[k++] = i;
  }
  return comp_table.slot_of(c);
}

inline int MultiIndexTable::star_sign(int slot) const {
  // sign of the permutation (I, I^c) of (0,...,dim-1)
  const IndexTuple& t = tuples_[slot];
  std::array<int, kMaxDim> perm{};
  int k = 0;
  for (int j = 0; j < degree_; ++j) perm[k++] = t[j];
  for (int i = 0; i < dim_; ++i) {
    bool in = false;
    for (int j = 0; j < degree_; ++j)
      if (t[j] == i) { in = true; break; }
    if (!in) perm[k++] = i;
  }
  int sign = 1;
  for (int i = 0; i < dim_; ++i)
    for (int j = i + 1; j < dim_; ++j)
      if (perm[i] > perm[j]) sign = -sign;
  return sign;
}

inline const MultiIndexTable& MultiIndexTable::get(int dim, int degree) {
  static std::vector<MultiIndexTable> cache = [] {
    std::vector<MultiIndexTable> v;
    for (int d = 0; d <= kMaxDim; ++d)
      for (int p = 0; p <= kMaxDim; ++p)
        v.emplace_back(d, p <= d ? p : d); // placeholder for invalid combos
    return v;
  }();
  if (dim < 0 || dim > kMaxDim || degree < 0 || degree > dim)
    throw DegreeError("form degree " + std::to_string(degree) + " invalid in dimension " +
                      std::to_string(dim));
  return cache[dim * (kMaxDim + 1) + degree];
}

} // namespace hodgelab
