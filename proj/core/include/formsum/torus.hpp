// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "formsum/errors.hpp"

namespace formsum {

// A Fourier mode on the torus; the second component is unused in 1D.
using Mode = std::array<int, 2>;

// Truncated trigonometric basis on [0,2pi)^n: modes j with |j|_inf <= N,
// orthonormal basis functions e_j(x) = (2pi)^{-n/2} exp(i j.x).
class TorusGrid {
 public:
  TorusGrid(int dim, int bandlimit) : dim_(dim), bandlimit_(bandlimit) {
    if (dim != 1 && dim != 2)
      throw PreconditionError("TorusGrid: dimension must be 1 or 2, got " + std::to_string(dim));
    if (bandlimit < 1)
      throw PreconditionError("TorusGrid: bandlimit must be >= 1, got " + std::to_string(bandlimit));
  }

  int dim() const { return dim_; }
  int bandlimit() const { return bandlimit_; }
  int axis_size() const { return 2 * bandlimit_ + 1; }

  // basis size (2N+1)^n
  Eigen::Index size() const {
    Eigen::Index s = axis_size();
    return dim_ == 1 ? s : s * s;
  }

  // lexicographic order from (-N,...) to (N,...)
  Eigen::Index index_of(const Mode& m) const {
    if (dim_ == 1) return m[0] + bandlimit_;
    return static_cast<Eigen::Index>(m[0] + bandlimit_) * axis_size() + (m[1] + bandlimit_);
  }

  Mode mode_at(Eigen::Index idx) const {
    if (dim_ == 1) return {static_cast<int>(idx) - bandlimit_, 0};
    const int a = static_cast<int>(idx / axis_size());
    const int b = static_cast<int>(idx % axis_size());
    return {a - bandlimit_, b - bandlimit_};
  }

  bool contains(const Mode& m) const {
    if (std::abs(m[0]) > bandlimit_) return false;
    if (dim_ == 2 && std::abs(m[1]) > bandlimit_) return false;
    return true;
  }

  static double abs2(const Mode& m) {
    return static_cast<double>(m[0]) * m[0] + static_cast<double>(m[1]) * m[1];
  }

  bool operator==(const TorusGrid& o) const {
    return dim_ == o.dim_ && bandlimit_ == o.bandlimit_;
  }
  bool operator!=(const TorusGrid& o) const { return !(*this == o); }

 private:
  int dim_;
  int bandlimit_;
};

inline void require_same_grid(const TorusGrid& a, const TorusGrid& b, const char* where) {
  if (a != b)
    throw PreconditionError(std::string(where) + ": grid mismatch (n=" + std::to_string(a.dim()) +
                            ",N=" + std::to_string(a.bandlimit()) + " vs n=" + std::to_string(b.dim()) +
                            ",N=" + std::to_string(b.bandlimit()) + ")");
}

inline void require_same_dim(const TorusGrid& a, const TorusGrid& b, const char* where) {
  if (a.dim() != b.dim())
    throw PreconditionError(std::string(where) + ": dimension mismatch (" + std::to_string(a.dim()) +
                            " vs " + std::to_string(b.dim()) + ")");
}

// Multi-index alpha = (alpha_1,...,alpha_n), entries >= 0.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> entries) : entries_(std::move(entries)) {
    for (int e : entries_)
      if (e < 0) throw PreconditionError("MultiIndex: entries must be >= 0");
  }
  static MultiIndex zero(int dim) { return MultiIndex(std::vector<int>(dim, 0)); }

  int dim() const { return static_cast<int>(entries_.size()); }
  int order() const { return std::accumulate(entries_.begin(), entries_.end(), 0); }
  int operator[](int i) const { return entries_[i]; }
  const std::vector<int>& entries() const { return entries_; }

  bool operator==(const MultiIndex& o) const { return entries_ == o.entries_; }

 private:
  std::vector<int> entries_;
};

// Symbol of D^alpha on e_j with D = i d/dx convention: prod_i (-j_i)^{alpha_i}.
inline double derivative_symbol(const Mode& m, const MultiIndex& alpha) {
  double s = 1.0;
  for (int i = 0; i < alpha.dim(); ++i) {
    for (int r = 0; r < alpha[i]; ++r) s *= -static_cast<double>(m[i]);
  }
  return s;
}

}  // namespace formsum
