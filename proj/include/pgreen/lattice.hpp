#pragma once

#include <array>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "pgreen/errors.hpp"

namespace pgreen {

inline constexpr int kMaxDim = 4;

// Integer frequency multi-index n; the dual lattice vector is G = 2*pi*n.
// Unused trailing axes are held at zero so Freq works for any d <= kMaxDim.
using Freq = std::array<int, kMaxDim>;

// Small dynamic vector capped at kMaxDim, stack-allocated.
using VecD = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;

inline Freq zero_freq() { return {0, 0, 0, 0}; }

inline Freq make_freq(std::initializer_list<int> v) {
  Freq f = zero_freq();
  int i = 0;
  for (int x : v) {
    if (i >= kMaxDim) break;
    f[i++] = x;
  }
  return f;
}

inline Freq freq_add(const Freq& a, const Freq& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]};
}

inline Freq freq_sub(const Freq& a, const Freq& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]};
}

inline Freq freq_neg(const Freq& a) { return {-a[0], -a[1], -a[2], -a[3]}; }

inline bool freq_is_zero(const Freq& a) {
  return a[0] == 0 && a[1] == 0 && a[2] == 0 && a[3] == 0;
}

inline int freq_maxabs(const Freq& a) {
  int m = 0;
  for (int x : a) m = std::max(m, std::abs(x));
  return m;
}

// Unit lattice Z^d with fundamental cell W = [0,1]^d and Brillouin zone
// B = [-pi,pi]^d.
struct LatticeSpec {
  int d = 3;

  explicit LatticeSpec(int dim = 3) : d(dim) {
    if (d < 1 || d > kMaxDim)
      fail(ErrorCode::BadConfig, "lattice dimension must be in 1.." + std::to_string(kMaxDim));
  }
  void require_min_dim(int dmin) const {
    if (d < dmin)
      fail(ErrorCode::DimensionTooSmall,
           "operation requires d >= " + std::to_string(dmin) + ", got d = " + std::to_string(d));
  }
};

// Reduce each component into [-pi, pi).
VecD reduce_to_zone(VecD k);

// Gamma-centered uniform grid over B: nodes 2*pi*j/M per axis with
// j in [-floor(M/2), M-1-floor(M/2)], so k = 0 is always a node.
// Nodes are enumerated row-major over the axis index tuples.
std::vector<VecD> zone_grid(int d, int M);

// Multi-index helpers for flat row-major enumeration of an n^d grid.
inline long grid_size(int d, int n) {
  long s = 1;
  for (int i = 0; i < d; ++i) s *= n;
  return s;
}

std::array<int, kMaxDim> grid_unflatten(long idx, int d, int n);
long grid_flatten(const std::array<int, kMaxDim>& ix, int d, int n);

}  // namespace pgreen
