#include "pgreen/lattice.hpp"

namespace pgreen {

VecD reduce_to_zone(VecD k) {
  constexpr double two_pi = 2.0 * M_PI;
  for (int i = 0; i < k.size(); ++i) {
    double v = std::fmod(k[i] + M_PI, two_pi);
    if (v < 0) v += two_pi;
    k[i] = v - M_PI;
  }
  return k;
}

std::vector<VecD> zone_grid(int d, int M) {
  if (M < 1) fail(ErrorCode::BadConfig, "grid size must be positive");
  const long n = grid_size(d, M);
  std::vector<VecD> nodes(n);
  const int j0 = M / 2;
  for (long idx = 0; idx < n; ++idx) {
    auto ix = grid_unflatten(idx, d, M);
    VecD k(d);
    for (int a = 0; a < d; ++a) k[a] = 2.0 * M_PI * (ix[a] - j0) / M;
    nodes[idx] = k;
  }
  return nodes;
}

std::array<int, kMaxDim> grid_unflatten(long idx, int d, int n) {
  std::array<int, kMaxDim> ix = {0, 0, 0, 0};
  for (int a = d - 1; a >= 0; --a) {
    ix[a] = static_cast<int>(idx % n);
    idx /= n;
  }
  return ix;
}

long grid_flatten(const std::array<int, kMaxDim>& ix, int d, int n) {
  long idx = 0;
  for (int a = 0; a < d; ++a) idx = idx * n + ix[a];
  return idx;
}

}  // namespace pgreen
