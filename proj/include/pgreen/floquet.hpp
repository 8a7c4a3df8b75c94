#pragma once

#include <utility>
#include <vector>

#include "pgreen/bloch.hpp"

namespace pgreen {

// Function on R^d supported on finitely many lattice cells W + gamma. Each
// cell carries samples on the uniform (2N+1)^d grid x_i = i/(2N+1) of W,
// flattened row-major, which pins down the trigonometric interpolant used by
// the transform below.
struct CompactCellFunction {
  int d = 3;
  int N = 0;  // samples per axis = 2N+1, matching a PlaneWaveBasis cutoff
  std::vector<std::pair<Freq, Eigen::VectorXcd>> cells;

  int samples_per_axis() const { return 2 * N + 1; }
  long samples_per_cell() const { return grid_size(d, samples_per_axis()); }
  int support_radius() const;  // max |gamma_i| over cells
};

// Sample point i (row-major over the per-axis index tuple) of the cell grid.
VecD cell_sample_point(int d, int N, long flat_index);

// Direct squared L2 norm over R^d: sum over cells of the mean of |samples|^2
// (exact for the trigonometric interpolant by the discrete Parseval identity).
double l2_norm_sq_direct(const CompactCellFunction& f);

// Lattice Fourier (Floquet) transform at quasimomentum k:
//   fhat(k, x) = sum_gamma f(x + gamma) e^{-i k.gamma},
// returned through the periodic part fhat(k,x) = e^{i k.x} sum_G c_G e^{i G.x}
// with coefficients obtained by the discrete Fourier transform of the sampled
// e^{-i k.x} fhat(k, x). 2*pi*Z^d-periodic in k.
TorusFunction floquet_transform(const CompactCellFunction& f, const VecD& k);

// Inversion from samples of fhat over a uniform Gamma-centered k-grid
// (zone_grid order): f(x + gamma) = grid average of fhat(k, x + gamma), the
// trapezoid rule being exact once the grid has more than 2*support_radius
// nodes per axis.
std::complex<double> inverse_floquet(const std::vector<TorusFunction>& hats, const VecD& x,
                                     const Freq& gamma);

}  // namespace pgreen
