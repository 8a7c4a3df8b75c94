#include "pgreen/floquet.hpp"

#include <cmath>

#include "pgreen/parallel.hpp"

namespace pgreen {

int CompactCellFunction::support_radius() const {
  int r = 0;
  for (const auto& [gamma, samples] : cells) r = std::max(r, freq_maxabs(gamma));
  return r;
}

VecD cell_sample_point(int d, int N, long flat_index) {
  const int P = 2 * N + 1;
  auto ix = grid_unflatten(flat_index, d, P);
  VecD x(d);
  for (int a = 0; a < d; ++a) x[a] = double(ix[a]) / P;
  return x;
}

double l2_norm_sq_direct(const CompactCellFunction& f) {
  double total = 0.0;
  const long P = f.samples_per_cell();
  for (const auto& [gamma, samples] : f.cells) total += samples.squaredNorm() / double(P);
  return total;
}

TorusFunction floquet_transform(const CompactCellFunction& f, const VecD& k) {
  const int d = f.d;
  const int P = f.samples_per_axis();
  const long m = f.samples_per_cell();

  // phi(x) = e^{-i k.x} sum_gamma f(x + gamma) e^{-i k.gamma} on the W grid
  Eigen::VectorXcd phi = Eigen::VectorXcd::Zero(m);
  for (const auto& [gamma, samples] : f.cells) {
    double kg = 0.0;
    for (int a = 0; a < d; ++a) kg += k[a] * gamma[a];
    phi += std::exp(std::complex<double>(0.0, -kg)) * samples;
  }
  for (long i = 0; i < m; ++i) {
    VecD x = cell_sample_point(d, f.N, i);
    double kx = 0.0;
    for (int a = 0; a < d; ++a) kx += k[a] * x[a];
    phi[i] *= std::exp(std::complex<double>(0.0, -kx));
  }

  // Forward DFT of the P^d samples onto the (2N+1)^d plane-wave basis. The
  // sample count matches the mode count, so this is exact interpolation.
  TorusFunction out;
  out.k = k;
  out.basis = PlaneWaveBasis(d, f.N);
  out.coeffs.resize(out.basis.size());
  for (int gi = 0; gi < out.basis.size(); ++gi) {
    const Freq& n = out.basis.freq(gi);
    std::complex<double> acc = 0.0;
    for (long i = 0; i < m; ++i) {
      auto ix = grid_unflatten(i, d, P);
      double phase = 0.0;
      for (int a = 0; a < d; ++a) phase += double(n[a]) * ix[a] / P;
      acc += phi[i] * std::exp(std::complex<double>(0.0, -2.0 * M_PI * phase));
    }
    out.coeffs[gi] = acc / double(m);
  }
  return out;
}

std::complex<double> inverse_floquet(const std::vector<TorusFunction>& hats, const VecD& x,
                                     const Freq& gamma) {
  if (hats.empty()) fail(ErrorCode::BadConfig, "inverse_floquet needs at least one k sample");
  const int d = hats.front().basis.dim();
  VecD p(d);
  for (int a = 0; a < d; ++a) p[a] = x[a] + gamma[a];
  std::vector<std::complex<double>> vals(hats.size());
  for (size_t i = 0; i < hats.size(); ++i) vals[i] = hats[i].bloch_value(p);
  return pairwise_sum(vals) / double(hats.size());
}

}  // namespace pgreen
