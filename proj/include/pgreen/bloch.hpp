#pragma once

#include <complex>

#include <Eigen/Dense>

#include "pgreen/operator.hpp"
#include "pgreen/plane_wave.hpp"

namespace pgreen {

// Galerkin matrix of the fiber L(k) = sum (D_j + k_j + b_j) a_{jl} (D_l + k_l + b_l) + c
// acting on periodic functions, in the orthonormal plane-wave basis.
struct BlochMatrix {
  VecD k;
  PlaneWaveBasis basis;
  Eigen::MatrixXcd entries;
  double max_asymmetry = 0.0;  // before Hermitian symmetrization
  bool flipped = false;
};

// Periodic part of a Bloch function: f(x) = e^{i k.x} sum_G c_G e^{i G.x}.
struct TorusFunction {
  VecD k;
  PlaneWaveBasis basis;
  Eigen::VectorXcd coeffs;

  std::complex<double> periodic_part(const VecD& x) const;
  std::complex<double> bloch_value(const VecD& x) const;
  double l2_norm() const { return coeffs.norm(); }
};

// L^2(T) inner product <f, g> = sum conj(f_G) g_G, tolerating different
// cutoffs (missing frequencies count as zero).
std::complex<double> inner(const TorusFunction& f, const TorusFunction& g);

// Precomputes the frequency-domain convolution tables for one operator and
// basis so that repeated assemblies at many k are cheap. Entries couple
// frequencies G, G' only through the offset G - G', and the coefficient
// supports are finite, so assembly is an exact finite convolution.
class FiberContext {
 public:
  FiberContext(const PeriodicOperator& op, int N);

  const PlaneWaveBasis& basis() const { return basis_; }
  bool flipped() const { return flipped_; }
  int dim() const { return d_; }

  BlochMatrix assemble(const VecD& k) const;
  Eigen::MatrixXcd dk(const VecD& k, int axis) const;
  Eigen::MatrixXcd d2k(int ax1, int ax2) const;

 private:
  int d_ = 0;
  bool flipped_ = false;
  PlaneWaveBasis basis_;
  struct Offset {
    Freq n;
    Eigen::MatrixXcd A;   // d x d
    Eigen::VectorXcd ab;  // sum_l a_{jl} b_l
    Eigen::VectorXcd ba;  // sum_j b_j a_{jl}
    std::complex<double> scalar;  // b.a.b + c
  };
  std::vector<Offset> offsets_;
};

// Throws CutoffTooSmall when the basis cannot hold the coefficient support
// (2N+1 < 2*fmax+1).
BlochMatrix assemble_bloch(const PeriodicOperator& op, const VecD& k, int N);
Eigen::MatrixXcd assemble_dk(const PeriodicOperator& op, const VecD& k, int N, int axis);
Eigen::MatrixXcd assemble_d2k(const PeriodicOperator& op, int N, int ax1, int ax2);

}  // namespace pgreen
