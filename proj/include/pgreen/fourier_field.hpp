#pragma once

#include <complex>
#include <map>

#include <Eigen/Dense>

#include "pgreen/lattice.hpp"

namespace pgreen {

enum class FieldRank { Scalar, Vector, Matrix };

// Finite Fourier series of a smooth Z^d-periodic coefficient:
//   f(x) = sum_n  coeff(n) * exp(2*pi*i n.x)
// Scalar fields store 1x1 blocks, vector fields dx1, matrix fields dxd.
// A real-valued field satisfies coeff(-n) = conj(coeff(n)); a symmetric
// matrix field additionally has symmetric blocks.
class FourierField {
 public:
  FourierField() = default;
  FourierField(FieldRank rank, int dim);

  FieldRank rank() const { return rank_; }
  int dim() const { return dim_; }
  int rows() const;
  int cols() const;

  bool empty() const { return coeffs_.empty(); }
  int fmax() const;  // max |n_i| over stored frequencies

  // Accumulates into the block at frequency n.
  void add(const Freq& n, const Eigen::MatrixXcd& block);
  void add_scalar(const Freq& n, std::complex<double> v);
  void add_vector_entry(const Freq& n, int j, std::complex<double> v);
  void add_matrix_entry(const Freq& n, int j, int l, std::complex<double> v);

  const std::map<Freq, Eigen::MatrixXcd>& coeffs() const { return coeffs_; }
  Eigen::MatrixXcd at(const Freq& n) const;  // zero block if absent

  // Projects onto coeff(-n) = conj(coeff(n)); returns the largest adjustment.
  double symmetrize_conjugate();
  // Projects matrix blocks onto their symmetric part; returns largest adjustment.
  double symmetrize_matrix();

  void scale(std::complex<double> s);
  void prune(double tol = 0.0);  // drop blocks with max|entry| <= tol

  Eigen::MatrixXcd evaluate_complex(const VecD& x) const;

  FourierField operator*(const FourierField& rhs) const = delete;

 private:
  FieldRank rank_ = FieldRank::Scalar;
  int dim_ = 0;
  std::map<Freq, Eigen::MatrixXcd> coeffs_;
};

// Pointwise evaluation dropping imaginary parts below 1e-12 (relative);
// reports the worst residual through max_imag if given.
Eigen::MatrixXd evaluate_field(const FourierField& f, const VecD& x, double* max_imag = nullptr);

// Frequency-domain products used by fiber assembly. Supports are finite, so
// these are exact convolutions.
FourierField convolve_scalar(const FourierField& f, const FourierField& g);
// (a.b)_j = sum_l a_{jl} * b_l  -> vector field
FourierField matvec_convolve(const FourierField& a, const FourierField& b);
// (b.a)_l = sum_j b_j * a_{jl}  -> vector field
FourierField vecmat_convolve(const FourierField& b, const FourierField& a);
// b.a.b -> scalar field
FourierField bilinear_convolve(const FourierField& b, const FourierField& a);

}  // namespace pgreen
