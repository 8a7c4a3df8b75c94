#pragma once

#include <string>
#include <vector>

#include "pgreen/fourier_field.hpp"
#include "pgreen/lattice.hpp"

namespace pgreen {

// Periodic second-order operator
//   L = sum_{j,l} (D_j + b_j) a_{jl} (D_l + b_l) + c,   D_j = -i d/dx_j,
// with smooth real Z^d-periodic coefficients given as finite Fourier series.
// Ellipticity: sum a_{jl} xi_j xi_l >= theta |xi|^2 with theta > 0.
//
// `flipped` marks an operator produced by shift_and_flip with sign change:
// the stored a and c are negated, so the operator as written is not elliptic.
// Downstream code (validation, fiber solves) consults the flag instead of
// re-deriving this.
struct PeriodicOperator {
  LatticeSpec lattice{3};
  FourierField a;  // matrix
  FourierField b;  // vector
  FourierField c;  // scalar
  double theta = 0.0;
  bool flipped = false;

  int dim() const { return lattice.d; }
  int fmax() const;
  bool has_b() const { return !b.empty(); }
};

// Structured operator description, mirroring the JSON file format. Frequencies
// are integer multi-indices n with G = 2*pi*n. Omitted a defaults to the
// identity metric; omitted b and c default to zero.
struct OperatorSpec {
  int d = 3;
  struct AEntry {
    Freq n = zero_freq();
    int j = 0, l = 0;
    std::complex<double> v;
  };
  struct BEntry {
    Freq n = zero_freq();
    int j = 0;
    std::complex<double> v;
  };
  struct CEntry {
    Freq n = zero_freq();
    std::complex<double> v;
  };
  std::vector<AEntry> a;
  std::vector<BEntry> b;
  std::vector<CEntry> c;
  bool a_given = false;  // distinguishes "omitted" from "explicitly empty"
};

struct BuildOptions {
  bool auto_symmetrize = true;
  double warn_tol = 1e-12;
};

PeriodicOperator build_operator(const OperatorSpec& spec, const BuildOptions& opts = {},
                                std::vector<std::string>* warnings = nullptr);

struct ValidationReport {
  double theta_estimate = 0.0;
  bool is_real = false;
  bool is_symmetric = false;
  bool elliptic = false;
  int sample_grid = 0;
};

// Samples the metric on a dense grid (at least 2*fmax+1 per axis, refined x2
// once) and takes the minimum eigenvalue as the ellipticity constant.
// Throws NotElliptic if the estimate is <= 0. Flipped operators are checked
// against their unflipped metric. On success op.theta is updated.
ValidationReport validate(PeriodicOperator& op, int grid_n = 0);

// Returns the operator with fiber eigenvalues
//   flip = false:  lambda'_j(k) = lambda_j(k) - shift
//   flip = true:   lambda'_j(k) = shift - lambda_j(k)   (band order preserved)
// Flip negates a and c only; b is kept. The result carries flipped = true.
PeriodicOperator shift_and_flip(const PeriodicOperator& op, double shift, bool flip);

namespace catalog {
PeriodicOperator free_laplacian(int d);
// -Delta + sum_i q cos(2 pi x_i)
PeriodicOperator separable_cosine(int d, double q);
// (2 + cos(2 pi x_1)) I metric, zero potential
PeriodicOperator scalar_metric_laplacian(int d);
// -Delta with magnetic potential b = (beta sin(2 pi x_2), 0, ..., 0)
PeriodicOperator magnetic_shear(int d, double beta);
}  // namespace catalog

}  // namespace pgreen
