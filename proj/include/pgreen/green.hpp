#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "pgreen/band.hpp"
#include "pgreen/quadrature.hpp"

namespace pgreen {

// Smooth radial cutoff: 1 on [0, r/2], exp(1 - 1/(1-t^2)) with t = 2s/r - 1
// on (r/2, r), 0 from r on.
double bump_profile(double s, double r);

// C_d = Gamma(d/2 - 1) / (4 pi^{d/2}), the constant in C_d / |x|^{d-2}.
double newtonian_constant(int d);
// C_d / dist^{d-2}; requires d >= 3 and dist > 0.
double newtonian_potential(int d, double dist);

// Geometry of the certified edge needed by the leading-order formula.
struct AsymptoticModel {
  int d = 3;
  VecD k0;
  Eigen::MatrixXd H;
  double sqrt_det_H = 0.0;
  Eigen::MatrixXd H_inv_sqrt;
  TorusFunction phi0;
  double phi0_norm = 1.0;
  bool flipped = false;
};

AsymptoticModel asymptotic_model(const EdgeCertificate& cert);

// Leading term of the Green function for |x - y| -> infinity:
//   pi^{-d/2} Gamma((d-2)/2) / (2 sqrt(det H)) * e^{i k0.(x-y)}
//     * phi0(x) conj(phi0(y)) / (phi0_norm^2 |H^{-1/2}(x-y)|^{d-2}).
// For the free operator this reduces exactly to C_d / |x-y|^{d-2}.
std::complex<double> asymptotic_leading(const AsymptoticModel& model, const VecD& x,
                                        const VecD& y);

// Phase factor aligning an eigenvector with the certified phi0 branch:
// multiplying v by the returned factor makes <phi0, v> real positive. Throws
// BranchLost when the overlap is below tol_rel relatively.
std::complex<double> bloch_branch(const TorusFunction& phi0, const Eigen::VectorXcd& v,
                                  double tol_rel = 1e-6);

struct GreenEvaluation {
  VecD x, y;
  std::complex<double> value{0.0, 0.0};
  double est_error = 0.0;     // quadrature indicator + band tail + eps extrapolation
  double tail_bound = 0.0;    // zone mean of 1 / |lambda_{first excluded band}|
  double tail_estimate = 0.0; // geometric extrapolation of the truncated band sum
  long n_evals = 0;           // fiber solves shared by the whole batch
  int far_M = 0;
  double eps = 0.0;
};

struct GreenBatch {
  std::vector<GreenEvaluation> full;     // all bands, near/far split around k0
  std::vector<GreenEvaluation> reduced;  // certified band only, bare pole
};

// Evaluates the full and the single-band (reduced) Green function at each
// (x, y) pair by one shared pair of quadratures: an adaptive cube around k0
// carrying the near-edge singularity and a uniform trapezoid grid over B for
// everything smooth. With eps > 0 the pole is regularized and the eps -> 0
// limit is Richardson-extrapolated from eps, eps/2, eps/4.
GreenBatch full_green_batch(const PeriodicOperator& op, const EdgeCertificate& cert,
                            const std::vector<std::pair<VecD, VecD>>& pairs,
                            const QuadratureSpec& quad);

GreenEvaluation full_green(const PeriodicOperator& op, const EdgeCertificate& cert,
                           const VecD& x, const VecD& y, const QuadratureSpec& quad);
GreenEvaluation reduced_green(const PeriodicOperator& op, const EdgeCertificate& cert,
                              const VecD& x, const VecD& y, const QuadratureSpec& quad);

struct SweepRow {
  double R = 0.0;
  VecD x, y;
  std::complex<double> green{0.0, 0.0};
  std::complex<double> reduced{0.0, 0.0};
  std::complex<double> leading{0.0, 0.0};
  double abs_ratio_minus_1 = 0.0;  // |green / leading - 1|
  double est_error = 0.0;
  bool below_noise = false;  // deviation smaller than the error indicator
};

struct SweepResult {
  std::vector<SweepRow> rows;
  double fitted_exponent = 0.0;  // log-log slope of |ratio - 1| vs R; -99 if unfit
};

// Green/leading comparison at x = R u, y = 0 for each radius. All radii share
// one batched quadrature.
SweepResult ratio_sweep(const PeriodicOperator& op, const EdgeCertificate& cert,
                        const std::vector<double>& radii, const VecD& direction,
                        const QuadratureSpec& quad);

struct KernelResult {
  std::complex<double> value{0.0, 0.0};
  double reference = 0.0;  // C_d / |x0|^{d-2}
  double est_error = 0.0;
  long n_evals = 0;
};

// Model check without any operator machinery: integrates
//   (2 pi)^{-d} int e^{i xi.x0} mu(|xi|) / (|xi|^2 (1 + kappa xi_1)) dxi
// with the same smooth bump mu supported on |xi| < mu_radius. For kappa = 0
// this tends to the Newtonian potential as |x0| grows; kappa perturbs the
// symbol at cubic order and shifts the result at O(1/|x0|).
KernelResult free_kernel_quadrature(const VecD& x0, double kappa, double mu_radius,
                                    const QuadratureSpec& quad);

}  // namespace pgreen
