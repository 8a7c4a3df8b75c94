#pragma once

#include <cmath>
#include <vector>

#include "pgreen/eigensolve.hpp"

namespace pgreen {

// Band functions lambda_j(k) sampled on the uniform Gamma-centered M^d grid
// over B = [-pi,pi]^d (zone_grid order). values(j-1, node) is band j. For an
// unflipped operator each column is ascending; a flipped operator keeps the
// original band indexing, so columns are descending there.
struct BandSurface {
  int d = 3;
  int M = 0;
  int N = 0;
  int n_b = 0;
  bool flipped = false;
  Eigen::MatrixXd values;                // n_b x M^d
  std::vector<Eigen::MatrixXcd> vectors; // per node, m x n_b; empty unless requested

  long nodes() const { return grid_size(d, M); }
};

BandSurface band_grid(const PeriodicOperator& op, int M, int n_b, int N,
                      bool keep_vectors = false,
                      EigenBackend backend = EigenBackend::Auto);

// Hellmann-Feynman gradient of band j at k: grad_m = <v, dL/dk_m v>.
// Throws DegenerateBand when the eigenvalue gap to a neighbor band is below
// degeneracy_tol (the band function is then not differentiable).
VecD band_gradient(const FiberContext& ctx, const VecD& k, int j,
                   double degeneracy_tol = 1e-8);
VecD band_gradient(const PeriodicOperator& op, const VecD& k, int j, int N,
                   double degeneracy_tol = 1e-8);

enum class HessianMethod { Perturbation, FiniteDifference };

// Second derivative matrix of band j at k0. Perturbation sums over the full
// discretized spectrum:
//   H_mn = <v, d2L_mn v> + 2 Re sum_{i != j} <v, dL_m v_i><v_i, dL_n v> / (l_j - l_i).
// FiniteDifference uses central second differences of lambda_j with step
// h = 1e-3 and one Richardson step. Both results are symmetrized.
Eigen::MatrixXd band_hessian(const FiberContext& ctx, const VecD& k0, int j,
                             HessianMethod method = HessianMethod::Perturbation,
                             double degeneracy_tol = 1e-8);
Eigen::MatrixXd band_hessian(const PeriodicOperator& op, const VecD& k0, int j, int N,
                             HessianMethod method = HessianMethod::Perturbation,
                             double degeneracy_tol = 1e-8);

struct EdgeLocation {
  VecD k0;
  double lambda0 = 0.0;
  double grad_norm = 0.0;
  FiberSolution at_k0;  // bands 1..j+1 at k0
};

// Refines the grid argmin of band j by Newton iteration on the
// Hellmann-Feynman gradient until |grad| < grad_tol; the returned minimizer
// is reduced to B. Throws NotIsolatedMinimum when the grid carries two
// non-adjacent local minima within value_tol of the global one, and
// DegenerateBand when the band touches a neighbor at the minimizer.
EdgeLocation locate_edge(const PeriodicOperator& op, const BandSurface& surface, int j,
                         double grad_tol = 1e-10, double value_tol = 1e-9);

struct EdgeCertificate {
  int j = 0;
  VecD k0;
  double lambda0 = 0.0;
  double grad_norm = 0.0;
  Eigen::MatrixXd H;
  double delta = 0.0;        // distance from 0 to every other band over the grid
  double r0 = 0.0;           // cutoff radius for the spectral localizer
  TorusFunction phi0;        // periodic part at k0, largest coefficient real positive
  double phi0_norm = 1.0;    // L2(T) norm of phi0
  bool multiplicity_ok = false;
  bool flipped = false;
  int N = 0, M = 0, n_b = 0;
};

struct CertifyOptions {
  double grad_tol = 1e-10;
  double value_tol = 1e-9;
  double degeneracy_tol = 1e-8;
  double a1_tol = 1e-8;
  double r0_cap = M_PI / 2;     // keeps the cutoff ball inside half a cell of the dual torus
  int ray_samples = 16;
  double quad_window = 0.30;    // band must stay within 30% of its quadratic model
  HessianMethod hessian = HessianMethod::Perturbation;
};

// Certifies the four edge conditions for band j of an operator already
// shifted (and possibly flipped) so the candidate edge sits at 0:
//   A1 |lambda_j(k0)| <= a1_tol, A2 all other bands stay away from 0 over B,
//   A3 the grid minimum is unique up to 2 pi periodicity, A4 the Hessian is
//   positive definite.
// Reported failures use the matching error codes A1Violated..A4Violated.
EdgeCertificate certify(const PeriodicOperator& op, int j, int M, int N, int n_b,
                        const CertifyOptions& opts = {});

// Convenience wrapper: locates the edge once to find the exact spectral
// value, shifts the operator so the edge is 0 (flipping for a band maximum
// when flip is set), then certifies. Returns the applied shift through
// *shift_out if given.
EdgeCertificate certify_auto_shift(const PeriodicOperator& op, int j, int M, int N, int n_b,
                                   bool flip, const CertifyOptions& opts = {},
                                   double* shift_out = nullptr);

// Largest fitted exponent story for the Taylor remainder: samples
// |lambda_j(k) - lambda0 - 0.5 (k-k0)^T H (k-k0)| along rays at dyadic radii
// r0 * 2^{-i} and returns the smallest least-squares slope of log-residual
// vs log-radius over the rays (points at the numerical noise floor are
// dropped; rays with fewer than 3 usable points are skipped).
double quadratic_residual_exponent(const PeriodicOperator& op, const EdgeCertificate& cert,
                                   int levels = 6);

}  // namespace pgreen
