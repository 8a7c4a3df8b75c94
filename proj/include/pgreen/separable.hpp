#pragma once

#include <vector>

#include "pgreen/band.hpp"

namespace pgreen {

// Independent reference for operators of the form  alpha (-Delta) + sum_a c_a(x_a):
// every fiber matrix is a Kronecker sum of 1D fibers, so d-dimensional band
// data composes exactly from dense 1D solves. Used to cross-check the full
// pipeline (edge location, Hessians, gaps) against a discretization whose
// only parameter is the 1D cutoff N1.
struct SeparableReference {
  int d = 0;
  int J = 0;             // per-axis bands kept (certificate band convention)
  bool flipped = false;
  VecD k0;               // per-axis minimizer of the composed first band
  double lambda0 = 0.0;  // min over k of the composed first band
  VecD H_diag;           // exact-structure Hessian is diagonal: d^2/dk_a^2 of band 1
  double delta = 0.0;    // distance from 0 to every other composed band, exactly
                         // min over index combos != (1,...,1) of the interval distance
  Eigen::MatrixXd axis_min, axis_max;  // J x d per-axis band extrema over [-pi,pi)
};

// Builds the reference from dense 1D fibers at cutoff N1, scanning a K-node
// grid per axis and refining extrema by ternary search. Throws BadConfig when
// the operator is not of the separable form above, or when J axis bands
// cannot isolate the edge (truncation guard).
SeparableReference separable_reference(const PeriodicOperator& op, int N1, int J = 6,
                                       int K = 1024);

struct OracleTolerances {
  double k0_tol = 1e-6;        // per-axis torus distance
  double lambda0_tol = 1e-8;   // absolute
  double h_diag_rel = 1e-4;
  double h_offdiag_abs = 1e-6;
  double delta_rel = 1e-2;
};

struct OracleComparison {
  double k0_dist = 0.0;
  double lambda0_diff = 0.0;
  double h_diag_rel = 0.0;
  double h_offdiag_abs = 0.0;
  double delta_rel = 0.0;
  bool ok = false;
};

OracleComparison compare_to_oracle(const EdgeCertificate& cert,
                                   const SeparableReference& ref,
                                   const OracleTolerances& tol = {});

}  // namespace pgreen
