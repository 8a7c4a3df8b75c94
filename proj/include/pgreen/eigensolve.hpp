#pragma once

#include <Eigen/Dense>
#include <vector>

#include "pgreen/bloch.hpp"

namespace pgreen {

// Backend selection for the fiber eigenproblem. Auto picks the cheapest exact
// route: diagonal matrices are sorted directly, real symmetric ones go through
// dsyevr, everything else through zheevr. Eigen3 keeps a slower reference
// implementation around so the LAPACK paths can be cross-checked in tests.
enum class EigenBackend { Auto, Lapack, Eigen3 };

struct FiberSolution {
  Eigen::VectorXd values;    // ascending; if the matrix was flipped these are
                             // the flipped-problem eigenvalues (see below)
  Eigen::MatrixXcd vectors;  // columns, orthonormal, one per requested value
  bool flipped = false;
};

// Lowest `nev` eigenpairs of a Bloch fiber matrix. For a flipped operator the
// assembled matrix represents shift - L, whose *largest* eigenvalues carry the
// spectral edge; we solve the negated matrix for its lowest ones and negate
// the values back, so values[j] is always the j-th band of the problem the
// caller actually posed and band indices line up with the unflipped order.
FiberSolution solve_fiber(const BlochMatrix& fiber, int nev,
                          EigenBackend backend = EigenBackend::Auto);

// Full spectrum variant (all m eigenpairs).
FiberSolution solve_fiber_full(const BlochMatrix& fiber,
                               EigenBackend backend = EigenBackend::Auto);

// max_j |A v_j - lambda_j v_j|_2, a cheap a-posteriori check used in tests.
double eigen_residual(const BlochMatrix& fiber, const FiberSolution& sol);

}  // namespace pgreen
