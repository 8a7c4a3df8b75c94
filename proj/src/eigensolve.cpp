#include "pgreen/eigensolve.hpp"

#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pgreen/errors.hpp"

namespace pgreen {

namespace {

bool is_diagonal(const Eigen::MatrixXcd& A) {
  const int m = static_cast<int>(A.rows());
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i)
      if (i != j && A(i, j) != std::complex<double>(0.0, 0.0)) return false;
  return true;
}

double max_imag(const Eigen::MatrixXcd& A) {
  double v = 0.0;
  for (int j = 0; j < A.cols(); ++j)
    for (int i = 0; i < A.rows(); ++i) v = std::max(v, std::abs(A(i, j).imag()));
  return v;
}

FiberSolution solve_diagonal(const Eigen::MatrixXcd& A, int nev) {
  const int m = static_cast<int>(A.rows());
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) {
    return A(i, i).real() < A(j, j).real();
  });
  FiberSolution sol;
  sol.values.resize(nev);
  sol.vectors = Eigen::MatrixXcd::Zero(m, nev);
  for (int j = 0; j < nev; ++j) {
    sol.values[j] = A(order[j], order[j]).real();
    sol.vectors(order[j], j) = 1.0;
  }
  return sol;
}

FiberSolution solve_real_lapack(const Eigen::MatrixXcd& A, int nev) {
  const int m = static_cast<int>(A.rows());
  std::vector<double> a(static_cast<size_t>(m) * m);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i) a[static_cast<size_t>(j) * m + i] = A(i, j).real();

  std::vector<double> w(m);
  std::vector<double> z(static_cast<size_t>(m) * nev);
  std::vector<lapack_int> isuppz(2 * std::max(1, nev));
  lapack_int found = 0;
  lapack_int info = LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'I', 'L', m, a.data(), m,
                                   0.0, 0.0, 1, nev, 0.0, &found, w.data(), z.data(), m,
                                   isuppz.data());
  if (info != 0 || found < nev)
    fail(ErrorCode::EigenSolverFailure,
         "dsyevr failed with info=" + std::to_string(info));

  FiberSolution sol;
  sol.values = Eigen::Map<Eigen::VectorXd>(w.data(), nev);
  sol.vectors.resize(m, nev);
  for (int j = 0; j < nev; ++j)
    for (int i = 0; i < m; ++i)
      sol.vectors(i, j) = z[static_cast<size_t>(j) * m + i];
  return sol;
}

FiberSolution solve_complex_lapack(const Eigen::MatrixXcd& A, int nev) {
  const int m = static_cast<int>(A.rows());
  std::vector<lapack_complex_double> a(static_cast<size_t>(m) * m);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i) {
      const std::complex<double>& v = A(i, j);
      a[static_cast<size_t>(j) * m + i] = lapack_complex_double{v.real(), v.imag()};
    }

  std::vector<double> w(m);
  std::vector<lapack_complex_double> z(static_cast<size_t>(m) * nev);
  std::vector<lapack_int> isuppz(2 * std::max(1, nev));
  lapack_int found = 0;
  lapack_int info = LAPACKE_zheevr(LAPACK_COL_MAJOR, 'V', 'I', 'L', m, a.data(), m,
                                   0.0, 0.0, 1, nev, 0.0, &found, w.data(), z.data(), m,
                                   isuppz.data());
  if (info != 0 || found < nev)
    fail(ErrorCode::EigenSolverFailure,
         "zheevr failed with info=" + std::to_string(info));

  FiberSolution sol;
  sol.values = Eigen::Map<Eigen::VectorXd>(w.data(), nev);
  sol.vectors.resize(m, nev);
  for (int j = 0; j < nev; ++j)
    for (int i = 0; i < m; ++i) {
      const lapack_complex_double& v = z[static_cast<size_t>(j) * m + i];
      sol.vectors(i, j) = v;
    }
  return sol;
}

FiberSolution solve_eigen3(const Eigen::MatrixXcd& A, int nev) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(A);
  if (es.info() != Eigen::Success)
    fail(ErrorCode::EigenSolverFailure, "Eigen SelfAdjointEigenSolver did not converge");
  FiberSolution sol;
  sol.values = es.eigenvalues().head(nev);
  sol.vectors = es.eigenvectors().leftCols(nev);
  return sol;
}

FiberSolution solve_lowest(const Eigen::MatrixXcd& A, int nev, EigenBackend backend) {
  switch (backend) {
    case EigenBackend::Eigen3:
      return solve_eigen3(A, nev);
    case EigenBackend::Lapack: {
      const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
      if (max_imag(A) <= 1e-13 * scale) return solve_real_lapack(A, nev);
      return solve_complex_lapack(A, nev);
    }
    case EigenBackend::Auto:
    default: {
      if (is_diagonal(A)) return solve_diagonal(A, nev);
      const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
      if (max_imag(A) <= 1e-13 * scale) return solve_real_lapack(A, nev);
      return solve_complex_lapack(A, nev);
    }
  }
}

}  // namespace

FiberSolution solve_fiber(const BlochMatrix& fiber, int nev, EigenBackend backend) {
  const int m = static_cast<int>(fiber.entries.rows());
  if (nev < 1 || nev > m)
    fail(ErrorCode::BadConfig, "requested " + std::to_string(nev) +
                                   " eigenpairs from a fiber of size " + std::to_string(m));
  FiberSolution sol;
  if (fiber.flipped) {
    // The matrix holds shift - L; its top of spectrum is the bottom of the
    // negated matrix, and negating the values back preserves band order.
    Eigen::MatrixXcd neg = -fiber.entries;
    sol = solve_lowest(neg, nev, backend);
    sol.values = -sol.values;
  } else {
    sol = solve_lowest(fiber.entries, nev, backend);
  }
  sol.flipped = fiber.flipped;
  return sol;
}

FiberSolution solve_fiber_full(const BlochMatrix& fiber, EigenBackend backend) {
  return solve_fiber(fiber, static_cast<int>(fiber.entries.rows()), backend);
}

double eigen_residual(const BlochMatrix& fiber, const FiberSolution& sol) {
  // Works for flipped fibers too: the stored matrix satisfies M v = values[j] v.
  double worst = 0.0;
  for (int j = 0; j < sol.vectors.cols(); ++j) {
    Eigen::VectorXcd r =
        fiber.entries * sol.vectors.col(j) - sol.values[j] * sol.vectors.col(j);
    worst = std::max(worst, r.norm());
  }
  return worst;
}

}  // namespace pgreen
