#include <doctest.h>

#include <random>

#include "pgreen/bloch.hpp"
#include "pgreen/eigensolve.hpp"
#include "pgreen/operator.hpp"

using namespace pgreen;

namespace {

// Dense real-space oracle for one Galerkin entry: samples coefficients on a
// fine periodic grid and integrates
//   <e_i, L e_j> = mean_x [ (g_i+k+b)~.a.(g_j+k+b) + c ] e^{i(G_j-G_i).x}
// by the trapezoid rule, which is exact for trigonometric polynomials once
// the grid resolves every frequency in the product.
std::complex<double> entry_oracle(const PeriodicOperator& op, const VecD& k,
                                  const PlaneWaveBasis& basis, int i, int j, int grid) {
  const int d = op.dim();
  const std::complex<double> I(0.0, 1.0);
  VecD gi = basis.gvec(i), gj = basis.gvec(j);
  std::complex<double> acc(0.0, 0.0);
  long nn = grid_size(d, grid);
  for (long t = 0; t < nn; ++t) {
    auto ix = grid_unflatten(t, d, grid);
    VecD x(d);
    for (int a = 0; a < d; ++a) x[a] = (double)ix[a] / grid;
    Eigen::MatrixXcd am = op.a.empty()
                              ? Eigen::MatrixXcd::Identity(d, d).eval()
                              : op.a.evaluate_complex(x);
    Eigen::VectorXcd row(d), col(d);
    for (int a = 0; a < d; ++a) {
      row[a] = gi[a] + k[a];
      col[a] = gj[a] + k[a];
    }
    if (op.has_b()) {
      Eigen::MatrixXcd bv = op.b.evaluate_complex(x);
      for (int a = 0; a < d; ++a) {
        row[a] += bv(a, 0);
        col[a] += bv(a, 0);
      }
    }
    std::complex<double> v = (row.conjugate().transpose() * (am * col)).value();
    if (!op.c.empty()) v += op.c.evaluate_complex(x)(0, 0);
    double phase = 0.0;
    for (int a = 0; a < d; ++a) phase += (gj[a] - gi[a]) * x[a];
    acc += v * std::exp(I * phase);
  }
  return acc / (double)nn;
}

}  // namespace

TEST_CASE("free fiber is diagonal with |k+G|^2") {
  PeriodicOperator op = catalog::free_laplacian(3);
  VecD k(3);
  k << 0.3, -0.8, 1.9;
  BlochMatrix fiber = assemble_bloch(op, k, 2);
  CHECK(fiber.max_asymmetry < 1e-14);
  for (int i = 0; i < fiber.basis.size(); ++i) {
    VecD g = fiber.basis.gvec(i);
    double expect = (g + k).squaredNorm();
    CHECK(std::abs(fiber.entries(i, i) - expect) < 1e-12);
    for (int j = 0; j < i; ++j) CHECK(std::abs(fiber.entries(i, j)) == 0.0);
  }
}

TEST_CASE("assembly matches the dense real-space oracle") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int pick = 0; pick < 3; ++pick) {
    PeriodicOperator op = pick == 0   ? catalog::scalar_metric_laplacian(2)
                          : pick == 1 ? catalog::separable_cosine(2, 2.0)
                                      : catalog::magnetic_shear(2, 0.4);
    VecD k(2);
    k << u(rng), u(rng);
    BlochMatrix fiber = assemble_bloch(op, k, 2);
    CHECK(fiber.max_asymmetry < 1e-12);
    PlaneWaveBasis basis = fiber.basis;
    const int grid = 4 * (op.fmax() + 2) + 1;
    std::uniform_int_distribution<int> picki(0, basis.size() - 1);
    for (int t = 0; t < 8; ++t) {
      int i = picki(rng), j = picki(rng);
      std::complex<double> want = entry_oracle(op, k, basis, i, j, grid);
      CHECK(std::abs(fiber.entries(i, j) - want) < 1e-10);
    }
  }
}

TEST_CASE("assembled fibers are Hermitian to machine precision") {
  PeriodicOperator op = catalog::magnetic_shear(3, 0.7);
  VecD k(3);
  k << 1.2, -0.4, 0.6;
  BlochMatrix fiber = assemble_bloch(op, k, 2);
  double rel = (fiber.entries - fiber.entries.adjoint()).cwiseAbs().maxCoeff() /
               fiber.entries.cwiseAbs().maxCoeff();
  CHECK(rel < 1e-12);
}

TEST_CASE("dk matches finite differences of the assembly") {
  for (int pick = 0; pick < 2; ++pick) {
    PeriodicOperator op =
        pick == 0 ? catalog::scalar_metric_laplacian(2) : catalog::magnetic_shear(2, 0.5);
    FiberContext ctx(op, 2);
    VecD k(2);
    k << 0.25, -0.65;
    const double h = 1e-5;
    for (int axis = 0; axis < 2; ++axis) {
      Eigen::MatrixXcd analytic = ctx.dk(k, axis);
      VecD kp = k, km = k;
      kp[axis] += h;
      km[axis] -= h;
      Eigen::MatrixXcd fd =
          (ctx.assemble(kp).entries - ctx.assemble(km).entries) / (2.0 * h);
      CHECK((analytic - fd).cwiseAbs().maxCoeff() < 1e-8);
    }
  }
}

TEST_CASE("free operator dk at k=0 vanishes on the zero frequency") {
  PeriodicOperator op = catalog::free_laplacian(2);
  FiberContext ctx(op, 2);
  VecD k = VecD::Zero(2);
  Eigen::MatrixXcd dk0 = ctx.dk(k, 0);
  int i0 = ctx.basis().index_of(zero_freq());
  CHECK(std::abs(dk0(i0, i0)) == 0.0);
}

TEST_CASE("d2k matches finite differences of dk") {
  PeriodicOperator op = catalog::scalar_metric_laplacian(2);
  FiberContext ctx(op, 2);
  VecD k(2);
  k << 0.1, 0.7;
  const double h = 1e-5;
  for (int m = 0; m < 2; ++m)
    for (int n = 0; n < 2; ++n) {
      Eigen::MatrixXcd analytic = ctx.d2k(m, n);
      VecD kp = k, km = k;
      kp[n] += h;
      km[n] -= h;
      Eigen::MatrixXcd fd = (ctx.dk(kp, m) - ctx.dk(km, m)) / (2.0 * h);
      CHECK((analytic - fd).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("torus functions evaluate and pair correctly") {
  PlaneWaveBasis basis(2, 1);
  TorusFunction f;
  f.k = VecD::Zero(2);
  f.k << 0.5, -0.25;
  f.basis = basis;
  f.coeffs = Eigen::VectorXcd::Zero(basis.size());
  f.coeffs[basis.index_of(zero_freq())] = 1.0;
  f.coeffs[basis.index_of(make_freq({1, 0}))] = std::complex<double>(0.0, 0.5);

  VecD x(2);
  x << 0.3, 0.8;
  std::complex<double> part = f.periodic_part(x);
  std::complex<double> I(0.0, 1.0);
  std::complex<double> want = 1.0 + 0.5 * I * std::exp(I * 2.0 * M_PI * x[0]);
  CHECK(std::abs(part - want) < 1e-14);
  std::complex<double> phase = std::exp(I * (f.k[0] * x[0] + f.k[1] * x[1]));
  CHECK(std::abs(f.bloch_value(x) - phase * want) < 1e-14);
  CHECK(f.l2_norm() == doctest::Approx(std::sqrt(1.25)).epsilon(1e-14));

  TorusFunction g = f;
  g.coeffs[0] = 2.0;
  std::complex<double> ip = inner(f, g);
  // <f,g> = conj(1)*2 + conj(0.5 i)*0.5 i = 2 + 0.25
  CHECK(std::abs(ip - std::complex<double>(2.25, 0.0)) < 1e-14);
}

TEST_CASE("fiber spectra repeat across dual lattice translations of k") {
  // L(k + 2 pi e_m) is unitarily equivalent to L(k) by re-centering the
  // frequency window, so the low eigenvalues must agree up to the (super-
  // exponentially small) truncation difference of the two windows.
  PeriodicOperator op = catalog::separable_cosine(2, 2.0);
  validate(op);
  FiberContext ctx(op, 6);
  VecD k(2);
  k << 0.3, -0.8;
  FiberSolution base = solve_fiber(ctx.assemble(k), 3);
  for (int m = 0; m < 2; ++m) {
    VecD ks = k;
    ks[m] += 2.0 * M_PI;
    FiberSolution shifted = solve_fiber(ctx.assemble(ks), 3);
    for (int j = 0; j < 3; ++j)
      CHECK(std::abs(base.values[j] - shifted.values[j]) < 1e-8);
  }
}
