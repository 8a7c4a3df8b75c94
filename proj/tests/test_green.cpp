#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "pgreen/green.hpp"

using namespace pgreen;

TEST_CASE("bump profile shape") {
  const double r = 2.0;
  CHECK(bump_profile(0.0, r) == 1.0);
  CHECK(bump_profile(0.999, r) == 1.0);  // flat inner plateau up to r/2
  CHECK(bump_profile(1.0, r) == 1.0);
  CHECK(bump_profile(2.0, r) == 0.0);
  CHECK(bump_profile(5.0, r) == 0.0);
  // reference value at 3r/4: t = 1/2, exp(1 - 4/3) = exp(-1/3)
  CHECK(bump_profile(1.5, r) == doctest::Approx(std::exp(-1.0 / 3.0)).epsilon(1e-14));
  // monotone on the shoulder
  double prev = 1.0;
  for (double s = 1.0; s < 2.0; s += 0.01) {
    double v = bump_profile(s, r);
    CHECK(v <= prev + 1e-15);
    prev = v;
  }
}

TEST_CASE("Newtonian constants") {
  CHECK(newtonian_constant(3) == doctest::Approx(1.0 / (4.0 * M_PI)).epsilon(1e-15));
  // Gamma(d/2-1)/(4 pi^{d/2}) equals 1/(d (d-2) omega_d), omega_d the unit
  // ball volume pi^{d/2} / Gamma(d/2 + 1)
  for (int d = 3; d <= 6; ++d) {
    double omega = std::pow(M_PI, d / 2.0) / std::tgamma(d / 2.0 + 1.0);
    CHECK(newtonian_constant(d) ==
          doctest::Approx(1.0 / (d * (d - 2) * omega)).epsilon(1e-14));
  }
  CHECK(newtonian_potential(3, 2.0) == doctest::Approx(1.0 / (8.0 * M_PI)).epsilon(1e-14));
  pgreen_test::expect_error([&] { newtonian_constant(2); }, ErrorCode::DimensionTooSmall);
}

TEST_CASE("leading term collapses to the Newtonian potential for the free operator") {
  EdgeCertificate cert = certify(catalog::free_laplacian(3), 1, 6, 2, 3);
  AsymptoticModel model = asymptotic_model(cert);
  CHECK(model.sqrt_det_H == doctest::Approx(std::sqrt(8.0)).epsilon(1e-8));
  VecD y = VecD::Zero(3);
  for (double R : {2.0, 5.0, 17.0}) {
    VecD x(3);
    x << 0.6 * R, -0.4 * R, 0.2 * R;  // generic direction
    std::complex<double> lead = asymptotic_leading(model, x, y);
    double want = newtonian_potential(3, (x - y).norm());
    CHECK(std::abs(lead - want) < 1e-12 * want);
  }
}

TEST_CASE("leading term identities") {
  PeriodicOperator op = catalog::separable_cosine(3, 2.0);
  double shift = 0.0;
  EdgeCertificate cert = certify_auto_shift(op, 1, 4, 3, 8, false, {}, &shift);
  AsymptoticModel model = asymptotic_model(cert);
  VecD x(3), y(3);
  x << 6.2, -3.0, 1.4;
  y << 0.3, 0.4, -0.1;
  std::complex<double> base = asymptotic_leading(model, x, y);

  // gauge invariance: a unit phase on phi0 drops out exactly
  AsymptoticModel gauged = model;
  gauged.phi0.coeffs *= std::exp(std::complex<double>(0.0, 0.8123));
  std::complex<double> g = asymptotic_leading(gauged, x, y);
  CHECK(std::abs(g - base) <= 1e-14 * std::abs(base));

  // homogeneity: H -> cH divides the value by c (d = 3: det^{1/2} ~ c^{3/2},
  // |H^{-1/2} z| ~ c^{-1/2})
  AsymptoticModel scaled = asymptotic_model(cert);
  const double c = 2.7;
  scaled.H *= c;
  scaled.sqrt_det_H *= std::pow(c, 1.5);
  scaled.H_inv_sqrt /= std::sqrt(c);
  std::complex<double> s = asymptotic_leading(scaled, x, y);
  CHECK(std::abs(s - base / c) <= 1e-12 * std::abs(base) / c);

  // Hermitian symmetry
  std::complex<double> xy = asymptotic_leading(model, x, y);
  std::complex<double> yx = asymptotic_leading(model, y, x);
  CHECK(std::abs(xy - std::conj(yx)) <= 1e-13 * std::abs(xy));
}

TEST_CASE("branch alignment fixes the eigenvector phase") {
  EdgeCertificate cert = certify(catalog::free_laplacian(2), 1, 6, 2, 3);
  Eigen::VectorXcd v = cert.phi0.coeffs * std::exp(std::complex<double>(0.0, -1.9));
  std::complex<double> factor = bloch_branch(cert.phi0, v);
  std::complex<double> overlap = (cert.phi0.coeffs.adjoint() * (factor * v)).value();
  CHECK(std::abs(overlap.imag()) < 1e-13);
  CHECK(overlap.real() > 0.0);
  // orthogonal vectors have no well-defined branch
  Eigen::VectorXcd w = Eigen::VectorXcd::Zero(v.size());
  w[1] = 1.0;
  if (std::abs(cert.phi0.coeffs[1]) < 1e-12)
    pgreen_test::expect_error([&] { bloch_branch(cert.phi0, w); }, ErrorCode::BranchLost);
}

TEST_CASE("free kernel quadrature approaches the Newtonian potential") {
  QuadratureSpec quad;
  quad.target_abs = 1e-7;
  quad.max_evals = 60000000;
  VecD x0(3);
  x0 << 8.0, 0.0, 0.0;
  KernelResult res = free_kernel_quadrature(x0, 0.0, 4.0, quad);
  CHECK(res.reference == doctest::Approx(newtonian_potential(3, 8.0)).epsilon(1e-14));
  CHECK(std::abs(res.value.real() / res.reference - 1.0) < 0.01);
  CHECK(std::abs(res.value.imag()) < 1e-6);
}

TEST_CASE("kernel quadrature rejects a symbol losing positivity") {
  QuadratureSpec quad;
  VecD x0(3);
  x0 << 4.0, 0.0, 0.0;
  // kappa large enough that 1 + kappa xi_1 vanishes inside the bump support
  pgreen_test::expect_error([&] { free_kernel_quadrature(x0, 0.3, 4.0, quad); },
                            ErrorCode::BadConfig);
}

TEST_CASE("full and reduced free Green functions agree with the closed form") {
  PeriodicOperator op = catalog::free_laplacian(3);
  EdgeCertificate cert = certify(op, 1, 6, 2, 3);
  QuadratureSpec quad;
  quad.target_abs = 2e-6;
  quad.max_evals = 60000000;
  VecD x(3), y = VecD::Zero(3);
  x << 5.0, 0.0, 0.0;
  GreenBatch batch = full_green_batch(op, cert, {{x, y}}, quad);
  double want = newtonian_potential(3, 5.0);
  CHECK(std::abs(batch.full[0].value.real() / want - 1.0) < 0.03);
  CHECK(std::abs(batch.full[0].value.imag()) < 1e-4 * want);
  // the reduced function carries the same leading behavior
  CHECK(std::abs(batch.reduced[0].value.real() / want - 1.0) < 0.08);
  CHECK(batch.full[0].n_evals > 0);
  CHECK(batch.full[0].far_M >= 4);
}
