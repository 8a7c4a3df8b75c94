#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "pgreen/separable.hpp"

using namespace pgreen;

namespace {
// frozen dense 1D values for -u'' + 2 cos(2 pi x)
constexpr double kMu1At0 = -0.05060384210714;
constexpr double kMu2AtPi = 10.85677820227433;
constexpr double kMu1Curv0 = 1.98977951475165;
}  // namespace

TEST_CASE("free operator reference is the exact paraboloid") {
  PeriodicOperator op = catalog::free_laplacian(3);
  SeparableReference ref = separable_reference(op, 8, 4, 256);
  CHECK(ref.d == 3);
  CHECK(ref.k0.norm() < 1e-9);
  CHECK(std::abs(ref.lambda0) < 1e-12);
  for (int a = 0; a < 3; ++a) CHECK(ref.H_diag[a] == doctest::Approx(2.0).epsilon(1e-6));
  // delta = distance to the nearest composed band != ground: pi^2 at band 2
  CHECK(ref.delta == doctest::Approx(M_PI * M_PI).epsilon(1e-6));
}

TEST_CASE("cosine reference reproduces the frozen dense constants") {
  PeriodicOperator raw = catalog::separable_cosine(3, 2.0);
  PeriodicOperator op = shift_and_flip(raw, 3.0 * kMu1At0, false);
  SeparableReference ref = separable_reference(op, 32, 6, 512);
  CHECK(std::abs(ref.lambda0) < 1e-9);
  CHECK(ref.k0.norm() < 1e-9);
  // H_diag comes from a second difference of dense eigenvalues; solver noise
  // through the 1/h^2 amplification caps its accuracy near 1e-5
  for (int a = 0; a < 3; ++a)
    CHECK(ref.H_diag[a] == doctest::Approx(kMu1Curv0).epsilon(1e-4));
  CHECK(ref.delta == doctest::Approx(kMu2AtPi - kMu1At0).epsilon(1e-7));
}

TEST_CASE("certificates agree with the reference on a matched cutoff") {
  // deep 1D well at the same plane-wave cutoff: certificate and reference see
  // the identical discretized operator, so everything matches to solver noise
  PeriodicOperator raw = catalog::separable_cosine(1, 24.0);
  double shift = 0.0;
  EdgeCertificate cert = certify_auto_shift(raw, 1, 8, 12, 3, false, {}, &shift);
  PeriodicOperator shifted = shift_and_flip(raw, shift, false);
  SeparableReference ref = separable_reference(shifted, 12, 4, 512);
  OracleComparison cmp = compare_to_oracle(cert, ref);
  CHECK(cmp.ok);
  CHECK(cmp.k0_dist < 1e-8);
  CHECK(cmp.lambda0_diff < 1e-9);
  // the reference Hessian is finite-difference limited even on a matched cutoff
  CHECK(cmp.h_diag_rel < 1e-4);
  CHECK(cmp.delta_rel < 1e-6);
}

TEST_CASE("two-dimensional composed gaps come from mixed index combos") {
  PeriodicOperator raw = catalog::separable_cosine(2, 2.0);
  PeriodicOperator op = shift_and_flip(raw, 2.0 * kMu1At0, false);
  SeparableReference ref = separable_reference(op, 24, 5, 512);
  // nearest competitor to the ground combo (1,1) is (1,2)/(2,1)
  CHECK(ref.delta == doctest::Approx(kMu2AtPi - kMu1At0).epsilon(1e-6));
  // the whole shift lands on axis 0, so its first band starts at -kMu1At0
  CHECK(ref.axis_min(0, 0) == doctest::Approx(-kMu1At0).epsilon(1e-6));
}

TEST_CASE("non-separable operators are rejected") {
  pgreen_test::expect_error([&] { separable_reference(catalog::magnetic_shear(2, 0.4), 16); },
                            ErrorCode::BadConfig);
  pgreen_test::expect_error(
      [&] { separable_reference(catalog::scalar_metric_laplacian(2), 16); },
      ErrorCode::BadConfig);

  // potential coupling two axes
  OperatorSpec spec;
  spec.d = 2;
  Freq diag = zero_freq();
  diag[0] = 1;
  diag[1] = 1;
  spec.c.push_back({diag, 0.5});
  spec.c.push_back({freq_neg(diag), 0.5});
  pgreen_test::expect_error([&] { separable_reference(build_operator(spec), 16); },
                            ErrorCode::BadConfig);
}

TEST_CASE("cutoff below the coefficient bandwidth is rejected") {
  PeriodicOperator op = catalog::separable_cosine(1, 2.0);
  pgreen_test::expect_error([&] { separable_reference(op, 0); }, ErrorCode::BadConfig);
}

TEST_CASE("comparison flags a wrong Hessian") {
  PeriodicOperator raw = catalog::separable_cosine(1, 2.0);
  double shift = 0.0;
  EdgeCertificate cert = certify_auto_shift(raw, 1, 8, 8, 3, false, {}, &shift);
  SeparableReference ref = separable_reference(shift_and_flip(raw, shift, false), 24, 4, 512);
  OracleComparison good = compare_to_oracle(cert, ref);
  CHECK(good.ok);
  cert.H(0, 0) *= 1.01;  // 1% off blows the 1e-4 relative gate
  OracleComparison bad = compare_to_oracle(cert, ref);
  CHECK(!bad.ok);
  CHECK(bad.h_diag_rel > 1e-3);
}
