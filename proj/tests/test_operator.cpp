#include <doctest.h>

#include "helpers.hpp"
#include "pgreen/bloch.hpp"
#include "pgreen/eigensolve.hpp"
#include "pgreen/operator.hpp"

using namespace pgreen;
using pgreen_test::expect_error;

TEST_CASE("omitted metric defaults to the identity") {
  OperatorSpec spec;
  spec.d = 3;
  PeriodicOperator op = build_operator(spec);
  ValidationReport rep = validate(op);
  CHECK(rep.elliptic);
  CHECK(rep.is_real);
  CHECK(rep.is_symmetric);
  CHECK(rep.theta_estimate == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(op.theta == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("auto symmetrization repairs conjugate asymmetry and warns") {
  OperatorSpec spec;
  spec.d = 2;
  // lone frequency without its conjugate partner: not a real-valued potential
  spec.c.push_back({make_freq({1, 0}), {0.4, 0.1}});
  std::vector<std::string> warnings;
  PeriodicOperator op = build_operator(spec, {}, &warnings);
  CHECK(!warnings.empty());
  std::complex<double> hi = op.c.at(make_freq({1, 0}))(0, 0);
  std::complex<double> lo = op.c.at(make_freq({-1, 0}))(0, 0);
  CHECK(std::abs(hi - std::conj(lo)) < 1e-14);
}

TEST_CASE("validate rejects a sign-indefinite metric") {
  OperatorSpec spec;
  spec.d = 2;
  spec.a_given = true;
  for (int j = 0; j < 2; ++j) spec.a.push_back({zero_freq(), j, j, {1.0, 0.0}});
  // oscillation bigger than the mean: a_11(x) dips negative
  spec.a.push_back({make_freq({1, 0}), 0, 0, {0.75, 0.0}});
  spec.a.push_back({make_freq({-1, 0}), 0, 0, {0.75, 0.0}});
  PeriodicOperator op = build_operator(spec);
  expect_error([&] { validate(op); }, ErrorCode::NotElliptic);
}

TEST_CASE("scalar metric estimate reaches the pointwise minimum") {
  PeriodicOperator op = catalog::scalar_metric_laplacian(3);
  ValidationReport rep = validate(op);
  CHECK(rep.elliptic);
  CHECK(rep.theta_estimate == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("shift_and_flip maps fiber spectra as stated") {
  PeriodicOperator op = catalog::separable_cosine(2, 2.0);
  const double shift = 0.7;
  PeriodicOperator minus = shift_and_flip(op, shift, false);
  PeriodicOperator flip = shift_and_flip(op, shift, true);
  CHECK(!minus.flipped);
  CHECK(flip.flipped);

  VecD k(2);
  k << 0.4, -1.1;
  const int nev = 5;
  FiberSolution base = solve_fiber(assemble_bloch(op, k, 3), nev);
  FiberSolution shifted = solve_fiber(assemble_bloch(minus, k, 3), nev);
  FiberSolution flipped = solve_fiber(assemble_bloch(flip, k, 3), nev);
  for (int j = 0; j < nev; ++j) {
    CHECK(shifted.values[j] == doctest::Approx(base.values[j] - shift).epsilon(1e-12));
    CHECK(flipped.values[j] == doctest::Approx(shift - base.values[j]).epsilon(1e-12));
  }
}

TEST_CASE("flip of flip restores the original spectrum") {
  PeriodicOperator op = catalog::separable_cosine(2, 1.0);
  PeriodicOperator twice = shift_and_flip(shift_and_flip(op, 0.3, true), 0.3, true);
  CHECK(!twice.flipped);
  VecD k(2);
  k << -0.2, 0.9;
  FiberSolution a = solve_fiber(assemble_bloch(op, k, 3), 4);
  FiberSolution b = solve_fiber(assemble_bloch(twice, k, 3), 4);
  for (int j = 0; j < 4; ++j)
    CHECK(a.values[j] == doctest::Approx(b.values[j]).epsilon(1e-12));
}

TEST_CASE("catalog operators have the advertised coefficients") {
  PeriodicOperator cosine = catalog::separable_cosine(3, 2.0);
  // 2 cos(2 pi x_i) contributes 1.0 at +-e_i
  for (int a = 0; a < 3; ++a) {
    Freq n = zero_freq();
    n[a] = 1;
    CHECK(cosine.c.at(n)(0, 0).real() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(cosine.c.at(freq_neg(n))(0, 0).real() == doctest::Approx(1.0).epsilon(1e-14));
  }
  CHECK(!cosine.has_b());

  PeriodicOperator mag = catalog::magnetic_shear(3, 0.5);
  CHECK(mag.has_b());
  ValidationReport rep = validate(mag);
  CHECK(rep.elliptic);
}

TEST_CASE("build rejects out-of-range dimensions and entries") {
  OperatorSpec spec;
  spec.d = 9;
  CHECK_THROWS_AS(build_operator(spec), Error);
}
