#include <doctest.h>

#include <random>

#include "pgreen/fourier_field.hpp"

using namespace pgreen;

namespace {

FourierField random_scalar(int d, int fmax, unsigned seed, bool real_valued) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  FourierField f(FieldRank::Scalar, d);
  for (int t = 0; t < 6; ++t) {
    Freq n = zero_freq();
    for (int a = 0; a < d; ++a) n[a] = (int)std::floor(u(rng) * (fmax + 1));
    f.add_scalar(n, {u(rng), u(rng)});
  }
  if (real_valued) f.symmetrize_conjugate();
  return f;
}

VecD sample_point(int d, int i) {
  VecD x(d);
  for (int a = 0; a < d; ++a) x[a] = 0.137 + 0.31 * i + 0.17 * a;
  return x;
}

}  // namespace

TEST_CASE("field storage basics") {
  FourierField f(FieldRank::Scalar, 2);
  CHECK(f.empty());
  f.add_scalar(make_freq({1, -2}), {0.5, 0.0});
  f.add_scalar(make_freq({1, -2}), {0.25, 0.0});  // accumulates
  CHECK(f.at(make_freq({1, -2}))(0, 0) == std::complex<double>(0.75, 0.0));
  CHECK(f.at(make_freq({3, 0}))(0, 0) == std::complex<double>(0.0, 0.0));
  CHECK(f.fmax() == 2);
  f.scale(2.0);
  CHECK(f.at(make_freq({1, -2}))(0, 0).real() == doctest::Approx(1.5).epsilon(1e-15));
  f.prune(10.0);
  CHECK(f.empty());
}

TEST_CASE("conjugate symmetrization produces a real-valued field") {
  FourierField f = random_scalar(3, 2, 11, false);
  f.symmetrize_conjugate();
  for (int i = 0; i < 5; ++i) {
    std::complex<double> v = f.evaluate_complex(sample_point(3, i))(0, 0);
    CHECK(std::abs(v.imag()) < 1e-12);
  }
}

TEST_CASE("evaluate_field reports residual imaginary part") {
  FourierField f = random_scalar(2, 2, 5, true);
  double worst = -1.0;
  Eigen::MatrixXd v = evaluate_field(f, sample_point(2, 1), &worst);
  CHECK(v.rows() == 1);
  CHECK(worst >= 0.0);
  CHECK(worst < 1e-12);
}

TEST_CASE("scalar convolution equals the pointwise product") {
  for (int d = 1; d <= 3; ++d) {
    FourierField f = random_scalar(d, 2, 100 + d, true);
    FourierField g = random_scalar(d, 1, 200 + d, true);
    FourierField fg = convolve_scalar(f, g);
    for (int i = 0; i < 4; ++i) {
      VecD x = sample_point(d, i);
      std::complex<double> lhs = fg.evaluate_complex(x)(0, 0);
      std::complex<double> rhs =
          f.evaluate_complex(x)(0, 0) * g.evaluate_complex(x)(0, 0);
      CHECK(std::abs(lhs - rhs) < 1e-12);
    }
  }
}

TEST_CASE("matrix and vector convolutions equal pointwise products") {
  const int d = 2;
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  FourierField a(FieldRank::Matrix, d);
  FourierField b(FieldRank::Vector, d);
  for (int t = 0; t < 4; ++t) {
    Freq n = make_freq({t % 2, t / 2 - 1});
    Eigen::MatrixXcd blk(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) blk(i, j) = std::complex<double>(u(rng), u(rng));
    a.add(n, 0.5 * (blk + blk.transpose().eval()));
    Eigen::MatrixXcd vb(d, 1);
    for (int i = 0; i < d; ++i) vb(i, 0) = std::complex<double>(u(rng), u(rng));
    b.add(n, vb);
  }
  a.symmetrize_conjugate();
  b.symmetrize_conjugate();

  FourierField ab = matvec_convolve(a, b);
  FourierField ba = vecmat_convolve(b, a);
  FourierField bab = bilinear_convolve(b, a);
  for (int i = 0; i < 4; ++i) {
    VecD x = sample_point(d, i);
    Eigen::MatrixXcd am = a.evaluate_complex(x);
    Eigen::MatrixXcd bv = b.evaluate_complex(x);
    Eigen::MatrixXcd abv = ab.evaluate_complex(x);
    Eigen::MatrixXcd bav = ba.evaluate_complex(x);
    std::complex<double> babv = bab.evaluate_complex(x)(0, 0);
    CHECK((abv - am * bv).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((bav.transpose() - bv.transpose() * am).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(std::abs(babv - (bv.transpose() * am * bv)(0, 0)) < 1e-12);
  }
}

TEST_CASE("matrix symmetrization projects onto symmetric blocks") {
  FourierField a(FieldRank::Matrix, 2);
  Eigen::MatrixXcd blk(2, 2);
  blk << 1.0, 0.5, 0.1, 2.0;
  a.add(make_freq({0, 0}), blk);
  double adj = a.symmetrize_matrix();
  CHECK(adj == doctest::Approx(0.2).epsilon(1e-12));
  Eigen::MatrixXcd s = a.at(make_freq({0, 0}));
  CHECK(s(0, 1) == s(1, 0));
  CHECK(s(0, 1).real() == doctest::Approx(0.3).epsilon(1e-12));
}
