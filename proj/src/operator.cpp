#include "pgreen/operator.hpp"

#include <Eigen/Eigenvalues>

#include "pgreen/parallel.hpp"

namespace pgreen {

int PeriodicOperator::fmax() const {
  return std::max(a.fmax(), std::max(b.fmax(), c.fmax()));
}

namespace {

void check_freq_dim(const Freq& n, int d, const char* what) {
  for (int i = d; i < kMaxDim; ++i)
    if (n[i] != 0)
      fail(ErrorCode::BadConfig,
           std::string(what) + " frequency uses axes beyond the lattice dimension");
}

}  // namespace

PeriodicOperator build_operator(const OperatorSpec& spec, const BuildOptions& opts,
                                std::vector<std::string>* warnings) {
  LatticeSpec lattice(spec.d);
  const int d = spec.d;

  PeriodicOperator op;
  op.lattice = lattice;
  op.a = FourierField(FieldRank::Matrix, d);
  op.b = FourierField(FieldRank::Vector, d);
  op.c = FourierField(FieldRank::Scalar, d);

  if (spec.a_given && spec.a.empty())
    fail(ErrorCode::EmptyCoefficients, "metric coefficient list is empty");

  if (!spec.a_given) {
    Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(d, d);
    op.a.add(zero_freq(), id);
  } else {
    for (const auto& e : spec.a) {
      check_freq_dim(e.n, d, "a");
      if (e.j < 0 || e.j >= d || e.l < 0 || e.l >= d)
        fail(ErrorCode::BadConfig, "metric entry index out of range");
      op.a.add_matrix_entry(e.n, e.j, e.l, e.v);
    }
  }
  for (const auto& e : spec.b) {
    check_freq_dim(e.n, d, "b");
    if (e.j < 0 || e.j >= d) fail(ErrorCode::BadConfig, "b entry index out of range");
    op.b.add_vector_entry(e.n, e.j, e.v);
  }
  for (const auto& e : spec.c) {
    check_freq_dim(e.n, d, "c");
    op.c.add_scalar(e.n, e.v);
  }

  double asym_matrix = op.a.symmetrize_matrix();
  double asym_conj = std::max({op.a.symmetrize_conjugate(), op.b.symmetrize_conjugate(),
                               op.c.symmetrize_conjugate()});
  if (!opts.auto_symmetrize && (asym_matrix > opts.warn_tol || asym_conj > opts.warn_tol))
    fail(ErrorCode::NonSymmetricMetric, "coefficients violate required symmetries");
  if (warnings) {
    if (asym_matrix > opts.warn_tol)
      warnings->push_back("metric symmetrized, max adjustment " + std::to_string(asym_matrix));
    if (asym_conj > opts.warn_tol)
      warnings->push_back("coefficients made real-valued, max adjustment " +
                          std::to_string(asym_conj));
  }
  return op;
}

ValidationReport validate(PeriodicOperator& op, int grid_n) {
  const int d = op.dim();
  int base = std::max(grid_n, 2 * op.fmax() + 1);
  base = std::max(base, 3);

  ValidationReport rep;

  double max_imag = 0.0;
  auto min_metric_eig = [&](int n) {
    const long total = grid_size(d, n);
    std::vector<double> mins(total);
    std::vector<double> imags(total);
    parallel_for(total, [&](std::ptrdiff_t idx) {
      auto ix = grid_unflatten(idx, d, n);
      VecD x(d);
      for (int i = 0; i < d; ++i) x[i] = static_cast<double>(ix[i]) / n;
      double im = 0.0;
      Eigen::MatrixXd av = evaluate_field(op.a, x, &im);
      if (op.flipped) av = -av;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (av + av.transpose()),
                                                        Eigen::EigenvaluesOnly);
      mins[idx] = es.eigenvalues().minCoeff();
      imags[idx] = im;
    });
    double m = mins[0];
    for (double v : mins) m = std::min(m, v);
    for (double v : imags) max_imag = std::max(max_imag, v);
    return m;
  };

  double t1 = min_metric_eig(base);
  double t2 = min_metric_eig(2 * base);
  rep.theta_estimate = std::min(t1, t2);
  rep.sample_grid = 2 * base;
  rep.is_real = max_imag < 1e-12;
  rep.is_symmetric = true;  // enforced at build time
  rep.elliptic = rep.theta_estimate > 0.0;
  if (!rep.elliptic)
    fail(ErrorCode::NotElliptic,
         "metric minimum eigenvalue " + std::to_string(rep.theta_estimate));
  op.theta = rep.theta_estimate;
  return rep;
}

PeriodicOperator shift_and_flip(const PeriodicOperator& op, double shift, bool flip) {
  PeriodicOperator out = op;
  if (!flip) {
    out.c.add_scalar(zero_freq(), std::complex<double>(-shift, 0.0));
  } else {
    out.a.scale(-1.0);
    out.c.scale(-1.0);
    out.c.add_scalar(zero_freq(), std::complex<double>(shift, 0.0));
    out.flipped = !op.flipped;
  }
  out.c.prune();
  return out;
}

namespace catalog {

PeriodicOperator free_laplacian(int d) {
  OperatorSpec spec;
  spec.d = d;
  return build_operator(spec);
}

PeriodicOperator separable_cosine(int d, double q) {
  OperatorSpec spec;
  spec.d = d;
  for (int i = 0; i < d; ++i) {
    Freq n = zero_freq();
    n[i] = 1;
    spec.c.push_back({n, q / 2.0});
    spec.c.push_back({freq_neg(n), q / 2.0});
  }
  return build_operator(spec);
}

PeriodicOperator scalar_metric_laplacian(int d) {
  OperatorSpec spec;
  spec.d = d;
  spec.a_given = true;
  Freq e1 = zero_freq();
  e1[0] = 1;
  for (int j = 0; j < d; ++j) {
    spec.a.push_back({zero_freq(), j, j, 2.0});
    spec.a.push_back({e1, j, j, 0.5});
    spec.a.push_back({freq_neg(e1), j, j, 0.5});
  }
  return build_operator(spec);
}

PeriodicOperator magnetic_shear(int d, double beta) {
  if (d < 2) fail(ErrorCode::BadConfig, "magnetic example needs d >= 2");
  OperatorSpec spec;
  spec.d = d;
  Freq e2 = zero_freq();
  e2[1] = 1;
  // beta sin(2 pi x_2) = beta/(2i) (e^{i 2 pi x_2} - e^{-i 2 pi x_2})
  spec.b.push_back({e2, 0, std::complex<double>(0.0, -beta / 2.0)});
  spec.b.push_back({freq_neg(e2), 0, std::complex<double>(0.0, beta / 2.0)});
  return build_operator(spec);
}

}  // namespace catalog

}  // namespace pgreen
