#include "pgreen/bloch.hpp"

#include <map>

namespace pgreen {

std::complex<double> TorusFunction::periodic_part(const VecD& x) const {
  std::complex<double> acc = 0.0;
  for (int i = 0; i < basis.size(); ++i) {
    double phase = 0.0;
    const Freq& n = basis.freq(i);
    for (int a = 0; a < basis.dim(); ++a) phase += n[a] * x[a];
    acc += coeffs[i] * std::exp(std::complex<double>(0.0, 2.0 * M_PI * phase));
  }
  return acc;
}

std::complex<double> TorusFunction::bloch_value(const VecD& x) const {
  double kx = 0.0;
  for (int a = 0; a < basis.dim(); ++a) kx += k[a] * x[a];
  return std::exp(std::complex<double>(0.0, kx)) * periodic_part(x);
}

std::complex<double> inner(const TorusFunction& f, const TorusFunction& g) {
  if (f.basis == g.basis) return f.coeffs.dot(g.coeffs);
  std::complex<double> acc = 0.0;
  const bool f_smaller = f.basis.size() <= g.basis.size();
  const TorusFunction& s = f_smaller ? f : g;
  const TorusFunction& l = f_smaller ? g : f;
  for (int i = 0; i < s.basis.size(); ++i) {
    int j = l.basis.index_of(s.basis.freq(i));
    if (j < 0) continue;
    acc += f_smaller ? std::conj(f.coeffs[i]) * g.coeffs[j]
                     : std::conj(f.coeffs[j]) * g.coeffs[i];
  }
  return acc;
}

FiberContext::FiberContext(const PeriodicOperator& op, int N)
    : d_(op.dim()), flipped_(op.flipped), basis_(op.dim(), N) {
  if (N < op.fmax())
    fail(ErrorCode::CutoffTooSmall,
         "basis cutoff N=" + std::to_string(N) + " cannot hold coefficient support fmax=" +
             std::to_string(op.fmax()));

  FourierField ab = matvec_convolve(op.a, op.b);
  FourierField ba = vecmat_convolve(op.b, op.a);
  FourierField bab = bilinear_convolve(op.b, op.a);

  std::map<Freq, Offset> table;
  auto slot = [&](const Freq& n) -> Offset& {
    auto it = table.find(n);
    if (it == table.end()) {
      Offset o;
      o.n = n;
      o.A = Eigen::MatrixXcd::Zero(d_, d_);
      o.ab = Eigen::VectorXcd::Zero(d_);
      o.ba = Eigen::VectorXcd::Zero(d_);
      o.scalar = 0.0;
      it = table.emplace(n, std::move(o)).first;
    }
    return it->second;
  };
  for (const auto& [n, blk] : op.a.coeffs()) slot(n).A = blk;
  for (const auto& [n, blk] : ab.coeffs()) slot(n).ab = blk.col(0);
  for (const auto& [n, blk] : ba.coeffs()) slot(n).ba = blk.col(0);
  for (const auto& [n, blk] : bab.coeffs()) slot(n).scalar += blk(0, 0);
  for (const auto& [n, blk] : op.c.coeffs()) slot(n).scalar += blk(0, 0);

  offsets_.reserve(table.size());
  for (auto& [n, o] : table) offsets_.push_back(std::move(o));
}

BlochMatrix assemble_bloch(const PeriodicOperator& op, const VecD& k, int N) {
  return FiberContext(op, N).assemble(k);
}

Eigen::MatrixXcd assemble_dk(const PeriodicOperator& op, const VecD& k, int N, int axis) {
  return FiberContext(op, N).dk(k, axis);
}

Eigen::MatrixXcd assemble_d2k(const PeriodicOperator& op, int N, int ax1, int ax2) {
  return FiberContext(op, N).d2k(ax1, ax2);
}

BlochMatrix FiberContext::assemble(const VecD& k) const {
  const int m = basis_.size();
  BlochMatrix out;
  out.k = k;
  out.basis = basis_;
  out.flipped = flipped_;
  Eigen::MatrixXcd& A = out.entries;
  A = Eigen::MatrixXcd::Zero(m, m);

  Eigen::VectorXcd gk(d_);
  for (int i = 0; i < m; ++i) {
    VecD gi = basis_.gvec(i);
    Eigen::VectorXcd row_gk(d_);
    for (int a = 0; a < d_; ++a) row_gk[a] = gi[a] + k[a];
    for (const auto& o : offsets_) {
      const int j = basis_.index_of(freq_sub(basis_.freq(i), o.n));
      if (j < 0) continue;
      VecD gj = basis_.gvec(j);
      Eigen::VectorXcd col_gk(d_);
      for (int a = 0; a < d_; ++a) col_gk[a] = gj[a] + k[a];
      std::complex<double> v = (row_gk.transpose() * (o.A * col_gk)).value();
      v += (row_gk.transpose() * o.ab).value();
      v += (o.ba.transpose() * col_gk).value();
      v += o.scalar;
      A(i, j) += v;
    }
  }

  out.max_asymmetry = (A - A.adjoint()).cwiseAbs().maxCoeff();
  A = 0.5 * (A + A.adjoint()).eval();
  return out;
}

Eigen::MatrixXcd FiberContext::dk(const VecD& k, int axis) const {
  const int m = basis_.size();
  Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    VecD gi = basis_.gvec(i);
    for (const auto& o : offsets_) {
      const int j = basis_.index_of(freq_sub(basis_.freq(i), o.n));
      if (j < 0) continue;
      VecD gj = basis_.gvec(j);
      std::complex<double> v = 0.0;
      for (int a = 0; a < d_; ++a) {
        v += o.A(axis, a) * (gj[a] + k[a]);
        v += (gi[a] + k[a]) * o.A(a, axis);
      }
      v += o.ab[axis] + o.ba[axis];
      D(i, j) += v;
    }
  }
  return 0.5 * (D + D.adjoint()).eval();
}

Eigen::MatrixXcd FiberContext::d2k(int ax1, int ax2) const {
  const int m = basis_.size();
  Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    for (const auto& o : offsets_) {
      const int j = basis_.index_of(freq_sub(basis_.freq(i), o.n));
      if (j < 0) continue;
      D(i, j) += o.A(ax1, ax2) + o.A(ax2, ax1);
    }
  }
  return 0.5 * (D + D.adjoint()).eval();
}

}  // namespace pgreen
