#include "pgreen/fourier_field.hpp"

namespace pgreen {

FourierField::FourierField(FieldRank rank, int dim) : rank_(rank), dim_(dim) {
  if (dim < 1 || dim > kMaxDim) fail(ErrorCode::BadConfig, "field dimension out of range");
}

int FourierField::rows() const {
  switch (rank_) {
    case FieldRank::Scalar: return 1;
    case FieldRank::Vector: return dim_;
    case FieldRank::Matrix: return dim_;
  }
  return 1;
}

int FourierField::cols() const { return rank_ == FieldRank::Matrix ? dim_ : 1; }

int FourierField::fmax() const {
  int m = 0;
  for (const auto& [n, blk] : coeffs_) m = std::max(m, freq_maxabs(n));
  return m;
}

void FourierField::add(const Freq& n, const Eigen::MatrixXcd& block) {
  if (block.rows() != rows() || block.cols() != cols())
    fail(ErrorCode::BadConfig, "coefficient block shape mismatch");
  auto it = coeffs_.find(n);
  if (it == coeffs_.end())
    coeffs_.emplace(n, block);
  else
    it->second += block;
}

void FourierField::add_scalar(const Freq& n, std::complex<double> v) {
  Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(1, 1);
  b(0, 0) = v;
  add(n, b);
}

void FourierField::add_vector_entry(const Freq& n, int j, std::complex<double> v) {
  if (j < 0 || j >= dim_) fail(ErrorCode::BadConfig, "vector entry index out of range");
  Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(dim_, 1);
  b(j, 0) = v;
  add(n, b);
}

void FourierField::add_matrix_entry(const Freq& n, int j, int l, std::complex<double> v) {
  if (j < 0 || j >= dim_ || l < 0 || l >= dim_)
    fail(ErrorCode::BadConfig, "matrix entry index out of range");
  Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(dim_, dim_);
  b(j, l) = v;
  add(n, b);
}

Eigen::MatrixXcd FourierField::at(const Freq& n) const {
  auto it = coeffs_.find(n);
  if (it != coeffs_.end()) return it->second;
  return Eigen::MatrixXcd::Zero(rows(), cols());
}

double FourierField::symmetrize_conjugate() {
  double worst = 0.0;
  std::map<Freq, Eigen::MatrixXcd> out;
  for (const auto& [n, blk] : coeffs_) {
    if (out.count(n)) continue;
    const Freq m = freq_neg(n);
    Eigen::MatrixXcd other = at(m);
    Eigen::MatrixXcd avg = 0.5 * (blk + other.conjugate());
    worst = std::max(worst, (blk - avg).cwiseAbs().maxCoeff());
    out[n] = avg;
    if (!(m == n)) out[m] = avg.conjugate();
  }
  coeffs_ = std::move(out);
  prune();
  return worst;
}

double FourierField::symmetrize_matrix() {
  if (rank_ != FieldRank::Matrix) return 0.0;
  double worst = 0.0;
  for (auto& [n, blk] : coeffs_) {
    Eigen::MatrixXcd sym = 0.5 * (blk + blk.transpose());
    worst = std::max(worst, (blk - sym).cwiseAbs().maxCoeff());
    blk = sym;
  }
  return worst;
}

void FourierField::scale(std::complex<double> s) {
  for (auto& [n, blk] : coeffs_) blk *= s;
}

void FourierField::prune(double tol) {
  for (auto it = coeffs_.begin(); it != coeffs_.end();) {
    if (it->second.cwiseAbs().maxCoeff() <= tol)
      it = coeffs_.erase(it);
    else
      ++it;
  }
}

Eigen::MatrixXcd FourierField::evaluate_complex(const VecD& x) const {
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(rows(), cols());
  for (const auto& [n, blk] : coeffs_) {
    double phase = 0.0;
    for (int i = 0; i < dim_; ++i) phase += n[i] * x[i];
    acc += blk * std::exp(std::complex<double>(0.0, 2.0 * M_PI * phase));
  }
  return acc;
}

Eigen::MatrixXd evaluate_field(const FourierField& f, const VecD& x, double* max_imag) {
  Eigen::MatrixXcd v = f.evaluate_complex(x);
  double im = v.imag().cwiseAbs().maxCoeff();
  if (max_imag) *max_imag = im;
  return v.real();
}

FourierField convolve_scalar(const FourierField& f, const FourierField& g) {
  FourierField out(FieldRank::Scalar, f.dim());
  for (const auto& [n1, b1] : f.coeffs())
    for (const auto& [n2, b2] : g.coeffs())
      out.add_scalar(freq_add(n1, n2), b1(0, 0) * b2(0, 0));
  out.prune();
  return out;
}

FourierField matvec_convolve(const FourierField& a, const FourierField& b) {
  FourierField out(FieldRank::Vector, a.dim());
  for (const auto& [n1, ba] : a.coeffs())
    for (const auto& [n2, bb] : b.coeffs())
      out.add(freq_add(n1, n2), ba * bb);
  out.prune();
  return out;
}

FourierField vecmat_convolve(const FourierField& b, const FourierField& a) {
  FourierField out(FieldRank::Vector, a.dim());
  for (const auto& [n1, bb] : b.coeffs())
    for (const auto& [n2, ba] : a.coeffs())
      out.add(freq_add(n1, n2), ba.transpose() * bb);
  out.prune();
  return out;
}

FourierField bilinear_convolve(const FourierField& b, const FourierField& a) {
  FourierField ab = matvec_convolve(a, b);
  FourierField out(FieldRank::Scalar, a.dim());
  for (const auto& [n1, bb] : b.coeffs())
    for (const auto& [n2, bab] : ab.coeffs()) {
      std::complex<double> s = (bb.transpose() * bab)(0, 0);
      out.add_scalar(freq_add(n1, n2), s);
    }
  out.prune();
  return out;
}

}  // namespace pgreen
