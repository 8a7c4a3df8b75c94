#include "pgreen/plane_wave.hpp"

namespace pgreen {

PlaneWaveBasis::PlaneWaveBasis(int d, int N) : d_(d), N_(N) {
  if (d < 1 || d > kMaxDim) fail(ErrorCode::BadConfig, "basis dimension out of range");
  if (N < 0) fail(ErrorCode::BadConfig, "basis cutoff must be non-negative");
  const int w = 2 * N + 1;
  long m = 1;
  for (int i = 0; i < d; ++i) m *= w;
  m_ = static_cast<int>(m);

  auto freqs = std::make_shared<std::vector<Freq>>();
  freqs->reserve(m_);
  freqs->push_back(zero_freq());
  for (long idx = 0; idx < m; ++idx) {
    auto ix = grid_unflatten(idx, d, w);
    Freq n = zero_freq();
    for (int i = 0; i < d; ++i) n[i] = ix[i] - N;
    if (!freq_is_zero(n)) freqs->push_back(n);
  }
  freqs_ = std::move(freqs);
}

VecD PlaneWaveBasis::gvec(int i) const {
  const Freq& n = freq(i);
  VecD g(d_);
  for (int a = 0; a < d_; ++a) g[a] = 2.0 * M_PI * n[a];
  return g;
}

int PlaneWaveBasis::index_of(const Freq& n) const {
  const int w = 2 * N_ + 1;
  if (freq_is_zero(n)) return 0;
  long lex = 0;
  for (int i = 0; i < d_; ++i) {
    if (std::abs(n[i]) > N_) return -1;
    lex = lex * w + (n[i] + N_);
  }
  for (int i = d_; i < kMaxDim; ++i)
    if (n[i] != 0) return -1;
  const long zero_lex = (static_cast<long>(m_) - 1) / 2;
  return static_cast<int>(lex < zero_lex ? lex + 1 : lex);
}

}  // namespace pgreen
