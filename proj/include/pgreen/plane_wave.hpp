#pragma once

#include <memory>
#include <vector>

#include "pgreen/lattice.hpp"

namespace pgreen {

// Truncated plane-wave basis { e^{i G.x} : G = 2 pi n, max_i |n_i| <= N } of
// L^2 of the unit torus, orthonormal under the Lebesgue measure of [0,1]^d.
// Index 0 is G = 0; the remaining frequencies follow in lexicographic order
// of their integer multi-indices. Instances are cheap value types sharing the
// underlying table.
class PlaneWaveBasis {
 public:
  PlaneWaveBasis() = default;
  PlaneWaveBasis(int d, int N);

  int dim() const { return d_; }
  int cutoff() const { return N_; }
  int size() const { return m_; }

  const Freq& freq(int i) const { return (*freqs_)[i]; }
  VecD gvec(int i) const;

  // -1 when n is outside the cutoff box.
  int index_of(const Freq& n) const;

  bool operator==(const PlaneWaveBasis& o) const { return d_ == o.d_ && N_ == o.N_; }

 private:
  int d_ = 0, N_ = 0, m_ = 0;
  std::shared_ptr<const std::vector<Freq>> freqs_;
};

}  // namespace pgreen
