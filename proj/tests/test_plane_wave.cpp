#include <doctest.h>

#include <cmath>

#include "pgreen/plane_wave.hpp"

using namespace pgreen;

TEST_CASE("basis enumeration starts at zero and is lexicographic") {
  PlaneWaveBasis b(2, 1);
  CHECK(b.size() == 9);
  CHECK(freq_is_zero(b.freq(0)));
  for (int i = 2; i < b.size(); ++i) {
    const Freq& p = b.freq(i - 1);
    const Freq& q = b.freq(i);
    bool less = std::lexicographical_compare(p.begin(), p.begin() + 2, q.begin(),
                                             q.begin() + 2);
    CHECK(less);
  }
}

TEST_CASE("index_of inverts freq and rejects out-of-cutoff frequencies") {
  PlaneWaveBasis b(3, 2);
  CHECK(b.size() == 125);
  for (int i = 0; i < b.size(); ++i) CHECK(b.index_of(b.freq(i)) == i);
  CHECK(b.index_of(make_freq({3, 0, 0})) == -1);
  CHECK(b.index_of(make_freq({0, -3, 2})) == -1);
}

TEST_CASE("gvec scales the integer frequency by 2 pi") {
  PlaneWaveBasis b(3, 1);
  int i = b.index_of(make_freq({1, 0, -1}));
  REQUIRE(i >= 0);
  VecD g = b.gvec(i);
  CHECK(g[0] == doctest::Approx(2.0 * M_PI).epsilon(1e-15));
  CHECK(g[1] == 0.0);
  CHECK(g[2] == doctest::Approx(-2.0 * M_PI).epsilon(1e-15));
}

TEST_CASE("bases compare by dimension and cutoff") {
  CHECK(PlaneWaveBasis(2, 3) == PlaneWaveBasis(2, 3));
  CHECK(!(PlaneWaveBasis(2, 3) == PlaneWaveBasis(3, 3)));
  CHECK(!(PlaneWaveBasis(2, 3) == PlaneWaveBasis(2, 4)));
}
