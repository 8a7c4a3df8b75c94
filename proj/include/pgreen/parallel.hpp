#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

namespace pgreen {

// Worker count used by all parallel loops. PGREEN_THREADS (if set) caps the
// OpenMP default; set_worker_count overrides both (0 restores the default).
int worker_count();
void set_worker_count(int n);

// Parallel map over [0, n). f(i) must only write to per-index state; results
// are then combined serially by the caller, so output is identical for any
// worker count.
void parallel_for_impl(std::ptrdiff_t n, const std::function<void(std::ptrdiff_t)>& f);

template <class F>
void parallel_for(std::ptrdiff_t n, F&& f) {
  parallel_for_impl(n, std::function<void(std::ptrdiff_t)>(std::forward<F>(f)));
}

// Pairwise summation over a fixed index order; the result does not depend on
// how the values were produced, only on their order.
double pairwise_sum(const double* x, std::size_t n);
std::complex<double> pairwise_sum(const std::complex<double>* x, std::size_t n);

inline double pairwise_sum(const std::vector<double>& v) {
  return pairwise_sum(v.data(), v.size());
}
inline std::complex<double> pairwise_sum(const std::vector<std::complex<double>>& v) {
  return pairwise_sum(v.data(), v.size());
}

}  // namespace pgreen
