#include "pgreen/parallel.hpp"

#include <omp.h>

#include <algorithm>
#include <cstdlib>

namespace pgreen {

namespace {
int g_override = 0;

int env_cap() {
  static int cap = [] {
    const char* s = std::getenv("PGREEN_THREADS");
    if (!s) return 0;
    int v = std::atoi(s);
    return v > 0 ? v : 0;
  }();
  return cap;
}
}  // namespace

int worker_count() {
  if (g_override > 0) return g_override;
  int n = omp_get_max_threads();
  int cap = env_cap();
  if (cap > 0) n = std::min(n, cap);
  return std::max(1, n);
}

void set_worker_count(int n) { g_override = std::max(0, n); }

void parallel_for_impl(std::ptrdiff_t n, const std::function<void(std::ptrdiff_t)>& f) {
  const int workers = worker_count();
  if (workers <= 1 || n <= 1) {
    for (std::ptrdiff_t i = 0; i < n; ++i) f(i);
    return;
  }
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
  for (std::ptrdiff_t i = 0; i < n; ++i) f(i);
}

namespace {
template <class T>
T pairwise_sum_rec(const T* x, std::size_t n) {
  if (n <= 8) {
    T s{};
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
  }
  std::size_t h = n / 2;
  return pairwise_sum_rec(x, h) + pairwise_sum_rec(x + h, n - h);
}
}  // namespace

double pairwise_sum(const double* x, std::size_t n) { return pairwise_sum_rec(x, n); }

std::complex<double> pairwise_sum(const std::complex<double>* x, std::size_t n) {
  return pairwise_sum_rec(x, n);
}

}  // namespace pgreen
