// Compares the OpenMP-parallel kernels against the serial path (worker count
// forced to 1) on the two hot loops: zone-grid band solves and the adaptive
// cube quadrature. Results must agree bit for bit; timings show the speedup.
#include <chrono>
#include <cstdio>
#include <cstring>

#include "pgreen/band.hpp"
#include "pgreen/green.hpp"
#include "pgreen/parallel.hpp"

using namespace pgreen;
using clk = std::chrono::steady_clock;

namespace {

double secs(clk::time_point a, clk::time_point b) {
  return std::chrono::duration<double>(b - a).count();
}

VecD e1() {
  VecD u = VecD::Zero(3);
  u[0] = 1.0;
  return u;
}

}  // namespace

int main() {
  PeriodicOperator op = catalog::separable_cosine(3, 2.0);
  validate(op);

  QuadratureSpec quad;
  quad.max_evals = 2000000;

  std::printf("%-28s %10s %10s %8s %s\n", "kernel", "serial", "parallel", "speedup",
              "bitwise");

  int mismatches = 0;

  {
    set_worker_count(1);
    auto t0 = clk::now();
    BandSurface s1 = band_grid(op, 6, 12, 3);
    auto t1 = clk::now();
    set_worker_count(0);
    auto t2 = clk::now();
    BandSurface sp = band_grid(op, 6, 12, 3);
    auto t3 = clk::now();
    bool same = s1.values.size() == sp.values.size() &&
                std::memcmp(s1.values.data(), sp.values.data(),
                            sizeof(double) * s1.values.size()) == 0;
    if (!same) ++mismatches;
    double a = secs(t0, t1), b = secs(t2, t3);
    std::printf("%-28s %9.2fs %9.2fs %7.2fx %s\n", "band_grid M=6 n_b=12 N=3", a, b, a / b,
                same ? "ok" : "MISMATCH");
  }

  {
    set_worker_count(1);
    auto t0 = clk::now();
    KernelResult k1 = free_kernel_quadrature(8.0 * e1(), 0.05, 3.0, quad);
    auto t1 = clk::now();
    set_worker_count(0);
    auto t2 = clk::now();
    KernelResult kp = free_kernel_quadrature(8.0 * e1(), 0.05, 3.0, quad);
    auto t3 = clk::now();
    bool same = std::memcmp(&k1.value, &kp.value, sizeof k1.value) == 0;
    if (!same) ++mismatches;
    double a = secs(t0, t1), b = secs(t2, t3);
    std::printf("%-28s %9.2fs %9.2fs %7.2fx %s\n", "kernel cube |x0|=8", a, b, a / b,
                same ? "ok" : "MISMATCH");
  }

  {
    double shift = 0.0;
    EdgeCertificate cert = certify_auto_shift(op, 1, 4, 2, 8, false, {}, &shift);
    PeriodicOperator shifted = shift_and_flip(op, shift, false);
    std::vector<std::pair<VecD, VecD>> pairs = {{6.0 * e1(), VecD::Zero(3)}};
    set_worker_count(1);
    auto t0 = clk::now();
    GreenBatch g1 = full_green_batch(shifted, cert, pairs, quad);
    auto t1 = clk::now();
    set_worker_count(0);
    auto t2 = clk::now();
    GreenBatch gp = full_green_batch(shifted, cert, pairs, quad);
    auto t3 = clk::now();
    bool same = std::memcmp(&g1.full[0].value, &gp.full[0].value,
                            sizeof g1.full[0].value) == 0;
    if (!same) ++mismatches;
    double a = secs(t0, t1), b = secs(t2, t3);
    std::printf("%-28s %9.2fs %9.2fs %7.2fx %s\n", "full green R=6", a, b, a / b,
                same ? "ok" : "MISMATCH");
  }

  set_worker_count(0);
  if (mismatches) std::printf("%d kernel(s) disagreed between serial and parallel\n",
                              mismatches);
  return mismatches;
}
