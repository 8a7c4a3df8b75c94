#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "pgreen/errors.hpp"
#include "pgreen/lattice.hpp"

namespace pgreen {

// User-facing quadrature configuration shared by the Green function drivers.
struct QuadratureSpec {
  int order = 6;                // Gauss-Legendre points per axis on shallow cells
  int max_depth = 40;           // dyadic refinement limit toward the singular point
  double target_abs = 5e-6;     // absolute error target for each zone integral
  double eps = 0.0;             // spectral regularization; 0 integrates the bare pole
  int far_grid = 0;             // trapezoid nodes per axis away from k0; 0 = auto
  double far_margin = 12.0;     // auto far grid: M ~ max|x-y| + margin
  double phase_threshold = 4.5; // max oscillation phase per initial cell
  long max_evals = 250000;      // hard budget on integrand evaluations per run
  int presplit_min = 2;         // minimum (even) initial split of the near cube
};

void validate_quadrature(const QuadratureSpec& q);

// Tensor Gauss-Legendre rule on [-1,1] plus the last two rows of the
// node-to-Legendre-coefficient transform (used as a spectral tail error
// indicator that costs no extra evaluations).
struct GaussLegendre {
  int order = 0;
  Eigen::VectorXd x, w;
  Eigen::MatrixXd tail;  // 2 x order: coefficient functionals for P_{q-1}, P_{q-2}
};

const GaussLegendre& gl_rule(int order);

// Evaluates all integrand variants ("slots") at a batch of points: pts is
// d x P, out must be filled as slots x P. Implementations may parallelize
// over columns.
using BatchEval =
    std::function<void(const Eigen::Ref<const Eigen::MatrixXd>& pts, Eigen::MatrixXcd& out)>;

struct CubeRegion {
  VecD center;              // singular point; refinement concentrates here
  double half_width = 0.0;  // integration domain center +- half_width per axis
  int presplit = 2;         // initial uniform split per axis (even)
  double cull_radius = 0.0; // drop cells entirely outside this ball; <=0 keeps all
  bool mirror = false;      // integrand obeys f(2c - k) = conj f(k): sum one half
};

struct AdaptiveOptions {
  int order = 6;
  int max_depth = 40;
  double target_abs = 5e-6;
  long max_evals = 250000;
  double corner_share = 0.3;  // cells touching the center get a stricter share
  int regular_extra = 8;      // extra depth for cells after leaving the center tower
};

struct CubeResult {
  Eigen::VectorXcd value;  // per slot
  Eigen::VectorXd est;     // per slot error indicator (Legendre tails + remainders)
  long evals = 0;
  int depth_reached = 0;
  bool budget_hit = false;
};

// Adaptive tensor Gauss-Legendre integration over the cube
// center + [-half_width, half_width]^d with dyadic subdivision toward the
// center. Split decisions and the final summation order are independent of
// the worker count, so results are bitwise reproducible.
CubeResult integrate_cube(int d, const CubeRegion& region, int slots, const BatchEval& eval,
                          const AdaptiveOptions& opts);

struct GridResult {
  Eigen::VectorXcd value;  // per slot, approximating the integral over B
  Eigen::VectorXd est;     // |full grid - half grid| per slot
  long evals = 0;
};

// Uniform trapezoid rule over B = [-pi,pi)^d on the Gamma-centered M^d grid
// (spectrally accurate for smooth periodic integrands). M must be even; the
// even-index subgrid doubles as a free embedded coarse rule for the error
// estimate. With mirror set, interior nodes are paired k <-> -k and only one
// representative is evaluated; nodes on the -pi faces are always evaluated
// directly since their partner sits in a shifted dual cell.
GridResult integrate_periodic_grid(int d, int M, int slots, bool mirror,
                                   const BatchEval& eval);

// Least-squares slope of log(y) against log(x); points with y <= 0 are
// skipped. Used to fit decay exponents of ratio curves.
double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace pgreen
