#include "pgreen/band.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "pgreen/parallel.hpp"

namespace pgreen {

namespace {

void check_band_index(int j, int m) {
  if (j < 1 || j > m)
    fail(ErrorCode::BadConfig,
         "band index " + std::to_string(j) + " outside 1.." + std::to_string(m));
}

// Bands 1..j+1 at k (j+1 clipped to the matrix size).
FiberSolution solve_near_band(const FiberContext& ctx, const VecD& k, int j) {
  BlochMatrix fiber = ctx.assemble(k);
  int nev = std::min<int>(j + 1, static_cast<int>(fiber.entries.rows()));
  return solve_fiber(fiber, nev);
}

void check_simple(const FiberSolution& sol, int j, double tol, const VecD& k) {
  auto gap_msg = [&](int other) {
    return "band " + std::to_string(j) + " touches band " + std::to_string(other) +
           " at k = (" + std::to_string(k[0]) + ", ...)";
  };
  if (j >= 2 && std::abs(sol.values[j - 1] - sol.values[j - 2]) < tol)
    fail(ErrorCode::DegenerateBand, gap_msg(j - 1));
  if (j < sol.values.size() && std::abs(sol.values[j] - sol.values[j - 1]) < tol)
    fail(ErrorCode::DegenerateBand, gap_msg(j + 1));
}

double band_value(const FiberContext& ctx, const VecD& k, int j) {
  return solve_fiber(ctx.assemble(k), j).values[j - 1];
}

VecD hf_gradient(const FiberContext& ctx, const FiberSolution& sol, const VecD& k, int j) {
  const Eigen::VectorXcd v = sol.vectors.col(j - 1);
  VecD g(ctx.dim());
  for (int m = 0; m < ctx.dim(); ++m)
    g[m] = (v.adjoint() * (ctx.dk(k, m) * v)).value().real();
  return g;
}

}  // namespace

BandSurface band_grid(const PeriodicOperator& op, int M, int n_b, int N, bool keep_vectors,
                      EigenBackend backend) {
  if (M < 3) fail(ErrorCode::BadConfig, "band grid needs M >= 3");
  FiberContext ctx(op, N);
  check_band_index(n_b, ctx.basis().size());

  BandSurface s;
  s.d = op.dim();
  s.M = M;
  s.N = N;
  s.n_b = n_b;
  s.flipped = op.flipped;
  const long nn = s.nodes();
  s.values.resize(n_b, nn);
  if (keep_vectors) s.vectors.resize(nn);

  std::vector<VecD> grid = zone_grid(op.dim(), M);
  parallel_for(nn, [&](std::ptrdiff_t i) {
    FiberSolution sol = solve_fiber(ctx.assemble(grid[i]), n_b, backend);
    s.values.col(i) = sol.values;
    if (keep_vectors) s.vectors[i] = std::move(sol.vectors);
  });
  return s;
}

VecD band_gradient(const FiberContext& ctx, const VecD& k, int j, double degeneracy_tol) {
  check_band_index(j, ctx.basis().size());
  FiberSolution sol = solve_near_band(ctx, k, j);
  check_simple(sol, j, degeneracy_tol, k);
  return hf_gradient(ctx, sol, k, j);
}

VecD band_gradient(const PeriodicOperator& op, const VecD& k, int j, int N,
                   double degeneracy_tol) {
  return band_gradient(FiberContext(op, N), k, j, degeneracy_tol);
}

Eigen::MatrixXd band_hessian(const FiberContext& ctx, const VecD& k0, int j,
                             HessianMethod method, double degeneracy_tol) {
  const int d = ctx.dim();
  check_band_index(j, ctx.basis().size());
  Eigen::MatrixXd H(d, d);

  if (method == HessianMethod::Perturbation) {
    BlochMatrix fiber = ctx.assemble(k0);
    FiberSolution sol = solve_fiber_full(fiber);
    const int m = static_cast<int>(sol.values.size());
    const Eigen::VectorXcd v = sol.vectors.col(j - 1);
    for (int i = 0; i < m; ++i)
      if (i != j - 1 && std::abs(sol.values[i] - sol.values[j - 1]) < degeneracy_tol)
        fail(ErrorCode::DegenerateBand,
             "band " + std::to_string(j) + " degenerate at the expansion point");

    std::vector<Eigen::VectorXcd> x(d);
    for (int mm = 0; mm < d; ++mm)
      x[mm] = sol.vectors.adjoint() * (ctx.dk(k0, mm) * v);
    for (int mm = 0; mm < d; ++mm)
      for (int nn = mm; nn < d; ++nn) {
        double h = (v.adjoint() * (ctx.d2k(mm, nn) * v)).value().real();
        double sum = 0.0;
        for (int i = 0; i < m; ++i) {
          if (i == j - 1) continue;
          sum += (std::conj(x[mm][i]) * x[nn][i]).real() /
                 (sol.values[j - 1] - sol.values[i]);
        }
        H(mm, nn) = H(nn, mm) = h + 2.0 * sum;
      }
    return H;
  }

  // Central second differences with one Richardson step: the h^2 error of
  // D2(h) cancels against D2(h/2).
  auto d2_at = [&](double h) {
    Eigen::MatrixXd D(d, d);
    const double center = band_value(ctx, k0, j);
    for (int mm = 0; mm < d; ++mm) {
      VecD kp = k0, km = k0;
      kp[mm] += h;
      km[mm] -= h;
      D(mm, mm) = (band_value(ctx, kp, j) - 2.0 * center + band_value(ctx, km, j)) / (h * h);
      for (int nn = mm + 1; nn < d; ++nn) {
        VecD kpp = k0, kpm = k0, kmp = k0, kmm = k0;
        kpp[mm] += h; kpp[nn] += h;
        kpm[mm] += h; kpm[nn] -= h;
        kmp[mm] -= h; kmp[nn] += h;
        kmm[mm] -= h; kmm[nn] -= h;
        D(mm, nn) = D(nn, mm) =
            (band_value(ctx, kpp, j) - band_value(ctx, kpm, j) - band_value(ctx, kmp, j) +
             band_value(ctx, kmm, j)) /
            (4.0 * h * h);
      }
    }
    return D;
  };
  const double h = 1e-3;
  Eigen::MatrixXd coarse = d2_at(h), fine = d2_at(h / 2);
  H = (4.0 * fine - coarse) / 3.0;
  return 0.5 * (H + H.transpose()).eval();
}

Eigen::MatrixXd band_hessian(const PeriodicOperator& op, const VecD& k0, int j, int N,
                             HessianMethod method, double degeneracy_tol) {
  return band_hessian(FiberContext(op, N), k0, j, method, degeneracy_tol);
}

namespace {

// Grid local minima of row j-1 within value_tol of the global minimum,
// clustered by periodic adjacency. Two clusters mean two inequivalent minima.
int count_minimum_clusters(const BandSurface& s, int j, double value_tol, long* argmin) {
  const long nn = s.nodes();
  const auto row = s.values.row(j - 1);
  long best = 0;
  for (long i = 1; i < nn; ++i)
    if (row(i) < row(best)) best = i;
  *argmin = best;

  // neighbor offsets {-1,0,1}^d \ {0}
  std::vector<std::array<int, kMaxDim>> offs;
  const long n_off = grid_size(s.d, 3);
  for (long t = 0; t < n_off; ++t) {
    auto ix = grid_unflatten(t, s.d, 3);
    bool all0 = true;
    for (int a = 0; a < s.d; ++a) {
      ix[a] -= 1;
      if (ix[a] != 0) all0 = false;
    }
    if (!all0) offs.push_back(ix);
  }
  auto neighbor = [&](long i, const std::array<int, kMaxDim>& o) {
    auto ix = grid_unflatten(i, s.d, s.M);
    for (int a = 0; a < s.d; ++a) ix[a] = ((ix[a] + o[a]) % s.M + s.M) % s.M;
    return grid_flatten(ix, s.d, s.M);
  };

  std::vector<long> cands;
  for (long i = 0; i < nn; ++i) {
    if (row(i) > row(best) + value_tol) continue;
    bool is_min = true;
    for (const auto& o : offs)
      if (row(neighbor(i, o)) < row(i)) { is_min = false; break; }
    if (is_min) cands.push_back(i);
  }

  // union-find over candidate adjacency (adjacent tied nodes are one minimum)
  std::vector<int> parent(cands.size());
  for (size_t i = 0; i < cands.size(); ++i) parent[i] = static_cast<int>(i);
  std::function<int(int)> find = [&](int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (size_t i = 0; i < cands.size(); ++i)
    for (size_t l = i + 1; l < cands.size(); ++l) {
      bool adj = false;
      for (const auto& o : offs)
        if (neighbor(cands[i], o) == cands[l]) { adj = true; break; }
      if (adj) parent[find(static_cast<int>(l))] = find(static_cast<int>(i));
    }
  int clusters = 0;
  for (size_t i = 0; i < cands.size(); ++i)
    if (find(static_cast<int>(i)) == static_cast<int>(i)) ++clusters;
  return clusters;
}

}  // namespace

EdgeLocation locate_edge(const PeriodicOperator& op, const BandSurface& surface, int j,
                         double grad_tol, double value_tol) {
  check_band_index(j, surface.n_b);
  FiberContext ctx(op, surface.N);

  long argmin = 0;
  int clusters = count_minimum_clusters(surface, j, value_tol, &argmin);
  if (clusters > 1)
    fail(ErrorCode::NotIsolatedMinimum,
         "band " + std::to_string(j) + " attains its grid minimum at " +
             std::to_string(clusters) + " inequivalent quasimomenta");

  std::vector<VecD> grid = zone_grid(surface.d, surface.M);
  VecD k = grid[argmin];
  const double step_cap = 2.0 * M_PI / surface.M;
  const double fd_h = 1e-4;
  const double degeneracy_tol = 1e-8;

  auto grad_at = [&](const VecD& kk) {
    FiberSolution sol = solve_near_band(ctx, kk, j);
    check_simple(sol, j, degeneracy_tol, kk);
    return hf_gradient(ctx, sol, kk, j);
  };

  auto newton = [&](VecD kk, int max_iter) {
    for (int it = 0; it < max_iter; ++it) {
      VecD g = grad_at(kk);
      if (g.norm() < grad_tol) return kk;
      Eigen::MatrixXd H(surface.d, surface.d);
      for (int m = 0; m < surface.d; ++m) {
        VecD kp = kk, km = kk;
        kp[m] += fd_h;
        km[m] -= fd_h;
        H.row(m) = ((grad_at(kp) - grad_at(km)) / (2.0 * fd_h)).transpose();
      }
      H = 0.5 * (H + H.transpose()).eval();
      VecD s = H.ldlt().solve(-g);
      if (!s.allFinite() || s.norm() > step_cap) s *= step_cap / std::max(s.norm(), 1e-300);
      kk += s;
    }
    fail(ErrorCode::QuadratureNotConverged,
         "band minimum refinement did not reach the gradient tolerance");
  };

  k = newton(k, 60);
  k = newton(reduce_to_zone(k), 10);  // re-center once so the report lives in B

  EdgeLocation loc;
  loc.k0 = k;
  loc.at_k0 = solve_near_band(ctx, k, j);
  check_simple(loc.at_k0, j, degeneracy_tol, k);
  loc.lambda0 = loc.at_k0.values[j - 1];
  loc.grad_norm = hf_gradient(ctx, loc.at_k0, k, j).norm();
  return loc;
}

namespace {

double ray_admissible_radius(const FiberContext& ctx, const EdgeCertificate& cert,
                             const VecD& u, double r_cap, int samples, double quad_window) {
  // Largest prefix of linearly spaced radii on which the band stays below
  // half the gap and within the quadratic window; the cap is halved when even
  // the first sample fails (the window always admits small enough radii).
  const double quu = 0.5 * (u.transpose() * cert.H * u).value();
  for (int attempt = 0; attempt < 8; ++attempt) {
    double cap = r_cap * std::pow(0.5, attempt);
    double admissible = 0.0;
    for (int i = 1; i <= samples; ++i) {
      double r = cap * i / samples;
      double lam = band_value(ctx, cert.k0 + r * u, cert.j) - cert.lambda0;
      double q = quu * r * r;
      if (lam >= cert.delta / 2.0) break;
      if (std::abs(lam - q) > quad_window * q) break;
      admissible = r;
    }
    if (admissible > 0.0) return admissible;
  }
  fail(ErrorCode::A4Violated,
       "no radius around k0 fits the quadratic model along a scanned ray");
}

}  // namespace

EdgeCertificate certify(const PeriodicOperator& op, int j, int M, int N, int n_b,
                        const CertifyOptions& opts) {
  if (n_b < std::max(2, j + 1))
    fail(ErrorCode::BadConfig, "certification needs n_b >= max(2, j+1) bands");
  BandSurface surface = band_grid(op, M, n_b, N);

  EdgeLocation loc;
  try {
    loc = locate_edge(op, surface, j, opts.grad_tol, opts.value_tol);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NotIsolatedMinimum) fail(ErrorCode::A3Violated, e.what());
    if (e.code() == ErrorCode::DegenerateBand) fail(ErrorCode::A2Violated, e.what());
    throw;
  }

  if (std::abs(loc.lambda0) > opts.a1_tol)
    fail(ErrorCode::A1Violated,
         "edge value " + std::to_string(loc.lambda0) +
             " is not 0; apply shift_and_flip with this shift first");

  // delta: distance from 0 to the other band intervals sampled over the grid
  double delta = std::numeric_limits<double>::infinity();
  for (int jp = 1; jp <= n_b; ++jp) {
    if (jp == j) continue;
    double lo = surface.values.row(jp - 1).minCoeff();
    double hi = surface.values.row(jp - 1).maxCoeff();
    double dist = (lo <= 0.0 && 0.0 <= hi) ? 0.0 : std::min(std::abs(lo), std::abs(hi));
    delta = std::min(delta, dist);
  }
  if (delta <= 0.0)
    fail(ErrorCode::A2Violated, "another band meets 0 over the sampled zone");

  EdgeCertificate cert;
  cert.j = j;
  cert.k0 = loc.k0;
  cert.lambda0 = loc.lambda0;
  cert.grad_norm = loc.grad_norm;
  cert.delta = delta;
  cert.flipped = op.flipped;
  cert.N = N;
  cert.M = M;
  cert.n_b = n_b;
  cert.multiplicity_ok = true;  // locate_edge rejects degenerate minimizers

  FiberContext ctx(op, N);
  try {
    cert.H = band_hessian(ctx, loc.k0, j, opts.hessian, opts.degeneracy_tol);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::DegenerateBand) fail(ErrorCode::A2Violated, e.what());
    throw;
  }
  Eigen::LLT<Eigen::MatrixXd> llt(cert.H);
  if (llt.info() != Eigen::Success)
    fail(ErrorCode::A4Violated, "band Hessian at k0 is not positive definite");

  // cutoff radius: capped so the eta ball stays within half a dual cell, then
  // shrunk to where the band is quadratic-dominated and below delta/2 along
  // all diagonal rays
  double r0 = opts.r0_cap;
  const long n_dirs = grid_size(op.dim(), 3);
  for (long t = 0; t < n_dirs; ++t) {
    auto ix = grid_unflatten(t, op.dim(), 3);
    VecD u(op.dim());
    bool zero = true;
    for (int a = 0; a < op.dim(); ++a) {
      u[a] = ix[a] - 1;
      if (u[a] != 0.0) zero = false;
    }
    if (zero) continue;
    u.normalize();
    r0 = std::min(r0, ray_admissible_radius(ctx, cert, u, opts.r0_cap, opts.ray_samples,
                                            opts.quad_window));
  }
  cert.r0 = r0;

  // phase-fixed periodic part at k0
  Eigen::VectorXcd c = loc.at_k0.vectors.col(j - 1);
  int imax = 0;
  for (int i = 1; i < c.size(); ++i)
    if (std::abs(c[i]) > std::abs(c[imax])) imax = i;
  c *= std::conj(c[imax]) / std::abs(c[imax]);
  cert.phi0.k = loc.k0;
  cert.phi0.basis = ctx.basis();
  cert.phi0.coeffs = c;
  cert.phi0_norm = c.norm();
  return cert;
}

EdgeCertificate certify_auto_shift(const PeriodicOperator& op, int j, int M, int N, int n_b,
                                   bool flip, const CertifyOptions& opts, double* shift_out) {
  PeriodicOperator probe = shift_and_flip(op, 0.0, flip);
  BandSurface surface = band_grid(probe, M, n_b, N);
  EdgeLocation loc;
  try {
    loc = locate_edge(probe, surface, j, opts.grad_tol, opts.value_tol);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NotIsolatedMinimum) fail(ErrorCode::A3Violated, e.what());
    if (e.code() == ErrorCode::DegenerateBand) fail(ErrorCode::A2Violated, e.what());
    throw;
  }
  double shift = flip ? -loc.lambda0 : loc.lambda0;
  if (shift_out) *shift_out = shift;
  return certify(shift_and_flip(op, shift, flip), j, M, N, n_b, opts);
}

double quadratic_residual_exponent(const PeriodicOperator& op, const EdgeCertificate& cert,
                                   int levels) {
  FiberContext ctx(op, cert.N);
  const int d = op.dim();
  const double floor = 1e-11 * std::max(1.0, cert.delta);
  double worst = std::numeric_limits<double>::infinity();

  const long n_dirs = grid_size(d, 3);
  for (long t = 0; t < n_dirs; ++t) {
    auto ix = grid_unflatten(t, d, 3);
    VecD u(d);
    bool zero = true;
    for (int a = 0; a < d; ++a) {
      u[a] = ix[a] - 1;
      if (u[a] != 0.0) zero = false;
    }
    if (zero) continue;
    u.normalize();
    double quu = 0.5 * (u.transpose() * cert.H * u).value();

    std::vector<double> lx, ly;
    for (int i = 0; i < levels; ++i) {
      double r = cert.r0 * std::pow(0.5, i);
      double lam = band_value(ctx, cert.k0 + r * u, cert.j) - cert.lambda0;
      double res = std::abs(lam - quu * r * r);
      if (res < floor) continue;
      lx.push_back(std::log(r));
      ly.push_back(std::log(res));
    }
    if (lx.size() < 3) continue;  // residual at noise level: exactly quadratic
    double mx = 0, my = 0;
    for (size_t i = 0; i < lx.size(); ++i) { mx += lx[i]; my += ly[i]; }
    mx /= lx.size();
    my /= ly.size();
    double num = 0, den = 0;
    for (size_t i = 0; i < lx.size(); ++i) {
      num += (lx[i] - mx) * (ly[i] - my);
      den += (lx[i] - mx) * (lx[i] - mx);
    }
    worst = std::min(worst, num / den);
  }
  return worst;
}

}  // namespace pgreen
