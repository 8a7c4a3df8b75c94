#include "pgreen/green.hpp"

#include <algorithm>
#include <cmath>

#include "pgreen/parallel.hpp"

namespace pgreen {

double bump_profile(double s, double r) {
  if (!(r > 0.0)) fail(ErrorCode::BadConfig, "bump radius must be positive");
  if (s < 0.0) s = -s;
  if (s <= 0.5 * r) return 1.0;
  if (s >= r) return 0.0;
  double t = 2.0 * s / r - 1.0;  // in (0,1)
  return std::exp(1.0 - 1.0 / (1.0 - t * t));
}

double newtonian_constant(int d) {
  if (d < 3) fail(ErrorCode::DimensionTooSmall, "Newtonian potential needs d >= 3");
  return std::tgamma(0.5 * d - 1.0) / (4.0 * std::pow(M_PI, 0.5 * d));
}

double newtonian_potential(int d, double dist) {
  if (!(dist > 0.0)) fail(ErrorCode::SingularPoint, "Newtonian potential at zero distance");
  return newtonian_constant(d) / std::pow(dist, d - 2);
}

AsymptoticModel asymptotic_model(const EdgeCertificate& cert) {
  AsymptoticModel m;
  m.d = static_cast<int>(cert.k0.size());
  if (m.d < 3)
    fail(ErrorCode::DimensionTooSmall, "Green asymptotics need d >= 3");
  m.k0 = cert.k0;
  m.H = cert.H;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cert.H);
  if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0.0)
    fail(ErrorCode::A4Violated, "certificate Hessian is not positive definite");
  m.sqrt_det_H = std::sqrt(es.eigenvalues().prod());
  m.H_inv_sqrt = es.eigenvectors() *
                 es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                 es.eigenvectors().transpose();
  m.phi0 = cert.phi0;
  m.phi0_norm = cert.phi0_norm;
  m.flipped = cert.flipped;
  return m;
}

namespace {

VecD reduce_to_cell(const VecD& x) {
  VecD r = x;
  for (int a = 0; a < r.size(); ++a) r[a] -= std::floor(r[a]);
  return r;
}

}  // namespace

std::complex<double> asymptotic_leading(const AsymptoticModel& model, const VecD& x,
                                        const VecD& y) {
  if (model.d < 3) fail(ErrorCode::DimensionTooSmall, "Green asymptotics need d >= 3");
  VecD delta = x - y;
  double rho = (model.H_inv_sqrt * delta).norm();
  if (!(rho > 0.0)) fail(ErrorCode::SingularPoint, "leading term evaluated at x = y");
  double pref = std::pow(M_PI, -0.5 * model.d) * std::tgamma(0.5 * (model.d - 2)) /
                (2.0 * model.sqrt_det_H);
  std::complex<double> phase = std::polar(1.0, model.k0.dot(delta));
  std::complex<double> ux = model.phi0.periodic_part(reduce_to_cell(x));
  std::complex<double> uy = model.phi0.periodic_part(reduce_to_cell(y));
  return pref * phase * ux * std::conj(uy) /
         (model.phi0_norm * model.phi0_norm * std::pow(rho, model.d - 2));
}

std::complex<double> bloch_branch(const TorusFunction& phi0, const Eigen::VectorXcd& v,
                                  double tol_rel) {
  if (phi0.coeffs.size() != v.size())
    fail(ErrorCode::BadConfig, "branch alignment needs matching basis sizes");
  std::complex<double> z = (phi0.coeffs.adjoint() * v).value();
  if (std::abs(z) < tol_rel * phi0.coeffs.norm() * v.norm())
    fail(ErrorCode::BranchLost,
         "eigenvector overlap with the certified branch fell below tolerance");
  return std::conj(z) / std::abs(z);
}

namespace {

bool real_valued(const FourierField& f) {
  for (const auto& [n, blk] : f.coeffs()) {
    double scale = std::max(1.0, blk.cwiseAbs().maxCoeff());
    if ((blk - f.at(freq_neg(n)).conjugate()).cwiseAbs().maxCoeff() > 1e-12 * scale)
      return false;
  }
  return true;
}

bool real_symbol(const PeriodicOperator& op) {
  return !op.has_b() && real_valued(op.a) && real_valued(op.c);
}

bool self_mirror(const VecD& k0) {
  for (int a = 0; a < k0.size(); ++a) {
    double v = std::abs(k0[a]);
    if (v > 1e-9 && std::abs(v - M_PI) > 1e-9) return false;
  }
  return true;
}

Eigen::VectorXcd basis_phases(const PlaneWaveBasis& basis, const VecD& x) {
  VecD xr = reduce_to_cell(x);
  Eigen::VectorXcd e(basis.size());
  for (int i = 0; i < basis.size(); ++i) e[i] = std::polar(1.0, basis.gvec(i).dot(xr));
  return e;
}

std::complex<double> lagrange_at_zero(const std::array<double, 3>& s,
                                      const std::array<std::complex<double>, 3>& f) {
  std::complex<double> L(0.0, 0.0);
  for (int i = 0; i < 3; ++i) {
    double w = 1.0;
    for (int l = 0; l < 3; ++l)
      if (l != i) w *= -s[l] / (s[i] - s[l]);
    L += w * f[i];
  }
  return L;
}

}  // namespace

GreenBatch full_green_batch(const PeriodicOperator& op, const EdgeCertificate& cert,
                            const std::vector<std::pair<VecD, VecD>>& pairs,
                            const QuadratureSpec& quad) {
  op.lattice.require_min_dim(3);
  validate_quadrature(quad);
  if (pairs.empty()) fail(ErrorCode::BadConfig, "Green evaluation needs at least one pair");
  if (op.flipped != cert.flipped)
    fail(ErrorCode::BadConfig, "operator and certificate disagree about flipping");
  if (cert.k0.size() != op.dim())
    fail(ErrorCode::BadConfig, "certificate dimension does not match the operator");
  if (!(cert.r0 > 0.0)) fail(ErrorCode::BadConfig, "certificate has no cutoff radius");

  const int d = op.dim();
  const int j = cert.j;
  const int n_b = cert.n_b;
  FiberContext ctx(op, cert.N);
  const int m = ctx.basis().size();
  if (n_b + 1 > m)
    fail(ErrorCode::BadConfig, "n_b must leave at least one band above the truncation");

  const VecD k0 = cert.k0;
  const double r0 = cert.r0;
  const double two_pi_d = std::pow(2.0 * M_PI, d);
  const double inv = 1.0 / two_pi_d;
  const std::complex<double> I(0.0, 1.0);

  const int nvar = quad.eps > 0.0 ? 3 : 1;
  const std::array<double, 3> eps_v = {quad.eps, 0.5 * quad.eps, 0.25 * quad.eps};
  const size_t np = pairs.size();

  std::vector<Eigen::VectorXcd> Ex(np), Ey(np);
  std::vector<VecD> delta(np);
  double max_delta = 0.0;
  for (size_t i = 0; i < np; ++i) {
    if (pairs[i].first.size() != d || pairs[i].second.size() != d)
      fail(ErrorCode::BadConfig, "evaluation point dimension mismatch");
    Ex[i] = basis_phases(ctx.basis(), pairs[i].first);
    Ey[i] = basis_phases(ctx.basis(), pairs[i].second);
    delta[i] = pairs[i].first - pairs[i].second;
    max_delta = std::max(max_delta, delta[i].norm());
  }

  const bool sym = real_symbol(op) && self_mirror(k0);
  bool phase_ok = true;
  for (size_t i = 0; i < np; ++i)
    if (std::abs(std::sin(k0.dot(delta[i]))) > 1e-9) phase_ok = false;
  const bool mir_near = sym && phase_ok;
  const bool mir_far = sym;

  // ---- near part: eta-weighted certified band over the cube around k0 ----
  int presplit = std::max(
      quad.presplit_min,
      2 * static_cast<int>(std::ceil(r0 * max_delta / quad.phase_threshold)));
  presplit = std::min(presplit, 64);

  const int nv_near = quad.eps > 0.0 ? nvar + 1 : 1;  // + bare-pole slot for eps > 0
  const int near_slots = static_cast<int>(np) * nv_near;
  auto near_slot = [&](size_t i, int v) { return static_cast<int>(i) * nv_near + v; };

  BatchEval near_eval = [&](const Eigen::Ref<const Eigen::MatrixXd>& pts,
                            Eigen::MatrixXcd& out) {
    const long P = pts.cols();
    parallel_for(P, [&](std::ptrdiff_t p) {
      VecD k = pts.col(p);
      FiberSolution sol = solve_fiber(ctx.assemble(k), j);
      const double lam = sol.values[j - 1];
      const Eigen::VectorXcd v = sol.vectors.col(j - 1);
      const double eta = bump_profile((k - k0).norm(), r0);
      for (size_t i = 0; i < np; ++i) {
        std::complex<double> ux = (Ex[i].transpose() * v).value();
        std::complex<double> uy = (Ey[i].transpose() * v).value();
        std::complex<double> t =
            eta * std::exp(I * k.dot(delta[i])) * ux * std::conj(uy);
        for (int vv = 0; vv < nvar; ++vv) out(near_slot(i, vv), p) = t / (lam + eps_v[vv]);
        if (quad.eps > 0.0) out(near_slot(i, nvar), p) = t / lam;
      }
    });
  };

  CubeRegion region;
  region.center = k0;
  region.half_width = r0;
  region.presplit = presplit;
  region.cull_radius = r0;
  region.mirror = mir_near;
  AdaptiveOptions aopts;
  aopts.order = quad.order;
  aopts.max_depth = quad.max_depth;
  aopts.target_abs = 0.5 * quad.target_abs * two_pi_d;
  aopts.max_evals = quad.max_evals;
  CubeResult near = integrate_cube(d, region, near_slots, near_eval, aopts);

  // ---- far part: everything smooth on the uniform zone grid ----
  int M = quad.far_grid;
  if (M == 0)
    M = std::max(8, 2 * static_cast<int>(std::ceil((max_delta + quad.far_margin) / 2.0)));
  const int nm = std::min(4, n_b);  // trailing band magnitudes for the tail estimate
  const int per_pair = nvar + 1 + nm;
  const int far_slots = static_cast<int>(np) * per_pair + 1;
  auto far_slot = [&](size_t i, int v) { return static_cast<int>(i) * per_pair + v; };
  const int tail_slot = static_cast<int>(np) * per_pair;

  BatchEval far_eval = [&](const Eigen::Ref<const Eigen::MatrixXd>& pts,
                           Eigen::MatrixXcd& out) {
    const long P = pts.cols();
    const int nev = std::min(n_b + 8, m);
    parallel_for(P, [&](std::ptrdiff_t p) {
      VecD k = pts.col(p);
      FiberSolution sol = solve_fiber(ctx.assemble(k), nev);
      // complete any eigenvalue tie straddling the band cutoff, so the
      // included set spans whole degenerate groups and stays mirror-symmetric
      const double ref = sol.values[n_b - 1];
      const double tie_tol = 1e-9 * std::max(1.0, std::abs(ref));
      int cut = n_b;
      while (cut < nev - 1 && std::abs(sol.values[cut] - ref) <= tie_tol) ++cut;

      const double eta = bump_profile(reduce_to_zone(k - k0).norm(), r0);
      const bool skip_j = eta >= 1.0 - 1e-12;
      for (size_t i = 0; i < np; ++i) {
        Eigen::VectorXcd ux = sol.vectors.leftCols(cut).transpose() * Ex[i];
        Eigen::VectorXcd uy = sol.vectors.leftCols(cut).transpose() * Ey[i];
        const std::complex<double> phase = std::exp(I * k.dot(delta[i]));
        for (int vv = 0; vv < nvar; ++vv) {
          std::complex<double> acc(0.0, 0.0);
          for (int b = 0; b < cut; ++b) {
            if (b == j - 1) continue;
            acc += ux[b] * std::conj(uy[b]) / (sol.values[b] + eps_v[vv]);
          }
          if (!skip_j)
            acc += (1.0 - eta) * ux[j - 1] * std::conj(uy[j - 1]) /
                   (sol.values[j - 1] + eps_v[vv]);
          out(far_slot(i, vv), p) = phase * acc;
        }
        out(far_slot(i, nvar), p) =
            skip_j ? std::complex<double>(0.0, 0.0)
                   : phase * (1.0 - eta) * ux[j - 1] * std::conj(uy[j - 1]) /
                         sol.values[j - 1];
        for (int t = 0; t < nm; ++t) {
          int b = n_b - nm + t;
          out(far_slot(i, nvar + 1 + t), p) = std::complex<double>(
              std::abs(ux[b] * std::conj(uy[b]) / (sol.values[b] + eps_v[0])), 0.0);
        }
      }
      out(tail_slot, p) =
          std::complex<double>(1.0 / std::max(std::abs(sol.values[cut]), 1e-300), 0.0);
    });
  };

  GridResult far = integrate_periodic_grid(d, M, far_slots, mir_far, far_eval);

  // ---- compose ----
  GreenBatch batch;
  batch.full.reserve(np);
  batch.reduced.reserve(np);
  const long evals = near.evals + far.evals;
  const double tail_bound = inv * far.value[tail_slot].real();

  for (size_t i = 0; i < np; ++i) {
    std::array<std::complex<double>, 3> Gv{};
    std::array<double, 3> est_v{};
    for (int vv = 0; vv < nvar; ++vv) {
      Gv[vv] = inv * (near.value[near_slot(i, vv)] + far.value[far_slot(i, vv)]);
      est_v[vv] = inv * (near.est[near_slot(i, vv)] + far.est[far_slot(i, vv)]);
    }
    std::complex<double> G;
    double rich = 0.0, quad_est = 0.0;
    if (quad.eps > 0.0) {
      std::array<double, 3> s = {std::sqrt(eps_v[0]), std::sqrt(eps_v[1]),
                                 std::sqrt(eps_v[2])};
      G = lagrange_at_zero(s, Gv);
      rich = 0.5 * std::abs(G - Gv[2]);
      quad_est = std::max({est_v[0], est_v[1], est_v[2]});
    } else {
      G = Gv[0];
      quad_est = est_v[0];
    }

    double tail_est = 0.0;
    if (nm >= 2) {
      double c_first = inv * far.value[far_slot(i, nvar + 1)].real();
      double c_last = inv * far.value[far_slot(i, nvar + nm)].real();
      if (c_last > 0.0) {
        double rho = c_first > 0.0 ? std::pow(c_last / c_first, 1.0 / (nm - 1)) : 0.95;
        rho = std::clamp(rho, 0.05, 0.95);
        tail_est = c_last * rho / (1.0 - rho);
      }
    }

    if (tail_est > 10.0 * quad.target_abs && tail_est > 2.0 * (quad_est + rich))
      fail(ErrorCode::TailTruncationDominates,
           "band truncation residual dominates the error budget; increase n_b");
    if (near.budget_hit && quad_est > 10.0 * quad.target_abs)
      fail(ErrorCode::QuadratureNotConverged,
           "evaluation budget exhausted before the quadrature target was met");

    GreenEvaluation g;
    g.x = pairs[i].first;
    g.y = pairs[i].second;
    g.value = G;
    g.est_error = quad_est + rich + tail_est;
    g.tail_bound = tail_bound;
    g.tail_estimate = tail_est;
    g.n_evals = evals;
    g.far_M = M;
    g.eps = quad.eps;
    batch.full.push_back(g);

    const int g0n = quad.eps > 0.0 ? near_slot(i, nvar) : near_slot(i, 0);
    GreenEvaluation r = g;
    r.value = inv * (near.value[g0n] + far.value[far_slot(i, nvar)]);
    r.est_error = inv * (near.est[g0n] + far.est[far_slot(i, nvar)]);
    r.tail_bound = 0.0;
    r.tail_estimate = 0.0;
    r.eps = 0.0;
    batch.reduced.push_back(r);
  }
  return batch;
}

GreenEvaluation full_green(const PeriodicOperator& op, const EdgeCertificate& cert,
                           const VecD& x, const VecD& y, const QuadratureSpec& quad) {
  return full_green_batch(op, cert, {{x, y}}, quad).full[0];
}

GreenEvaluation reduced_green(const PeriodicOperator& op, const EdgeCertificate& cert,
                              const VecD& x, const VecD& y, const QuadratureSpec& quad) {
  return full_green_batch(op, cert, {{x, y}}, quad).reduced[0];
}

SweepResult ratio_sweep(const PeriodicOperator& op, const EdgeCertificate& cert,
                        const std::vector<double>& radii, const VecD& direction,
                        const QuadratureSpec& quad) {
  op.lattice.require_min_dim(3);
  if (radii.empty()) fail(ErrorCode::BadConfig, "sweep needs at least one radius");
  for (double r : radii)
    if (!(r > 0.0)) fail(ErrorCode::BadConfig, "sweep radii must be positive");
  if (!(direction.norm() > 0.0)) fail(ErrorCode::BadConfig, "sweep direction is zero");
  VecD u = direction / direction.norm();

  AsymptoticModel model = asymptotic_model(cert);
  VecD y = VecD::Zero(op.dim());
  if (std::abs(model.phi0.periodic_part(y)) < 1e-8 * cert.phi0_norm)
    fail(ErrorCode::LeadingTermNearZero,
         "phi0 vanishes at the base point; choose a different offset");

  std::vector<std::pair<VecD, VecD>> pairs;
  std::vector<std::complex<double>> leads;
  for (double r : radii) {
    VecD x = r * u;
    if (std::abs(model.phi0.periodic_part(reduce_to_cell(x))) < 1e-8 * cert.phi0_norm)
      fail(ErrorCode::LeadingTermNearZero,
           "phi0 vanishes near x = " + std::to_string(r) +
               " * u; choose a different direction");
    pairs.push_back({x, y});
    leads.push_back(asymptotic_leading(model, x, y));
  }

  GreenBatch batch = full_green_batch(op, cert, pairs, quad);

  SweepResult res;
  std::vector<double> fit_x, fit_y;
  for (size_t i = 0; i < radii.size(); ++i) {
    SweepRow row;
    row.R = radii[i];
    row.x = pairs[i].first;
    row.y = pairs[i].second;
    row.green = batch.full[i].value;
    row.reduced = batch.reduced[i].value;
    row.leading = leads[i];
    double dev = std::abs(row.green / row.leading - 1.0);
    row.abs_ratio_minus_1 = std::max(dev, 1e-16);
    row.est_error = batch.full[i].est_error;
    row.below_noise = dev * std::abs(row.leading) < 2.0 * batch.full[i].est_error;
    if (!row.below_noise) {
      fit_x.push_back(row.R);
      fit_y.push_back(row.abs_ratio_minus_1);
    }
    res.rows.push_back(row);
  }
  res.fitted_exponent = fit_x.size() >= 2 ? fit_loglog_slope(fit_x, fit_y) : -99.0;
  return res;
}

KernelResult free_kernel_quadrature(const VecD& x0, double kappa, double mu_radius,
                                    const QuadratureSpec& quad) {
  const int d = static_cast<int>(x0.size());
  if (d < 3) fail(ErrorCode::DimensionTooSmall, "kernel model check needs d >= 3");
  if (d > kMaxDim) fail(ErrorCode::BadConfig, "dimension too large");
  validate_quadrature(quad);
  if (!(mu_radius > 0.0)) fail(ErrorCode::BadConfig, "mu radius must be positive");
  if (std::abs(kappa) * mu_radius >= 0.9)
    fail(ErrorCode::BadConfig, "kappa too large: symbol loses ellipticity in the window");

  const double two_pi_d = std::pow(2.0 * M_PI, d);
  const std::complex<double> I(0.0, 1.0);

  CubeRegion region;
  region.center = VecD::Zero(d);
  region.half_width = mu_radius;
  region.presplit = std::max(
      quad.presplit_min,
      2 * static_cast<int>(std::ceil(mu_radius * x0.norm() / quad.phase_threshold)));
  region.presplit = std::min(region.presplit, 512);
  region.cull_radius = mu_radius;
  region.mirror = kappa == 0.0;

  AdaptiveOptions aopts;
  aopts.order = quad.order;
  aopts.max_depth = quad.max_depth;
  aopts.target_abs = quad.target_abs * two_pi_d;
  aopts.max_evals = quad.max_evals;

  BatchEval eval = [&](const Eigen::Ref<const Eigen::MatrixXd>& pts,
                       Eigen::MatrixXcd& out) {
    const long P = pts.cols();
    parallel_for(P, [&](std::ptrdiff_t p) {
      VecD xi = pts.col(p);
      double s2 = xi.squaredNorm();
      double mu = bump_profile(std::sqrt(s2), mu_radius);
      out(0, p) = mu == 0.0 ? std::complex<double>(0.0, 0.0)
                            : mu * std::exp(I * xi.dot(x0)) /
                                  (s2 * (1.0 + kappa * xi[0]));
    });
  };

  CubeResult cube = integrate_cube(d, region, 1, eval, aopts);

  KernelResult res;
  res.value = cube.value[0] / two_pi_d;
  res.est_error = cube.est[0] / two_pi_d;
  res.n_evals = cube.evals;
  res.reference = newtonian_potential(d, x0.norm());
  if (cube.budget_hit && res.est_error > 10.0 * quad.target_abs)
    fail(ErrorCode::QuadratureNotConverged,
         "evaluation budget exhausted before the quadrature target was met");
  return res;
}

}  // namespace pgreen
