#include "pgreen/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "pgreen/parallel.hpp"

namespace pgreen {

void validate_quadrature(const QuadratureSpec& q) {
  if (q.order < 2 || q.order > 24)
    fail(ErrorCode::BadConfig, "quadrature order must be in 2..24");
  if (q.max_depth < 1 || q.max_depth > 60)
    fail(ErrorCode::BadConfig, "quadrature max_depth must be in 1..60");
  if (!(q.target_abs > 0.0))
    fail(ErrorCode::BadConfig, "quadrature target must be positive");
  if (q.eps < 0.0) fail(ErrorCode::BadConfig, "eps must be nonnegative");
  if (q.far_grid != 0 && (q.far_grid < 4 || q.far_grid % 2 != 0))
    fail(ErrorCode::BadConfig, "far grid size must be 0 (auto) or an even number >= 4");
  if (q.far_margin < 0.0) fail(ErrorCode::BadConfig, "far margin must be nonnegative");
  if (!(q.phase_threshold > 0.0))
    fail(ErrorCode::BadConfig, "phase threshold must be positive");
  if (q.max_evals < 1000) fail(ErrorCode::BadConfig, "evaluation budget too small");
  if (q.presplit_min < 2 || q.presplit_min % 2 != 0)
    fail(ErrorCode::BadConfig, "presplit must be even and >= 2");
}

namespace {

double legendre_value(int n, double x) {
  if (n == 0) return 1.0;
  double p0 = 1.0, p1 = x;
  for (int k = 2; k <= n; ++k) {
    double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

}  // namespace

const GaussLegendre& gl_rule(int order) {
  static std::map<int, GaussLegendre> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(order);
  if (it != cache.end()) return it->second;

  GaussLegendre g;
  g.order = order;
  g.x.resize(order);
  g.w.resize(order);
  for (int i = 0; i < order; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int step = 0; step < 100; ++step) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= order; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    g.x[i] = x;
    g.w[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  g.tail.resize(2, order);
  for (int r = 0; r < 2; ++r) {
    int n = order - 1 - r;
    for (int i = 0; i < order; ++i)
      g.tail(r, i) = (2.0 * n + 1.0) / 2.0 * g.w[i] * legendre_value(n, g.x[i]);
  }
  return cache.emplace(order, std::move(g)).first->second;
}

namespace {

// Coarser rules deep in the corner tower: cells there are tiny and many, and
// low orders lose nothing against the local 1/|k-k0|^2 profile.
int taper_order(int base, int depth) {
  int t = depth <= 4 ? base : depth <= 8 ? 4 : depth <= 12 ? 3 : 2;
  return std::max(2, std::min(base, t));
}

struct Cell {
  VecD lo;
  double h = 0.0;
  int depth = 0;
  int reg_budget = 0;  // -1 marks a cell touching the singular point
  long id = 0;
};

}  // namespace

CubeResult integrate_cube(int d, const CubeRegion& region, int slots, const BatchEval& eval,
                          const AdaptiveOptions& opts) {
  if (d < 1 || d > kMaxDim) fail(ErrorCode::BadConfig, "bad dimension for cube quadrature");
  if (slots < 1) fail(ErrorCode::BadConfig, "cube quadrature needs at least one slot");
  if (!(region.half_width > 0.0))
    fail(ErrorCode::BadConfig, "cube quadrature needs a positive half width");
  if (region.presplit < 2 || region.presplit % 2 != 0)
    fail(ErrorCode::BadConfig, "cube presplit must be even and >= 2");

  const VecD& c0 = region.center;
  const double vol_total = std::pow(2.0 * region.half_width, d);

  auto touching = [&](const Cell& cell) {
    for (int a = 0; a < d; ++a) {
      double tol = 1e-9 * cell.h;
      if (c0[a] < cell.lo[a] - tol || c0[a] > cell.lo[a] + cell.h + tol) return false;
    }
    return true;
  };
  auto culled = [&](const Cell& cell) {
    if (region.cull_radius <= 0.0) return false;
    double s = 0.0;
    for (int a = 0; a < d; ++a) {
      double lo = cell.lo[a], hi = lo + cell.h;
      double dd = c0[a] < lo ? lo - c0[a] : (c0[a] > hi ? c0[a] - hi : 0.0);
      s += dd * dd;
    }
    return std::sqrt(s) > region.cull_radius;
  };
  // With mirror on only the lexicographically positive half is meshed; the
  // other half is implied by f(2 c0 - k) = conj f(k). Presplit cell centers
  // never sit on a mirror hyperplane (even presplit), and children inherit
  // the side of their parent, so the test is only needed at the top level.
  auto lex_positive = [&](const Cell& cell) {
    for (int a = 0; a < d; ++a) {
      double off = cell.lo[a] + 0.5 * cell.h - c0[a];
      if (off > 1e-12) return true;
      if (off < -1e-12) return false;
    }
    return true;
  };

  std::vector<Cell> wave;
  long next_id = 0;
  const double h0 = 2.0 * region.half_width / region.presplit;
  for (long t = 0; t < grid_size(d, region.presplit); ++t) {
    auto ix = grid_unflatten(t, d, region.presplit);
    Cell cell;
    cell.lo.resize(d);
    for (int a = 0; a < d; ++a) cell.lo[a] = c0[a] - region.half_width + ix[a] * h0;
    cell.h = h0;
    cell.depth = 0;
    cell.reg_budget = touching(cell) ? -1 : opts.regular_extra;
    cell.id = next_id++;
    if (!culled(cell) && (!region.mirror || lex_positive(cell))) wave.push_back(cell);
  }

  struct Contrib {
    long id;
    Eigen::VectorXcd v;
    Eigen::VectorXd e;
  };
  std::vector<Contrib> contribs;
  long evals = 0;
  int depth_reached = 0;
  bool budget_hit = false;

  std::vector<std::complex<double>> buf;
  while (!wave.empty()) {
    std::vector<Cell> next;
    for (const Cell& cell : wave) {
      depth_reached = std::max(depth_reached, cell.depth);
      const bool corner = cell.reg_budget < 0;
      const int q = taper_order(opts.order, cell.depth);
      const GaussLegendre& rule = gl_rule(q);
      const long P = grid_size(d, q);

      Eigen::MatrixXd pts(d, P);
      for (long p = 0; p < P; ++p) {
        auto ix = grid_unflatten(p, d, q);
        for (int a = 0; a < d; ++a)
          pts(a, p) = cell.lo[a] + 0.5 * cell.h * (rule.x[ix[a]] + 1.0);
      }
      Eigen::MatrixXcd out(slots, P);
      eval(pts, out);
      evals += P;

      const double jac = std::pow(0.5 * cell.h, d);
      const long cross_n = P / q;
      Eigen::VectorXcd val(slots);
      Eigen::VectorXd ind(slots);
      buf.resize(P);
      std::vector<std::complex<double>> c1(cross_n), c2(cross_n);
      std::vector<double> wc(cross_n);
      for (int s = 0; s < slots; ++s) {
        for (long p = 0; p < P; ++p) {
          auto ix = grid_unflatten(p, d, q);
          double wp = 1.0;
          for (int a = 0; a < d; ++a) wp *= rule.w[ix[a]];
          buf[p] = out(s, p) * wp;
        }
        val[s] = pairwise_sum(buf) * jac;

        // spectral tail indicator: magnitude of the top two Legendre
        // coefficients along each axis, averaged over cross sections
        double tail_sum = 0.0;
        for (int a = 0; a < d; ++a) {
          std::fill(c1.begin(), c1.end(), std::complex<double>(0.0));
          std::fill(c2.begin(), c2.end(), std::complex<double>(0.0));
          for (long p = 0; p < P; ++p) {
            auto ix = grid_unflatten(p, d, q);
            long cross = 0;
            double wcr = 1.0;
            for (int b = 0; b < d; ++b) {
              if (b == a) continue;
              cross = cross * q + ix[b];
              wcr *= rule.w[ix[b]];
            }
            c1[cross] += rule.tail(0, ix[a]) * out(s, p);
            c2[cross] += rule.tail(1, ix[a]) * out(s, p);
            wc[cross] = wcr;
          }
          double acc = 0.0;
          for (long ci = 0; ci < cross_n; ++ci)
            acc += wc[ci] * (std::abs(c1[ci]) + std::abs(c2[ci]));
          tail_sum += acc;
        }
        ind[s] = tail_sum * jac;
      }

      // Regular cells follow error equidistribution by volume. Cells touching
      // the singular point instead compare their remaining tower mass (the
      // levels below shrink at least ~2x for an integrable 1/|k-k0|^2
      // profile, so 1.5x the current cell bounds them) against a fixed
      // fraction of the total budget; this stops the tower as soon as the
      // remainder is irrelevant instead of equidistributing into it.
      const double share = opts.target_abs * std::pow(cell.h, d) / vol_total;
      const double worst = ind.maxCoeff();
      const double tower_left = corner ? 1.5 * val.cwiseAbs().maxCoeff() + worst : 0.0;
      // 2^d cells share the singular corner, so each tower gets its slice
      const double tower_budget = opts.corner_share * opts.target_abs / (1 << d);
      const bool want_split = corner ? tower_left > tower_budget
                                     : worst > share && cell.reg_budget > 0;
      if (evals > opts.max_evals) budget_hit = true;
      const bool depth_ok = cell.depth < opts.max_depth;

      if (want_split && depth_ok && !budget_hit) {
        for (int ci = 0; ci < (1 << d); ++ci) {
          Cell ch;
          ch.lo.resize(d);
          ch.h = 0.5 * cell.h;
          ch.depth = cell.depth + 1;
          for (int a = 0; a < d; ++a)
            ch.lo[a] = cell.lo[a] + (((ci >> a) & 1) ? 0.5 * cell.h : 0.0);
          ch.reg_budget = corner ? (touching(ch) ? -1 : opts.regular_extra)
                                 : cell.reg_budget - 1;
          ch.id = next_id++;
          if (!culled(ch)) next.push_back(ch);
        }
      } else {
        Contrib c{cell.id, val, ind};
        // the settled corner cell stands in for its whole unrefined tower
        if (corner) c.e.array() += 1.5 * val.cwiseAbs().array();
        contribs.push_back(std::move(c));
      }
    }
    wave = std::move(next);
  }

  std::sort(contribs.begin(), contribs.end(),
            [](const Contrib& a, const Contrib& b) { return a.id < b.id; });
  CubeResult res;
  res.value.resize(slots);
  res.est = Eigen::VectorXd::Zero(slots);
  std::vector<std::complex<double>> vals(contribs.size());
  for (int s = 0; s < slots; ++s) {
    for (size_t i = 0; i < contribs.size(); ++i) {
      vals[i] = contribs[i].v[s];
      res.est[s] += contribs[i].e[s];
    }
    std::complex<double> total = pairwise_sum(vals);
    res.value[s] = region.mirror ? std::complex<double>(2.0 * total.real(), 0.0) : total;
  }
  if (region.mirror) res.est *= 2.0;
  res.evals = evals;
  res.depth_reached = depth_reached;
  res.budget_hit = budget_hit;
  return res;
}

GridResult integrate_periodic_grid(int d, int M, int slots, bool mirror,
                                   const BatchEval& eval) {
  if (d < 1 || d > kMaxDim) fail(ErrorCode::BadConfig, "bad dimension for grid quadrature");
  if (M < 2 || M % 2 != 0) fail(ErrorCode::BadConfig, "periodic grid needs even M >= 2");
  if (slots < 1) fail(ErrorCode::BadConfig, "grid quadrature needs at least one slot");

  const long nn = grid_size(d, M);
  const int half = M / 2;
  std::vector<VecD> nodes = zone_grid(d, M);

  // weight 2 nodes are folded with their mirror partner -k; nodes on a -pi
  // face (raw index 0) have no exact partner on the grid window and are kept
  // unpaired
  struct Node {
    long t;
    int weight;   // 1 direct, 2 folded pair representative
    bool coarse;  // also a node of the embedded half grid
  };
  std::vector<Node> incl;
  incl.reserve(nn);
  for (long t = 0; t < nn; ++t) {
    auto ix = grid_unflatten(t, d, M);
    bool face = false, self = true, coarse = true;
    std::array<int, kMaxDim> mir = {0, 0, 0, 0};
    for (int a = 0; a < d; ++a) {
      if (ix[a] == 0) face = true;
      mir[a] = ix[a] == 0 ? 0 : M - ix[a];
      if (mir[a] != ix[a]) self = false;
      if ((ix[a] - half) % 2 != 0) coarse = false;
    }
    if (!mirror || face || self) {
      incl.push_back({t, 1, coarse});
    } else if (t < grid_flatten(mir, d, M)) {
      incl.push_back({t, 2, coarse});
    }
  }

  const long P = static_cast<long>(incl.size());
  Eigen::MatrixXd pts(d, P);
  for (long i = 0; i < P; ++i) pts.col(i) = nodes[incl[i].t];
  Eigen::MatrixXcd out(slots, P);
  eval(pts, out);

  const double w_fine = std::pow(2.0 * M_PI / M, d);
  const double w_coarse = std::pow(4.0 * M_PI / M, d);
  GridResult res;
  res.value.resize(slots);
  res.est.resize(slots);
  res.evals = P;
  std::vector<std::complex<double>> fine(P), coarse;
  coarse.reserve(P);
  for (int s = 0; s < slots; ++s) {
    coarse.clear();
    for (long i = 0; i < P; ++i) {
      std::complex<double> f = out(s, i);
      if (incl[i].weight == 2) f = std::complex<double>(2.0 * f.real(), 0.0);
      fine[i] = f;
      if (incl[i].coarse) coarse.push_back(f);
    }
    std::complex<double> vf = pairwise_sum(fine) * w_fine;
    std::complex<double> vc = pairwise_sum(coarse) * w_coarse;
    res.value[s] = vf;
    res.est[s] = std::abs(vf - vc);
  }
  return res;
}

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) fail(ErrorCode::BadConfig, "slope fit needs matched samples");
  std::vector<double> lx, ly;
  for (size_t i = 0; i < x.size(); ++i) {
    if (x[i] > 0.0 && y[i] > 0.0) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  }
  if (lx.size() < 2) fail(ErrorCode::BadConfig, "slope fit needs at least two usable points");
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= lx.size();
  my /= ly.size();
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < lx.size(); ++i) {
    num += (lx[i] - mx) * (ly[i] - my);
    den += (lx[i] - mx) * (lx[i] - mx);
  }
  return num / den;
}

}  // namespace pgreen
