#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pgreen/band.hpp"
#include "pgreen/green.hpp"
#include "pgreen/json_io.hpp"
#include "pgreen/parallel.hpp"
#include "pgreen/separable.hpp"

using namespace pgreen;

namespace {

VecD to_vecd(const std::vector<double>& v) {
  VecD out((int)v.size());
  for (size_t i = 0; i < v.size(); ++i) out[(int)i] = v[i];
  return out;
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
  if (cfg.out_dir.empty()) return name;
  std::filesystem::create_directories(cfg.out_dir);
  return (std::filesystem::path(cfg.out_dir) / name).string();
}

PeriodicOperator load_validated(const RunConfig& cfg, ValidationReport* report = nullptr,
                                std::vector<std::string>* warnings = nullptr) {
  OperatorSpec spec = load_operator_spec(cfg.op_file);
  PeriodicOperator op = build_operator(spec, {}, warnings);
  ValidationReport rep = validate(op);
  if (report) *report = rep;
  return op;
}

// shift/flip stage shared by certify/green/sweep: "auto" locates the edge of
// band j first, a number is applied as given.
PeriodicOperator apply_shift(const PeriodicOperator& op, const RunConfig& cfg,
                             double* shift_used) {
  if (!cfg.shift_auto) {
    *shift_used = cfg.shift;
    return shift_and_flip(op, cfg.shift, cfg.flip);
  }
  PeriodicOperator probe = shift_and_flip(op, 0.0, cfg.flip);
  BandSurface surface = band_grid(probe, cfg.M, cfg.n_b, cfg.N);
  EdgeLocation loc = locate_edge(probe, surface, cfg.j);
  *shift_used = cfg.flip ? -loc.lambda0 : loc.lambda0;
  return shift_and_flip(op, *shift_used, cfg.flip);
}

EdgeCertificate make_certificate(const PeriodicOperator& op, const RunConfig& cfg,
                                 double* shift_used) {
  PeriodicOperator shifted = apply_shift(op, cfg, shift_used);
  return certify(shifted, cfg.j, cfg.M, cfg.N, cfg.n_b);
}

int run(int argc, char** argv) {
  CLI::App app{"band structure, spectral edge certificates, and Green function "
               "asymptotics of periodic elliptic operators"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string shift_arg = "0";
  std::vector<double> dir = {1.0, 0.0, 0.0};

  auto add_common = [&](CLI::App* sub, bool needs_op) {
    auto* opt = sub->add_option("--op", cfg.op_file, "operator description JSON file");
    if (needs_op) opt->required();
    sub->add_option("--N", cfg.N, "plane-wave cutoff per axis");
    sub->add_option("--M", cfg.M, "zone grid nodes per axis");
    sub->add_option("--nb", cfg.n_b, "number of bands");
    sub->add_option("--j", cfg.j, "band index (1-based)");
    sub->add_option("--out", cfg.out_dir, "output directory for artifacts");
    sub->add_option("--tol", cfg.quad.target_abs, "quadrature absolute target");
    sub->add_option("--quad-depth", cfg.quad.max_depth, "adaptive subdivision depth limit");
    sub->add_option("--quad-order", cfg.quad.order, "Gauss-Legendre points per axis");
    sub->add_option("--max-evals", cfg.quad.max_evals, "fiber evaluation budget");
    sub->add_option("--seed", cfg.seed, "seed echoed into artifacts");
  };
  auto add_shift = [&](CLI::App* sub) {
    sub->add_option("--shift", shift_arg,
                    "spectral shift: a number, or 'auto' to locate the band-j edge");
    sub->add_flag("--flip", cfg.flip, "certify a band maximum (top edge)");
  };

  CLI::App* validate_cmd = app.add_subcommand("validate", "check an operator file");
  add_common(validate_cmd, true);

  CLI::App* bands_cmd = app.add_subcommand("bands", "band extent table over the zone grid");
  add_common(bands_cmd, true);
  add_shift(bands_cmd);

  CLI::App* certify_cmd = app.add_subcommand("certify", "certify the spectral edge");
  add_common(certify_cmd, true);
  add_shift(certify_cmd);

  CLI::App* green_cmd = app.add_subcommand("green", "Green function at one point pair");
  add_common(green_cmd, true);
  add_shift(green_cmd);
  green_cmd->add_option("--x", cfg.x, "evaluation point x")->expected(1, kMaxDim);
  green_cmd->add_option("--y", cfg.y, "evaluation point y")->expected(1, kMaxDim);
  green_cmd->add_option("--eps", cfg.quad.eps, "pole regularization parameter");

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Green/leading ratio over radii");
  add_common(sweep_cmd, true);
  add_shift(sweep_cmd);
  sweep_cmd->add_option("--radii", cfg.radii, "radii |x-y|")->delimiter(',')->required();
  sweep_cmd->add_option("--dir", dir, "sweep direction")->delimiter(',');
  sweep_cmd->add_option("--eps", cfg.quad.eps, "pole regularization parameter");

  CLI::App* prop1_cmd = app.add_subcommand(
      "prop1", "free-kernel quadrature against the Newtonian potential");
  add_common(prop1_cmd, false);
  prop1_cmd->add_option("--radii", cfg.radii, "values of |x0|")->delimiter(',');
  prop1_cmd->add_option("--dir", dir, "direction of x0")->delimiter(',');
  prop1_cmd->add_option("--kappa", cfg.kappa, "cubic symbol perturbation");
  prop1_cmd->add_option("--mu-radius", cfg.mu_radius, "bump cutoff radius in xi");

  CLI::App* oracle_cmd = app.add_subcommand(
      "oracle", "separable reference data, optionally compared to a certificate");
  add_common(oracle_cmd, true);
  add_shift(oracle_cmd);
  oracle_cmd->add_option("--N1", cfg.N1, "1D dense cutoff");
  oracle_cmd->add_option("--J", cfg.J, "per-axis band window");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  cfg.direction = dir;
  if (shift_arg == "auto") {
    cfg.shift_auto = true;
    cfg.shift = 0.0;
  } else {
    cfg.shift_auto = false;
    try {
      cfg.shift = std::stod(shift_arg);
    } catch (const std::exception&) {
      fail(ErrorCode::BadConfig, "--shift expects a number or 'auto'");
    }
  }
  validate_quadrature(cfg.quad);

  if (validate_cmd->parsed()) {
    cfg.command = "validate";
    ValidationReport rep;
    std::vector<std::string> warnings;
    load_validated(cfg, &rep, &warnings);
    std::string doc = validation_to_json(rep, cfg, warnings);
    write_text_file(out_path(cfg, "validation.json"), doc);
    std::fputs(doc.c_str(), stdout);
    return 0;
  }

  if (bands_cmd->parsed()) {
    cfg.command = "bands";
    PeriodicOperator op = load_validated(cfg);
    double shift_used = 0.0;
    PeriodicOperator shifted = apply_shift(op, cfg, &shift_used);
    BandSurface surface = band_grid(shifted, cfg.M, cfg.n_b, cfg.N);
    cfg.shift = shift_used;
    std::string doc = bands_to_json(surface, cfg);
    write_text_file(out_path(cfg, "bands.json"), doc);
    std::fputs(doc.c_str(), stdout);
    return 0;
  }

  if (certify_cmd->parsed()) {
    cfg.command = "certify";
    PeriodicOperator op = load_validated(cfg);
    double shift_used = 0.0;
    EdgeCertificate cert = make_certificate(op, cfg, &shift_used);
    cfg.shift = shift_used;
    std::string doc = certificate_to_json(cert, cfg);
    write_text_file(out_path(cfg, "certificate.json"), doc);
    std::fputs(doc.c_str(), stdout);
    return 0;
  }

  if (green_cmd->parsed()) {
    cfg.command = "green";
    if (cfg.x.empty() || cfg.y.empty())
      fail(ErrorCode::BadConfig, "green needs --x and --y");
    PeriodicOperator op = load_validated(cfg);
    if ((int)cfg.x.size() != op.dim() || (int)cfg.y.size() != op.dim())
      fail(ErrorCode::BadConfig, "--x/--y must have d components");
    double shift_used = 0.0;
    PeriodicOperator shifted = apply_shift(op, cfg, &shift_used);
    EdgeCertificate cert = certify(shifted, cfg.j, cfg.M, cfg.N, cfg.n_b);
    cfg.shift = shift_used;
    VecD x = to_vecd(cfg.x), y = to_vecd(cfg.y);
    GreenBatch batch = full_green_batch(shifted, cert, {{x, y}}, cfg.quad);
    std::complex<double> lead = asymptotic_leading(asymptotic_model(cert), x, y);
    std::string doc = green_to_json(batch.full[0], batch.reduced[0], lead, cfg);
    write_text_file(out_path(cfg, "green.json"), doc);
    std::fputs(doc.c_str(), stdout);
    return 0;
  }

  if (sweep_cmd->parsed()) {
    cfg.command = "sweep";
    PeriodicOperator op = load_validated(cfg);
    if (sweep_cmd->count("--dir") == 0) {
      cfg.direction.assign(op.dim(), 0.0);
      cfg.direction[0] = 1.0;
    }
    if ((int)cfg.direction.size() != op.dim())
      fail(ErrorCode::BadConfig, "--dir must have d components");
    double shift_used = 0.0;
    PeriodicOperator shifted = apply_shift(op, cfg, &shift_used);
    EdgeCertificate cert = certify(shifted, cfg.j, cfg.M, cfg.N, cfg.n_b);
    cfg.shift = shift_used;
    SweepResult sweep = ratio_sweep(shifted, cert, cfg.radii, to_vecd(cfg.direction),
                                    cfg.quad);
    write_text_file(out_path(cfg, "sweep.csv"), sweep_to_csv(sweep, cfg));
    std::string doc = sweep_summary_json(sweep, cfg);
    write_text_file(out_path(cfg, "sweep.json"), doc);
    std::fputs(doc.c_str(), stdout);
    return 0;
  }

  if (prop1_cmd->parsed()) {
    cfg.command = "prop1";
    if (cfg.radii.empty()) cfg.radii = {4.0, 8.0, 16.0, 32.0};
    if (cfg.quad.max_evals < 100000000) cfg.quad.max_evals = 400000000;
    VecD u = to_vecd(cfg.direction);
    if (u.norm() == 0.0) fail(ErrorCode::BadConfig, "--dir must be nonzero");
    u /= u.norm();
    std::vector<KernelResult> rows;
    std::vector<double> devs;
    for (double r : cfg.radii) {
      KernelResult kr = free_kernel_quadrature(r * u, cfg.kappa, cfg.mu_radius, cfg.quad);
      rows.push_back(kr);
      devs.push_back(std::abs(kr.value - kr.reference) / std::abs(kr.reference));
    }
    double fitted = -99.0;
    if (rows.size() >= 2) {
      try {
        fitted = fit_loglog_slope(cfg.radii, devs);
      } catch (const Error&) {
      }
    }
    std::string doc = kernel_to_json(cfg.radii, rows, fitted, cfg);
    write_text_file(out_path(cfg, "prop1.json"), doc);
    std::fputs(doc.c_str(), stdout);
    return 0;
  }

  if (oracle_cmd->parsed()) {
    cfg.command = "oracle";
    PeriodicOperator op = load_validated(cfg);
    double shift_used = 0.0;
    PeriodicOperator shifted = apply_shift(op, cfg, &shift_used);
    SeparableReference ref = separable_reference(shifted, cfg.N1, cfg.J);
    cfg.shift = shift_used;
    // with an operator file the pipeline certificate rides along for comparison
    EdgeCertificate cert = certify(shifted, cfg.j, cfg.M, cfg.N, cfg.n_b);
    OracleComparison cmp = compare_to_oracle(cert, ref);
    std::string doc = oracle_to_json(ref, &cmp, cfg);
    write_text_file(out_path(cfg, "oracle.json"), doc);
    std::fputs(doc.c_str(), stdout);
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return static_cast<int>(e.category());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
