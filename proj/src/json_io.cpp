#include "pgreen/json_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace pgreen {

using nlohmann::json;

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::BadConfig, "cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::BadConfig, "cannot write file: " + path);
  out << text;
  if (!out) fail(ErrorCode::BadConfig, "short write: " + path);
}

namespace {

json vec_to_json(const VecD& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

json mat_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

json freq_to_json(const Freq& n, int d) {
  json a = json::array();
  for (int i = 0; i < d; ++i) a.push_back(n[i]);
  return a;
}

Freq freq_from_json(const json& a, int d, const char* where) {
  if (!a.is_array() || (int)a.size() != d)
    fail(ErrorCode::BadConfig, std::string(where) + ": \"G\" must be an array of " +
                                   std::to_string(d) + " integers");
  Freq n = zero_freq();
  for (int i = 0; i < d; ++i) {
    if (!a[i].is_number_integer())
      fail(ErrorCode::BadConfig, std::string(where) + ": frequencies must be integers");
    n[i] = a[i].get<int>();
  }
  return n;
}

std::complex<double> value_from_json(const json& e) {
  double re = e.value("re", 0.0);
  double im = e.value("im", 0.0);
  return {re, im};
}

json config_to_json(const RunConfig& cfg) {
  json q;
  q["order"] = cfg.quad.order;
  q["max_depth"] = cfg.quad.max_depth;
  q["target_abs"] = cfg.quad.target_abs;
  q["eps"] = cfg.quad.eps;
  q["far_grid"] = cfg.quad.far_grid;
  q["far_margin"] = cfg.quad.far_margin;
  q["phase_threshold"] = cfg.quad.phase_threshold;
  q["max_evals"] = cfg.quad.max_evals;
  q["presplit_min"] = cfg.quad.presplit_min;

  json c;
  c["command"] = cfg.command;
  c["op_file"] = cfg.op_file;
  c["N"] = cfg.N;
  c["M"] = cfg.M;
  c["n_b"] = cfg.n_b;
  c["j"] = cfg.j;
  c["shift"] = cfg.shift;
  c["shift_auto"] = cfg.shift_auto;
  c["flip"] = cfg.flip;
  c["quad"] = q;
  c["radii"] = cfg.radii;
  c["direction"] = cfg.direction;
  c["x"] = cfg.x;
  c["y"] = cfg.y;
  c["kappa"] = cfg.kappa;
  c["mu_radius"] = cfg.mu_radius;
  c["N1"] = cfg.N1;
  c["J"] = cfg.J;
  c["out_dir"] = cfg.out_dir;
  c["seed"] = cfg.seed;
  return c;
}

void stamp(json& doc, const RunConfig& cfg) {
  doc["version"] = kVersion;
  doc["config"] = config_to_json(cfg);
}

json complex_to_json(std::complex<double> z) {
  json e;
  e["re"] = z.real();
  e["im"] = z.imag();
  return e;
}

json green_eval_json(const GreenEvaluation& g) {
  json e;
  e["x"] = vec_to_json(g.x);
  e["y"] = vec_to_json(g.y);
  e["value"] = complex_to_json(g.value);
  e["est_error"] = g.est_error;
  e["tail_bound"] = g.tail_bound;
  e["tail_estimate"] = g.tail_estimate;
  e["n_evals"] = g.n_evals;
  e["far_M"] = g.far_M;
  e["eps"] = g.eps;
  return e;
}

}  // namespace

OperatorSpec parse_operator_spec(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::BadConfig, std::string("operator file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("d") || !doc["d"].is_number_integer())
    fail(ErrorCode::BadConfig, "operator file needs an integer \"d\"");
  OperatorSpec spec;
  spec.d = doc["d"].get<int>();
  if (spec.d < 1 || spec.d > kMaxDim)
    fail(ErrorCode::BadConfig, "operator dimension must be in 1.." + std::to_string(kMaxDim));

  if (doc.contains("a")) {
    spec.a_given = true;
    if (!doc["a"].is_array()) fail(ErrorCode::BadConfig, "\"a\" must be an array");
    for (const auto& e : doc["a"]) {
      OperatorSpec::AEntry ae;
      ae.n = freq_from_json(e.value("G", json::array()), spec.d, "a");
      if (!e.contains("entry") || !e["entry"].is_array() || e["entry"].size() != 2)
        fail(ErrorCode::BadConfig, "a: \"entry\" must be [j, l]");
      ae.j = e["entry"][0].get<int>();
      ae.l = e["entry"][1].get<int>();
      if (ae.j < 0 || ae.j >= spec.d || ae.l < 0 || ae.l >= spec.d)
        fail(ErrorCode::BadConfig, "a: entry indices must lie in 0..d-1");
      ae.v = value_from_json(e);
      spec.a.push_back(ae);
    }
  }
  if (doc.contains("b")) {
    if (!doc["b"].is_array()) fail(ErrorCode::BadConfig, "\"b\" must be an array");
    for (const auto& e : doc["b"]) {
      OperatorSpec::BEntry be;
      be.n = freq_from_json(e.value("G", json::array()), spec.d, "b");
      if (!e.contains("entry") || !e["entry"].is_number_integer())
        fail(ErrorCode::BadConfig, "b: \"entry\" must be a component index");
      be.j = e["entry"].get<int>();
      if (be.j < 0 || be.j >= spec.d)
        fail(ErrorCode::BadConfig, "b: entry index must lie in 0..d-1");
      be.v = value_from_json(e);
      spec.b.push_back(be);
    }
  }
  if (doc.contains("c")) {
    if (!doc["c"].is_array()) fail(ErrorCode::BadConfig, "\"c\" must be an array");
    for (const auto& e : doc["c"]) {
      OperatorSpec::CEntry ce;
      ce.n = freq_from_json(e.value("G", json::array()), spec.d, "c");
      ce.v = value_from_json(e);
      spec.c.push_back(ce);
    }
  }
  return spec;
}

OperatorSpec load_operator_spec(const std::string& path) {
  return parse_operator_spec(read_text_file(path));
}

std::string operator_spec_to_json(const OperatorSpec& spec) {
  json doc;
  doc["d"] = spec.d;
  if (spec.a_given) {
    json arr = json::array();
    for (const auto& ae : spec.a) {
      json e;
      e["G"] = freq_to_json(ae.n, spec.d);
      e["entry"] = {ae.j, ae.l};
      e["re"] = ae.v.real();
      if (ae.v.imag() != 0.0) e["im"] = ae.v.imag();
      arr.push_back(e);
    }
    doc["a"] = arr;
  }
  if (!spec.b.empty()) {
    json arr = json::array();
    for (const auto& be : spec.b) {
      json e;
      e["G"] = freq_to_json(be.n, spec.d);
      e["entry"] = be.j;
      e["re"] = be.v.real();
      if (be.v.imag() != 0.0) e["im"] = be.v.imag();
      arr.push_back(e);
    }
    doc["b"] = arr;
  }
  if (!spec.c.empty()) {
    json arr = json::array();
    for (const auto& ce : spec.c) {
      json e;
      e["G"] = freq_to_json(ce.n, spec.d);
      e["re"] = ce.v.real();
      if (ce.v.imag() != 0.0) e["im"] = ce.v.imag();
      arr.push_back(e);
    }
    doc["c"] = arr;
  }
  return doc.dump(2) + "\n";
}

std::string validation_to_json(const ValidationReport& rep, const RunConfig& cfg,
                               const std::vector<std::string>& warnings) {
  json doc;
  doc["theta_estimate"] = rep.theta_estimate;
  doc["is_real"] = rep.is_real;
  doc["is_symmetric"] = rep.is_symmetric;
  doc["elliptic"] = rep.elliptic;
  doc["sample_grid"] = rep.sample_grid;
  doc["warnings"] = warnings;
  stamp(doc, cfg);
  return doc.dump(2) + "\n";
}

std::string bands_to_json(const BandSurface& surface, const RunConfig& cfg) {
  json doc;
  doc["d"] = surface.d;
  doc["M"] = surface.M;
  doc["N"] = surface.N;
  doc["n_b"] = surface.n_b;
  doc["flipped"] = surface.flipped;
  json bmin = json::array(), bmax = json::array();
  long argmin_node = 0;
  int jj = std::min(std::max(cfg.j, 1), surface.n_b);
  for (int b = 0; b < surface.n_b; ++b) {
    double lo = surface.values(b, 0), hi = surface.values(b, 0);
    for (long t = 1; t < surface.values.cols(); ++t) {
      double v = surface.values(b, t);
      if (v < lo) lo = v;
      if (v > hi) hi = v;
      if (b == jj - 1 && v < surface.values(b, argmin_node)) argmin_node = t;
    }
    bmin.push_back(lo);
    bmax.push_back(hi);
  }
  doc["band_min"] = bmin;
  doc["band_max"] = bmax;
  auto ix = grid_unflatten(argmin_node, surface.d, surface.M);
  VecD kmin(surface.d);
  for (int a = 0; a < surface.d; ++a)
    kmin[a] = 2.0 * M_PI * (ix[a] - surface.M / 2) / surface.M;
  doc["grid_argmin_band_j"] = vec_to_json(kmin);
  stamp(doc, cfg);
  return doc.dump(2) + "\n";
}

std::string certificate_to_json(const EdgeCertificate& cert, const RunConfig& cfg) {
  json doc;
  doc["j"] = cert.j;
  doc["k0"] = vec_to_json(cert.k0);
  doc["lambda0"] = cert.lambda0;
  doc["H"] = mat_to_json(cert.H);
  doc["delta"] = cert.delta;
  doc["r0"] = cert.r0;
  json phi = json::array();
  const PlaneWaveBasis& basis = cert.phi0.basis;
  for (int i = 0; i < basis.size(); ++i) {
    std::complex<double> c = cert.phi0.coeffs[i];
    if (c == std::complex<double>(0.0, 0.0)) continue;
    json e;
    e["G"] = freq_to_json(basis.freq(i), basis.dim());
    e["re"] = c.real();
    e["im"] = c.imag();
    phi.push_back(e);
  }
  doc["phi0"] = phi;
  doc["phi0_norm"] = cert.phi0_norm;
  doc["N"] = cert.N;
  doc["M"] = cert.M;
  doc["n_b"] = cert.n_b;
  doc["grad_norm"] = cert.grad_norm;
  doc["flipped"] = cert.flipped;
  doc["multiplicity_ok"] = cert.multiplicity_ok;
  stamp(doc, cfg);
  return doc.dump(2) + "\n";
}

EdgeCertificate certificate_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::BadConfig, std::string("certificate is not valid JSON: ") + e.what());
  }
  for (const char* key : {"j", "k0", "lambda0", "H", "delta", "r0", "phi0", "phi0_norm",
                          "N", "M"})
    if (!doc.contains(key))
      fail(ErrorCode::BadConfig, std::string("certificate is missing \"") + key + "\"");

  EdgeCertificate cert;
  cert.j = doc["j"].get<int>();
  const auto& k0 = doc["k0"];
  int d = (int)k0.size();
  if (d < 1 || d > kMaxDim) fail(ErrorCode::BadConfig, "certificate k0 has bad dimension");
  cert.k0.resize(d);
  for (int i = 0; i < d; ++i) cert.k0[i] = k0[i].get<double>();
  cert.lambda0 = doc["lambda0"].get<double>();
  cert.H.resize(d, d);
  for (int i = 0; i < d; ++i)
    for (int jx = 0; jx < d; ++jx) cert.H(i, jx) = doc["H"][i][jx].get<double>();
  cert.delta = doc["delta"].get<double>();
  cert.r0 = doc["r0"].get<double>();
  cert.phi0_norm = doc["phi0_norm"].get<double>();
  cert.N = doc["N"].get<int>();
  cert.M = doc["M"].get<int>();
  cert.n_b = doc.value("n_b", 0);
  cert.grad_norm = doc.value("grad_norm", 0.0);
  cert.flipped = doc.value("flipped", false);
  cert.multiplicity_ok = doc.value("multiplicity_ok", true);

  PlaneWaveBasis basis(d, cert.N);
  Eigen::VectorXcd coeffs = Eigen::VectorXcd::Zero(basis.size());
  for (const auto& e : doc["phi0"]) {
    Freq n = freq_from_json(e.value("G", json::array()), d, "phi0");
    int idx = basis.index_of(n);
    if (idx < 0) fail(ErrorCode::BadConfig, "certificate phi0 frequency outside cutoff");
    coeffs[idx] = value_from_json(e);
  }
  cert.phi0.k = cert.k0;
  cert.phi0.basis = basis;
  cert.phi0.coeffs = coeffs;
  return cert;
}

std::string green_to_json(const GreenEvaluation& full, const GreenEvaluation& reduced,
                          std::complex<double> leading, const RunConfig& cfg) {
  json doc;
  doc["green"] = green_eval_json(full);
  doc["reduced"] = green_eval_json(reduced);
  doc["leading"] = complex_to_json(leading);
  stamp(doc, cfg);
  return doc.dump(2) + "\n";
}

std::string sweep_to_csv(const SweepResult& sweep, const RunConfig& cfg) {
  std::ostringstream out;
  json cfgline = config_to_json(cfg);
  out << "# pgreen " << kVersion << "\n";
  out << "# config " << cfgline.dump() << "\n";
  out << "R,Re(G),Im(G),Re(G0),Im(G0),Re(lead),Im(lead),abs_ratio_minus_1,est_error\n";
  char buf[64];
  auto put = [&](double v, char sep) {
    std::snprintf(buf, sizeof buf, "%.12e", v);
    out << buf << sep;
  };
  for (const auto& r : sweep.rows) {
    put(r.R, ',');
    put(r.green.real(), ',');
    put(r.green.imag(), ',');
    put(r.reduced.real(), ',');
    put(r.reduced.imag(), ',');
    put(r.leading.real(), ',');
    put(r.leading.imag(), ',');
    put(r.abs_ratio_minus_1, ',');
    put(r.est_error, '\n');
  }
  return out.str();
}

std::string sweep_summary_json(const SweepResult& sweep, const RunConfig& cfg) {
  json doc;
  doc["fitted_exponent"] = sweep.fitted_exponent;
  json rows = json::array();
  for (const auto& r : sweep.rows) {
    json e;
    e["R"] = r.R;
    e["green"] = complex_to_json(r.green);
    e["reduced"] = complex_to_json(r.reduced);
    e["leading"] = complex_to_json(r.leading);
    e["abs_ratio_minus_1"] = r.abs_ratio_minus_1;
    e["est_error"] = r.est_error;
    e["below_noise"] = r.below_noise;
    rows.push_back(e);
  }
  doc["rows"] = rows;
  stamp(doc, cfg);
  return doc.dump(2) + "\n";
}

std::string kernel_to_json(const std::vector<double>& radii,
                           const std::vector<KernelResult>& rows, double fitted_exponent,
                           const RunConfig& cfg) {
  json doc;
  json arr = json::array();
  for (size_t i = 0; i < rows.size(); ++i) {
    json e;
    e["r"] = radii[i];
    e["value"] = complex_to_json(rows[i].value);
    e["reference"] = rows[i].reference;
    e["rel_deviation"] = std::abs(rows[i].value - rows[i].reference) /
                         std::abs(rows[i].reference);
    e["est_error"] = rows[i].est_error;
    e["n_evals"] = rows[i].n_evals;
    arr.push_back(e);
  }
  doc["rows"] = arr;
  doc["fitted_exponent"] = fitted_exponent;
  stamp(doc, cfg);
  return doc.dump(2) + "\n";
}

std::string oracle_to_json(const SeparableReference& ref, const OracleComparison* cmp,
                           const RunConfig& cfg) {
  json doc;
  doc["d"] = ref.d;
  doc["J"] = ref.J;
  doc["flipped"] = ref.flipped;
  doc["k0"] = vec_to_json(ref.k0);
  doc["lambda0"] = ref.lambda0;
  doc["H_diag"] = vec_to_json(ref.H_diag);
  doc["delta"] = ref.delta;
  doc["axis_min"] = mat_to_json(ref.axis_min);
  doc["axis_max"] = mat_to_json(ref.axis_max);
  if (cmp) {
    json c;
    c["k0_dist"] = cmp->k0_dist;
    c["lambda0_diff"] = cmp->lambda0_diff;
    c["h_diag_rel"] = cmp->h_diag_rel;
    c["h_offdiag_abs"] = cmp->h_offdiag_abs;
    c["delta_rel"] = cmp->delta_rel;
    c["ok"] = cmp->ok;
    doc["comparison"] = c;
  }
  stamp(doc, cfg);
  return doc.dump(2) + "\n";
}

}  // namespace pgreen
