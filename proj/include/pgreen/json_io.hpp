#pragma once

#include <string>
#include <vector>

#include "pgreen/band.hpp"
#include "pgreen/green.hpp"
#include "pgreen/operator.hpp"
#include "pgreen/quadrature.hpp"
#include "pgreen/separable.hpp"

namespace pgreen {

inline constexpr const char* kVersion = "0.1.0";

// Flat bag of run parameters. Every artifact embeds it verbatim together with
// the library version, so rerunning the same config reproduces files byte for
// byte (all summation orders are deterministic).
struct RunConfig {
  std::string command;
  std::string op_file;
  int N = 3;
  int M = 24;
  int n_b = 31;
  int j = 1;
  double shift = 0.0;
  bool shift_auto = false;
  bool flip = false;
  QuadratureSpec quad;
  std::vector<double> radii;
  std::vector<double> direction;
  std::vector<double> x, y;
  double kappa = 0.0;
  double mu_radius = 4.0;
  int N1 = 64;       // 1D oracle cutoff
  int J = 6;         // oracle per-axis band window
  std::string out_dir;
  unsigned long seed = 0;
};

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

// Operator description files: {"d": int, "a": [{"G": [n...], "entry": [j,l],
// "re": .., "im": ..}], "b": [{"G", "entry": j, "re", "im"}], "c": [{"G",
// "re", "im"}]}. Frequencies are the integer multi-indices n with G = 2 pi n.
// Omitted "a" means the identity metric; omitted "b"/"c" mean zero. "im"
// defaults to 0 everywhere.
OperatorSpec parse_operator_spec(const std::string& text);
OperatorSpec load_operator_spec(const std::string& path);
std::string operator_spec_to_json(const OperatorSpec& spec);

std::string validation_to_json(const ValidationReport& rep, const RunConfig& cfg,
                               const std::vector<std::string>& warnings);

// Per-band min/max over the sampled zone grid plus the grid argmin of the
// requested band; the full surface is large and stays in memory.
std::string bands_to_json(const BandSurface& surface, const RunConfig& cfg);

std::string certificate_to_json(const EdgeCertificate& cert, const RunConfig& cfg);
EdgeCertificate certificate_from_json(const std::string& text);

std::string green_to_json(const GreenEvaluation& full, const GreenEvaluation& reduced,
                          std::complex<double> leading, const RunConfig& cfg);

// Fixed column schema R,Re(G),Im(G),Re(G0),Im(G0),Re(lead),Im(lead),
// abs_ratio_minus_1,est_error. The config echo rides in leading '#' comment
// lines so the table itself stays plain CSV.
std::string sweep_to_csv(const SweepResult& sweep, const RunConfig& cfg);
std::string sweep_summary_json(const SweepResult& sweep, const RunConfig& cfg);

std::string kernel_to_json(const std::vector<double>& radii,
                           const std::vector<KernelResult>& rows, double fitted_exponent,
                           const RunConfig& cfg);

std::string oracle_to_json(const SeparableReference& ref, const OracleComparison* cmp,
                           const RunConfig& cfg);

}  // namespace pgreen
