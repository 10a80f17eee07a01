// hftscan: spectra, Hellmann–Feynman checks, symmetry labels and fermion ground-state
// curves for the built-in parametric models.
//
// Exit codes: 0 success, 1 numerical or verification failure, 2 usage error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <string>

#include "hft/csv.hpp"
#include "hft/error.hpp"
#include "hft/fermi.hpp"
#include "hft/models.hpp"
#include "hft/scan.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kNumericFailure = 1;
constexpr int kUsage = 2;

struct Options {
  std::string model = "six-site";
  double omega = 1.0;
  int nmax = 12;
  int np = 2;
  double lmin = 0.2;
  double lmax = 2.0;
  int steps = 19;
  double lambda = 0.5;
  double tol_deg = -1.0;
  double fd_step = hft::kDefaultFdStep;
  bool slopes = false;
  bool sorted = false;
  std::string out;
  std::string svg;
};

void add_model_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--model", o.model, "Model name (see `models`)");
  cmd->add_option("--omega", o.omega, "Oscillator frequency");
  cmd->add_option("--nmax", o.nmax, "Oscillator shell cutoff m+n <= nmax");
  cmd->add_option("--tol-deg", o.tol_deg, "Degeneracy tolerance (default 1e-8*(1+spectral radius))");
  cmd->add_option("--fd-step", o.fd_step, "Finite-difference step");
}

void add_grid_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--lmin", o.lmin, "Lower end of the lambda grid");
  cmd->add_option("--lmax", o.lmax, "Upper end of the lambda grid");
  cmd->add_option("--steps", o.steps, "Number of grid points");
}

hft::ScanConfig scan_config(const Options& o) {
  hft::ScanConfig c;
  c.model = o.model;
  c.params = {o.omega, o.nmax};
  c.lambda_lo = o.lmin;
  c.lambda_hi = o.lmax;
  c.steps = o.steps;
  c.slopes = o.slopes;
  c.sorted = o.sorted;
  c.degeneracy_tol = o.tol_deg;
  c.fd_step = o.fd_step;
  return c;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw hft::PreconditionError("cannot open output file " + path);
  f << text;
}

std::string svg_base(std::string path) {
  if (path.size() > 4 && path.compare(path.size() - 4, 4, ".svg") == 0) path.resize(path.size() - 4);
  return path;
}

int cmd_models() {
  for (const auto& m : hft::model_registry()) std::cout << m.name << "\t" << m.description << '\n';
  return kOk;
}

int cmd_scan(const Options& o) {
  emit(hft::to_csv(hft::run_scan(scan_config(o))), o.out);
  return kOk;
}

int cmd_fermi(const Options& o) {
  const auto r = hft::run_fermi(scan_config(o), {o.np});
  emit(hft::to_csv(r.table), o.out);
  if (!o.svg.empty()) {
    const std::string base = svg_base(o.svg);
    emit(r.energy_svg, base + "-energy.svg");
    emit(r.slope_svg, base + "-slope.svg");
  }
  return kOk;
}

int cmd_check(const Options& o) {
  hft::HftOptions opt;
  opt.degeneracy_tol = o.tol_deg;
  opt.fd_step = o.fd_step;
  const auto r = hft::run_check(o.model, {o.omega, o.nmax}, o.lambda, opt);
  emit(r.text, o.out);
  return r.passed ? kOk : kNumericFailure;
}

int cmd_classify(const Options& o) {
  const auto model = hft::make_model(o.model, {o.omega, o.nmax});
  const auto labels = hft::run_classify(model, o.lambda, o.tol_deg);
  std::string text;
  for (std::size_t i = 0; i < labels.size(); ++i) text += (i ? " " : "") + labels[i];
  emit(text + '\n', o.out);
  return kOk;
}

int cmd_crossings(const Options& o) {
  const auto model = hft::make_model(o.model, {o.omega, o.nmax});
  hft::FermiOptions opt;
  opt.degeneracy_tol = o.tol_deg;
  opt.fd_step = o.fd_step;
  hft::CsvTable t;
  t.header = {"lambda0"};
  for (double l : hft::find_crossings(model, o.lmin, o.lmax, o.steps, {o.np}, opt)) t.add_row({l});
  emit(hft::to_csv(t), o.out);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hellmann-Feynman spectra, degeneracy checks and fermion ground-state curves"};
  app.require_subcommand(1);
  Options o;

  auto* models = app.add_subcommand("models", "List the built-in models");

  auto* scan = app.add_subcommand("scan", "Eigenvalue branches (and HFT slopes) on a lambda grid");
  add_model_flags(scan, o);
  add_grid_flags(scan, o);
  scan->add_flag("--slopes", o.slopes, "Append slope columns");
  scan->add_flag("--sorted", o.sorted, "Sorted instead of branch-tracked columns");
  scan->add_option("--out", o.out, "CSV output path (default stdout)");

  auto* fermi = app.add_subcommand("fermi", "Fermion ground-state energy, slope and cusps");
  add_model_flags(fermi, o);
  add_grid_flags(fermi, o);
  fermi->add_option("--np", o.np, "Number of fermions");
  fermi->add_option("--out", o.out, "CSV output path (default stdout)");
  fermi->add_option("--svg", o.svg, "Write <base>-energy.svg and <base>-slope.svg");

  auto* check = app.add_subcommand("check", "Diagonal HFT report at one lambda");
  add_model_flags(check, o);
  check->add_option("--lambda", o.lambda, "Parameter value");
  check->add_option("--out", o.out, "Report output path (default stdout)");

  auto* classify = app.add_subcommand("classify", "Irrep label of every state at one lambda");
  add_model_flags(classify, o);
  classify->add_option("--lambda", o.lambda, "Parameter value");
  classify->add_option("--out", o.out, "Output path (default stdout)");

  auto* crossings = app.add_subcommand("crossings", "Level crossings at the occupation frontier");
  add_model_flags(crossings, o);
  add_grid_flags(crossings, o);
  crossings->add_option("--np", o.np, "Number of fermions");
  crossings->add_option("--out", o.out, "CSV output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    if (*models) return cmd_models();
    if (*scan) return cmd_scan(o);
    if (*fermi) return cmd_fermi(o);
    if (*check) return cmd_check(o);
    if (*classify) return cmd_classify(o);
    if (*crossings) return cmd_crossings(o);
  } catch (const hft::PreconditionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const hft::NumericError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumericFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumericFailure;
  }
  return kUsage;
}
