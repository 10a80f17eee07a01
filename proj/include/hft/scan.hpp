#pragma once

// Grid drivers behind the command-line tool. Each returns data (tables, text, SVG)
// and leaves I/O and exit codes to the caller.

#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hft/csv.hpp"
#include "hft/error.hpp"
#include "hft/fermi.hpp"
#include "hft/hft.hpp"
#include "hft/models.hpp"
#include "hft/svg.hpp"
#include "hft/symmetry.hpp"
#include "hft/tracking.hpp"

namespace hft {

struct ScanConfig {
  std::string model = "six-site";
  ModelParams params;
  double lambda_lo = 0.2;
  double lambda_hi = 2.0;
  int steps = 19;
  bool slopes = false;
  bool sorted = false;
  double degeneracy_tol = -1.0;
  double fd_step = kDefaultFdStep;

  void validate() const {
    require(lambda_lo < lambda_hi, "scan: need lmin < lmax");
    require(steps >= 2, "scan: need at least 2 steps");
    require(fd_step > 0.0, "scan: fd step must be positive");
  }

  double grid(int i) const {
    return i == steps - 1 ? lambda_hi : lambda_lo + (lambda_hi - lambda_lo) * i / (steps - 1);
  }
};

// Eigenvalues (and optionally HFT slopes) on the grid. Columns follow tracked branches
// unless config.sorted is set.
inline CsvTable run_scan(const ScanConfig& config) {
  config.validate();
  const ParametricModel model = make_model(config.model, config.params);
  model.require_in_domain(config.lambda_lo, "scan");
  model.require_in_domain(config.lambda_hi, "scan");
  const std::size_t d = model.dim;

  CsvTable table;
  table.header.push_back("lambda");
  for (std::size_t k = 0; k < d; ++k) table.header.push_back("e" + std::to_string(k));
  if (config.slopes)
    for (std::size_t k = 0; k < d; ++k) table.header.push_back("slope" + std::to_string(k));

  std::optional<Spectrum> prev;
  for (int i = 0; i < config.steps; ++i) {
    const double lambda = config.grid(i);
    RotatedSpectrum rs = hft_spectrum(model, lambda, config.degeneracy_tol, config.fd_step);
    Vector values = rs.spectrum.eigenvalues;
    Vector slopes = rs.cluster_slopes;
    if (!config.sorted) {
      if (prev) {
        Tracked t;
        try {
          t = track(*prev, rs.spectrum);
        } catch (const TrackingError& e) {
          std::ostringstream msg;
          msg << "scan: branch tracking failed on the interval [" << prev->lambda << ", " << lambda
              << "]: " << e.what();
          throw TrackingError(msg.str());
        }
        values = t.spectrum.eigenvalues;
        slopes = t.reorder(slopes);
        prev = std::move(t.spectrum);
      } else {
        prev = rs.spectrum;
      }
    }
    Vector row{lambda};
    row.insert(row.end(), values.begin(), values.end());
    if (config.slopes) row.insert(row.end(), slopes.begin(), slopes.end());
    table.add_row(std::move(row));
  }
  return table;
}

struct FermiResult {
  CsvTable table;
  std::vector<CuspReport> cusps;
  std::string energy_svg;
  std::string slope_svg;
};

inline std::string cusp_comment(const CuspReport& c) {
  return "# cusp," + format_fixed(c.lambda0, 10) + "," + format_fixed(c.slope_left, 10) + "," +
         format_fixed(c.slope_right, 10);
}

// E0 and dE0/dλ on the grid. A grid point that sits on a cusp contributes two rows,
// first with the left slope then with the right slope. Every crossing found at the
// occupation frontier is appended as a `# cusp,λ0,left,right` comment.
inline FermiResult run_fermi(const ScanConfig& config, const FillingSpec& fill) {
  config.validate();
  const ParametricModel model = make_model(config.model, config.params);
  model.require_in_domain(config.lambda_lo, "fermi");
  model.require_in_domain(config.lambda_hi, "fermi");
  require_filling(model, fill);
  FermiOptions opt;
  opt.degeneracy_tol = config.degeneracy_tol;
  opt.fd_step = config.fd_step;

  FermiResult out;
  out.table.header = {"lambda", "E0", "dE0"};
  for (int i = 0; i < config.steps; ++i) {
    const double lambda = config.grid(i);
    const double e0 = ground_energy(model, lambda, fill);
    const GroundSlope s = ground_slope_hft(model, lambda, fill, opt);
    out.table.add_row({lambda, e0, s.left});
    if (s.cusp) out.table.add_row({lambda, e0, s.right});
  }

  for (double lambda0 : find_crossings(model, config.lambda_lo, config.lambda_hi, config.steps, fill, opt)) {
    out.cusps.push_back(cusp_report(model, lambda0, fill, opt));
    out.table.add_comment(cusp_comment(out.cusps.back()));
  }

  PlotSeries energy, slope;
  for (const auto& row : out.table.rows) {
    energy.x.push_back(row[0]);
    energy.y.push_back(row[1]);
    slope.x.push_back(row[0]);
    slope.y.push_back(row[2]);
  }
  const std::string suffix = " (N = " + std::to_string(fill.n_particles) + ", " + model.name + ")";
  PlotSpec ep{"Ground-state energy" + suffix, "lambda", "E0", {energy}, {}};
  for (const auto& c : out.cusps)
    ep.markers.push_back({c.lambda0, ground_energy(model, c.lambda0, fill)});
  PlotSpec sp{"Ground-state slope dE0/dlambda" + suffix, "lambda", "dE0/dlambda", {slope}, {}};
  for (const auto& c : out.cusps) {
    sp.markers.push_back({c.lambda0, c.slope_left});
    sp.markers.push_back({c.lambda0, c.slope_right});
  }
  out.energy_svg = render_svg(ep);
  out.slope_svg = render_svg(sp);
  return out;
}

struct CheckResult {
  HftReport report;
  std::string text;
  bool passed = false;
};

inline CheckResult run_check(const std::string& model_name, const ModelParams& params, double lambda,
                             const HftOptions& opt = {}, double threshold = 1e-6) {
  const ParametricModel model = make_model(model_name, params);
  CheckResult out;
  out.report = hft_report(model, lambda, opt);
  out.passed = out.report.worst_residual <= threshold;

  std::ostringstream t;
  t.precision(12);
  t << "model " << model.name << "  lambda " << lambda << "  reference " << out.report.reference_kind << '\n';
  t << "state,eigenvalue,lhs,reference,residual\n";
  for (std::size_t i = 0; i < out.report.states.size(); ++i) {
    const auto& r = out.report.states[i];
    t << i << ',' << format_number(r.eigenvalue) << ',' << format_number(r.lhs) << ','
      << format_number(r.reference) << ',' << format_number(r.residual) << '\n';
  }
  for (const auto& c : out.report.clusters) {
    if (c.size < 2) continue;
    t << "degenerate cluster states " << c.start << ".." << c.end() - 1 << " slopes";
    for (std::size_t i = c.start; i < c.end(); ++i) t << ' ' << format_number(out.report.states[i].lhs);
    t << '\n';
  }
  for (const auto& w : out.report.warnings) t << "warning: " << w << '\n';
  t << "worst residual " << format_number(out.report.worst_residual) << " threshold "
    << format_number(threshold) << (out.passed ? "  PASS" : "  FAIL") << '\n';
  out.text = t.str();
  return out;
}

// Irrep label per state in ascending-eigenvalue order; "MIXED" when a vector matches
// no row of the character table.
inline std::vector<std::string> run_classify(const ParametricModel& model, double lambda,
                                             double degeneracy_tol = -1.0, double char_tol = 1e-6) {
  require(model.symmetry.has_value() && model.characters.has_value(),
          "classify: model " + model.name + " has no symmetry representation");
  const RotatedSpectrum rs = hft_spectrum(model, lambda, degeneracy_tol);
  std::vector<std::string> labels;
  for (const auto& s : classify(rs.spectrum, *model.symmetry, *model.characters, char_tol))
    labels.push_back(s.irrep ? s.irrep->label : "MIXED");
  return labels;
}

}  // namespace hft
