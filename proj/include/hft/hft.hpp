#pragma once

// Degenerate-subspace treatment of the Hellmann–Feynman theorem: clustering of
// near-equal eigenvalues, rotation of each cluster onto the eigenvectors of dH/dλ,
// and numerical checks of the diagonal and off-diagonal identities.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hft/eigen.hpp"
#include "hft/error.hpp"
#include "hft/finite_difference.hpp"
#include "hft/matrix.hpp"
#include "hft/model.hpp"
#include "hft/tracking.hpp"

namespace hft {

struct DegenerateCluster {
  std::size_t start = 0;
  std::size_t size = 1;
  double tol_used = 0.0;

  std::size_t end() const { return start + size; }
  bool contains(std::size_t i) const { return i >= start && i < end(); }
  bool operator==(const DegenerateCluster&) const = default;
};

// 1e-8·(1 + spectral radius)
inline double default_degeneracy_tol(std::span<const double> eigenvalues) {
  return 1e-8 * (1.0 + max_abs(eigenvalues));
}

// Maximal runs of an ascending sequence whose consecutive gaps are ≤ tol.
inline std::vector<DegenerateCluster> cluster_degeneracies(std::span<const double> eigenvalues,
                                                           double tol) {
  require(tol >= 0.0, "cluster_degeneracies: tolerance must be non-negative");
  for (std::size_t i = 1; i < eigenvalues.size(); ++i)
    require(eigenvalues[i] >= eigenvalues[i - 1], "cluster_degeneracies: input is not ascending");
  std::vector<DegenerateCluster> out;
  for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
    if (!out.empty() && eigenvalues[i] - eigenvalues[i - 1] <= tol)
      ++out.back().size;
    else
      out.push_back({i, 1, tol});
  }
  return out;
}

inline double expectation(const Matrix& hp, std::span<const double> v) {
  require(std::abs(norm(v) - 1.0) <= 1e-10, "expectation: vector is not normalized");
  return bilinear(v, hp, v);
}

// Eigenbasis of H whose degenerate clusters diagonalize dH/dλ.
// spectrum.eigenvectors == original eigenvectors · rotation.
struct RotatedSpectrum {
  Spectrum spectrum;
  std::vector<DegenerateCluster> clusters;
  Vector cluster_slopes;
  Matrix rotation;
  std::vector<std::string> warnings;

  const DegenerateCluster& cluster_of(std::size_t state) const {
    for (const auto& c : clusters)
      if (c.contains(state)) return c;
    throw PreconditionError("cluster_of: state index out of range");
  }
};

// When `h` is supplied, eigenvalues inside clusters are replaced by the Rayleigh
// quotients of the rotated vectors.
inline RotatedSpectrum hft_consistent_basis(const Spectrum& spectrum, const Matrix& hp, double tol,
                                            const Matrix* h = nullptr) {
  const std::size_t d = spectrum.dim();
  require(hp.rows() == d && hp.cols() == d, "hft_consistent_basis: dimension mismatch");
  RotatedSpectrum out;
  out.spectrum = spectrum;
  out.clusters = cluster_degeneracies(spectrum.eigenvalues, tol);
  out.cluster_slopes.assign(d, 0.0);
  out.rotation = Matrix::identity(d);

  for (std::size_t i = 1; i < d; ++i) {
    const double gap = spectrum.eigenvalues[i] - spectrum.eigenvalues[i - 1];
    if (gap > tol && gap <= 10.0 * tol) {
      std::ostringstream msg;
      msg << "near-degenerate gap " << gap << " between states " << i - 1 << " and " << i
          << " at lambda = " << spectrum.lambda << " (tolerance " << tol << ")";
      out.warnings.push_back(msg.str());
    }
  }

  for (const auto& c : out.clusters) {
    if (c.size == 1) {
      out.cluster_slopes[c.start] = bilinear(spectrum.vector(c.start), hp, spectrum.vector(c.start));
      continue;
    }
    const std::size_t g = c.size;
    std::vector<Vector> cols;
    for (std::size_t a = 0; a < g; ++a) cols.push_back(spectrum.vector(c.start + a));
    Matrix block(g, g);
    for (std::size_t a = 0; a < g; ++a)
      for (std::size_t b = a; b < g; ++b) block(a, b) = block(b, a) = bilinear(cols[a], hp, cols[b]);
    const Spectrum inner = eigh(SymmetricMatrix(block));
    for (std::size_t a = 0; a < g; ++a) {
      out.cluster_slopes[c.start + a] = inner.eigenvalues[a];
      Vector rotated(d, 0.0);
      for (std::size_t b = 0; b < g; ++b) {
        const double w = inner.eigenvectors(b, a);
        out.rotation(c.start + b, c.start + a) = w;
        for (std::size_t i = 0; i < d; ++i) rotated[i] += w * cols[b][i];
      }
      out.spectrum.eigenvectors.set_column(c.start + a, rotated);
    }
  }
  if (h) {
    // Inside a cluster the sorted eigenvalues no longer pair with the rotated vectors;
    // each rotated vector carries its own Rayleigh quotient.
    for (const auto& c : out.clusters)
      for (std::size_t i = c.start; c.size > 1 && i < c.end(); ++i) {
        const Vector v = out.spectrum.vector(i);
        out.spectrum.eigenvalues[i] = bilinear(v, *h, v);
      }
  }
  return out;
}

// Σ_j coeffs_j² · slope_j: the diagonal dH/dλ element of an arbitrary combination of
// cluster states whose own slopes are `cluster_slopes`.
inline double mixed_slope(std::span<const double> cluster_slopes, std::span<const double> coeffs) {
  require(cluster_slopes.size() == coeffs.size(), "mixed_slope: length mismatch");
  require(std::abs(dot(coeffs, coeffs) - 1.0) <= 1e-10, "mixed_slope: coefficients not normalized");
  double s = 0.0;
  for (std::size_t j = 0; j < coeffs.size(); ++j) s += coeffs[j] * coeffs[j] * cluster_slopes[j];
  return s;
}

// eigh(H(λ)) followed by the cluster rotation with dH/dλ. A negative tol selects
// default_degeneracy_tol.
inline RotatedSpectrum hft_spectrum(const ParametricModel& model, double lambda, double tol = -1.0,
                                    double fd_step = kDefaultFdStep) {
  const SymmetricMatrix h = model.hamiltonian_at(lambda);
  Spectrum s = eigh(h);
  s.lambda = lambda;
  if (tol < 0.0) tol = default_degeneracy_tol(s.eigenvalues);
  return hft_consistent_basis(s, model.derivative_at(lambda, fd_step).matrix(), tol, &h.matrix());
}

namespace detail {

// Spectra at λ±h and λ±h/2 tracked against `base`, ordered (+h, −h, +h/2, −h/2).
inline std::vector<Spectrum> tracked_stencil(const ParametricModel& model, const Spectrum& base,
                                             double h, double tol) {
  const double lambda = base.lambda;
  model.require_in_domain(lambda - h, "finite-difference stencil");
  model.require_in_domain(lambda + h, "finite-difference stencil");
  std::vector<Spectrum> out;
  for (double offset : {h, -h, 0.5 * h, -0.5 * h}) {
    const RotatedSpectrum r = hft_spectrum(model, lambda + offset, tol, h);
    out.push_back(track(base, r.spectrum).spectrum);
  }
  return out;
}

inline double richardson(double fp, double fm, double fp2, double fm2, double h) {
  const double d1 = (fp - fm) / (2.0 * h);
  const double d2 = (fp2 - fm2) / h;
  return (4.0 * d2 - d1) / 3.0;
}

}  // namespace detail

// Branch slopes dε/dλ by Richardson-extrapolated central differences of eigenvalue
// branches tracked from `base` (which must carry its lambda).
inline Vector tracked_fd_slopes(const ParametricModel& model, const Spectrum& base, double h,
                                double tol = -1.0) {
  const auto st = detail::tracked_stencil(model, base, h, tol);
  Vector out(base.dim());
  for (std::size_t k = 0; k < base.dim(); ++k)
    out[k] = detail::richardson(st[0].eigenvalues[k], st[1].eigenvalues[k], st[2].eigenvalues[k],
                                st[3].eigenvalues[k], h);
  return out;
}

struct HftRecord {
  double eigenvalue = 0.0;
  double lhs = 0.0;        // ⟨ψ|dH/dλ|ψ⟩ in the rotated basis
  double reference = 0.0;  // analytic or finite-difference slope
  double residual = 0.0;
};

struct HftReport {
  double lambda = 0.0;
  std::string reference_kind;  // "analytic" or "finite-difference"
  std::vector<HftRecord> states;
  std::vector<DegenerateCluster> clusters;
  std::vector<std::string> warnings;
  double worst_residual = 0.0;
};

struct HftOptions {
  double degeneracy_tol = -1.0;  // negative: default_degeneracy_tol
  double fd_step = kDefaultFdStep;
};

// Diagonal identity dε_n/dλ = ⟨ψ_n|dH/dλ|ψ_n⟩ at one λ. Inside a degenerate cluster the
// rotated slopes are compared with the reference slopes as multisets, which at a
// crossing are the one-sided limits of the branches meeting there.
inline HftReport hft_report(const ParametricModel& model, double lambda, const HftOptions& opt = {}) {
  const RotatedSpectrum rs = hft_spectrum(model, lambda, opt.degeneracy_tol, opt.fd_step);
  const std::size_t d = rs.spectrum.dim();

  Vector reference(d);
  HftReport report;
  report.lambda = lambda;
  report.clusters = rs.clusters;
  report.warnings = rs.warnings;

  if (model.analytic && model.analytic->exact_at(lambda)) {
    report.reference_kind = "analytic";
    const Vector values = model.analytic->eigenvalues(lambda);
    const Vector slopes = model.analytic->slopes(lambda);
    require(values.size() == d && slopes.size() == d, "hft_report: analytic oracle has wrong size");
    std::vector<std::size_t> order(d);
    for (std::size_t i = 0; i < d; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    for (std::size_t i = 0; i < d; ++i) reference[i] = slopes[order[i]];
  } else {
    report.reference_kind = "finite-difference";
    reference = tracked_fd_slopes(model, rs.spectrum, opt.fd_step, rs.clusters.front().tol_used);
  }

  // cluster_slopes are ascending within each cluster, so sorting the reference
  // slice pairs the two multisets.
  for (const auto& c : rs.clusters)
    std::sort(reference.begin() + static_cast<std::ptrdiff_t>(c.start),
              reference.begin() + static_cast<std::ptrdiff_t>(c.end()));

  const Vector& lhs = rs.cluster_slopes;
  for (std::size_t i = 0; i < d; ++i) {
    HftRecord r{rs.spectrum.eigenvalues[i], lhs[i], reference[i], std::abs(lhs[i] - reference[i])};
    report.worst_residual = std::max(report.worst_residual, r.residual);
    report.states.push_back(r);
  }
  return report;
}

// Off-diagonal identity ⟨ψ_m|H′|ψ_n⟩ = (E_n − E_m)·⟨ψ_m|∂ψ_n/∂λ⟩ with ∂ψ_n/∂λ from tracked
// central differences. For a degenerate pair the right side vanishes and the
// residual is |⟨ψ_m|H′|ψ_n⟩| in the rotated basis.
inline double offdiag_identity_residual(const ParametricModel& model, double lambda, std::size_t m,
                                        std::size_t n, double h = kDefaultFdStep,
                                        double tol = -1.0) {
  require(m != n, "offdiag_identity_residual: m and n must differ");
  require(m < model.dim && n < model.dim, "offdiag_identity_residual: state index out of range");
  const RotatedSpectrum rs = hft_spectrum(model, lambda, tol, h);
  const Matrix hp = model.derivative_at(lambda, h).matrix();
  const Vector psi_m = rs.spectrum.vector(m);
  const Vector psi_n = rs.spectrum.vector(n);
  const double element = bilinear(psi_m, hp, psi_n);
  if (rs.cluster_of(m).contains(n)) return std::abs(element);

  std::vector<Spectrum> st;
  try {
    st = detail::tracked_stencil(model, rs.spectrum, h, rs.clusters.front().tol_used);
  } catch (const TrackingError& e) {
    throw TrackingError(std::string(e.what()) +
                        "; eigenvector derivatives near a crossing need the dH/dλ-rotated basis "
                        "(hft_consistent_basis) with a resolving degeneracy tolerance");
  }
  // Near a crossing the stencil points sit close to a degeneracy, and rounding mixes
  // irreps there at a level that 1/h amplifies. Projecting ψ_n(λ±h) back onto the irrep
  // of ψ_n(λ) removes that noise when the model carries a symmetry.
  if (model.symmetry && model.characters) {
    const StateSymmetry sym = classify_vector(psi_n, *model.symmetry, *model.characters);
    if (sym.irrep)
      for (Spectrum& s : st) {
        Vector p = project(s.vector(n), *sym.irrep, *model.symmetry, *model.characters);
        const double len = norm(p);
        for (double& x : p) x /= len;
        s.eigenvectors.set_column(n, p);
      }
  }
  double derivative_overlap = 0.0;
  for (std::size_t i = 0; i < model.dim; ++i) {
    const double dpsi = detail::richardson(st[0].eigenvectors(i, n), st[1].eigenvectors(i, n),
                                           st[2].eigenvectors(i, n), st[3].eigenvectors(i, n), h);
    derivative_overlap += psi_m[i] * dpsi;
  }
  const double gap = rs.spectrum.eigenvalues[n] - rs.spectrum.eigenvalues[m];
  return std::abs(element - gap * derivative_overlap);
}

// min over states and both sides of |⟨ψ_n(λ0 ± δ)|ψ_n^rotated(λ0)⟩| after matching.
inline double continuity_overlap(const ParametricModel& model, double lambda0, double delta,
                                 double tol = -1.0) {
  require(delta > 0.0, "continuity_overlap: delta must be positive");
  model.require_in_domain(lambda0 - delta, "continuity_overlap");
  model.require_in_domain(lambda0 + delta, "continuity_overlap");
  const RotatedSpectrum base = hft_spectrum(model, lambda0, tol);
  double worst = 1.0;
  for (double side : {-delta, delta}) {
    const RotatedSpectrum s = hft_spectrum(model, lambda0 + side, tol);
    const Tracked t = track(base.spectrum, s.spectrum);
    for (std::size_t k = 0; k < base.spectrum.dim(); ++k)
      worst = std::min(worst, std::abs(dot(base.spectrum.vector(k), t.spectrum.vector(k))));
  }
  return worst;
}

}  // namespace hft
