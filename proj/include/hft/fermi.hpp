#pragma once

// Ground state of N non-interacting spinless fermions filling the lowest
// single-particle levels of H(λ), and its slope through level crossings.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <vector>

#include "hft/eigen.hpp"
#include "hft/error.hpp"
#include "hft/hft.hpp"
#include "hft/model.hpp"
#include "hft/tracking.hpp"

namespace hft {

struct FillingSpec {
  int n_particles = 1;
};

inline void require_filling(const ParametricModel& model, const FillingSpec& fill) {
  require(fill.n_particles >= 1 && static_cast<std::size_t>(fill.n_particles) <= model.dim,
          "particle number must lie in [1, " + std::to_string(model.dim) + "]");
}

// Sum of the n_particles lowest eigenvalues.
inline double ground_energy(const ParametricModel& model, double lambda, const FillingSpec& fill) {
  require_filling(model, fill);
  const Spectrum s = eigh(model.hamiltonian_at(lambda));
  double e = 0.0;
  for (int i = 0; i < fill.n_particles; ++i) e += s.eigenvalues[static_cast<std::size_t>(i)];
  return e;
}

struct CuspReport {
  double lambda0 = 0.0;
  double slope_left = 0.0;
  double slope_right = 0.0;
  Vector cluster_slopes;                      // dH/dλ eigenvalues of the frontier cluster
  std::vector<std::size_t> frontier_indices;  // sorted-level indices of that cluster
  double occupied_below = 0.0;                // slope sum of levels strictly below it
};

struct FermiOptions {
  double degeneracy_tol = -1.0;  // negative: default_degeneracy_tol
  double fd_step = kDefaultFdStep;
  double side_step = 1e-4;  // one-sided difference used to attribute left/right slopes
};

namespace detail {

// The degenerate cluster that straddles the occupation frontier, if any.
inline std::optional<DegenerateCluster> frontier_cluster(const RotatedSpectrum& rs, int n_particles) {
  const auto np = static_cast<std::size_t>(n_particles);
  if (np >= rs.spectrum.dim()) return std::nullopt;
  const DegenerateCluster& c = rs.cluster_of(np - 1);
  if (c.contains(np)) return c;
  return std::nullopt;
}

inline CuspReport build_cusp(const ParametricModel& model, const RotatedSpectrum& rs,
                             const DegenerateCluster& c, const FillingSpec& fill,
                             const FermiOptions& opt) {
  const double lambda0 = rs.spectrum.lambda;
  CuspReport r;
  r.lambda0 = lambda0;
  for (std::size_t i = c.start; i < c.end(); ++i) {
    r.frontier_indices.push_back(i);
    r.cluster_slopes.push_back(rs.cluster_slopes[i]);
  }
  for (std::size_t i = 0; i < c.start; ++i) r.occupied_below += rs.cluster_slopes[i];

  // k of the cluster's states are occupied. Below λ0 the branches with the largest
  // slopes lie lowest, above λ0 those with the smallest.
  const std::size_t k = static_cast<std::size_t>(fill.n_particles) - c.start;
  Vector sorted = r.cluster_slopes;
  std::sort(sorted.begin(), sorted.end());
  const double low = std::accumulate(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(k), 0.0);
  const double high = std::accumulate(sorted.end() - static_cast<std::ptrdiff_t>(k), sorted.end(), 0.0);
  const double cand_a = r.occupied_below + high;
  const double cand_b = r.occupied_below + low;

  const double d = opt.side_step;
  const double e0 = ground_energy(model, lambda0, fill);
  const double left_fd = (e0 - ground_energy(model, lambda0 - d, fill)) / d;
  const double right_fd = (ground_energy(model, lambda0 + d, fill) - e0) / d;
  const double keep = std::abs(left_fd - cand_a) + std::abs(right_fd - cand_b);
  const double swap = std::abs(left_fd - cand_b) + std::abs(right_fd - cand_a);
  r.slope_left = keep <= swap ? cand_a : cand_b;
  r.slope_right = keep <= swap ? cand_b : cand_a;
  return r;
}

}  // namespace detail

// dE0/dλ from the dH/dλ-rotated basis. Away from a frontier degeneracy left == right.
struct GroundSlope {
  double left = 0.0;
  double right = 0.0;
  bool cusp = false;
};

inline GroundSlope ground_slope_hft(const ParametricModel& model, double lambda, const FillingSpec& fill,
                                    const FermiOptions& opt = {}) {
  require_filling(model, fill);
  const RotatedSpectrum rs = hft_spectrum(model, lambda, opt.degeneracy_tol, opt.fd_step);
  if (const auto c = detail::frontier_cluster(rs, fill.n_particles)) {
    const CuspReport r = detail::build_cusp(model, rs, *c, fill, opt);
    return {r.slope_left, r.slope_right, true};
  }
  double s = 0.0;
  for (int i = 0; i < fill.n_particles; ++i) s += rs.cluster_slopes[static_cast<std::size_t>(i)];
  return {s, s, false};
}

inline CuspReport cusp_report(const ParametricModel& model, double lambda0, const FillingSpec& fill,
                              const FermiOptions& opt = {}) {
  require_filling(model, fill);
  const RotatedSpectrum rs = hft_spectrum(model, lambda0, opt.degeneracy_tol, opt.fd_step);
  const auto c = detail::frontier_cluster(rs, fill.n_particles);
  if (!c) {
    std::ostringstream msg;
    msg << "cusp_report: no degeneracy at the occupation frontier (N = " << fill.n_particles
        << ") at lambda = " << lambda0;
    throw PreconditionError(msg.str());
  }
  return detail::build_cusp(model, rs, *c, fill, opt);
}

namespace detail {

// Branch ids of the n lowest levels of a branch-ordered spectrum.
inline std::set<std::size_t> occupied_branches(const Spectrum& s, int n) {
  std::vector<std::size_t> order(s.dim());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return s.eigenvalues[a] < s.eigenvalues[b]; });
  return {order.begin(), order.begin() + n};
}

inline Spectrum smooth_spectrum(const ParametricModel& model, double lambda, const FermiOptions& opt) {
  return hft_spectrum(model, lambda, opt.degeneracy_tol, opt.fd_step).spectrum;
}

}  // namespace detail

// Parameter values in [lo, hi] where a tracked branch leaves the occupied set,
// bisected to an interval of 1e-10.
inline std::vector<double> find_crossings(const ParametricModel& model, double lo, double hi, int steps,
                                          const FillingSpec& fill, const FermiOptions& opt = {}) {
  require(lo < hi, "find_crossings: need lo < hi");
  require(steps >= 2, "find_crossings: need at least 2 grid points");
  require_filling(model, fill);
  const int np = fill.n_particles;
  std::vector<double> out;

  Spectrum prev = detail::smooth_spectrum(model, lo, opt);
  std::set<std::size_t> occ_prev = detail::occupied_branches(prev, np);
  for (int i = 1; i < steps; ++i) {
    const double lambda = i == steps - 1 ? hi : lo + (hi - lo) * i / (steps - 1);
    Spectrum cur = track(prev, detail::smooth_spectrum(model, lambda, opt)).spectrum;
    const std::set<std::size_t> occ_cur = detail::occupied_branches(cur, np);
    if (occ_cur != occ_prev) {
      std::size_t leaving = 0, entering = 0;
      for (std::size_t b : occ_prev)
        if (!occ_cur.count(b)) {
          leaving = b;
          break;
        }
      for (std::size_t b : occ_cur)
        if (!occ_prev.count(b)) {
          entering = b;
          break;
        }
      Spectrum left = prev;
      double a = prev.lambda, b = cur.lambda;
      while (b - a > 1e-10) {
        const double mid = 0.5 * (a + b);
        Spectrum m = track(left, detail::smooth_spectrum(model, mid, opt)).spectrum;
        if (m.eigenvalues[entering] - m.eigenvalues[leaving] > 0.0) {
          left = std::move(m);
          a = mid;
        } else {
          b = mid;
        }
      }
      out.push_back(0.5 * (a + b));
    }
    prev = std::move(cur);
    occ_prev = occ_cur;
  }
  return out;
}

}  // namespace hft
