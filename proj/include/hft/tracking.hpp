#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <tuple>
#include <vector>

#include "hft/eigen.hpp"
#include "hft/error.hpp"

namespace hft {

inline constexpr double kTrackingAmbiguity = 1e-6;

// Result of matching `next` onto the columns of `prev`:
// spectrum column k = signs[k] · next column permutation[k].
struct Tracked {
  Spectrum spectrum;
  std::vector<std::size_t> permutation;
  std::vector<int> signs;

  template <class T>
  std::vector<T> reorder(const std::vector<T>& values) const {
    std::vector<T> out;
    out.reserve(permutation.size());
    for (std::size_t k : permutation) out.push_back(values[k]);
    return out;
  }
};

// Greedy maximum-overlap matching of eigenvectors between neighbouring parameter values.
inline Tracked track(const Spectrum& prev, const Spectrum& next) {
  const std::size_t d = prev.dim();
  require(next.dim() == d, "track: spectra have different dimensions");
  const Matrix overlap = prev.eigenvectors.transposed() * next.eigenvectors;

  for (std::size_t k = 0; k < d; ++k) {
    double best = 0.0, second = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      const double o = std::abs(overlap(k, j));
      if (o > best) {
        second = best;
        best = o;
      } else if (o > second) {
        second = o;
      }
    }
    if (d > 1 && best - second <= kTrackingAmbiguity) {
      std::ostringstream msg;
      msg << "track: ambiguous match for state " << k << " between lambda = " << prev.lambda
          << " and lambda = " << next.lambda << " (overlaps " << best << " and " << second
          << "); use a finer lambda step";
      throw TrackingError(msg.str());
    }
  }

  std::vector<std::tuple<double, std::size_t, std::size_t>> candidates;
  candidates.reserve(d * d);
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t j = 0; j < d; ++j) candidates.emplace_back(std::abs(overlap(k, j)), k, j);
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const auto& a, const auto& b) { return std::get<0>(a) > std::get<0>(b); });

  std::vector<bool> source_done(d, false), target_done(d, false);
  Tracked out;
  out.permutation.assign(d, 0);
  out.signs.assign(d, 1);
  std::size_t assigned = 0;
  for (const auto& [o, k, j] : candidates) {
    if (source_done[k] || target_done[j]) continue;
    source_done[k] = target_done[j] = true;
    out.permutation[k] = j;
    out.signs[k] = overlap(k, j) < 0.0 ? -1 : 1;
    if (++assigned == d) break;
  }

  out.spectrum.lambda = next.lambda;
  out.spectrum.eigenvalues.resize(d);
  out.spectrum.eigenvectors = Matrix(d, d);
  for (std::size_t k = 0; k < d; ++k) {
    const std::size_t j = out.permutation[k];
    out.spectrum.eigenvalues[k] = next.eigenvalues[j];
    for (std::size_t i = 0; i < d; ++i)
      out.spectrum.eigenvectors(i, k) = out.signs[k] * next.eigenvectors(i, j);
  }
  return out;
}

}  // namespace hft
