#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "hft/error.hpp"
#include "hft/matrix.hpp"

namespace hft {

// Eigenpairs at one parameter value; column k of `eigenvectors` pairs with eigenvalues[k].
// eigh() returns ascending order. Branch-tracked spectra keep branch order instead.
struct Spectrum {
  double lambda = std::numeric_limits<double>::quiet_NaN();
  Vector eigenvalues;
  Matrix eigenvectors;

  std::size_t dim() const { return eigenvalues.size(); }
  Vector vector(std::size_t k) const { return eigenvectors.column(k); }
};

struct JacobiOptions {
  double relative_threshold = 1e-13;
  int max_sweeps = 64;
};

namespace detail {

// Cyclic Jacobi on a dense n×n symmetric block stored row-major in `a`.
// On return the diagonal of `a` holds eigenvalues; rows of `vt` hold eigenvectors.
inline void jacobi_sweeps(std::vector<double>& a, std::vector<double>& vt, std::size_t n,
                          const JacobiOptions& opt) {
  vt.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) vt[i * n + i] = 1.0;
  if (n < 2) return;

  double total = 0.0;
  for (double x : a) total += x * x;
  const double target = opt.relative_threshold * std::sqrt(total);
  if (total == 0.0) return;

  for (int sweep = 0; sweep <= opt.max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += 2.0 * a[p * n + q] * a[p * n + q];
    if (std::sqrt(off) <= target) return;
    if (sweep == opt.max_sweeps) break;

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (apq == 0.0) continue;
        const double app = a[p * n + p];
        const double aqq = a[q * n + q];
        const double theta = (aqq - app) / (2.0 * apq);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 0.5 / theta;
        } else {
          t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        double* rp = &a[p * n];
        double* rq = &a[q * n];
        for (std::size_t k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const double akp = rp[k];
          const double akq = rq[k];
          const double np = c * akp - s * akq;
          const double nq = s * akp + c * akq;
          rp[k] = np;
          rq[k] = nq;
          a[k * n + p] = np;
          a[k * n + q] = nq;
        }
        rp[p] = app - t * apq;
        rq[q] = aqq + t * apq;
        rp[q] = 0.0;
        rq[p] = 0.0;

        double* vp = &vt[p * n];
        double* vq = &vt[q * n];
        for (std::size_t k = 0; k < n; ++k) {
          const double x = vp[k];
          const double y = vq[k];
          vp[k] = c * x - s * y;
          vq[k] = s * x + c * y;
        }
      }
    }
  }
  throw NumericError("eigh: Jacobi iteration did not converge within " +
                     std::to_string(opt.max_sweeps) + " sweeps");
}

// Connected components of the nonzero pattern, each sorted ascending, ordered by first index.
inline std::vector<std::vector<std::size_t>> coupling_components(const Matrix& m) {
  const std::size_t n = m.rows();
  std::vector<int> label(n, -1);
  std::vector<std::vector<std::size_t>> comps;
  for (std::size_t s = 0; s < n; ++s) {
    if (label[s] >= 0) continue;
    const int id = static_cast<int>(comps.size());
    comps.emplace_back();
    std::vector<std::size_t> stack{s};
    label[s] = id;
    while (!stack.empty()) {
      const std::size_t i = stack.back();
      stack.pop_back();
      comps.back().push_back(i);
      for (std::size_t j = 0; j < n; ++j) {
        if (label[j] < 0 && m(i, j) != 0.0) {
          label[j] = id;
          stack.push_back(j);
        }
      }
    }
    std::sort(comps.back().begin(), comps.back().end());
  }
  return comps;
}

}  // namespace detail

// Fixes the sign of an eigenvector: the largest-magnitude component is made positive.
// Components within a relative 1e-12 of the maximum count as tied; the lowest index wins.
inline void canonicalize_sign(std::span<double> v) {
  const double biggest = max_abs(v);
  if (biggest == 0.0) return;
  for (double x : v) {
    if (std::abs(x) >= biggest * (1.0 - 1e-12)) {
      if (x < 0.0)
        for (double& y : v) y = -y;
      return;
    }
  }
}

// Dense symmetric eigendecomposition. Decoupled blocks of the sparsity pattern are
// diagonalized independently; the result is sorted ascending with sign-fixed vectors.
inline Spectrum eigh(const SymmetricMatrix& m, const JacobiOptions& opt = {}) {
  const std::size_t n = m.dim();
  const auto comps = detail::coupling_components(m.matrix());

  struct Pair {
    double value;
    Vector vec;
  };
  std::vector<Pair> pairs;
  pairs.reserve(n);

  std::vector<double> a, vt;
  for (const auto& comp : comps) {
    const std::size_t b = comp.size();
    a.assign(b * b, 0.0);
    for (std::size_t i = 0; i < b; ++i)
      for (std::size_t j = 0; j < b; ++j) a[i * b + j] = m(comp[i], comp[j]);
    detail::jacobi_sweeps(a, vt, b, opt);
    for (std::size_t k = 0; k < b; ++k) {
      Vector v(n, 0.0);
      for (std::size_t i = 0; i < b; ++i) v[comp[i]] = vt[k * b + i];
      pairs.push_back({a[k * b + k], std::move(v)});
    }
  }

  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const Pair& x, const Pair& y) { return x.value < y.value; });

  Spectrum out;
  out.eigenvalues.resize(n);
  out.eigenvectors = Matrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    canonicalize_sign(pairs[k].vec);
    out.eigenvalues[k] = pairs[k].value;
    out.eigenvectors.set_column(k, pairs[k].vec);
  }
  return out;
}

// |VᵀV − I|_max
inline double orthonormality_error(const Matrix& v) {
  const Matrix g = v.transposed() * v;
  return max_abs_diff(g, Matrix::identity(g.rows()));
}

// max_k |H·v_k − ε_k·v_k|_∞
inline double eigen_residual(const SymmetricMatrix& h, const Spectrum& s) {
  double worst = 0.0;
  for (std::size_t k = 0; k < s.dim(); ++k) {
    const Vector v = s.vector(k);
    const Vector hv = h.matrix() * v;
    for (std::size_t i = 0; i < v.size(); ++i)
      worst = std::max(worst, std::abs(hv[i] - s.eigenvalues[k] * v[i]));
  }
  return worst;
}

// |V·diag(ε)·Vᵀ − H|_max
inline double reconstruction_error(const SymmetricMatrix& h, const Spectrum& s) {
  const Matrix& v = s.eigenvectors;
  const Matrix r = v * Matrix::diagonal(s.eigenvalues) * v.transposed();
  return max_abs_diff(r, h.matrix());
}

}  // namespace hft
