#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <string>

#include "hft/error.hpp"
#include "hft/finite_difference.hpp"
#include "hft/matrix.hpp"
#include "hft/symmetry.hpp"

namespace hft {

// Open interval (lo, hi).
struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  bool contains(double x) const { return x > lo && x < hi; }
};

// Closed-form eigenvalues and slopes. Both callables return values in the same
// (branch) order; consumers sort by eigenvalue. `exact_at` says whether the oracle
// describes this finite matrix exactly at λ (a truncated basis may only match it at
// special points).
struct AnalyticOracle {
  std::function<Vector(double)> eigenvalues;
  std::function<Vector(double)> slopes;
  std::function<bool(double)> exact_at = [](double) { return true; };
};

// H(λ) together with dH/dλ. When `derivative` is empty the derivative falls back to
// a central difference of `hamiltonian`.
struct ParametricModel {
  std::string name;
  std::size_t dim = 0;
  std::function<SymmetricMatrix(double)> hamiltonian;
  std::function<SymmetricMatrix(double)> derivative;
  std::optional<AnalyticOracle> analytic;
  std::optional<GroupRep> symmetry;
  std::optional<CharacterTable> characters;
  Interval domain;

  void require_in_domain(double lambda, const char* what) const {
    if (!domain.contains(lambda)) {
      std::ostringstream msg;
      msg << what << ": lambda = " << lambda << " is outside the domain (" << domain.lo << ", "
          << domain.hi << ") of model " << name;
      throw PreconditionError(msg.str());
    }
  }

  SymmetricMatrix hamiltonian_at(double lambda) const {
    require_in_domain(lambda, "hamiltonian_at");
    SymmetricMatrix h = hamiltonian(lambda);
    require(h.dim() == dim, "hamiltonian_at: model " + name + " produced a matrix of wrong size");
    return h;
  }

  SymmetricMatrix derivative_at(double lambda, double h = kDefaultFdStep) const;
};

// Entrywise (H(λ0+h) − H(λ0−h)) / 2h.
inline SymmetricMatrix fd_matrix_derivative(const ParametricModel& model, double lambda0,
                                            double h = kDefaultFdStep) {
  require(h > 0.0, "fd_matrix_derivative: step must be positive");
  model.require_in_domain(lambda0 - h, "fd_matrix_derivative");
  model.require_in_domain(lambda0 + h, "fd_matrix_derivative");
  Matrix d = model.hamiltonian_at(lambda0 + h).matrix() - model.hamiltonian_at(lambda0 - h).matrix();
  d *= 1.0 / (2.0 * h);
  return SymmetricMatrix(std::move(d));
}

inline SymmetricMatrix ParametricModel::derivative_at(double lambda, double h) const {
  require_in_domain(lambda, "derivative_at");
  if (!derivative) return fd_matrix_derivative(*this, lambda, h);
  SymmetricMatrix d = derivative(lambda);
  require(d.dim() == dim, "derivative_at: model " + name + " produced a matrix of wrong size");
  return d;
}

}  // namespace hft
