#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "hft/error.hpp"
#include "hft/matrix.hpp"
#include "hft/model.hpp"
#include "hft/symmetry.hpp"

namespace hft {

// ---------------------------------------------------------------------------
// Six-site ring: two three-site chains joined by λ bonds at (1,6) and (3,4).

inline SymmetricMatrix six_site_hamiltonian(double lambda) {
  return SymmetricMatrix{{0, 1, 0, 0, 0, lambda},      {1, 0, 1, 0, 0, 0},
                         {0, 1, 0, lambda, 0, 0},      {0, 0, lambda, 0, 1, 0},
                         {0, 0, 0, 1, 0, 1},           {lambda, 0, 0, 0, 1, 0}};
}

inline SymmetricMatrix six_site_derivative() {
  return SymmetricMatrix{{0, 0, 0, 0, 0, 1}, {0, 0, 0, 0, 0, 0}, {0, 0, 0, 1, 0, 0},
                         {0, 0, 1, 0, 0, 0}, {0, 0, 0, 0, 0, 0}, {1, 0, 0, 0, 0, 0}};
}

// Closed-form branches ε1…ε6 with s = √(λ²+8), in their conventional (unsorted) order.
inline Vector six_site_branch_energies(double lambda) {
  require(lambda > 0.0, "six-site model: lambda must be positive");
  const double s = std::sqrt(lambda * lambda + 8.0);
  return {-(lambda + s) / 2, (lambda - s) / 2, -lambda, lambda, (s - lambda) / 2, (lambda + s) / 2};
}

inline Vector six_site_branch_slopes(double lambda) {
  require(lambda > 0.0, "six-site model: lambda must be positive");
  const double r = lambda / std::sqrt(lambda * lambda + 8.0);
  return {-(1 + r) / 2, (1 - r) / 2, -1.0, 1.0, (r - 1) / 2, (1 + r) / 2};
}

inline Vector six_site_analytic_eigenvalues(double lambda) {
  Vector e = six_site_branch_energies(lambda);
  std::sort(e.begin(), e.end());
  return e;
}

namespace detail {
inline Matrix permutation_matrix(const std::vector<std::size_t>& image) {
  // column j carries basis vector j to basis vector image[j]
  Matrix p(image.size(), image.size());
  for (std::size_t j = 0; j < image.size(); ++j) p(image[j], j) = 1.0;
  return p;
}
}  // namespace detail

// C2v on the six sites: C2 maps site i ↔ i+3, σv1 reverses the ring order,
// σv2 reflects each chain end-for-end (1↔3, 4↔6).
inline GroupRep six_site_c2v() {
  return {"C2v",
          {{"E", Matrix::identity(6)},
           {"C2", detail::permutation_matrix({3, 4, 5, 0, 1, 2})},
           {"sv1", detail::permutation_matrix({5, 4, 3, 2, 1, 0})},
           {"sv2", detail::permutation_matrix({2, 1, 0, 5, 4, 3})}}};
}

inline ParametricModel six_site_model() {
  ParametricModel m;
  m.name = "six-site";
  m.dim = 6;
  m.hamiltonian = six_site_hamiltonian;
  m.derivative = [](double) { return six_site_derivative(); };
  m.analytic = AnalyticOracle{six_site_branch_energies, six_site_branch_slopes};
  m.symmetry = six_site_c2v();
  m.characters = c2v_character_table();
  m.domain = {0.0, std::numeric_limits<double>::infinity()};
  return m;
}

// ---------------------------------------------------------------------------
// Two coupled oscillators H = ½(p_x² + p_y²) + ½ω²(x² + y²) + λ·x·y in the product
// basis |m,n⟩ truncated to shells m+n ≤ n_max. Units ħ = mass = 1.

struct OscillatorBasis {
  int n_max = 0;

  std::size_t size() const {
    const auto n = static_cast<std::size_t>(n_max);
    return (n + 1) * (n + 2) / 2;
  }
  // Shells ascending, ascending m within a shell.
  std::size_t index(int m, int n) const {
    const auto shell = static_cast<std::size_t>(m + n);
    return shell * (shell + 1) / 2 + static_cast<std::size_t>(m);
  }
  std::vector<std::pair<int, int>> states() const {
    std::vector<std::pair<int, int>> out;
    for (int shell = 0; shell <= n_max; ++shell)
      for (int m = 0; m <= shell; ++m) out.emplace_back(m, shell - m);
    return out;
  }
};

// ⟨a|x|b⟩ for a one-dimensional oscillator of frequency ω.
inline double oscillator_position_element(double omega, int a, int b) {
  if (std::abs(a - b) != 1) return 0.0;
  return std::sqrt(std::max(a, b) / (2.0 * omega));
}

inline void require_oscillator_params(double omega, int n_max) {
  require(omega > 0.0 && std::isfinite(omega), "oscillator: omega must be positive");
  require(n_max >= 0, "oscillator: n_max must be non-negative");
}

// The x·y coupling matrix, dH/dλ of the oscillator model.
inline SymmetricMatrix oscillator_coupling(double omega, int n_max) {
  require_oscillator_params(omega, n_max);
  const OscillatorBasis basis{n_max};
  const auto states = basis.states();
  Matrix xy(basis.size(), basis.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    const auto [m, n] = states[i];
    for (int dm : {-1, 1})
      for (int dn : {-1, 1}) {
        const int m2 = m + dm, n2 = n + dn;
        if (m2 < 0 || n2 < 0 || m2 + n2 > n_max) continue;
        xy(i, basis.index(m2, n2)) =
            oscillator_position_element(omega, m, m2) * oscillator_position_element(omega, n, n2);
      }
  }
  return SymmetricMatrix(std::move(xy));
}

inline SymmetricMatrix oscillator_matrix(double omega, double lambda, int n_max) {
  require_oscillator_params(omega, n_max);
  require(std::isfinite(lambda), "oscillator: lambda must be finite");
  const OscillatorBasis basis{n_max};
  Matrix h = oscillator_coupling(omega, n_max).matrix() * lambda;
  const auto states = basis.states();
  for (std::size_t i = 0; i < states.size(); ++i)
    h(i, i) += (states[i].first + states[i].second + 1) * omega;
  return SymmetricMatrix(std::move(h));
}

struct EnergySlope {
  double energy;
  double slope;
};

// E_mn = (m+½)√(ω²+λ) + (n+½)√(ω²−λ) and its λ-derivative.
inline EnergySlope oscillator_analytic(double omega, double lambda, int m, int n) {
  require(omega > 0.0, "oscillator_analytic: omega must be positive");
  require(m >= 0 && n >= 0, "oscillator_analytic: quantum numbers must be non-negative");
  const double k1 = omega * omega + lambda;
  const double k2 = omega * omega - lambda;
  require(k1 > 0.0 && k2 > 0.0, "oscillator_analytic: |lambda| must be below omega^2");
  const double r1 = std::sqrt(k1), r2 = std::sqrt(k2);
  return {(m + 0.5) * r1 + (n + 0.5) * r2, (2 * m + 1) / (4 * r1) - (2 * n + 1) / (4 * r2)};
}

// ⟨φ_{shell−i} φ_i| x·y |φ_{shell−i} φ_i⟩ for the uncoupled product states.
inline double oscillator_product_expectation(double omega, int shell, int i) {
  require(shell >= 0 && i >= 0 && i <= shell, "oscillator_product_expectation: need 0 <= i <= shell");
  const OscillatorBasis basis{shell};
  const SymmetricMatrix xy = oscillator_coupling(omega, shell);
  return xy(basis.index(shell - i, i), basis.index(shell - i, i));
}

// U1: (x,y) → (−x,−y); U2: (x,y) → (y,x); U3 = U1·U2. Listed as (E, C2, σv1, σv2).
inline GroupRep oscillator_c2v(int n_max) {
  const OscillatorBasis basis{n_max};
  const auto states = basis.states();
  const std::size_t d = basis.size();
  Matrix u1(d, d), u2(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    const auto [m, n] = states[i];
    u1(i, i) = ((m + n) % 2 == 0) ? 1.0 : -1.0;
    u2(basis.index(n, m), i) = 1.0;
  }
  Matrix u3 = u1 * u2;
  return {"C2v",
          {{"E", Matrix::identity(d)}, {"C2", std::move(u1)}, {"sv1", std::move(u2)}, {"sv2", std::move(u3)}}};
}

inline ParametricModel oscillator_model(double omega, int n_max) {
  require_oscillator_params(omega, n_max);
  ParametricModel model;
  model.name = "oscillator";
  model.dim = OscillatorBasis{n_max}.size();
  model.hamiltonian = [omega, n_max](double lambda) { return oscillator_matrix(omega, lambda, n_max); };
  const SymmetricMatrix xy = oscillator_coupling(omega, n_max);
  model.derivative = [xy](double) { return xy; };
  const auto states = OscillatorBasis{n_max}.states();
  AnalyticOracle oracle;
  oracle.eigenvalues = [omega, states](double lambda) {
    Vector e;
    for (const auto& [m, n] : states) e.push_back(oscillator_analytic(omega, lambda, m, n).energy);
    return e;
  };
  oracle.slopes = [omega, states](double lambda) {
    Vector s;
    for (const auto& [m, n] : states) s.push_back(oscillator_analytic(omega, lambda, m, n).slope);
    return s;
  };
  // Shell truncation is exact only for the uncoupled problem.
  oracle.exact_at = [](double lambda) { return lambda == 0.0; };
  model.analytic = std::move(oracle);
  model.symmetry = oscillator_c2v(n_max);
  model.characters = c2v_character_table();
  model.domain = {-omega * omega, omega * omega};
  return model;
}

// ---------------------------------------------------------------------------
// Registry

struct ModelParams {
  double omega = 1.0;
  int n_max = 12;
};

struct ModelInfo {
  std::string name;
  std::string description;
};

inline std::vector<ModelInfo> model_registry() {
  return {{"six-site", "6x6 ring of two three-site chains with lambda bonds; C2v symmetric; lambda > 0"},
          {"oscillator",
           "two oscillators coupled by lambda*x*y, shell-truncated basis m+n <= nmax; |lambda| < omega^2"}};
}

inline ParametricModel make_model(const std::string& name, const ModelParams& params = {}) {
  if (name == "six-site") return six_site_model();
  if (name == "oscillator") return oscillator_model(params.omega, params.n_max);
  throw PreconditionError("unknown model '" + name + "'");
}

}  // namespace hft
