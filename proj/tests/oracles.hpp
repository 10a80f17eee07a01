#pragma once

// Independent reference values for the tests. Nothing here calls into the library's
// eigensolver or model code: closed forms are re-derived by hand, and derivatives of
// closed forms use their own difference quotients.

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

namespace oracle {

using Vec6 = std::array<double, 6>;

inline double s(double lambda) { return std::sqrt(lambda * lambda + 8.0); }

// ε1…ε6 in branch order.
inline Vec6 six_site_energies(double l) {
  const double r = s(l);
  return {-(l + r) / 2, (l - r) / 2, -l, l, (r - l) / 2, (l + r) / 2};
}

inline Vec6 six_site_slopes(double l) {
  const double q = l / s(l);
  return {-(1 + q) / 2, (1 - q) / 2, -1.0, 1.0, (q - 1) / 2, (1 + q) / 2};
}

inline std::vector<double> six_site_sorted(double l) {
  const Vec6 e = six_site_energies(l);
  std::vector<double> v(e.begin(), e.end());
  std::sort(v.begin(), v.end());
  return v;
}

inline Vec6 normalized(Vec6 w) {
  double n = 0;
  for (double x : w) n += x * x;
  n = std::sqrt(n);
  for (double& x : w) x /= n;
  return w;
}

// Eigenvector of branch b (0-based, branch order ε1…ε6). A1 states have the form
// (1, 2/ε, 1, 1, 2/ε, 1); B2 states (1, 2/ε, 1, −1, −2/ε, −1).
inline Vec6 six_site_vector(int b, double l) {
  const Vec6 e = six_site_energies(l);
  switch (b) {
    case 0:
    case 4: {
      const double a = 2.0 / e[b];
      return normalized({1, a, 1, -1, -a, -1});
    }
    case 1:
    case 5: {
      const double a = 2.0 / e[b];
      return normalized({1, a, 1, 1, a, 1});
    }
    case 2: return {0.5, 0, -0.5, 0.5, 0, -0.5};
    default: return {0.5, 0, -0.5, -0.5, 0, 0.5};
  }
}

inline Vec6 six_site_vector_derivative(int b, double l, double h = 1e-5) {
  const Vec6 p = six_site_vector(b, l + h), m = six_site_vector(b, l - h);
  Vec6 d{};
  for (int i = 0; i < 6; ++i) d[i] = (p[i] - m[i]) / (2 * h);
  return d;
}

// Positions of the λ bonds, 0-based.
inline double six_site_dh(const Vec6& a, const Vec6& b) {
  return a[0] * b[5] + a[5] * b[0] + a[2] * b[3] + a[3] * b[2];
}

inline double dot6(const Vec6& a, const Vec6& b) {
  double t = 0;
  for (int i = 0; i < 6; ++i) t += a[i] * b[i];
  return t;
}

// Irrep of each branch ε1…ε6.
inline const char* six_site_irrep(int b) {
  static const char* labels[] = {"B2", "A1", "A2", "B1", "B2", "A1"};
  return labels[b];
}

// Two-fermion ground energies on either side of λ = 1 and their derivatives.
inline double e0_left(double l) { return -s(l); }
inline double e0_right(double l) { return -(3 * l + s(l)) / 2; }
inline double de0_left(double l) { return -l / s(l); }
inline double de0_right(double l) { return -(3 + l / s(l)) / 2; }

// Uncoupled-shell slopes (m − n)/(2ω) for m + n = shell, ascending.
inline std::vector<double> shell_slopes(int shell, double omega = 1.0) {
  std::vector<double> v;
  for (int m = 0; m <= shell; ++m) v.push_back((m - (shell - m)) / (2 * omega));
  std::sort(v.begin(), v.end());
  return v;
}

inline double oscillator_energy(double omega, double l, int m, int n) {
  return (m + 0.5) * std::sqrt(omega * omega + l) + (n + 0.5) * std::sqrt(omega * omega - l);
}

inline double oscillator_slope(double omega, double l, int m, int n) {
  return (2 * m + 1) / (4 * std::sqrt(omega * omega + l)) - (2 * n + 1) / (4 * std::sqrt(omega * omega - l));
}

}  // namespace oracle
