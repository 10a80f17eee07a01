#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "hft/hft.hpp"
#include "hft/models.hpp"
#include "oracles.hpp"

using namespace hft;

namespace {

Vector sorted(Vector v) {
  std::sort(v.begin(), v.end());
  return v;
}

Vector to_vector(const oracle::Vec6& a) { return {a.begin(), a.end()}; }

}  // namespace

TEST(ClusterDegeneracies, SixSiteAtCrossing) {
  const auto c = cluster_degeneracies(Vector{-2, -1, -1, 1, 1, 2}, 1e-8);
  ASSERT_EQ(c.size(), 4u);
  EXPECT_EQ(c[0], (DegenerateCluster{0, 1, 1e-8}));
  EXPECT_EQ(c[1], (DegenerateCluster{1, 2, 1e-8}));
  EXPECT_EQ(c[2], (DegenerateCluster{3, 2, 1e-8}));
  EXPECT_EQ(c[3], (DegenerateCluster{5, 1, 1e-8}));
}

TEST(ClusterDegeneracies, SingletonsAndTriple) {
  EXPECT_EQ(cluster_degeneracies(Vector{1, 2, 3}, 1e-8).size(), 3u);
  const auto c = cluster_degeneracies(Vector{0, 0, 0}, 1e-8);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0].size, 3u);
  EXPECT_THROW(cluster_degeneracies(Vector{1, 0}, 1e-8), PreconditionError);
  EXPECT_THROW(cluster_degeneracies(Vector{0, 1}, -1.0), PreconditionError);
}

TEST(ClusterProperty, PartitionAndTolerance) {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    Vector e(1 + rng() % 10);
    for (double& x : e) x = std::round(u(rng) * 8) / 8 + (rng() % 3 == 0 ? 1e-10 : 0.0);
    std::sort(e.begin(), e.end());
    const double tol = 1e-8;
    const auto cs = cluster_degeneracies(e, tol);
    std::size_t next = 0;
    for (const auto& c : cs) {
      EXPECT_EQ(c.start, next);
      next = c.end();
      for (std::size_t i = c.start + 1; i < c.end(); ++i) EXPECT_LE(e[i] - e[i - 1], tol);
      if (c.end() < e.size()) {
        EXPECT_GT(e[c.end()] - e[c.end() - 1], tol);
      }
    }
    EXPECT_EQ(next, e.size());
  }
}

TEST(Expectation, Examples) {
  const Vector v3{0.5, 0, -0.5, 0.5, 0, -0.5};
  EXPECT_NEAR(expectation(six_site_derivative(), v3), -1.0, 1e-15);
  EXPECT_EQ(expectation(Matrix(6, 6), v3), 0.0);
  const auto v2 = oracle::six_site_vector(1, 0.5);
  const double e = expectation(six_site_derivative(), Vector(v2.begin(), v2.end()));
  EXPECT_NEAR(e, 0.41296, 1e-5);
  EXPECT_NEAR(e, oracle::six_site_slopes(0.5)[1], 1e-14);
  EXPECT_THROW(expectation(six_site_derivative(), Vector{1, 1, 0, 0, 0, 0}), PreconditionError);
}

TEST(HftConsistentBasis, SixSiteCrossing) {
  const RotatedSpectrum rs = hft_spectrum(six_site_model(), 1.0);
  ASSERT_EQ(rs.clusters.size(), 4u);
  const auto& c = rs.clusters[1];
  EXPECT_EQ(c.start, 1u);
  EXPECT_EQ(c.size, 2u);
  EXPECT_NEAR(rs.cluster_slopes[1], -1.0, 1e-12);
  EXPECT_NEAR(rs.cluster_slopes[2], 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(rs.cluster_slopes[3], -1.0 / 3.0, 1e-12);
  EXPECT_NEAR(rs.cluster_slopes[4], 1.0, 1e-12);
  // rotated columns stay orthonormal eigenvectors of H(1)
  EXPECT_LE(orthonormality_error(rs.spectrum.eigenvectors), 1e-13);
  EXPECT_LE(eigen_residual(six_site_hamiltonian(1.0), rs.spectrum), 1e-12);
  // and diagonalize H' inside the cluster
  EXPECT_LE(std::abs(bilinear(rs.spectrum.vector(1), six_site_derivative(), rs.spectrum.vector(2))), 1e-13);
}

TEST(HftConsistentBasis, OscillatorShellOne) {
  const RotatedSpectrum rs = hft_spectrum(oscillator_model(1.0, 12), 0.0);
  const auto& c = rs.cluster_of(1);
  EXPECT_EQ(c.start, 1u);
  EXPECT_EQ(c.size, 2u);
  EXPECT_NEAR(rs.cluster_slopes[1], -0.5, 1e-12);
  EXPECT_NEAR(rs.cluster_slopes[2], 0.5, 1e-12);
}

TEST(HftConsistentBasis, NoDegeneracyIsIdentity) {
  Spectrum s = eigh(six_site_hamiltonian(0.5));
  s.lambda = 0.5;
  const RotatedSpectrum rs = hft_consistent_basis(s, six_site_derivative(), 1e-8);
  EXPECT_EQ(max_abs_diff(rs.rotation, Matrix::identity(6)), 0.0);
  EXPECT_EQ(max_abs_diff(rs.spectrum.eigenvectors, s.eigenvectors), 0.0);
  for (std::size_t k = 0; k < 6; ++k)
    EXPECT_EQ(rs.cluster_slopes[k], expectation(six_site_derivative(), s.vector(k)));
  EXPECT_TRUE(rs.warnings.empty());
}

TEST(HftConsistentBasis, NearDegenerateWarning) {
  Spectrum s;
  s.lambda = 0.0;
  s.eigenvalues = {0.0, 5e-8, 1.0};
  s.eigenvectors = Matrix::identity(3);
  const RotatedSpectrum rs = hft_consistent_basis(s, Matrix::identity(3), 1e-8);
  EXPECT_EQ(rs.warnings.size(), 1u);
  EXPECT_EQ(rs.clusters.size(), 3u);
}

TEST(HftConsistentBasis, RotationRelatesBases) {
  Spectrum s = eigh(six_site_hamiltonian(1.0));
  s.lambda = 1.0;
  const RotatedSpectrum rs = hft_consistent_basis(s, six_site_derivative(), 1e-8);
  EXPECT_LE(max_abs_diff(s.eigenvectors * rs.rotation, rs.spectrum.eigenvectors), 1e-14);
  EXPECT_LE(orthonormality_error(rs.rotation), 1e-14);
}

TEST(MixedSlope, Examples) {
  const double r = 1 / std::sqrt(2.0);
  EXPECT_NEAR(mixed_slope(Vector{1.0 / 3, -1.0}, Vector{r, r}), -1.0 / 3, 1e-15);
  EXPECT_EQ(mixed_slope(Vector{0.7}, Vector{1.0}), 0.7);
  EXPECT_NEAR(mixed_slope(Vector{-0.5, 0.5}, Vector{r, r}), 0.0, 1e-15);
  EXPECT_THROW(mixed_slope(Vector{1, 2}, Vector{1, 1}), PreconditionError);
  EXPECT_THROW(mixed_slope(Vector{1, 2}, Vector{1}), PreconditionError);
}

TEST(MixedSlopeProperty, EqualsDirectExpectation) {
  // Σc²s matches ⟨φ|H′|φ⟩ for φ = Σc·ψ in the rotated cluster, and lies between the extremes.
  const RotatedSpectrum rs = hft_spectrum(six_site_model(), 1.0);
  std::mt19937 rng(23);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 100; ++trial) {
    Vector c{g(rng), g(rng)};
    const double n = norm(c);
    for (double& x : c) x /= n;
    Vector phi(6, 0.0);
    for (std::size_t a = 0; a < 2; ++a)
      for (std::size_t i = 0; i < 6; ++i) phi[i] += c[a] * rs.spectrum.eigenvectors(i, 1 + a);
    const Vector slopes{rs.cluster_slopes[1], rs.cluster_slopes[2]};
    const double m = mixed_slope(slopes, c);
    EXPECT_NEAR(m, expectation(six_site_derivative(), phi), 1e-13);
    EXPECT_GE(m, -1.0 - 1e-12);
    EXPECT_LE(m, 1.0 / 3 + 1e-12);
  }
}

TEST(HftSpectrumProperty, TraceOfClusterBlockPreserved) {
  // The rotation keeps Tr(P H′ P) for every cluster.
  const ParametricModel m = oscillator_model(1.0, 8);
  const Spectrum s = eigh(m.hamiltonian_at(0.0));
  const RotatedSpectrum rs = hft_spectrum(m, 0.0);
  const Matrix hp = m.derivative_at(0.0).matrix();
  for (const auto& c : rs.clusters) {
    double before = 0, after = 0;
    for (std::size_t i = c.start; i < c.end(); ++i) {
      before += bilinear(s.vector(i), hp, s.vector(i));
      after += rs.cluster_slopes[i];
    }
    EXPECT_NEAR(before, after, 1e-12);
  }
}

TEST(HftSpectrumProperty, SlopesMatchFiniteDifferencesAtRandomLambda) {
  std::mt19937 rng(29);
  std::uniform_real_distribution<double> u(0.2, 2.0);
  const ParametricModel m = six_site_model();
  for (int trial = 0; trial < 40; ++trial) {
    const double l = u(rng);
    if (std::abs(l - 1.0) < 1e-3) continue;
    const RotatedSpectrum rs = hft_spectrum(m, l);
    const Vector fd = tracked_fd_slopes(m, rs.spectrum, 1e-4, rs.clusters.front().tol_used);
    for (std::size_t k = 0; k < 6; ++k) EXPECT_NEAR(rs.cluster_slopes[k], fd[k], 1e-8) << "lambda " << l;
    EXPECT_EQ(sorted(rs.spectrum.eigenvalues), rs.spectrum.eigenvalues);
  }
}

TEST(OffdiagIdentity, CrossIrrepAtCrossing) {
  EXPECT_LE(offdiag_identity_residual(six_site_model(), 1.0, 2, 3), 1e-10);
}

TEST(OffdiagIdentity, CrossIrrepPairsNearCrossingVanish) {
  const ParametricModel m = six_site_model();
  const RotatedSpectrum rs = hft_spectrum(m, 1.0);
  const auto sym = classify(rs.spectrum, *m.symmetry, *m.characters);
  for (std::size_t a = 0; a < 6; ++a)
    for (std::size_t b = 0; b < 6; ++b)
      if (a != b && sym[a].irrep->label != sym[b].irrep->label) {
        EXPECT_LE(offdiag_identity_residual(m, 1.0, a, b), 1e-10) << a << "," << b;
      }
  // without the symmetry the plain difference is still accurate to well below 1e-5
  ParametricModel bare = m;
  bare.symmetry.reset();
  for (std::size_t a = 0; a < 6; ++a)
    for (std::size_t b = 0; b < 6; ++b)
      if (a != b) {
        EXPECT_LE(offdiag_identity_residual(bare, 1.0, a, b), 1e-7);
      }
}

TEST(OffdiagIdentity, GenericPair) {
  EXPECT_LE(offdiag_identity_residual(six_site_model(), 0.5, 1, 2), 1e-6);
}

TEST(OffdiagIdentity, SameIndexRejected) {
  EXPECT_THROW(offdiag_identity_residual(six_site_model(), 0.5, 1, 1), PreconditionError);
  EXPECT_THROW(offdiag_identity_residual(six_site_model(), 0.5, 1, 9), PreconditionError);
}

TEST(OffdiagIdentity, ClosedFormOracle) {
  // Same-irrep pairs, where the identity is non-trivial, from closed-form eigenvectors.
  for (double l : {0.5, 1.5}) {
    for (auto [a, b] : {std::pair{1, 5}, std::pair{0, 4}}) {
      const auto e = oracle::six_site_energies(l);
      const auto va = oracle::six_site_vector(a, l);
      const auto vb = oracle::six_site_vector(b, l);
      const double lhs = oracle::six_site_dh(va, vb);
      const double rhs = (e[b] - e[a]) * oracle::dot6(va, oracle::six_site_vector_derivative(b, l));
      EXPECT_GT(std::abs(lhs), 0.1);
      EXPECT_NEAR(lhs, rhs, 1e-8);
    }
  }
}

TEST(HftReport, SixSiteGeneric) {
  const HftReport r = hft_report(six_site_model(), 0.7);
  EXPECT_EQ(r.reference_kind, "analytic");
  EXPECT_LE(r.worst_residual, 1e-7);
  const auto slopes = oracle::six_site_slopes(0.7);
  const auto energies = oracle::six_site_energies(0.7);
  for (std::size_t k = 0; k < 6; ++k) {
    // slot k of the sorted spectrum carries the slope of the branch with that energy
    std::size_t b = 0;
    for (std::size_t j = 0; j < 6; ++j)
      if (std::abs(energies[j] - r.states[k].eigenvalue) < 1e-10) b = j;
    EXPECT_NEAR(r.states[k].lhs, slopes[b], 1e-12);
  }
}

TEST(HftReport, SixSiteCrossing) {
  const HftReport r = hft_report(six_site_model(), 1.0);
  EXPECT_LE(r.worst_residual, 1e-7);
  EXPECT_NEAR(r.states[1].lhs, -1.0, 1e-7);
  EXPECT_NEAR(r.states[2].lhs, oracle::six_site_slopes(1.0)[1], 1e-7);
}

TEST(HftReport, OscillatorShells) {
  const HftReport r = hft_report(oscillator_model(1.0, 12), 0.0);
  EXPECT_EQ(r.reference_kind, "analytic");
  EXPECT_LE(r.worst_residual, 1e-10);
  for (const auto& c : r.clusters) {
    const int shell = static_cast<int>(c.size) - 1;
    Vector lhs;
    for (std::size_t i = c.start; i < c.end(); ++i) lhs.push_back(r.states[i].lhs);
    const auto expect = oracle::shell_slopes(shell);
    ASSERT_EQ(lhs.size(), expect.size());
    for (std::size_t i = 0; i < lhs.size(); ++i) EXPECT_NEAR(lhs[i], expect[i], 1e-10);
  }
}

TEST(HftReport, OscillatorAwayFromZeroUsesDifferences) {
  const HftReport r = hft_report(oscillator_model(1.0, 10), 0.2);
  EXPECT_EQ(r.reference_kind, "finite-difference");
  EXPECT_LE(r.worst_residual, 1e-6);
}

TEST(Continuity, SixSiteAtCrossing) {
  EXPECT_GE(continuity_overlap(six_site_model(), 1.0, 1e-3), 0.9999);
  EXPECT_GE(continuity_overlap(six_site_model(), 1.0, 1e-8), 1 - 1e-6);
}

TEST(Continuity, OscillatorAtZero) {
  EXPECT_GE(continuity_overlap(oscillator_model(1.0, 8), 0.0, 1e-3), 0.9999);
}

TEST(Continuity, ShrinkingDeltaApproachesOne) {
  double prev = 0.0;
  for (double d : {1e-1, 1e-2, 1e-3, 1e-4, 1e-5}) {
    const double o = continuity_overlap(six_site_model(), 1.0, d);
    EXPECT_GE(o, prev);
    prev = o;
  }
}

TEST(Continuity, RotatedBasisMatchesClosedFormAtCrossing) {
  const RotatedSpectrum rs = hft_spectrum(six_site_model(), 1.0);
  // slot 1 carries slope −1, the A2 state ε3; slot 2 the A1 state ε2
  const auto v3 = oracle::six_site_vector(2, 1.0);
  const auto v2 = oracle::six_site_vector(1, 1.0);
  EXPECT_NEAR(std::abs(dot(rs.spectrum.vector(1), to_vector(v3))), 1.0, 1e-12);
  EXPECT_NEAR(std::abs(dot(rs.spectrum.vector(2), to_vector(v2))), 1.0, 1e-12);
}
