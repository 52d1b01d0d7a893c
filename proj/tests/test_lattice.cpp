#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "gupchain/errors.hpp"
#include "gupchain/lattice.hpp"

using namespace gupchain;

namespace {

ChainSpec chain(std::size_t n, double omega, double omega_c, double mass = 1.0) {
  ChainSpec s;
  s.n_sites = n;
  s.mass = mass;
  s.trap_freq = omega;
  s.coupling_freq = omega_c;
  return s;
}

}  // namespace

TEST(Hessian, SingleSiteHasNoNeighbours) {
  const auto h = build_hessian(chain(1, 1.0, 0.5));
  ASSERT_EQ(h.rows(), 1);
  EXPECT_DOUBLE_EQ(h(0, 0), 1.0);
}

TEST(Hessian, TwoSitesExpandsSpringTerm) {
  const auto h = build_hessian(chain(2, 1.0, 1.0));
  Eigen::Matrix2d expected;
  expected << 2, -1, -1, 2;
  EXPECT_LT((h - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Hessian, UncoupledIsDiagonal) {
  const auto h = build_hessian(chain(3, 2.0, 0.0));
  EXPECT_LT((h - 4.0 * Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Hessian, OpenChainLaplacian) {
  const auto h = build_hessian(chain(4, 1.0, 2.0));
  EXPECT_DOUBLE_EQ(h(0, 0), 1.0 + 4.0);
  EXPECT_DOUBLE_EQ(h(1, 1), 1.0 + 8.0);
  EXPECT_DOUBLE_EQ(h(3, 3), 1.0 + 4.0);
  EXPECT_DOUBLE_EQ(h(1, 2), -4.0);
  EXPECT_DOUBLE_EQ(h(0, 2), 0.0);
}

TEST(Hessian, RejectsInvalidSpecs) {
  EXPECT_THROW(build_hessian(chain(0, 1.0, 0.0)), ConfigError);
  EXPECT_THROW(build_hessian(chain(2, 0.0, 0.0)), ConfigError);
  EXPECT_THROW(build_hessian(chain(2, -1.0, 0.0)), ConfigError);
  EXPECT_THROW(normal_modes(chain(2, 1.0, -1.0)), ConfigError);
  EXPECT_THROW(normal_modes(chain(2, 1.0, 0.0, 0.0)), ConfigError);
}

TEST(Hessian, OverrideMustBeSymmetricPositiveDefinite) {
  auto s = chain(2, 1.0, 0.0);
  Eigen::Matrix2d asym;
  asym << 2, -1, -0.5, 2;
  s.hessian = asym;
  EXPECT_THROW(normal_modes(s), ConfigError);
  Eigen::Matrix2d indefinite;
  indefinite << 1, 2, 2, 1;
  s.hessian = indefinite;
  EXPECT_THROW(normal_modes(s), UnstableChainError);
}

TEST(NormalModes, SingleOscillator) {
  const double m = 3.0;
  const double w = 2.5;
  const auto modes = normal_modes(chain(1, w, 0.0, m));
  EXPECT_NEAR(modes.frequencies(0), w, 1e-15);
  EXPECT_NEAR(modes.o_matrix(0, 0), 1.0 / std::sqrt(m * w), 1e-15);
  EXPECT_NEAR(modes.o_prime_matrix(0, 0), std::sqrt(m * w), 1e-14);
}

TEST(NormalModes, TwoSiteAnalytic) {
  // Symmetric and antisymmetric combinations; both eigenvectors have tied
  // magnitudes, so the first entry is positive.
  const double w = 1.3;
  const double wc = 0.7;
  const auto modes = normal_modes(chain(2, w, wc));
  EXPECT_NEAR(modes.frequencies(0), w, 1e-14);
  EXPECT_NEAR(modes.frequencies(1), std::sqrt(w * w + 2.0 * wc * wc), 1e-14);
  const double r = 1.0 / std::numbers::sqrt2;
  Eigen::Matrix2d p;
  p << r, r, r, -r;
  EXPECT_LT((modes.p_matrix - p).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(NormalModes, SignConventionLargestEntryPositive) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ratio(0.0, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto modes = normal_modes(chain(2 + trial % 6, 1.0, ratio(rng)));
    for (Eigen::Index k = 0; k < modes.p_matrix.cols(); ++k) {
      // Lowest index among entries tied in magnitude.
      const double top = modes.p_matrix.col(k).cwiseAbs().maxCoeff();
      Eigen::Index arg = 0;
      while (std::abs(modes.p_matrix(arg, k)) < top * (1.0 - 1e-12)) ++arg;
      EXPECT_GT(modes.p_matrix(arg, k), 0.0);
    }
    for (Eigen::Index k = 1; k < modes.frequencies.size(); ++k) {
      EXPECT_LE(modes.frequencies(k - 1), modes.frequencies(k));
    }
  }
}

TEST(NormalModes, CanonicalOverRandomChains) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> size(1, 8);
  std::uniform_real_distribution<double> ratio(0.0, 3.0);
  std::uniform_real_distribution<double> mass(0.1, 10.0);
  for (int trial = 0; trial < 100; ++trial) {
    const auto modes = normal_modes(chain(static_cast<std::size_t>(size(rng)), 2.0, 2.0 * ratio(rng), mass(rng)));
    EXPECT_LT(canonical_deviation(modes), 1e-12);
    EXPECT_GT(modes.frequencies.minCoeff(), 0.0);
  }
}

TEST(Kernel, SingleSiteIsCosine) {
  const auto modes = normal_modes(chain(1, 1.7, 0.0, 4.0));
  for (double dt : {-2.0, 0.0, 0.3, 5.0}) EXPECT_NEAR(commutator_kernel(modes, 0, 0, dt), std::cos(1.7 * dt), 1e-14);
}

TEST(Kernel, ZeroLagIsIdentity) {
  const auto modes = normal_modes(chain(5, 1.0, 1.4));
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j) EXPECT_NEAR(commutator_kernel(modes, i, j, 0.0), i == j ? 1.0 : 0.0, 1e-12);
}

TEST(Kernel, TwoModeValue) {
  const auto modes = normal_modes(chain(2, 1.0, 1.0));
  const double expected = 0.5 * (std::cos(std::numbers::pi) + std::cos(std::sqrt(3.0) * std::numbers::pi));
  EXPECT_NEAR(commutator_kernel(modes, 0, 0, std::numbers::pi), expected, 1e-14);
  EXPECT_NEAR(expected, -0.166935, 5e-6);
}

TEST(Kernel, EvenInLag) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> dt(-20.0, 20.0);
  const auto modes = normal_modes(chain(4, 1.0, 0.9));
  for (int trial = 0; trial < 200; ++trial) {
    const double d = dt(rng);
    EXPECT_LT(std::abs(commutator_kernel(modes, 1, 2, d) - commutator_kernel(modes, 1, 2, -d)), 1e-13);
  }
}

TEST(Kernel, IndexOutOfRange) {
  const auto modes = normal_modes(chain(2, 1.0, 0.5));
  EXPECT_THROW(commutator_kernel(modes, 2, 0, 0.0), std::out_of_range);
  const std::vector<double> g{1.0, 0.0};
  EXPECT_THROW(coupling_kernel(modes, g, 5, 0.0, 0.0), std::out_of_range);
}

TEST(Kernel, InvariantUnderRotationOfDegenerateBlock) {
  // Omega_c = 0 makes every mode degenerate; any orthonormal basis must give
  // the same kernel.
  auto modes = normal_modes(chain(3, 1.5, 0.0, 2.0));
  std::mt19937_64 rng(9);
  std::normal_distribution<double> gauss;
  Eigen::Matrix3d a;
  for (int i = 0; i < 9; ++i) a(i / 3, i % 3) = gauss(rng);
  const Eigen::Matrix3d q = Eigen::HouseholderQR<Eigen::Matrix3d>(a).householderQ();
  NormalModes rotated = modes;
  rotated.p_matrix = modes.p_matrix * q;
  const double m = 2.0;
  rotated.o_matrix = rotated.p_matrix / std::sqrt(m * 1.5);
  rotated.o_prime_matrix = rotated.p_matrix * std::sqrt(m * 1.5);
  for (double dt : {0.0, 0.4, 2.2})
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j)
        EXPECT_NEAR(commutator_kernel(modes, i, j, dt), commutator_kernel(rotated, i, j, dt), 1e-13);
}

TEST(Kernel, SignFlipInvariance) {
  auto modes = normal_modes(chain(4, 1.0, 1.2));
  auto flipped = modes;
  flipped.o_matrix.col(1) *= -1.0;
  flipped.o_prime_matrix.col(1) *= -1.0;
  for (std::size_t i = 0; i < 4; ++i)
    EXPECT_NEAR(commutator_kernel(modes, i, 3, 0.7), commutator_kernel(flipped, i, 3, 0.7), 1e-15);
}

TEST(CouplingKernel, SingleSiteReduction) {
  const auto modes = normal_modes(chain(1, 2.0, 0.0));
  const std::vector<double> g{0.8};
  EXPECT_NEAR(coupling_kernel(modes, g, 0, 1.0, 0.25), 0.8 * std::cos(2.0 * 0.75), 1e-14);
}

TEST(CouplingKernel, LinearAndZero) {
  const auto modes = normal_modes(chain(2, 1.0, 1.0));
  const std::vector<double> zero{0.0, 0.0};
  EXPECT_EQ(coupling_kernel(modes, zero, 1, 0.3, 0.1), 0.0);
  const std::vector<double> first{1.0, 0.0};
  EXPECT_NEAR(coupling_kernel(modes, first, 1, 0.5, 0.5), 0.0, 1e-15);
  const std::vector<double> g{0.3, -1.1};
  const std::vector<double> g2{0.6, -2.2};
  EXPECT_NEAR(coupling_kernel(modes, g2, 0, 0.9, 0.2), 2.0 * coupling_kernel(modes, g, 0, 0.9, 0.2), 1e-14);
}

TEST(ComFactor, Examples) {
  EXPECT_NEAR(com_commutator_factor({{1.0, 1.0}, 0.01}), 1.01, 1e-15);
  EXPECT_NEAR(com_commutator_factor({{1.0, -1.0}, 0.01}), 1.01, 1e-15);
  EXPECT_NEAR(com_commutator_factor({{3.0}, 0.2}), 1.0 + 0.2 * 9.0, 1e-14);
}

TEST(ComFactor, EqualMomentaQuasiRigid) {
  const std::vector<double> p(7, 0.4);
  const double total = 7 * 0.4;
  EXPECT_NEAR(com_commutator_factor({p, 0.3}), 1.0 + 0.3 * total * total / 49.0, 1e-14);
}

TEST(ComFactor, AtLeastOneForNonNegativeBeta) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> p(1 + trial % 6);
    for (auto& v : p) v = gauss(rng);
    EXPECT_GE(com_commutator_factor({p, 0.05}), 1.0);
  }
}

TEST(ComFactor, RejectsEmpty) { EXPECT_THROW(com_commutator_factor({{}, 0.1}), ConfigError); }
