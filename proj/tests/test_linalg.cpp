#include "biquad/linalg.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <limits>

using namespace biquad;

namespace {

SymMatrix mat(std::initializer_list<std::initializer_list<double>> rows) {
  Eigen::MatrixXd m(rows.size(), rows.begin()->size());
  int r = 0;
  for (const auto& row : rows) {
    int c = 0;
    for (double v : row) m(r, c++) = v;
    ++r;
  }
  return SymMatrix(m);
}

Eigen::MatrixXd random_orthogonal(std::mt19937_64& rng, int n) {
  Eigen::MatrixXd g(n, n);
  std::normal_distribution<double> d;
  for (int i = 0; i < n * n; ++i) g.data()[i] = d(rng);
  return Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ();
}

}  // namespace

TEST(SymMatrix, MirrorsUpperTriangle) {
  Eigen::MatrixXd m(2, 2);
  m << 1, 5, -7, 2;
  const SymMatrix s(m);
  EXPECT_EQ(s(1, 0), 5.0);
  EXPECT_EQ(s(0, 1), 5.0);
  EXPECT_THROW(SymMatrix(Eigen::MatrixXd(2, 3)), InvalidInput);
  EXPECT_THROW(SymMatrix(Eigen::MatrixXd(0, 0)), InvalidInput);
}

TEST(SymEig, IdentityOfOrderThree) {
  const auto e = sym_eig(SymMatrix::identity(3));
  EXPECT_TRUE(e.eigenvalues.isApprox(Eigen::Vector3d(1, 1, 1)));
}

TEST(SymEig, HandSolvedTwoByTwo) {
  auto e = sym_eig(mat({{1, -1}, {-1, 1}}));
  EXPECT_NEAR(e.eigenvalues[0], 2.0, 1e-14);
  EXPECT_NEAR(e.eigenvalues[1], 0.0, 1e-14);
  e = sym_eig(mat({{0, 2}, {2, 0}}));
  EXPECT_NEAR(e.eigenvalues[0], 2.0, 1e-14);
  EXPECT_NEAR(e.eigenvalues[1], -2.0, 1e-14);
}

TEST(SymEig, NonFiniteInputThrows) {
  EXPECT_THROW(sym_eig(mat({{1, std::numeric_limits<double>::quiet_NaN()}, {0, 1}})), InvalidInput);
  EXPECT_THROW(sym_eig(mat({{std::numeric_limits<double>::infinity()}})), InvalidInput);
}

TEST(SymEig, InvariantsOnRandomMatrices) {
  std::mt19937_64 rng(7);
  const Tolerances tol;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + trial % 12;
    const SymMatrix s(oracle::sym(rng, n));
    const auto e = sym_eig(s);
    for (int i = 1; i < n; ++i) EXPECT_GE(e.eigenvalues[i - 1], e.eigenvalues[i]);
    const Eigen::MatrixXd& u = e.eigenvectors;
    EXPECT_LE((u * e.eigenvalues.asDiagonal() * u.transpose() - s.matrix()).norm(),
              tol.tol_recon * s.matrix().norm());
    EXPECT_LE((u.transpose() * u - Eigen::MatrixXd::Identity(n, n)).norm(), tol.tol_orth);
    EXPECT_NEAR(e.eigenvalues.sum(), s.matrix().trace(), tol.tol_recon * s.matrix().norm());
    for (int c = 0; c < n; ++c) {
      Eigen::Index arg;
      u.col(c).cwiseAbs().maxCoeff(&arg);
      EXPECT_GT(u(arg, c), 0.0);
    }
  }
}

TEST(NumericalRank, Examples) {
  const Tolerances tol;
  EXPECT_EQ(numerical_rank(SymMatrix::zero(4), tol), 0);
  EXPECT_EQ(numerical_rank(mat({{1, -1}, {-1, 1}}), tol), 1);
  for (int n = 1; n <= 6; ++n) EXPECT_EQ(numerical_rank(SymMatrix::identity(n), tol), n);
}

TEST(NumericalRank, InvariantUnderOrthogonalConjugation) {
  std::mt19937_64 rng(11);
  const Tolerances tol;
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 3 + trial % 6;
    const int r = trial % (n + 1);
    Eigen::MatrixXd f = Eigen::MatrixXd::Random(n, r);
    const SymMatrix s(f * f.transpose());
    const Eigen::MatrixXd q = random_orthogonal(rng, n);
    const SymMatrix conj(q * s.matrix() * q.transpose());
    EXPECT_EQ(numerical_rank(s, tol), r);
    EXPECT_EQ(numerical_rank(conj, tol), numerical_rank(s, tol));
    EXPECT_EQ(numerical_rank(s, tol), oracle::svd_rank(s.matrix(), 1e-9));
  }
}

TEST(IsPsd, Examples) {
  const Tolerances tol;
  EXPECT_TRUE(is_psd(SymMatrix::identity(3), tol).psd);
  EXPECT_TRUE(is_psd(mat({{1, -1}, {-1, 1}}), tol).psd);
  const SymMatrix s = mat({{0, 2}, {2, 0}});
  const PsdCheck c = is_psd(s, tol);
  ASSERT_FALSE(c.psd);
  EXPECT_NEAR(c.min_eigenvalue, -2.0, 1e-14);
  EXPECT_NEAR(std::abs(c.witness[0]), 1 / std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(c.witness[0], -c.witness[1], 1e-14);
  EXPECT_NEAR(c.witness.dot(s.matrix() * c.witness), -2.0, 1e-13);
}

TEST(IsPsd, StableUnderAddingIdentity) {
  std::mt19937_64 rng(13);
  const Tolerances tol;
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + trial % 5;
    const SymMatrix s(oracle::sym(rng, n));
    if (!is_psd(s, tol).psd) continue;
    for (double eps : {0.0, 1e-12, 1e-3, 1.0, 100.0}) {
      EXPECT_TRUE(is_psd(s + SymMatrix::identity(n) * eps, tol).psd);
    }
  }
  // A boundary matrix with an exact zero eigenvalue passes.
  EXPECT_TRUE(is_psd(mat({{1, 1}, {1, 1}}), tol).psd);
}

TEST(PsdFactor, Examples) {
  const Tolerances tol;
  Eigen::MatrixXd w = psd_factor(SymMatrix::identity(2), tol);
  EXPECT_EQ(w.cols(), 2);
  EXPECT_TRUE((w * w.transpose()).isApprox(Eigen::Matrix2d::Identity()));

  w = psd_factor(mat({{1, -1}, {-1, 1}}), tol);
  ASSERT_EQ(w.cols(), 1);
  EXPECT_NEAR(std::abs(w(0, 0)), 1.0, 1e-14);
  EXPECT_NEAR(w(0, 0), -w(1, 0), 1e-14);

  w = psd_factor(mat({{2, 0}, {0, 0}}), tol);
  ASSERT_EQ(w.cols(), 1);
  EXPECT_NEAR(w(0, 0), std::sqrt(2.0), 1e-14);
  EXPECT_EQ(w(1, 0), 0.0);
}

TEST(PsdFactor, NotPsdCarriesWitness) {
  const SymMatrix s = mat({{0, 2}, {2, 0}});
  try {
    psd_factor(s, Tolerances{});
    FAIL() << "expected NotPSD";
  } catch (const NotPSD& e) {
    const Eigen::VectorXd& v = e.vector_witness();
    EXPECT_LT(v.dot(s.matrix() * v), 0.0);
  }
}

TEST(PsdFactor, ReconstructsRandomPsd) {
  std::mt19937_64 rng(17);
  const Tolerances tol;
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 1 + trial % 9;
    const int r = 1 + trial % n;
    const Eigen::MatrixXd f = Eigen::MatrixXd::Random(n, r);
    const SymMatrix s(f * f.transpose());
    const Eigen::MatrixXd w = psd_factor(s, tol);
    EXPECT_EQ(w.cols(), numerical_rank(s, tol));
    EXPECT_LE((w * w.transpose() - s.matrix()).norm(), tol.tol_recon * s.matrix().norm());
  }
}

TEST(Tolerances, EnvironmentAndValidation) {
  EXPECT_THROW(Tolerances{}.with_eps(0.0), InvalidInput);
  EXPECT_THROW(Tolerances{}.with_eps(-1.0), InvalidInput);
  EXPECT_EQ(Tolerances{}.with_eps(1e-6).eps_psd, 1e-6);
  ::setenv("BIQUAD_TOL", "1e-7", 1);
  EXPECT_EQ(Tolerances::from_env().eps_rank, 1e-7);
  ::setenv("BIQUAD_TOL", "abc", 1);
  EXPECT_THROW(Tolerances::from_env(), InvalidInput);
  ::unsetenv("BIQUAD_TOL");
  EXPECT_EQ(Tolerances::from_env().eps_rank, 1e-9);
  EXPECT_LE(Tolerances{}.eps_psd, 1e-6);
}
