#include "biquad/gram.hpp"
#include "biquad/partsym.hpp"
#include "biquad/simple.hpp"

#include "corpus.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace biquad;

namespace {

BiquadraticForm p224() { return to_form(gen_simple(2, 2, 4)); }

/// Random SOS form from a random positive definite Gram matrix.
BiquadraticForm random_sos(std::mt19937_64& rng, int m, int n, Eigen::MatrixXd* gram = nullptr) {
  const Eigen::MatrixXd g = corpus::psd_of_rank(rng, m * n, m * n) + 0.1 * Eigen::MatrixXd::Identity(m * n, m * n);
  if (gram != nullptr) *gram = g;
  return BiquadraticForm::symmetrize(m, n, g);
}

double z_quad(const Eigen::MatrixXd& s, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  const Eigen::VectorXd z = kron(x, y);
  return z.dot(s * z);
}

}  // namespace

TEST(BuildFamily, Examples) {
  const BiquadraticForm one = BiquadraticForm::from_terms(1, 1, std::vector<MonomialTerm>{{0, 0, 0, 0, 1.0}});
  const GramFamily f1 = build_family(one);
  EXPECT_EQ(f1.dimension(), 0);
  EXPECT_EQ(f1.base().matrix(), Eigen::MatrixXd::Ones(1, 1));

  const GramFamily f2 = build_family(p224());
  ASSERT_EQ(f2.dimension(), 1);
  Eigen::Matrix4d expect = Eigen::Matrix4d::Zero();
  expect(0, 3) = expect(3, 0) = 1;   // ((1,1),(2,2))
  expect(1, 2) = expect(2, 1) = -1;  // ((1,2),(2,1))
  EXPECT_EQ(f2.direction_matrix(0), expect);

  EXPECT_EQ(build_family(to_form(gen_simple(3, 2, 4))).dimension(), 3);
  EXPECT_EQ(build_family(BiquadraticForm::zero(4, 3)).dimension(), 6 * 3);
}

TEST(BuildFamily, DirectionsAnnihilateAndRepresentationHolds) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 10; ++trial) {
    const int m = 1 + trial % 4;
    const int n = 1 + (trial + 2) % 4;
    const BiquadraticForm p = random_sos(rng, m, n);
    const GramFamily f = build_family(p);
    EXPECT_EQ(f.dimension(), (m * (m - 1) / 2) * (n * (n - 1) / 2));
    std::vector<double> gamma(static_cast<std::size_t>(f.dimension()));
    for (double& g : gamma) g = std::normal_distribution<double>(0, 3)(rng);
    const GramPoint g = gram_at(f, gamma);
    const double scale = 1 + p.max_abs_coefficient() + 3 * f.dimension();
    for (int s = 0; s < 500; ++s) {
      const Eigen::VectorXd x = oracle::unit(rng, m);
      const Eigen::VectorXd y = oracle::unit(rng, n);
      EXPECT_NEAR(z_quad(g.matrix.matrix(), x, y), evaluate(p, x, y), 1e-9 * scale);
      if (s < 20) {
        for (Eigen::Index t = 0; t < f.dimension(); ++t) {
          EXPECT_NEAR(z_quad(f.direction_matrix(t), x, y), 0.0, 1e-15);
        }
      }
    }
  }
}

TEST(DirectionalQuadratics, MatchExplicitProducts) {
  std::mt19937_64 rng(2);
  const GramFamily f = build_family(random_sos(rng, 3, 3));
  const Eigen::VectorXd v = oracle::unit(rng, 9);
  const Eigen::VectorXd q = f.directional_quadratics(v);
  for (Eigen::Index t = 0; t < f.dimension(); ++t) EXPECT_NEAR(q[t], v.dot(f.direction_matrix(t) * v), 1e-14);
}

TEST(GramAt, Examples) {
  const GramFamily f = build_family(p224());
  EXPECT_EQ(gram_at(f, std::vector<double>{0.0}).matrix.matrix(), Eigen::MatrixXd::Identity(4, 4));

  const GramPoint g1 = gram_at(f, std::vector<double>{1.0});
  Eigen::Matrix4d expect;
  expect << 1, 0, 0, 1, 0, 1, -1, 0, 0, -1, 1, 0, 1, 0, 0, 1;
  EXPECT_EQ(g1.matrix.matrix(), expect);
  EXPECT_EQ(numerical_rank(g1.matrix, Tolerances{}), 2);

  const GramPoint g2 = gram_at(f, std::vector<double>{2.0});
  const auto eig = sym_eig(g2.matrix);
  EXPECT_NEAR(eig.eigenvalues[0], 3.0, 1e-14);
  EXPECT_NEAR(eig.eigenvalues[3], -1.0, 1e-14);
  EXPECT_FALSE(is_psd(g2.matrix, Tolerances{}).psd);

  EXPECT_THROW(gram_at(f, std::vector<double>{}), InvalidInput);
  EXPECT_THROW(gram_at(f, std::vector<double>{1.0, 2.0}), InvalidInput);
}

TEST(GramPointFromMatrix, PartsymMatrixIsAFamilyMember) {
  std::mt19937_64 rng(3);
  const Tolerances tol;
  for (int trial = 0; trial < 20; ++trial) {
    const int m = 2 + trial % 3;
    const int n = 2 + trial % 3;
    const XSymmetricData x = corpus::psd_monic(rng, m, n, 1 + trial % n, n);
    const BiquadraticForm p = reconstruct(x);
    const GramFamily f = build_family(p);
    const SymMatrix mm = assemble_m(x);
    const GramPoint g = gram_point_from_matrix(f, mm.matrix());
    EXPECT_LE((g.matrix.matrix() - mm.matrix()).norm(), 1e-12 * (1 + mm.matrix().norm()));
    EXPECT_EQ(numerical_rank(g.matrix, tol), rank_bound(x, tol));
    // Same Gram matrix as the naive decomposition, so the same factor span.
    EXPECT_LE((factor_gram(f, g, tol).gram() - sos_decompose_naive(x, tol).gram()).norm(), 1e-9 * mm.matrix().norm());
  }
  const GramFamily f = build_family(p224());
  EXPECT_THROW(gram_point_from_matrix(f, 2 * Eigen::MatrixXd::Identity(4, 4)), InvalidInput);
}

TEST(GramPointFromMatrix, RecoversGamma) {
  std::mt19937_64 rng(4);
  const GramFamily f = build_family(random_sos(rng, 3, 4));
  std::vector<double> gamma(static_cast<std::size_t>(f.dimension()));
  for (double& g : gamma) g = std::uniform_real_distribution<double>(-2, 2)(rng);
  const GramPoint back = gram_point_from_matrix(f, gram_at(f, gamma).matrix.matrix());
  for (std::size_t t = 0; t < gamma.size(); ++t) EXPECT_NEAR(back.gamma[t], gamma[t], 1e-14);
}

TEST(BoundaryStep, DiagonalCase) {
  Eigen::Matrix2d s = Eigen::Matrix2d::Identity();
  Eigen::Matrix2d t;
  t << 0.5, 0, 0, -0.25;
  const auto step = boundary_step(s, t, 1e-12);
  ASSERT_TRUE(step);
  EXPECT_NEAR(*step, 4.0, 1e-9);
  EXPECT_FALSE(boundary_step(s, Eigen::Matrix2d::Identity(), 1e-12));  // never leaves the cone
  EXPECT_FALSE(boundary_step(s, Eigen::Matrix2d::Zero(), 1e-12));
}

TEST(ReduceToBoundary, Examples) {
  const Tolerances tol;
  const GramFamily f = build_family(p224());
  const GramPoint rankdef = gram_at(f, std::vector<double>{1.0});
  EXPECT_EQ(reduce_to_boundary(f, rankdef, 0).gamma, rankdef.gamma);

  const GramPoint out = reduce_to_boundary(f, gram_at(f, std::vector<double>{0.0}), 0);
  EXPECT_NEAR(std::abs(out.gamma[0]), 1.0, 1e-9);
  EXPECT_EQ(numerical_rank(out.matrix, tol), 2);

  const BiquadraticForm p1 = BiquadraticForm::from_terms(1, 2, std::vector<MonomialTerm>{{0, 0, 0, 0, 1.0}, {0, 0, 1, 1, 1.0}});
  const GramFamily f1 = build_family(p1);
  EXPECT_THROW(reduce_to_boundary(f1, gram_at(f1, std::vector<double>{}), 0), CannotReduce);
  EXPECT_THROW(reduce_to_boundary(f, gram_at(f, std::vector<double>{2.0}), 0), NotPSD);
}

TEST(ReduceToBoundary, RandomSosForms) {
  std::mt19937_64 rng(5);
  const Tolerances tol;
  for (int trial = 0; trial < 20; ++trial) {
    const int m = 2 + trial % 3;
    const int n = 2 + (trial / 3) % 3;
    Eigen::MatrixXd g0;
    const BiquadraticForm p = random_sos(rng, m, n, &g0);
    const GramFamily f = build_family(p);
    const GramPoint start = gram_point_from_matrix(f, g0);
    ASSERT_EQ(numerical_rank(start.matrix, tol), m * n);
    const GramPoint out = reduce_to_boundary(f, start, trial);
    EXPECT_TRUE(is_psd(out.matrix, tol).psd);
    EXPECT_LE(numerical_rank(out.matrix, tol), m * n - 1);
    EXPECT_TRUE(verify_sos(p, factor_gram(f, out, tol)).passed);
  }
}

TEST(MinRankSearch, SingleMonomial) {
  const BiquadraticForm p = BiquadraticForm::from_terms(1, 1, std::vector<MonomialTerm>{{0, 0, 0, 0, 1.0}});
  const SearchResult r = min_rank_search(build_family(p));
  EXPECT_EQ(r.rank, 1);
  EXPECT_TRUE(r.best.gamma.empty());
}

TEST(MinRankSearch, AllOnesTwoByTwoMatchesGridOracle) {
  const GramFamily f = build_family(p224());
  // Oracle: every γ on a 10⁻³ grid of [−1, 1], rank by SVD.
  int grid_min = 5;
  std::vector<double> argmins;
  for (int k = -1000; k <= 1000; ++k) {
    const double g = k * 1e-3;
    Eigen::Matrix4d mm = Eigen::Matrix4d::Identity();
    mm(0, 3) = mm(3, 0) = g;
    mm(1, 2) = mm(2, 1) = -g;
    const int r = oracle::svd_rank(mm, 1e-9);
    if (r < grid_min) {
      grid_min = r;
      argmins.clear();
    }
    if (r == grid_min) argmins.push_back(g);
  }
  ASSERT_EQ(grid_min, 2);
  EXPECT_EQ(argmins, (std::vector<double>{-1.0, 1.0}));

  const SearchResult r = min_rank_search(f);
  EXPECT_EQ(r.rank, grid_min);
  EXPECT_NEAR(std::abs(r.best.gamma[0]), 1.0, 1e-6);
  const SOSDecomposition d = factor_gram(f, r.best);
  EXPECT_EQ(d.size(), 2);
  EXPECT_TRUE(verify_sos(p224(), d).passed);
}

TEST(MinRankSearch, RectangleFreeFormsStayAtTheirBound) {
  const SearchResult r = min_rank_search(build_family(to_form(gen_simple(3, 3, 6))), {50, 0});
  EXPECT_EQ(r.rank, 6);
  for (int m = 2; m <= 5; ++m) {
    EXPECT_EQ(min_rank_search(build_family(to_form(gen_simple(m, 2, m + 1))), {30, 1}).rank, m + 1);
  }
}

TEST(MinRankSearch, MonotoneAndDeterministic) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 6; ++trial) {
    const BiquadraticForm p = random_sos(rng, 2 + trial % 2, 3);
    const GramFamily f = build_family(p);
    const SearchResult a = min_rank_search(f, {10, 7});
    const SearchResult b = min_rank_search(f, {10, 7});
    EXPECT_LE(a.rank, a.start_rank);
    EXPECT_EQ(a.rank, b.rank);
    EXPECT_EQ(a.best.gamma, b.best.gamma);
    EXPECT_TRUE(verify_sos(p, factor_gram(f, a.best)).passed);
  }
}

TEST(MinRankSearch, LowRankGramIsFound) {
  // A sum of two generic squares: the search should get well below the full rank.
  std::mt19937_64 rng(7);
  int found_two = 0;
  for (int trial = 0; trial < 5; ++trial) {
    const SOSDecomposition d(2, 3, corpus::psd_of_rank(rng, 6, 6).leftCols(2));
    const BiquadraticForm p = BiquadraticForm::symmetrize(2, 3, d.gram());
    const SearchResult r = min_rank_search(build_family(p), {20, 0});
    EXPECT_LE(r.rank, 5);
    found_two += r.rank == 2;
  }
  EXPECT_GE(found_two, 1);
}

TEST(MinRankSearch, NoPsdMemberIsInconclusive) {
  const BiquadraticForm neg = BiquadraticForm::from_terms(
      2, 2, std::vector<MonomialTerm>{{0, 0, 0, 0, 1.0}, {1, 1, 1, 1, -1.0}});
  EXPECT_THROW(min_rank_search(build_family(neg), {3, 0}), NoPSDPointFound);
  EXPECT_FALSE(find_psd_point(build_family(neg), {3, 0}));
}

TEST(FactorGram, Examples) {
  const Tolerances tol;
  const GramFamily f = build_family(p224());
  const SOSDecomposition d = factor_gram(f, gram_at(f, std::vector<double>{1.0}), tol);
  ASSERT_EQ(d.size(), 2);
  // Same Gram matrix as {x₁y₁ + x₂y₂, x₁y₂ − x₂y₁}.
  Eigen::Matrix2d w1, w2;
  w1 << 1, 0, 0, 1;
  w2 << 0, 1, -1, 0;
  const std::vector<Eigen::MatrixXd> ref{w1, w2};
  EXPECT_LE((d.gram() - SOSDecomposition::from_factors(2, 2, ref).gram()).norm(), 1e-14);

  const GramFamily g = build_family(to_form(gen_simple(3, 2, 4)));
  const SOSDecomposition diag = factor_gram(g, gram_at(g, std::vector<double>(3, 0.0)), tol);
  EXPECT_EQ(diag.size(), 4);
  for (Eigen::Index p = 0; p < diag.size(); ++p) {
    EXPECT_EQ((diag.factor(p).array() != 0.0).count(), 1);  // a single x_i y_j
  }
  EXPECT_THROW(factor_gram(f, gram_at(f, std::vector<double>{2.0}), tol), NotPSD);
}
