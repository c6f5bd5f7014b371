#include "biquad/gram.hpp"
#include "biquad/meig.hpp"
#include "biquad/simple.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace biquad;

namespace {

using Pairs = std::vector<std::pair<int, int>>;

/// 1-based pairs for readability against the printed series.
Pairs one_based(const SupportSet& s) {
  Pairs out;
  for (const auto& [i, j] : s.pairs) out.emplace_back(i + 1, j + 1);
  return out;
}

/// Oracle: rectangle test by looping over all row and column pairs.
bool has_rectangle(const SupportSet& s) {
  std::set<std::pair<int, int>> in(s.pairs.begin(), s.pairs.end());
  for (int p = 0; p < s.m; ++p)
    for (int q = p + 1; q < s.m; ++q)
      for (int r = 0; r < s.n; ++r)
        for (int t = r + 1; t < s.n; ++t)
          if (in.count({p, r}) && in.count({p, t}) && in.count({q, r}) && in.count({q, t})) return true;
  return false;
}

}  // namespace

// Printed term lists of the series for (m, n) = (2,2), (3,2), (3,3), one row per s.
TEST(GenSimple, ReproducesPrintedSeries) {
  const std::vector<Pairs> p22{{{1, 1}},
                               {{1, 1}, {2, 2}},
                               {{1, 1}, {2, 2}, {1, 2}},
                               {{1, 1}, {2, 2}, {1, 2}, {2, 1}}};
  const std::vector<Pairs> p32{{{1, 1}},
                               {{1, 1}, {2, 2}},
                               {{1, 1}, {2, 2}, {3, 1}},
                               {{1, 1}, {2, 2}, {3, 1}, {1, 2}},
                               {{1, 1}, {2, 2}, {3, 1}, {1, 2}, {2, 1}},
                               {{1, 1}, {2, 2}, {3, 1}, {1, 2}, {2, 1}, {3, 2}}};
  const std::vector<Pairs> p33{{{1, 1}},
                               {{1, 1}, {2, 2}},
                               {{1, 1}, {2, 2}, {3, 3}},
                               {{1, 1}, {2, 2}, {3, 3}, {1, 2}},
                               {{1, 1}, {2, 2}, {3, 3}, {1, 2}, {2, 3}},
                               {{1, 1}, {2, 2}, {3, 3}, {1, 2}, {2, 3}, {3, 1}}};
  for (int s = 1; s <= 4; ++s) EXPECT_EQ(one_based(gen_simple(2, 2, s)), p22[s - 1]) << "s = " << s;
  for (int s = 1; s <= 6; ++s) EXPECT_EQ(one_based(gen_simple(3, 2, s)), p32[s - 1]) << "s = " << s;
  for (int s = 1; s <= 6; ++s) EXPECT_EQ(one_based(gen_simple(3, 3, s)), p33[s - 1]) << "s = " << s;
}

TEST(GenSimple, InvalidArguments) {
  EXPECT_THROW(gen_simple(2, 2, 5), InvalidInput);
  EXPECT_THROW(gen_simple(2, 3, 1), InvalidInput);
  EXPECT_THROW(gen_simple(2, 2, 0), InvalidInput);
  EXPECT_THROW(gen_simple(0, 0, 1), InvalidInput);
}

TEST(GenSimple, DistinctPairsAndFullEnumeration) {
  for (int m = 1; m <= 8; ++m) {
    for (int n = 1; n <= m; ++n) {
      for (int s = 1; s <= m * n; ++s) {
        const SupportSet set = gen_simple(m, n, s);
        ASSERT_EQ(static_cast<int>(set.pairs.size()), s);
        const std::set<std::pair<int, int>> distinct(set.pairs.begin(), set.pairs.end());
        ASSERT_EQ(static_cast<int>(distinct.size()), s) << m << " " << n << " " << s;
        // Each prefix is the previous set plus one pair.
        if (s > 1) ASSERT_EQ(Pairs(set.pairs.begin(), set.pairs.end() - 1), gen_simple(m, n, s - 1).pairs);
      }
    }
  }
}

TEST(ToForm, Examples) {
  EXPECT_TRUE(to_form(SupportSet{2, 2, {}}).terms().empty());
  const BiquadraticForm p = to_form(gen_simple(2, 2, 3));
  const std::vector<MonomialTerm> expect{{0, 0, 0, 0, 1.0}, {0, 0, 1, 1, 1.0}, {1, 1, 1, 1, 1.0}};
  EXPECT_EQ(p.terms(), expect);
  const BiquadraticForm all = to_form(gen_simple(3, 2, 6));
  EXPECT_EQ(all.terms().size(), 6u);
  for (const auto& t : all.terms()) EXPECT_EQ(t.coefficient, 1.0);
  EXPECT_THROW(to_form(SupportSet{2, 2, {{0, 0}, {0, 0}}}), InvalidInput);
  EXPECT_THROW(to_form(SupportSet{2, 2, {{2, 0}}}), InvalidInput);
}

TEST(ToForm, IsNonNegative) {
  for (int s = 1; s <= 9; ++s) {
    EXPECT_GE(psd_sample_check(to_form(gen_simple(3, 3, s)), 2000, s).min_value, 0.0);
  }
}

TEST(SupportOf, RecoversSimpleSupportOnly) {
  const SupportSet s = gen_simple(3, 3, 5);
  const auto back = support_of(to_form(s));
  ASSERT_TRUE(back);
  using PairSet = std::set<std::pair<int, int>>;
  EXPECT_EQ(PairSet(back->pairs.begin(), back->pairs.end()), PairSet(s.pairs.begin(), s.pairs.end()));
  EXPECT_FALSE(support_of(to_form(s).scaled(2.0)));
}

TEST(LowerBound, SeriesInstances) {
  for (int m = 2; m <= 6; ++m) {
    const LowerBoundCertificate c = lower_bound_certificate(gen_simple(m, 2, m + 1));
    EXPECT_TRUE(c.applicable);
    EXPECT_EQ(c.bound, m + 1);
    EXPECT_FALSE(c.rectangle);
  }
  const LowerBoundCertificate c = lower_bound_certificate(gen_simple(3, 3, 6));
  EXPECT_TRUE(c.applicable);
  EXPECT_EQ(c.bound, 6);

  const LowerBoundCertificate r = lower_bound_certificate(gen_simple(2, 2, 4));
  EXPECT_FALSE(r.applicable);
  ASSERT_TRUE(r.rectangle);
  const std::array<std::pair<int, int>, 4> expect{{{0, 0}, {0, 1}, {1, 0}, {1, 1}}};
  EXPECT_EQ(*r.rectangle, expect);
}

TEST(ExactRank, Examples) {
  EXPECT_EQ(std::get<int>(exact_sos_rank_simple(gen_simple(3, 2, 4))), 4);
  EXPECT_EQ(std::get<int>(exact_sos_rank_simple(gen_simple(2, 2, 3))), 3);
  EXPECT_EQ(std::get<UpperBoundOnly>(exact_sos_rank_simple(gen_simple(2, 2, 4))).bound, 4);
  EXPECT_EQ(min_rank_search(build_family(to_form(gen_simple(2, 2, 4)))).rank, 2);
}

// Every subset of [3]×[3]: the certificate matches the rectangle oracle and is
// never contradicted by the rank search.
TEST(LowerBound, ExhaustiveThreeByThree) {
  int applicable = 0;
  for (int mask = 0; mask < (1 << 9); ++mask) {
    SupportSet s{3, 3, {}};
    for (int b = 0; b < 9; ++b)
      if (mask & (1 << b)) s.pairs.emplace_back(b / 3, b % 3);
    const LowerBoundCertificate c = lower_bound_certificate(s);
    ASSERT_EQ(c.applicable, !has_rectangle(s)) << "mask " << mask;
    if (s.pairs.empty()) continue;
    const SearchResult r = min_rank_search(build_family(to_form(s)), {6, static_cast<std::uint64_t>(mask), {}, 100});
    EXPECT_LE(r.rank, static_cast<int>(s.pairs.size()));
    if (c.applicable) {
      ++applicable;
      ASSERT_GE(r.rank, c.bound) << "certificate contradicted for mask " << mask;
    }
  }
  EXPECT_GT(applicable, 100);
}
