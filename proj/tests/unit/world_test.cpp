#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "hfc/world.hpp"
#include "oracles.hpp"

namespace hfc {
namespace {

std::uint32_t mask_of(const HiddenField& f) {
  std::uint32_t mask = 0;
  for (int t = 0; t < f.size(); ++t) {
    if (f.defended(t)) mask |= 1U << t;
  }
  return mask;
}

TEST(SampleField, Extremes) {
  Rng rng(1);
  const auto none = sample_field(rng, 5, 0);
  const auto all = sample_field(rng, 5, 5);
  for (int t = 0; t < 5; ++t) {
    EXPECT_FALSE(none.defended(t));
    EXPECT_TRUE(all.defended(t));
  }
}

TEST(SampleField, SubsetsUniform) {
  Rng rng(2024);
  std::map<std::uint32_t, std::uint64_t> counts;
  const int draws = 1'000'000;
  for (int i = 0; i < draws; ++i) {
    const auto f = sample_field(rng, 5, 2);
    ASSERT_EQ(f.defended_count(), 2);
    ++counts[mask_of(f)];
  }
  ASSERT_EQ(counts.size(), 10u);
  std::vector<std::uint64_t> observed;
  const double sigma = std::sqrt(draws * 0.1 * 0.9);
  for (const auto& [mask, n] : counts) {
    observed.push_back(n);
    EXPECT_LT(std::abs(static_cast<double>(n) - draws * 0.1), 3 * sigma) << mask;
  }
  const std::vector<double> expected(10, 0.1);
  EXPECT_GT(oracle::chi_square_p_value(observed, expected), 0.001);
}

TEST(EnumerateFields, LexicographicAndComplete) {
  const auto fields = enumerate_fields(5, 2);
  ASSERT_EQ(fields.size(), 10u);
  EXPECT_TRUE(fields[0].defended(0) && fields[0].defended(1));
  EXPECT_TRUE(fields[9].defended(3) && fields[9].defended(4));
  EXPECT_EQ(enumerate_fields(4, 0).size(), 1u);
}

TEST(Intel, NoInspectionOrNoVetoIsIdentity) {
  const auto field = HiddenField::from_subset(5, std::vector<int>{0, 1});
  Rng rng(7);
  for (int i = 0; i < 1000; ++i) {
    const Action a = static_cast<Action>(i % 5);
    EXPECT_EQ(intel_perturb(a, field, {0.0, 0.1, 1.0}, rng), a);
    EXPECT_EQ(intel_perturb(a, field, {1.0, 0.0, 0.0}, rng), a);
  }
  const auto k = intel_kernel(2, field, {0.0, 0.3, 0.9});
  EXPECT_EQ(k[2], 1.0);
}

TEST(Intel, StayProbabilityOnDefendedTarget) {
  const auto field = HiddenField::from_subset(5, std::vector<int>{0, 1});
  const IntelParams params{1.0, 0.0, 1.0};
  EXPECT_NEAR(redirect_probability(0, field, params), 0.2, 1e-15);
  const auto k = intel_kernel(0, field, params);
  EXPECT_NEAR(k[0], 0.8, 1e-15);
  for (int t = 1; t < 5; ++t) EXPECT_NEAR(k[static_cast<std::size_t>(t)], 0.05, 1e-15);
  for (int t = 0; t < 5; ++t) {
    EXPECT_NEAR(k[static_cast<std::size_t>(t)],
                oracle::intel_branch_probability(0, t, 0b11, 5, 1.0, 0.0, 1.0), 1e-15);
  }
}

TEST(Intel, HalfFlipMakesRedirectFieldFree) {
  for (double p : {0.1, 0.5, 1.0}) {
    for (double v : {0.3, 1.0}) {
      const IntelParams params{p, 0.5, v};
      for (int k = 0; k <= 5; ++k) {
        const auto fields = enumerate_fields(5, k);
        for (const auto& f : fields) {
          for (Action a = 0; a < 5; ++a) {
            EXPECT_NEAR(redirect_probability(a, f, params), p * v / 10.0, 1e-15);
          }
        }
      }
    }
  }
}

TEST(Intel, KernelMatchesBranchEnumeration) {
  Rng rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    const int m = 2 + static_cast<int>(uniform_index(rng, 6));
    const int k = static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(m + 1)));
    const IntelParams params{uniform01(rng), uniform01(rng), uniform01(rng)};
    const auto field = sample_field(rng, m, k);
    const auto matrix = intel_matrix(field, params);
    for (Action a = 0; a < m; ++a) {
      double row = 0;
      for (Action b = 0; b < m; ++b) {
        const double value = matrix[static_cast<std::size_t>(a * m + b)];
        row += value;
        EXPECT_NEAR(value,
                    oracle::intel_branch_probability(a, b, mask_of(field), m, params.p, params.eps,
                                                     params.v),
                    1e-14);
      }
      EXPECT_NEAR(row, 1.0, 1e-12);
    }
  }
}

TEST(Intel, SamplerMatchesKernel) {
  Rng pick(5);
  for (int trial = 0; trial < 4; ++trial) {
    const IntelParams params{0.3 + 0.7 * uniform01(pick), uniform01(pick), 0.5 + 0.5 * uniform01(pick)};
    const auto field = sample_field(pick, 5, 2);
    const Action proposal = static_cast<Action>(uniform_index(pick, 5));
    const auto kernel = intel_kernel(proposal, field, params);
    std::vector<std::uint64_t> counts(5, 0);
    Rng rng(1000 + static_cast<std::uint64_t>(trial));
    const int draws = 1'000'000;
    for (int i = 0; i < draws; ++i) ++counts[static_cast<std::size_t>(intel_perturb(proposal, field, params, rng))];
    for (std::size_t t = 0; t < 5; ++t) {
      const double sigma = std::sqrt(draws * kernel[t] * (1 - kernel[t]));
      EXPECT_LE(std::abs(static_cast<double>(counts[t]) - draws * kernel[t]), 4 * sigma + 1e-9);
    }
  }
}

TEST(Intel, ConsumesFiveVariatesOnEveryBranch) {
  const auto field = HiddenField::from_subset(5, std::vector<int>{0});
  for (const IntelParams params : {IntelParams{0, 0, 0}, IntelParams{1, 0, 1}, IntelParams{0.5, 0.5, 0.5}}) {
    for (Action a = 0; a < 5; ++a) {
      Rng used(11);
      Rng reference(11);
      intel_perturb(a, field, params, used);
      for (int i = 0; i < 5; ++i) reference();
      EXPECT_EQ(used(), reference());
    }
  }
}

TEST(Intel, FieldIndependentWhenChannelIsBlind) {
  for (const IntelParams params : {IntelParams{0, 0.1, 1}, IntelParams{0.6, 0.1, 0}, IntelParams{0.6, 0.5, 1}}) {
    const auto reference = intel_matrix(HiddenField::from_subset(5, std::vector<int>{}), params);
    for (const auto& f : enumerate_fields(5, 2)) EXPECT_EQ(intel_matrix(f, params), reference);
  }
}

}  // namespace
}  // namespace hfc
