#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "hfc/exact.hpp"
#include "hfc/experiments.hpp"
#include "oracles.hpp"

namespace hfc {
namespace {

ExperimentConfig make(Strategy s, int n, int m, int k, double p, double lambda = 0.0,
                      double q = 0.7) {
  ExperimentConfig c;
  c.strategy = s;
  c.n = n;
  c.m = m;
  c.k = k;
  c.p = p;
  c.lambda = lambda;
  c.q = q;
  c.mode = Mode::exact;
  return c;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double worst = 0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

TEST(ExactJoint, MatchesBranchEnumeration) {
  const Strategy strategies[] = {Strategy::independent, Strategy::shared_latent, Strategy::quantum};
  for (auto s : strategies) {
    for (const auto& [n, m, k] : {std::tuple{2, 3, 1}, std::tuple{3, 3, 2}, std::tuple{3, 4, 0}}) {
      auto c = make(s, n, m, k, 0.4, 0.3, 0.6);
      c.eps = 0.15;
      c.v = 0.8;
      const auto joint = exact_joint(c);
      const auto expected = oracle::brute_force_joint(c);
      EXPECT_LT(max_abs_diff(joint.probs(), expected), 1e-14) << to_string(s) << n << m << k;
    }
  }
}

TEST(ExactJoint, NormalizedNonnegativeSymmetric) {
  for (auto s : {Strategy::independent, Strategy::shared_latent, Strategy::quantum}) {
    const auto c = make(s, 4, 4, 2, 0.3, 0.2, 0.4);
    const auto joint = exact_joint(c);
    double total = 0;
    for (double x : joint.probs()) {
      EXPECT_GE(x, 0.0);
      total += x;
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
    // Swapping agents 0 and 3 maps the law onto itself.
    for (ProfileCode code = 0; code < joint.probs().size(); ++code) {
      auto a = decode_profile(code, 4, 4);
      std::swap(a[0], a[3]);
      EXPECT_NEAR(joint[code], joint[encode_profile(a, 4)], 1e-15);
    }
    const auto marginals = agent_marginals(to_law(joint));
    for (const auto& row : marginals) EXPECT_LT(max_abs_diff(row, marginals[0]), 1e-12);
  }
}

TEST(ExactJoint, ProductLimits) {
  const auto ind = exact_joint(make(Strategy::independent, 3, 5, 2, 0.0));
  for (double x : ind.probs()) EXPECT_NEAR(x, 1.0 / 125, 1e-16);
  const auto copy = exact_joint(make(Strategy::shared_latent, 3, 5, 2, 0.0, 0.0, 1.0));
  for (ProfileCode code = 0; code < 125; ++code) {
    const auto a = decode_profile(code, 3, 5);
    const bool equal = a[0] == a[1] && a[1] == a[2];
    EXPECT_NEAR(copy[code], equal ? 0.2 : 0.0, 1e-16);
  }
}

TEST(ExactJoint, ActionRelabelingSymmetry) {
  // Followers' actions {1..m-1} are exchangeable for the quantum proposal
  // law, and every action is exchangeable for the classical laws at p=0.
  const auto quantum = exact_joint(make(Strategy::quantum, 3, 5, 2, 0.0, 0.25));
  const auto shared = exact_joint(make(Strategy::shared_latent, 3, 5, 2, 0.0, 0.0, 0.4));
  const std::vector<Action> follower_perm{0, 3, 1, 4, 2};
  const std::vector<Action> full_perm{2, 0, 4, 1, 3};
  for (ProfileCode code = 0; code < 125; ++code) {
    auto a = decode_profile(code, 3, 5);
    auto b = a;
    for (auto& x : a) x = follower_perm[static_cast<std::size_t>(x)];
    for (auto& x : b) x = full_perm[static_cast<std::size_t>(x)];
    EXPECT_NEAR(quantum[code], quantum[encode_profile(a, 5)], 1e-16);
    EXPECT_NEAR(shared[code], shared[encode_profile(b, 5)], 1e-16);
  }
}

TEST(ExactJoint, Tractability) {
  EXPECT_TRUE(exact_tractable(7, 5));
  EXPECT_FALSE(exact_tractable(10, 5));
  EXPECT_THROW(exact_joint(make(Strategy::quantum, 10, 5, 2, 0.25)), IntractableError);
  auto bad = make(Strategy::quantum, 3, 5, 2, 0.25);
  bad.p = 2;
  EXPECT_THROW(exact_joint(bad), ConfigError);
}

TEST(ExactJoint, FingerprintTracksConfig) {
  const auto a = make(Strategy::quantum, 3, 5, 2, 0.25);
  auto b = a;
  b.lambda = 0.1;
  EXPECT_EQ(exact_joint(a).fingerprint(), stable_hash64(canonical_serialization(a)));
  EXPECT_NE(exact_joint(a).fingerprint(), exact_joint(b).fingerprint());
}

TEST(ExactMetrics, ClosedFormsAtNoIntel) {
  for (int n : {3, 5}) {
    for (double q : {0.0, 0.35, 0.7, 1.0}) {
      const auto m = exact_metrics(make(Strategy::shared_latent, n, 5, 2, 0.0, 0.0, q));
      EXPECT_NEAR(m.coin, q * q + (1 - q * q) / 5, 1e-12);
    }
    const auto copy = exact_metrics(make(Strategy::shared_latent, n, 5, 2, 0.0, 0.0, 1.0));
    EXPECT_NEAR(copy.tc, (n - 1) * std::log2(5.0), 1e-12);
    EXPECT_NEAR(copy.apmi, std::log2(5.0), 1e-12);
    const auto quantum = exact_metrics(make(Strategy::quantum, n, 5, 2, 0.0));
    EXPECT_NEAR(quantum.coin, (n - 2.0) / (n * 4.0), 1e-12);
    EXPECT_EQ(quantum.global_collision, 0.0);
    const auto ind = exact_metrics(make(Strategy::independent, n, 5, 2, 0.0));
    EXPECT_NEAR(ind.tc, 0.0, 1e-12);
    EXPECT_NEAR(ind.global_collision, std::pow(5.0, 1 - n), 1e-15);
  }
}

TEST(ExactMetrics, IndependentFactorizesWhenChannelIsBlind) {
  for (const auto& [p, eps, v] : {std::tuple{0.0, 0.1, 1.0}, std::tuple{0.3, 0.1, 0.0},
                                  std::tuple{0.3, 0.5, 1.0}, std::tuple{0.9, 0.5, 0.4}}) {
    auto c = make(Strategy::independent, 3, 5, 2, p);
    c.eps = eps;
    c.v = v;
    EXPECT_LT(exact_metrics(c).tc, 1e-12);
  }
  auto c = make(Strategy::independent, 3, 5, 2, 0.3);
  EXPECT_GT(exact_metrics(c).tc, 0.0);
  for (int k : {0, 5}) {
    c.k = k;
    EXPECT_LT(exact_metrics(c).tc, 1e-12) << k;
  }
}

TEST(ExactMetrics, FrozenOperatingPointValues) {
  // From an independent numpy implementation of the same model.
  EXPECT_NEAR(exact_metrics(make(Strategy::quantum, 3, 5, 2, 0.25)).tc, 0.963558017376922, 1e-10);
  EXPECT_NEAR(exact_metrics(make(Strategy::quantum, 5, 5, 2, 0.25)).tc, 1.0251102997471069, 1e-10);
}

TEST(TotalVariation, SampledLawConverges) {
  auto c = make(Strategy::shared_latent, 3, 3, 1, 0.25, 0.0, 0.5);
  c.mode = Mode::monte_carlo;
  const auto joint = exact_joint(c);
  const double tv = total_variation(run_rounds(c, 0, 1'000'000), joint);
  EXPECT_LT(tv, 0.005);
  EXPECT_GT(tv, 0.0);
  EXPECT_THROW(total_variation(JointHistogram(2, 3), joint), std::invalid_argument);
}

}  // namespace
}  // namespace hfc
