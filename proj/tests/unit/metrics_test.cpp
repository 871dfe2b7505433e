#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "hfc/metrics.hpp"
#include "oracles.hpp"

namespace hfc {
namespace {

const double kLog2_5 = std::log2(5.0);

JointLaw law_from_dense(int n, int m, const std::vector<double>& dense) {
  JointLaw law{n, m, {}};
  for (std::size_t c = 0; c < dense.size(); ++c) {
    if (dense[c] > 0) law.cells.emplace_back(c, dense[c]);
  }
  return law;
}

// Closed-form shared-latent joint at p=0, by conditioning on L.
std::vector<double> shared_latent_dense(int n, int m, double q) {
  std::size_t cells = 1;
  for (int i = 0; i < n; ++i) cells *= static_cast<std::size_t>(m);
  std::vector<double> dense(cells, 0.0);
  for (std::size_t c = 0; c < cells; ++c) {
    const auto a = decode_profile(c, n, m);
    for (int l = 0; l < m; ++l) {
      double prob = 1.0 / m;
      for (Action x : a) prob *= q * (x == l) + (1 - q) / m;
      dense[c] += prob;
    }
  }
  return dense;
}

// Quantum at lambda = 0, p = 0: one leader on action 0, followers uniform on the rest.
std::vector<double> quantum_dense(int n, int m) {
  std::size_t cells = 1;
  for (int i = 0; i < n; ++i) cells *= static_cast<std::size_t>(m);
  std::vector<double> dense(cells, 0.0);
  for (std::size_t c = 0; c < cells; ++c) {
    const auto a = decode_profile(c, n, m);
    if (std::count(a.begin(), a.end(), 0) == 1) dense[c] = 1.0 / n / std::pow(m - 1, n - 1);
  }
  return dense;
}

TEST(Profiles, EncodeDecode) {
  const ActionProfile a{2, 0, 4};
  EXPECT_EQ(encode_profile(a, 5), 2u * 25 + 0 * 5 + 4);
  EXPECT_EQ(decode_profile(encode_profile(a, 5), 3, 5), a);
  EXPECT_THROW(encode_profile(ActionProfile{5, 0}, 5), std::out_of_range);
}

TEST(Entropy, Examples) {
  EXPECT_DOUBLE_EQ(entropy(std::vector<double>{0.25, 0.25, 0.25, 0.25}), 2.0);
  EXPECT_EQ(entropy(std::vector<double>{1.0, 0.0}), 0.0);
  EXPECT_DOUBLE_EQ(entropy(std::vector<double>{0.5, 0.25, 0.25}), 1.5);
  EXPECT_THROW(entropy(std::vector<double>{0.5, 0.6, -0.1}), std::invalid_argument);
  EXPECT_THROW(entropy(std::vector<double>{0.5, 0.4}), std::invalid_argument);
}

TEST(PairJoint, Examples) {
  const auto copy = law_from_dense(3, 5, shared_latent_dense(3, 5, 1.0));
  const auto pc = pairwise_joint(copy, 0, 1);
  for (int r = 0; r < 5; ++r) {
    for (int c = 0; c < 5; ++c) EXPECT_NEAR(pc.at(r, c), r == c ? 0.2 : 0.0, 1e-15);
  }
  const auto hole = pairwise_joint(law_from_dense(3, 5, quantum_dense(3, 5)), 0, 2);
  EXPECT_EQ(hole.at(0, 0), 0.0);
  const auto ind = pairwise_joint(law_from_dense(2, 5, std::vector<double>(25, 0.04)), 0, 1);
  for (double x : ind.cells) EXPECT_NEAR(x, 0.04, 1e-15);
  EXPECT_THROW(pairwise_joint(copy, 1, 1), std::invalid_argument);
}

TEST(MutualInformation, Examples) {
  PairMatrix product{5, std::vector<double>(25, 0.04)};
  EXPECT_NEAR(mutual_information(product), 0.0, 1e-12);
  PairMatrix identity{5, std::vector<double>(25, 0.0)};
  for (int t = 0; t < 5; ++t) identity.cells[static_cast<std::size_t>(t * 6)] = 0.2;
  EXPECT_NEAR(mutual_information(identity), kLog2_5, 1e-14);
}

TEST(MutualInformation, SharedLatentPairFromClosedForm) {
  const auto pair = pairwise_joint(law_from_dense(3, 5, shared_latent_dense(3, 5, 0.7)), 0, 1);
  // 25-cell closed form: diagonal and off-diagonal cells.
  const double q = 0.7;
  const double diag = (q * q + 2 * q * (1 - q) / 5 + (1 - q) * (1 - q) / 25) / 5 +
                      4.0 / 5 * ((1 - q) / 5) * ((1 - q) / 5);
  const double off = (1 - diag * 5) / 20;
  double mi = 0;
  for (int r = 0; r < 5; ++r) {
    for (int c = 0; c < 5; ++c) {
      const double x = r == c ? diag : off;
      EXPECT_NEAR(pair.at(r, c), x, 1e-15);
      mi += x * std::log2(x / 0.04);
    }
  }
  EXPECT_NEAR(mutual_information(pair), mi, 1e-12);
}

TEST(Metrics, CopyLimit) {
  const auto law = law_from_dense(3, 5, shared_latent_dense(3, 5, 1.0));
  EXPECT_NEAR(apmi(law), kLog2_5, 1e-12);
  EXPECT_NEAR(total_correlation(law), 2 * kLog2_5, 1e-12);
  EXPECT_NEAR(total_correlation(law), 4.643856189774724, 1e-12);
  EXPECT_NEAR(pairwise_coincidence(law), 1.0, 1e-14);
  EXPECT_NEAR(global_collision(law), 1.0, 1e-14);
}

TEST(Metrics, IndependentUniform) {
  for (int n : {2, 3, 4}) {
    std::size_t cells = 1;
    for (int i = 0; i < n; ++i) cells *= 5;
    const auto law = law_from_dense(n, 5, std::vector<double>(cells, 1.0 / static_cast<double>(cells)));
    EXPECT_NEAR(apmi(law), 0.0, 1e-12);
    EXPECT_NEAR(total_correlation(law), 0.0, 1e-12);
    EXPECT_NEAR(pairwise_coincidence(law), 0.2, 1e-14);
    EXPECT_NEAR(global_collision(law), std::pow(5.0, 1 - n), 1e-14);
    EXPECT_NEAR(product_baseline(law).product_coin, 0.2, 1e-14);
  }
}

TEST(Metrics, SharedLatentCoincidence) {
  for (double q : {0.0, 0.3, 0.7, 1.0}) {
    const auto law = law_from_dense(3, 5, shared_latent_dense(3, 5, q));
    EXPECT_NEAR(pairwise_coincidence(law), q * q + (1 - q * q) / 5, 1e-14);
  }
}

TEST(Metrics, QuantumNoiselessPoint) {
  const auto dense = quantum_dense(3, 5);
  const auto law = law_from_dense(3, 5, dense);
  EXPECT_NEAR(pairwise_coincidence(law), 1.0 / 12, 1e-15);
  EXPECT_EQ(global_collision(law), 0.0);
  const auto base = product_baseline(law);
  EXPECT_NEAR(base.marginal[0], 1.0 / 3, 1e-15);
  for (int t = 1; t < 5; ++t) EXPECT_NEAR(base.marginal[static_cast<std::size_t>(t)], 1.0 / 6, 1e-15);
  EXPECT_NEAR(base.product_coin, 2.0 / 9, 1e-15);
  EXPECT_LT(pairwise_coincidence(law), base.product_coin);

  // Brute force over all 125 profiles with the marginal computed directly.
  const double h_joint = oracle::plogp_sum(dense);
  const std::vector<double> marginal{1.0 / 3, 1.0 / 6, 1.0 / 6, 1.0 / 6, 1.0 / 6};
  const double tc = 3 * oracle::plogp_sum(marginal) - h_joint;
  EXPECT_GT(tc, 0);
  EXPECT_NEAR(total_correlation(law), tc, 1e-12);
  EXPECT_NEAR(total_correlation(law), 1.169925001442313, 1e-12);
  EXPECT_NEAR(apmi(law), 0.25162916738782304, 1e-12);
}

TEST(Metrics, TotalCorrelationBoundsEveryPair) {
  for (double q : {0.2, 0.6}) {
    const auto law = law_from_dense(4, 3, shared_latent_dense(4, 3, q));
    const double tc = total_correlation(law);
    for (int i = 0; i < 4; ++i) {
      for (int j = i + 1; j < 4; ++j) EXPECT_GE(tc + 1e-12, mutual_information(pairwise_joint(law, i, j)));
    }
    EXPECT_NEAR(apmi(law), mutual_information(pairwise_joint(law, 1, 3)), 1e-12);
  }
}

TEST(Metrics, TwoAgentTcEqualsMi) {
  const auto law = law_from_dense(2, 5, shared_latent_dense(2, 5, 0.45));
  EXPECT_NEAR(total_correlation(law), apmi(law), 1e-13);
}

TEST(Metrics, ComputeMetricsMatchesIndividualFunctions) {
  const auto law = law_from_dense(3, 4, shared_latent_dense(3, 4, 0.5));
  const auto all = compute_metrics(law);
  EXPECT_NEAR(all.apmi, apmi(law), 1e-14);
  EXPECT_NEAR(all.tc, total_correlation(law), 1e-14);
  EXPECT_NEAR(all.coin, pairwise_coincidence(law), 1e-14);
  EXPECT_NEAR(all.global_collision, global_collision(law), 1e-14);
  EXPECT_NEAR(all.product_coin, product_baseline(law).product_coin, 1e-14);
  EXPECT_GE(all.apmi, 0.0);
  EXPECT_GE(all.tc, 0.0);
}

TEST(Histogram, EmptyAndMetricsRequireData) {
  JointHistogram h(3, 5);
  EXPECT_TRUE(h.empty());
  EXPECT_EQ(h.total(), 0u);
  EXPECT_THROW(total_correlation(h), std::invalid_argument);
}

TEST(Histogram, MergeIsAssociativeAndCommutative) {
  Rng rng(1);
  auto random_hist = [&] {
    std::vector<ProfileCode> codes(200);
    for (auto& c : codes) c = uniform_index(rng, 27);
    return JointHistogram::from_codes(3, 3, codes);
  };
  const auto a = random_hist();
  const auto b = random_hist();
  const auto c = random_hist();
  auto ab_c = a;
  ab_c.merge(b);
  ab_c.merge(c);
  auto bc = b;
  bc.merge(c);
  auto a_bc = a;
  a_bc.merge(bc);
  auto cba = c;
  cba.merge(b);
  cba.merge(a);
  EXPECT_EQ(ab_c, a_bc);
  EXPECT_EQ(ab_c, cba);
  EXPECT_EQ(ab_c.total(), 600u);
  EXPECT_THROW(ab_c.merge(JointHistogram(2, 3)), std::invalid_argument);
}

TEST(Histogram, AgentRelabelingLeavesMetricsUnchanged) {
  Rng rng(77);
  std::vector<ProfileCode> codes;
  std::vector<ProfileCode> permuted;
  for (int r = 0; r < 5000; ++r) {
    ActionProfile a{static_cast<Action>(uniform_index(rng, 4)), 0, 0};
    a[1] = uniform01(rng) < 0.6 ? a[0] : static_cast<Action>(uniform_index(rng, 4));
    a[2] = static_cast<Action>(uniform_index(rng, 4));
    codes.push_back(encode_profile(a, 4));
    permuted.push_back(encode_profile(ActionProfile{a[2], a[0], a[1]}, 4));
  }
  const auto x = compute_metrics(JointHistogram::from_codes(3, 4, codes));
  const auto y = compute_metrics(JointHistogram::from_codes(3, 4, permuted));
  EXPECT_NEAR(x.apmi, y.apmi, 1e-12);
  EXPECT_NEAR(x.tc, y.tc, 1e-12);
  EXPECT_NEAR(x.coin, y.coin, 1e-12);
  EXPECT_NEAR(x.global_collision, y.global_collision, 1e-12);
  EXPECT_NEAR(x.product_coin, y.product_coin, 1e-12);
}

TEST(Histogram, TextRoundTrip) {
  const auto h = JointHistogram::from_entries(3, 5, {{encode_profile(ActionProfile{0, 2, 1}, 5), 4},
                                                     {encode_profile(ActionProfile{4, 4, 4}, 5), 1},
                                                     {encode_profile(ActionProfile{0, 2, 1}, 5), 2}});
  EXPECT_EQ(h.count(ActionProfile{0, 2, 1}), 6u);
  std::stringstream out;
  write_histogram(out, h);
  const std::string text = out.str();
  EXPECT_EQ(text.rfind(kHistogramSchema, 0), 0u);
  EXPECT_NE(text.find("profile,count\n1-3-2,6\n5-5-5,1\n"), std::string::npos);
  EXPECT_EQ(read_histogram(out, 3, 5), h);
}

}  // namespace
}  // namespace hfc
