#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "bu/loss_metrics.hpp"
#include "oracles.hpp"

namespace bu {
namespace {

ProbMap random_prob(std::mt19937_64& rng, int w, int h, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(static_cast<std::size_t>(w) * h);
  for (auto& x : v) x = u(rng);
  return ProbMap(w, h, std::move(v));
}

TEST(SoftDice, ConstantPredictionExample) {
  const auto pred = ProbMap::filled(2, 2, 0.5);
  const ProbMap target(2, 2, {1, 0, 0, 0});
  // 1 - 2*0.5 / (2 + 1) = 2/3
  EXPECT_NEAR(soft_dice_loss(pred, target, 0.0), 2.0 / 3.0, 1e-12);
}

TEST(SoftDice, DisjointSupportsWithSmoothing) {
  const ProbMap pred(2, 1, {1, 0});
  const ProbMap target(2, 1, {0, 1});
  // 1 - 1 / (1 + 1 + 1) = 2/3
  EXPECT_NEAR(soft_dice_loss(pred, target, 1.0), 2.0 / 3.0, 1e-12);
}

TEST(SoftDice, PerfectMatchAndEmptyMaps) {
  const ProbMap g(3, 1, {1, 0, 1});
  EXPECT_NEAR(soft_dice_loss(g, g, 0.0), 0.0, 1e-15);
  EXPECT_EQ(soft_dice_loss(ProbMap::filled(2, 2, 0.0), ProbMap::filled(2, 2, 0.0), 0.0), 0.0);
  EXPECT_THROW(soft_dice_loss(g, g, -1.0), Error);
  EXPECT_THROW(soft_dice_loss(g, ProbMap::filled(2, 1, 0.0)), Error);
}

TEST(SoftDice, SymmetricAndBounded) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 500; ++trial) {
    const auto p = random_prob(rng, 6, 5, 0.0, 1.0);
    const auto g = random_prob(rng, 6, 5, 0.0, 1.0);
    const double l = soft_dice_loss(p, g);
    ASSERT_DOUBLE_EQ(l, soft_dice_loss(g, p));
    ASSERT_GE(l, 0.0);
    ASSERT_LE(l, 1.0);
  }
}

TEST(SoftDice, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 100; ++trial) {
    const auto p = random_prob(rng, 8, 8, 0.01, 0.99);
    const auto g = trial % 2 ? random_prob(rng, 8, 8, 0.0, 1.0)
                             : mask_to_prob(oracle::random_mask(rng, 8, 8, 0.4));
    const auto grad = soft_dice_grad(p, g);
    const auto loss = [&](const std::vector<double>& x) {
      return soft_dice_loss(ProbMap(8, 8, x), g);
    };
    for (std::size_t i = 0; i < p.size(); ++i) {
      ASSERT_NEAR(grad[i], oracle::central_difference(loss, p.values(), i, 1e-5), 1e-6);
    }
  }
}

TEST(SoftDice, ZeroTargetGradientIsUniformPositive) {
  const ProbMap p(3, 1, {0.2, 0.5, 0.7});
  const auto g = ProbMap::filled(3, 1, 0.0);
  const double eps = 1e-6;
  const double d = 1.4 + eps;
  const auto grad = soft_dice_grad(p, g, eps);
  for (double v : grad.values()) {
    EXPECT_NEAR(v, eps / (d * d), 1e-18);
    EXPECT_GT(v, 0.0);
  }
}

TEST(SoftDice, HardTargetIsStationaryOverTheBox) {
  // With p = g binary, the box-constrained optimum: every step that stays in
  // [0,1] (raise where g=1 is impossible, lower where g=0 is impossible) is
  // blocked, so the gradient must point outward at each pixel.
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    const auto m = oracle::random_mask(rng, 7, 7, 0.5);
    if (m.count() == 0) continue;
    const auto g = mask_to_prob(m);
    const auto grad = soft_dice_grad(g, g, 0.0);
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (m[i]) ASSERT_LE(grad[i], 1e-15);
      else ASSERT_GE(grad[i], -1e-15);
    }
  }
}

TEST(BoundaryPenalty, Cases) {
  const DistanceMap sdm(5, 1, {1, 0, 0, 0, 1});
  EXPECT_EQ(boundary_penalty_loss(ProbMap::filled(5, 1, 0.7), sdm, 0.0, 0.25), 0.25);
  EXPECT_EQ(boundary_penalty_loss(ProbMap::filled(5, 1, 0.0), sdm, 3.0, 0.25), 0.25);
  EXPECT_NEAR(boundary_penalty_loss(ProbMap::filled(5, 1, 1.0), sdm, 0.5, 0.0), 0.5 * 0.4, 1e-15);
}

TEST(Metrics, ConfusionExample) {
  const ProbMap pred(4, 1, {0.9, 0.6, 0.2, 0.5});
  const BinaryMask gt(4, 1, {1, 0, 1, 1});
  const auto c = confusion(pred, gt);
  EXPECT_EQ(c.tp, 2u);
  EXPECT_EQ(c.fp, 1u);
  EXPECT_EQ(c.fn, 1u);
  EXPECT_EQ(c.tn, 0u);
  const auto r = evaluate_image(pred, gt, 0.5, "x");
  EXPECT_NEAR(r.dsc, 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(r.precision, 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(r.recall, 2.0 / 3.0, 1e-15);
  EXPECT_FALSE(r.degenerate);
  EXPECT_EQ(r.image_id, "x");
}

TEST(Metrics, IdentityAndEmptyCases) {
  std::mt19937_64 rng(43);
  const auto m = oracle::random_mask(rng, 9, 9, 0.3);
  const auto r = evaluate_image(mask_to_prob(m), m);
  EXPECT_EQ(r.dsc, 1.0);
  EXPECT_EQ(r.precision, 1.0);
  EXPECT_EQ(r.recall, 1.0);

  const auto empty = BinaryMask::filled(3, 3, false);
  const auto e = evaluate_image(mask_to_prob(empty), empty);
  EXPECT_EQ(e.dsc, 1.0);
  EXPECT_EQ(e.precision, 1.0);
  EXPECT_EQ(e.recall, 1.0);
  EXPECT_TRUE(e.degenerate);

  // Empty prediction against a non-empty mask: precision is undefined.
  const auto p = evaluate_image(ProbMap::filled(3, 3, 0.0), BinaryMask::filled(3, 3, true));
  EXPECT_EQ(p.dsc, 0.0);
  EXPECT_EQ(p.recall, 0.0);
  EXPECT_EQ(p.precision, 1.0);
  EXPECT_TRUE(p.degenerate);
}

TEST(Metrics, DiceIsHarmonicMeanOfPrecisionAndRecall) {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 500; ++trial) {
    const auto gt = oracle::random_mask(rng, 10, 10, 0.3);
    const auto pred = random_prob(rng, 10, 10, 0.0, 1.0);
    const auto r = evaluate_image(pred, gt);
    if (r.degenerate || r.precision + r.recall == 0.0) continue;
    ASSERT_NEAR(r.dsc, 2 * r.precision * r.recall / (r.precision + r.recall), 1e-12);
  }
}

TEST(Metrics, ThresholdOnlyMattersThroughBinarization) {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 200; ++trial) {
    const auto gt = oracle::random_mask(rng, 8, 8, 0.4);
    const auto pred = random_prob(rng, 8, 8, 0.0, 1.0);
    std::vector<double> hard(pred.size());
    for (std::size_t i = 0; i < hard.size(); ++i) hard[i] = pred[i] >= 0.5 ? 1.0 : 0.0;
    const auto a = evaluate_image(pred, gt);
    const auto b = evaluate_image(ProbMap(8, 8, hard), gt);
    ASSERT_EQ(a.dsc, b.dsc);
    ASSERT_EQ(a.precision, b.precision);
    ASSERT_EQ(a.recall, b.recall);
  }
}

TEST(Aggregate, MeansAndFlags) {
  MetricRecord a{"a", 0.4, 0.4, 0.4, false};
  MetricRecord b{"b", 0.6, 0.8, 1.0, true};
  const std::vector<MetricRecord> one{a};
  const auto single = aggregate(one);
  EXPECT_EQ(single.dsc, 0.4);
  EXPECT_EQ(single.image_id, "mean");
  EXPECT_FALSE(single.degenerate);

  const std::vector<MetricRecord> two{a, b};
  const auto mean = aggregate(two);
  EXPECT_NEAR(mean.dsc, 0.5, 1e-15);
  EXPECT_NEAR(mean.precision, 0.6, 1e-15);
  EXPECT_NEAR(mean.recall, 0.7, 1e-15);
  EXPECT_TRUE(mean.degenerate);

  EXPECT_THROW(aggregate(std::vector<MetricRecord>{}), Error);
}

TEST(Aggregate, PermutationInvariant) {
  std::mt19937_64 rng(59);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<MetricRecord> records(20);
  for (auto& r : records) r = {"r", u(rng), u(rng), u(rng), false};
  const auto base = aggregate(records);
  for (int trial = 0; trial < 20; ++trial) {
    std::shuffle(records.begin(), records.end(), rng);
    const auto m = aggregate(records);
    ASSERT_NEAR(m.dsc, base.dsc, 1e-12);
    ASSERT_NEAR(m.precision, base.precision, 1e-12);
    ASSERT_NEAR(m.recall, base.recall, 1e-12);
  }
}

TEST(MetricsCsv, Format) {
  const std::vector<MetricRecord> records{{"0001", 0.5, 1.0, 0.25, false}, {"mean", 1.0, 1.0, 1.0, true}};
  EXPECT_EQ(metrics_csv(records),
            "image_id,dsc,precision,recall,degenerate_flag\n"
            "0001,0.5,1,0.25,0\n"
            "mean,1,1,1,1\n");
}

}  // namespace
}  // namespace bu
