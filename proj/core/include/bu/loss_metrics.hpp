#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bu/raster.hpp"

namespace bu {

inline constexpr double kDefaultDiceEps = 1e-6;

/// L = 1 - (2 sum(p g) + eps) / (sum(p) + sum(g) + eps).
/// eps must be >= 0; with eps == 0 and both maps empty the loss is 0.
double soft_dice_loss(const ProbMap& pred, const ProbMap& target, double eps = kDefaultDiceEps);

/// dL/dp_i = -(2 g_i (sum p + sum g + eps) - (2 sum(p g) + eps)) / (sum p + sum g + eps)^2
RealGrid soft_dice_grad(const ProbMap& pred, const ProbMap& target, double eps = kDefaultDiceEps);

/// base + lambda * mean(sdm * pred). `base` is the Dice loss computed by the caller.
double boundary_penalty_loss(const ProbMap& pred, const DistanceMap& sdm, double lambda,
                             double base);

struct ConfusionCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;

  std::uint64_t total() const noexcept { return tp + fp + fn + tn; }
};

inline constexpr double kDefaultThreshold = 0.5;

/// Binarizes `pred` with p >= threshold -> 1 and counts against `gt`.
ConfusionCounts confusion(const ProbMap& pred, const BinaryMask& gt,
                          double threshold = kDefaultThreshold);

struct MetricRecord {
  std::string image_id;
  double dsc = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  // Set when at least one metric had a zero denominator and was defined as 1.
  bool degenerate = false;
};

/// DSC = 2tp/(2tp+fp+fn), precision = tp/(tp+fp), recall = tp/(tp+fn). A
/// metric whose denominator is zero is 1.0 and flags the record degenerate.
MetricRecord metrics_from_counts(const ConfusionCounts& counts, std::string image_id = {});

MetricRecord evaluate_image(const ProbMap& pred, const BinaryMask& gt,
                            double threshold = kDefaultThreshold, std::string image_id = {});

/// Unweighted mean over records, summed in index order. id is "mean"; the
/// degenerate flag is set if any input record was degenerate.
MetricRecord aggregate(std::span<const MetricRecord> records);

/// "image_id,dsc,precision,recall,degenerate_flag" plus one row per record.
std::string metrics_csv(std::span<const MetricRecord> records);

}  // namespace bu
