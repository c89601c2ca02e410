#pragma once

// Desk-scale segmentation model: a logistic classifier over four per-pixel
// features, trained by full-batch gradient descent on the soft Dice loss of a
// transformed target.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "bu/loss_metrics.hpp"
#include "bu/raster.hpp"
#include "bu/synthesis.hpp"
#include "bu/transforms.hpp"

namespace bu {

inline constexpr std::size_t kFeatureCount = 4;
using Weights = std::array<double, kFeatureCount>;

/// Feature order: bias (1), intensity, 3x3 box mean, central-difference
/// gradient magnitude. Box mean and gradient use edge-replicate padding.
struct FeatureField {
  int width;
  int height;
  std::array<std::vector<double>, kFeatureCount> planes;

  std::size_t size() const noexcept { return planes[0].size(); }
};

FeatureField extract_features(const GrayImage& image);

struct PixelModel {
  Weights weights{};
};

double logistic(double z) noexcept;

ProbMap predict(const PixelModel& model, const FeatureField& features);
ProbMap predict(const PixelModel& model, const GrayImage& image);

struct NoTransform {};
struct SoftLabelParams {
  double p_fg = 0.9;
  double p_bg = 0.1;
};
struct DptParams {
  double lambda = 0.01;
};
using TransformSpec = std::variant<NoTransform, SoftLabelParams, BUParams, DptParams>;

/// Short label used in CSV output, e.g. "none", "sl_0.9_0.1", "bu_1_1_n2_unbalanced".
std::string describe(const TransformSpec& transform);

struct TrainConfig {
  int epochs = 300;
  double learning_rate = 20.0;
  double eps = kDefaultDiceEps;
  TransformSpec transform = NoTransform{};
  // Recorded with the model; training itself draws no random numbers.
  std::uint64_t seed = 0;

  void validate() const;
};

/// Precomputed features plus the transformed target for one image.
struct TrainingExample {
  FeatureField features;
  ProbMap target;
  // Present only for DPT; all zeros when the mask has a single class.
  std::optional<DistanceMap> sdm;
};

TrainingExample make_example(const GrayImage& image, const BinaryMask& mask,
                             const TransformSpec& transform);

struct Objective {
  double loss = 0.0;
  Weights gradient{};
};

/// Mean over examples of soft Dice (+ lambda * mean(sdm * p) for DPT) and its
/// gradient with respect to the weights.
Objective evaluate_objective(const PixelModel& model, std::span<const TrainingExample> examples,
                             const TrainConfig& config);

struct TrainResult {
  PixelModel model;
  // Objective value at the start of each epoch.
  std::vector<double> history;
};

TrainResult train(std::span<const TrainingExample> examples, const TrainConfig& config);
TrainResult train(const Dataset& dataset, const TrainConfig& config);

enum class Scenario { Clean, Under, Over };
std::string to_string(Scenario scenario);

struct ExperimentOptions {
  int dataset_size = 50;
  int image_size = 64;
  // First train_count items (by index) train, the rest test.
  int train_count = 40;
  int corrupt_k = 2;
  StructuringElement corrupt_se = StructuringElement::square(3);
  TrainConfig train;
};

struct ExperimentRow {
  Scenario scenario;
  std::string transform;
  std::string seed;  // decimal seed, or "mean"
  MetricRecord metrics;
};

/// One row per seed followed by a "mean" row. Training labels are corrupted
/// per scenario; evaluation always uses the uncorrupted test masks.
std::vector<ExperimentRow> run_experiment(Scenario scenario, const TransformSpec& transform,
                                          std::span<const std::uint64_t> seeds,
                                          const ExperimentOptions& options = {});

/// "scenario,transform,seed,dsc,precision,recall" plus one line per row.
std::string experiment_csv(std::span<const ExperimentRow> rows);

}  // namespace bu
