#include "bu/trainer.hpp"

#include <algorithm>
#include <cmath>

namespace bu {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

int clamp_index(int i, int n) { return std::clamp(i, 0, n - 1); }

}  // namespace

FeatureField extract_features(const GrayImage& image) {
  const int w = image.width();
  const int h = image.height();
  const auto n = image.size();
  FeatureField field{w, h, {}};
  field.planes[0].assign(n, 1.0);
  field.planes[1].assign(image.data().begin(), image.data().end());
  field.planes[2].resize(n);
  field.planes[3].resize(n);

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double sum = 0.0;
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) sum += image(clamp_index(x + dx, w), clamp_index(y + dy, h));
      const double gx = (image(clamp_index(x + 1, w), y) - image(clamp_index(x - 1, w), y)) / 2.0;
      const double gy = (image(x, clamp_index(y + 1, h)) - image(x, clamp_index(y - 1, h))) / 2.0;
      const auto i = static_cast<std::size_t>(y) * w + x;
      field.planes[2][i] = sum / 9.0;
      field.planes[3][i] = std::sqrt(gx * gx + gy * gy);
    }
  }
  return field;
}

double logistic(double z) noexcept {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

ProbMap predict(const PixelModel& model, const FeatureField& features) {
  std::vector<double> out(features.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    double z = 0.0;
    for (std::size_t k = 0; k < kFeatureCount; ++k) z += model.weights[k] * features.planes[k][i];
    out[i] = logistic(z);
  }
  return ProbMap(features.width, features.height, std::move(out));
}

ProbMap predict(const PixelModel& model, const GrayImage& image) {
  return predict(model, extract_features(image));
}

std::string describe(const TransformSpec& transform) {
  return std::visit(
      overloaded{
          [](const NoTransform&) { return std::string("none"); },
          [](const SoftLabelParams& p) {
            return "sl_" + format_real(p.p_fg) + "_" + format_real(p.p_bg);
          },
          [](const BUParams& p) {
            return "bu_" + format_real(p.alpha) + "_" + format_real(p.beta) + "_n" +
                   std::to_string(p.n_iter) +
                   (p.mode == BUMode::Balanced ? "_balanced" : "_unbalanced");
          },
          [](const DptParams& p) { return "dpt_" + format_real(p.lambda); },
      },
      transform);
}

void TrainConfig::validate() const {
  if (epochs < 0) throw Error(ErrorCode::ConstraintViolation, "epochs must be >= 0");
  if (!(learning_rate > 0.0)) throw Error(ErrorCode::ConstraintViolation, "lr must be > 0");
  if (!(eps >= 0.0)) throw Error(ErrorCode::ConstraintViolation, "eps must be >= 0");
  std::visit(overloaded{
                 [](const NoTransform&) {},
                 [](const SoftLabelParams& p) {
                   // Delegates range checks to soft_label on a 1x1 probe.
                   soft_label(BinaryMask::filled(1, 1, true), p.p_fg, p.p_bg);
                 },
                 [](const BUParams& p) { p.validate(); },
                 [](const DptParams& p) {
                   if (!(p.lambda >= 0.0)) {
                     throw Error(ErrorCode::ConstraintViolation, "lambda must be >= 0");
                   }
                 },
             },
             transform);
}

TrainingExample make_example(const GrayImage& image, const BinaryMask& mask,
                             const TransformSpec& transform) {
  require_same_shape(image, mask, "training example");
  auto features = extract_features(image);
  return std::visit(
      overloaded{
          [&](const NoTransform&) { return TrainingExample{std::move(features), mask_to_prob(mask), {}}; },
          [&](const SoftLabelParams& p) {
            return TrainingExample{std::move(features), soft_label(mask, p.p_fg, p.p_bg), {}};
          },
          [&](const BUParams& p) {
            return TrainingExample{std::move(features), boundary_uncertainty(mask, p), {}};
          },
          [&](const DptParams&) {
            const auto fg = mask.count();
            if (fg == 0 || fg == mask.size()) {
              return TrainingExample{
                  std::move(features), mask_to_prob(mask),
                  DistanceMap(mask.width(), mask.height(), std::vector<double>(mask.size(), 0.0))};
            }
            auto dpt = dpt_transform(mask);
            return TrainingExample{std::move(features), std::move(dpt.target), std::move(dpt.sdm)};
          },
      },
      transform);
}

Objective evaluate_objective(const PixelModel& model, std::span<const TrainingExample> examples,
                             const TrainConfig& config) {
  if (examples.empty()) throw Error(ErrorCode::EmptyDataset, "no training examples");
  const double lambda =
      std::holds_alternative<DptParams>(config.transform) ? std::get<DptParams>(config.transform).lambda : 0.0;

  Objective total;
  for (const auto& ex : examples) {
    const auto pred = predict(model, ex.features);
    double loss = soft_dice_loss(pred, ex.target, config.eps);
    auto dloss = soft_dice_grad(pred, ex.target, config.eps).values();
    if (ex.sdm) {
      loss = boundary_penalty_loss(pred, *ex.sdm, lambda, loss);
      const double scale = lambda / static_cast<double>(pred.size());
      const auto d = ex.sdm->data();
      for (std::size_t i = 0; i < dloss.size(); ++i) dloss[i] += scale * d[i];
    }
    total.loss += loss;

    const auto p = pred.data();
    for (std::size_t i = 0; i < dloss.size(); ++i) {
      const double dz = dloss[i] * p[i] * (1.0 - p[i]);
      for (std::size_t k = 0; k < kFeatureCount; ++k) total.gradient[k] += dz * ex.features.planes[k][i];
    }
  }
  const auto n = static_cast<double>(examples.size());
  total.loss /= n;
  for (auto& g : total.gradient) g /= n;
  return total;
}

TrainResult train(std::span<const TrainingExample> examples, const TrainConfig& config) {
  config.validate();
  if (examples.empty()) throw Error(ErrorCode::EmptyDataset, "no training examples");
  TrainResult result;
  result.history.reserve(static_cast<std::size_t>(config.epochs));
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const auto objective = evaluate_objective(result.model, examples, config);
    result.history.push_back(objective.loss);
    for (std::size_t k = 0; k < kFeatureCount; ++k) {
      result.model.weights[k] -= config.learning_rate * objective.gradient[k];
    }
  }
  return result;
}

TrainResult train(const Dataset& dataset, const TrainConfig& config) {
  config.validate();
  if (dataset.items.empty()) throw Error(ErrorCode::EmptyDataset, "dataset has no items");
  std::vector<TrainingExample> examples;
  examples.reserve(dataset.items.size());
  for (const auto& item : dataset.items) {
    examples.push_back(make_example(item.image, item.mask, config.transform));
  }
  return train(examples, config);
}

std::string to_string(Scenario scenario) {
  switch (scenario) {
    case Scenario::Clean: return "clean";
    case Scenario::Under: return "under";
    case Scenario::Over: return "over";
  }
  return "unknown";
}

std::vector<ExperimentRow> run_experiment(Scenario scenario, const TransformSpec& transform,
                                          std::span<const std::uint64_t> seeds,
                                          const ExperimentOptions& options) {
  if (seeds.empty()) throw Error(ErrorCode::EmptyList, "experiment needs at least one seed");
  if (options.train_count < 1 || options.train_count >= options.dataset_size) {
    throw Error(ErrorCode::ConfigInvalid, "train_count must leave both splits nonempty");
  }
  auto train_config = options.train;
  train_config.transform = transform;
  train_config.validate();

  const auto label = describe(transform);
  std::vector<ExperimentRow> rows;
  std::vector<MetricRecord> per_seed;
  for (const auto seed : seeds) {
    SynthConfig synth;
    synth.seed = seed;
    synth.count = options.dataset_size;
    synth.width = options.image_size;
    synth.height = options.image_size;
    const auto dataset = generate(synth);

    std::vector<TrainingExample> examples;
    for (int i = 0; i < options.train_count; ++i) {
      const auto& item = dataset.items[static_cast<std::size_t>(i)];
      auto mask = item.mask;
      if (scenario == Scenario::Under) {
        mask = corrupt(mask, Corruption::Under, options.corrupt_k, options.corrupt_se);
      } else if (scenario == Scenario::Over) {
        mask = corrupt(mask, Corruption::Over, options.corrupt_k, options.corrupt_se);
      }
      examples.push_back(make_example(item.image, mask, transform));
    }
    train_config.seed = seed;
    const auto trained = train(examples, train_config);

    std::vector<MetricRecord> test;
    for (std::size_t i = static_cast<std::size_t>(options.train_count); i < dataset.items.size(); ++i) {
      const auto& item = dataset.items[i];
      test.push_back(evaluate_image(predict(trained.model, item.image), item.mask,
                                    kDefaultThreshold, item.id));
    }
    auto summary = aggregate(test);
    summary.image_id = std::to_string(seed);
    per_seed.push_back(summary);
    rows.push_back({scenario, label, std::to_string(seed), summary});
  }
  rows.push_back({scenario, label, "mean", aggregate(per_seed)});
  return rows;
}

std::string experiment_csv(std::span<const ExperimentRow> rows) {
  std::string out = "scenario,transform,seed,dsc,precision,recall\n";
  for (const auto& r : rows) {
    out += to_string(r.scenario) + "," + r.transform + "," + r.seed + "," +
           format_real(r.metrics.dsc) + "," + format_real(r.metrics.precision) + "," +
           format_real(r.metrics.recall) + "\n";
  }
  return out;
}

}  // namespace bu
