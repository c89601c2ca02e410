#include "bu/loss_metrics.hpp"

namespace bu {

namespace {

struct DiceSums {
  double pg = 0.0;
  double p = 0.0;
  double g = 0.0;
};

DiceSums dice_sums(const ProbMap& pred, const ProbMap& target, double eps) {
  require_same_shape(pred, target, "soft dice");
  if (!(eps >= 0.0)) throw Error(ErrorCode::ConstraintViolation, "dice eps must be >= 0");
  DiceSums s;
  const auto p = pred.data();
  const auto g = target.data();
  for (std::size_t i = 0; i < p.size(); ++i) {
    s.pg += p[i] * g[i];
    s.p += p[i];
    s.g += g[i];
  }
  return s;
}

double ratio_or_one(std::uint64_t num, std::uint64_t den, bool& degenerate) {
  if (den == 0) {
    degenerate = true;
    return 1.0;
  }
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

double soft_dice_loss(const ProbMap& pred, const ProbMap& target, double eps) {
  const auto s = dice_sums(pred, target, eps);
  const double den = s.p + s.g + eps;
  if (den == 0.0) return 0.0;
  return 1.0 - (2.0 * s.pg + eps) / den;
}

RealGrid soft_dice_grad(const ProbMap& pred, const ProbMap& target, double eps) {
  const auto s = dice_sums(pred, target, eps);
  const double den = s.p + s.g + eps;
  const double num = 2.0 * s.pg + eps;
  std::vector<double> grad(pred.size(), 0.0);
  if (den > 0.0) {
    const double inv_den2 = 1.0 / (den * den);
    const auto g = target.data();
    for (std::size_t i = 0; i < grad.size(); ++i) {
      grad[i] = -(2.0 * g[i] * den - num) * inv_den2;
    }
  }
  return RealGrid(pred.width(), pred.height(), std::move(grad));
}

double boundary_penalty_loss(const ProbMap& pred, const DistanceMap& sdm, double lambda,
                             double base) {
  require_same_shape(pred, sdm, "boundary penalty");
  if (!(lambda >= 0.0)) throw Error(ErrorCode::ConstraintViolation, "lambda must be >= 0");
  const auto p = pred.data();
  const auto d = sdm.data();
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) sum += d[i] * p[i];
  return base + lambda * (sum / static_cast<double>(p.size()));
}

ConfusionCounts confusion(const ProbMap& pred, const BinaryMask& gt, double threshold) {
  require_same_shape(pred, gt, "evaluate");
  ConfusionCounts c;
  const auto p = pred.data();
  const auto g = gt.data();
  for (std::size_t i = 0; i < p.size(); ++i) {
    const bool predicted = p[i] >= threshold;
    if (predicted) {
      g[i] ? ++c.tp : ++c.fp;
    } else {
      g[i] ? ++c.fn : ++c.tn;
    }
  }
  return c;
}

MetricRecord metrics_from_counts(const ConfusionCounts& counts, std::string image_id) {
  MetricRecord r;
  r.image_id = std::move(image_id);
  r.dsc = ratio_or_one(2 * counts.tp, 2 * counts.tp + counts.fp + counts.fn, r.degenerate);
  r.precision = ratio_or_one(counts.tp, counts.tp + counts.fp, r.degenerate);
  r.recall = ratio_or_one(counts.tp, counts.tp + counts.fn, r.degenerate);
  return r;
}

MetricRecord evaluate_image(const ProbMap& pred, const BinaryMask& gt, double threshold,
                            std::string image_id) {
  return metrics_from_counts(confusion(pred, gt, threshold), std::move(image_id));
}

MetricRecord aggregate(std::span<const MetricRecord> records) {
  if (records.empty()) throw Error(ErrorCode::EmptyList, "cannot aggregate zero records");
  MetricRecord mean;
  mean.image_id = "mean";
  for (const auto& r : records) {
    mean.dsc += r.dsc;
    mean.precision += r.precision;
    mean.recall += r.recall;
    mean.degenerate = mean.degenerate || r.degenerate;
  }
  const auto n = static_cast<double>(records.size());
  mean.dsc /= n;
  mean.precision /= n;
  mean.recall /= n;
  return mean;
}

std::string metrics_csv(std::span<const MetricRecord> records) {
  std::string out = "image_id,dsc,precision,recall,degenerate_flag\n";
  for (const auto& r : records) {
    out += r.image_id + "," + format_real(r.dsc) + "," + format_real(r.precision) + "," +
           format_real(r.recall) + "," + (r.degenerate ? "1" : "0") + "\n";
  }
  return out;
}

}  // namespace bu
