#include "commands.hpp"

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "bench.hpp"
#include "bu/loss_metrics.hpp"
#include "bu/synthesis.hpp"
#include "bu/trainer.hpp"
#include "bu/transforms.hpp"

namespace fs = std::filesystem;

namespace bu::cli {

namespace {

[[noreturn]] void usage_error(const std::string& what) {
  throw Error(ErrorCode::ConstraintViolation, what);
}

// Transform selection shared by `transform`, `train` and `experiment`. Flags
// that belong to another method are rejected instead of silently ignored.
struct TransformFlags {
  std::string method;
  double pfg = 0.9;
  double pbg = 0.1;
  double alpha = 0.9;
  double beta = 0.1;
  int iters = 1;
  std::string se = "square3";
  std::string mode = "balanced";
  double lambda = 0.01;

  std::string method_flag;
  std::vector<CLI::Option*> sl_opts;
  std::vector<CLI::Option*> bu_opts;
  std::vector<CLI::Option*> dpt_opts;

  void add(CLI::App& app, const std::string& flag, bool allow_none, bool with_lambda) {
    method_flag = flag;
    std::vector<std::string> methods{"sl", "bu", "dpt"};
    if (allow_none) methods.insert(methods.begin(), "none");
    auto* opt = app.add_option(flag, method, "Ground-truth transform")
                    ->check(CLI::IsMember(methods));
    if (allow_none) {
      method = "none";
      opt->capture_default_str();
    } else {
      opt->required();
    }
    sl_opts = {app.add_option("--pfg", pfg, "sl: foreground probability")->capture_default_str(),
               app.add_option("--pbg", pbg, "sl: background probability")->capture_default_str()};
    bu_opts = {
        app.add_option("--alpha", alpha, "bu: interior band value")->capture_default_str(),
        app.add_option("--beta", beta, "bu: exterior band value")->capture_default_str(),
        app.add_option("--iters", iters, "bu: morphological iterations")->capture_default_str(),
        app.add_option("--se", se, "bu: structuring element")
            ->check(CLI::IsMember({"square3", "cross3", "square5"}))
            ->capture_default_str(),
        app.add_option("--mode", mode, "bu: constraint set")
            ->check(CLI::IsMember({"balanced", "unbalanced"}))
            ->capture_default_str()};
    if (with_lambda) {
      dpt_opts = {app.add_option("--lambda", lambda, "dpt: boundary penalty weight")
                      ->capture_default_str()};
    }
  }

  void reject_foreign(const std::vector<CLI::Option*>& opts, const std::string& owner) const {
    if (method == owner) return;
    for (const auto* o : opts) {
      if (o->count() > 0) {
        usage_error(o->get_name() + " only applies to " + method_flag + " " + owner);
      }
    }
  }

  TransformSpec build() const {
    reject_foreign(sl_opts, "sl");
    reject_foreign(bu_opts, "bu");
    reject_foreign(dpt_opts, "dpt");
    if (method == "sl") {
      soft_label(BinaryMask::filled(1, 1, false), pfg, pbg);  // range/order check
      return SoftLabelParams{pfg, pbg};
    }
    if (method == "bu") {
      BUParams p;
      p.alpha = alpha;
      p.beta = beta;
      p.n_iter = iters;
      p.se = StructuringElement::parse(se);
      p.mode = mode == "balanced" ? BUMode::Balanced : BUMode::Unbalanced;
      p.validate();
      return p;
    }
    if (method == "dpt") {
      if (!(lambda >= 0.0)) usage_error("lambda must be >= 0");
      return DptParams{lambda};
    }
    return NoTransform{};
  }
};

Scenario parse_scenario(const std::string& name) {
  if (name == "under") return Scenario::Under;
  if (name == "over") return Scenario::Over;
  return Scenario::Clean;
}

BinaryMask corrupt_for(Scenario scenario, const BinaryMask& mask, int k) {
  if (scenario == Scenario::Clean) return mask;
  if (k < 1) usage_error("--corrupt-k must be >= 1");
  return corrupt(mask, scenario == Scenario::Under ? Corruption::Under : Corruption::Over, k,
                 StructuringElement::square(3));
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    write_file_atomic(path, text);
  }
}

// ---- transform --------------------------------------------------------------

struct TransformCommand {
  TransformFlags flags;
  std::string in;
  std::string out;

  void add(CLI::App& app) {
    flags.add(app, "--method", false, false);
    app.add_option("--in", in, "Input mask (binary PGM)")->required();
    app.add_option("--out", out, "Output target (PFM)")->required();
  }

  int run() const {
    const auto spec = flags.build();
    const auto mask = read_mask_pgm(read_file(in));
    if (std::holds_alternative<SoftLabelParams>(spec)) {
      const auto& p = std::get<SoftLabelParams>(spec);
      write_file_atomic(out, write_pfm(soft_label(mask, p.p_fg, p.p_bg)));
    } else if (std::holds_alternative<BUParams>(spec)) {
      write_file_atomic(out, write_pfm(boundary_uncertainty(mask, std::get<BUParams>(spec))));
    } else {
      const auto dpt = dpt_transform(mask);
      // stored = (sdm - min) / (max - min); a constant map is stored as zeros.
      const auto [lo_it, hi_it] = std::minmax_element(dpt.sdm.data().begin(), dpt.sdm.data().end());
      const double lo = *lo_it;
      const double range = *hi_it - lo;
      std::vector<double> stored(dpt.sdm.size());
      for (std::size_t i = 0; i < stored.size(); ++i) {
        stored[i] = range > 0.0 ? std::clamp((dpt.sdm[i] - lo) / range, 0.0, 1.0) : 0.0;
      }
      nlohmann::ordered_json sidecar;
      sidecar["encoding"] = "sdm = stored * scale + offset";
      sidecar["offset"] = lo;
      sidecar["scale"] = range;
      sidecar["min"] = lo;
      sidecar["max"] = *hi_it;
      sidecar["sign_convention"] = "negative inside the target, positive outside, zero on the boundary set";

      write_file_atomic(out, write_pfm(dpt.target));
      write_file_atomic(out + ".sdm.pfm",
                        write_pfm(ProbMap(mask.width(), mask.height(), std::move(stored))));
      write_file_atomic(out + ".sdm.json", sidecar.dump(2) + "\n");
    }
    return kExitOk;
  }
};

// ---- synth ------------------------------------------------------------------

struct SynthCommand {
  SynthConfig config;
  int size = 64;
  std::string out;

  void add(CLI::App& app) {
    app.add_option("--seed", config.seed, "RNG seed")->capture_default_str();
    app.add_option("--count", config.count, "Number of image/mask pairs")->capture_default_str();
    app.add_option("--size", size, "Image side length in pixels")->capture_default_str();
    app.add_option("--out", out, "Output directory")->required();
  }

  int run() {
    config.width = size;
    config.height = size;
    write_dataset(generate(config), out);
    return kExitOk;
  }
};

// ---- train ------------------------------------------------------------------

struct TrainCommand {
  TransformFlags flags;
  std::string manifest;
  std::string out;
  std::string pred_dir;
  std::string scenario = "clean";
  int corrupt_k = 2;
  TrainConfig config;

  void add(CLI::App& app) {
    app.add_option("--manifest", manifest, "Dataset manifest.csv")->required();
    flags.add(app, "--transform", true, true);
    app.add_option("--epochs", config.epochs, "Gradient descent epochs")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    app.add_option("--lr", config.learning_rate, "Learning rate")->capture_default_str();
    app.add_option("--eps", config.eps, "Dice smoothing constant")->capture_default_str();
    app.add_option("--seed", config.seed, "Seed recorded with the model")->capture_default_str();
    app.add_option("--scenario", scenario, "Training-label corruption")
        ->check(CLI::IsMember({"clean", "under", "over"}))
        ->capture_default_str();
    app.add_option("--corrupt-k", corrupt_k, "Erosions/dilations for under/over")
        ->capture_default_str();
    app.add_option("--out", out, "Model file (JSON)")->required();
    app.add_option("--pred-dir", pred_dir, "Write pred_<id>.pfm for every manifest item");
  }

  int run() {
    config.transform = flags.build();
    config.validate();
    const auto sc = parse_scenario(scenario);
    const auto dataset = read_manifest(manifest);
    if (dataset.items.empty()) throw Error(ErrorCode::EmptyDataset, manifest + " has no items");

    std::vector<TrainingExample> examples;
    for (const auto& item : dataset.items) {
      examples.push_back(make_example(item.image, corrupt_for(sc, item.mask, corrupt_k),
                                      config.transform));
    }
    const auto result = train(examples, config);

    nlohmann::ordered_json model;
    model["model"] = "pixel_logistic";
    model["features"] = {"bias", "intensity", "box_mean_3x3", "gradient_magnitude"};
    model["weights"] = result.model.weights;
    model["transform"] = describe(config.transform);
    model["scenario"] = scenario;
    model["corrupt_k"] = sc == Scenario::Clean ? 0 : corrupt_k;
    model["epochs"] = config.epochs;
    model["learning_rate"] = config.learning_rate;
    model["eps"] = config.eps;
    model["seed"] = config.seed;
    model["loss_history"] = result.history;
    write_file_atomic(out, model.dump(2) + "\n");

    if (!pred_dir.empty()) {
      fs::create_directories(pred_dir);
      for (const auto& item : dataset.items) {
        write_file_atomic(fs::path(pred_dir) / ("pred_" + item.id + ".pfm"),
                          write_pfm(predict(result.model, item.image)));
      }
    }
    return kExitOk;
  }
};

// ---- eval -------------------------------------------------------------------

struct EvalCommand {
  std::string pred_dir;
  std::string gt_dir;
  std::string out;
  double threshold = kDefaultThreshold;

  void add(CLI::App& app) {
    app.add_option("--pred-dir", pred_dir, "Directory of pred_<id>.pfm")->required();
    app.add_option("--gt-dir", gt_dir, "Directory of gt_<id>.pgm")->required();
    app.add_option("--out", out, "Metrics CSV ('-' for stdout)")->required();
    app.add_option("--threshold", threshold, "Binarization threshold (p >= t is foreground)")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
  }

  int run(std::ostream& stdout_stream) const {
    if (!fs::is_directory(gt_dir)) throw Error(ErrorCode::Io, gt_dir + " is not a directory");
    std::vector<std::string> ids;
    for (const auto& entry : fs::directory_iterator(gt_dir)) {
      const auto name = entry.path().filename().string();
      if (entry.is_regular_file() && name.starts_with("gt_") && name.ends_with(".pgm")) {
        ids.push_back(name.substr(3, name.size() - 7));
      }
    }
    std::sort(ids.begin(), ids.end());
    if (ids.empty()) throw Error(ErrorCode::Io, gt_dir + " contains no gt_<id>.pgm files");

    std::vector<MetricRecord> records;
    for (const auto& id : ids) {
      const auto gt = read_mask_pgm(read_file(fs::path(gt_dir) / ("gt_" + id + ".pgm")));
      const auto pred = read_pfm(read_file(fs::path(pred_dir) / ("pred_" + id + ".pfm")));
      records.push_back(evaluate_image(pred, gt, threshold, id));
    }
    records.push_back(aggregate(records));
    write_text(out, metrics_csv(records), stdout_stream);
    return kExitOk;
  }
};

// ---- bench ------------------------------------------------------------------

struct BenchCommand {
  std::vector<int> sizes{128, 256, 512};
  int reps = 30;
  std::uint64_t seed = 42;
  std::string out = "-";

  void add(CLI::App& app) {
    app.add_option("--sizes", sizes, "Image side lengths")
        ->delimiter(',')
        ->check(CLI::Range(9, 8192))
        ->capture_default_str();
    app.add_option("--reps", reps, "Timed repetitions per method and size")->capture_default_str();
    app.add_option("--seed", seed, "Mask RNG seed")->capture_default_str();
    app.add_option("--out", out, "CSV output ('-' for stdout)")->capture_default_str();
  }

  int run(std::ostream& stdout_stream) const {
    const auto records = run_transform_bench(sizes, reps, seed);
    write_text(out, bench_csv(records), stdout_stream);
    return kExitOk;
  }
};

// ---- experiment -------------------------------------------------------------

struct ExperimentCommand {
  TransformFlags flags;
  std::string scenario = "clean";
  std::vector<std::uint64_t> seeds{42, 43, 44, 45, 46};
  ExperimentOptions options;
  std::string out = "-";

  void add(CLI::App& app) {
    app.add_option("--scenario", scenario, "Training-label corruption")
        ->check(CLI::IsMember({"clean", "under", "over"}))
        ->capture_default_str();
    flags.add(app, "--transform", true, true);
    app.add_option("--seeds", seeds, "Dataset seeds")->delimiter(',')->capture_default_str();
    app.add_option("--epochs", options.train.epochs, "Gradient descent epochs")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    app.add_option("--lr", options.train.learning_rate, "Learning rate")->capture_default_str();
    app.add_option("--corrupt-k", options.corrupt_k, "Erosions/dilations for under/over")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--out", out, "CSV output ('-' for stdout)")->capture_default_str();
  }

  int run(std::ostream& stdout_stream) const {
    const auto rows = run_experiment(parse_scenario(scenario), flags.build(), seeds, options);
    write_text(out, experiment_csv(rows), stdout_stream);
    return kExitOk;
  }
};

}  // namespace

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotP5:
    case ErrorCode::NotPf:
    case ErrorCode::BadHeader:
    case ErrorCode::NotBinary:
    case ErrorCode::OutOfRange:
    case ErrorCode::ShapeMismatch:
    case ErrorCode::Io:
      return kExitIo;
    default:
      return kExitUsage;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Boundary-aware ground-truth transforms for segmentation training", "bu"};
  app.require_subcommand(1);
  app.fallthrough(false);

  TransformCommand transform;
  SynthCommand synth;
  TrainCommand train_cmd;
  EvalCommand eval;
  BenchCommand bench;
  ExperimentCommand experiment;

  auto* transform_app = app.add_subcommand(
      "transform",
      "Transform a mask into a training target. For bu, --alpha labels the band just inside "
      "the object (mask minus erosion) and --beta the band just outside (dilation minus "
      "mask); alpha=1 beta=0 reproduces the hard labels.");
  transform.add(*transform_app);
  auto* synth_app = app.add_subcommand("synth", "Generate a seeded synthetic dataset");
  synth.add(*synth_app);
  auto* train_app = app.add_subcommand("train", "Train the pixel model on a manifest");
  train_cmd.add(*train_app);
  auto* eval_app = app.add_subcommand("eval", "Per-image DSC/precision/recall");
  eval.add(*eval_app);
  auto* bench_app = app.add_subcommand("bench", "Time the ground-truth transforms");
  bench.add(*bench_app);
  auto* experiment_app =
      app.add_subcommand("experiment", "Corruption-robustness experiment over seeds");
  experiment.add(*experiment_app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (transform_app->parsed()) return transform.run();
    if (synth_app->parsed()) return synth.run();
    if (train_app->parsed()) return train_cmd.run();
    if (eval_app->parsed()) return eval.run(out);
    if (bench_app->parsed()) return bench.run(out);
    if (experiment_app->parsed()) return experiment.run(out);
  } catch (const Error& e) {
    err << "bu: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const fs::filesystem_error& e) {
    err << "bu: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitUsage;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"bu"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace bu::cli
