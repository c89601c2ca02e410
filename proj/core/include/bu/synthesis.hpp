#pragma once

// Seeded synthetic image/mask pairs and simulated annotation bias.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "bu/morphology.hpp"
#include "bu/raster.hpp"

namespace bu {

struct SynthConfig {
  std::uint64_t seed = 42;
  int count = 50;
  int width = 64;
  int height = 64;
  int min_shapes = 1;
  int max_shapes = 3;
  double fg_mean = 0.7;
  double bg_mean = 0.3;
  double noise_sd = 0.1;

  void validate() const;
};

struct DatasetItem {
  GrayImage image;
  BinaryMask mask;
  std::string id;
};

struct Dataset {
  std::vector<DatasetItem> items;
};

/// Ellipse margin from the frame, in pixels.
inline constexpr int kShapeMargin = 4;
/// Accepted foreground fraction is the open interval (0, kMaxForegroundFraction).
inline constexpr double kMaxForegroundFraction = 0.6;
/// Redraws allowed per item before generation fails with ConfigInvalid.
inline constexpr int kMaxRedraws = 10;

/// Deterministic in `config`. One xoshiro256** stream serves the whole
/// dataset; for each item the draws are consumed in this order:
///   shape count k = min_shapes + uniform_index(max_shapes - min_shapes + 1)
///   per ellipse: centre x, centre y (uniform in [margin, side-1-margin]),
///                semi-axis a in [w/10, w/4], semi-axis b in [h/10, h/4]
///   (redraw k and ellipses while the foreground fraction is outside (0, 0.6))
///   one normal() per pixel in row-major order for the noise.
Dataset generate(const SynthConfig& config);

/// Zero-padded 4-digit item identifier.
std::string item_id(int index);

enum class Corruption { Under, Over };

/// Under -> k erosions, Over -> k dilations. k must be >= 1.
BinaryMask corrupt(const BinaryMask& mask, Corruption kind, int k, const StructuringElement& se);

/// Writes img_<id>.pfm, gt_<id>.pgm and manifest.csv
/// ("image_id,image_path,mask_path", paths relative to `dir`).
void write_dataset(const Dataset& dataset, const std::filesystem::path& dir);

/// Loads a dataset from a manifest written by write_dataset.
Dataset read_manifest(const std::filesystem::path& manifest);

}  // namespace bu
