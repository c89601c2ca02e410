#include "bu/synthesis.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "bu/rng.hpp"

namespace bu {

namespace {

struct Ellipse {
  double cx, cy, a, b;
};

std::vector<std::uint8_t> rasterize(const std::vector<Ellipse>& shapes, int w, int h) {
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(w) * h, 0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (const auto& e : shapes) {
        const double u = (x - e.cx) / e.a;
        const double v = (y - e.cy) / e.b;
        if (u * u + v * v <= 1.0) {
          mask[static_cast<std::size_t>(y) * w + x] = 1;
          break;
        }
      }
    }
  }
  return mask;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

}  // namespace

void SynthConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::ConfigInvalid, what); };
  if (count < 1) fail("count must be >= 1");
  if (width < 2 * kShapeMargin + 1 || height < 2 * kShapeMargin + 1) {
    fail("width and height must be >= " + std::to_string(2 * kShapeMargin + 1));
  }
  if (min_shapes < 1 || max_shapes < min_shapes) fail("shape count range must satisfy 1 <= min <= max");
  if (!(fg_mean >= 0.0 && fg_mean <= 1.0 && bg_mean >= 0.0 && bg_mean <= 1.0)) {
    fail("intensity means must lie in [0,1]");
  }
  if (!(fg_mean > bg_mean)) fail("fg_mean must exceed bg_mean");
  if (!(noise_sd >= 0.0)) fail("noise_sd must be >= 0");
}

std::string item_id(int index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d", index);
  return buf;
}

Dataset generate(const SynthConfig& config) {
  config.validate();
  const int w = config.width;
  const int h = config.height;
  const auto n = static_cast<std::size_t>(w) * h;
  Xoshiro256 rng(config.seed);

  Dataset dataset;
  dataset.items.reserve(static_cast<std::size_t>(config.count));
  for (int index = 0; index < config.count; ++index) {
    std::vector<std::uint8_t> mask;
    bool accepted = false;
    for (int attempt = 0; attempt <= kMaxRedraws && !accepted; ++attempt) {
      const int k =
          config.min_shapes + rng.uniform_index(config.max_shapes - config.min_shapes + 1);
      std::vector<Ellipse> shapes(static_cast<std::size_t>(k));
      for (auto& e : shapes) {
        e.cx = rng.uniform(kShapeMargin, w - 1 - kShapeMargin);
        e.cy = rng.uniform(kShapeMargin, h - 1 - kShapeMargin);
        e.a = rng.uniform(w / 10.0, w / 4.0);
        e.b = rng.uniform(h / 10.0, h / 4.0);
      }
      mask = rasterize(shapes, w, h);
      const auto fg = static_cast<double>(std::count(mask.begin(), mask.end(), std::uint8_t{1}));
      const double fraction = fg / static_cast<double>(n);
      accepted = fraction > 0.0 && fraction < kMaxForegroundFraction;
    }
    if (!accepted) {
      throw Error(ErrorCode::ConfigInvalid,
                  "item " + std::to_string(index) + ": no admissible mask after redraws");
    }

    std::vector<double> pixels(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double clean = config.bg_mean + (config.fg_mean - config.bg_mean) * mask[i];
      pixels[i] = std::clamp(clean + config.noise_sd * rng.normal(), 0.0, 1.0);
    }
    dataset.items.push_back(
        {GrayImage(w, h, std::move(pixels)), BinaryMask(w, h, std::move(mask)), item_id(index)});
  }
  return dataset;
}

BinaryMask corrupt(const BinaryMask& mask, Corruption kind, int k, const StructuringElement& se) {
  if (k < 1) throw Error(ErrorCode::ConstraintViolation, "corruption count k must be >= 1");
  return iterate(kind == Corruption::Under ? MorphOp::Erode : MorphOp::Dilate, mask, se, k);
}

void write_dataset(const Dataset& dataset, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + dir.string() + ": " + ec.message());

  std::string manifest = "image_id,image_path,mask_path\n";
  for (const auto& item : dataset.items) {
    const auto image_name = "img_" + item.id + ".pfm";
    const auto mask_name = "gt_" + item.id + ".pgm";
    write_file_atomic(dir / image_name, write_pfm(item.image));
    write_file_atomic(dir / mask_name, write_mask_pgm(item.mask));
    manifest += item.id + "," + image_name + "," + mask_name + "\n";
  }
  write_file_atomic(dir / "manifest.csv", manifest);
}

Dataset read_manifest(const std::filesystem::path& manifest) {
  std::ifstream in(manifest);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + manifest.string());
  const auto base = manifest.parent_path();

  std::string line;
  if (!std::getline(in, line) || line != "image_id,image_path,mask_path") {
    throw Error(ErrorCode::Io, manifest.string() + ": missing manifest header");
  }
  Dataset dataset;
  std::set<std::string> seen;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 3 || fields[0].empty()) {
      throw Error(ErrorCode::Io, manifest.string() + ":" + std::to_string(line_no) +
                                     ": expected image_id,image_path,mask_path");
    }
    if (!seen.insert(fields[0]).second) {
      throw Error(ErrorCode::Io, manifest.string() + ": duplicate image_id " + fields[0]);
    }
    auto image = read_gray_pfm(read_file(base / fields[1]));
    auto mask = read_mask_pgm(read_file(base / fields[2]));
    require_same_shape(image, mask, "manifest item");
    dataset.items.push_back({std::move(image), std::move(mask), fields[0]});
  }
  return dataset;
}

}  // namespace bu
