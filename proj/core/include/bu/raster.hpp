#pragma once

// Grid value types and their on-disk encodings.
//
// All grids are row-major, index = y * width + x, with x the column and y the
// row. Validated grid types are immutable once constructed: every producer
// builds a plain std::vector and hands it to a checking constructor.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bu/error.hpp"

namespace bu {

template <typename T>
class Grid {
 public:
  using value_type = T;

  Grid(int width, int height, std::vector<T> data)
      : width_(width), height_(height), data_(std::move(data)) {
    if (width <= 0 || height <= 0) {
      throw Error(ErrorCode::InvalidGrid,
                  "grid dimensions must be positive, got " + std::to_string(width) + "x" +
                      std::to_string(height));
    }
    if (data_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
      throw Error(ErrorCode::InvalidGrid, "grid data length does not match width*height");
    }
  }

  Grid(int width, int height, T fill)
      : Grid(width, height,
             std::vector<T>(static_cast<std::size_t>(width > 0 ? width : 0) *
                                static_cast<std::size_t>(height > 0 ? height : 0),
                            fill)) {}

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }

  T operator()(int x, int y) const {
    return data_[static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
                 static_cast<std::size_t>(x)];
  }
  T operator[](std::size_t i) const { return data_[i]; }

  std::span<const T> data() const noexcept { return data_; }
  const std::vector<T>& values() const& noexcept { return data_; }
  // By value on temporaries so `for (v : f().values())` does not dangle.
  std::vector<T> values() && noexcept { return std::move(data_); }

  template <typename U>
  bool same_shape(const Grid<U>& other) const noexcept {
    return width_ == other.width() && height_ == other.height();
  }

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.width_ == b.width_ && a.height_ == b.height_ && a.data_ == b.data_;
  }

 private:
  int width_;
  int height_;
  std::vector<T> data_;
};

/// Unconstrained real-valued grid (gradients, feature planes).
using RealGrid = Grid<double>;

/// Labels in {0,1}.
class BinaryMask : public Grid<std::uint8_t> {
 public:
  BinaryMask(int width, int height, std::vector<std::uint8_t> data);
  static BinaryMask filled(int width, int height, bool value);

  std::size_t count() const noexcept;
};

/// Per-pixel foreground probabilities in [0,1].
class ProbMap : public Grid<double> {
 public:
  ProbMap(int width, int height, std::vector<double> data);
  static ProbMap filled(int width, int height, double value);
};

/// Finite intensities in [0,1].
class GrayImage : public Grid<double> {
 public:
  GrayImage(int width, int height, std::vector<double> data);
};

/// Finite distances; unsigned maps are non-negative, signed maps are not.
class DistanceMap : public Grid<double> {
 public:
  DistanceMap(int width, int height, std::vector<double> data);
};

template <typename A, typename B>
void require_same_shape(const Grid<A>& a, const Grid<B>& b, const char* what) {
  if (!a.same_shape(b)) {
    throw Error(ErrorCode::ShapeMismatch,
                std::string(what) + ": " + std::to_string(a.width()) + "x" +
                    std::to_string(a.height()) + " vs " + std::to_string(b.width()) + "x" +
                    std::to_string(b.height()));
  }
}

ProbMap mask_to_prob(const BinaryMask& mask);
BinaryMask complement(const BinaryMask& mask);
/// Pointwise a <= b.
bool is_subset(const BinaryMask& a, const BinaryMask& b);

using Bytes = std::vector<std::uint8_t>;

/// Binary PGM, "P5\n<w> <h>\n255\n" followed by one byte per pixel in {0,255}.
BinaryMask read_mask_pgm(std::span<const std::uint8_t> bytes);
Bytes write_mask_pgm(const BinaryMask& mask);

/// Grayscale PFM, "Pf\n<w> <h>\n-1.0\n" followed by little-endian float32 rows,
/// bottom row first. Values within 1e-9 of [0,1] are clamped into it.
ProbMap read_pfm(std::span<const std::uint8_t> bytes);
Bytes write_pfm(const ProbMap& map);
Bytes write_pfm(const GrayImage& image);
GrayImage read_gray_pfm(std::span<const std::uint8_t> bytes);

Bytes read_file(const std::filesystem::path& path);
/// Writes to a sibling temporary and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
void write_file_atomic(const std::filesystem::path& path, const std::string& text);

/// Shortest round-trip decimal form, "." separator, locale independent.
std::string format_real(double value);

}  // namespace bu
