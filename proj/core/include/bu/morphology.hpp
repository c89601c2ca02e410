#pragma once

// Flat binary dilation and erosion.
//
//   dilate(I, W)(x, y) = max_{(i,j) in W} I(x - i, y - j),  outside reads as 0
//   erode(I, W)(x, y)  = min_{(i,j) in W} I(x + i, y + j),  outside reads as 1
//
// The asymmetric padding keeps the image frame from acting as an object
// boundary: a mask that touches the border neither grows nor shrinks there.

#include <string>
#include <vector>

#include "bu/raster.hpp"

namespace bu {

struct Offset {
  int dx = 0;
  int dy = 0;

  friend bool operator==(const Offset&, const Offset&) = default;
  friend auto operator<=>(const Offset&, const Offset&) = default;
};

/// Flat structuring element: a point-symmetric offset set containing the origin.
class StructuringElement {
 public:
  explicit StructuringElement(std::vector<Offset> offsets);

  /// All offsets with |dx|,|dy| <= (k-1)/2; k odd and >= 1.
  static StructuringElement square(int k);
  /// Offsets on the two axes with max(|dx|,|dy|) <= (k-1)/2; k odd and >= 1.
  static StructuringElement cross(int k);
  /// "square3", "cross3", "square5", ... ; throws ConstraintViolation otherwise.
  static StructuringElement parse(const std::string& name);

  const std::vector<Offset>& offsets() const noexcept { return offsets_; }
  int radius_x() const noexcept { return radius_x_; }
  int radius_y() const noexcept { return radius_y_; }

  friend bool operator==(const StructuringElement&, const StructuringElement&) = default;

 private:
  std::vector<Offset> offsets_;  // sorted, unique
  int radius_x_ = 0;
  int radius_y_ = 0;
};

enum class MorphOp { Dilate, Erode };

BinaryMask dilate(const BinaryMask& mask, const StructuringElement& se);
BinaryMask erode(const BinaryMask& mask, const StructuringElement& se);
BinaryMask apply(MorphOp op, const BinaryMask& mask, const StructuringElement& se);

/// n-fold composition of `op`; n == 0 returns the input.
BinaryMask iterate(MorphOp op, const BinaryMask& mask, const StructuringElement& se, int n);

}  // namespace bu
