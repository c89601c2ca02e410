#include "bu/morphology.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdlib>
#include <set>

namespace bu {

StructuringElement::StructuringElement(std::vector<Offset> offsets) {
  std::set<Offset> unique(offsets.begin(), offsets.end());
  if (unique.empty()) throw Error(ErrorCode::ConstraintViolation, "structuring element is empty");
  if (!unique.contains(Offset{0, 0})) {
    throw Error(ErrorCode::ConstraintViolation, "structuring element must contain the origin");
  }
  for (const auto& o : unique) {
    if (!unique.contains(Offset{-o.dx, -o.dy})) {
      throw Error(ErrorCode::ConstraintViolation, "structuring element must be point-symmetric");
    }
    radius_x_ = std::max(radius_x_, std::abs(o.dx));
    radius_y_ = std::max(radius_y_, std::abs(o.dy));
  }
  // Origin plus point symmetry already forces odd bounding-box sides.
  offsets_.assign(unique.begin(), unique.end());
}

StructuringElement StructuringElement::square(int k) {
  if (k < 1 || k % 2 == 0) {
    throw Error(ErrorCode::ConstraintViolation, "square size must be odd and >= 1");
  }
  const int r = (k - 1) / 2;
  std::vector<Offset> offsets;
  for (int dy = -r; dy <= r; ++dy)
    for (int dx = -r; dx <= r; ++dx) offsets.push_back({dx, dy});
  return StructuringElement(std::move(offsets));
}

StructuringElement StructuringElement::cross(int k) {
  if (k < 1 || k % 2 == 0) {
    throw Error(ErrorCode::ConstraintViolation, "cross size must be odd and >= 1");
  }
  const int r = (k - 1) / 2;
  std::vector<Offset> offsets;
  for (int d = -r; d <= r; ++d) {
    offsets.push_back({d, 0});
    if (d != 0) offsets.push_back({0, d});
  }
  return StructuringElement(std::move(offsets));
}

StructuringElement StructuringElement::parse(const std::string& name) {
  auto size_after = [&](std::size_t prefix) -> int {
    const auto digits = name.substr(prefix);
    if (digits.empty() || !std::all_of(digits.begin(), digits.end(),
                                             [](unsigned char c) { return std::isdigit(c) != 0; }) ||
        digits.size() > 3) {
      throw Error(ErrorCode::ConstraintViolation, "unknown structuring element '" + name + "'");
    }
    return std::stoi(digits);
  };
  if (name.starts_with("square")) return square(size_after(6));
  if (name.starts_with("cross")) return cross(size_after(5));
  throw Error(ErrorCode::ConstraintViolation, "unknown structuring element '" + name + "'");
}

namespace {

// Copies the mask into a frame of width rx / height ry filled with `pad`, so the
// inner loops below read every offset without bounds checks.
struct Padded {
  int stride;
  std::vector<std::uint8_t> cells;
};

Padded pad_mask(const BinaryMask& mask, int rx, int ry, std::uint8_t pad) {
  const int w = mask.width();
  const int h = mask.height();
  Padded p{w + 2 * rx, {}};
  p.cells.assign(static_cast<std::size_t>(p.stride) * static_cast<std::size_t>(h + 2 * ry), pad);
  const auto src = mask.data();
  for (int y = 0; y < h; ++y) {
    std::copy_n(src.begin() + static_cast<std::ptrdiff_t>(y) * w, w,
                p.cells.begin() + static_cast<std::ptrdiff_t>(y + ry) * p.stride + rx);
  }
  return p;
}

BinaryMask morph(const BinaryMask& mask, const StructuringElement& se, bool dilation) {
  const int w = mask.width();
  const int h = mask.height();
  const int rx = se.radius_x();
  const int ry = se.radius_y();
  const auto padded = pad_mask(mask, rx, ry, dilation ? 0 : 1);
  // Dilation reads I(x - i, y - j); erosion reads I(x + i, y + j).
  const int sign = dilation ? -1 : 1;

  std::vector<std::uint8_t> out(mask.size(), dilation ? 0 : 1);
  for (int y = 0; y < h; ++y) {
    std::uint8_t* row = out.data() + static_cast<std::ptrdiff_t>(y) * w;
    for (const auto& o : se.offsets()) {
      const std::uint8_t* src = padded.cells.data() +
                                static_cast<std::ptrdiff_t>(y + ry + sign * o.dy) * padded.stride +
                                rx + sign * o.dx;
      if (dilation) {
        for (int x = 0; x < w; ++x) row[x] |= src[x];
      } else {
        for (int x = 0; x < w; ++x) row[x] &= src[x];
      }
    }
  }
  return BinaryMask(w, h, std::move(out));
}

}  // namespace

BinaryMask dilate(const BinaryMask& mask, const StructuringElement& se) {
  return morph(mask, se, true);
}

BinaryMask erode(const BinaryMask& mask, const StructuringElement& se) {
  return morph(mask, se, false);
}

BinaryMask apply(MorphOp op, const BinaryMask& mask, const StructuringElement& se) {
  return op == MorphOp::Dilate ? dilate(mask, se) : erode(mask, se);
}

BinaryMask iterate(MorphOp op, const BinaryMask& mask, const StructuringElement& se, int n) {
  if (n < 0) throw Error(ErrorCode::ConstraintViolation, "iteration count must be >= 0");
  BinaryMask current = mask;
  for (int i = 0; i < n; ++i) current = apply(op, current, se);
  return current;
}

}  // namespace bu
