#include "bu/transforms.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace bu {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorCode::ConstraintViolation,
                std::string(name) + " must lie in [0,1], got " + format_real(p));
  }
}

// One-dimensional squared distance transform of a sampled function (lower
// envelope of the parabolas (q - v)^2 + f(v)). Infinite samples contribute no
// parabola; a line with no finite sample stays infinite.
class LineTransform {
 public:
  explicit LineTransform(int capacity)
      : f_(capacity), vertex_(capacity), boundary_(capacity + 1) {}

  // Reads n samples from `data` at `stride` and writes the result back in place.
  void run(double* data, int n, std::ptrdiff_t stride) {
    for (int q = 0; q < n; ++q) f_[q] = data[q * stride];

    int k = -1;
    for (int q = 0; q < n; ++q) {
      if (f_[q] == kInf) continue;
      if (k < 0) {
        k = 0;
        vertex_[0] = q;
        boundary_[0] = -kInf;
        boundary_[1] = kInf;
        continue;
      }
      double s = intersection(vertex_[k], q);
      while (s <= boundary_[k]) {
        --k;
        s = intersection(vertex_[k], q);
      }
      ++k;
      vertex_[k] = q;
      boundary_[k] = s;
      boundary_[k + 1] = kInf;
    }
    if (k < 0) return;

    k = 0;
    for (int q = 0; q < n; ++q) {
      while (boundary_[k + 1] < q) ++k;
      const double dq = q - vertex_[k];
      data[q * stride] = dq * dq + f_[vertex_[k]];
    }
  }

 private:
  double intersection(int p, int q) const {
    const double fp = f_[p] + static_cast<double>(p) * p;
    const double fq = f_[q] + static_cast<double>(q) * q;
    return (fq - fp) / (2.0 * (q - p));
  }

  std::vector<double> f_;
  std::vector<int> vertex_;
  std::vector<double> boundary_;
};

}  // namespace

ProbMap soft_label(const BinaryMask& mask, double p_fg, double p_bg) {
  require_probability(p_fg, "p_fg");
  require_probability(p_bg, "p_bg");
  if (p_bg > p_fg) {
    throw Error(ErrorCode::ConstraintViolation, "soft labels require p_bg <= p_fg");
  }
  std::vector<double> out(mask.size());
  const auto src = mask.data();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = src[i] ? p_fg : p_bg;
  return ProbMap(mask.width(), mask.height(), std::move(out));
}

void BUParams::validate() const {
  require_probability(alpha, "alpha");
  require_probability(beta, "beta");
  if (n_iter < 1) {
    throw Error(ErrorCode::ConstraintViolation, "iters must be >= 1");
  }
  if (mode == BUMode::Balanced) {
    if (std::abs(alpha + beta - 1.0) > 1e-12) {
      throw Error(ErrorCode::ConstraintViolation, "balanced requires alpha+beta=1");
    }
    if (alpha < beta) {
      throw Error(ErrorCode::ConstraintViolation, "balanced requires alpha>=beta");
    }
  } else if (alpha + beta < 0.0 || alpha + beta > 2.0) {
    throw Error(ErrorCode::ConstraintViolation, "unbalanced requires 0<=alpha+beta<=2");
  }
}

ProbMap boundary_uncertainty(const BinaryMask& mask, const BUParams& params) {
  params.validate();
  const auto dilated = iterate(MorphOp::Dilate, mask, params.se, params.n_iter);
  const auto eroded = iterate(MorphOp::Erode, mask, params.se, params.n_iter);

  const auto m = mask.data();
  const auto d = dilated.data();
  const auto e = eroded.data();
  std::vector<double> out(mask.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (e[i]) {
      out[i] = 1.0;
    } else if (m[i]) {
      out[i] = params.alpha;
    } else if (d[i]) {
      out[i] = params.beta;
    } else {
      out[i] = 0.0;
    }
  }
  return ProbMap(mask.width(), mask.height(), std::move(out));
}

RealGrid squared_edt(const BinaryMask& mask) {
  const int w = mask.width();
  const int h = mask.height();
  std::vector<double> grid(mask.size());
  const auto src = mask.data();
  for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = src[i] ? 0.0 : kInf;

  LineTransform line(std::max(w, h));
  for (int y = 0; y < h; ++y) line.run(grid.data() + static_cast<std::ptrdiff_t>(y) * w, w, 1);
  for (int x = 0; x < w; ++x) line.run(grid.data() + x, h, w);
  return RealGrid(w, h, std::move(grid));
}

DistanceMap edt(const BinaryMask& mask) {
  if (mask.count() == 0) {
    throw Error(ErrorCode::EmptyMask, "distance transform needs at least one foreground pixel");
  }
  auto squared = squared_edt(mask).values();
  for (auto& v : squared) v = std::sqrt(v);
  return DistanceMap(mask.width(), mask.height(), std::move(squared));
}

BinaryMask boundary_set(const BinaryMask& mask) {
  const int w = mask.width();
  const int h = mask.height();
  std::vector<std::uint8_t> out(mask.size(), 0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const auto v = mask(x, y);
      const bool on_boundary = (x > 0 && mask(x - 1, y) != v) || (x + 1 < w && mask(x + 1, y) != v) ||
                               (y > 0 && mask(x, y - 1) != v) || (y + 1 < h && mask(x, y + 1) != v);
      out[static_cast<std::size_t>(y) * w + x] = on_boundary ? 1 : 0;
    }
  }
  return BinaryMask(w, h, std::move(out));
}

DistanceMap signed_distance_map(const BinaryMask& mask) {
  const auto fg = mask.count();
  if (fg == 0 || fg == mask.size()) {
    throw Error(ErrorCode::DegenerateMask,
                "signed distance needs both foreground and background pixels");
  }
  const auto boundary = boundary_set(mask);
  auto dist = edt(boundary).values();
  const auto m = mask.data();
  const auto b = boundary.data();
  for (std::size_t i = 0; i < dist.size(); ++i) {
    if (b[i]) {
      dist[i] = 0.0;
    } else if (m[i]) {
      dist[i] = -dist[i];
    }
  }
  return DistanceMap(mask.width(), mask.height(), std::move(dist));
}

DptTarget dpt_transform(const BinaryMask& mask) {
  auto sdm = signed_distance_map(mask);
  return {mask_to_prob(mask), std::move(sdm)};
}

}  // namespace bu
