#pragma once

// Ground-truth transformations applied to a binary mask before it is used as a
// training target.

#include "bu/morphology.hpp"
#include "bu/raster.hpp"

namespace bu {

/// Global soft labels: foreground -> p_fg, background -> p_bg.
/// Requires 0 <= p_bg <= p_fg <= 1.
ProbMap soft_label(const BinaryMask& mask, double p_fg, double p_bg);

enum class BUMode { Balanced, Unbalanced };

/// Boundary Uncertainty parameters.
///
/// `alpha` labels the interior band (mask minus its erosion) and `beta` the
/// exterior band (dilation minus the mask). With this assignment alpha=1,
/// beta=0 reproduces the hard labels, alpha=beta=1 is a pure dilation of the
/// target and alpha=beta=0 a pure erosion.
struct BUParams {
  double alpha = 0.9;
  double beta = 0.1;
  int n_iter = 1;
  StructuringElement se = StructuringElement::square(3);
  BUMode mode = BUMode::Balanced;

  /// Balanced: alpha + beta = 1 (to 1e-12) and alpha >= beta.
  /// Unbalanced: 0 <= alpha + beta <= 2.
  /// Both: alpha, beta in [0,1], n_iter >= 1.
  void validate() const;
};

ProbMap boundary_uncertainty(const BinaryMask& mask, const BUParams& params);

/// Exact Euclidean distance from every pixel centre to the nearest foreground
/// pixel centre. Throws EmptyMask when there is no foreground.
DistanceMap edt(const BinaryMask& mask);

/// Squared distances as computed by the separable lower-envelope pass; exact
/// integers stored in doubles.
RealGrid squared_edt(const BinaryMask& mask);

/// Pixels with at least one 4-neighbour of the opposite class.
BinaryMask boundary_set(const BinaryMask& mask);

/// Signed distance to the boundary set: negative inside the target, positive
/// outside, zero on the boundary set. Throws DegenerateMask for all-0/all-1.
DistanceMap signed_distance_map(const BinaryMask& mask);

struct DptTarget {
  ProbMap target;
  DistanceMap sdm;
};

/// Hard-label target paired with its signed distance map.
DptTarget dpt_transform(const BinaryMask& mask);

}  // namespace bu
