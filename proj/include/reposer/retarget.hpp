#pragma once

#include "reposer/coordinate_frame.hpp"
#include "reposer/landmarks.hpp"

#include <span>

namespace reposer {

struct RetargetConfig {
  /// Part-local base coordinates smaller than this (pixels) use the additive
  /// fallback instead of the ratio update.
  double ratioEpsilon = 1e-3;

  /// Scale the global translation by the face-boundary extent ratio
  /// b_ref / b_dri. Off by default: the global translation is copied verbatim.
  bool scaleGlobalTranslation = false;

  PartLayout layout = PartLayout::ibug68();

  /// Throws InvalidArgument when ratioEpsilon is not a positive finite number.
  void validate() const;
};

/// Frame-to-frame change of a coordinate frame.
struct MotionDelta {
  Point2 deltaOrigin;
  /// Wrapped into (-pi, pi].
  double deltaAngle = 0.0;
};

/// Extent ratios below this driving extent (pixels) are forced to 1.
inline constexpr double kMinPartExtent = 1e-6;

/// Coordinate frame of one part, built from the part's two endpoints.
CoordinateFrame partFrame(const LandmarkSet& set, FacialPart part, const PartLayout& layout);

/// Change of the face-boundary (global) frame from `driving0` to `drivingM`.
MotionDelta globalDelta(const LandmarkSet& driving0, const LandmarkSet& drivingM, const PartLayout& layout);

/// Moves every landmark of `ref0` rigidly with `delta`: the reference global
/// frame is translated by deltaOrigin and rotated by deltaAngle, and each
/// point keeps its coordinates in that frame. Any translation scaling must be
/// applied to `delta` by the caller.
LandmarkSet applyGlobal(const LandmarkSet& ref0, const MotionDelta& delta, const PartLayout& layout);

/// Largest distance (pixels) from the frame origin to any of `points`.
/// Throws InvalidArgument for an empty list.
double partExtent(std::span<const Point2> points, const CoordinateFrame& frame);

/// Transfers the motion between `driving0` and `drivingM` onto `ref0`.
///
/// The global stage moves the whole reference face with the face-boundary
/// frame. The local stage then handles each part: its frame motion is taken
/// relative to the driving global frame (so head motion is not counted twice),
/// the translation is scaled by b_ref / b_dri, and every point maps its
/// part-local coordinates by the per-axis driving ratio
/// (p_dri^m / p_dri^0) * p_ref^0. Axes where |p_dri^0| < ratioEpsilon use
/// p_ref^0 + (b_ref / b_dri) * (p_dri^m - p_dri^0) instead.
///
/// Throws DegenerateEndpoints(part) or DivergentRatio(landmark).
LandmarkSet retargetFrame(
    const LandmarkSet& ref0,
    const LandmarkSet& driving0,
    const LandmarkSet& drivingM,
    const RetargetConfig& cfg = {});

/// Frame j of the result is retargetFrame(ref0, driving[0], driving[j], cfg).
/// Errors are rethrown tagged with the frame index.
LandmarkSequence
retargetSequence(const LandmarkSet& ref0, const LandmarkSequence& driving, const RetargetConfig& cfg = {});

} // namespace reposer
