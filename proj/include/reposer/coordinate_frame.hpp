#pragma once

#include "reposer/landmarks.hpp"

namespace reposer {

inline constexpr double kPi = 3.14159265358979323846;

/// Wraps an angle into (-pi, pi].
double wrapAngle(double radians);

/// Rotates `v` by `radians` (positive = clockwise on screen, since y points down).
Point2 rotate(const Point2& v, double radians);

/// Rectangular 2-D coordinate system: an origin and the direction of its x-axis.
class CoordinateFrame {
 public:
  CoordinateFrame() = default;

  /// The angle is wrapped into (-pi, pi]; throws NonFinite on NaN/Inf input.
  CoordinateFrame(const Point2& origin, double angle);

  const Point2& origin() const {
    return origin_;
  }
  double angle() const {
    return angle_;
  }

 private:
  Point2 origin_;
  double angle_ = 0.0;
};

/// Minimum endpoint separation (pixels) for a frame to be well defined.
inline constexpr double kMinEndpointDistance = 1e-9;

/// Origin at the endpoint midpoint, x-axis pointing from `e1` to `e2`.
/// Throws DegenerateEndpoints when the endpoints coincide.
CoordinateFrame frameFromEndpoints(const Point2& e1, const Point2& e2);

/// World (pixel) coordinates to frame-local coordinates: R(-angle) * (p - origin).
Point2 toLocal(const CoordinateFrame& frame, const Point2& p);

/// Inverse of `toLocal`: R(angle) * q + origin.
Point2 fromLocal(const CoordinateFrame& frame, const Point2& q);

} // namespace reposer
