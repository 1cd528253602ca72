#include "reposer/coordinate_frame.hpp"

#include "reposer/error.hpp"

#include <cmath>

namespace reposer {

double wrapAngle(double radians) {
  double wrapped = std::remainder(radians, 2.0 * kPi);
  if (wrapped <= -kPi) {
    wrapped += 2.0 * kPi;
  }
  return wrapped;
}

Point2 rotate(const Point2& v, double radians) {
  const double c = std::cos(radians);
  const double s = std::sin(radians);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}

CoordinateFrame::CoordinateFrame(const Point2& origin, double angle)
    : origin_(origin), angle_(wrapAngle(angle)) {
  if (!isFinite(origin_) || !std::isfinite(angle_)) {
    throw Error(ErrorCode::NonFinite, "coordinate frame origin or angle is not finite");
  }
}

CoordinateFrame frameFromEndpoints(const Point2& e1, const Point2& e2) {
  const Point2 axis = e2 - e1;
  if (!(norm(axis) > kMinEndpointDistance)) {
    throw Error(ErrorCode::DegenerateEndpoints, "frame endpoints coincide");
  }
  const Point2 origin{(e1.x + e2.x) / 2.0, (e1.y + e2.y) / 2.0};
  return {origin, std::atan2(axis.y, axis.x)};
}

Point2 toLocal(const CoordinateFrame& frame, const Point2& p) {
  const double c = std::cos(frame.angle());
  const double s = std::sin(frame.angle());
  const Point2 d = p - frame.origin();
  return {c * d.x + s * d.y, -s * d.x + c * d.y};
}

Point2 fromLocal(const CoordinateFrame& frame, const Point2& q) {
  return rotate(q, frame.angle()) + frame.origin();
}

} // namespace reposer
