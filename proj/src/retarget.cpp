#include "reposer/retarget.hpp"

#include "reposer/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace reposer {

namespace {

// Rigid motion p -> p + dO + (R(dTheta) - I)(p - pivot). Written as a
// correction to p so that a zero delta reproduces the input bit for bit.
class RigidMotion {
 public:
  RigidMotion(const Point2& pivot, const MotionDelta& delta)
      : pivot_(pivot),
        shift_(delta.deltaOrigin),
        cosMinusOne_(-2.0 * std::sin(delta.deltaAngle / 2.0) * std::sin(delta.deltaAngle / 2.0)),
        sin_(std::sin(delta.deltaAngle)) {}

  Point2 operator()(const Point2& p) const {
    const Point2 d = p - pivot_;
    return p + shift_ + Point2{cosMinusOne_ * d.x - sin_ * d.y, sin_ * d.x + cosMinusOne_ * d.y};
  }

 private:
  Point2 pivot_;
  Point2 shift_;
  double cosMinusOne_;
  double sin_;
};

double extentRatio(double refExtent, double drivingExtent) {
  if (drivingExtent < kMinPartExtent) {
    return 1.0;
  }
  return refExtent / drivingExtent;
}

double transferAxis(double base, double moved, double ref, double scale, double epsilon) {
  if (std::abs(base) >= epsilon) {
    return (moved / base) * ref;
  }
  return ref + scale * (moved - base);
}

} // namespace

void RetargetConfig::validate() const {
  if (!std::isfinite(ratioEpsilon) || !(ratioEpsilon > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "ratio epsilon must be a positive finite number");
  }
}

CoordinateFrame partFrame(const LandmarkSet& set, FacialPart part, const PartLayout& layout) {
  const auto& spec = layout[part];
  try {
    return frameFromEndpoints(set[spec.endpointA], set[spec.endpointB]);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::DegenerateEndpoints) {
      throw;
    }
    throw Error(
        ErrorCode::DegenerateEndpoints,
        "endpoints of part '" + std::string(partName(part)) + "' coincide",
        static_cast<std::size_t>(part));
  }
}

MotionDelta globalDelta(const LandmarkSet& driving0, const LandmarkSet& drivingM, const PartLayout& layout) {
  const auto start = partFrame(driving0, FacialPart::FaceBoundary, layout);
  const auto end = partFrame(drivingM, FacialPart::FaceBoundary, layout);
  return {end.origin() - start.origin(), wrapAngle(end.angle() - start.angle())};
}

LandmarkSet applyGlobal(const LandmarkSet& ref0, const MotionDelta& delta, const PartLayout& layout) {
  const auto global = partFrame(ref0, FacialPart::FaceBoundary, layout);
  const RigidMotion motion(global.origin(), delta);
  LandmarkSet::Points out;
  for (std::size_t i = 0; i < kNumLandmarks; ++i) {
    out[i] = motion(ref0[i]);
  }
  return LandmarkSet(out);
}

double partExtent(std::span<const Point2> points, const CoordinateFrame& frame) {
  if (points.empty()) {
    throw Error(ErrorCode::InvalidArgument, "part extent of an empty point list");
  }
  double extent = 0.0;
  for (const auto& p : points) {
    extent = std::max(extent, distance(p, frame.origin()));
  }
  return extent;
}

LandmarkSet retargetFrame(
    const LandmarkSet& ref0,
    const LandmarkSet& driving0,
    const LandmarkSet& drivingM,
    const RetargetConfig& cfg) {
  cfg.validate();
  const auto& layout = cfg.layout;

  // Stage 1: global motion of the whole face.
  const auto globalDri0 = partFrame(driving0, FacialPart::FaceBoundary, layout);
  const auto globalDriM = partFrame(drivingM, FacialPart::FaceBoundary, layout);
  const auto globalRef0 = partFrame(ref0, FacialPart::FaceBoundary, layout);

  MotionDelta global = globalDelta(driving0, drivingM, layout);
  if (cfg.scaleGlobalTranslation) {
    const auto refExtent = partExtent(partSlice(ref0, FacialPart::FaceBoundary, layout), globalRef0);
    const auto driExtent = partExtent(partSlice(driving0, FacialPart::FaceBoundary, layout), globalDri0);
    global.deltaOrigin = global.deltaOrigin * extentRatio(refExtent, driExtent);
  }
  const RigidMotion globalMotion(globalRef0.origin(), global);
  const double globalRefAngleM = globalRef0.angle() + global.deltaAngle;

  // Stage 2: per-part relative motion, then per-point motion.
  LandmarkSet::Points out;
  for (const auto part : kAllParts) {
    const auto& spec = layout[part];
    const auto dri0 = partFrame(driving0, part, layout);
    const auto driM = partFrame(drivingM, part, layout);
    const auto ref0Frame = partFrame(ref0, part, layout);

    const double refExtent = partExtent(partSlice(ref0, part, layout), ref0Frame);
    const double driExtent = partExtent(partSlice(driving0, part, layout), dri0);
    const double scale = extentRatio(refExtent, driExtent);

    // Part origin motion measured inside the driving global frame.
    const Point2 residualOrigin =
        (toLocal(globalDriM, driM.origin()) - toLocal(globalDri0, dri0.origin())) * scale;
    const double residualAngle =
        wrapAngle((driM.angle() - globalDriM.angle()) - (dri0.angle() - globalDri0.angle()));

    const CoordinateFrame refM(
        globalMotion(ref0Frame.origin()) + rotate(residualOrigin, globalRefAngleM),
        ref0Frame.angle() + global.deltaAngle + residualAngle);

    for (std::size_t i = spec.first; i < spec.end(); ++i) {
      const Point2 base = toLocal(dri0, driving0[i]);
      const Point2 moved = toLocal(driM, drivingM[i]);
      const Point2 ref = toLocal(ref0Frame, ref0[i]);
      const Point2 local{
          transferAxis(base.x, moved.x, ref.x, scale, cfg.ratioEpsilon),
          transferAxis(base.y, moved.y, ref.y, scale, cfg.ratioEpsilon)};
      out[i] = fromLocal(refM, local);
      if (!isFinite(out[i])) {
        throw Error(ErrorCode::DivergentRatio, "retargeted landmark is not finite", i);
      }
    }
  }
  return LandmarkSet(out);
}

LandmarkSequence retargetSequence(const LandmarkSet& ref0, const LandmarkSequence& driving, const RetargetConfig& cfg) {
  std::vector<LandmarkSet> frames;
  frames.reserve(driving.size());
  for (std::size_t j = 0; j < driving.size(); ++j) {
    try {
      frames.push_back(retargetFrame(ref0, driving[0], driving[j], cfg));
    } catch (const Error& e) {
      throw e.withFrame(j);
    }
  }
  return LandmarkSequence(std::move(frames), driving.fps());
}

} // namespace reposer
