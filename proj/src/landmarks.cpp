#include "reposer/landmarks.hpp"

#include "reposer/error.hpp"

#include <algorithm>
#include <string>

namespace reposer {

std::string_view partName(FacialPart part) {
  switch (part) {
    case FacialPart::Eyes:
      return "eyes";
    case FacialPart::Mouth:
      return "mouth";
    case FacialPart::Nose:
      return "nose";
    case FacialPart::Eyebrows:
      return "eyebrows";
    case FacialPart::FaceBoundary:
      return "face_boundary";
  }
  return "unknown";
}

std::optional<FacialPart> partFromName(std::string_view name) {
  for (const auto part : kAllParts) {
    if (partName(part) == name) {
      return part;
    }
  }
  return std::nullopt;
}

PartLayout PartLayout::ibug68() {
  // order follows the FacialPart enumeration
  return PartLayout({{
      {36, 12, 36, 45}, // eyes: outer corners
      {48, 20, 48, 54}, // mouth: lip corners
      {27, 9, 31, 35}, // nose: outermost nostril points
      {17, 10, 17, 26}, // eyebrows: outer brow tips
      {0, 17, 0, 16}, // face boundary: jaw line ends
  }});
}

PartLayout::PartLayout(const std::array<PartSpec, 5>& specs) : specs_(specs) {
  std::array<int, kNumLandmarks> owner{};
  for (std::size_t p = 0; p < specs_.size(); ++p) {
    const auto& spec = specs_[p];
    const auto name = std::string(partName(static_cast<FacialPart>(p)));
    if (spec.count == 0 || spec.end() > kNumLandmarks) {
      throw Error(ErrorCode::InvalidArgument, "part '" + name + "' has an invalid index range");
    }
    if (!spec.contains(spec.endpointA) || !spec.contains(spec.endpointB) ||
        spec.endpointA == spec.endpointB) {
      throw Error(ErrorCode::InvalidArgument, "part '" + name + "' endpoints must be two distinct indices of the part");
    }
    for (std::size_t i = spec.first; i < spec.end(); ++i) {
      if (owner[i]++ != 0) {
        throw Error(ErrorCode::InvalidArgument, "landmark assigned to more than one part", i);
      }
    }
  }
  for (std::size_t i = 0; i < kNumLandmarks; ++i) {
    if (owner[i] == 0) {
      throw Error(ErrorCode::InvalidArgument, "landmark not assigned to any part", i);
    }
  }
}

PartLayout PartLayout::withEndpoints(FacialPart part, std::size_t endpointA, std::size_t endpointB) const {
  auto specs = specs_;
  auto& spec = specs[static_cast<std::size_t>(part)];
  spec.endpointA = endpointA;
  spec.endpointB = endpointB;
  return PartLayout(specs);
}

FacialPart PartLayout::partOf(std::size_t index) const {
  for (const auto part : kAllParts) {
    if ((*this)[part].contains(index)) {
      return part;
    }
  }
  throw Error(ErrorCode::InvalidArgument, "landmark index outside 0..67", index);
}

std::vector<std::size_t> PartLayout::indices(FacialPart part) const {
  const auto& spec = (*this)[part];
  std::vector<std::size_t> out(spec.count);
  for (std::size_t i = 0; i < spec.count; ++i) {
    out[i] = spec.first + i;
  }
  return out;
}

LandmarkSet::LandmarkSet(const Points& points) : points_(points) {
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!isFinite(points_[i])) {
      throw Error(ErrorCode::NonFinite, "landmark coordinate is NaN or infinite", i);
    }
  }
}

LandmarkSet validateLandmarkSet(std::span<const Point2> points) {
  if (points.size() != kNumLandmarks) {
    throw Error(ErrorCode::WrongCount, "expected 68 landmarks", points.size());
  }
  LandmarkSet::Points array;
  std::copy(points.begin(), points.end(), array.begin());
  return LandmarkSet(array);
}

std::vector<Point2> partSlice(const LandmarkSet& set, FacialPart part, const PartLayout& layout) {
  const auto& spec = layout[part];
  const auto pts = set.points();
  return {pts.begin() + spec.first, pts.begin() + spec.end()};
}

LandmarkSequence::LandmarkSequence(std::vector<LandmarkSet> frames, double fps)
    : frames_(std::move(frames)), fps_(fps) {
  if (frames_.empty()) {
    throw Error(ErrorCode::WrongCount, "a landmark sequence needs at least one frame", 0);
  }
  if (!std::isfinite(fps_) || fps_ <= 0.0) {
    throw Error(ErrorCode::InvalidArgument, "fps must be positive");
  }
}

} // namespace reposer
