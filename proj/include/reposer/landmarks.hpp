#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace reposer {

/// Number of landmarks in the iBUG-68 annotation scheme.
inline constexpr std::size_t kNumLandmarks = 68;

/// Default number of frames in an animation clip.
inline constexpr std::size_t kDefaultClipFrames = 64;

/// Default number of target images per gallery domain.
inline constexpr std::size_t kDefaultTargetCount = 10;

inline constexpr double kDefaultFps = 25.0;

/// Pixel coordinates, image convention: x to the right, y downward.
struct Point2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Point2& operator+=(const Point2& o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr Point2& operator-=(const Point2& o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  friend constexpr Point2 operator+(Point2 a, const Point2& b) {
    return a += b;
  }
  friend constexpr Point2 operator-(Point2 a, const Point2& b) {
    return a -= b;
  }
  friend constexpr Point2 operator*(Point2 a, double s) {
    return {a.x * s, a.y * s};
  }
  friend constexpr Point2 operator*(double s, Point2 a) {
    return {a.x * s, a.y * s};
  }
  friend constexpr bool operator==(const Point2&, const Point2&) = default;
};

inline double norm(const Point2& p) {
  return std::hypot(p.x, p.y);
}

inline double distance(const Point2& a, const Point2& b) {
  return norm(a - b);
}

inline bool isFinite(const Point2& p) {
  return std::isfinite(p.x) && std::isfinite(p.y);
}

struct ImageSize {
  std::size_t height = 0;
  std::size_t width = 0;

  friend constexpr bool operator==(const ImageSize&, const ImageSize&) = default;
};

enum class FacialPart : std::uint8_t { Eyes, Mouth, Nose, Eyebrows, FaceBoundary };

inline constexpr std::array<FacialPart, 5> kAllParts = {
    FacialPart::Eyes,
    FacialPart::Mouth,
    FacialPart::Nose,
    FacialPart::Eyebrows,
    FacialPart::FaceBoundary};

/// Stable lowercase name used in files and on the command line
/// ("eyes", "mouth", "nose", "eyebrows", "face_boundary").
std::string_view partName(FacialPart part);
std::optional<FacialPart> partFromName(std::string_view name);

/// Contiguous index range of one part plus the two landmarks that define its
/// coordinate frame.
struct PartSpec {
  std::size_t first = 0;
  std::size_t count = 0;
  std::size_t endpointA = 0;
  std::size_t endpointB = 0;

  constexpr std::size_t end() const {
    return first + count;
  }
  constexpr bool contains(std::size_t index) const {
    return index >= first && index < end();
  }
};

/// Partition of the 68 landmark indices into the five facial parts.
class PartLayout {
 public:
  /// Standard 0-based iBUG-68 layout: jaw 0-16, brows 17-26, nose 27-35,
  /// eyes 36-47, mouth 48-67.
  static PartLayout ibug68();

  /// Throws InvalidArgument unless the ranges partition 0..67 and each
  /// endpoint lies inside its own part.
  explicit PartLayout(const std::array<PartSpec, 5>& specs);

  const PartSpec& operator[](FacialPart part) const {
    return specs_[static_cast<std::size_t>(part)];
  }

  PartLayout withEndpoints(FacialPart part, std::size_t endpointA, std::size_t endpointB) const;

  FacialPart partOf(std::size_t index) const;

  /// Landmark indices of one part in ascending order.
  std::vector<std::size_t> indices(FacialPart part) const;

 private:
  std::array<PartSpec, 5> specs_;
};

/// Exactly 68 finite points. Construct through `validateLandmarkSet`.
class LandmarkSet {
 public:
  using Points = std::array<Point2, kNumLandmarks>;

  /// Wraps an array that is known to be finite; throws NonFinite otherwise.
  explicit LandmarkSet(const Points& points);

  const Point2& operator[](std::size_t i) const {
    return points_[i];
  }
  std::span<const Point2, kNumLandmarks> points() const {
    return points_;
  }

  friend bool operator==(const LandmarkSet&, const LandmarkSet&) = default;

 private:
  Points points_;
};

/// Throws WrongCount(got) or NonFinite(index).
LandmarkSet validateLandmarkSet(std::span<const Point2> points);

/// Points of one part, in index order.
std::vector<Point2>
partSlice(const LandmarkSet& set, FacialPart part, const PartLayout& layout = PartLayout::ibug68());

/// Ordered frames of one animation clip; never empty.
class LandmarkSequence {
 public:
  explicit LandmarkSequence(std::vector<LandmarkSet> frames, double fps = kDefaultFps);

  std::size_t size() const {
    return frames_.size();
  }
  const LandmarkSet& operator[](std::size_t i) const {
    return frames_[i];
  }
  const std::vector<LandmarkSet>& frames() const {
    return frames_;
  }
  double fps() const {
    return fps_;
  }

  friend bool operator==(const LandmarkSequence&, const LandmarkSequence&) = default;

 private:
  std::vector<LandmarkSet> frames_;
  double fps_;
};

} // namespace reposer
