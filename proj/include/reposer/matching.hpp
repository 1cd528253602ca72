#pragma once

#include "reposer/feature_map.hpp"
#include "reposer/landmarks.hpp"

#include <array>
#include <optional>
#include <span>
#include <vector>

namespace reposer {

/// Feature vector at one image position.
struct Descriptor {
  std::vector<double> values;

  double norm() const;
};

/// One target image: its feature map and its annotated landmarks, in pixel
/// coordinates of `featureMap.imageSize()`.
class AnnotatedTarget {
 public:
  /// Throws OutOfBounds(landmark) when a landmark lies outside [0,W) x [0,H).
  AnnotatedTarget(FeatureMap featureMap, LandmarkSet landmarks);

  const FeatureMap& featureMap() const {
    return featureMap_;
  }
  const LandmarkSet& landmarks() const {
    return landmarks_;
  }

 private:
  FeatureMap featureMap_;
  LandmarkSet landmarks_;
};

/// Descriptor at the grid cell nearest to `p` (rounding half away from zero).
/// The map is sampled on its own grid, so pass an image-resolution map.
/// Throws OutOfBounds if p lies outside [-0.5, W-0.5) x [-0.5, H-0.5).
Descriptor descriptorAt(const FeatureMap& map, const Point2& p);

/// Mean over targets of the descriptor at landmark `landmarkIndex`, each
/// target sampled on its map upsampled to its image size.
/// Throws MixedShapes if channel counts or image sizes differ, InvalidArgument
/// for an empty target list.
Descriptor averageDescriptor(std::span<const AnnotatedTarget> targets, std::size_t landmarkIndex);

/// Exhaustive cosine-distance search over the cells of one image-resolution
/// reference map. Cell norms are computed once, so one matcher serves any
/// number of queries.
class CosineMatcher {
 public:
  explicit CosineMatcher(FeatureMap referenceMap);

  const FeatureMap& map() const {
    return map_;
  }

  /// Grid point (x = column, y = row) minimising the cosine distance
  /// 1 - q.f / (|q||f|) to `query`. Zero-norm cells score 2. Ties keep the
  /// smallest row-major index.
  /// Throws ZeroQuery for a zero query, DimensionMismatch on a channel mismatch.
  Point2 match(const Descriptor& query) const;

 private:
  FeatureMap map_;
  std::vector<double> cellNorms_;
};

/// One-shot form of CosineMatcher::match.
Point2 matchPoint(const FeatureMap& refMap, const Descriptor& query);

/// Matched landmarks; indices that were not requested stay empty.
struct PartialLandmarks {
  std::array<std::optional<Point2>, kNumLandmarks> points;

  bool complete() const;
  std::size_t count() const;

  /// Throws WrongCount(matched count) unless every index is present.
  LandmarkSet toLandmarkSet() const;

  /// Copies the present points of `other` over this one.
  void merge(const PartialLandmarks& other);
};

/// For each requested index i: matchPoint(ref, averageDescriptor(targets, i)).
/// The reference map is brought to its image resolution first.
PartialLandmarks matchLandmarks(
    const FeatureMap& refMap,
    std::span<const AnnotatedTarget> targets,
    std::span<const std::size_t> indices);

/// Same as above with a prepared matcher for the reference map.
PartialLandmarks matchLandmarks(
    const CosineMatcher& matcher,
    std::span<const AnnotatedTarget> targets,
    std::span<const std::size_t> indices);

} // namespace reposer
