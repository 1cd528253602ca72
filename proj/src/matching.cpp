#include "reposer/matching.hpp"

#include "reposer/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace reposer {

namespace {

constexpr double kZeroNormDistance = 2.0;

bool insideImage(const Point2& p, const ImageSize& size) {
  return p.x >= 0.0 && p.y >= 0.0 && p.x < static_cast<double>(size.width) &&
      p.y < static_cast<double>(size.height);
}

// Nearest grid cell, throwing OutOfBounds outside [-0.5, n-0.5) on either axis.
std::size_t nearestCell(double coord, std::size_t n) {
  if (!(coord >= -0.5 && coord < static_cast<double>(n) - 0.5)) {
    throw Error(ErrorCode::OutOfBounds, "sample position outside the feature map", static_cast<std::size_t>(std::max(0.0, coord)));
  }
  const double rounded = std::round(coord);
  return static_cast<std::size_t>(std::clamp(rounded, 0.0, static_cast<double>(n - 1)));
}

// Target landmarks are already inside [0,W) x [0,H); only the upper edge can round past the grid.
std::size_t clampedCell(double coord, std::size_t n) {
  return static_cast<std::size_t>(std::clamp(std::round(coord), 0.0, static_cast<double>(n - 1)));
}

double dotNorm(std::span<const double> v) {
  double sum = 0.0;
  for (const double x : v) {
    sum += x * x;
  }
  return std::sqrt(sum);
}

} // namespace

double Descriptor::norm() const {
  return dotNorm(values);
}

AnnotatedTarget::AnnotatedTarget(FeatureMap featureMap, LandmarkSet landmarks)
    : featureMap_(std::move(featureMap)), landmarks_(landmarks) {
  for (std::size_t i = 0; i < kNumLandmarks; ++i) {
    if (!insideImage(landmarks_[i], featureMap_.imageSize())) {
      throw Error(ErrorCode::OutOfBounds, "target landmark outside its image", i);
    }
  }
}

Descriptor descriptorAt(const FeatureMap& map, const Point2& p) {
  const auto col = nearestCell(p.x, map.width());
  const auto row = nearestCell(p.y, map.height());
  Descriptor d;
  d.values.resize(map.channels());
  for (std::size_t c = 0; c < map.channels(); ++c) {
    d.values[c] = map.at(c, row, col);
  }
  return d;
}

Descriptor averageDescriptor(std::span<const AnnotatedTarget> targets, std::size_t landmarkIndex) {
  if (targets.empty()) {
    throw Error(ErrorCode::InvalidArgument, "average descriptor needs at least one target");
  }
  if (landmarkIndex >= kNumLandmarks) {
    throw Error(ErrorCode::InvalidArgument, "landmark index outside 0..67", landmarkIndex);
  }
  const auto& first = targets.front().featureMap();
  for (std::size_t j = 1; j < targets.size(); ++j) {
    const auto& map = targets[j].featureMap();
    if (map.channels() != first.channels() || map.imageSize() != first.imageSize()) {
      throw Error(ErrorCode::MixedShapes, "targets differ in channel count or image size", j);
    }
  }

  const auto channels = first.channels();
  const auto size = first.imageSize();
  // samples[c * k + j] = channel c of target j
  std::vector<double> samples(channels * targets.size());
  for (std::size_t j = 0; j < targets.size(); ++j) {
    const auto& map = targets[j].featureMap();
    const Point2 p = targets[j].landmarks()[landmarkIndex];
    const auto col = clampedCell(p.x, size.width);
    const auto row = clampedCell(p.y, size.height);
    for (std::size_t c = 0; c < channels; ++c) {
      samples[c * targets.size() + j] = map.atImageResolution()
          ? map.at(c, row, col)
          : sampleUpsampled(map, size.height, size.width, c, row, col);
    }
  }

  Descriptor mean;
  mean.values.resize(channels);
  const auto k = static_cast<double>(targets.size());
  for (std::size_t c = 0; c < channels; ++c) {
    // summing in sorted order makes the mean independent of target order
    const auto begin = samples.begin() + static_cast<std::ptrdiff_t>(c * targets.size());
    const auto end = begin + static_cast<std::ptrdiff_t>(targets.size());
    std::sort(begin, end);
    double sum = 0.0;
    for (auto it = begin; it != end; ++it) {
      sum += *it;
    }
    mean.values[c] = sum / k;
  }
  return mean;
}

CosineMatcher::CosineMatcher(FeatureMap referenceMap)
    : map_(std::move(referenceMap)), cellNorms_(map_.cellCount(), 0.0) {
  const auto cells = map_.cellCount();
  const auto data = map_.data();
  for (std::size_t c = 0; c < map_.channels(); ++c) {
    const float* plane = data.data() + c * cells;
    for (std::size_t i = 0; i < cells; ++i) {
      const double v = plane[i];
      cellNorms_[i] += v * v;
    }
  }
  for (auto& n : cellNorms_) {
    n = std::sqrt(n);
  }
}

Point2 CosineMatcher::match(const Descriptor& query) const {
  if (query.values.size() != map_.channels()) {
    throw Error(
        ErrorCode::DimensionMismatch,
        "descriptor has " + std::to_string(query.values.size()) + " channels, map has " +
            std::to_string(map_.channels()));
  }
  const double queryNorm = query.norm();
  if (queryNorm == 0.0) {
    throw Error(ErrorCode::ZeroQuery, "query descriptor has zero norm");
  }

  const auto cells = map_.cellCount();
  const auto data = map_.data();
  std::vector<double> dots(cells, 0.0);
  for (std::size_t c = 0; c < map_.channels(); ++c) {
    const double q = query.values[c];
    const float* plane = data.data() + c * cells;
    for (std::size_t i = 0; i < cells; ++i) {
      dots[i] += q * static_cast<double>(plane[i]);
    }
  }

  std::size_t best = 0;
  double bestDistance = kZeroNormDistance + 1.0;
  for (std::size_t i = 0; i < cells; ++i) {
    const double d = cellNorms_[i] == 0.0 ? kZeroNormDistance : 1.0 - dots[i] / (queryNorm * cellNorms_[i]);
    if (d < bestDistance) {
      bestDistance = d;
      best = i;
    }
  }
  return {static_cast<double>(best % map_.width()), static_cast<double>(best / map_.width())};
}

Point2 matchPoint(const FeatureMap& refMap, const Descriptor& query) {
  return CosineMatcher(refMap).match(query);
}

bool PartialLandmarks::complete() const {
  return count() == kNumLandmarks;
}

std::size_t PartialLandmarks::count() const {
  return static_cast<std::size_t>(
      std::count_if(points.begin(), points.end(), [](const auto& p) { return p.has_value(); }));
}

LandmarkSet PartialLandmarks::toLandmarkSet() const {
  if (!complete()) {
    throw Error(ErrorCode::WrongCount, "not every landmark was matched", count());
  }
  LandmarkSet::Points out;
  for (std::size_t i = 0; i < kNumLandmarks; ++i) {
    out[i] = *points[i];
  }
  return LandmarkSet(out);
}

void PartialLandmarks::merge(const PartialLandmarks& other) {
  for (std::size_t i = 0; i < kNumLandmarks; ++i) {
    if (other.points[i]) {
      points[i] = other.points[i];
    }
  }
}

PartialLandmarks matchLandmarks(
    const CosineMatcher& matcher,
    std::span<const AnnotatedTarget> targets,
    std::span<const std::size_t> indices) {
  PartialLandmarks result;
  for (const auto i : indices) {
    result.points.at(i) = matcher.match(averageDescriptor(targets, i));
  }
  return result;
}

PartialLandmarks matchLandmarks(
    const FeatureMap& refMap,
    std::span<const AnnotatedTarget> targets,
    std::span<const std::size_t> indices) {
  return matchLandmarks(CosineMatcher(toImageResolution(refMap)), targets, indices);
}

} // namespace reposer
