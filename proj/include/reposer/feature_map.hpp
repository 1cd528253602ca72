#pragma once

#include "reposer/landmarks.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace reposer {

/// Dense C x H x W descriptor tensor, channel-major then row-major.
///
/// `imageSize()` is the resolution of the image the map describes; a map
/// straight out of the extractor is coarser than its image and must be
/// upsampled before it is sampled at landmark positions.
class FeatureMap {
 public:
  /// Throws InvalidArgument on zero dimensions or a size mismatch and
  /// NonFinite(element) on NaN/Inf. `imageSize` defaults to the grid size.
  FeatureMap(std::size_t channels, std::size_t height, std::size_t width, std::vector<float> data);
  FeatureMap(
      std::size_t channels,
      std::size_t height,
      std::size_t width,
      std::vector<float> data,
      ImageSize imageSize);

  std::size_t channels() const {
    return channels_;
  }
  std::size_t height() const {
    return height_;
  }
  std::size_t width() const {
    return width_;
  }
  std::size_t cellCount() const {
    return height_ * width_;
  }
  const ImageSize& imageSize() const {
    return imageSize_;
  }
  bool atImageResolution() const {
    return imageSize_.height == height_ && imageSize_.width == width_;
  }

  std::span<const float> data() const {
    return data_;
  }
  float at(std::size_t channel, std::size_t row, std::size_t col) const {
    return data_[(channel * height_ + row) * width_ + col];
  }

  /// Same tensor, describing an image of a different size.
  FeatureMap withImageSize(ImageSize imageSize) const;

  friend bool operator==(const FeatureMap&, const FeatureMap&) = default;

 private:
  std::size_t channels_;
  std::size_t height_;
  std::size_t width_;
  std::vector<float> data_;
  ImageSize imageSize_;
};

/// Value of the bilinearly upsampled map at output cell (row, col) of an
/// outH x outW grid, using half-pixel centres and edge clamping. This is the
/// exact value `upsampleBilinear` stores for that cell.
float sampleUpsampled(
    const FeatureMap& map,
    std::size_t outH,
    std::size_t outW,
    std::size_t channel,
    std::size_t row,
    std::size_t col);

/// Per-channel bilinear resize to outH x outW; the result describes an image
/// of exactly that size. Throws InvalidArgument for a zero output size.
FeatureMap upsampleBilinear(const FeatureMap& map, std::size_t outH, std::size_t outW);

/// Upsamples to the map's own image size (no-op copy when already there).
FeatureMap toImageResolution(const FeatureMap& map);

} // namespace reposer
