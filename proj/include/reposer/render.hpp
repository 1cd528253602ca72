#pragma once

#include "reposer/landmarks.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace reposer {

using Rgb = std::array<std::uint8_t, 3>;

/// 8-bit RGB raster, row-major, 3 bytes per pixel.
struct Image {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> rgb;

  Rgb pixel(std::size_t x, std::size_t y) const;

  friend bool operator==(const Image&, const Image&) = default;
};

struct RenderStyle {
  int radius = 2;
  bool polylines = false;
};

inline constexpr std::size_t kMinCanvasSide = 64;

/// Fixed part colours; no two parts share a colour and none is white.
Rgb partColor(FacialPart part);

struct RenderResult {
  Image image;
  /// Landmarks outside the canvas; they were clamped to its border.
  std::size_t clampedPoints = 0;
};

/// White canvas with a filled disc per landmark in its part's colour.
/// With `polylines`, consecutive landmarks of each contour (jaw, brows, nose
/// bridge and base, both eyes, outer and inner lips) are joined first.
/// Throws InvalidArgument for canvases smaller than 64x64 or a negative radius.
RenderResult renderFrame(const LandmarkSet& set, ImageSize canvas, const RenderStyle& style = {});

/// Binary PPM (P6).
std::vector<std::uint8_t> encodePpm(const Image& image);

/// "frame_0007.ppm": zero-padded to at least four digits, or to the digit
/// count of the last index for longer sequences.
std::string frameFileName(std::size_t index, std::size_t frameCount);

} // namespace reposer
