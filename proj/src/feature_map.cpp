#include "reposer/feature_map.hpp"

#include "reposer/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace reposer {

namespace {

struct Tap {
  std::size_t lo;
  std::size_t hi;
  double frac;
};

// Source coordinate of an output cell centre, clamped to the valid range.
Tap sourceTap(std::size_t dst, std::size_t inSize, std::size_t outSize) {
  double src = (static_cast<double>(dst) + 0.5) * static_cast<double>(inSize) / static_cast<double>(outSize) - 0.5;
  src = std::clamp(src, 0.0, static_cast<double>(inSize - 1));
  const auto lo = static_cast<std::size_t>(std::floor(src));
  const auto hi = std::min(lo + 1, inSize - 1);
  return {lo, hi, src - static_cast<double>(lo)};
}

float interpolate(const FeatureMap& map, std::size_t channel, const Tap& ty, const Tap& tx) {
  const double v00 = map.at(channel, ty.lo, tx.lo);
  const double v01 = map.at(channel, ty.lo, tx.hi);
  const double v10 = map.at(channel, ty.hi, tx.lo);
  const double v11 = map.at(channel, ty.hi, tx.hi);
  const double top = (1.0 - tx.frac) * v00 + tx.frac * v01;
  const double bottom = (1.0 - tx.frac) * v10 + tx.frac * v11;
  return static_cast<float>((1.0 - ty.frac) * top + ty.frac * bottom);
}

} // namespace

FeatureMap::FeatureMap(std::size_t channels, std::size_t height, std::size_t width, std::vector<float> data)
    : FeatureMap(channels, height, width, std::move(data), ImageSize{height, width}) {}

FeatureMap::FeatureMap(
    std::size_t channels,
    std::size_t height,
    std::size_t width,
    std::vector<float> data,
    ImageSize imageSize)
    : channels_(channels), height_(height), width_(width), data_(std::move(data)), imageSize_(imageSize) {
  if (channels_ == 0 || height_ == 0 || width_ == 0) {
    throw Error(ErrorCode::InvalidArgument, "feature map dimensions must be at least 1");
  }
  if (imageSize_.height == 0 || imageSize_.width == 0) {
    throw Error(ErrorCode::InvalidArgument, "feature map image size must be at least 1x1");
  }
  if (height_ > std::numeric_limits<std::size_t>::max() / width_ / channels_ ||
      data_.size() != channels_ * height_ * width_) {
    throw Error(ErrorCode::InvalidArgument, "feature map data size does not match C*H*W", data_.size());
  }
  for (std::size_t i = 0; i < data_.size(); ++i) {
    if (!std::isfinite(data_[i])) {
      throw Error(ErrorCode::NonFinite, "feature value is NaN or infinite", i);
    }
  }
}

FeatureMap FeatureMap::withImageSize(ImageSize imageSize) const {
  return FeatureMap(channels_, height_, width_, data_, imageSize);
}

float sampleUpsampled(
    const FeatureMap& map,
    std::size_t outH,
    std::size_t outW,
    std::size_t channel,
    std::size_t row,
    std::size_t col) {
  return interpolate(map, channel, sourceTap(row, map.height(), outH), sourceTap(col, map.width(), outW));
}

FeatureMap upsampleBilinear(const FeatureMap& map, std::size_t outH, std::size_t outW) {
  if (outH == 0 || outW == 0) {
    throw Error(ErrorCode::InvalidArgument, "upsample target size must be at least 1x1");
  }
  std::vector<Tap> rows(outH);
  std::vector<Tap> cols(outW);
  for (std::size_t r = 0; r < outH; ++r) {
    rows[r] = sourceTap(r, map.height(), outH);
  }
  for (std::size_t c = 0; c < outW; ++c) {
    cols[c] = sourceTap(c, map.width(), outW);
  }
  std::vector<float> out(map.channels() * outH * outW);
  auto it = out.begin();
  for (std::size_t ch = 0; ch < map.channels(); ++ch) {
    for (std::size_t r = 0; r < outH; ++r) {
      for (std::size_t c = 0; c < outW; ++c) {
        *it++ = interpolate(map, ch, rows[r], cols[c]);
      }
    }
  }
  return FeatureMap(map.channels(), outH, outW, std::move(out), ImageSize{outH, outW});
}

FeatureMap toImageResolution(const FeatureMap& map) {
  if (map.atImageResolution()) {
    return map;
  }
  return upsampleBilinear(map, map.imageSize().height, map.imageSize().width);
}

} // namespace reposer
