#include "reposer/render.hpp"

#include "reposer/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <span>
#include <utility>

namespace reposer {

namespace {

struct Contour {
  std::size_t first;
  std::size_t last;
  bool closed;
};

// iBUG-68 contours.
constexpr std::array<Contour, 9> kContours = {{
    {0, 16, false}, // jaw
    {17, 21, false}, // right brow
    {22, 26, false}, // left brow
    {27, 30, false}, // nose bridge
    {31, 35, false}, // nose base
    {36, 41, true}, // right eye
    {42, 47, true}, // left eye
    {48, 59, true}, // outer lip
    {60, 67, true}, // inner lip
}};

struct Pixel {
  long x;
  long y;
};

class Canvas {
 public:
  Canvas(std::size_t width, std::size_t height) : image_{width, height, std::vector<std::uint8_t>(width * height * 3, 255)} {}

  void set(long x, long y, const Rgb& color) {
    if (x < 0 || y < 0 || x >= static_cast<long>(image_.width) || y >= static_cast<long>(image_.height)) {
      return;
    }
    const auto at = (static_cast<std::size_t>(y) * image_.width + static_cast<std::size_t>(x)) * 3;
    std::copy(color.begin(), color.end(), image_.rgb.begin() + static_cast<std::ptrdiff_t>(at));
  }

  void disc(const Pixel& c, int radius, const Rgb& color) {
    const long r = radius;
    for (long dy = -r; dy <= r; ++dy) {
      for (long dx = -r; dx <= r; ++dx) {
        if (dx * dx + dy * dy <= r * r) {
          set(c.x + dx, c.y + dy, color);
        }
      }
    }
  }

  // Bresenham
  void line(Pixel a, const Pixel& b, const Rgb& color) {
    const long dx = std::labs(b.x - a.x);
    const long dy = -std::labs(b.y - a.y);
    const long sx = a.x < b.x ? 1 : -1;
    const long sy = a.y < b.y ? 1 : -1;
    long err = dx + dy;
    while (true) {
      set(a.x, a.y, color);
      if (a.x == b.x && a.y == b.y) {
        break;
      }
      const long e2 = 2 * err;
      if (e2 >= dy) {
        err += dy;
        a.x += sx;
      }
      if (e2 <= dx) {
        err += dx;
        a.y += sy;
      }
    }
  }

  Image take() {
    return std::move(image_);
  }

 private:
  Image image_;
};

} // namespace

Rgb Image::pixel(std::size_t x, std::size_t y) const {
  const auto at = (y * width + x) * 3;
  return {rgb[at], rgb[at + 1], rgb[at + 2]};
}

Rgb partColor(FacialPart part) {
  switch (part) {
    case FacialPart::Eyes:
      return {0, 130, 200};
    case FacialPart::Mouth:
      return {145, 30, 180};
    case FacialPart::Nose:
      return {60, 180, 75};
    case FacialPart::Eyebrows:
      return {245, 130, 48};
    case FacialPart::FaceBoundary:
      return {230, 25, 75};
  }
  return {0, 0, 0};
}

RenderResult renderFrame(const LandmarkSet& set, ImageSize canvas, const RenderStyle& style) {
  if (canvas.width < kMinCanvasSide || canvas.height < kMinCanvasSide) {
    throw Error(ErrorCode::InvalidArgument, "canvas must be at least 64x64");
  }
  if (style.radius < 0) {
    throw Error(ErrorCode::InvalidArgument, "disc radius must not be negative");
  }
  const auto layout = PartLayout::ibug68();
  const double maxX = static_cast<double>(canvas.width - 1);
  const double maxY = static_cast<double>(canvas.height - 1);

  RenderResult result;
  std::array<Pixel, kNumLandmarks> pixels;
  for (std::size_t i = 0; i < kNumLandmarks; ++i) {
    const auto& p = set[i];
    if (p.x < 0.0 || p.y < 0.0 || p.x > maxX || p.y > maxY) {
      ++result.clampedPoints;
    }
    pixels[i] = {std::lround(std::clamp(p.x, 0.0, maxX)), std::lround(std::clamp(p.y, 0.0, maxY))};
  }

  Canvas out(canvas.width, canvas.height);
  if (style.polylines) {
    for (const auto& contour : kContours) {
      const auto color = partColor(layout.partOf(contour.first));
      for (std::size_t i = contour.first; i < contour.last; ++i) {
        out.line(pixels[i], pixels[i + 1], color);
      }
      if (contour.closed) {
        out.line(pixels[contour.last], pixels[contour.first], color);
      }
    }
  }
  for (std::size_t i = 0; i < kNumLandmarks; ++i) {
    out.disc(pixels[i], style.radius, partColor(layout.partOf(i)));
  }
  result.image = out.take();
  return result;
}

std::vector<std::uint8_t> encodePpm(const Image& image) {
  const std::string header = "P6\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), image.rgb.begin(), image.rgb.end());
  return out;
}

std::string frameFileName(std::size_t index, std::size_t frameCount) {
  const std::size_t last = frameCount == 0 ? 0 : frameCount - 1;
  const std::size_t digits = std::max<std::size_t>(4, std::to_string(last).size());
  std::string number = std::to_string(index);
  if (number.size() < digits) {
    number.insert(0, digits - number.size(), '0');
  }
  return "frame_" + number + ".ppm";
}

} // namespace reposer
