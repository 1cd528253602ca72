#include "reposer/metrics.hpp"

#include "reposer/error.hpp"

#include <algorithm>
#include <string>

namespace reposer {

namespace {

constexpr double kMinBoxDiagonal = 1e-6;

double boxDiagonal(const LandmarkSet& set) {
  double minX = set[0].x;
  double maxX = set[0].x;
  double minY = set[0].y;
  double maxY = set[0].y;
  for (const auto& p : set.points()) {
    minX = std::min(minX, p.x);
    maxX = std::max(maxX, p.x);
    minY = std::min(minY, p.y);
    maxY = std::max(maxY, p.y);
  }
  return distance({minX, minY}, {maxX, maxY});
}

} // namespace

double nme(const LandmarkSet& pred, const LandmarkSet& gt) {
  const double diagonal = boxDiagonal(gt);
  if (diagonal < kMinBoxDiagonal) {
    throw Error(ErrorCode::DegenerateBox, "ground-truth bounding box is degenerate");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < kNumLandmarks; ++i) {
    sum += distance(pred[i], gt[i]);
  }
  return 100.0 * (sum / static_cast<double>(kNumLandmarks)) / diagonal;
}

NmeReport nmeReport(std::span<const LandmarkSet> preds, std::span<const LandmarkSet> gts) {
  if (preds.size() != gts.size()) {
    throw Error(
        ErrorCode::LengthMismatch,
        std::to_string(preds.size()) + " predictions vs " + std::to_string(gts.size()) + " ground truths");
  }
  NmeReport report;
  report.perImage.reserve(preds.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    try {
      report.perImage.push_back(nme(preds[i], gts[i]));
    } catch (const Error& e) {
      throw e.withFrame(i);
    }
    sum += report.perImage.back();
  }
  if (!preds.empty()) {
    report.mean = sum / static_cast<double>(preds.size());
  }
  return report;
}

double trajectoryError(const LandmarkSequence& pred, const LandmarkSequence& ref) {
  if (pred.size() != ref.size()) {
    throw Error(
        ErrorCode::LengthMismatch,
        std::to_string(pred.size()) + " predicted frames vs " + std::to_string(ref.size()) + " reference frames");
  }
  double sum = 0.0;
  for (std::size_t j = 0; j < pred.size(); ++j) {
    for (std::size_t i = 0; i < kNumLandmarks; ++i) {
      sum += distance(pred[j][i], ref[j][i]);
    }
  }
  return sum / static_cast<double>(pred.size() * kNumLandmarks);
}

} // namespace reposer
