#pragma once

#include "reposer/landmarks.hpp"

#include <span>
#include <vector>

namespace reposer {

/// Normalized mean error in percent: 100 * mean_i |pred_i - gt_i| / D, with D
/// the diagonal of the ground-truth bounding box.
/// Throws DegenerateBox when D < 1e-6 px.
double nme(const LandmarkSet& pred, const LandmarkSet& gt);

struct NmeReport {
  std::vector<double> perImage;
  double mean = 0.0;
};

/// Pairwise nme over aligned lists. Throws LengthMismatch or DegenerateBox.
NmeReport nmeReport(std::span<const LandmarkSet> preds, std::span<const LandmarkSet> gts);

/// Mean Euclidean distance (pixels) over all frames and landmarks.
/// Throws LengthMismatch when the frame counts differ.
double trajectoryError(const LandmarkSequence& pred, const LandmarkSequence& ref);

} // namespace reposer
