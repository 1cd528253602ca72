#pragma once

#include "reposer/gallery.hpp"
#include "reposer/io.hpp"
#include "reposer/matching.hpp"
#include "reposer/render.hpp"
#include "reposer/retarget.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <vector>

namespace reposer {

using PartTargets = std::map<FacialPart, std::vector<AnnotatedTarget>>;

/// Loads the feature map and first landmark frame of each target. The map's
/// image size is taken from the landmark file.
std::vector<AnnotatedTarget> loadTargets(const std::vector<TargetRef>& refs);

PartTargets loadTargets(const TargetManifest& manifest);

/// Matches each part's landmarks against that part's targets. The reference
/// map is upsampled once to `refImageSize`.
LandmarkSet matchReference(
    const FeatureMap& refMap,
    ImageSize refImageSize,
    const PartTargets& targets,
    const PartLayout& layout = PartLayout::ibug68());

/// Reference image size: explicit value, else the size of the first target.
ImageSize resolveRefImageSize(std::optional<ImageSize> requested, const PartTargets& targets);

/// Target manifest equivalent of a gallery selection.
TargetManifest selectionToTargets(const std::map<FacialPart, PartSelection>& selection);

/// JSON selection file; readable back through readTargetManifest.
std::string serializeSelection(const std::map<FacialPart, PartSelection>& selection);

struct RenderSummary {
  std::size_t framesWritten = 0;
  std::size_t clampedPoints = 0;
};

/// Writes one PPM per frame into `dir` (created if needed).
RenderSummary renderSequence(
    const LandmarkSequence& sequence,
    ImageSize canvas,
    const RenderStyle& style,
    const std::filesystem::path& dir);

struct PipelineOptions {
  std::filesystem::path refFeatures;
  std::filesystem::path refEmbeddingsDir;
  std::filesystem::path galleryManifest;
  std::filesystem::path driving;
  std::filesystem::path outDir;
  std::optional<ImageSize> refImageSize;
  RetargetConfig retarget;
  RenderStyle style;
};

struct PipelineResult {
  LandmarkSet reference;
  LandmarkSequence retargeted;
  RenderSummary render;
};

/// gallery -> match -> retarget -> render. Writes into `outDir`:
///   selection.json, reference.json, retargeted.json, frames/frame_NNNN.ppm
PipelineResult runPipeline(const PipelineOptions& options);

} // namespace reposer
