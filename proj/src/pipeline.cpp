#include "reposer/pipeline.hpp"

#include "reposer/error.hpp"

#include <json.hpp>

#include <algorithm>

namespace reposer {

namespace fs = std::filesystem;

namespace {

void ensureDirectory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw Error(ErrorCode::IoFailure, "cannot create directory '" + dir.string() + "': " + ec.message());
  }
}

void writeText(const fs::path& path, const std::string& text) {
  writeBytes(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

} // namespace

std::vector<AnnotatedTarget> loadTargets(const std::vector<TargetRef>& refs) {
  std::vector<AnnotatedTarget> targets;
  targets.reserve(refs.size());
  for (const auto& ref : refs) {
    const auto landmarks = readLandmarkFile(ref.landmarks);
    const auto map = readTensorFile(ref.features).withImageSize(landmarks.imageSize);
    try {
      targets.emplace_back(map, landmarks.sequence[0]);
    } catch (const Error& e) {
      throw Error(e.code(), ref.landmarks.string() + ": " + e.detail(), e.position());
    }
  }
  return targets;
}

PartTargets loadTargets(const TargetManifest& manifest) {
  // parts often share the same target files; load each list once
  PartTargets out;
  std::vector<std::pair<const std::vector<TargetRef>*, FacialPart>> loaded;
  for (const auto& [part, refs] : manifest.parts) {
    bool reused = false;
    for (const auto& [prevRefs, prevPart] : loaded) {
      const bool same = std::equal(refs.begin(), refs.end(), prevRefs->begin(), prevRefs->end(), [](const auto& a, const auto& b) {
        return a.features == b.features && a.landmarks == b.landmarks;
      });
      if (same) {
        out[part] = out[prevPart];
        reused = true;
        break;
      }
    }
    if (!reused) {
      out[part] = loadTargets(refs);
      loaded.emplace_back(&refs, part);
    }
  }
  return out;
}

ImageSize resolveRefImageSize(std::optional<ImageSize> requested, const PartTargets& targets) {
  if (requested) {
    return *requested;
  }
  for (const auto& [part, list] : targets) {
    if (!list.empty()) {
      return list.front().featureMap().imageSize();
    }
  }
  throw Error(ErrorCode::InvalidArgument, "no targets to take the reference image size from");
}

LandmarkSet matchReference(
    const FeatureMap& refMap,
    ImageSize refImageSize,
    const PartTargets& targets,
    const PartLayout& layout) {
  const CosineMatcher matcher(toImageResolution(refMap.withImageSize(refImageSize)));
  PartialLandmarks matched;
  for (const auto part : kAllParts) {
    const auto it = targets.find(part);
    if (it == targets.end() || it->second.empty()) {
      throw Error(
          ErrorCode::MissingPart,
          "no targets for part '" + std::string(partName(part)) + "'",
          static_cast<std::size_t>(part));
    }
    const auto indices = layout.indices(part);
    matched.merge(matchLandmarks(matcher, it->second, indices));
  }
  return matched.toLandmarkSet();
}

TargetManifest selectionToTargets(const std::map<FacialPart, PartSelection>& selection) {
  TargetManifest manifest;
  for (const auto& [part, sel] : selection) {
    auto& refs = manifest.parts[part];
    for (const auto& entry : sel.domain->entries) {
      refs.push_back({entry.features, entry.landmarks});
    }
  }
  return manifest;
}

std::string serializeSelection(const std::map<FacialPart, PartSelection>& selection) {
  nlohmann::json parts = nlohmann::json::object();
  for (const auto& [part, sel] : selection) {
    nlohmann::json targets = nlohmann::json::array();
    for (const auto& entry : sel.domain->entries) {
      targets.push_back({
          {"features", fs::weakly_canonical(entry.features).string()},
          {"landmarks", fs::weakly_canonical(entry.landmarks).string()},
      });
    }
    parts[std::string(partName(part))] = {
        {"domain", sel.domain->name},
        {"domain_index", sel.domainIndex},
        {"similarity", sel.similarity},
        {"targets", std::move(targets)},
    };
  }
  const nlohmann::json root = {{"version", kFormatVersion}, {"parts", std::move(parts)}};
  return root.dump(2) + "\n";
}

RenderSummary renderSequence(
    const LandmarkSequence& sequence,
    ImageSize canvas,
    const RenderStyle& style,
    const fs::path& dir) {
  ensureDirectory(dir);
  RenderSummary summary;
  for (std::size_t j = 0; j < sequence.size(); ++j) {
    const auto result = renderFrame(sequence[j], canvas, style);
    writeBytes(dir / frameFileName(j, sequence.size()), encodePpm(result.image));
    summary.clampedPoints += result.clampedPoints;
    ++summary.framesWritten;
  }
  return summary;
}

PipelineResult runPipeline(const PipelineOptions& options) {
  options.retarget.validate();

  const auto refEmbeddings = readReferenceEmbeddings(options.refEmbeddingsDir);
  const auto gallery = readGalleryManifest(options.galleryManifest);
  const auto selection = assembleTargets(refEmbeddings, gallery);

  const auto targets = loadTargets(selectionToTargets(selection));
  const auto refImageSize = resolveRefImageSize(options.refImageSize, targets);
  const auto refMap = readTensorFile(options.refFeatures);
  const auto reference = matchReference(refMap, refImageSize, targets, options.retarget.layout);

  const auto driving = readLandmarkFile(options.driving);
  auto retargeted = retargetSequence(reference, driving.sequence, options.retarget);

  ensureDirectory(options.outDir);
  writeText(options.outDir / "selection.json", serializeSelection(selection));
  writeLandmarkFile(options.outDir / "reference.json", {refImageSize, LandmarkSequence({reference}, driving.sequence.fps())});
  writeLandmarkFile(options.outDir / "retargeted.json", {refImageSize, retargeted});
  const auto summary = renderSequence(retargeted, refImageSize, options.style, options.outDir / "frames");

  return {reference, std::move(retargeted), summary};
}

} // namespace reposer
