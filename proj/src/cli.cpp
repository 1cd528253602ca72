#include "reposer/cli.hpp"

#include "reposer/error.hpp"
#include "reposer/io.hpp"
#include "reposer/metrics.hpp"
#include "reposer/pipeline.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <ostream>
#include <string>

namespace reposer {

namespace fs = std::filesystem;

namespace {

std::string fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
  return buf;
}

// "HxW", e.g. "512x512"
ImageSize parseSize(const std::string& text) {
  const auto x = text.find('x');
  try {
    if (x == std::string::npos) {
      throw std::invalid_argument(text);
    }
    std::size_t used = 0;
    const auto h = std::stoul(text.substr(0, x), &used);
    if (used != x) {
      throw std::invalid_argument(text);
    }
    const auto tail = text.substr(x + 1);
    const auto w = std::stoul(tail, &used);
    if (used != tail.size() || h == 0 || w == 0) {
      throw std::invalid_argument(text);
    }
    return {h, w};
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::InvalidArgument, "image size must look like HEIGHTxWIDTH, got '" + text + "'");
  }
}

std::optional<ImageSize> optionalSize(const std::string& text) {
  if (text.empty()) {
    return std::nullopt;
  }
  return parseSize(text);
}

void writeText(const fs::path& path, const std::string& text) {
  writeBytes(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

struct RetargetFlags {
  bool scaleGlobal = false;
  double epsilon = RetargetConfig{}.ratioEpsilon;

  void add(CLI::App* cmd) {
    cmd->add_flag("--scale-global", scaleGlobal, "Scale the global translation by the face-boundary extent ratio");
    cmd->add_option("--eps", epsilon, "Ratio guard threshold in pixels")->capture_default_str();
  }

  RetargetConfig config() const {
    RetargetConfig cfg;
    cfg.scaleGlobalTranslation = scaleGlobal;
    cfg.ratioEpsilon = epsilon;
    cfg.validate();
    return cfg;
  }
};

struct RenderFlags {
  int radius = RenderStyle{}.radius;
  bool lines = false;

  void add(CLI::App* cmd) {
    cmd->add_option("--radius", radius, "Landmark disc radius in pixels")->capture_default_str();
    cmd->add_flag("--lines", lines, "Join landmarks along the face contours");
  }

  RenderStyle style() const {
    return {radius, lines};
  }
};

int renderExit(const RenderSummary& summary, std::ostream& err) {
  if (summary.clampedPoints > 0) {
    err << "warning: " << summary.clampedPoints << " landmark(s) outside the canvas were clamped\n";
    return static_cast<int>(ExitCode::OutOfCanvas);
  }
  return static_cast<int>(ExitCode::Success);
}

} // namespace

int runCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Landmark reposing toolkit: match, retarget, evaluate and render 68-point facial landmarks"};
  app.require_subcommand(1);

  // match
  auto* match = app.add_subcommand("match", "Match reference landmarks against annotated target feature maps");
  std::string refFeat, targetsManifest, matchOut, refSize;
  match->add_option("--ref-feat", refFeat, "Reference feature map (FSHT)")->required();
  match->add_option("--targets", targetsManifest, "Target manifest or gallery selection (JSON)")->required();
  match->add_option("--out", matchOut, "Output landmark file")->required();
  match->add_option("--ref-size", refSize, "Reference image size HxW (default: size of the first target)");

  // gallery
  auto* gallery = app.add_subcommand("gallery", "Pick the closest gallery domain for every facial part");
  std::string refEmbeds, galleryManifest, galleryOut;
  gallery->add_option("--ref-embeds", refEmbeds, "Directory with <part>.fshe reference embeddings")->required();
  gallery->add_option("--gallery", galleryManifest, "Gallery manifest (JSON)")->required();
  gallery->add_option("--out", galleryOut, "Output selection file")->required();

  // retarget
  auto* retarget = app.add_subcommand("retarget", "Transfer driving landmark motion onto reference landmarks");
  std::string refLandmarks, drivingLandmarks, retargetOut;
  RetargetFlags retargetFlags;
  retarget->add_option("--ref", refLandmarks, "Reference landmark file (frame 0 is used)")->required();
  retarget->add_option("--driving", drivingLandmarks, "Driving landmark sequence")->required();
  retarget->add_option("--out", retargetOut, "Output landmark sequence")->required();
  retargetFlags.add(retarget);

  // eval
  auto* eval = app.add_subcommand("eval", "Evaluate landmarks");
  eval->require_subcommand(1);
  auto* evalNme = eval->add_subcommand("nme", "Normalized mean error (percent of the ground-truth box diagonal)");
  std::string predPath, gtPath;
  evalNme->add_option("--pred", predPath, "Predicted landmark file")->required();
  evalNme->add_option("--gt", gtPath, "Ground-truth landmark file")->required();
  auto* evalTraj = eval->add_subcommand("traj", "Mean landmark trajectory error in pixels");
  std::string trajPred, trajRef;
  evalTraj->add_option("--pred", trajPred, "Predicted landmark sequence")->required();
  evalTraj->add_option("--ref", trajRef, "Reference landmark sequence")->required();

  // render
  auto* render = app.add_subcommand("render", "Render landmark frames as PPM images");
  std::string renderLandmarks, renderDir, renderSize;
  RenderFlags renderFlags;
  render->add_option("--landmarks", renderLandmarks, "Landmark file")->required();
  render->add_option("--out-dir", renderDir, "Output directory")->required();
  render->add_option("--size", renderSize, "Canvas size HxW (default: the file's image size)");
  renderFlags.add(render);

  // pipeline
  auto* pipeline = app.add_subcommand("pipeline", "gallery -> match -> retarget -> render");
  PipelineOptions pipelineOptions;
  std::string pipelineRefSize;
  RetargetFlags pipelineRetarget;
  RenderFlags pipelineRender;
  pipeline->add_option("--ref-feat", pipelineOptions.refFeatures, "Reference feature map (FSHT)")->required();
  pipeline->add_option("--ref-embeds", pipelineOptions.refEmbeddingsDir, "Directory with <part>.fshe reference embeddings")
      ->required();
  pipeline->add_option("--gallery", pipelineOptions.galleryManifest, "Gallery manifest (JSON)")->required();
  pipeline->add_option("--driving", pipelineOptions.driving, "Driving landmark sequence")->required();
  pipeline->add_option("--out-dir", pipelineOptions.outDir, "Output directory")->required();
  pipeline->add_option("--ref-size", pipelineRefSize, "Reference image size HxW (default: size of the first target)");
  pipelineRetarget.add(pipeline);
  pipelineRender.add(pipeline);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return static_cast<int>(ExitCode::Success);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return static_cast<int>(ExitCode::ValidationError);
  }

  try {
    if (match->parsed()) {
      const auto manifest = readTargetManifest(targetsManifest);
      const auto targets = loadTargets(manifest);
      const auto size = resolveRefImageSize(refSize.empty() ? manifest.refImageSize : optionalSize(refSize), targets);
      const auto landmarks = matchReference(readTensorFile(refFeat), size, targets);
      writeLandmarkFile(matchOut, {size, LandmarkSequence({landmarks})});
    } else if (gallery->parsed()) {
      const auto gm = readGalleryManifest(galleryManifest);
      const auto selection = assembleTargets(readReferenceEmbeddings(refEmbeds), gm);
      writeText(galleryOut, serializeSelection(selection));
      for (const auto& [part, sel] : selection) {
        out << partName(part) << " " << sel.domain->name << " " << fixed(sel.similarity, 6) << "\n";
      }
    } else if (retarget->parsed()) {
      const auto cfg = retargetFlags.config();
      const auto ref = readLandmarkFile(refLandmarks);
      const auto driving = readLandmarkFile(drivingLandmarks);
      if (ref.sequence.size() > 1) {
        err << "warning: reference file has " << ref.sequence.size() << " frames; using frame 0\n";
      }
      const auto result = retargetSequence(ref.sequence[0], driving.sequence, cfg);
      writeLandmarkFile(retargetOut, {ref.imageSize, result});
    } else if (evalNme->parsed()) {
      const auto pred = readLandmarkFile(predPath);
      const auto gt = readLandmarkFile(gtPath);
      const auto report = nmeReport(pred.sequence.frames(), gt.sequence.frames());
      for (std::size_t i = 0; i < report.perImage.size(); ++i) {
        out << "image " << i << " " << fixed(report.perImage[i], 3) << "\n";
      }
      out << "mean " << fixed(report.mean, 3) << "\n";
    } else if (evalTraj->parsed()) {
      const auto pred = readLandmarkFile(trajPred);
      const auto ref = readLandmarkFile(trajRef);
      out << "trajectory_error " << fixed(trajectoryError(pred.sequence, ref.sequence), 6) << "\n";
    } else if (render->parsed()) {
      const auto file = readLandmarkFile(renderLandmarks);
      const auto canvas = renderSize.empty() ? file.imageSize : parseSize(renderSize);
      return renderExit(renderSequence(file.sequence, canvas, renderFlags.style(), renderDir), err);
    } else if (pipeline->parsed()) {
      pipelineOptions.refImageSize = optionalSize(pipelineRefSize);
      pipelineOptions.retarget = pipelineRetarget.config();
      pipelineOptions.style = pipelineRender.style();
      const auto result = runPipeline(pipelineOptions);
      out << "frames " << result.render.framesWritten << "\n";
      return renderExit(result.render, err);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(isIoError(e.code()) ? ExitCode::IoError : ExitCode::ValidationError);
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::IoError);
  }
  return static_cast<int>(ExitCode::Success);
}

} // namespace reposer
