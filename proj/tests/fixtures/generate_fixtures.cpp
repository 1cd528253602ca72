// Writes the bundled test fixtures:
//
//   <out>/e2e/      synthetic character, gallery and 16-frame driving clip
//   <out>/corrupt/  damaged FSHT / FSHE / landmark files plus expected.json
//
// Everything is derived from fixed seeds, so rerunning reproduces the
// committed files byte for byte.

#include "reposer/io.hpp"

#include "synthetic.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>

using namespace reposer;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr ImageSize kRefImage{96, 96};
constexpr std::size_t kGrid = 24;
constexpr std::size_t kChannels = 16;
constexpr std::size_t kEmbeddingDim = 8;
constexpr std::size_t kTargetsPerDomain = 3;
constexpr std::array<float, kTargetsPerDomain> kMatchScales = {0.5f, 1.0f, 2.0f};

void writeText(const fs::path& path, const std::string& text) {
  writeBytes(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

FeatureMap scaled(const FeatureMap& map, float s) {
  std::vector<float> data(map.data().begin(), map.data().end());
  for (auto& v : data) {
    v *= s;
  }
  return FeatureMap(map.channels(), map.height(), map.width(), std::move(data));
}

Embedding randomEmbedding(synth::Rng& rng, float sigma, const Embedding* around = nullptr) {
  std::normal_distribution<float> g(0.0f, sigma);
  Embedding e;
  e.values.resize(kEmbeddingDim);
  for (std::size_t i = 0; i < kEmbeddingDim; ++i) {
    e.values[i] = (around ? around->values[i] : 0.0f) + g(rng);
  }
  return e;
}

// Template face on integer pixels, well inside the 96x96 canvas.
LandmarkSet designedLandmarks() {
  const auto face = synth::templateFace({48, 46}, 56);
  return synth::mapPoints(face, [](const Point2& p) { return Point2{std::round(p.x), std::round(p.y)}; });
}

void writeE2e(const fs::path& dir) {
  fs::create_directories(dir / "targets");
  fs::create_directories(dir / "ref_embeds");
  synth::Rng rng(20240601);

  const auto refMap = synth::randomFeatureMap(rng, kChannels, kGrid, kGrid, {kGrid, kGrid});
  writeTensorFile(dir / "ref.fsht", refMap);
  const auto designed = designedLandmarks();
  writeLandmarkFile(dir / "designed.json", {kRefImage, LandmarkSequence({designed})});

  // the matching domain: rescaled copies of the reference map annotated with
  // the designed landmarks, shared by every part
  for (std::size_t j = 0; j < kTargetsPerDomain; ++j) {
    const std::string stem = "targets/match_" + std::to_string(j);
    writeTensorFile(dir / (stem + ".fsht"), scaled(refMap, kMatchScales[j]));
    writeLandmarkFile(dir / (stem + ".json"), {kRefImage, LandmarkSequence({designed})});
  }

  json parts = json::object();
  for (const auto part : kAllParts) {
    const std::string name(partName(part));
    const auto refEmbedding = randomEmbedding(rng, 1.0f);
    writeEmbeddingFile(dir / "ref_embeds" / (name + ".fshe"), refEmbedding);

    json match = {{"name", name + "_match"}, {"entries", json::array()}};
    json decoy = {{"name", name + "_decoy"}, {"entries", json::array()}};
    for (std::size_t j = 0; j < kTargetsPerDomain; ++j) {
      const std::string id = name + "_" + std::to_string(j);
      writeEmbeddingFile(dir / "targets" / ("match_" + id + ".fshe"), randomEmbedding(rng, 0.1f, &refEmbedding));
      match["entries"].push_back({
          {"embedding", "targets/match_" + id + ".fshe"},
          {"features", "targets/match_" + std::to_string(j) + ".fsht"},
          {"landmarks", "targets/match_" + std::to_string(j) + ".json"},
      });

      writeEmbeddingFile(dir / "targets" / ("decoy_" + id + ".fshe"), randomEmbedding(rng, 1.0f));
      writeTensorFile(
          dir / "targets" / ("decoy_" + id + ".fsht"), synth::randomFeatureMap(rng, kChannels, kGrid, kGrid, {kGrid, kGrid}));
      writeLandmarkFile(
          dir / "targets" / ("decoy_" + id + ".json"), {kRefImage, LandmarkSequence({synth::randomLandmarksIn(rng, kRefImage)})});
      decoy["entries"].push_back({
          {"embedding", "targets/decoy_" + id + ".fshe"},
          {"features", "targets/decoy_" + id + ".fsht"},
          {"landmarks", "targets/decoy_" + id + ".json"},
      });
    }
    // alternate the order so the selection has to look at the embeddings
    const bool decoyFirst = static_cast<std::size_t>(part) % 2 == 0;
    parts[name] = decoyFirst ? json::array({decoy, match}) : json::array({match, decoy});
  }
  const json gallery = {{"version", 1}, {"targets_per_domain", kTargetsPerDomain}, {"parts", parts}};
  writeText(dir / "gallery.json", gallery.dump(2) + "\n");

  synth::DrivingOptions opt;
  opt.frames = 16;
  opt.maxRotation = 0.15;
  opt.maxTranslation = 4.0;
  writeLandmarkFile(dir / "driving.json", {{512, 512}, synth::randomDrivingSequence(rng, opt)});
}

std::vector<std::uint8_t> tensorBytes() {
  synth::Rng rng(7);
  return encodeTensor(synth::randomFeatureMap(rng, 2, 3, 4, {3, 4}));
}

std::vector<std::uint8_t> embeddingBytes() {
  return encodeEmbedding(Embedding{{0.25f, -1.5f, 3.0f, 0.125f}});
}

void putU32(std::vector<std::uint8_t>& b, std::size_t at, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) {
    b[at + i] = static_cast<std::uint8_t>(v >> (8 * i));
  }
}

std::string landmarkText(std::size_t frames, const std::function<std::string(std::size_t, std::size_t)>& point) {
  std::string s = R"({"version":1,"layout":"ibug68","image_size":[64,64],"fps":25,"frames":[)";
  for (std::size_t j = 0; j < frames; ++j) {
    s += j ? ",[" : "[";
    bool first = true;
    for (std::size_t i = 0;; ++i) {
      const auto p = point(j, i);
      if (p.empty()) {
        break;
      }
      s += (first ? "" : ",") + p;
      first = false;
    }
    s += "]";
  }
  return s + "]}\n";
}

std::function<std::string(std::size_t, std::size_t)> points(std::size_t count, std::size_t badFrame = 99, std::size_t badCount = 68) {
  return [=](std::size_t j, std::size_t i) -> std::string {
    const std::size_t n = j == badFrame ? badCount : count;
    if (i >= n) {
      return "";
    }
    return "[" + std::to_string(i % 60 + 1) + "," + std::to_string(j + 2) + "]";
  };
}

void writeCorrupt(const fs::path& dir) {
  fs::create_directories(dir);
  json expected = json::array();
  auto add = [&](const std::string& file, const std::string& kind, const std::vector<std::uint8_t>& bytes, const std::string& code,
                 std::optional<std::size_t> position, std::optional<std::size_t> frame = {}) {
    writeBytes(dir / file, bytes);
    json e = {{"file", file}, {"kind", kind}, {"code", code}, {"position", nullptr}};
    if (position) {
      e["position"] = *position;
    }
    if (frame) {
      e["frame"] = *frame;
    }
    expected.push_back(e);
  };
  auto text = [](const std::string& s) { return std::vector<std::uint8_t>(s.begin(), s.end()); };

  const auto t = tensorBytes();
  const std::size_t tsize = t.size(); // 20 + 4 * 24
  auto b = t;
  b[0] = 'X';
  add("tensor_bad_magic.fsht", "tensor", b, "BadMagic", 0);
  b = t;
  putU32(b, 4, 2);
  add("tensor_version.fsht", "tensor", b, "VersionUnsupported", 4);
  b = t;
  putU32(b, 8, 0);
  add("tensor_zero_channels.fsht", "tensor", b, "BadHeader", 8);
  b = t;
  putU32(b, 12, 0);
  add("tensor_zero_height.fsht", "tensor", b, "BadHeader", 12);
  b = t;
  putU32(b, 16, 0);
  add("tensor_zero_width.fsht", "tensor", b, "BadHeader", 16);
  add("tensor_short_header.fsht", "tensor", std::vector<std::uint8_t>(t.begin(), t.begin() + 14), "TruncatedPayload", 14);
  add("tensor_one_float_short.fsht", "tensor", std::vector<std::uint8_t>(t.begin(), t.end() - 4), "TruncatedPayload", tsize - 4);
  b = t;
  b.push_back(0);
  add("tensor_trailing_byte.fsht", "tensor", b, "TrailingData", tsize);
  b = t;
  putU32(b, 20 + 4 * 5, 0x7fc00000u); // NaN
  add("tensor_nan.fsht", "tensor", b, "NonFinite", 40);
  b = t;
  putU32(b, tsize - 4, 0xff800000u); // -inf
  add("tensor_inf_last.fsht", "tensor", b, "NonFinite", tsize - 4);

  const auto e = embeddingBytes();
  b = e;
  b[3] = 'T';
  add("embedding_bad_magic.fshe", "embedding", b, "BadMagic", 0);
  b = e;
  putU32(b, 4, 0);
  add("embedding_version.fshe", "embedding", b, "VersionUnsupported", 4);
  b = e;
  putU32(b, 8, 0);
  add("embedding_zero_dim.fshe", "embedding", b, "BadHeader", 8);
  add("embedding_truncated.fshe", "embedding", std::vector<std::uint8_t>(e.begin(), e.end() - 1), "TruncatedPayload", e.size() - 1);
  b = e;
  putU32(b, 12 + 4 * 2, 0x7f800000u); // +inf
  add("embedding_inf.fshe", "embedding", b, "NonFinite", 20);

  add("landmarks_67_points.json", "landmarks", text(landmarkText(2, points(68, 0, 67))), "WrongCount", 67, 0);
  add("landmarks_69_points.json", "landmarks", text(landmarkText(3, points(68, 2, 69))), "WrongCount", 69, 2);
  auto withNull = [](std::size_t j, std::size_t i) -> std::string {
    if (i >= 68) {
      return "";
    }
    return j == 1 && i == 5 ? "[3,null]" : "[" + std::to_string(i + 1) + ",4]";
  };
  add("landmarks_null.json", "landmarks", text(landmarkText(2, withNull)), "NonFinite", 5, 1);
  const std::string syntax = R"({"version": 1, "layout": "ibug68", x})";
  add("landmarks_syntax.json", "landmarks", text(syntax), "MalformedText", syntax.find(" x}") + 1);
  const std::string version = R"({"version":3,"layout":"ibug68","image_size":[64,64],"frames":[]})";
  add("landmarks_version.json", "landmarks", text(version), "VersionUnsupported", std::nullopt);

  writeText(dir / "expected.json", expected.dump(2) + "\n");
}

} // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: %s <fixtures-dir>\n", argv[0]);
    return 1;
  }
  const fs::path out = argv[1];
  writeE2e(out / "e2e");
  writeCorrupt(out / "corrupt");
  return 0;
}
