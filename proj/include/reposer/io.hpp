#pragma once

#include "reposer/feature_map.hpp"
#include "reposer/gallery.hpp"
#include "reposer/landmarks.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace reposer {

inline constexpr std::uint32_t kFormatVersion = 1;

// ---------------------------------------------------------------------------
// Landmark files (JSON text)
//
//   {"version": 1, "layout": "ibug68", "image_size": [H, W], "fps": 25.0,
//    "frames": [[[x0, y0], ..., [x67, y67]], ...]}
//
// A single-frame file is a sequence of length one. Doubles are written in
// shortest round-trip form, so parse(serialize(x)) is bit-exact.
// ---------------------------------------------------------------------------

struct LandmarkFile {
  ImageSize imageSize;
  LandmarkSequence sequence;
};

std::string serializeLandmarkFile(const LandmarkFile& file);

/// Throws MalformedText(byte offset) for invalid JSON or schema violations,
/// VersionUnsupported, WrongCount(got) and NonFinite(point index) tagged with
/// the frame index.
LandmarkFile parseLandmarkFile(std::string_view text);

// ---------------------------------------------------------------------------
// FSHT tensor files (little-endian binary)
//
//   offset 0  "FSHT"
//   offset 4  u32 version (= 1)
//   offset 8  u32 C, u32 H, u32 W
//   offset 20 C*H*W float32, channel-major then row-major
// ---------------------------------------------------------------------------

inline constexpr std::size_t kTensorHeaderSize = 20;

std::vector<std::uint8_t> encodeTensor(const FeatureMap& map);

/// Throws BadMagic(0), VersionUnsupported(4), BadHeader(offset of the bad
/// dimension), TruncatedPayload(file size), TrailingData(expected end) or
/// NonFinite(offset of the float). The map's image size is its grid size.
FeatureMap decodeTensor(std::span<const std::uint8_t> bytes);

// ---------------------------------------------------------------------------
// FSHE embedding files (little-endian binary)
//
//   offset 0  "FSHE"
//   offset 4  u32 version (= 1)
//   offset 8  u32 d
//   offset 12 d float32
// ---------------------------------------------------------------------------

inline constexpr std::size_t kEmbeddingHeaderSize = 12;

std::vector<std::uint8_t> encodeEmbedding(const Embedding& embedding);

/// Same error contract as decodeTensor.
Embedding decodeEmbedding(std::span<const std::uint8_t> bytes);

// ---------------------------------------------------------------------------
// Filesystem helpers. Failures to open/read/write throw IoFailure; content
// errors keep the codes above and name the file in the message.
// ---------------------------------------------------------------------------

std::vector<std::uint8_t> readBytes(const std::filesystem::path& path);
void writeBytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

LandmarkFile readLandmarkFile(const std::filesystem::path& path);
void writeLandmarkFile(const std::filesystem::path& path, const LandmarkFile& file);

FeatureMap readTensorFile(const std::filesystem::path& path);
void writeTensorFile(const std::filesystem::path& path, const FeatureMap& map);

Embedding readEmbeddingFile(const std::filesystem::path& path);
void writeEmbeddingFile(const std::filesystem::path& path, const Embedding& embedding);

// ---------------------------------------------------------------------------
// Manifests (JSON text). Relative paths resolve against the manifest's
// directory.
//
// Gallery:
//   {"version": 1, "targets_per_domain": k,
//    "parts": {"eyes": [{"name": "...", "entries": [
//        {"embedding": "a.fshe", "features": "a.fsht", "landmarks": "a.json"}, ...]}, ...],
//              "mouth": [...], ...}}
//
// Targets (also the shape of a gallery selection file):
//   {"version": 1, "ref_image_size": [H, W],            (optional)
//    "targets": [{"features": "...", "landmarks": "..."}, ...]}
// or
//   {"version": 1, "parts": {"eyes": {"targets": [...]}, ...}}
// A flat "targets" list serves every part.
// ---------------------------------------------------------------------------

GalleryManifest readGalleryManifest(const std::filesystem::path& path);

struct TargetRef {
  std::filesystem::path features;
  std::filesystem::path landmarks;
};

struct TargetManifest {
  std::optional<ImageSize> refImageSize;
  std::map<FacialPart, std::vector<TargetRef>> parts;
};

TargetManifest readTargetManifest(const std::filesystem::path& path);

/// Reference embeddings <dir>/<part name>.fshe; absent files are skipped.
std::map<FacialPart, Embedding> readReferenceEmbeddings(const std::filesystem::path& dir);

} // namespace reposer
