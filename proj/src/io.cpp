#include "reposer/io.hpp"

#include "reposer/error.hpp"

#include <json.hpp>

#include <array>
#include <bit>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>

namespace reposer {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

constexpr std::array<std::uint8_t, 4> kTensorMagic = {'F', 'S', 'H', 'T'};
constexpr std::array<std::uint8_t, 4> kEmbeddingMagic = {'F', 'S', 'H', 'E'};

void putU32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int shift = 0; shift < 32; shift += 8) {
    out.push_back(static_cast<std::uint8_t>((v >> shift) & 0xFFu));
  }
}

void putF32(std::vector<std::uint8_t>& out, float v) {
  putU32(out, std::bit_cast<std::uint32_t>(v));
}

std::uint32_t getU32(std::span<const std::uint8_t> bytes, std::size_t offset) {
  std::uint32_t v = 0;
  for (std::size_t i = 0; i < 4; ++i) {
    v |= static_cast<std::uint32_t>(bytes[offset + i]) << (8 * i);
  }
  return v;
}

std::uint32_t toU32(std::size_t v, const char* what) {
  if (v > std::numeric_limits<std::uint32_t>::max()) {
    throw Error(ErrorCode::InvalidArgument, std::string(what) + " does not fit the 32-bit header field", v);
  }
  return static_cast<std::uint32_t>(v);
}

// Reads the fixed header shared by FSHT and FSHE: magic, version and `dims`
// u32 dimensions, each required to be >= 1.
template <std::size_t N>
std::array<std::uint32_t, N> readHeader(std::span<const std::uint8_t> bytes, const std::array<std::uint8_t, 4>& magic) {
  for (std::size_t i = 0; i < magic.size(); ++i) {
    if (i >= bytes.size()) {
      throw Error(ErrorCode::TruncatedPayload, "file ends inside the magic number", bytes.size());
    }
    if (bytes[i] != magic[i]) {
      throw Error(ErrorCode::BadMagic, "expected magic '" + std::string(magic.begin(), magic.end()) + "'", 0);
    }
  }
  const std::size_t headerSize = 8 + 4 * N;
  if (bytes.size() < headerSize) {
    throw Error(ErrorCode::TruncatedPayload, "file ends inside the header", bytes.size());
  }
  if (const auto version = getU32(bytes, 4); version != kFormatVersion) {
    throw Error(ErrorCode::VersionUnsupported, "version " + std::to_string(version) + " is not supported", 4);
  }
  std::array<std::uint32_t, N> dims{};
  for (std::size_t i = 0; i < N; ++i) {
    dims[i] = getU32(bytes, 8 + 4 * i);
    if (dims[i] == 0) {
      throw Error(ErrorCode::BadHeader, "dimension must be at least 1", 8 + 4 * i);
    }
  }
  return dims;
}

// Decodes `count` floats starting at `offset`, requiring the buffer to end
// exactly after them.
std::vector<float> readPayload(std::span<const std::uint8_t> bytes, std::size_t offset, std::uint64_t count) {
  const std::uint64_t expectedEnd = offset + 4 * count;
  if (bytes.size() < expectedEnd) {
    throw Error(
        ErrorCode::TruncatedPayload,
        "payload needs " + std::to_string(expectedEnd) + " bytes, file has " + std::to_string(bytes.size()),
        bytes.size());
  }
  if (bytes.size() > expectedEnd) {
    throw Error(ErrorCode::TrailingData, "unexpected bytes after the payload", static_cast<std::size_t>(expectedEnd));
  }
  std::vector<float> values(static_cast<std::size_t>(count));
  for (std::size_t i = 0; i < values.size(); ++i) {
    const std::size_t at = offset + 4 * i;
    values[i] = std::bit_cast<float>(getU32(bytes, at));
    if (!std::isfinite(values[i])) {
      throw Error(ErrorCode::NonFinite, "payload float is NaN or infinite", at);
    }
  }
  return values;
}

[[noreturn]] void rethrowForFile(const Error& e, const fs::path& path) {
  Error annotated(e.code(), path.string() + ": " + e.detail(), e.position());
  if (e.frame()) {
    throw annotated.withFrame(*e.frame());
  }
  throw annotated;
}

template <typename Fn>
auto withFileContext(const fs::path& path, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::IoFailure) {
      throw;
    }
    rethrowForFile(e, path);
  }
}

std::string readText(const fs::path& path) {
  const auto bytes = readBytes(path);
  return {bytes.begin(), bytes.end()};
}

json parseJson(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    // nlohmann counts bytes from 1
    throw Error(ErrorCode::MalformedText, e.what(), e.byte > 0 ? e.byte - 1 : 0);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedText, e.what());
  }
}

[[noreturn]] void schemaError(const std::string& what) {
  throw Error(ErrorCode::MalformedText, what);
}

const json& member(const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) {
    schemaError(std::string("missing field '") + key + "'");
  }
  return obj.at(key);
}

void checkVersion(const json& root) {
  const auto& v = member(root, "version");
  if (!v.is_number_unsigned() || v.get<std::uint64_t>() != kFormatVersion) {
    throw Error(ErrorCode::VersionUnsupported, "unsupported version " + v.dump());
  }
}

std::size_t positiveInteger(const json& v, const char* what) {
  if (!v.is_number_unsigned() || v.get<std::uint64_t>() == 0) {
    schemaError(std::string(what) + " must be a positive integer");
  }
  return static_cast<std::size_t>(v.get<std::uint64_t>());
}

ImageSize parseImageSize(const json& v) {
  if (!v.is_array() || v.size() != 2) {
    schemaError("image_size must be [height, width]");
  }
  return {positiveInteger(v[0], "image height"), positiveInteger(v[1], "image width")};
}

double coordinate(const json& v, std::size_t pointIndex) {
  if (v.is_null()) {
    throw Error(ErrorCode::NonFinite, "coordinate is null", pointIndex);
  }
  if (!v.is_number()) {
    schemaError("coordinate of point " + std::to_string(pointIndex) + " is not a number");
  }
  const double d = v.get<double>();
  if (!std::isfinite(d)) {
    throw Error(ErrorCode::NonFinite, "coordinate is not finite", pointIndex);
  }
  return d;
}

LandmarkSet parseFrame(const json& frame) {
  if (!frame.is_array()) {
    schemaError("a frame must be an array of [x, y] points");
  }
  if (frame.size() != kNumLandmarks) {
    throw Error(ErrorCode::WrongCount, "expected 68 landmarks", frame.size());
  }
  LandmarkSet::Points points;
  for (std::size_t i = 0; i < kNumLandmarks; ++i) {
    const auto& p = frame[i];
    if (!p.is_array() || p.size() != 2) {
      schemaError("point " + std::to_string(i) + " must be [x, y]");
    }
    points[i] = {coordinate(p[0], i), coordinate(p[1], i)};
  }
  return LandmarkSet(points);
}

fs::path resolve(const fs::path& base, const json& v, const char* what) {
  if (!v.is_string()) {
    schemaError(std::string(what) + " must be a path string");
  }
  const fs::path p = v.get<std::string>();
  return p.is_absolute() ? p : base / p;
}

FacialPart parsePartKey(const std::string& key) {
  const auto part = partFromName(key);
  if (!part) {
    schemaError("unknown facial part '" + key + "'");
  }
  return *part;
}

std::vector<TargetRef> parseTargetList(const json& list, const fs::path& base) {
  if (!list.is_array() || list.empty()) {
    schemaError("targets must be a non-empty array");
  }
  std::vector<TargetRef> refs;
  for (const auto& t : list) {
    refs.push_back({resolve(base, member(t, "features"), "features"), resolve(base, member(t, "landmarks"), "landmarks")});
  }
  return refs;
}

} // namespace

// --- landmark files --------------------------------------------------------

std::string serializeLandmarkFile(const LandmarkFile& file) {
  json frames = json::array();
  for (const auto& set : file.sequence.frames()) {
    json frame = json::array();
    for (const auto& p : set.points()) {
      frame.push_back(json::array({p.x, p.y}));
    }
    frames.push_back(std::move(frame));
  }
  json root = {
      {"version", kFormatVersion},
      {"layout", "ibug68"},
      {"image_size", json::array({file.imageSize.height, file.imageSize.width})},
      {"fps", file.sequence.fps()},
      {"frames", std::move(frames)},
  };
  return root.dump() + "\n";
}

LandmarkFile parseLandmarkFile(std::string_view text) {
  const json root = parseJson(text);
  if (!root.is_object()) {
    schemaError("landmark file must be a JSON object");
  }
  checkVersion(root);
  if (const auto& layout = member(root, "layout"); layout != "ibug68") {
    schemaError("unsupported layout " + layout.dump());
  }
  const ImageSize size = parseImageSize(member(root, "image_size"));
  double fps = kDefaultFps;
  if (root.contains("fps")) {
    const auto& f = root.at("fps");
    if (!f.is_number() || !(f.get<double>() > 0.0)) {
      schemaError("fps must be a positive number");
    }
    fps = f.get<double>();
  }
  const auto& frames = member(root, "frames");
  if (!frames.is_array() || frames.empty()) {
    schemaError("frames must be a non-empty array");
  }
  std::vector<LandmarkSet> sets;
  sets.reserve(frames.size());
  for (std::size_t j = 0; j < frames.size(); ++j) {
    try {
      sets.push_back(parseFrame(frames[j]));
    } catch (const Error& e) {
      throw e.withFrame(j);
    }
  }
  return {size, LandmarkSequence(std::move(sets), fps)};
}

// --- FSHT ------------------------------------------------------------------

std::vector<std::uint8_t> encodeTensor(const FeatureMap& map) {
  std::vector<std::uint8_t> out;
  out.reserve(kTensorHeaderSize + 4 * map.data().size());
  out.insert(out.end(), kTensorMagic.begin(), kTensorMagic.end());
  putU32(out, kFormatVersion);
  putU32(out, toU32(map.channels(), "channel count"));
  putU32(out, toU32(map.height(), "height"));
  putU32(out, toU32(map.width(), "width"));
  for (const float v : map.data()) {
    putF32(out, v);
  }
  return out;
}

FeatureMap decodeTensor(std::span<const std::uint8_t> bytes) {
  const auto [c, h, w] = readHeader<3>(bytes, kTensorMagic);
  const std::uint64_t count = std::uint64_t{c} * h * w;
  if (count > (std::numeric_limits<std::uint64_t>::max() - kTensorHeaderSize) / 4) {
    throw Error(ErrorCode::BadHeader, "C*H*W overflows", 8);
  }
  return FeatureMap(c, h, w, readPayload(bytes, kTensorHeaderSize, count));
}

// --- FSHE ------------------------------------------------------------------

std::vector<std::uint8_t> encodeEmbedding(const Embedding& embedding) {
  for (std::size_t i = 0; i < embedding.values.size(); ++i) {
    if (!std::isfinite(embedding.values[i])) {
      throw Error(ErrorCode::NonFinite, "embedding value is not finite", i);
    }
  }
  if (embedding.values.empty()) {
    throw Error(ErrorCode::InvalidArgument, "embedding must not be empty");
  }
  std::vector<std::uint8_t> out;
  out.reserve(kEmbeddingHeaderSize + 4 * embedding.values.size());
  out.insert(out.end(), kEmbeddingMagic.begin(), kEmbeddingMagic.end());
  putU32(out, kFormatVersion);
  putU32(out, toU32(embedding.values.size(), "embedding dimension"));
  for (const float v : embedding.values) {
    putF32(out, v);
  }
  return out;
}

Embedding decodeEmbedding(std::span<const std::uint8_t> bytes) {
  const auto [d] = readHeader<1>(bytes, kEmbeddingMagic);
  return Embedding{readPayload(bytes, kEmbeddingHeaderSize, d)};
}

// --- filesystem ------------------------------------------------------------

std::vector<std::uint8_t> readBytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::IoFailure, "cannot open '" + path.string() + "' for reading");
  }
  std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  if (in.bad()) {
    throw Error(ErrorCode::IoFailure, "error while reading '" + path.string() + "'");
  }
  return bytes;
}

void writeBytes(const fs::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::IoFailure, "cannot open '" + path.string() + "' for writing");
  }
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw Error(ErrorCode::IoFailure, "error while writing '" + path.string() + "'");
  }
}

LandmarkFile readLandmarkFile(const fs::path& path) {
  const auto text = readText(path);
  return withFileContext(path, [&] { return parseLandmarkFile(text); });
}

void writeLandmarkFile(const fs::path& path, const LandmarkFile& file) {
  const auto text = serializeLandmarkFile(file);
  writeBytes(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

FeatureMap readTensorFile(const fs::path& path) {
  const auto bytes = readBytes(path);
  return withFileContext(path, [&] { return decodeTensor(bytes); });
}

void writeTensorFile(const fs::path& path, const FeatureMap& map) {
  writeBytes(path, encodeTensor(map));
}

Embedding readEmbeddingFile(const fs::path& path) {
  const auto bytes = readBytes(path);
  return withFileContext(path, [&] { return decodeEmbedding(bytes); });
}

void writeEmbeddingFile(const fs::path& path, const Embedding& embedding) {
  writeBytes(path, encodeEmbedding(embedding));
}

// --- manifests -------------------------------------------------------------

GalleryManifest readGalleryManifest(const fs::path& path) {
  const auto text = readText(path);
  const fs::path base = path.parent_path();
  const json root = withFileContext(path, [&] { return parseJson(text); });

  return withFileContext(path, [&] {
    checkVersion(root);
    std::size_t k = kDefaultTargetCount;
    if (root.contains("targets_per_domain")) {
      k = positiveInteger(root.at("targets_per_domain"), "targets_per_domain");
    }
    const auto& parts = member(root, "parts");
    if (!parts.is_object()) {
      schemaError("parts must be an object keyed by facial part");
    }
    std::map<FacialPart, std::vector<Domain>> domains;
    for (const auto& [key, list] : parts.items()) {
      const FacialPart part = parsePartKey(key);
      if (!list.is_array()) {
        schemaError("domains of part '" + key + "' must be an array");
      }
      for (const auto& d : list) {
        Domain domain;
        const auto& name = member(d, "name");
        if (!name.is_string()) {
          schemaError("domain name must be a string");
        }
        domain.name = name.get<std::string>();
        for (const auto& e : member(d, "entries")) {
          GalleryEntry entry;
          entry.embedding = readEmbeddingFile(resolve(base, member(e, "embedding"), "embedding"));
          entry.features = resolve(base, member(e, "features"), "features");
          entry.landmarks = resolve(base, member(e, "landmarks"), "landmarks");
          domain.entries.push_back(std::move(entry));
        }
        domains[part].push_back(std::move(domain));
      }
    }
    return GalleryManifest(k, std::move(domains));
  });
}

TargetManifest readTargetManifest(const fs::path& path) {
  const auto text = readText(path);
  const fs::path base = path.parent_path();
  return withFileContext(path, [&] {
    const json root = parseJson(text);
    checkVersion(root);
    TargetManifest manifest;
    if (root.contains("ref_image_size")) {
      manifest.refImageSize = parseImageSize(root.at("ref_image_size"));
    }
    if (root.contains("targets")) {
      const auto refs = parseTargetList(root.at("targets"), base);
      for (const auto part : kAllParts) {
        manifest.parts[part] = refs;
      }
    } else {
      const auto& parts = member(root, "parts");
      if (!parts.is_object()) {
        schemaError("parts must be an object keyed by facial part");
      }
      for (const auto& [key, entry] : parts.items()) {
        manifest.parts[parsePartKey(key)] = parseTargetList(member(entry, "targets"), base);
      }
      for (const auto part : kAllParts) {
        if (!manifest.parts.contains(part)) {
          throw Error(
              ErrorCode::MissingPart,
              "no targets for part '" + std::string(partName(part)) + "'",
              static_cast<std::size_t>(part));
        }
      }
    }
    return manifest;
  });
}

std::map<FacialPart, Embedding> readReferenceEmbeddings(const fs::path& dir) {
  std::map<FacialPart, Embedding> out;
  for (const auto part : kAllParts) {
    const auto file = dir / (std::string(partName(part)) + ".fshe");
    if (fs::exists(file)) {
      out[part] = readEmbeddingFile(file);
    }
  }
  return out;
}

} // namespace reposer
