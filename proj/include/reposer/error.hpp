#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace reposer {

enum class ErrorCode {
  // landmark validation
  WrongCount,
  NonFinite,
  // geometry / retargeting
  DegenerateEndpoints,
  DivergentRatio,
  // feature matching
  OutOfBounds,
  MixedShapes,
  ZeroQuery,
  DimensionMismatch,
  // gallery
  EmptyGallery,
  MissingPart,
  // metrics
  DegenerateBox,
  LengthMismatch,
  // file formats
  BadMagic,
  VersionUnsupported,
  BadHeader,
  TruncatedPayload,
  TrailingData,
  MalformedText,
  // everything else
  InvalidArgument,
  IoFailure,
};

std::string_view errorCodeName(ErrorCode code);

/// Filesystem-level failures (open/read/write). Everything else is a
/// validation failure of some value or file content.
bool isIoError(ErrorCode code);

/// The single exception type thrown by the library.
///
/// `position()` carries the index or byte offset the error refers to (landmark
/// index, byte offset into a file, frame index of a sequence, ...), and
/// `frame()` is set when the error escaped from one frame of a sequence.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail, std::optional<std::size_t> position = {});

  ErrorCode code() const noexcept {
    return code_;
  }
  std::optional<std::size_t> position() const noexcept {
    return position_;
  }
  std::optional<std::size_t> frame() const noexcept {
    return frame_;
  }
  const std::string& detail() const noexcept {
    return detail_;
  }

  Error withFrame(std::size_t frame) const;

 private:
  ErrorCode code_;
  std::string detail_;
  std::optional<std::size_t> position_;
  std::optional<std::size_t> frame_;
};

} // namespace reposer
