#include "reposer/error.hpp"

namespace reposer {

namespace {

std::string formatMessage(
    ErrorCode code,
    const std::string& detail,
    std::optional<std::size_t> position,
    std::optional<std::size_t> frame) {
  std::string msg(errorCodeName(code));
  if (position) {
    msg += "(" + std::to_string(*position) + ")";
  }
  if (frame) {
    msg += " [frame " + std::to_string(*frame) + "]";
  }
  if (!detail.empty()) {
    msg += ": " + detail;
  }
  return msg;
}

} // namespace

std::string_view errorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::WrongCount:
      return "WrongCount";
    case ErrorCode::NonFinite:
      return "NonFinite";
    case ErrorCode::DegenerateEndpoints:
      return "DegenerateEndpoints";
    case ErrorCode::DivergentRatio:
      return "DivergentRatio";
    case ErrorCode::OutOfBounds:
      return "OutOfBounds";
    case ErrorCode::MixedShapes:
      return "MixedShapes";
    case ErrorCode::ZeroQuery:
      return "ZeroQuery";
    case ErrorCode::DimensionMismatch:
      return "DimensionMismatch";
    case ErrorCode::EmptyGallery:
      return "EmptyGallery";
    case ErrorCode::MissingPart:
      return "MissingPart";
    case ErrorCode::DegenerateBox:
      return "DegenerateBox";
    case ErrorCode::LengthMismatch:
      return "LengthMismatch";
    case ErrorCode::BadMagic:
      return "BadMagic";
    case ErrorCode::VersionUnsupported:
      return "VersionUnsupported";
    case ErrorCode::BadHeader:
      return "BadHeader";
    case ErrorCode::TruncatedPayload:
      return "TruncatedPayload";
    case ErrorCode::TrailingData:
      return "TrailingData";
    case ErrorCode::MalformedText:
      return "MalformedText";
    case ErrorCode::InvalidArgument:
      return "InvalidArgument";
    case ErrorCode::IoFailure:
      return "IoFailure";
  }
  return "Unknown";
}

bool isIoError(ErrorCode code) {
  return code == ErrorCode::IoFailure;
}

Error::Error(ErrorCode code, const std::string& detail, std::optional<std::size_t> position)
    : std::runtime_error(formatMessage(code, detail, position, std::nullopt)),
      code_(code),
      detail_(detail),
      position_(position) {}

Error Error::withFrame(std::size_t frame) const {
  Error tagged(code_, detail_, position_);
  tagged.frame_ = frame;
  static_cast<std::runtime_error&>(tagged) =
      std::runtime_error(formatMessage(code_, detail_, position_, frame));
  return tagged;
}

} // namespace reposer
