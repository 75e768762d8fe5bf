#include "veritas/error.hpp"

namespace veritas {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::MissingLabelPath: return "MissingLabelPath";
    case Errc::CorpusEmpty: return "CorpusEmpty";
    case Errc::EncodingError: return "EncodingError";
    case Errc::MissingColumn: return "MissingColumn";
    case Errc::UnmappedLabel: return "UnmappedLabel";
    case Errc::EmptyReview: return "EmptyReview";
    case Errc::DuplicateId: return "DuplicateId";
    case Errc::DegenerateSplit: return "DegenerateSplit";
    case Errc::EmptyText: return "EmptyText";
    case Errc::EmptyTokenList: return "EmptyTokenList";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::EmptyVocabulary: return "EmptyVocabulary";
    case Errc::BadMagic: return "BadMagic";
    case Errc::UnsupportedVersion: return "UnsupportedVersion";
    case Errc::TruncatedPayload: return "TruncatedPayload";
    case Errc::IdCountMismatch: return "IdCountMismatch";
    case Errc::NonFiniteValue: return "NonFiniteValue";
    case Errc::UnknownReviewId: return "UnknownReviewId";
    case Errc::DegenerateLabels: return "DegenerateLabels";
    case Errc::NonFiniteFeature: return "NonFiniteFeature";
    case Errc::KTooLarge: return "KTooLarge";
    case Errc::NonFiniteLoss: return "NonFiniteLoss";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::UnknownClassifier: return "UnknownClassifier";
    case Errc::ConfigInvalid: return "ConfigInvalid";
    case Errc::UnsupportedBundleVersion: return "UnsupportedBundleVersion";
    case Errc::CorruptBundle: return "CorruptBundle";
    case Errc::FingerprintMismatch: return "FingerprintMismatch";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::Io: return "Io";
    case Errc::Internal: return "Internal";
  }
  return "Unknown";
}

ErrorCategory category(Errc code) noexcept {
  switch (code) {
    case Errc::ConfigInvalid:
    case Errc::InvalidArgument:
    case Errc::UnknownClassifier:
    case Errc::KTooLarge:
      return ErrorCategory::usage;
    case Errc::Internal:
      return ErrorCategory::internal;
    default:
      return ErrorCategory::data;
  }
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

void rethrow_with_context(const Error& e, std::string_view context) {
  // what() already carries the code prefix; strip it so it is not repeated.
  std::string msg = e.what();
  const std::string prefix = std::string(to_string(e.code())) + ": ";
  if (msg.rfind(prefix, 0) == 0) msg.erase(0, prefix.size());
  throw Error(e.code(), std::string(context) + ": " + msg);
}

}  // namespace veritas
