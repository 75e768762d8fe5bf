#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace veritas {

enum class Errc {
  // corpus
  MissingLabelPath,
  CorpusEmpty,
  EncodingError,
  MissingColumn,
  UnmappedLabel,
  EmptyReview,
  DuplicateId,
  DegenerateSplit,
  // embedding
  EmptyText,
  EmptyTokenList,
  DimensionMismatch,
  EmptyVocabulary,
  BadMagic,
  UnsupportedVersion,
  TruncatedPayload,
  IdCountMismatch,
  NonFiniteValue,
  UnknownReviewId,
  // classifiers
  DegenerateLabels,
  NonFiniteFeature,
  KTooLarge,
  NonFiniteLoss,
  // evaluation
  LengthMismatch,
  EmptyInput,
  UnknownClassifier,
  // pipeline
  ConfigInvalid,
  UnsupportedBundleVersion,
  CorruptBundle,
  FingerprintMismatch,
  // general
  InvalidArgument,
  Io,
  Internal,
};

/// Coarse grouping used to pick a process exit code.
enum class ErrorCategory { usage, data, internal };

std::string_view to_string(Errc code) noexcept;
ErrorCategory category(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// Re-raises `e` with `context` prepended to its message, keeping the code.
[[noreturn]] void rethrow_with_context(const Error& e, std::string_view context);

}  // namespace veritas
