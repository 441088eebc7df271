#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace otpml {

enum class ErrorKind {
  // input / validation
  Io,
  MissingHeader,
  ColumnCountMismatch,
  UnparsableValue,
  NegativeCount,
  OtpOutOfRange,
  EmptyInput,
  UnknownColumn,
  DuplicateColumn,
  SchemaMismatch,
  InvalidConfig,
  UnknownKey,
  BadValue,
  ConflictingSources,
  InvalidFraction,
  TooFewRows,
  LengthMismatch,
  ShapeMismatch,
  LabelOutOfRange,
  InvalidK,
  EmptyEnsemble,
  // model / numeric
  NotPositiveDefinite,
  ConstantColumn,
  SingleClassInput,
  RankDeficient,
  SingularHessian,
  NegativeResponse,
};

std::string_view kind_name(ErrorKind kind) noexcept;

/// True for failures raised while fitting or evaluating a model, as opposed
/// to malformed input or configuration.
bool is_model_error(ErrorKind kind) noexcept;

/// Exception carrying a machine-readable kind.
/// what() is "[<context>: ]<Kind>: <detail>".
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail, const std::string& context = {});

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& detail() const noexcept { return detail_; }
  const std::string& context() const noexcept { return context_; }

  /// Same error with "<outer>: " prepended to the context.
  Error with_context(std::string_view outer) const;

 private:
  ErrorKind kind_;
  std::string detail_;
  std::string context_;
};

}  // namespace otpml
