#include "otpml/error.hpp"

namespace otpml {

std::string_view kind_name(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Io: return "Io";
    case ErrorKind::MissingHeader: return "MissingHeader";
    case ErrorKind::ColumnCountMismatch: return "ColumnCountMismatch";
    case ErrorKind::UnparsableValue: return "UnparsableValue";
    case ErrorKind::NegativeCount: return "NegativeCount";
    case ErrorKind::OtpOutOfRange: return "OtpOutOfRange";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::UnknownColumn: return "UnknownColumn";
    case ErrorKind::DuplicateColumn: return "DuplicateColumn";
    case ErrorKind::SchemaMismatch: return "SchemaMismatch";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::UnknownKey: return "UnknownKey";
    case ErrorKind::BadValue: return "BadValue";
    case ErrorKind::ConflictingSources: return "ConflictingSources";
    case ErrorKind::InvalidFraction: return "InvalidFraction";
    case ErrorKind::TooFewRows: return "TooFewRows";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::LabelOutOfRange: return "LabelOutOfRange";
    case ErrorKind::InvalidK: return "InvalidK";
    case ErrorKind::EmptyEnsemble: return "EmptyEnsemble";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::ConstantColumn: return "ConstantColumn";
    case ErrorKind::SingleClassInput: return "SingleClassInput";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::SingularHessian: return "SingularHessian";
    case ErrorKind::NegativeResponse: return "NegativeResponse";
  }
  return "Unknown";
}

bool is_model_error(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NotPositiveDefinite:
    case ErrorKind::ConstantColumn:
    case ErrorKind::SingleClassInput:
    case ErrorKind::RankDeficient:
    case ErrorKind::SingularHessian:
    case ErrorKind::NegativeResponse:
      return true;
    default:
      return false;
  }
}

namespace {

std::string compose(ErrorKind kind, const std::string& detail, const std::string& context) {
  std::string out;
  if (!context.empty()) out = context + ": ";
  out += kind_name(kind);
  out += ": ";
  out += detail;
  return out;
}

}  // namespace

Error::Error(ErrorKind kind, const std::string& detail, const std::string& context)
    : std::runtime_error(compose(kind, detail, context)), kind_(kind), detail_(detail), context_(context) {}

Error Error::with_context(std::string_view outer) const {
  std::string ctx(outer);
  if (!context_.empty()) ctx += ": " + context_;
  return Error(kind_, detail_, ctx);
}

}  // namespace otpml
