#pragma once

#include <optional>
#include <string>
#include <vector>

#include "otpml/error.hpp"
#include "otpml/matrix.hpp"

namespace testing {

/// Kind of the otpml::Error thrown by f, or nullopt when nothing is thrown.
template <class F>
std::optional<otpml::ErrorKind> error_kind(F&& f) {
  try {
    f();
  } catch (const otpml::Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

template <class F>
bool throws(F&& f, otpml::ErrorKind kind) {
  return error_kind(std::forward<F>(f)) == kind;
}

inline otpml::ColumnMatrix rows(const std::vector<std::vector<double>>& r) { return otpml::ColumnMatrix::from_rows(r); }

}  // namespace testing
