// Copyright 2026 The deweather Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef DEWEATHER_ERROR_HPP_
#define DEWEATHER_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace deweather {

// Error categories; these map one-to-one onto the dw_status codes of the
// public C API.
enum class ErrorCode {
  invalid_argument,
  format,
  validation,
  alignment,
  config,
  fit,
  io,
  unknown_filter,
  unknown_key,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace deweather

#endif  // DEWEATHER_ERROR_HPP_
