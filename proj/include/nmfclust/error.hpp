// Copyright 2026 The nmfclust Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef NMFCLUST_ERROR_HPP_
#define NMFCLUST_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace nmfclust {

// Error categories. Each maps one-to-one onto a status code of the C API.
enum class ErrorCode {
  kInvalidArgument,
  kIo,
  kParse,
  kValidation,
  kShapeMismatch,
  kInternal,
};

// Stable machine-readable token, e.g. "E_VALIDATION".
std::string_view error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void throw_error(ErrorCode code, const std::string& message);

}  // namespace nmfclust

#endif  // NMFCLUST_ERROR_HPP_
