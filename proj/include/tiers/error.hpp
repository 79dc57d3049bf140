// Copyright 2026 The Tiers Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TIERS_ERROR_HPP_
#define TIERS_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace tiers {

enum class ErrorKind {
  kSchema,
  kValidation,
  kUnknownLhs,
  kUnknownSymbol,
  kPrecondition,
  kGenerationOverflow,
  kExhaustion,
  kInternal,
  kCredential,
  kStore,
  kIo,
  kCountMismatch,
  kCapTooLarge,
  kDimension,
  kNoData,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kSchema: return "schema";
    case ErrorKind::kValidation: return "validation";
    case ErrorKind::kUnknownLhs: return "unknown-lhs";
    case ErrorKind::kUnknownSymbol: return "unknown-symbol";
    case ErrorKind::kPrecondition: return "precondition";
    case ErrorKind::kGenerationOverflow: return "generation-overflow";
    case ErrorKind::kExhaustion: return "exhaustion";
    case ErrorKind::kInternal: return "internal";
    case ErrorKind::kCredential: return "credential";
    case ErrorKind::kStore: return "store";
    case ErrorKind::kIo: return "io";
    case ErrorKind::kCountMismatch: return "count-mismatch";
    case ErrorKind::kCapTooLarge: return "cap-too-large";
    case ErrorKind::kDimension: return "dimension";
    case ErrorKind::kNoData: return "no-data";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + " error: " + message),
        kind_(kind),
        detail_(message) {}

  ErrorKind kind() const noexcept { return kind_; }
  // Message without the kind prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

}  // namespace tiers

#endif  // TIERS_ERROR_HPP_
