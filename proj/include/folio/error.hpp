// Copyright 2026 The Folio Authors.
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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace folio {

enum class ErrorCode {
  kMalformedMarker,
  kEmptyDocument,
  kBadDirective,
  kBadColumnCount,
  kUntaggedDocument,
  kBadRule,
  kBadDictionaryRow,
  kForeignTerm,
  kBadWeights,
  kInconsistentInputs,
  kUnknownSubject,
  kStaleDraft,
  kInvalidDecision,
  kSchemaVersionMismatch,
  kMalformedDocument,
  kEmptyDraft,
  kNoRelations,
  kEmptyTraditional,
  kNonApplicable,
  kBadConfig,
  kBadReference,
  kUnknownFormat,
  kIoError,
  kPortInUse,
  kCorruptDecisionLog,
};

inline std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedMarker: return "MalformedMarker";
    case ErrorCode::kEmptyDocument: return "EmptyDocument";
    case ErrorCode::kBadDirective: return "BadDirective";
    case ErrorCode::kBadColumnCount: return "BadColumnCount";
    case ErrorCode::kUntaggedDocument: return "UntaggedDocument";
    case ErrorCode::kBadRule: return "BadRule";
    case ErrorCode::kBadDictionaryRow: return "BadDictionaryRow";
    case ErrorCode::kForeignTerm: return "ForeignTerm";
    case ErrorCode::kBadWeights: return "BadWeights";
    case ErrorCode::kInconsistentInputs: return "InconsistentInputs";
    case ErrorCode::kUnknownSubject: return "UnknownSubject";
    case ErrorCode::kStaleDraft: return "StaleDraft";
    case ErrorCode::kInvalidDecision: return "InvalidDecision";
    case ErrorCode::kSchemaVersionMismatch: return "SchemaVersionMismatch";
    case ErrorCode::kMalformedDocument: return "MalformedDocument";
    case ErrorCode::kEmptyDraft: return "EmptyDraft";
    case ErrorCode::kNoRelations: return "NoRelations";
    case ErrorCode::kEmptyTraditional: return "EmptyTraditional";
    case ErrorCode::kNonApplicable: return "NonApplicable";
    case ErrorCode::kBadConfig: return "BadConfig";
    case ErrorCode::kBadReference: return "BadReference";
    case ErrorCode::kUnknownFormat: return "UnknownFormat";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kPortInUse: return "PortInUse";
    case ErrorCode::kCorruptDecisionLog: return "CorruptDecisionLog";
  }
  return "Unknown";
}

// All library failures are reported through this exception. what() is
// "<ErrorName>: <detail>" so the CLI can print it verbatim.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(error_name(code)) + ": " + detail),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  std::string_view name() const noexcept { return error_name(code_); }

 private:
  ErrorCode code_;
};

}  // namespace folio
