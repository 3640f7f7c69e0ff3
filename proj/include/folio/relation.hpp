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

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "folio/error.hpp"

namespace folio {

using TermId = int;

enum class RelationKind { kHypernymy, kSynonymy, kVariant, kAssociation };
enum class Evidence { kPattern, kHeadExpansion, kDictionary, kAcronym };

inline std::string_view kind_name(RelationKind kind) {
  switch (kind) {
    case RelationKind::kHypernymy: return "hypernymy";
    case RelationKind::kSynonymy: return "synonymy";
    case RelationKind::kVariant: return "variant";
    case RelationKind::kAssociation: return "association";
  }
  return "association";
}

inline RelationKind parse_kind(std::string_view name) {
  static const std::map<std::string_view, RelationKind> kKinds = {
      {"hypernymy", RelationKind::kHypernymy},
      {"synonymy", RelationKind::kSynonymy},
      {"variant", RelationKind::kVariant},
      {"association", RelationKind::kAssociation}};
  const auto it = kKinds.find(name);
  if (it == kKinds.end()) {
    throw Error(ErrorCode::kMalformedDocument,
                "unknown relation kind '" + std::string(name) + "'");
  }
  return it->second;
}

inline std::string_view evidence_name(Evidence e) {
  switch (e) {
    case Evidence::kPattern: return "pattern";
    case Evidence::kHeadExpansion: return "head_expansion";
    case Evidence::kDictionary: return "dictionary";
    case Evidence::kAcronym: return "acronym";
  }
  return "pattern";
}

inline Evidence parse_evidence(std::string_view name) {
  static const std::map<std::string_view, Evidence> kEvidence = {
      {"pattern", Evidence::kPattern},
      {"head_expansion", Evidence::kHeadExpansion},
      {"dictionary", Evidence::kDictionary},
      {"acronym", Evidence::kAcronym}};
  const auto it = kEvidence.find(name);
  if (it == kEvidence.end()) {
    throw Error(ErrorCode::kMalformedDocument,
                "unknown evidence '" + std::string(name) + "'");
  }
  return it->second;
}

// Synonymy and association are unordered and stored with source < target.
inline bool is_symmetric(RelationKind kind) {
  return kind == RelationKind::kSynonymy || kind == RelationKind::kAssociation;
}

// Typed edge of the terminological network. Hypernymy runs from the
// generic term (source) to the specific one (target); variant runs from the
// variant form (e.g. an acronym) to the form that owns the references.
struct Relation {
  TermId source_id = 0;
  TermId target_id = 0;
  RelationKind kind = RelationKind::kAssociation;
  Evidence evidence = Evidence::kPattern;
  double confidence = 1.0;
  std::vector<std::string> provenance;

  bool operator==(const Relation&) const = default;
};

inline Relation make_relation(TermId source, TermId target, RelationKind kind,
                              Evidence evidence, double confidence,
                              std::string provenance) {
  if (is_symmetric(kind) && target < source) std::swap(source, target);
  return Relation{source, target, kind, evidence, confidence,
                  {std::move(provenance)}};
}

}  // namespace folio
