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

#include <string>
#include <string_view>

#include <json.hpp>

#include "folio/index.hpp"

namespace folio {

inline constexpr std::string_view kDraftFormat = "folio-draft";
inline constexpr int kDraftVersion = 1;

namespace interchange {

using Json = nlohmann::ordered_json;

inline Json to_json(const PageRef& r) {
  return Json{{"start", r.start}, {"end", r.end}, {"qualified", r.qualified}};
}

inline Json to_json(const ScoreBreakdown& s) {
  return Json{{"frequency", s.frequency_component},
              {"dispersion", s.dispersion_component},
              {"salience", s.salience_component},
              {"cohesion", s.cohesion_component},
              {"total", s.total},
              {"weights", Json::array({s.weights.frequency, s.weights.dispersion,
                                       s.weights.salience, s.weights.cohesion,
                                       s.weights.heading_multiplier,
                                       s.weights.emphasis_multiplier,
                                       s.weights.cue_multiplier})}};
}

inline Json to_json(const Relation& r) {
  return Json{{"source", r.source_id},
              {"target", r.target_id},
              {"kind", kind_name(r.kind)},
              {"evidence", evidence_name(r.evidence)},
              {"confidence", r.confidence},
              {"provenance", r.provenance}};
}

inline Json to_json(const Decision& d) {
  Json j{{"subject_kind", subject_name(d.subject_kind)},
         {"subject_id", d.subject_id},
         {"ordinal", d.ordinal},
         {"action", action_name(d.action)}};
  j["payload"] = d.payload ? Json(*d.payload) : Json(nullptr);
  j["author"] = d.author;
  j["timestamp"] = d.timestamp;
  j["document_id"] = d.document_id;
  return j;
}

inline Json optional_id(const std::optional<TermId>& id) {
  return id ? Json(*id) : Json(nullptr);
}

inline Json to_json(const IndexEntry& e) {
  Json j{{"term_id", e.term_id}, {"display_label", e.display_label}};
  j["page_refs"] = Json::array();
  for (const auto& r : e.page_refs) j["page_refs"].push_back(to_json(r));
  j["see"] = optional_id(e.see);
  j["see_also"] = e.see_also;
  j["rank_score"] = e.rank_score;
  j["sub_entries"] = Json::array();
  for (const auto& s : e.sub_entries) j["sub_entries"].push_back(to_json(s));
  return j;
}

inline Json to_json(const TermRecord& t) {
  Json j{{"id", t.id},
         {"canonical", t.canonical},
         {"label", t.label},
         {"relabeled", t.relabeled},
         {"is_acronym", t.is_acronym},
         {"rank_score", t.rank_score},
         {"state", state_name(t.state)},
         {"parent", optional_id(t.parent)},
         {"see", optional_id(t.see)}};
  j["page_refs"] = Json::array();
  for (const auto& p : t.page_refs) {
    Json pj = to_json(p.ref);
    pj["state"] = state_name(p.state);
    j["page_refs"].push_back(pj);
  }
  j["segment_refs"] = Json::array();
  for (const auto& s : t.segment_refs) {
    j["segment_refs"].push_back(Json{{"segment_id", s.ref.segment_id},
                                     {"occurrence_count", s.ref.occurrence_count},
                                     {"score", s.ref.score},
                                     {"preview", s.preview},
                                     {"state", state_name(s.state)}});
  }
  j["occurrences"] = Json::array();
  for (const auto& o : t.occurrences) {
    j["occurrences"].push_back(Json::array({o.token_span.begin, o.token_span.end, o.page,
                                            o.segment_id, o.sentence_id, o.in_heading,
                                            o.emphasized, o.cue_context}));
  }
  return j;
}

[[noreturn]] inline void malformed(const std::string& what) {
  throw Error(ErrorCode::kMalformedDocument, what);
}

inline const Json& field(const Json& j, const char* name) {
  if (!j.is_object()) malformed(std::string("expected an object holding '") + name + "'");
  const auto it = j.find(name);
  if (it == j.end()) malformed(std::string("missing field '") + name + "'");
  return *it;
}

template <typename T>
T get(const Json& j, const char* name) {
  try {
    return field(j, name).get<T>();
  } catch (const nlohmann::json::exception&) {
    malformed(std::string("field '") + name + "' has the wrong type");
  }
}

inline std::optional<TermId> get_optional_id(const Json& j, const char* name) {
  const Json& v = field(j, name);
  if (v.is_null()) return std::nullopt;
  return get<TermId>(j, name);
}

inline const Json& array_field(const Json& j, const char* name) {
  const Json& v = field(j, name);
  if (!v.is_array()) malformed(std::string("field '") + name + "' must be an array");
  return v;
}

inline PageRef page_ref_from(const Json& j) {
  return {get<int>(j, "start"), get<int>(j, "end"), get<bool>(j, "qualified")};
}

inline ScoreBreakdown score_from(const Json& j) {
  ScoreBreakdown s;
  s.frequency_component = get<double>(j, "frequency");
  s.dispersion_component = get<double>(j, "dispersion");
  s.salience_component = get<double>(j, "salience");
  s.cohesion_component = get<double>(j, "cohesion");
  s.total = get<double>(j, "total");
  const auto w = get<std::vector<double>>(j, "weights");
  if (w.size() != 7) malformed("weights must hold 7 numbers");
  s.weights = {w[0], w[1], w[2], w[3], w[4], w[5], w[6]};
  return s;
}

inline Relation relation_from(const Json& j) {
  Relation r;
  r.source_id = get<TermId>(j, "source");
  r.target_id = get<TermId>(j, "target");
  r.kind = parse_kind(get<std::string>(j, "kind"));
  r.evidence = parse_evidence(get<std::string>(j, "evidence"));
  r.confidence = get<double>(j, "confidence");
  r.provenance = get<std::vector<std::string>>(j, "provenance");
  return r;
}

inline Decision decision_from(const Json& j) {
  Decision d;
  d.subject_kind = parse_subject(get<std::string>(j, "subject_kind"));
  d.subject_id = get<std::int64_t>(j, "subject_id");
  d.ordinal = j.contains("ordinal") ? get<std::int64_t>(j, "ordinal") : 0;
  d.action = parse_action(get<std::string>(j, "action"));
  if (j.contains("payload") && !j["payload"].is_null()) d.payload = get<std::string>(j, "payload");
  d.author = j.contains("author") ? get<std::string>(j, "author") : std::string{};
  d.timestamp = j.contains("timestamp") ? get<std::int64_t>(j, "timestamp") : 0;
  d.document_id = j.contains("document_id") ? get<std::string>(j, "document_id") : std::string{};
  return d;
}

inline TermRecord term_from(const Json& j) {
  TermRecord t;
  t.id = get<TermId>(j, "id");
  t.canonical = get<std::string>(j, "canonical");
  t.label = get<std::string>(j, "label");
  t.relabeled = get<bool>(j, "relabeled");
  t.is_acronym = get<bool>(j, "is_acronym");
  t.rank_score = get<double>(j, "rank_score");
  t.state = parse_state(get<std::string>(j, "state"));
  t.parent = get_optional_id(j, "parent");
  t.see = get_optional_id(j, "see");
  for (const auto& p : array_field(j, "page_refs")) {
    t.page_refs.push_back({page_ref_from(p), parse_state(get<std::string>(p, "state"))});
  }
  for (const auto& s : array_field(j, "segment_refs")) {
    SegmentRefRecord rec;
    rec.ref.term_id = t.id;
    rec.ref.segment_id = get<int>(s, "segment_id");
    rec.ref.occurrence_count = get<int>(s, "occurrence_count");
    rec.ref.score = get<double>(s, "score");
    rec.preview = get<std::string>(s, "preview");
    rec.state = parse_state(get<std::string>(s, "state"));
    t.segment_refs.push_back(std::move(rec));
  }
  for (const auto& o : array_field(j, "occurrences")) {
    if (!o.is_array() || o.size() != 8) malformed("occurrence must be an 8-element array");
    try {
      TermOccurrence occ;
      occ.term_id = t.id;
      occ.token_span = {o[0].get<std::size_t>(), o[1].get<std::size_t>()};
      occ.page = o[2].get<int>();
      occ.segment_id = o[3].get<int>();
      occ.sentence_id = o[4].get<int>();
      occ.in_heading = o[5].get<bool>();
      occ.emphasized = o[6].get<bool>();
      occ.cue_context = o[7].get<bool>();
      t.occurrences.push_back(occ);
    } catch (const nlohmann::json::exception&) {
      malformed("occurrence has the wrong element types");
    }
  }
  return t;
}

}  // namespace interchange

inline interchange::Json draft_to_json(const DraftIndex& index) {
  using interchange::Json;
  using interchange::to_json;
  Json j{{"format", kDraftFormat},
         {"version", kDraftVersion},
         {"document_id", index.document_id},
         {"status", status_name(index.status)},
         {"max_depth", index.max_depth},
         {"budget", index.budget}};
  Json ranking{{"closure_overflow", index.ranking.closure_overflow}};
  ranking["entries"] = Json::array();
  for (const auto& e : index.ranking.entries) {
    ranking["entries"].push_back(
        Json{{"term_id", e.term_id}, {"canonical", e.canonical}, {"score", to_json(e.score)}});
  }
  j["ranking"] = std::move(ranking);
  j["terms"] = Json::array();
  for (const auto& t : index.terms) j["terms"].push_back(to_json(t));
  j["relations"] = Json::array();
  for (const auto& r : index.relations) {
    Json rj{{"id", r.id}};
    rj.update(to_json(r.relation));
    rj["state"] = state_name(r.state);
    j["relations"].push_back(std::move(rj));
  }
  j["decisions"] = Json::array();
  for (const auto& d : index.decisions) j["decisions"].push_back(to_json(d));
  j["entries"] = Json::array();
  for (const auto& e : index.entries) j["entries"].push_back(to_json(e));
  return j;
}

// Two-space indented JSON with a trailing newline; keys in a fixed order.
inline std::string export_interchange(const DraftIndex& index) {
  return draft_to_json(index).dump(2) + "\n";
}

inline DraftIndex draft_from_json(const interchange::Json& j) {
  using namespace interchange;
  if (!j.is_object()) malformed("interchange document must be an object");
  if (get<std::string>(j, "format") != kDraftFormat) {
    throw Error(ErrorCode::kSchemaVersionMismatch,
                "unexpected format '" + get<std::string>(j, "format") + "'");
  }
  const int version = get<int>(j, "version");
  if (version != kDraftVersion) {
    throw Error(ErrorCode::kSchemaVersionMismatch,
                "version " + std::to_string(version) + " is not supported (expected " +
                    std::to_string(kDraftVersion) + ")");
  }
  DraftIndex index;
  index.document_id = get<std::string>(j, "document_id");
  index.status = parse_status(get<std::string>(j, "status"));
  index.max_depth = get<int>(j, "max_depth");
  index.budget = get<std::size_t>(j, "budget");
  const Json& ranking = field(j, "ranking");
  index.ranking.closure_overflow = get<bool>(ranking, "closure_overflow");
  for (const auto& e : array_field(ranking, "entries")) {
    index.ranking.entries.push_back({get<TermId>(e, "term_id"), get<std::string>(e, "canonical"),
                                     score_from(field(e, "score"))});
  }
  for (const auto& t : array_field(j, "terms")) index.terms.push_back(term_from(t));
  for (std::size_t i = 1; i < index.terms.size(); ++i) {
    if (index.terms[i - 1].id >= index.terms[i].id) malformed("terms must be sorted by id");
  }
  for (const auto& r : array_field(j, "relations")) {
    RelationRecord rec;
    rec.id = get<int>(r, "id");
    rec.relation = relation_from(r);
    rec.state = parse_state(get<std::string>(r, "state"));
    if (rec.id != static_cast<int>(index.relations.size())) malformed("relation ids must be dense");
    if (!index.find_term(rec.relation.source_id) || !index.find_term(rec.relation.target_id)) {
      malformed("relation " + std::to_string(rec.id) + " references an unknown term");
    }
    index.relations.push_back(std::move(rec));
  }
  for (const auto& d : array_field(j, "decisions")) index.decisions.push_back(decision_from(d));
  for (const auto& t : index.terms) {
    for (const auto& ref : {t.parent, t.see}) {
      if (ref && !index.find_term(*ref)) {
        malformed("term " + std::to_string(t.id) + " points at unknown term " +
                  std::to_string(*ref));
      }
    }
  }
  array_field(j, "entries");
  index.entries = assemble_entries(index);
  return index;
}

inline DraftIndex import_interchange(std::string_view bytes) {
  interchange::Json j;
  try {
    j = interchange::Json::parse(bytes);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedDocument, e.what());
  }
  return draft_from_json(j);
}

}  // namespace folio
