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

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "folio/corpus.hpp"
#include "folio/index.hpp"
#include "folio/interchange.hpp"
#include "folio/terms.hpp"

namespace folio {

enum class IndexSource { kTraditionalManual, kValidatedIndDoc, kBaselineTool };

inline std::string_view source_name(IndexSource s) {
  switch (s) {
    case IndexSource::kTraditionalManual: return "traditional_manual";
    case IndexSource::kValidatedIndDoc: return "validated_inddoc";
    case IndexSource::kBaselineTool: return "baseline_tool";
  }
  return "traditional_manual";
}

// A relation over canonical strings. Symmetric kinds keep source <= target.
struct RelationTriple {
  std::string source;
  std::string target;
  RelationKind kind = RelationKind::kAssociation;

  auto operator<=>(const RelationTriple&) const = default;
};

inline RelationTriple make_triple(std::string source, std::string target, RelationKind kind) {
  if (is_symmetric(kind) && target < source) std::swap(source, target);
  return {std::move(source), std::move(target), kind};
}

struct ReferenceIndex {
  std::set<std::string> descriptors;
  std::set<RelationTriple> relations;
  IndexSource source_kind = IndexSource::kTraditionalManual;
};

// The evaluated side: descriptors in rank order plus relations.
struct CandidateIndex {
  std::vector<std::string> ranked;
  std::set<RelationTriple> relations;

  std::set<std::string> descriptors() const { return {ranked.begin(), ranked.end()}; }
};

// Exact non-negative ratio.
struct Fraction {
  std::int64_t num = 0;
  std::int64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool operator==(const Fraction& o) const { return num * o.den == o.num * den; }
};

inline CandidateIndex candidate_from_draft(const DraftIndex& draft) {
  CandidateIndex c;
  std::set<std::string> seen;
  for (const auto& e : draft.ranking.entries) {
    const TermRecord* t = draft.find_term(e.term_id);
    if (t == nullptr || !t->active()) continue;
    if (seen.insert(t->canonical).second) c.ranked.push_back(t->canonical);
  }
  for (const auto& t : draft.terms) {
    if (t.active() && seen.insert(t.canonical).second) c.ranked.push_back(t.canonical);
  }
  for (const auto& r : draft.relations) {
    if (!r.active()) continue;
    const TermRecord* s = draft.find_term(r.relation.source_id);
    const TermRecord* d = draft.find_term(r.relation.target_id);
    if (s == nullptr || d == nullptr || !s->active() || !d->active()) continue;
    c.relations.insert(make_triple(s->canonical, d->canonical, r.relation.kind));
  }
  return c;
}

inline ReferenceIndex reference_from_draft(const DraftIndex& draft,
                                           IndexSource kind = IndexSource::kValidatedIndDoc) {
  const CandidateIndex c = candidate_from_draft(draft);
  return {c.descriptors(), c.relations, kind};
}

inline ReferenceIndex reference_from_candidate(const CandidateIndex& c, IndexSource kind) {
  return {c.descriptors(), c.relations, kind};
}

// Normalizes a printed label the same way document terms are normalized.
inline std::string normalize_label(std::string_view label) {
  std::string clean;
  for (char c : label) {
    if (c != '*' && c != '#') clean += c;
  }
  if (!text::has_alnum(clean)) return {};
  const Document doc = ingest_plain_text(clean);
  std::vector<Token> words;
  for (const Token& t : doc.tokens) {
    if (t.pos != PosTag::kPunct) words.push_back(t);
  }
  return normalize_term(words);
}

inline bool contains_words(const std::string& haystack, const std::string& needle) {
  return (" " + haystack + " ").find(" " + needle + " ") != std::string::npos;
}

struct ReferenceParseOptions {
  // Prefix each sub-entry label with its parent's label, undoing the
  // shortened display of nested entries. Labels that already hold the
  // parent's words are kept as printed.
  bool compose_subentries = true;
  IndexSource source_kind = IndexSource::kTraditionalManual;
};

// Parses a printed index: one entry per line, nesting by leading tabs (or
// two spaces per level), "Label see Target", "Label (see also A; B)",
// locators after a tab, '#' comment lines.
inline ReferenceIndex parse_reference_text(std::string_view content,
                                           const ReferenceParseOptions& options = {}) {
  ReferenceIndex out;
  out.source_kind = options.source_kind;
  std::vector<std::pair<std::string, std::string>> stack;  // (full label, canonical)
  int line_no = 0;
  for (const std::string& raw : text::split(content, '\n')) {
    ++line_no;
    std::string line = raw;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t depth = 0;
    std::size_t pos = 0;
    while (pos < line.size()) {
      if (line[pos] == '\t') {
        ++depth;
        ++pos;
      } else if (line.compare(pos, 2, "  ") == 0) {
        ++depth;
        pos += 2;
      } else {
        break;
      }
    }
    std::string body = line.substr(pos);
    if (text::trim(body).empty() || body[0] == '#') continue;
    if (const auto tab = body.find('\t'); tab != std::string::npos) body.resize(tab);
    body = std::string(text::trim(body));

    std::vector<std::string> see_also;
    std::optional<std::string> see;
    if (const auto p = body.rfind(" (see also "); p != std::string::npos && body.back() == ')') {
      const std::string list = body.substr(p + 11, body.size() - p - 12);
      for (const auto& item : text::split(list, ';')) {
        if (!text::trim(item).empty()) see_also.emplace_back(text::trim(item));
      }
      body.resize(p);
    } else if (const auto q = body.rfind(" see "); q != std::string::npos) {
      see = std::string(text::trim(body.substr(q + 5)));
      body.resize(q);
    }

    if (depth > stack.size()) {
      throw Error(ErrorCode::kBadReference,
                  "line " + std::to_string(line_no) + ": indentation skips a level");
    }
    stack.resize(depth);
    std::string full = std::string(text::trim(body));
    if (options.compose_subentries && !stack.empty() &&
        !contains_words(normalize_label(full), stack.back().second)) {
      full = stack.back().first + " " + full;
    }
    const std::string canonical = normalize_label(full);
    if (canonical.empty()) {
      throw Error(ErrorCode::kBadReference, "line " + std::to_string(line_no) + ": empty label");
    }
    out.descriptors.insert(canonical);
    if (!stack.empty()) {
      out.relations.insert(make_triple(stack.back().second, canonical, RelationKind::kHypernymy));
    }
    if (see) {
      const std::string target = normalize_label(*see);
      if (!target.empty()) {
        out.descriptors.insert(target);
        out.relations.insert(make_triple(canonical, target, RelationKind::kVariant));
      }
    }
    for (const auto& a : see_also) {
      const std::string target = normalize_label(a);
      if (target.empty() || target == canonical) continue;
      out.descriptors.insert(target);
      out.relations.insert(make_triple(canonical, target, RelationKind::kAssociation));
    }
    stack.emplace_back(full, canonical);
  }
  return out;
}

// Reads either an interchange document (leading '{') or a printed index.
inline ReferenceIndex load_reference(std::string_view content,
                                     const ReferenceParseOptions& options = {}) {
  const auto body = text::trim(content);
  if (!body.empty() && body.front() == '{') {
    return reference_from_draft(import_interchange(content), options.source_kind);
  }
  return parse_reference_text(content, options);
}

inline CandidateIndex load_candidate(std::string_view content,
                                     const ReferenceParseOptions& options = {}) {
  const auto body = text::trim(content);
  if (!body.empty() && body.front() == '{') return candidate_from_draft(import_interchange(content));
  const ReferenceIndex r = parse_reference_text(content, options);
  return {{r.descriptors.begin(), r.descriptors.end()}, r.relations};
}

// ---------------------------------------------------------------------------
// Metrics

inline Fraction descriptor_precision_counts(const CandidateIndex& draft,
                                            const ReferenceIndex& validated) {
  const auto mine = draft.descriptors();
  if (mine.empty()) throw Error(ErrorCode::kEmptyDraft, "draft has no descriptors");
  std::int64_t hits = 0;
  for (const auto& d : mine) hits += validated.descriptors.count(d);
  return {hits, static_cast<std::int64_t>(mine.size())};
}

inline double descriptor_precision(const CandidateIndex& draft, const ReferenceIndex& validated) {
  return descriptor_precision_counts(draft, validated).value();
}

// Precision over the top-k ranked descriptors; k defaults to the size of
// the validated index and is capped at the draft size.
inline Fraction ranked_precision_counts(const CandidateIndex& draft,
                                        const ReferenceIndex& validated,
                                        std::optional<std::size_t> k = std::nullopt) {
  if (draft.ranked.empty()) throw Error(ErrorCode::kEmptyDraft, "draft has no descriptors");
  std::size_t cut = std::min(k.value_or(validated.descriptors.size()), draft.ranked.size());
  if (cut == 0) return {0, 1};
  std::int64_t hits = 0;
  for (std::size_t i = 0; i < cut; ++i) hits += validated.descriptors.count(draft.ranked[i]);
  return {hits, static_cast<std::int64_t>(cut)};
}

inline double ranked_precision(const CandidateIndex& draft, const ReferenceIndex& validated,
                               std::optional<std::size_t> k = std::nullopt) {
  return ranked_precision_counts(draft, validated, k).value();
}

inline Fraction relation_precision_counts(const CandidateIndex& draft,
                                          const ReferenceIndex& validated) {
  if (draft.relations.empty()) throw Error(ErrorCode::kNoRelations, "draft has no relations");
  std::int64_t hits = 0;
  for (const auto& r : draft.relations) hits += validated.relations.count(r);
  return {hits, static_cast<std::int64_t>(draft.relations.size())};
}

inline double relation_precision(const CandidateIndex& draft, const ReferenceIndex& validated) {
  return relation_precision_counts(draft, validated).value();
}

inline Fraction descriptor_recall_counts(const CandidateIndex& draft,
                                         const ReferenceIndex& validated) {
  if (validated.descriptors.empty()) return {0, 1};
  const auto mine = draft.descriptors();
  std::int64_t hits = 0;
  for (const auto& d : validated.descriptors) hits += mine.count(d);
  return {hits, static_cast<std::int64_t>(validated.descriptors.size())};
}

// Percent change as an exact fraction: value() is the percentage.
struct SizeIncrease {
  Fraction descriptor_pct;
  std::optional<Fraction> relations_per_descriptor_pct;  // unset: traditional has none
};

inline SizeIncrease size_increase(const ReferenceIndex& candidate,
                                  const ReferenceIndex* traditional) {
  if (traditional == nullptr) {
    throw Error(ErrorCode::kNonApplicable, "no traditional index to compare with");
  }
  const auto ct = static_cast<std::int64_t>(traditional->descriptors.size());
  if (ct == 0) throw Error(ErrorCode::kEmptyTraditional, "traditional index is empty");
  const auto cc = static_cast<std::int64_t>(candidate.descriptors.size());
  const auto rt = static_cast<std::int64_t>(traditional->relations.size());
  const auto rc = static_cast<std::int64_t>(candidate.relations.size());
  SizeIncrease out;
  out.descriptor_pct = {100 * (cc - ct), ct};
  if (rt > 0 && cc > 0) {
    // (rc/cc - rt/ct) / (rt/ct)
    out.relations_per_descriptor_pct = Fraction{100 * (rc * ct - rt * cc), rt * cc};
  }
  return out;
}

inline ReferenceIndex baseline_all_np_index(std::span<const CandidateTerm> terms) {
  ReferenceIndex out;
  out.source_kind = IndexSource::kBaselineTool;
  for (const auto& t : terms) out.descriptors.insert(t.canonical);
  return out;
}

inline ReferenceIndex baseline_all_np_index(const Document& doc, ChunkOptions options = {}) {
  options.min_frequency = 1;
  const auto terms = extract_candidates(doc, options);
  return baseline_all_np_index(terms);
}

inline std::size_t word_occurrences(const Document& doc) {
  return static_cast<std::size_t>(std::count_if(
      doc.tokens.begin(), doc.tokens.end(), [](const Token& t) { return t.pos != PosTag::kPunct; }));
}

// ---------------------------------------------------------------------------
// Reports

struct EvalReport {
  std::string label;
  std::optional<std::size_t> corpus_words;
  bool has_traditional = false;
  bool has_draft = true;
  bool has_validated = true;
  std::optional<Fraction> descriptor_precision;
  std::optional<Fraction> ranked_precision;
  std::optional<std::size_t> ranked_k;
  std::optional<Fraction> relation_precision;
  std::optional<Fraction> descriptor_recall;
  std::optional<Fraction> size_increase_pct;
  std::optional<Fraction> relations_per_descriptor_increase_pct;
  std::size_t draft_descriptors = 0;
  std::size_t draft_relations = 0;
  std::size_t validated_descriptors = 0;
  std::size_t validated_relations = 0;
  std::size_t traditional_descriptors = 0;
  std::size_t traditional_relations = 0;
};

struct EvalOptions {
  std::optional<std::size_t> k;
  std::optional<std::size_t> corpus_words;
  std::string label = "document";
};

inline EvalReport evaluate(const CandidateIndex& draft, const ReferenceIndex& validated,
                           const ReferenceIndex* traditional, const EvalOptions& options = {}) {
  EvalReport r;
  r.label = options.label;
  r.corpus_words = options.corpus_words;
  r.has_traditional = traditional != nullptr;
  r.draft_descriptors = draft.descriptors().size();
  r.draft_relations = draft.relations.size();
  r.validated_descriptors = validated.descriptors.size();
  r.validated_relations = validated.relations.size();
  if (!draft.ranked.empty()) {
    r.descriptor_precision = descriptor_precision_counts(draft, validated);
    r.ranked_precision = ranked_precision_counts(draft, validated, options.k);
    r.ranked_k = static_cast<std::size_t>(r.ranked_precision->den);
    r.descriptor_recall = descriptor_recall_counts(draft, validated);
  }
  if (!draft.relations.empty()) r.relation_precision = relation_precision_counts(draft, validated);
  if (traditional != nullptr) {
    r.traditional_descriptors = traditional->descriptors.size();
    r.traditional_relations = traditional->relations.size();
    if (!traditional->descriptors.empty()) {
      const auto inc = size_increase(validated, traditional);
      r.size_increase_pct = inc.descriptor_pct;
      r.relations_per_descriptor_increase_pct = inc.relations_per_descriptor_pct;
    }
  }
  return r;
}

// Truncates toward zero: 1/3 -> "33%", 5/3 of a hundred -> "+166%".
inline std::string format_percent(const Fraction& f, bool signed_change) {
  const std::int64_t whole = (100 * f.num) / f.den;
  std::string s = std::to_string(whole) + "%";
  if (signed_change && f.num > 0) s = "+" + s;
  return s;
}

inline std::string format_change(const Fraction& pct) {
  const std::int64_t whole = pct.num / pct.den;
  std::string s = std::to_string(whole) + "%";
  return pct.num > 0 ? "+" + s : s;
}

inline std::string format_thousands(std::size_t n) {
  std::string digits = std::to_string(n);
  std::string out;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (i > 0 && (digits.size() - i) % 3 == 0) out += ' ';
    out += digits[i];
  }
  return out;
}

inline constexpr std::string_view kNonApplicable = "Non applicable";

inline constexpr std::string_view kTableRows[] = {
    "Corpus size (# of words occurrences)",
    "Existence of an original manual index",
    "Existence of a draft index",
    "Existence of an IndDoc index",
    "Precision of descriptor extraction – comparison 3",
    "Ranked precision of descriptor extraction – comparison 3",
    "Precision of relation extraction – comparison 3",
    "Size increase (# of descriptors) – comparison 1",
    "Size increase (average # of relations per descriptor) – comparison 1",
};

// Tab-separated table, one column per report.
inline std::string compare_reports(std::span<const EvalReport> reports) {
  auto yes_no = [](bool b) { return std::string(b ? "Yes" : "No"); };
  auto ratio = [](const std::optional<Fraction>& f) {
    return f ? format_percent(*f, false) : std::string(kNonApplicable);
  };
  auto change = [](const std::optional<Fraction>& f) {
    return f ? format_change(*f) : std::string(kNonApplicable);
  };
  std::vector<std::vector<std::string>> cells(std::size(kTableRows));
  for (const auto& r : reports) {
    cells[0].push_back(r.corpus_words ? format_thousands(*r.corpus_words)
                                      : std::string(kNonApplicable));
    cells[1].push_back(yes_no(r.has_traditional));
    cells[2].push_back(yes_no(r.has_draft));
    cells[3].push_back(yes_no(r.has_validated));
    cells[4].push_back(ratio(r.descriptor_precision));
    cells[5].push_back(ratio(r.ranked_precision));
    cells[6].push_back(ratio(r.relation_precision));
    cells[7].push_back(change(r.size_increase_pct));
    cells[8].push_back(change(r.relations_per_descriptor_increase_pct));
  }
  std::string out;
  for (const auto& r : reports) out += "\t" + r.label;
  out += "\n";
  for (std::size_t i = 0; i < std::size(kTableRows); ++i) {
    out += std::string(kTableRows[i]);
    for (const auto& c : cells[i]) out += "\t" + c;
    out += "\n";
  }
  return out;
}

inline constexpr std::string_view kEvalFormat = "folio-eval";
inline constexpr int kEvalVersion = 1;

inline nlohmann::ordered_json report_to_json(const EvalReport& r) {
  using Json = nlohmann::ordered_json;
  auto frac = [](const std::optional<Fraction>& f) {
    return f ? Json{{"numerator", f->num}, {"denominator", f->den}, {"value", f->value()}}
             : Json(nullptr);
  };
  Json j{{"label", r.label}};
  j["corpus_words"] = r.corpus_words ? Json(*r.corpus_words) : Json(nullptr);
  j["has_traditional"] = r.has_traditional;
  j["has_draft"] = r.has_draft;
  j["has_validated"] = r.has_validated;
  j["descriptor_precision"] = frac(r.descriptor_precision);
  j["ranked_precision"] = frac(r.ranked_precision);
  j["ranked_k"] = r.ranked_k ? Json(*r.ranked_k) : Json(nullptr);
  j["relation_precision"] = frac(r.relation_precision);
  j["descriptor_recall"] = frac(r.descriptor_recall);
  j["size_increase_pct"] = frac(r.size_increase_pct);
  j["relations_per_descriptor_increase_pct"] = frac(r.relations_per_descriptor_increase_pct);
  j["counts"] = Json{{"draft_descriptors", r.draft_descriptors},
                     {"draft_relations", r.draft_relations},
                     {"validated_descriptors", r.validated_descriptors},
                     {"validated_relations", r.validated_relations},
                     {"traditional_descriptors", r.traditional_descriptors},
                     {"traditional_relations", r.traditional_relations}};
  return j;
}

inline std::string export_reports(std::span<const EvalReport> reports) {
  nlohmann::ordered_json j{{"format", kEvalFormat}, {"version", kEvalVersion}};
  j["reports"] = nlohmann::ordered_json::array();
  for (const auto& r : reports) j["reports"].push_back(report_to_json(r));
  return j.dump(2) + "\n";
}

}  // namespace folio
