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

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "folio/corpus.hpp"
#include "folio/index.hpp"
#include "folio/ranking.hpp"
#include "folio/references.hpp"
#include "folio/relations.hpp"
#include "folio/terms.hpp"
#include "folio/text.hpp"

namespace folio {

struct PipelineConfig {
  IngestOptions ingest;
  std::string lexicon_path;
  ChunkOptions chunk;
  std::string rules_path;
  std::string synonyms_path;
  SynonymOptions synonym;
  double head_expansion_confidence = 0.9;
  RankingWeights weights;
  RefPolicy refs;
  std::size_t max_entries = 2000;
  int max_depth = 2;
  std::string input_path;
  std::string out_prefix;

  void validate() const {
    weights.validate();
    if (max_entries < 1) throw Error(ErrorCode::kBadConfig, "max_entries must be at least 1");
    if (max_depth < 1) throw Error(ErrorCode::kBadConfig, "max_depth must be at least 1");
    if (chunk.min_frequency < 1) throw Error(ErrorCode::kBadConfig, "min_frequency must be >= 1");
    for (const auto* path : {&lexicon_path, &rules_path, &synonyms_path, &input_path}) {
      if (!path->empty() && !std::filesystem::exists(*path)) {
        throw Error(ErrorCode::kIoError, "no such file: " + *path);
      }
    }
  }
};

namespace detail {

inline double config_number(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used == value.size()) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::kBadConfig, key + ": expected a number, got '" + value + "'");
}

inline long config_integer(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const long v = std::stol(value, &used);
    if (used == value.size()) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::kBadConfig, key + ": expected an integer, got '" + value + "'");
}

inline bool config_bool(const std::string& key, const std::string& value) {
  const auto v = text::to_lower(value);
  if (v == "true" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "no" || v == "0") return false;
  throw Error(ErrorCode::kBadConfig, key + ": expected true or false, got '" + value + "'");
}

inline std::vector<double> config_numbers(const std::string& key, const std::string& value,
                                          std::size_t n) {
  std::vector<double> out;
  for (const auto& part : text::split(value, ',')) {
    out.push_back(config_number(key, std::string(text::trim(part))));
  }
  if (out.size() != n) {
    throw Error(ErrorCode::kBadConfig, key + ": expected " + std::to_string(n) + " values");
  }
  return out;
}

inline std::vector<std::string> config_list(const std::string& value, char sep) {
  std::vector<std::string> out;
  for (const auto& part : text::split(value, sep)) {
    const auto item = text::trim(part);
    if (!item.empty()) out.emplace_back(item);
  }
  return out;
}

}  // namespace detail

// Applies `key = value` settings. Relative paths resolve against `base_dir`.
inline void apply_config_text(PipelineConfig& config, std::string_view content,
                              const std::string& origin,
                              const std::filesystem::path& base_dir = {}) {
  using namespace detail;
  auto path = [&](const std::string& v) {
    const std::filesystem::path p(v);
    return (p.is_absolute() || base_dir.empty() ? p : base_dir / p).string();
  };
  for (const auto& [key, value] : text::parse_key_values(content, origin)) {
    if (key == "document_id") {
      config.ingest.document_id = value;
    } else if (key == "first_page") {
      config.ingest.first_page = static_cast<int>(config_integer(key, value));
    } else if (key == "language") {
      if (value != "en") throw Error(ErrorCode::kBadConfig, "language: only 'en' is built in");
      config.ingest.language = value;
    } else if (key == "lexicon") {
      config.lexicon_path = path(value);
    } else if (key == "abbreviations") {
      const auto items = config_list(text::to_lower(value), ',');
      config.ingest.abbreviations = {items.begin(), items.end()};
    } else if (key == "nominal_suffixes") {
      config.ingest.tagger.nominal_suffixes = config_list(value, ',');
    } else if (key == "min_frequency") {
      config.chunk.min_frequency = static_cast<int>(config_integer(key, value));
    } else if (key == "cue_phrases") {
      config.chunk.cue_phrases = config_list(text::to_lower(value), ';');
    } else if (key == "acronym_confidence") {
      config.chunk.acronym_confidence = config_number(key, value);
    } else if (key == "rules") {
      config.rules_path = path(value);
    } else if (key == "synonyms") {
      config.synonyms_path = path(value);
    } else if (key == "synonym_confidence") {
      config.synonym.whole_term_confidence = config_number(key, value);
    } else if (key == "synonym_component_confidence") {
      config.synonym.component_confidence = config_number(key, value);
    } else if (key == "head_expansion_confidence") {
      config.head_expansion_confidence = config_number(key, value);
    } else if (key == "weights") {
      const auto w = config_numbers(key, value, 4);
      config.weights.frequency = w[0];
      config.weights.dispersion = w[1];
      config.weights.salience = w[2];
      config.weights.cohesion = w[3];
    } else if (key == "salience_multipliers") {
      const auto m = config_numbers(key, value, 3);
      config.weights.heading_multiplier = m[0];
      config.weights.emphasis_multiplier = m[1];
      config.weights.cue_multiplier = m[2];
    } else if (key == "mention_threshold") {
      config.refs.mention_threshold = static_cast<int>(config_integer(key, value));
    } else if (key == "keep_mentions") {
      config.refs.keep_mentions = config_bool(key, value);
    } else if (key == "variant_closure") {
      config.refs.variant_closure = config_bool(key, value);
    } else if (key == "max_entries") {
      const long n = config_integer(key, value);
      if (n < 1) throw Error(ErrorCode::kBadConfig, "max_entries must be at least 1");
      config.max_entries = static_cast<std::size_t>(n);
    } else if (key == "max_depth") {
      config.max_depth = static_cast<int>(config_integer(key, value));
    } else if (key == "input") {
      config.input_path = path(value);
    } else if (key == "out") {
      config.out_prefix = path(value);
    } else {
      throw Error(ErrorCode::kBadConfig, origin + ": unknown key '" + key + "'");
    }
  }
}

inline PipelineConfig load_config(const std::string& file) {
  PipelineConfig config;
  apply_config_text(config, text::read_file(file), file,
                    std::filesystem::path(file).parent_path());
  return config;
}

struct PipelineResult {
  Document doc;
  std::vector<CandidateTerm> terms;
  std::vector<Relation> relations;
  std::vector<ScoreBreakdown> breakdowns;
  RankedList ranked;
  RankedList kept;
  std::map<TermId, TermReferences> refs;
  DraftIndex draft;
};

inline Document load_document(const std::string& file, const PipelineConfig& config) {
  const std::string source = text::read_file(file);
  if (text::ends_with(file, ".tagged")) return ingest_tagged(source, config.ingest);
  TagLexicon lexicon = TagLexicon::core_english();
  if (!config.lexicon_path.empty()) {
    lexicon.merge_text(text::read_file(config.lexicon_path), config.lexicon_path);
  }
  return ingest_plain_text(source, config.ingest, lexicon);
}

// Runs every stage after ingestion.
inline PipelineResult run_pipeline(Document doc, const PipelineConfig& config) {
  config.validate();
  PipelineResult out;
  out.doc = std::move(doc);
  const Document& d = out.doc;

  auto grouped = group_variants(extract_candidates(d, config.chunk), config.chunk);
  out.terms = std::move(grouped.terms);

  const auto rules = config.rules_path.empty() ? default_rules()
                                               : parse_rules(text::read_file(config.rules_path));
  std::vector<std::vector<Relation>> batches;
  batches.push_back(std::move(grouped.relations));
  batches.push_back(extract_pattern_relations(d, out.terms, rules));
  batches.push_back(extract_head_expansion_relations(out.terms, config.head_expansion_confidence));
  if (!config.synonyms_path.empty()) {
    const auto dict = SynonymDictionary::parse(text::read_file(config.synonyms_path));
    batches.push_back(project_synonym_dictionary(out.terms, dict, config.synonym));
  }
  out.relations = merge_relations(batches);

  const auto freq = CorpusFrequencies::from(out.terms, d);
  for (const auto& t : out.terms) {
    out.breakdowns.push_back(score_descriptor(t, compute_term_stats(t, d), freq, config.weights));
  }
  out.ranked = rank_descriptors(out.terms, out.breakdowns);
  out.kept = truncate_to_budget(out.ranked, config.max_entries, out.relations);

  std::map<TermId, const CandidateTerm*> by_id;
  for (const auto& t : out.terms) by_id[t.id] = &t;
  std::map<TermId, std::vector<CandidateTerm>> variants_of;
  if (config.refs.variant_closure) {
    for (const auto& r : out.relations) {
      if (r.kind == RelationKind::kVariant) variants_of[r.target_id].push_back(*by_id.at(r.source_id));
    }
  }
  for (const auto& e : out.kept.entries) {
    const CandidateTerm& t = *by_id.at(e.term_id);
    const auto& variants = variants_of[t.id];
    TermReferences refs;
    refs.page_refs = compute_page_refs(locate_occurrences(t, d, variants), config.refs);
    std::map<int, double> scores;
    for (const auto& occ : t.occurrences) {
      if (!scores.count(occ.segment_id)) {
        scores[occ.segment_id] =
            score_segment(t, d.segments.at(static_cast<std::size_t>(occ.segment_id)), d);
      }
    }
    refs.segment_refs = select_reference_segments(t, d, scores);
    out.refs[t.id] = std::move(refs);
  }

  out.draft = build_draft_index(d, out.terms, out.relations, out.refs, out.kept,
                                config.max_entries, IndexOptions{config.max_depth});
  return out;
}

inline PipelineResult run_pipeline(const PipelineConfig& config) {
  if (config.input_path.empty()) throw Error(ErrorCode::kBadConfig, "no input document");
  config.validate();
  return run_pipeline(load_document(config.input_path, config), config);
}

}  // namespace folio
