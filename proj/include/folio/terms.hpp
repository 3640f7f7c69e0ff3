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
#include <map>
#include <set>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "folio/corpus.hpp"
#include "folio/relation.hpp"
#include "folio/text.hpp"

namespace folio {

struct TermOccurrence {
  TermId term_id = 0;
  TokenSpan token_span;
  int page = 0;
  int segment_id = 0;
  int sentence_id = 0;
  bool in_heading = false;
  bool emphasized = false;
  bool cue_context = false;

  bool operator==(const TermOccurrence&) const = default;
};

struct CandidateTerm {
  TermId id = 0;
  std::string canonical;
  std::vector<std::string> words;  // canonical, one lemma per entry
  std::vector<PosTag> word_tags;
  std::set<std::string> surface_forms;
  std::map<std::string, int> surface_counts;
  std::string preferred_surface;
  std::string head_lemma;
  std::vector<std::string> modifier_lemmas;
  std::vector<TermOccurrence> occurrences;
  bool is_acronym = false;

  std::size_t tf() const { return occurrences.size(); }
  bool operator==(const CandidateTerm&) const = default;
};

struct ChunkOptions {
  int min_frequency = 1;
  std::vector<std::string> cue_phrases = {"is defined as", "is called",
                                          "so-called", "refers to", "we call"};
  double acronym_confidence = 0.95;
};

namespace chunk {

// DFA for ADJ* (NOUN|PROPN)+ (PREP DET? ADJ* (NOUN|PROPN)+)*.
// States: 0 start, 1 adjectives pending a noun, 2 accepting noun run,
// 3 after PREP, 4 after DET. -1 is the dead state.
inline int step(int state, PosTag tag) {
  const bool nom = is_nominal(tag);
  switch (state) {
    case 0:
    case 1:
    case 4:
      if (tag == PosTag::kAdj) return 1;
      return nom ? 2 : -1;
    case 2:
      if (nom) return 2;
      return tag == PosTag::kPrep ? 3 : -1;
    case 3:
      if (tag == PosTag::kDet) return 4;
      if (tag == PosTag::kAdj) return 1;
      return nom ? 2 : -1;
    default:
      return -1;
  }
}

inline bool is_valid(std::span<const PosTag> tags) {
  if (tags.empty()) return false;
  int state = 0;
  for (PosTag t : tags) {
    state = step(state, t);
    if (state < 0) return false;
  }
  return state == 2;
}

// End of the longest valid chunk starting at `begin`, or `begin` if none.
inline std::size_t longest_from(std::span<const PosTag> tags, std::size_t begin) {
  int state = 0;
  std::size_t best = begin;
  for (std::size_t i = begin; i < tags.size(); ++i) {
    state = step(state, tags[i]);
    if (state < 0) break;
    if (state == 2) best = i + 1;
  }
  return best;
}

}  // namespace chunk

// Lower-cased lemmas joined by single spaces; determiners that follow a
// preposition are dropped.
inline std::string normalize_term(std::span<const Token> tokens) {
  std::vector<std::string> words;
  bool after_prep = false;
  for (const Token& t : tokens) {
    if (t.pos == PosTag::kPrep) after_prep = true;
    if (t.pos == PosTag::kDet && after_prep) continue;
    words.push_back(text::to_lower(t.lemma.empty() ? t.surface : t.lemma));
  }
  return text::join(words, " ");
}

namespace detail {

struct TermShape {
  std::vector<std::string> words;
  std::vector<PosTag> tags;
  std::string head;
  std::vector<std::string> modifiers;
};

inline TermShape shape_of(std::span<const Token> tokens) {
  TermShape shape;
  bool after_prep = false;
  for (const Token& t : tokens) {
    if (t.pos == PosTag::kPrep) after_prep = true;
    if (t.pos == PosTag::kDet && after_prep) continue;
    shape.words.push_back(text::to_lower(t.lemma.empty() ? t.surface : t.lemma));
    shape.tags.push_back(t.pos);
  }
  // Head: last nominal of the first noun group (before the first PREP).
  std::size_t head_pos = 0;
  for (std::size_t i = 0; i < shape.tags.size(); ++i) {
    if (shape.tags[i] == PosTag::kPrep) break;
    if (is_nominal(shape.tags[i])) head_pos = i;
  }
  shape.head = shape.words.empty() ? "" : shape.words[head_pos];
  for (std::size_t i = 0; i < shape.words.size(); ++i) {
    if (i == head_pos) continue;
    if (shape.tags[i] == PosTag::kPrep || shape.tags[i] == PosTag::kDet) continue;
    shape.modifiers.push_back(shape.words[i]);
  }
  return shape;
}

inline std::string pick_preferred_surface(const std::map<std::string, int>& counts) {
  std::string best;
  int best_count = -1;
  for (const auto& [surface, count] : counts) {
    if (count > best_count) {  // map order gives the bytewise-smallest on ties
      best = surface;
      best_count = count;
    }
  }
  return best;
}

// One flag per sentence id: does the sentence contain a cue phrase?
inline std::map<int, bool> cue_sentences(const Document& doc,
                                         const std::vector<std::string>& cues) {
  std::vector<std::vector<std::string>> cue_tokens;
  for (const auto& cue : cues) {
    auto words = text::split_words(text::to_lower(cue));
    if (!words.empty()) cue_tokens.push_back(std::move(words));
  }
  std::map<int, bool> out;
  for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
    const int sid = doc.tokens[i].sentence_id;
    if (out[sid]) continue;
    for (const auto& cue : cue_tokens) {
      bool hit = i + cue.size() <= doc.tokens.size();
      for (std::size_t k = 0; hit && k < cue.size(); ++k) {
        const Token& t = doc.tokens[i + k];
        hit = t.sentence_id == sid && text::to_lower(t.surface) == cue[k];
      }
      if (hit) {
        out[sid] = true;
        break;
      }
    }
  }
  return out;
}

}  // namespace detail

// Shallow noun-phrase chunking. Every maximal chunk and every grammar-valid
// contiguous sub-chunk inside it becomes an occurrence; occurrences with the
// same canonical form make up one term. Ids follow first-occurrence order.
inline std::vector<CandidateTerm> extract_candidates(const Document& doc,
                                                     const ChunkOptions& options = {}) {
  for (const Token& t : doc.tokens) {
    if (t.lemma.empty()) {
      throw Error(ErrorCode::kUntaggedDocument,
                  "token '" + t.surface + "' has no lemma");
    }
  }
  const auto cues = detail::cue_sentences(doc, options.cue_phrases);

  struct Found {
    TokenSpan span;
    std::string canonical;
  };
  std::vector<Found> found;
  std::vector<PosTag> tags;
  for (const Segment& seg : doc.segments) {
    std::size_t s = seg.token_span.begin;
    while (s < seg.token_span.end) {
      std::size_t e = s;
      while (e < seg.token_span.end &&
             doc.tokens[e].sentence_id == doc.tokens[s].sentence_id) {
        ++e;
      }
      tags.clear();
      for (std::size_t i = s; i < e; ++i) tags.push_back(doc.tokens[i].pos);
      std::size_t i = 0;
      while (i < tags.size()) {
        const std::size_t end = chunk::longest_from(tags, i);
        if (end == i) {
          ++i;
          continue;
        }
        for (std::size_t a = i; a < end; ++a) {
          for (std::size_t b = a + 1; b <= end; ++b) {
            if (!chunk::is_valid(std::span<const PosTag>(tags).subspan(a, b - a))) {
              continue;
            }
            const TokenSpan span{s + a, s + b};
            found.push_back(
                {span, normalize_term(std::span<const Token>(
                           doc.tokens.data() + span.begin, span.size()))});
          }
        }
        i = end;
      }
      s = e;
    }
  }
  std::sort(found.begin(), found.end(), [](const Found& x, const Found& y) {
    return std::tie(x.span.begin, y.span.end) < std::tie(y.span.begin, x.span.end);
  });

  std::map<std::string, std::vector<TokenSpan>> by_canonical;
  std::vector<std::string> first_seen;
  for (const auto& f : found) {
    auto& spans = by_canonical[f.canonical];
    if (spans.empty()) first_seen.push_back(f.canonical);
    spans.push_back(f.span);
  }

  std::vector<CandidateTerm> terms;
  for (const auto& canonical : first_seen) {
    const auto& spans = by_canonical[canonical];
    if (static_cast<int>(spans.size()) < options.min_frequency) continue;
    CandidateTerm term;
    term.id = static_cast<TermId>(terms.size());
    term.canonical = canonical;
    const auto first = std::span<const Token>(doc.tokens.data() + spans[0].begin,
                                              spans[0].size());
    auto shape = detail::shape_of(first);
    term.words = std::move(shape.words);
    term.word_tags = std::move(shape.tags);
    term.head_lemma = std::move(shape.head);
    term.modifier_lemmas = std::move(shape.modifiers);
    for (const TokenSpan& span : spans) {
      TermOccurrence occ;
      occ.term_id = term.id;
      occ.token_span = span;
      occ.page = doc.page_of(span.begin).number;
      const Segment& seg = doc.segment_of(span.begin);
      occ.segment_id = seg.id;
      occ.sentence_id = doc.tokens[span.begin].sentence_id;
      occ.in_heading = seg.kind == SegmentKind::kHeading;
      for (std::size_t i = span.begin; i < span.end; ++i) {
        occ.emphasized = occ.emphasized || doc.tokens[i].emphasis;
      }
      const auto cue = cues.find(occ.sentence_id);
      occ.cue_context = cue != cues.end() && cue->second;
      term.occurrences.push_back(occ);
      const std::string surface = doc.text(span);
      term.surface_forms.insert(surface);
      ++term.surface_counts[surface];
      if (span.size() == 1 && text::is_all_caps_word(surface)) term.is_acronym = true;
    }
    term.preferred_surface = detail::pick_preferred_surface(term.surface_counts);
    terms.push_back(std::move(term));
  }
  return terms;
}

struct VariantGrouping {
  std::vector<CandidateTerm> terms;
  std::vector<Relation> relations;
};

namespace detail {

inline std::string inflection_key(const CandidateTerm& t) {
  std::vector<std::string> words;
  for (std::size_t i = 0; i < t.words.size(); ++i) {
    const bool nominal = i < t.word_tags.size() && is_nominal(t.word_tags[i]);
    words.push_back(nominal ? text::singularize(t.words[i]) : t.words[i]);
  }
  return text::join(words, " ");
}

// Initials of the adjective and noun words; empty for prepositional terms.
inline std::string content_initials(const CandidateTerm& t) {
  std::string out;
  for (std::size_t i = 0; i < t.words.size(); ++i) {
    const PosTag tag = i < t.word_tags.size() ? t.word_tags[i] : PosTag::kNoun;
    if (tag == PosTag::kPrep) return {};
    if ((is_nominal(tag) || tag == PosTag::kAdj) && !t.words[i].empty()) {
      out += t.words[i][0];
    }
  }
  return out;
}

}  // namespace detail

// Merges singular/plural collisions and links acronyms to their expansions
// with variant relations (acronym -> expansion).
inline VariantGrouping group_variants(std::vector<CandidateTerm> terms,
                                      const ChunkOptions& options = {}) {
  std::map<std::string, std::vector<std::size_t>> by_key;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    by_key[detail::inflection_key(terms[i])].push_back(i);
  }
  std::vector<bool> dropped(terms.size(), false);
  for (auto& [key, members] : by_key) {
    if (members.size() < 2) continue;
    std::size_t keep = members[0];
    for (std::size_t m : members) {
      const auto& a = terms[m];
      const auto& b = terms[keep];
      if (a.tf() > b.tf() || (a.tf() == b.tf() && a.id < b.id)) keep = m;
    }
    CandidateTerm& survivor = terms[keep];
    for (std::size_t m : members) {
      if (m == keep) continue;
      CandidateTerm& other = terms[m];
      for (auto occ : other.occurrences) {
        occ.term_id = survivor.id;
        survivor.occurrences.push_back(occ);
      }
      for (const auto& [surface, count] : other.surface_counts) {
        survivor.surface_counts[surface] += count;
        survivor.surface_forms.insert(surface);
      }
      survivor.is_acronym = survivor.is_acronym || other.is_acronym;
      dropped[m] = true;
    }
    std::sort(survivor.occurrences.begin(), survivor.occurrences.end(),
              [](const TermOccurrence& x, const TermOccurrence& y) {
                return x.token_span < y.token_span;
              });
    survivor.preferred_surface = detail::pick_preferred_surface(survivor.surface_counts);
  }

  VariantGrouping out;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (!dropped[i]) out.terms.push_back(std::move(terms[i]));
  }
  for (const auto& acronym : out.terms) {
    if (!acronym.is_acronym || acronym.words.size() != 1) continue;
    for (const auto& expansion : out.terms) {
      if (expansion.words.size() < 2) continue;
      const std::string initials = detail::content_initials(expansion);
      if (initials.empty() || initials != acronym.canonical) continue;
      out.relations.push_back(make_relation(
          acronym.id, expansion.id, RelationKind::kVariant, Evidence::kAcronym,
          options.acronym_confidence,
          "acronym:" + acronym.preferred_surface + "=" + expansion.canonical));
    }
  }
  return out;
}

struct TermStats {
  std::size_t tf = 0;
  double segment_coverage = 0.0;
  std::size_t heading_count = 0;
  std::size_t emphasis_count = 0;
  std::size_t cue_count = 0;

  bool operator==(const TermStats&) const = default;
};

inline TermStats compute_term_stats(const CandidateTerm& term, const Document& doc) {
  TermStats stats;
  stats.tf = term.occurrences.size();
  std::set<int> paragraphs;
  for (const auto& occ : term.occurrences) {
    if (occ.in_heading) ++stats.heading_count;
    if (occ.emphasized) ++stats.emphasis_count;
    if (occ.cue_context) ++stats.cue_count;
    if (occ.segment_id >= 0 &&
        static_cast<std::size_t>(occ.segment_id) < doc.segments.size() &&
        doc.segments[occ.segment_id].kind == SegmentKind::kParagraph) {
      paragraphs.insert(occ.segment_id);
    }
  }
  const std::size_t total = doc.paragraph_count();
  stats.segment_coverage =
      total == 0 ? 0.0 : static_cast<double>(paragraphs.size()) / static_cast<double>(total);
  return stats;
}

}  // namespace folio
