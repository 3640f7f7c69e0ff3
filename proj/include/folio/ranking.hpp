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
#include <cmath>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "folio/corpus.hpp"
#include "folio/relation.hpp"
#include "folio/terms.hpp"

namespace folio {

struct RankingWeights {
  double frequency = 0.4;
  double dispersion = 0.2;
  double salience = 0.2;
  double cohesion = 0.2;
  // Salience multipliers for heading, emphasis and cue-phrase occurrences.
  double heading_multiplier = 3.0;
  double emphasis_multiplier = 2.0;
  double cue_multiplier = 2.0;

  void validate() const {
    const double sum = frequency + dispersion + salience + cohesion;
    if (std::abs(sum - 1.0) > 1e-9 || frequency < 0 || dispersion < 0 || salience < 0 ||
        cohesion < 0) {
      throw Error(ErrorCode::kBadWeights,
                  "ranking weights must be non-negative and sum to 1 (got " +
                      std::to_string(sum) + ")");
    }
  }
  bool operator==(const RankingWeights&) const = default;
};

struct ScoreBreakdown {
  double frequency_component = 0.0;
  double dispersion_component = 0.0;
  double salience_component = 0.0;
  double cohesion_component = 0.0;
  double total = 0.0;
  RankingWeights weights;

  bool operator==(const ScoreBreakdown&) const = default;
};

// Corpus-level counts needed by the frequency and cohesion factors.
struct CorpusFrequencies {
  std::size_t max_tf = 0;
  std::map<std::string, std::size_t> term_tf;      // canonical -> tf
  std::map<std::string, std::size_t> lemma_count;  // lemma -> token count

  static CorpusFrequencies from(std::span<const CandidateTerm> terms, const Document& doc) {
    CorpusFrequencies f;
    for (const auto& t : terms) {
      f.term_tf[t.canonical] = t.tf();
      f.max_tf = std::max(f.max_tf, t.tf());
    }
    for (const auto& tok : doc.tokens) ++f.lemma_count[text::to_lower(tok.lemma)];
    return f;
  }

  // Frequency of a word or phrase: its term frequency when it is a term,
  // else its token count.
  std::size_t of(const std::string& phrase) const {
    if (const auto it = term_tf.find(phrase); it != term_tf.end()) return it->second;
    if (const auto it = lemma_count.find(phrase); it != lemma_count.end()) return it->second;
    return 0;
  }
};

inline double dice(double joint, double a, double b) {
  if (a + b <= 0.0) return 0.0;
  return std::clamp(2.0 * joint / (a + b), 0.0, 1.0);
}

// 1 for single-content-word terms; Dice of the whole term against its two
// content words; geometric mean of adjacent-pair Dice beyond that.
inline double cohesion_of(const CandidateTerm& term, const CorpusFrequencies& freq) {
  std::vector<std::size_t> content;
  for (std::size_t i = 0; i < term.words.size(); ++i) {
    const PosTag tag = i < term.word_tags.size() ? term.word_tags[i] : PosTag::kNoun;
    if (is_nominal(tag) || tag == PosTag::kAdj) content.push_back(i);
  }
  if (content.size() <= 1) return 1.0;
  const double ft = static_cast<double>(term.tf());
  if (content.size() == 2) {
    return dice(ft, static_cast<double>(freq.of(term.words[content[0]])),
                static_cast<double>(freq.of(term.words[content[1]])));
  }
  double log_sum = 0.0;
  for (std::size_t k = 0; k + 1 < content.size(); ++k) {
    std::vector<std::string> slice(term.words.begin() + static_cast<long>(content[k]),
                                   term.words.begin() + static_cast<long>(content[k + 1]) + 1);
    const double joint =
        std::max(static_cast<double>(freq.of(text::join(slice, " "))), ft);
    const double d = dice(joint, static_cast<double>(freq.of(term.words[content[k]])),
                          static_cast<double>(freq.of(term.words[content[k + 1]])));
    if (d <= 0.0) return 0.0;
    log_sum += std::log(d);
  }
  return std::exp(log_sum / static_cast<double>(content.size() - 1));
}

inline ScoreBreakdown score_descriptor(const CandidateTerm& term, const TermStats& stats,
                                       const CorpusFrequencies& freq,
                                       const RankingWeights& weights = {}) {
  weights.validate();
  ScoreBreakdown b;
  b.weights = weights;
  const double tf = static_cast<double>(stats.tf);
  b.frequency_component =
      freq.max_tf == 0
          ? 0.0
          : std::min(1.0, std::log1p(tf) / std::log1p(static_cast<double>(freq.max_tf)));
  b.dispersion_component = std::clamp(stats.segment_coverage, 0.0, 1.0);
  if (stats.tf > 0) {
    const double raw = weights.heading_multiplier * static_cast<double>(stats.heading_count) +
                       weights.emphasis_multiplier * static_cast<double>(stats.emphasis_count) +
                       weights.cue_multiplier * static_cast<double>(stats.cue_count);
    b.salience_component = std::min(1.0, raw / tf * 0.5);
  }
  b.cohesion_component = cohesion_of(term, freq);
  b.total = weights.frequency * b.frequency_component +
            weights.dispersion * b.dispersion_component +
            weights.salience * b.salience_component + weights.cohesion * b.cohesion_component;
  b.total = std::clamp(b.total, 0.0, 1.0);
  return b;
}

// 0.5 x relative occurrence count + 0.3 if the segment's group heading
// mentions the term + 0.2 if an occurrence here is emphasized or cued.
inline double score_segment(const CandidateTerm& term, const Segment& segment,
                            const Document& doc) {
  std::map<int, int> per_segment;
  bool salient_here = false;
  for (const auto& occ : term.occurrences) {
    ++per_segment[occ.segment_id];
    if (occ.segment_id == segment.id && (occ.emphasized || occ.cue_context)) {
      salient_here = true;
    }
  }
  const auto here = per_segment.find(segment.id);
  if (here == per_segment.end()) return 0.0;
  int max_count = 0;
  for (const auto& [seg, n] : per_segment) max_count = std::max(max_count, n);
  double score = 0.5 * static_cast<double>(here->second) / static_cast<double>(max_count);
  if (segment.group && per_segment.count(*segment.group) &&
      static_cast<std::size_t>(*segment.group) < doc.segments.size() &&
      doc.segments[*segment.group].kind == SegmentKind::kHeading) {
    score += 0.3;
  }
  if (salient_here) score += 0.2;
  return std::min(score, 1.0);
}

struct RankedEntry {
  TermId term_id = 0;
  std::string canonical;
  ScoreBreakdown score;

  bool operator==(const RankedEntry&) const = default;
};

struct RankedList {
  std::vector<RankedEntry> entries;
  // Set when the ancestor closure of the top entry alone exceeded the budget.
  bool closure_overflow = false;

  bool operator==(const RankedList&) const = default;
};

// Total descending, then canonical form ascending (bytewise).
inline bool ranks_before(const RankedEntry& a, const RankedEntry& b) {
  if (a.score.total != b.score.total) return a.score.total > b.score.total;
  if (a.canonical != b.canonical) return a.canonical < b.canonical;
  return a.term_id < b.term_id;
}

inline RankedList rank_descriptors(std::span<const CandidateTerm> terms,
                                   std::span<const ScoreBreakdown> breakdowns) {
  if (terms.size() != breakdowns.size()) {
    throw Error(ErrorCode::kInconsistentInputs, "one score breakdown per term required");
  }
  RankedList list;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    list.entries.push_back({terms[i].id, terms[i].canonical, breakdowns[i]});
  }
  std::sort(list.entries.begin(), list.entries.end(), ranks_before);
  return list;
}

namespace detail {

inline std::map<TermId, std::set<TermId>> ancestor_sets(std::span<const Relation> relations,
                                                        const std::set<TermId>& universe) {
  std::map<TermId, std::vector<TermId>> parents;
  for (const auto& r : relations) {
    if (r.kind == RelationKind::kHypernymy && universe.count(r.source_id) &&
        universe.count(r.target_id)) {
      parents[r.target_id].push_back(r.source_id);
    }
  }
  std::map<TermId, std::set<TermId>> out;
  for (TermId t : universe) {
    auto& acc = out[t];
    std::vector<TermId> stack = {t};
    while (!stack.empty()) {
      const TermId u = stack.back();
      stack.pop_back();
      const auto it = parents.find(u);
      if (it == parents.end()) continue;
      for (TermId p : it->second) {
        if (p != t && acc.insert(p).second) stack.push_back(p);
      }
    }
  }
  return out;
}

}  // namespace detail

// Keeps the top `budget` entries, then pulls back any cut hypernymy
// ancestor of a kept entry and drops the lowest-ranked kept entries that no
// other kept entry depends on.
inline RankedList truncate_to_budget(const RankedList& ranked, std::size_t budget,
                                     std::span<const Relation> relations = {}) {
  if (budget < 1) throw Error(ErrorCode::kBadConfig, "budget must be at least 1");
  if (ranked.entries.size() <= budget) return ranked;

  std::set<TermId> universe;
  std::map<TermId, std::size_t> position;
  for (std::size_t i = 0; i < ranked.entries.size(); ++i) {
    universe.insert(ranked.entries[i].term_id);
    position[ranked.entries[i].term_id] = i;
  }
  const auto ancestors = detail::ancestor_sets(relations, universe);

  auto emit = [&](const std::set<TermId>& kept, bool overflow) {
    RankedList out;
    out.closure_overflow = overflow;
    for (const auto& e : ranked.entries) {
      if (kept.count(e.term_id)) out.entries.push_back(e);
    }
    return out;
  };

  const TermId top = ranked.entries.front().term_id;
  std::set<TermId> top_closure = ancestors.at(top);
  top_closure.insert(top);
  if (top_closure.size() >= budget) return emit(top_closure, top_closure.size() > budget);

  std::set<TermId> kept;
  for (std::size_t i = 0; i < budget; ++i) {
    const TermId t = ranked.entries[i].term_id;
    kept.insert(t);
    const auto& anc = ancestors.at(t);
    kept.insert(anc.begin(), anc.end());
  }
  while (kept.size() > budget) {
    std::set<TermId> needed;
    for (TermId t : kept) {
      const auto& anc = ancestors.at(t);
      needed.insert(anc.begin(), anc.end());
    }
    TermId victim = top;
    std::size_t victim_pos = 0;
    bool found = false;
    for (TermId t : kept) {
      if (needed.count(t)) continue;
      if (!found || position[t] > victim_pos) {
        victim = t;
        victim_pos = position[t];
        found = true;
      }
    }
    if (!found) break;
    kept.erase(victim);
  }
  return emit(kept, false);
}

}  // namespace folio
