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
#include <span>
#include <vector>

#include "folio/corpus.hpp"
#include "folio/terms.hpp"

namespace folio {

// A page locator; start == end is a single page. `qualified` marks pages
// where the term is discussed rather than merely mentioned.
struct PageRef {
  int start = 0;
  int end = 0;
  bool qualified = false;

  bool operator==(const PageRef&) const = default;
};

struct SegmentRef {
  TermId term_id = 0;
  int segment_id = 0;
  int occurrence_count = 0;
  double score = 0.0;

  bool operator==(const SegmentRef&) const = default;
};

struct RefPolicy {
  int mention_threshold = 2;
  bool keep_mentions = true;
  bool variant_closure = true;
};

struct OccurrenceGroups {
  std::map<int, std::vector<TermOccurrence>> by_page;
  std::map<int, std::vector<TermOccurrence>> by_segment;

  std::size_t total() const {
    std::size_t n = 0;
    for (const auto& [page, occs] : by_page) n += occs.size();
    return n;
  }
};

// Groups a term's occurrences (plus those of `variants`, when given) by page
// and by segment.
inline OccurrenceGroups locate_occurrences(const CandidateTerm& term, const Document& doc,
                                           std::span<const CandidateTerm> variants = {}) {
  OccurrenceGroups groups;
  auto add = [&](const CandidateTerm& t) {
    for (const auto& occ : t.occurrences) {
      const bool in_range =
          !occ.token_span.empty() && occ.token_span.end <= doc.tokens.size();
      if (!in_range || doc.page_of(occ.token_span.begin).number != occ.page ||
          doc.segment_of(occ.token_span.begin).id != occ.segment_id ||
          doc.segment_of(occ.token_span.end - 1).id != occ.segment_id) {
        throw Error(ErrorCode::kForeignTerm,
                    "term '" + t.canonical + "' has an occurrence outside document '" +
                        doc.id + "'");
      }
      groups.by_page[occ.page].push_back(occ);
      groups.by_segment[occ.segment_id].push_back(occ);
    }
  };
  add(term);
  for (const auto& v : variants) add(v);
  return groups;
}

// A page qualifies when it holds at least `mention_threshold` occurrences or
// any occurrence in a heading or emphasized. Runs of consecutive qualified
// pages become ranges.
inline std::vector<PageRef> compute_page_refs(const OccurrenceGroups& groups,
                                              const RefPolicy& policy = {}) {
  std::vector<PageRef> refs;
  for (const auto& [page, occs] : groups.by_page) {
    if (occs.empty()) continue;
    bool qualified = static_cast<int>(occs.size()) >= policy.mention_threshold;
    for (const auto& o : occs) qualified = qualified || o.in_heading || o.emphasized;
    if (qualified) {
      if (!refs.empty() && refs.back().qualified && refs.back().end + 1 == page) {
        refs.back().end = page;
      } else {
        refs.push_back({page, page, true});
      }
    } else if (policy.keep_mentions) {
      refs.push_back({page, page, false});
    }
  }
  return refs;
}

// One ref per segment holding the term, by score descending then id.
inline std::vector<SegmentRef> select_reference_segments(
    const CandidateTerm& term, const Document& doc,
    const std::map<int, double>& segment_scores) {
  std::map<int, int> counts;
  for (const auto& occ : term.occurrences) {
    if (occ.segment_id < 0 || static_cast<std::size_t>(occ.segment_id) >= doc.segments.size()) {
      throw Error(ErrorCode::kForeignTerm, "segment " + std::to_string(occ.segment_id));
    }
    ++counts[occ.segment_id];
  }
  std::vector<SegmentRef> out;
  for (const auto& [seg, n] : counts) {
    const auto it = segment_scores.find(seg);
    out.push_back({term.id, seg, n, it == segment_scores.end() ? 0.0 : it->second});
  }
  std::stable_sort(out.begin(), out.end(), [](const SegmentRef& a, const SegmentRef& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.segment_id < b.segment_id;
  });
  return out;
}

}  // namespace folio
