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
#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "folio/corpus.hpp"
#include "folio/ranking.hpp"
#include "folio/references.hpp"
#include "folio/relation.hpp"
#include "folio/terms.hpp"
#include "folio/text.hpp"

namespace folio {

enum class DecisionState { kUndecided, kAccepted, kRejected };
enum class IndexStatus { kDraft, kValidated };
enum class SubjectKind { kTerm, kRelation, kPageRef, kSegmentRef };
enum class DecisionAction { kAccept, kReject, kRelabel, kRetarget };

inline std::string_view state_name(DecisionState s) {
  switch (s) {
    case DecisionState::kUndecided: return "undecided";
    case DecisionState::kAccepted: return "accepted";
    case DecisionState::kRejected: return "rejected";
  }
  return "undecided";
}

inline std::string_view status_name(IndexStatus s) {
  return s == IndexStatus::kDraft ? "draft" : "validated";
}

inline std::string_view subject_name(SubjectKind k) {
  switch (k) {
    case SubjectKind::kTerm: return "term";
    case SubjectKind::kRelation: return "relation";
    case SubjectKind::kPageRef: return "page_ref";
    case SubjectKind::kSegmentRef: return "segment_ref";
  }
  return "term";
}

inline std::string_view action_name(DecisionAction a) {
  switch (a) {
    case DecisionAction::kAccept: return "accept";
    case DecisionAction::kReject: return "reject";
    case DecisionAction::kRelabel: return "relabel";
    case DecisionAction::kRetarget: return "retarget";
  }
  return "accept";
}

template <typename Enum, std::size_t N>
Enum parse_enum(std::string_view name, const std::pair<std::string_view, Enum> (&table)[N],
                ErrorCode code, std::string_view what) {
  for (const auto& [n, v] : table) {
    if (n == name) return v;
  }
  throw Error(code, "unknown " + std::string(what) + " '" + std::string(name) + "'");
}

inline DecisionState parse_state(std::string_view n) {
  static constexpr std::pair<std::string_view, DecisionState> kTable[] = {
      {"undecided", DecisionState::kUndecided},
      {"accepted", DecisionState::kAccepted},
      {"rejected", DecisionState::kRejected}};
  return parse_enum(n, kTable, ErrorCode::kMalformedDocument, "state");
}

inline IndexStatus parse_status(std::string_view n) {
  static constexpr std::pair<std::string_view, IndexStatus> kTable[] = {
      {"draft", IndexStatus::kDraft}, {"validated", IndexStatus::kValidated}};
  return parse_enum(n, kTable, ErrorCode::kMalformedDocument, "status");
}

inline SubjectKind parse_subject(std::string_view n) {
  static constexpr std::pair<std::string_view, SubjectKind> kTable[] = {
      {"term", SubjectKind::kTerm},
      {"relation", SubjectKind::kRelation},
      {"page_ref", SubjectKind::kPageRef},
      {"segment_ref", SubjectKind::kSegmentRef}};
  return parse_enum(n, kTable, ErrorCode::kInvalidDecision, "subject kind");
}

inline DecisionAction parse_action(std::string_view n) {
  static constexpr std::pair<std::string_view, DecisionAction> kTable[] = {
      {"accept", DecisionAction::kAccept},
      {"reject", DecisionAction::kReject},
      {"relabel", DecisionAction::kRelabel},
      {"retarget", DecisionAction::kRetarget}};
  return parse_enum(n, kTable, ErrorCode::kInvalidDecision, "action");
}

// One indexer action. Page refs are addressed by (term id, start page) and
// segment refs by (term id, segment id) through `ordinal`.
struct Decision {
  SubjectKind subject_kind = SubjectKind::kTerm;
  std::int64_t subject_id = 0;
  std::int64_t ordinal = 0;
  DecisionAction action = DecisionAction::kAccept;
  std::optional<std::string> payload;
  std::string author;
  std::int64_t timestamp = 0;
  std::string document_id;  // empty: the index the decision is applied to

  bool operator==(const Decision&) const = default;
};

struct PageRefRecord {
  PageRef ref;
  DecisionState state = DecisionState::kUndecided;
  bool operator==(const PageRefRecord&) const = default;
};

struct SegmentRefRecord {
  SegmentRef ref;
  std::string preview;
  DecisionState state = DecisionState::kUndecided;
  bool operator==(const SegmentRefRecord&) const = default;
};

struct TermRecord {
  TermId id = 0;
  std::string canonical;
  std::string label;  // full display label
  bool relabeled = false;
  bool is_acronym = false;
  double rank_score = 0.0;
  DecisionState state = DecisionState::kUndecided;
  std::optional<TermId> parent;
  std::optional<TermId> see;
  std::vector<PageRefRecord> page_refs;
  std::vector<SegmentRefRecord> segment_refs;
  std::vector<TermOccurrence> occurrences;

  bool active() const { return state != DecisionState::kRejected; }
  bool operator==(const TermRecord&) const = default;
};

struct RelationRecord {
  int id = 0;
  Relation relation;
  DecisionState state = DecisionState::kUndecided;

  bool active() const { return state != DecisionState::kRejected; }
  bool operator==(const RelationRecord&) const = default;
};

struct IndexEntry {
  TermId term_id = 0;
  std::string display_label;  // as shown at this position in the tree
  std::vector<PageRef> page_refs;
  std::vector<IndexEntry> sub_entries;
  std::optional<TermId> see;
  std::vector<TermId> see_also;
  double rank_score = 0.0;

  bool operator==(const IndexEntry&) const = default;
};

struct DraftIndex {
  std::string document_id;
  int max_depth = 2;
  std::size_t budget = 0;
  std::vector<TermRecord> terms;  // ascending id
  std::vector<RelationRecord> relations;
  RankedList ranking;
  std::vector<IndexEntry> entries;  // derived from terms and relations
  IndexStatus status = IndexStatus::kDraft;
  std::vector<Decision> decisions;

  bool operator==(const DraftIndex&) const = default;

  const TermRecord* find_term(TermId id) const {
    const auto it = std::lower_bound(terms.begin(), terms.end(), id,
                                     [](const TermRecord& t, TermId v) { return t.id < v; });
    return it != terms.end() && it->id == id ? &*it : nullptr;
  }
  TermRecord* find_term(TermId id) {
    return const_cast<TermRecord*>(std::as_const(*this).find_term(id));
  }
};

struct TermReferences {
  std::vector<PageRef> page_refs;
  std::vector<SegmentRef> segment_refs;
};

struct IndexOptions {
  int max_depth = 2;
};

// Case-insensitive bytewise order with symbols before digits before letters.
inline bool alpha_less(std::string_view a, std::string_view b) {
  auto cls = [](unsigned char c) {
    if (c >= '0' && c <= '9') return 1;
    if ((c >= 'a' && c <= 'z') || c >= 0x80) return 2;
    return 0;
  };
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    auto ca = static_cast<unsigned char>(a[i]);
    auto cb = static_cast<unsigned char>(b[i]);
    if (ca >= 'A' && ca <= 'Z') ca = static_cast<unsigned char>(ca - 'A' + 'a');
    if (cb >= 'A' && cb <= 'Z') cb = static_cast<unsigned char>(cb - 'A' + 'a');
    if (ca != cb) return std::make_pair(cls(ca), ca) < std::make_pair(cls(cb), cb);
  }
  return a.size() < b.size();
}

namespace detail {

inline std::size_t word_count(std::string_view s) { return text::split_words(s).size(); }

// Label shown under a parent: the parent's leading words are dropped.
inline std::string positional_label(const TermRecord& child, const TermRecord* parent) {
  if (parent == nullptr || child.relabeled) return child.label;
  const auto cw = text::split_words(child.label);
  const auto pw = text::split_words(parent->label);
  if (pw.empty() || cw.size() <= pw.size()) return child.label;
  for (std::size_t i = 0; i < pw.size(); ++i) {
    if (text::to_lower(cw[i]) != text::to_lower(pw[i])) return child.label;
  }
  return text::capitalize(
      text::join(std::vector<std::string>(cw.begin() + static_cast<long>(pw.size()), cw.end()),
                 " "));
}

inline std::string preview_for(const Document& doc, const CandidateTerm& term, int segment_id) {
  const TermOccurrence* best = nullptr;
  for (const auto& occ : term.occurrences) {
    if (occ.segment_id != segment_id) continue;
    if (best == nullptr || ((occ.emphasized || occ.cue_context) &&
                            !(best->emphasized || best->cue_context))) {
      best = &occ;
    }
  }
  if (best == nullptr) return {};
  const Segment& seg = doc.segments.at(static_cast<std::size_t>(segment_id));
  TokenSpan span{seg.token_span.end, seg.token_span.begin};
  for (std::size_t i = seg.token_span.begin; i < seg.token_span.end; ++i) {
    const int sid = doc.tokens[i].sentence_id;
    if (sid >= best->sentence_id - 1 && sid <= best->sentence_id + 1) {
      span.begin = std::min(span.begin, i);
      span.end = std::max(span.end, i + 1);
    }
  }
  return span.begin < span.end ? doc.text(span) : std::string{};
}

inline std::map<TermId, int> tree_depths(const DraftIndex& index) {
  std::map<TermId, int> depth;
  std::function<int(TermId, int)> depth_of = [&](TermId id, int guard) -> int {
    if (const auto it = depth.find(id); it != depth.end()) return it->second;
    const TermRecord* t = index.find_term(id);
    if (t == nullptr || guard > static_cast<int>(index.terms.size())) return 1;
    int d = 1;
    if (t->parent) {
      const TermRecord* p = index.find_term(*t->parent);
      if (p != nullptr && p->active()) d = depth_of(*t->parent, guard + 1) + 1;
    }
    depth[id] = d;
    return d;
  };
  for (const auto& t : index.terms) {
    if (t.active()) depth_of(t.id, 0);
  }
  return depth;
}

inline bool is_tree_ancestor(const DraftIndex& index, TermId ancestor, TermId id) {
  const TermRecord* t = index.find_term(id);
  std::size_t guard = 0;
  while (t != nullptr && t->parent && guard++ <= index.terms.size()) {
    if (*t->parent == ancestor) return true;
    t = index.find_term(*t->parent);
  }
  return false;
}

}  // namespace detail

// Rebuilds the printable entry tree from the term and relation records.
inline std::vector<IndexEntry> assemble_entries(const DraftIndex& index) {
  std::map<TermId, std::vector<TermId>> children;
  std::vector<TermId> top;
  std::map<TermId, std::set<TermId>> see_also;

  auto usable = [&](TermId id) {
    const TermRecord* t = index.find_term(id);
    return t != nullptr && t->active() && !t->see;
  };

  for (const auto& t : index.terms) {
    if (!t.active()) continue;
    const TermRecord* p = t.parent ? index.find_term(*t.parent) : nullptr;
    if (p != nullptr && p->active() && !t.see) {
      children[p->id].push_back(t.id);
    } else {
      top.push_back(t.id);
    }
  }
  for (const auto& rec : index.relations) {
    if (!rec.active()) continue;
    const Relation& r = rec.relation;
    if (!usable(r.source_id) || !usable(r.target_id)) continue;
    if (r.kind == RelationKind::kHypernymy) {
      const TermRecord* child = index.find_term(r.target_id);
      if (child->parent == r.source_id ||
          detail::is_tree_ancestor(index, r.source_id, r.target_id) ||
          detail::is_tree_ancestor(index, r.target_id, r.source_id)) {
        continue;
      }
      see_also[r.target_id].insert(r.source_id);
    } else {
      see_also[r.source_id].insert(r.target_id);
      see_also[r.target_id].insert(r.source_id);
    }
  }

  auto by_alpha = [&](TermId a, TermId b) {
    const auto& ca = index.find_term(a)->canonical;
    const auto& cb = index.find_term(b)->canonical;
    if (ca != cb) return alpha_less(ca, cb) || (!alpha_less(cb, ca) && ca < cb);
    return a < b;
  };

  std::function<IndexEntry(TermId, const TermRecord*)> build = [&](TermId id,
                                                                   const TermRecord* parent) {
    const TermRecord& t = *index.find_term(id);
    IndexEntry e;
    e.term_id = id;
    e.display_label = detail::positional_label(t, parent);
    e.rank_score = t.rank_score;
    if (t.see) {
      e.see = t.see;
      return e;
    }
    for (const auto& pr : t.page_refs) {
      if (pr.state != DecisionState::kRejected) e.page_refs.push_back(pr.ref);
    }
    if (const auto it = see_also.find(id); it != see_also.end()) {
      e.see_also.assign(it->second.begin(), it->second.end());
      std::sort(e.see_also.begin(), e.see_also.end(), by_alpha);
    }
    if (const auto it = children.find(id); it != children.end()) {
      auto kids = it->second;
      std::sort(kids.begin(), kids.end(), by_alpha);
      for (TermId k : kids) e.sub_entries.push_back(build(k, &t));
    }
    return e;
  };

  std::sort(top.begin(), top.end(), by_alpha);
  std::vector<IndexEntry> out;
  for (TermId id : top) out.push_back(build(id, nullptr));
  return out;
}

// Composes the draft: acronyms redirect to their expansions, every other
// term nests under its strongest surviving hypernym (one parent, bounded
// depth) and leftover edges become see-also links.
inline DraftIndex build_draft_index(const Document& doc, std::span<const CandidateTerm> terms,
                                    std::span<const Relation> relations,
                                    const std::map<TermId, TermReferences>& refs,
                                    const RankedList& ranked, std::size_t budget,
                                    const IndexOptions& options = {}) {
  std::map<TermId, const CandidateTerm*> by_id;
  for (const auto& t : terms) by_id[t.id] = &t;
  for (const auto& r : relations) {
    if (!by_id.count(r.source_id) || !by_id.count(r.target_id)) {
      throw Error(ErrorCode::kInconsistentInputs,
                  "relation references unknown term " +
                      std::to_string(by_id.count(r.source_id) ? r.target_id : r.source_id));
    }
  }

  DraftIndex index;
  index.document_id = doc.id;
  index.max_depth = options.max_depth;
  index.budget = budget;
  index.ranking = ranked;

  std::set<TermId> kept;
  for (const auto& e : ranked.entries) {
    const auto it = by_id.find(e.term_id);
    if (it == by_id.end()) {
      throw Error(ErrorCode::kInconsistentInputs,
                  "ranked term " + std::to_string(e.term_id) + " is unknown");
    }
    const auto ref = refs.find(e.term_id);
    if (ref == refs.end()) {
      throw Error(ErrorCode::kInconsistentInputs,
                  "no references for term " + std::to_string(e.term_id));
    }
    kept.insert(e.term_id);
    const CandidateTerm& t = *it->second;
    TermRecord rec;
    rec.id = t.id;
    rec.canonical = t.canonical;
    rec.label = text::capitalize(t.preferred_surface.empty() ? t.canonical : t.preferred_surface);
    rec.is_acronym = t.is_acronym;
    rec.rank_score = e.score.total;
    rec.occurrences = t.occurrences;
    for (const auto& pr : ref->second.page_refs) rec.page_refs.push_back({pr, DecisionState::kUndecided});
    for (const auto& sr : ref->second.segment_refs) {
      rec.segment_refs.push_back(
          {sr, detail::preview_for(doc, t, sr.segment_id), DecisionState::kUndecided});
    }
    index.terms.push_back(std::move(rec));
  }
  std::sort(index.terms.begin(), index.terms.end(),
            [](const TermRecord& a, const TermRecord& b) { return a.id < b.id; });

  for (const auto& r : relations) {
    if (kept.count(r.source_id) && kept.count(r.target_id)) {
      index.relations.push_back(
          {static_cast<int>(index.relations.size()), r, DecisionState::kUndecided});
    }
  }

  // Redirects.
  std::map<TermId, const Relation*> redirect;
  for (const auto& rec : index.relations) {
    const Relation& r = rec.relation;
    if (r.kind != RelationKind::kVariant) continue;
    auto& slot = redirect[r.source_id];
    if (slot == nullptr || r.confidence > slot->confidence ||
        (r.confidence == slot->confidence && r.target_id < slot->target_id)) {
      slot = &r;
    }
  }
  for (const auto& [source, r] : redirect) {
    if (redirect.count(r->target_id)) continue;  // no chains
    index.find_term(source)->see = r->target_id;
  }

  // Parents, in topological order of the hypernymy edges.
  std::map<TermId, std::vector<const Relation*>> incoming;
  std::map<TermId, int> indegree;
  for (const auto& t : index.terms) indegree[t.id] = 0;
  for (const auto& rec : index.relations) {
    if (rec.relation.kind != RelationKind::kHypernymy) continue;
    incoming[rec.relation.target_id].push_back(&rec.relation);
    ++indegree[rec.relation.target_id];
  }
  std::map<TermId, std::vector<TermId>> outgoing;
  for (const auto& [target, rels] : incoming) {
    for (const auto* r : rels) outgoing[r->source_id].push_back(target);
  }
  std::priority_queue<TermId, std::vector<TermId>, std::greater<>> ready;
  for (const auto& [id, d] : indegree) {
    if (d == 0) ready.push(id);
  }
  std::map<TermId, int> depth;
  while (!ready.empty()) {
    const TermId id = ready.top();
    ready.pop();
    TermRecord& t = *index.find_term(id);
    int d = 1;
    if (!t.see) {
      const Relation* best = nullptr;
      for (const Relation* r : incoming[id]) {
        const TermRecord& p = *index.find_term(r->source_id);
        if (p.see || depth[p.id] >= index.max_depth) continue;
        if (best == nullptr) {
          best = r;
          continue;
        }
        const TermRecord& bp = *index.find_term(best->source_id);
        const auto key = [](const Relation* rel, const TermRecord& rec) {
          return std::make_tuple(rel->confidence, detail::word_count(rec.canonical),
                                 rec.rank_score);
        };
        const auto kr = key(r, p);
        const auto kb = key(best, bp);
        if (kr > kb || (kr == kb && p.canonical < bp.canonical)) best = r;
      }
      if (best != nullptr) {
        t.parent = best->source_id;
        d = depth[best->source_id] + 1;
      }
    }
    depth[id] = d;
    for (TermId next : outgoing[id]) {
      if (--indegree[next] == 0) ready.push(next);
    }
  }
  for (const auto& [id, d] : indegree) {
    if (d != 0) {
      throw Error(ErrorCode::kInconsistentInputs, "hypernymy relations contain a cycle");
    }
  }

  index.entries = assemble_entries(index);
  return index;
}

// Throws InconsistentInputs when a structural invariant of the index fails.
inline void check_index_invariants(const DraftIndex& index) {
  const auto fail = [](const std::string& why) {
    throw Error(ErrorCode::kInconsistentInputs, why);
  };
  std::map<TermId, int> seen;
  std::function<void(const IndexEntry&, const IndexEntry*, int)> walk =
      [&](const IndexEntry& e, const IndexEntry* parent, int depth) {
        ++seen[e.term_id];
        if (depth > index.max_depth) fail("nesting deeper than max_depth");
        if (e.see && (!e.page_refs.empty() || !e.sub_entries.empty())) {
          fail("redirect entry carries pages or sub-entries");
        }
        for (std::size_t i = 0; i + 1 < e.page_refs.size(); ++i) {
          if (e.page_refs[i].end >= e.page_refs[i + 1].start) fail("page refs overlap");
        }
        for (const auto& r : e.page_refs) {
          if (r.end < r.start) fail("inverted page range");
        }
        for (TermId t : e.see_also) {
          const TermRecord* rec = index.find_term(t);
          if (rec == nullptr || !rec->active()) fail("see-also target missing");
        }
        if (parent != nullptr && index.status == IndexStatus::kDraft) {
          const bool mirrored = std::any_of(
              index.relations.begin(), index.relations.end(), [&](const RelationRecord& r) {
                return r.active() && r.relation.kind == RelationKind::kHypernymy &&
                       r.relation.source_id == parent->term_id &&
                       r.relation.target_id == e.term_id;
              });
          if (!mirrored) fail("sub-entry without a hypernymy edge");
        }
        for (std::size_t i = 0; i + 1 < e.sub_entries.size(); ++i) {
          const auto& a = index.find_term(e.sub_entries[i].term_id)->canonical;
          const auto& b = index.find_term(e.sub_entries[i + 1].term_id)->canonical;
          if (alpha_less(b, a)) fail("sub-entries out of order");
        }
        for (const auto& s : e.sub_entries) walk(s, &e, depth + 1);
      };
  for (const auto& e : index.entries) walk(e, nullptr, 1);
  for (const auto& t : index.terms) {
    const int n = seen.count(t.id) ? seen[t.id] : 0;
    if (t.active() && n != 1) fail("term " + std::to_string(t.id) + " not placed exactly once");
    if (!t.active() && n != 0) fail("rejected term " + std::to_string(t.id) + " still placed");
  }
}

namespace detail {

inline std::optional<TermId> parse_retarget(const std::string& payload) {
  const auto p = text::trim(payload);
  if (p == "none" || p == "top") return std::nullopt;
  try {
    std::size_t used = 0;
    const int v = std::stoi(std::string(p), &used);
    if (used != p.size()) throw std::invalid_argument("junk");
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::kInvalidDecision,
                "retarget payload must be a term id or 'none', got '" + payload + "'");
  }
}

inline void check_decision(const DraftIndex& index, const Decision& d) {
  if (!d.document_id.empty() && d.document_id != index.document_id) {
    throw Error(ErrorCode::kStaleDraft, "decision targets document '" + d.document_id +
                                            "' but the index is '" + index.document_id + "'");
  }
  const std::string subject =
      std::string(subject_name(d.subject_kind)) + " " + std::to_string(d.subject_id);
  const TermRecord* term = nullptr;
  if (d.subject_kind != SubjectKind::kRelation) {
    term = index.find_term(static_cast<TermId>(d.subject_id));
    if (term == nullptr) throw Error(ErrorCode::kUnknownSubject, subject);
  }
  switch (d.subject_kind) {
    case SubjectKind::kTerm:
      break;
    case SubjectKind::kRelation:
      if (d.subject_id < 0 || d.subject_id >= static_cast<std::int64_t>(index.relations.size())) {
        throw Error(ErrorCode::kUnknownSubject, subject);
      }
      break;
    case SubjectKind::kPageRef:
      if (std::none_of(term->page_refs.begin(), term->page_refs.end(),
                       [&](const PageRefRecord& p) { return p.ref.start == d.ordinal; })) {
        throw Error(ErrorCode::kUnknownSubject, subject + " page " + std::to_string(d.ordinal));
      }
      break;
    case SubjectKind::kSegmentRef:
      if (std::none_of(term->segment_refs.begin(), term->segment_refs.end(),
                       [&](const SegmentRefRecord& s) { return s.ref.segment_id == d.ordinal; })) {
        throw Error(ErrorCode::kUnknownSubject,
                    subject + " segment " + std::to_string(d.ordinal));
      }
      break;
  }
  const bool needs_term = d.action == DecisionAction::kRelabel ||
                          d.action == DecisionAction::kRetarget;
  if (needs_term && d.subject_kind != SubjectKind::kTerm) {
    throw Error(ErrorCode::kInvalidDecision,
                std::string(action_name(d.action)) + " applies to terms only");
  }
  if (needs_term && (!d.payload || text::trim(*d.payload).empty())) {
    throw Error(ErrorCode::kInvalidDecision,
                std::string(action_name(d.action)) + " needs a non-empty payload");
  }
  if (d.action == DecisionAction::kRetarget) parse_retarget(*d.payload);
}

inline int subtree_height(const DraftIndex& index, TermId root) {
  int best = 1;
  for (const auto& t : index.terms) {
    if (t.active() && t.parent == root) best = std::max(best, 1 + subtree_height(index, t.id));
  }
  return best;
}

inline void apply_one(DraftIndex& index, const Decision& d) {
  auto set_state = [](DecisionState& state, DecisionAction action) {
    const DecisionState next =
        action == DecisionAction::kReject ? DecisionState::kRejected : DecisionState::kAccepted;
    if (state == DecisionState::kRejected && next != DecisionState::kRejected) {
      throw Error(ErrorCode::kInvalidDecision,
                  "a rejected subject cannot be revived on a validated index; "
                  "re-apply the full decision list to the draft");
    }
    state = next;
  };

  switch (d.subject_kind) {
    case SubjectKind::kTerm: {
      TermRecord& t = *index.find_term(static_cast<TermId>(d.subject_id));
      if (d.action == DecisionAction::kRelabel) {
        t.label = std::string(text::trim(*d.payload));
        t.relabeled = true;
        return;
      }
      if (d.action == DecisionAction::kRetarget) {
        if (!t.active()) throw Error(ErrorCode::kInvalidDecision, "term is rejected");
        const auto target = parse_retarget(*d.payload);
        if (!target) {
          if (t.see) {
            t.see.reset();
          } else {
            t.parent.reset();
          }
          return;
        }
        const TermRecord* dest = index.find_term(*target);
        if (dest == nullptr || !dest->active() || dest->see || dest->id == t.id) {
          throw Error(ErrorCode::kInvalidDecision,
                      "retarget destination " + std::to_string(*target) + " is not usable");
        }
        if (t.see) {
          t.see = dest->id;
          return;
        }
        if (is_tree_ancestor(index, t.id, dest->id)) {
          throw Error(ErrorCode::kInvalidDecision, "retarget would create a cycle");
        }
        const auto depths = tree_depths(index);
        if (depths.at(dest->id) + subtree_height(index, t.id) > index.max_depth) {
          throw Error(ErrorCode::kInvalidDecision, "retarget exceeds the nesting depth");
        }
        t.parent = dest->id;
        return;
      }
      if (d.action == DecisionAction::kReject && t.state == DecisionState::kRejected) return;
      set_state(t.state, d.action);
      if (t.state != DecisionState::kRejected) return;
      const std::optional<TermId> grandparent = t.parent;
      for (auto& other : index.terms) {
        if (other.parent == t.id) other.parent = grandparent;
        if (other.see == t.id) other.see.reset();
      }
      t.parent.reset();
      return;
    }
    case SubjectKind::kRelation: {
      RelationRecord& rec = index.relations.at(static_cast<std::size_t>(d.subject_id));
      if (d.action == DecisionAction::kReject && rec.state == DecisionState::kRejected) return;
      set_state(rec.state, d.action);
      if (rec.state != DecisionState::kRejected) return;
      const Relation& r = rec.relation;
      TermRecord* src = index.find_term(r.source_id);
      TermRecord* dst = index.find_term(r.target_id);
      if (src == nullptr || dst == nullptr) return;
      if (r.kind == RelationKind::kHypernymy && dst->parent == src->id) dst->parent = src->parent;
      if (r.kind == RelationKind::kVariant && src->see == dst->id) src->see.reset();
      return;
    }
    case SubjectKind::kPageRef: {
      TermRecord& t = *index.find_term(static_cast<TermId>(d.subject_id));
      for (auto& p : t.page_refs) {
        if (p.ref.start == d.ordinal) {
          if (d.action == DecisionAction::kReject && p.state == DecisionState::kRejected) return;
          set_state(p.state, d.action);
        }
      }
      return;
    }
    case SubjectKind::kSegmentRef: {
      TermRecord& t = *index.find_term(static_cast<TermId>(d.subject_id));
      for (auto& s : t.segment_refs) {
        if (s.ref.segment_id == d.ordinal) {
          if (d.action == DecisionAction::kReject && s.state == DecisionState::kRejected) return;
          set_state(s.state, d.action);
        }
      }
      return;
    }
  }
}

}  // namespace detail

// Applies indexer decisions. For each subject the last accept/reject, the
// last relabel and the last retarget win; they are applied in list order.
// Rejected terms hand their sub-entries to their own parent.
inline DraftIndex apply_validation_decisions(const DraftIndex& draft,
                                             std::span<const Decision> decisions) {
  for (const auto& d : decisions) detail::check_decision(draft, d);

  using Key = std::tuple<SubjectKind, std::int64_t, std::int64_t, int>;
  auto action_class = [](DecisionAction a) {
    return a == DecisionAction::kAccept || a == DecisionAction::kReject ? 0
           : a == DecisionAction::kRelabel                              ? 1
                                                                        : 2;
  };
  std::map<Key, std::size_t> last;
  for (std::size_t i = 0; i < decisions.size(); ++i) {
    const auto& d = decisions[i];
    last[{d.subject_kind, d.subject_id, d.ordinal, action_class(d.action)}] = i;
  }
  std::vector<std::size_t> order;
  for (const auto& [key, i] : last) order.push_back(i);
  std::sort(order.begin(), order.end());

  DraftIndex out = draft;
  for (std::size_t i : order) detail::apply_one(out, decisions[i]);
  for (const auto& d : decisions) {
    if (std::find(out.decisions.begin(), out.decisions.end(), d) == out.decisions.end()) {
      out.decisions.push_back(d);
    }
  }
  out.status = IndexStatus::kValidated;
  out.entries = assemble_entries(out);
  check_index_invariants(out);
  return out;
}

// ---------------------------------------------------------------------------
// Rendering

inline std::string format_page_ref(const PageRef& r, std::string_view range_sep = "-") {
  if (r.start == r.end) return std::to_string(r.start);
  return std::to_string(r.start) + std::string(range_sep) + std::to_string(r.end);
}

inline std::string format_page_refs(std::span<const PageRef> refs,
                                     std::string_view range_sep = "-") {
  std::string out;
  for (std::size_t i = 0; i < refs.size(); ++i) {
    if (i) out += ", ";
    out += format_page_ref(refs[i], range_sep);
  }
  return out;
}

namespace detail {

inline std::string target_label(const DraftIndex& index, TermId id) {
  const TermRecord* t = index.find_term(id);
  return t == nullptr ? std::to_string(id) : t->label;
}

inline std::string see_also_text(const DraftIndex& index, const IndexEntry& e) {
  std::vector<std::string> labels;
  for (TermId t : e.see_also) labels.push_back(target_label(index, t));
  return text::join(labels, "; ");
}

}  // namespace detail

// One entry per line: "Label<TAB>refs", sub-entries indented by a tab,
// "Label see Target" for redirects, "(see also A; B)" after the label.
inline std::string render_text(const DraftIndex& index) {
  std::string out;
  std::function<void(const IndexEntry&, int)> emit = [&](const IndexEntry& e, int depth) {
    out.append(static_cast<std::size_t>(depth), '\t');
    out += e.display_label;
    if (e.see) {
      out += " see " + detail::target_label(index, *e.see);
    } else {
      if (!e.see_also.empty()) out += " (see also " + detail::see_also_text(index, e) + ")";
      if (!e.page_refs.empty()) out += "\t" + format_page_refs(e.page_refs);
    }
    out += '\n';
    for (const auto& s : e.sub_entries) emit(s, depth + 1);
  };
  for (const auto& e : index.entries) emit(e, 0);
  return out;
}

inline std::string tex_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\textbackslash{}"; break;
      case '{': case '}': case '%': case '&': case '#': case '_': case '$':
        out += '\\';
        out += c;
        break;
      case '^': out += "\\^{}"; break;
      case '~': out += "\\~{}"; break;
      default: out += c;
    }
  }
  return out;
}

// Print-oriented rendering: one macro line per entry.
//   \indexentry{level}{label}{refs}
//   \indexsee{level}{label}{target}
//   \indexseealso{level}{label}{targets}
inline std::string render_print(const DraftIndex& index) {
  std::string out;
  std::function<void(const IndexEntry&, int)> emit = [&](const IndexEntry& e, int level) {
    const std::string lvl = std::to_string(level);
    const std::string label = tex_escape(e.display_label);
    if (e.see) {
      out += "\\indexsee{" + lvl + "}{" + label + "}{" +
             tex_escape(detail::target_label(index, *e.see)) + "}\n";
      return;
    }
    out += "\\indexentry{" + lvl + "}{" + label + "}{" + format_page_refs(e.page_refs, "--") +
           "}\n";
    if (!e.see_also.empty()) {
      out += "\\indexseealso{" + lvl + "}{" + label + "}{" +
             tex_escape(detail::see_also_text(index, e)) + "}\n";
    }
    for (const auto& s : e.sub_entries) emit(s, level + 1);
  };
  for (const auto& e : index.entries) emit(e, 1);
  return out;
}

}  // namespace folio
