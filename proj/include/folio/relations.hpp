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
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "folio/corpus.hpp"
#include "folio/relation.hpp"
#include "folio/terms.hpp"
#include "folio/text.hpp"

namespace folio {

// ---------------------------------------------------------------------------
// Lexico-syntactic patterns

enum class ItemKind { kLiteral, kTerm, kTermList };

struct PatternItem {
  ItemKind kind = ItemKind::kLiteral;
  std::string lemma;  // literals only

  bool is_slot() const { return kind != ItemKind::kLiteral; }
  bool operator==(const PatternItem&) const = default;
};

struct PatternRule {
  std::string name;
  std::vector<PatternItem> sequence;
  RelationKind relation_kind = RelationKind::kHypernymy;
  int generic_slot = 1;  // 1-based index among the slot items
  double base_confidence = 0.75;

  std::size_t slot_count() const {
    return static_cast<std::size_t>(std::count_if(
        sequence.begin(), sequence.end(),
        [](const PatternItem& i) { return i.is_slot(); }));
  }
  bool operator==(const PatternRule&) const = default;
};

inline void validate_rule(const PatternRule& rule) {
  const auto fail = [&](const std::string& why) {
    throw Error(ErrorCode::kBadRule, "rule '" + rule.name + "': " + why);
  };
  if (rule.name.empty()) fail("missing name");
  const std::size_t slots = rule.slot_count();
  if (slots < 2) fail("needs a generic slot and at least one specific slot");
  if (rule.generic_slot < 1 || static_cast<std::size_t>(rule.generic_slot) > slots) {
    fail("generic slot out of range");
  }
  for (const auto& item : rule.sequence) {
    if (item.kind == ItemKind::kLiteral && item.lemma.empty()) fail("empty literal");
  }
  if (!(rule.base_confidence > 0.0 && rule.base_confidence <= 1.0)) {
    fail("confidence must lie in (0,1]");
  }
}

// "name: item item ... => kind(generic=N[, confidence=C])"
inline PatternRule parse_rule(std::string_view line) {
  PatternRule rule;
  const auto colon = line.find(':');
  const auto arrow = line.find("=>");
  if (colon == std::string_view::npos || arrow == std::string_view::npos ||
      arrow < colon) {
    throw Error(ErrorCode::kBadRule,
                "expected 'name: items => kind(generic=N)': " + std::string(line));
  }
  rule.name = std::string(text::trim(line.substr(0, colon)));
  for (const auto& word : text::split_words(line.substr(colon + 1, arrow - colon - 1))) {
    if (word == "<TERM>") {
      rule.sequence.push_back({ItemKind::kTerm, ""});
    } else if (word == "<TERMLIST>") {
      rule.sequence.push_back({ItemKind::kTermList, ""});
    } else if (word.front() == '<') {
      throw Error(ErrorCode::kBadRule, "unknown slot " + word);
    } else {
      rule.sequence.push_back({ItemKind::kLiteral, text::to_lower(word)});
    }
  }
  const auto tail = text::trim(line.substr(arrow + 2));
  const auto open = tail.find('(');
  const auto close = tail.rfind(')');
  if (open == std::string_view::npos || close == std::string_view::npos || close < open) {
    throw Error(ErrorCode::kBadRule, "malformed tail '" + std::string(tail) + "'");
  }
  try {
    rule.relation_kind = parse_kind(text::trim(tail.substr(0, open)));
  } catch (const Error&) {
    throw Error(ErrorCode::kBadRule, "unknown relation kind in '" + std::string(tail) + "'");
  }
  bool has_generic = false;
  for (const auto& arg : text::split(tail.substr(open + 1, close - open - 1), ',')) {
    const auto eq = arg.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::kBadRule, "bad argument '" + arg + "'");
    const auto key = text::trim(std::string_view(arg).substr(0, eq));
    const std::string value(text::trim(std::string_view(arg).substr(eq + 1)));
    try {
      if (key == "generic") {
        rule.generic_slot = std::stoi(value);
        has_generic = true;
      } else if (key == "confidence") {
        rule.base_confidence = std::stod(value);
      } else {
        throw Error(ErrorCode::kBadRule, "unknown argument '" + std::string(key) + "'");
      }
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::kBadRule, "bad value '" + value + "'");
    }
  }
  if (!has_generic) throw Error(ErrorCode::kBadRule, "rule '" + rule.name + "' names no generic slot");
  validate_rule(rule);
  return rule;
}

inline std::vector<PatternRule> parse_rules(std::string_view content) {
  std::vector<PatternRule> rules;
  std::size_t line_no = 0;
  for (const auto& raw : text::split(content, '\n')) {
    ++line_no;
    const auto line = text::trim(raw);
    if (line.empty() || line[0] == '#') continue;
    try {
      rules.push_back(parse_rule(line));
    } catch (const Error& e) {
      throw Error(ErrorCode::kBadRule,
                  "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return rules;
}

inline constexpr std::string_view kDefaultRules = R"(# Hearst-style hyponymy patterns.
such_as: <TERM> such as <TERMLIST> => hypernymy(generic=1)
including: <TERM> including <TERMLIST> => hypernymy(generic=1)
especially: <TERM> especially <TERMLIST> => hypernymy(generic=1)
kind_of: <TERM> be a kind of <TERM> => hypernymy(generic=2)
and_other: <TERMLIST> and other <TERM> => hypernymy(generic=2)
or_other: <TERMLIST> or other <TERM> => hypernymy(generic=2)
)";

inline std::vector<PatternRule> default_rules() { return parse_rules(kDefaultRules); }

// Occurrences of every term, indexed by sentence and start token.
struct OccurrenceIndex {
  // sentence -> start token -> (end token, term) sorted by end descending
  std::map<int, std::map<std::size_t, std::vector<std::pair<std::size_t, TermId>>>> starts;

  explicit OccurrenceIndex(std::span<const CandidateTerm> terms) {
    for (const auto& term : terms) {
      for (const auto& occ : term.occurrences) {
        starts[occ.sentence_id][occ.token_span.begin].emplace_back(
            occ.token_span.end, term.id);
      }
    }
    for (auto& [sid, by_start] : starts) {
      for (auto& [b, ends] : by_start) {
        std::sort(ends.begin(), ends.end(), [](const auto& x, const auto& y) {
          return std::tie(y.first, x.second) < std::tie(x.first, y.second);
        });
        ends.erase(std::unique(ends.begin(), ends.end()), ends.end());
      }
    }
  }
};

struct PatternMatch {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::vector<std::vector<TermId>> slots;  // terms per slot, in rule order
};

namespace detail {

inline bool literal_matches(const Token& t, const std::string& lemma) {
  return t.lemma == lemma || text::to_lower(t.surface) == lemma;
}

inline bool is_list_separator(const Token& t) {
  return t.surface == "," || t.lemma == "and" || t.lemma == "or";
}

// Backtracking matcher: slots try their longest extent first, so the first
// complete alignment found is the one with lexicographically longest slots.
class RuleMatcher {
 public:
  using Starts = std::map<std::size_t, std::vector<std::pair<std::size_t, TermId>>>;

  RuleMatcher(const Document& doc, const Starts& starts, std::size_t sentence_end,
              const PatternRule& rule)
      : doc_(doc), starts_(starts), end_(sentence_end), rule_(rule) {}

  std::optional<PatternMatch> match_at(std::size_t begin) {
    slots_.clear();
    if (!step(0, begin)) return std::nullopt;
    PatternMatch m;
    m.begin = begin;
    m.end = match_end_;
    m.slots = slots_;
    return m;
  }

 private:
  const std::vector<std::pair<std::size_t, TermId>>* occurrences_at(std::size_t p) const {
    const auto it = starts_.find(p);
    return it == starts_.end() ? nullptr : &it->second;
  }

  // All ways to read a term list starting at p: end -> terms, first found
  // (longest items first) kept per end.
  void collect_lists(std::size_t p, std::vector<TermId>& items,
                     std::map<std::size_t, std::vector<TermId>>& out) const {
    const auto* occs = occurrences_at(p);
    if (occs == nullptr) return;
    for (const auto& [e, id] : *occs) {
      if (e > end_) continue;
      items.push_back(id);
      out.try_emplace(e, items);
      for (std::size_t sep_end : separators_after(e)) collect_lists(sep_end, items, out);
      items.pop_back();
    }
  }

  std::vector<std::size_t> separators_after(std::size_t p) const {
    std::vector<std::size_t> out;
    if (p >= end_) return out;
    const Token& t = doc_.tokens[p];
    if (t.surface == ",") {
      if (p + 1 < end_ && (doc_.tokens[p + 1].lemma == "and" ||
                           doc_.tokens[p + 1].lemma == "or")) {
        out.push_back(p + 2);
      }
      out.push_back(p + 1);
    } else if (t.lemma == "and" || t.lemma == "or") {
      out.push_back(p + 1);
    }
    return out;
  }

  bool step(std::size_t item, std::size_t p) {
    if (item == rule_.sequence.size()) {
      match_end_ = p;
      return true;
    }
    const PatternItem& it = rule_.sequence[item];
    switch (it.kind) {
      case ItemKind::kLiteral:
        return p < end_ && literal_matches(doc_.tokens[p], it.lemma) && step(item + 1, p + 1);
      case ItemKind::kTerm: {
        const auto* occs = occurrences_at(p);
        if (occs == nullptr) return false;
        for (const auto& [e, id] : *occs) {
          if (e > end_) continue;
          slots_.push_back({id});
          if (step(item + 1, e)) return true;
          slots_.pop_back();
        }
        return false;
      }
      case ItemKind::kTermList: {
        std::map<std::size_t, std::vector<TermId>> lists;
        std::vector<TermId> items;
        collect_lists(p, items, lists);
        for (auto rit = lists.rbegin(); rit != lists.rend(); ++rit) {
          slots_.push_back(rit->second);
          if (step(item + 1, rit->first)) return true;
          slots_.pop_back();
        }
        return false;
      }
    }
    return false;
  }

  const Document& doc_;
  const Starts& starts_;
  std::size_t end_;
  const PatternRule& rule_;
  std::vector<std::vector<TermId>> slots_;
  std::size_t match_end_ = 0;
};

// Sentence token ranges keyed by sentence id.
inline std::map<int, TokenSpan> sentence_spans(const Document& doc) {
  std::map<int, TokenSpan> out;
  for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
    const int sid = doc.tokens[i].sentence_id;
    auto [it, fresh] = out.try_emplace(sid, TokenSpan{i, i + 1});
    if (!fresh) it->second.end = i + 1;
  }
  return out;
}

}  // namespace detail

// Relations implied by one match: each generic-slot term paired with every
// term of the other slots.
inline std::vector<Relation> relations_from_match(const PatternRule& rule,
                                                  const PatternMatch& m) {
  std::vector<Relation> out;
  std::set<std::pair<TermId, TermId>> seen;
  const std::size_t g = static_cast<std::size_t>(rule.generic_slot - 1);
  for (std::size_t s = 0; s < m.slots.size(); ++s) {
    if (s == g) continue;
    for (TermId generic : m.slots[g]) {
      for (TermId specific : m.slots[s]) {
        if (generic == specific || !seen.emplace(generic, specific).second) continue;
        out.push_back(make_relation(generic, specific, rule.relation_kind,
                                    Evidence::kPattern, rule.base_confidence,
                                    "pattern:" + rule.name));
      }
    }
  }
  return out;
}

// Leftmost, non-overlapping matches of one rule in one sentence.
inline std::vector<PatternMatch> match_rule_in_sentence(const Document& doc,
                                                        const OccurrenceIndex& index,
                                                        int sentence_id, TokenSpan sentence,
                                                        const PatternRule& rule) {
  std::vector<PatternMatch> out;
  const auto it = index.starts.find(sentence_id);
  if (it == index.starts.end()) return out;
  detail::RuleMatcher matcher(doc, it->second, sentence.end, rule);
  std::size_t p = sentence.begin;
  while (p < sentence.end) {
    if (auto m = matcher.match_at(p); m && m->end > p) {
      p = m->end;
      out.push_back(std::move(*m));
    } else {
      ++p;
    }
  }
  return out;
}

inline std::vector<Relation> extract_pattern_relations(const Document& doc,
                                                       std::span<const CandidateTerm> terms,
                                                       std::span<const PatternRule> rules) {
  for (const auto& rule : rules) validate_rule(rule);
  const OccurrenceIndex index(terms);
  std::vector<Relation> out;
  for (const auto& [sid, span] : detail::sentence_spans(doc)) {
    for (const auto& rule : rules) {
      for (const auto& m : match_rule_in_sentence(doc, index, sid, span, rule)) {
        auto rels = relations_from_match(rule, m);
        out.insert(out.end(), rels.begin(), rels.end());
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Head expansion

// A strict word prefix of a multiword term, or its head word, is taken as a
// more generic term: "knowledge" and "representation" both dominate
// "knowledge representation".
inline std::vector<Relation> extract_head_expansion_relations(
    std::span<const CandidateTerm> terms, double confidence = 0.9) {
  std::map<std::string, TermId> by_canonical;
  for (const auto& t : terms) by_canonical.emplace(t.canonical, t.id);
  std::vector<Relation> out;
  for (const auto& t : terms) {
    if (t.words.size() < 2) continue;
    std::set<TermId> parents;
    std::string prefix;
    for (std::size_t k = 1; k < t.words.size(); ++k) {
      prefix += (k > 1 ? " " : "") + t.words[k - 1];
      const auto it = by_canonical.find(prefix);
      if (it != by_canonical.end() && it->second != t.id && parents.insert(it->second).second) {
        out.push_back(make_relation(it->second, t.id, RelationKind::kHypernymy,
                                    Evidence::kHeadExpansion, confidence,
                                    "head_expansion:prefix"));
      }
    }
    const auto head = by_canonical.find(t.head_lemma);
    if (head != by_canonical.end() && head->second != t.id &&
        parents.insert(head->second).second) {
      out.push_back(make_relation(head->second, t.id, RelationKind::kHypernymy,
                                  Evidence::kHeadExpansion, confidence,
                                  "head_expansion:head"));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Synonym dictionary

class SynonymDictionary {
 public:
  SynonymDictionary() = default;

  // One synset per line, entries separated by ';', '#' comments.
  static SynonymDictionary parse(std::string_view content) {
    SynonymDictionary dict;
    std::size_t line_no = 0;
    for (const auto& raw : text::split(content, '\n')) {
      ++line_no;
      const auto line = text::trim(raw);
      if (line.empty() || line[0] == '#') continue;
      std::vector<std::string> synset;
      for (const auto& entry : text::split(line, ';')) {
        const auto words = text::split_words(text::to_lower(text::trim(entry)));
        if (!words.empty()) synset.push_back(text::join(words, " "));
      }
      std::sort(synset.begin(), synset.end());
      synset.erase(std::unique(synset.begin(), synset.end()), synset.end());
      if (synset.size() < 2) {
        throw Error(ErrorCode::kBadDictionaryRow,
                    "line " + std::to_string(line_no) + ": a synset needs two entries");
      }
      dict.add(std::move(synset));
    }
    return dict;
  }

  void add(std::vector<std::string> synset) {
    const auto id = synsets_.size();
    for (const auto& e : synset) index_[e].push_back(id);
    synsets_.push_back(std::move(synset));
  }

  const std::vector<std::vector<std::string>>& synsets() const { return synsets_; }

  std::vector<std::size_t> synsets_of(const std::string& entry) const {
    const auto it = index_.find(entry);
    return it == index_.end() ? std::vector<std::size_t>{} : it->second;
  }

  bool empty() const { return synsets_.empty(); }

 private:
  std::vector<std::vector<std::string>> synsets_;
  std::map<std::string, std::vector<std::size_t>> index_;
};

struct SynonymOptions {
  double whole_term_confidence = 0.95;
  double component_confidence = 0.7;
};

inline std::vector<Relation> project_synonym_dictionary(std::span<const CandidateTerm> terms,
                                                        const SynonymDictionary& dict,
                                                        const SynonymOptions& options = {}) {
  std::map<std::string, TermId> by_canonical;
  for (const auto& t : terms) by_canonical.emplace(t.canonical, t.id);
  std::vector<Relation> out;
  std::set<std::pair<TermId, TermId>> linked;

  for (const auto& synset : dict.synsets()) {
    std::vector<TermId> members;
    for (const auto& entry : synset) {
      const auto it = by_canonical.find(entry);
      if (it != by_canonical.end()) members.push_back(it->second);
    }
    std::sort(members.begin(), members.end());
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (std::size_t j = i + 1; j < members.size(); ++j) {
        if (!linked.emplace(members[i], members[j]).second) continue;
        out.push_back(make_relation(members[i], members[j], RelationKind::kSynonymy,
                                    Evidence::kDictionary, options.whole_term_confidence,
                                    "dictionary:" + text::join(synset, ";")));
      }
    }
  }

  for (const auto& t : terms) {
    if (t.words.size() < 2) continue;
    for (std::size_t i = 0; i < t.words.size(); ++i) {
      for (std::size_t sid : dict.synsets_of(t.words[i])) {
        for (const auto& alt : dict.synsets()[sid]) {
          if (alt == t.words[i] || alt.find(' ') != std::string::npos) continue;
          auto words = t.words;
          words[i] = alt;
          const auto it = by_canonical.find(text::join(words, " "));
          if (it == by_canonical.end() || it->second == t.id) continue;
          const auto key = std::minmax(t.id, it->second);
          if (!linked.emplace(key.first, key.second).second) continue;
          out.push_back(make_relation(t.id, it->second, RelationKind::kSynonymy,
                                      Evidence::kDictionary, options.component_confidence,
                                      "dictionary:" + t.words[i] + "~" + alt));
        }
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Merge

namespace detail {

inline void absorb(Relation& into, const Relation& r) {
  if (r.confidence > into.confidence) into.evidence = r.evidence;
  into.confidence = 1.0 - (1.0 - into.confidence) * (1.0 - r.confidence);
  into.provenance.insert(into.provenance.end(), r.provenance.begin(), r.provenance.end());
}

using EdgeKey = std::tuple<TermId, TermId, RelationKind>;

// First hypernymy cycle found by a deterministic DFS, as edge keys.
inline std::optional<std::vector<std::pair<TermId, TermId>>> find_cycle(
    const std::map<TermId, std::vector<TermId>>& adj) {
  std::map<TermId, int> color;  // 0 white, 1 grey, 2 black
  std::vector<TermId> stack;
  std::optional<std::vector<std::pair<TermId, TermId>>> found;
  std::function<bool(TermId)> visit = [&](TermId u) {
    color[u] = 1;
    stack.push_back(u);
    if (const auto it = adj.find(u); it != adj.end()) {
      for (TermId v : it->second) {
        if (color[v] == 1) {
          std::vector<std::pair<TermId, TermId>> cycle;
          auto pos = std::find(stack.begin(), stack.end(), v);
          for (auto p = pos; p + 1 != stack.end(); ++p) cycle.emplace_back(*p, *(p + 1));
          cycle.emplace_back(u, v);
          found = std::move(cycle);
          return true;
        }
        if (color[v] == 0 && visit(v)) return true;
      }
    }
    stack.pop_back();
    color[u] = 2;
    return false;
  };
  for (const auto& [u, vs] : adj) {
    if (color[u] == 0 && visit(u)) break;
  }
  return found;
}

}  // namespace detail

// Noisy-or merge of duplicate edges, demotion of the weaker direction of a
// two-way hypernymy to association, then removal of the weakest edge of
// every remaining hypernymy cycle. Output sorted by (source, target, kind).
inline std::vector<Relation> merge_relations(
    const std::vector<std::vector<Relation>>& batches) {
  std::map<detail::EdgeKey, Relation> merged;
  auto add = [&merged](Relation r) {
    if (r.source_id == r.target_id) return;
    if (is_symmetric(r.kind) && r.target_id < r.source_id) std::swap(r.source_id, r.target_id);
    const detail::EdgeKey key{r.source_id, r.target_id, r.kind};
    auto it = merged.find(key);
    if (it == merged.end()) {
      merged.emplace(key, std::move(r));
    } else {
      detail::absorb(it->second, r);
    }
  };
  for (const auto& batch : batches) {
    for (const auto& r : batch) add(r);
  }

  std::vector<Relation> demoted;
  for (auto it = merged.begin(); it != merged.end();) {
    const auto& [key, r] = *it;
    if (r.kind != RelationKind::kHypernymy || r.source_id > r.target_id) {
      ++it;
      continue;
    }
    const auto back = merged.find({r.target_id, r.source_id, RelationKind::kHypernymy});
    if (back == merged.end()) {
      ++it;
      continue;
    }
    // Ties keep the edge whose source has the lower id (this one).
    auto loser = back->second.confidence > r.confidence ? it : back;
    Relation assoc = loser->second;
    assoc.kind = RelationKind::kAssociation;
    assoc.provenance.push_back("demoted:hypernymy");
    demoted.push_back(std::move(assoc));
    if (loser == it) {
      it = merged.erase(it);
    } else {
      merged.erase(back);
      ++it;
    }
  }
  for (auto& r : demoted) add(std::move(r));

  while (true) {
    std::map<TermId, std::vector<TermId>> adj;
    for (const auto& [key, r] : merged) {
      if (r.kind == RelationKind::kHypernymy) adj[r.source_id].push_back(r.target_id);
    }
    const auto cycle = detail::find_cycle(adj);
    if (!cycle) break;
    const Relation* weakest = nullptr;
    for (const auto& [s, t] : *cycle) {
      const Relation& r = merged.at({s, t, RelationKind::kHypernymy});
      if (weakest == nullptr || r.confidence < weakest->confidence ||
          (r.confidence == weakest->confidence &&
           std::tie(r.source_id, r.target_id) <
               std::tie(weakest->source_id, weakest->target_id))) {
        weakest = &r;
      }
    }
    merged.erase({weakest->source_id, weakest->target_id, RelationKind::kHypernymy});
  }

  std::vector<Relation> out;
  out.reserve(merged.size());
  for (auto& [key, r] : merged) out.push_back(std::move(r));
  return out;
}

}  // namespace folio
