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


// Property harnesses shared by the unit tests and the acceptance runner.
#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "folio/folio.hpp"
#include "folio/pipeline.hpp"

namespace folio::testing {

struct PropertyResult {
  int cases = 0;
  int interesting = 0;  // cases that exercised the non-trivial path
  std::string failure;  // first failure, empty when all cases held

  bool ok() const { return failure.empty(); }
};

// ---------------------------------------------------------------------------
// Pattern rules

// Brute-force reading of a rule: enumerate every alignment, keep the one
// whose slot ends are lexicographically largest. Within a list the item and
// separator positions are compared the same way.
class PatternOracle {
 public:
  struct Reading {
    std::vector<std::size_t> key;
    std::vector<std::size_t> trace;
    std::vector<std::vector<TermId>> slots;
    std::size_t end = 0;
  };

  PatternOracle(const Document& doc, std::span<const CandidateTerm> terms, TokenSpan sentence,
                int sid)
      : doc_(doc), sentence_(sentence) {
    for (const auto& t : terms) {
      for (const auto& o : t.occurrences) {
        if (o.sentence_id == sid) occ_.push_back({o.token_span.begin, o.token_span.end, t.id});
      }
    }
  }

  std::optional<Reading> read(const PatternRule& rule, std::size_t p) const {
    std::optional<Reading> best;
    Reading cur;
    walk(rule, 0, p, cur, best);
    return best;
  }

  std::vector<Relation> relations(std::span<const PatternRule> rules) const {
    std::vector<Relation> out;
    for (const auto& rule : rules) {
      std::size_t p = sentence_.begin;
      while (p < sentence_.end) {
        const auto r = read(rule, p);
        if (!r || r->end <= p) {
          ++p;
          continue;
        }
        const std::size_t g = static_cast<std::size_t>(rule.generic_slot - 1);
        std::set<std::pair<TermId, TermId>> seen;
        for (std::size_t s = 0; s < r->slots.size(); ++s) {
          if (s == g) continue;
          for (TermId generic : r->slots[g]) {
            for (TermId specific : r->slots[s]) {
              if (generic == specific || !seen.emplace(generic, specific).second) continue;
              out.push_back(make_relation(generic, specific, rule.relation_kind,
                                          Evidence::kPattern, rule.base_confidence,
                                          "pattern:" + rule.name));
            }
          }
        }
        p = r->end;
      }
    }
    return out;
  }

 private:
  struct Occ {
    std::size_t b, e;
    TermId id;
  };
  using Option = std::tuple<std::size_t, std::vector<std::size_t>, std::vector<TermId>>;

  bool literal(std::size_t p, const std::string& lemma) const {
    if (p >= sentence_.end) return false;
    const Token& t = doc_.tokens[p];
    if (t.lemma == lemma) return true;
    std::string low = t.surface;
    for (auto& c : low) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return low == lemma;
  }

  bool joiner(std::size_t p) const { return literal(p, "and") || literal(p, "or"); }

  void lists(std::size_t p, std::vector<std::size_t>& trace, std::vector<TermId>& items,
             std::vector<Option>& out) const {
    for (const auto& o : occ_) {
      if (o.b != p || o.e > sentence_.end) continue;
      trace.push_back(o.e);
      items.push_back(o.id);
      out.emplace_back(o.e, trace, items);
      std::vector<std::size_t> nexts;
      if (o.e < sentence_.end && doc_.tokens[o.e].surface == ",") {
        nexts.push_back(o.e + 1);
        if (joiner(o.e + 1)) nexts.push_back(o.e + 2);
      } else if (joiner(o.e)) {
        nexts.push_back(o.e + 1);
      }
      for (std::size_t n : nexts) {
        trace.push_back(n);
        lists(n, trace, items, out);
        trace.pop_back();
      }
      trace.pop_back();
      items.pop_back();
    }
  }

  void walk(const PatternRule& rule, std::size_t i, std::size_t p, Reading& cur,
            std::optional<Reading>& best) const {
    if (i == rule.sequence.size()) {
      Reading done = cur;
      done.end = p;
      if (!best || std::tie(done.key, done.trace) > std::tie(best->key, best->trace)) best = done;
      return;
    }
    const PatternItem& it = rule.sequence[i];
    if (it.kind == ItemKind::kLiteral) {
      if (literal(p, it.lemma)) walk(rule, i + 1, p + 1, cur, best);
      return;
    }
    std::vector<Option> options;
    if (it.kind == ItemKind::kTerm) {
      for (const auto& o : occ_) {
        if (o.b == p && o.e <= sentence_.end) {
          options.emplace_back(o.e, std::vector<std::size_t>{o.e}, std::vector<TermId>{o.id});
        }
      }
    } else {
      std::vector<std::size_t> trace;
      std::vector<TermId> items;
      lists(p, trace, items, options);
    }
    for (auto& [e, trace, ids] : options) {
      const auto saved = cur;
      cur.key.push_back(e);
      cur.trace.insert(cur.trace.end(), trace.begin(), trace.end());
      cur.slots.push_back(ids);
      walk(rule, i + 1, e, cur, best);
      cur = saved;
    }
  }

  const Document& doc_;
  TokenSpan sentence_;
  std::vector<Occ> occ_;
};

inline std::string describe(const std::vector<Relation>& rels) {
  std::string out;
  for (const auto& r : rels) {
    out += std::to_string(r.source_id) + ">" + std::to_string(r.target_id) + " ";
  }
  return out;
}

// Random sentences of at most 25 tokens with at most 5 extracted terms.
inline PropertyResult pattern_oracle_property(int cases, std::uint32_t seed) {
  const std::vector<std::string> vocab = {
      "frames", "scripts", "logic", "formalisms", "structures", "knowledge",
      "representation", "systems", "rules", "such as", "including", "especially",
      "and", "or", ",", ", and", "and other", "or other", "is a kind of", "as", "of"};
  const auto rules = default_rules();
  std::mt19937 rng(seed);
  PropertyResult res;
  while (res.cases < cases) {
    std::string src;
    std::size_t tokens = 0;
    const std::size_t target = 1 + rng() % 22;
    while (tokens < target) {
      const std::string& w = vocab[rng() % vocab.size()];
      const std::size_t n = 1 + static_cast<std::size_t>(std::count(w.begin(), w.end(), ' '));
      if (tokens + n > 24) break;
      if (!src.empty() && w[0] != ',') src += ' ';
      src += w;
      tokens += n;
    }
    src += " .";
    const Document doc = ingest_plain_text(src);
    if (doc.tokens.size() > 25) continue;
    auto terms = extract_candidates(doc);
    std::shuffle(terms.begin(), terms.end(), rng);
    if (rng() % 2) {
      std::stable_sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
        return a.words.size() < b.words.size();
      });
    }
    terms.resize(std::min<std::size_t>(terms.size(), rng() % 6));
    ++res.cases;

    std::vector<Relation> expected;
    for (const auto& [sid, span] : detail::sentence_spans(doc)) {
      const auto rels = PatternOracle(doc, terms, span, sid).relations(rules);
      expected.insert(expected.end(), rels.begin(), rels.end());
    }
    auto actual = extract_pattern_relations(doc, terms, rules);
    const auto order = [](const Relation& a, const Relation& b) {
      return std::tie(a.source_id, a.target_id, a.kind, a.provenance) <
             std::tie(b.source_id, b.target_id, b.kind, b.provenance);
    };
    std::sort(expected.begin(), expected.end(), order);
    std::sort(actual.begin(), actual.end(), order);
    if (!expected.empty()) ++res.interesting;
    if (actual != expected && res.ok()) {
      res.failure = "'" + src + "': got " + describe(actual) + "want " + describe(expected);
    }
  }
  return res;
}

// ---------------------------------------------------------------------------
// Metrics

// Reduced rational, independent of the library's Fraction.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational(std::int64_t n = 0, std::int64_t d = 1) : num(n), den(d) {
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const std::int64_t g = std::gcd(num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }
  Rational operator-(const Rational& o) const { return {num * o.den - o.num * den, den * o.den}; }
  Rational operator/(const Rational& o) const { return {num * o.den, den * o.num}; }
  Rational operator*(std::int64_t k) const { return {num * k, den}; }
  bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
};

inline bool same(const Fraction& f, const Rational& r) {
  return Rational(f.num, f.den) == r;
}

struct SyntheticPair {
  CandidateIndex draft;
  ReferenceIndex validated;
  ReferenceIndex traditional;
};

inline SyntheticPair synthetic_pair(std::mt19937& rng) {
  const int universe = 1 + static_cast<int>(rng() % 30);
  const auto name = [](std::size_t i) { return "w" + std::to_string(i); };
  const auto pick_set = [&](std::size_t max) {
    std::vector<std::string> all;
    for (int i = 0; i < universe; ++i) all.push_back(name(static_cast<std::size_t>(i)));
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(std::min<std::size_t>(all.size(), rng() % (max + 1)));
    return all;
  };
  const auto pick_relations = [&]() {
    std::set<RelationTriple> out;
    const std::size_t n = rng() % 31;
    const RelationKind kinds[] = {RelationKind::kHypernymy, RelationKind::kSynonymy,
                                  RelationKind::kAssociation, RelationKind::kVariant};
    while (out.size() < n) {
      const std::size_t a = rng() % static_cast<std::size_t>(universe);
      const std::size_t b = rng() % static_cast<std::size_t>(universe);
      out.insert(make_triple(name(a), name(b), kinds[rng() % 4]));
      if (universe < 3 && out.size() >= 4) break;
    }
    return out;
  };
  SyntheticPair p;
  p.draft.ranked = pick_set(20);
  p.draft.relations = pick_relations();
  const auto v = pick_set(20);
  p.validated = {{v.begin(), v.end()}, pick_relations(), IndexSource::kValidatedIndDoc};
  const auto t = pick_set(20);
  p.traditional = {{t.begin(), t.end()}, pick_relations(), IndexSource::kTraditionalManual};
  return p;
}

template <typename T>
std::int64_t common(const std::set<T>& a, const std::set<T>& b) {
  std::vector<T> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return static_cast<std::int64_t>(out.size());
}

inline std::int64_t size_of(const auto& c) { return static_cast<std::int64_t>(c.size()); }

// Every metric against set arithmetic, exactly.
inline PropertyResult metric_oracle_property(int cases, std::uint32_t seed) {
  std::mt19937 rng(seed);
  PropertyResult res;
  auto fail = [&](const std::string& why) {
    if (res.ok()) res.failure = "case " + std::to_string(res.cases) + ": " + why;
  };
  for (; res.cases < cases; ++res.cases) {
    const auto [draft, validated, traditional] = synthetic_pair(rng);
    const std::set<std::string> mine(draft.ranked.begin(), draft.ranked.end());
    if (!mine.empty()) {
      ++res.interesting;
      if (!same(descriptor_precision_counts(draft, validated),
                Rational(common(mine, validated.descriptors), size_of(mine)))) {
        fail("descriptor_precision");
      }
      const std::size_t k = rng() % (draft.ranked.size() + 3);
      const std::size_t cut = std::min(k, draft.ranked.size());
      const std::set<std::string> top(draft.ranked.begin(),
                                      draft.ranked.begin() + static_cast<long>(cut));
      const Rational want = cut == 0 ? Rational(0, 1)
                                     : Rational(common(top, validated.descriptors), size_of(top));
      if (!same(ranked_precision_counts(draft, validated, k), want)) fail("ranked_precision");
    } else {
      try {
        descriptor_precision_counts(draft, validated);
        fail("empty draft accepted");
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kEmptyDraft) fail("empty draft error code");
      }
    }
    if (!draft.relations.empty()) {
      if (!same(relation_precision_counts(draft, validated),
                Rational(common(draft.relations, validated.relations), size_of(draft.relations)))) {
        fail("relation_precision");
      }
    }
    if (!traditional.descriptors.empty()) {
      const auto inc = size_increase(validated, &traditional);
      const Rational ct(size_of(traditional.descriptors));
      const Rational cc(size_of(validated.descriptors));
      if (!same(inc.descriptor_pct, ((cc - ct) / ct) * 100)) fail("size_increase descriptors");
      if (!traditional.relations.empty() && !validated.descriptors.empty()) {
        const Rational at(size_of(traditional.relations), size_of(traditional.descriptors));
        const Rational ac(size_of(validated.relations), size_of(validated.descriptors));
        if (!inc.relations_per_descriptor_pct ||
            !same(*inc.relations_per_descriptor_pct, ((ac - at) / at) * 100)) {
          fail("size_increase relations per descriptor");
        }
      }
    }
  }
  return res;
}

// ranked_precision at k = |draft| equals descriptor_precision.
inline PropertyResult consistency_law_property(int cases, std::uint32_t seed) {
  std::mt19937 rng(seed);
  PropertyResult res;
  for (; res.cases < cases; ++res.cases) {
    const auto p = synthetic_pair(rng);
    if (p.draft.ranked.empty()) continue;
    ++res.interesting;
    const auto a = ranked_precision_counts(p.draft, p.validated, p.draft.ranked.size());
    const auto b = descriptor_precision_counts(p.draft, p.validated);
    if (!(a == b) && res.ok()) {
      res.failure = "case " + std::to_string(res.cases) + ": " + std::to_string(a.num) + "/" +
                    std::to_string(a.den) + " vs " + std::to_string(b.num) + "/" +
                    std::to_string(b.den);
    }
  }
  return res;
}

// ---------------------------------------------------------------------------
// Randomized pipelines

inline std::string random_document(std::mt19937& rng) {
  const std::vector<std::string> nouns = {
      "knowledge", "representation", "acquisition", "frames", "scripts", "rules",
      "systems", "experts", "logic", "formalisms", "inference", "learning", "structures"};
  const std::vector<std::string> verbs = {"are used", "is studied", "are described",
                                          "is central", "are common"};
  auto noun = [&] { return nouns[rng() % nouns.size()]; };
  auto phrase = [&] {
    std::string p = noun();
    if (rng() % 2) p = noun() + " " + p;
    return p;
  };
  auto cap = [](std::string s) {
    s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
    return s;
  };
  std::string doc;
  const int pages = 1 + static_cast<int>(rng() % 5);
  for (int p = 0; p < pages; ++p) {
    if (p) doc += "\n\f\n";
    if (rng() % 2) doc += cap(phrase()) + "\n\n";
    const int sentences = 1 + static_cast<int>(rng() % 6);
    for (int s = 0; s < sentences; ++s) {
      std::string sent;
      switch (rng() % 5) {
        case 0: sent = phrase() + " such as " + noun() + " and " + noun() + " " + verbs[0]; break;
        case 1: sent = noun() + ", " + noun() + " and other " + noun() + " " + verbs[1]; break;
        case 2: sent = "Artificial Intelligence (AI) " + verbs[rng() % verbs.size()]; break;
        case 3: sent = "a " + noun() + " is a kind of " + noun(); break;
        default: sent = phrase() + " " + verbs[rng() % verbs.size()];
      }
      if (rng() % 4 == 0) sent += " with *" + noun() + "*";
      doc += cap(sent) + ". ";
    }
    doc += "\n";
  }
  return doc;
}

inline bool hypernymy_acyclic(const std::vector<Relation>& rels) {
  std::map<TermId, std::vector<TermId>> adj;
  for (const auto& r : rels) {
    if (r.kind == RelationKind::kHypernymy) adj[r.source_id].push_back(r.target_id);
  }
  std::map<TermId, int> color;
  std::function<bool(TermId)> cyclic = [&](TermId v) {
    color[v] = 1;
    for (TermId w : adj[v]) {
      if (color[w] == 1 || (color[w] == 0 && cyclic(w))) return true;
    }
    color[v] = 2;
    return false;
  };
  for (const auto& [v, _] : adj) {
    if (color[v] == 0 && cyclic(v)) return false;
  }
  return true;
}

inline std::string entry_problem(const DraftIndex& d, const IndexEntry& e) {
  if (e.see && (!e.page_refs.empty() || !e.sub_entries.empty() || !e.see_also.empty())) {
    return "redirect entry '" + e.display_label + "' carries pages";
  }
  for (std::size_t i = 0; i < e.page_refs.size(); ++i) {
    if (e.page_refs[i].start > e.page_refs[i].end) return "inverted range";
    if (i && e.page_refs[i - 1].end >= e.page_refs[i].start) {
      return "page refs of '" + e.display_label + "' not sorted and disjoint";
    }
  }
  for (const auto& s : e.sub_entries) {
    if (auto p = entry_problem(d, s); !p.empty()) return p;
  }
  return {};
}

inline std::string draft_problems(const DraftIndex& d) {
  for (const auto& e : d.entries) {
    if (auto p = entry_problem(d, e); !p.empty()) return p;
  }
  if (import_interchange(export_interchange(d)) != d) return "interchange round trip differs";
  try {
    check_index_invariants(d);
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

// Structural invariants over random documents, budgets and decisions.
inline PropertyResult pipeline_invariant_property(int cases, std::uint32_t seed) {
  std::mt19937 rng(seed);
  PropertyResult res;
  auto fail = [&](const std::string& src, const std::string& why) {
    if (res.ok()) res.failure = why + " in: " + src;
  };
  for (; res.cases < cases; ++res.cases) {
    const std::string src = random_document(rng);
    PipelineConfig config;
    config.ingest.document_id = "random-" + std::to_string(res.cases);
    config.max_entries = 1 + rng() % 15;
    config.refs.mention_threshold = 1 + static_cast<int>(rng() % 3);
    const PipelineResult r = run_pipeline(ingest_plain_text(src, config.ingest), config);

    if (!hypernymy_acyclic(r.relations)) fail(src, "hypernymy cycle after merge");
    std::set<TermId> kept;
    for (const auto& e : r.kept.entries) kept.insert(e.term_id);
    for (const auto& rel : r.relations) {
      if (rel.kind == RelationKind::kHypernymy && kept.count(rel.target_id) &&
          !kept.count(rel.source_id)) {
        fail(src, "truncation dropped an ancestor");
      }
    }
    if (!r.kept.closure_overflow && kept.size() > config.max_entries) {
      fail(src, "truncation over budget");
    }
    if (r.relations.size() > 0) ++res.interesting;
    if (auto p = draft_problems(r.draft); !p.empty()) fail(src, p);

    std::vector<Decision> ds;
    for (int i = static_cast<int>(rng() % 6); i > 0 && !r.draft.terms.empty(); --i) {
      const auto& t = r.draft.terms[rng() % r.draft.terms.size()];
      Decision dec;
      dec.subject_id = t.id;
      dec.action = rng() % 3 ? DecisionAction::kAccept : DecisionAction::kReject;
      if (rng() % 5 == 0) {
        dec.action = DecisionAction::kRelabel;
        dec.payload = "Label " + std::to_string(i);
      }
      ds.push_back(dec);
    }
    try {
      const DraftIndex v = apply_validation_decisions(r.draft, ds);
      if (auto p = draft_problems(v); !p.empty()) fail(src, "after validation: " + p);
    } catch (const Error& e) {
      fail(src, std::string("validation failed: ") + e.what());
    }
  }
  return res;
}

}  // namespace folio::testing
