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
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "folio/error.hpp"
#include "folio/lexicon_en.hpp"
#include "folio/text.hpp"

namespace folio {

enum class PosTag { kNoun, kPropn, kAdj, kPrep, kDet, kVerb, kPunct, kOther };

inline std::string_view pos_name(PosTag tag) {
  switch (tag) {
    case PosTag::kNoun: return "NOUN";
    case PosTag::kPropn: return "PROPN";
    case PosTag::kAdj: return "ADJ";
    case PosTag::kPrep: return "PREP";
    case PosTag::kDet: return "DET";
    case PosTag::kVerb: return "VERB";
    case PosTag::kPunct: return "PUNCT";
    case PosTag::kOther: return "OTHER";
  }
  return "OTHER";
}

// Unknown tag names map to OTHER.
inline PosTag parse_pos(std::string_view name) {
  static const std::map<std::string_view, PosTag> kTags = {
      {"NOUN", PosTag::kNoun}, {"PROPN", PosTag::kPropn},
      {"ADJ", PosTag::kAdj},   {"PREP", PosTag::kPrep},
      {"DET", PosTag::kDet},   {"VERB", PosTag::kVerb},
      {"PUNCT", PosTag::kPunct}};
  const auto it = kTags.find(name);
  return it == kTags.end() ? PosTag::kOther : it->second;
}

inline bool is_nominal(PosTag tag) {
  return tag == PosTag::kNoun || tag == PosTag::kPropn;
}

// Half-open interval of token indices.
struct TokenSpan {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  bool empty() const { return end == begin; }
  bool contains(std::size_t i) const { return i >= begin && i < end; }
  bool covers(const TokenSpan& o) const {
    return o.begin >= begin && o.end <= end;
  }
  auto operator<=>(const TokenSpan&) const = default;
};

struct Token {
  std::string surface;
  std::string lemma;
  PosTag pos = PosTag::kOther;
  bool emphasis = false;
  std::size_t char_offset = 0;
  int sentence_id = 0;

  bool operator==(const Token&) const = default;
};

struct Page {
  int number = 1;
  TokenSpan token_span;

  bool operator==(const Page&) const = default;
};

enum class SegmentKind { kHeading, kParagraph };

struct Segment {
  int id = 0;
  SegmentKind kind = SegmentKind::kParagraph;
  int depth = 0;
  TokenSpan token_span;
  // For headings: the group this heading titles (its own id).
  std::optional<int> title_of;
  // Group of the nearest preceding heading, if any.
  std::optional<int> group;

  bool operator==(const Segment&) const = default;
};

struct Document {
  std::string id;
  std::string language = "en";
  std::vector<Page> pages;
  std::vector<Segment> segments;
  std::vector<Token> tokens;

  bool operator==(const Document&) const = default;

  const Page& page_of(std::size_t token) const {
    auto it = std::upper_bound(
        pages.begin(), pages.end(), token,
        [](std::size_t t, const Page& p) { return t < p.token_span.end; });
    while (it != pages.end() && !it->token_span.contains(token)) ++it;
    if (it == pages.end()) {
      throw Error(ErrorCode::kInconsistentInputs,
                  "token " + std::to_string(token) + " is on no page");
    }
    return *it;
  }

  const Segment& segment_of(std::size_t token) const {
    auto it = std::upper_bound(
        segments.begin(), segments.end(), token,
        [](std::size_t t, const Segment& s) { return t < s.token_span.end; });
    if (it == segments.end() || !it->token_span.contains(token)) {
      throw Error(ErrorCode::kInconsistentInputs,
                  "token " + std::to_string(token) + " is in no segment");
    }
    return *it;
  }

  std::size_t paragraph_count() const {
    return static_cast<std::size_t>(
        std::count_if(segments.begin(), segments.end(), [](const Segment& s) {
          return s.kind == SegmentKind::kParagraph;
        }));
  }

  // Surface text of a token range, tokens separated as in the source.
  std::string text(TokenSpan span) const {
    std::string out;
    for (std::size_t i = span.begin; i < span.end && i < tokens.size(); ++i) {
      if (i > span.begin) {
        const auto& prev = tokens[i - 1];
        if (tokens[i].char_offset > prev.char_offset + prev.surface.size()) {
          out += ' ';
        }
      }
      out += tokens[i].surface;
    }
    return out;
  }
};

// ---------------------------------------------------------------------------
// Tagging

struct LexEntry {
  std::string lemma;
  PosTag pos = PosTag::kOther;
};

class TagLexicon {
 public:
  TagLexicon() = default;

  static TagLexicon core_english() {
    TagLexicon lex;
    for (const auto& line : text::split(kCoreEnglishLexicon, '\n')) {
      const auto words = text::split_words(line);
      if (words.empty()) continue;
      const PosTag pos = parse_pos(words[0]);
      for (std::size_t i = 1; i < words.size(); ++i) {
        const auto eq = words[i].find('=');
        if (eq == std::string::npos) {
          lex.add(words[i], words[i], pos);
        } else {
          lex.add(words[i].substr(0, eq), words[i].substr(eq + 1), pos);
        }
      }
    }
    return lex;
  }

  // "surface<TAB>lemma<TAB>pos" lines, '#' comments.
  static TagLexicon parse(std::string_view content, const std::string& origin) {
    TagLexicon lex;
    lex.merge_text(content, origin);
    return lex;
  }

  void merge_text(std::string_view content, const std::string& origin) {
    std::size_t line_no = 0;
    for (const auto& raw : text::split(content, '\n')) {
      ++line_no;
      std::string_view line = raw;
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      if (text::trim(line).empty() || line[0] == '#') continue;
      const auto cols = text::split(line, '\t');
      if (cols.size() != 3 || cols[0].empty()) {
        throw Error(ErrorCode::kBadColumnCount,
                    origin + ":" + std::to_string(line_no) +
                        ": expected surface<TAB>lemma<TAB>pos");
      }
      add(cols[0], cols[1].empty() ? cols[0] : cols[1], parse_pos(cols[2]));
    }
  }

  void add(const std::string& surface, const std::string& lemma, PosTag pos) {
    entries_[text::to_lower(surface)] = LexEntry{text::to_lower(lemma), pos};
  }

  const LexEntry* find(const std::string& lower_surface) const {
    const auto it = entries_.find(lower_surface);
    return it == entries_.end() ? nullptr : &it->second;
  }

  std::size_t size() const { return entries_.size(); }

 private:
  std::map<std::string, LexEntry> entries_;
};

struct TaggerOptions {
  std::vector<std::string> nominal_suffixes = {
      "tion", "sion", "ment", "ness", "ity", "ism", "ence",
      "ance", "ship", "ogy",  "ist",  "ure", "ics"};
};

struct RawToken {
  std::string surface;
  std::size_t char_offset = 0;
  bool emphasis = false;
  int sentence_id = 0;
};

namespace detail {

inline bool has_suffix_of(std::string_view word,
                          const std::vector<std::string>& suffixes) {
  for (const auto& s : suffixes) {
    if (word.size() >= s.size() + 2 && text::ends_with(word, s)) return true;
  }
  return false;
}

}  // namespace detail

// Deterministic rule tagger: lexicon first, then shape and suffix rules.
inline std::vector<Token> tag_tokens(std::span<const RawToken> raw,
                                     const TagLexicon& lexicon,
                                     const TaggerOptions& options = {}) {
  std::vector<Token> out;
  out.reserve(raw.size());
  bool sentence_has_word = false;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const RawToken& r = raw[i];
    if (i == 0 || raw[i - 1].sentence_id != r.sentence_id) {
      sentence_has_word = false;
    }
    Token t;
    t.surface = r.surface;
    t.char_offset = r.char_offset;
    t.emphasis = r.emphasis;
    t.sentence_id = r.sentence_id;
    const std::string lower = text::to_lower(r.surface);
    t.lemma = lower;

    if (const auto* hit = lexicon.find(lower)) {
      t.lemma = hit->lemma;
      t.pos = hit->pos;
    } else if (!text::has_alnum(r.surface)) {
      t.pos = PosTag::kPunct;
    } else if (const auto* base = lexicon.find(text::singularize(lower));
               base != nullptr && text::ends_with(lower, "s") &&
               (base->pos == PosTag::kNoun || base->pos == PosTag::kVerb)) {
      t.lemma = base->lemma;
      t.pos = base->pos;
    } else if (text::is_all_caps_word(r.surface)) {
      t.pos = PosTag::kPropn;
    } else if (text::is_ascii_upper(r.surface[0]) && sentence_has_word) {
      t.pos = PosTag::kPropn;
    } else if (detail::has_suffix_of(lower, options.nominal_suffixes)) {
      t.pos = PosTag::kNoun;
    } else if (const auto singular = text::singularize(lower);
               singular != lower &&
               detail::has_suffix_of(singular, options.nominal_suffixes)) {
      t.pos = PosTag::kNoun;
      t.lemma = singular;
    }
    if (t.pos != PosTag::kPunct) sentence_has_word = true;
    out.push_back(std::move(t));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Ingestion

struct IngestOptions {
  std::string document_id = "document";
  int first_page = 1;
  std::string language = "en";
  TaggerOptions tagger;
  std::set<std::string> abbreviations = {"e.g", "i.e", "etc", "vs", "cf",
                                         "dr",  "mr",  "mrs", "ms", "prof",
                                         "fig", "al",  "no",  "vol", "pp",
                                         "ch",  "sec", "eq"};
};

namespace detail {

inline bool is_terminal(std::string_view s) {
  return s == "." || s == "!" || s == "?";
}

// Assigns sentence ids inside one segment, starting at next_id. A sentence
// ends at . ! ? followed by whitespace and an upper-case token, unless the
// period closes a stoplisted abbreviation.
template <typename Tok>
int split_sentences(std::span<Tok> toks, int next_id,
                    const std::set<std::string>& abbreviations) {
  if (toks.empty()) return next_id;
  int id = next_id;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    toks[i].sentence_id = id;
    if (i + 1 >= toks.size() || !is_terminal(toks[i].surface)) continue;
    const auto& next = toks[i + 1];
    const bool spaced =
        next.char_offset > toks[i].char_offset + toks[i].surface.size();
    if (!spaced || !text::is_ascii_upper(next.surface[0])) continue;
    if (toks[i].surface == "." && i > 0) {
      const auto& prev = toks[i - 1];
      const bool attached =
          prev.char_offset + prev.surface.size() == toks[i].char_offset;
      if (attached && abbreviations.count(text::to_lower(prev.surface))) continue;
    }
    ++id;
  }
  return id + 1;
}

// Fills Segment::group/title_of from heading order.
inline void link_segment_groups(Document& doc) {
  std::optional<int> current;
  for (auto& seg : doc.segments) {
    if (seg.kind == SegmentKind::kHeading) {
      current = seg.id;
      seg.title_of = seg.id;
    } else {
      seg.title_of.reset();
    }
    seg.group = current;
  }
}

class PlainTextBuilder {
 public:
  PlainTextBuilder(const IngestOptions& options, const TagLexicon& lexicon)
      : options_(options), lexicon_(lexicon) {}

  Document build(std::string_view source) {
    doc_.id = options_.document_id;
    doc_.language = options_.language;
    int page_number = options_.first_page;
    std::size_t page_start = 0;
    while (true) {
      const auto ff = source.find('\f', page_start);
      const auto page_end = ff == std::string_view::npos ? source.size() : ff;
      const std::size_t first_token = raw_.size();
      scan_page(source, page_start, page_end);
      doc_.pages.push_back(Page{page_number++, {first_token, raw_.size()}});
      if (ff == std::string_view::npos) break;
      page_start = ff + 1;
    }
    if (raw_.empty()) throw Error(ErrorCode::kEmptyDocument, "no tokens");
    doc_.tokens = tag_tokens(raw_, lexicon_, options_.tagger);
    link_segment_groups(doc_);
    return std::move(doc_);
  }

 private:
  void scan_page(std::string_view src, std::size_t begin, std::size_t end) {
    std::size_t pos = begin;
    while (pos < end) {
      auto eol = src.find('\n', pos);
      if (eol == std::string_view::npos || eol > end) eol = end;
      std::string_view line = src.substr(pos, eol - pos);
      const std::size_t line_offset = pos;
      pos = eol + 1;
      if (text::trim(line).empty()) {
        close_segment();
        continue;
      }
      if (line[0] == '#') {
        close_segment();
        int depth = 0;
        while (static_cast<std::size_t>(depth) < line.size() && line[depth] == '#') ++depth;
        open_segment(SegmentKind::kHeading, depth);
        tokenize(line.substr(depth), line_offset + depth);
        close_segment();
        continue;
      }
      if (!open_) open_segment(SegmentKind::kParagraph, 0);
      tokenize(line, line_offset);
    }
    close_segment();
  }

  void open_segment(SegmentKind kind, int depth) {
    open_ = true;
    kind_ = kind;
    depth_ = depth;
    seg_start_ = raw_.size();
    emphasis_ = false;
  }

  void close_segment() {
    if (!open_) return;
    open_ = false;
    if (emphasis_) {
      throw Error(ErrorCode::kMalformedMarker,
                  "unbalanced '*' in segment ending at byte " +
                      std::to_string(last_offset_));
    }
    if (raw_.size() == seg_start_) return;
    Segment seg;
    seg.id = static_cast<int>(doc_.segments.size());
    seg.kind = kind_;
    seg.depth = kind_ == SegmentKind::kHeading ? depth_ : 0;
    seg.token_span = {seg_start_, raw_.size()};
    doc_.segments.push_back(seg);
    next_sentence_ = split_sentences(
        std::span<RawToken>(raw_.data() + seg_start_, raw_.size() - seg_start_),
        next_sentence_, options_.abbreviations);
  }

  void tokenize(std::string_view line, std::size_t base) {
    std::size_t i = 0;
    while (i < line.size()) {
      const char c = line[i];
      last_offset_ = base + i;
      if (c == ' ' || c == '\t' || c == '\r') {
        ++i;
      } else if (c == '*') {
        emphasis_ = !emphasis_;
        ++i;
      } else if (text::is_word_byte(c)) {
        std::size_t j = i + 1;
        while (j < line.size()) {
          if (text::is_word_byte(line[j])) {
            ++j;
          } else if ((line[j] == '-' || line[j] == '\'' || line[j] == '.') &&
                     j + 1 < line.size() && text::is_word_byte(line[j + 1])) {
            j += 2;
          } else {
            break;
          }
        }
        push(line.substr(i, j - i), base + i);
        i = j;
      } else {
        push(line.substr(i, 1), base + i);
        ++i;
      }
    }
  }

  void push(std::string_view surface, std::size_t offset) {
    raw_.push_back(RawToken{std::string(surface), offset, emphasis_, 0});
  }

  const IngestOptions& options_;
  const TagLexicon& lexicon_;
  Document doc_;
  std::vector<RawToken> raw_;
  bool open_ = false;
  SegmentKind kind_ = SegmentKind::kParagraph;
  int depth_ = 0;
  std::size_t seg_start_ = 0;
  bool emphasis_ = false;
  int next_sentence_ = 0;
  std::size_t last_offset_ = 0;
};

}  // namespace detail

// Markup: U+000C page breaks, leading '#' headings (count = depth), blank
// lines between paragraphs, *...* emphasis.
inline Document ingest_plain_text(std::string_view source,
                                  const IngestOptions& options = {},
                                  const TagLexicon& lexicon =
                                      TagLexicon::core_english()) {
  return detail::PlainTextBuilder(options, lexicon).build(source);
}

// One token per line as surface<TAB>lemma<TAB>pos[<TAB>flags]. Flags: 'E'
// marks emphasis, '@n' pins the character offset, '-' means none.
// Directives: "##PAGE n" and "##SEG heading|paragraph depth".
inline Document ingest_tagged(std::string_view source,
                              const IngestOptions& options = {}) {
  Document doc;
  doc.id = options.document_id;
  doc.language = options.language;
  std::optional<int> page_number;
  std::size_t page_start = 0;
  bool seg_open = false;
  SegmentKind seg_kind = SegmentKind::kParagraph;
  int seg_depth = 0;
  std::size_t seg_start = 0;
  std::size_t next_offset = 0;
  std::optional<std::size_t> last_offset;

  auto close_segment = [&] {
    if (seg_open && doc.tokens.size() > seg_start) {
      Segment seg;
      seg.id = static_cast<int>(doc.segments.size());
      seg.kind = seg_kind;
      seg.depth = seg_depth;
      seg.token_span = {seg_start, doc.tokens.size()};
      doc.segments.push_back(seg);
    }
    seg_open = false;
  };
  auto close_page = [&] {
    close_segment();
    if (page_number) {
      doc.pages.push_back(Page{*page_number, {page_start, doc.tokens.size()}});
    }
  };

  std::size_t line_no = 0;
  for (const auto& raw_line : text::split(source, '\n')) {
    ++line_no;
    std::string_view line = raw_line;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no);
    if (text::starts_with(line, "##")) {
      const auto parts = text::split_words(line);
      if (parts[0] == "##PAGE") {
        int n = 0;
        try {
          if (parts.size() != 2) throw std::invalid_argument("arity");
          std::size_t used = 0;
          n = std::stoi(parts[1], &used);
          if (used != parts[1].size()) throw std::invalid_argument("junk");
        } catch (const std::exception&) {
          throw Error(ErrorCode::kBadDirective, where + ": expected ##PAGE <n>");
        }
        if (n < 1 || (page_number && n <= *page_number)) {
          throw Error(ErrorCode::kBadDirective,
                      where + ": page numbers must be positive and increasing");
        }
        close_page();
        page_number = n;
        page_start = doc.tokens.size();
      } else if (parts[0] == "##SEG") {
        if (parts.size() != 3 ||
            (parts[1] != "heading" && parts[1] != "paragraph")) {
          throw Error(ErrorCode::kBadDirective,
                      where + ": expected ##SEG heading|paragraph <depth>");
        }
        int depth = -1;
        try {
          depth = std::stoi(parts[2]);
        } catch (const std::exception&) {
        }
        const bool heading = parts[1] == "heading";
        if ((heading && depth < 1) || (!heading && depth != 0)) {
          throw Error(ErrorCode::kBadDirective, where + ": bad segment depth");
        }
        close_segment();
        seg_open = true;
        seg_kind = heading ? SegmentKind::kHeading : SegmentKind::kParagraph;
        seg_depth = depth;
        seg_start = doc.tokens.size();
      } else {
        throw Error(ErrorCode::kBadDirective,
                    where + ": unknown directive " + parts[0]);
      }
      continue;
    }

    const auto cols = text::split(line, '\t');
    if (cols.size() < 3 || cols.size() > 4 || cols[0].empty()) {
      throw Error(ErrorCode::kBadColumnCount,
                  where + ": expected 3 or 4 tab-separated columns, got " +
                      std::to_string(cols.size()));
    }
    if (!page_number) {
      page_number = options.first_page;
      page_start = doc.tokens.size();
    }
    if (!seg_open) {
      seg_open = true;
      seg_kind = SegmentKind::kParagraph;
      seg_depth = 0;
      seg_start = doc.tokens.size();
    }
    Token t;
    t.surface = cols[0];
    t.lemma = cols[1].empty() ? text::to_lower(cols[0]) : cols[1];
    t.pos = parse_pos(cols[2]);
    std::optional<std::size_t> offset;
    if (cols.size() == 4) {
      const std::string& flags = cols[3];
      for (std::size_t i = 0; i < flags.size(); ++i) {
        if (flags[i] == 'E') {
          t.emphasis = true;
        } else if (flags[i] == '-') {
        } else if (flags[i] == '@') {
          std::size_t j = i + 1;
          while (j < flags.size() && text::is_ascii_digit(flags[j])) ++j;
          if (j == i + 1) {
            throw Error(ErrorCode::kBadDirective, where + ": '@' without offset");
          }
          offset = std::stoull(flags.substr(i + 1, j - i - 1));
          i = j - 1;
        } else {
          throw Error(ErrorCode::kBadDirective,
                      where + ": unknown flag '" + std::string(1, flags[i]) + "'");
        }
      }
    }
    t.char_offset = offset.value_or(next_offset);
    if (last_offset && t.char_offset <= *last_offset) {
      throw Error(ErrorCode::kBadDirective,
                  where + ": character offsets must increase");
    }
    last_offset = t.char_offset;
    next_offset = t.char_offset + t.surface.size() + 1;
    doc.tokens.push_back(std::move(t));
  }
  close_page();
  if (doc.tokens.empty()) throw Error(ErrorCode::kEmptyDocument, "no tokens");

  int next_sentence = 0;
  for (const auto& seg : doc.segments) {
    next_sentence = detail::split_sentences(
        std::span<Token>(doc.tokens.data() + seg.token_span.begin,
                         seg.token_span.size()),
        next_sentence, options.abbreviations);
  }
  detail::link_segment_groups(doc);
  return doc;
}

// Inverse of ingest_tagged; offsets are pinned so the round trip is exact.
inline std::string write_tagged(const Document& doc) {
  std::string out;
  for (const auto& page : doc.pages) {
    out += "##PAGE " + std::to_string(page.number) + "\n";
    for (const auto& seg : doc.segments) {
      if (seg.token_span.begin < page.token_span.begin ||
          seg.token_span.begin >= page.token_span.end) {
        continue;
      }
      out += seg.kind == SegmentKind::kHeading ? "##SEG heading " : "##SEG paragraph ";
      out += std::to_string(seg.depth) + "\n";
      for (std::size_t i = seg.token_span.begin; i < seg.token_span.end; ++i) {
        const Token& t = doc.tokens[i];
        out += t.surface + "\t" + t.lemma + "\t" + std::string(pos_name(t.pos)) +
               "\t" + (t.emphasis ? "E" : "") + "@" +
               std::to_string(t.char_offset) + "\n";
      }
    }
  }
  return out;
}

}  // namespace folio
