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


#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "folio/corpus.hpp"

namespace folio {
namespace {

void expect_tiling(const Document& doc) {
  std::size_t cursor = 0;
  int last_page = 0;
  for (const auto& p : doc.pages) {
    EXPECT_EQ(p.token_span.begin, cursor);
    EXPECT_GT(p.number, last_page);
    last_page = p.number;
    cursor = p.token_span.end;
  }
  EXPECT_EQ(cursor, doc.tokens.size());
  cursor = 0;
  for (std::size_t i = 0; i < doc.segments.size(); ++i) {
    const auto& s = doc.segments[i];
    EXPECT_EQ(s.id, static_cast<int>(i));
    EXPECT_EQ(s.token_span.begin, cursor);
    EXPECT_FALSE(s.token_span.empty());
    if (s.kind == SegmentKind::kHeading) {
      EXPECT_GE(s.depth, 1);
    } else {
      EXPECT_EQ(s.depth, 0);
    }
    cursor = s.token_span.end;
  }
  EXPECT_EQ(cursor, doc.tokens.size());
  for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
    EXPECT_FALSE(doc.tokens[i].lemma.empty());
    if (i > 0) {
      EXPECT_GT(doc.tokens[i].char_offset, doc.tokens[i - 1].char_offset);
      EXPECT_GE(doc.tokens[i].sentence_id, doc.tokens[i - 1].sentence_id);
    }
    // A token lies on one page and in one segment.
    EXPECT_TRUE(doc.page_of(i).token_span.contains(i));
    EXPECT_TRUE(doc.segment_of(i).token_span.contains(i));
  }
}

TEST(IngestPlainText, EmptyInputIsAnError) {
  try {
    ingest_plain_text("");
    FAIL() << "expected EmptyDocument";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyDocument);
  }
  EXPECT_THROW(ingest_plain_text("\f\n\f  \n"), Error);
}

TEST(IngestPlainText, HeadingParagraphsAndPages) {
  const Document doc = ingest_plain_text("# AI\nKnowledge is power.\fMore text.");
  ASSERT_EQ(doc.pages.size(), 2u);
  ASSERT_EQ(doc.segments.size(), 3u);
  EXPECT_EQ(doc.segments[0].kind, SegmentKind::kHeading);
  EXPECT_EQ(doc.segments[0].depth, 1);
  EXPECT_EQ(doc.segments[1].kind, SegmentKind::kParagraph);
  EXPECT_EQ(doc.segments[2].kind, SegmentKind::kParagraph);
  EXPECT_EQ(doc.segments[1].group, 0);
  EXPECT_EQ(doc.segments[0].title_of, 0);
  EXPECT_EQ(doc.pages[0].number, 1);
  EXPECT_EQ(doc.pages[1].number, 2);
  EXPECT_EQ(doc.tokens[0].surface, "AI");
  expect_tiling(doc);
}

TEST(IngestPlainText, EmphasisMarkersAreConsumed) {
  const Document doc = ingest_plain_text("Knowledge *representation* matters.");
  ASSERT_EQ(doc.tokens.size(), 4u);
  EXPECT_EQ(doc.tokens[1].surface, "representation");
  EXPECT_TRUE(doc.tokens[1].emphasis);
  EXPECT_FALSE(doc.tokens[0].emphasis);
  EXPECT_FALSE(doc.tokens[2].emphasis);
}

TEST(IngestPlainText, UnbalancedEmphasis) {
  try {
    ingest_plain_text("Knowledge *representation matters.\n\nNext paragraph.");
    FAIL() << "expected MalformedMarker";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMalformedMarker);
  }
}

TEST(IngestPlainText, FirstPageIsConfigurable) {
  IngestOptions options;
  options.first_page = 17;
  const Document doc = ingest_plain_text("One.\fTwo.\fThree.", options);
  ASSERT_EQ(doc.pages.size(), 3u);
  EXPECT_EQ(doc.pages[0].number, 17);
  EXPECT_EQ(doc.pages[2].number, 19);
}

TEST(IngestPlainText, SentenceSplittingHonoursAbbreviations) {
  const Document doc =
      ingest_plain_text("Frames are useful, e.g. Scripts use them. Rules differ! Logic too.");
  std::vector<int> starts;
  for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
    if (i == 0 || doc.tokens[i].sentence_id != doc.tokens[i - 1].sentence_id) {
      starts.push_back(static_cast<int>(i));
    }
  }
  ASSERT_EQ(starts.size(), 3u);
  EXPECT_EQ(doc.tokens[starts[1]].surface, "Rules");
  EXPECT_EQ(doc.tokens[starts[2]].surface, "Logic");
}

TEST(IngestPlainText, HyphenAndApostropheStayInsideWords) {
  const Document doc = ingest_plain_text("A so-called expert's rule.");
  std::vector<std::string> surfaces;
  for (const auto& t : doc.tokens) surfaces.push_back(t.surface);
  EXPECT_EQ(surfaces, (std::vector<std::string>{"A", "so-called", "expert's", "rule", "."}));
}

TEST(TagTokens, LexiconHit) {
  TagLexicon lex;
  lex.add("the", "the", PosTag::kDet);
  const std::vector<RawToken> raw{{"the", 0, false, 0}};
  const auto tagged = tag_tokens(raw, lex);
  EXPECT_EQ(tagged[0].pos, PosTag::kDet);
}

TEST(TagTokens, CapitalizedUnknownMidSentenceIsProperNoun) {
  const std::vector<RawToken> raw{{"We", 0, false, 0}, {"use", 3, false, 0},
                                  {"Zorblax", 7, false, 0}};
  const auto tagged = tag_tokens(raw, TagLexicon::core_english());
  EXPECT_EQ(tagged[2].pos, PosTag::kPropn);
  EXPECT_EQ(tagged[2].lemma, "zorblax");
}

TEST(TagTokens, NominalSuffix) {
  const std::vector<RawToken> raw{{"representation", 0, false, 0}};
  const auto tagged = tag_tokens(raw, TagLexicon{});
  EXPECT_EQ(tagged[0].pos, PosTag::kNoun);
  const std::vector<RawToken> plural{{"visualizations", 0, false, 0}};
  const auto p = tag_tokens(plural, TagLexicon{});
  EXPECT_EQ(p[0].pos, PosTag::kNoun);
  EXPECT_EQ(p[0].lemma, "visualization");
}

TEST(TagTokens, UnknownWordIsOther) {
  const std::vector<RawToken> raw{{"blorp", 0, false, 0}};
  EXPECT_EQ(tag_tokens(raw, TagLexicon{})[0].pos, PosTag::kOther);
}

TEST(TagLexicon, ParsesTsvAndRejectsBadRows) {
  const auto lex = TagLexicon::parse("# comment\nFrames\tframe\tNOUN\nfoo\tfoo\tWEIRD\n", "lex");
  ASSERT_NE(lex.find("frames"), nullptr);
  EXPECT_EQ(lex.find("frames")->lemma, "frame");
  EXPECT_EQ(lex.find("foo")->pos, PosTag::kOther);
  EXPECT_THROW(TagLexicon::parse("onlyone\n", "lex"), Error);
}

TEST(IngestTagged, ThreeTokenFixture) {
  const Document doc = ingest_tagged(
      "##PAGE 1\n##SEG paragraph 0\nKnowledge\tknowledge\tNOUN\n"
      "representation\trepresentation\tNOUN\n.\t.\tPUNCT\n");
  EXPECT_EQ(doc.tokens.size(), 3u);
  EXPECT_EQ(doc.pages.size(), 1u);
  EXPECT_EQ(doc.segments.size(), 1u);
  expect_tiling(doc);
}

TEST(IngestTagged, Errors) {
  auto code_of = [](const std::string& src) {
    try {
      ingest_tagged(src);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kIoError;
  };
  EXPECT_EQ(code_of("##PAGE 1\n"), ErrorCode::kEmptyDocument);
  EXPECT_EQ(code_of("##PAGE 1\nKnowledge\tknowledge\n"), ErrorCode::kBadColumnCount);
  EXPECT_EQ(code_of("##PAGES 1\nKnowledge\tknowledge\tNOUN\n"), ErrorCode::kBadDirective);
  EXPECT_EQ(code_of("##PAGE 2\na\ta\tDET\n##PAGE 1\nb\tb\tDET\n"), ErrorCode::kBadDirective);
  EXPECT_EQ(code_of("##SEG chapter 1\na\ta\tDET\n"), ErrorCode::kBadDirective);
}

TEST(IngestTagged, ColumnErrorNamesTheLine) {
  try {
    ingest_tagged("##PAGE 1\nKnowledge\tknowledge\tNOUN\nbad\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("3"), std::string::npos) << e.what();
  }
}

TEST(IngestTagged, UnknownTagMapsToOther) {
  const Document doc = ingest_tagged("Knowledge\tknowledge\tXYZ\n");
  EXPECT_EQ(doc.tokens[0].pos, PosTag::kOther);
}

TEST(IngestTagged, RoundTripIsExact) {
  const Document doc = ingest_plain_text(
      "# Knowledge acquisition\n\n*Knowledge acquisition* is hard. Experts help.\n\n"
      "Frames, scripts and rules.\f## Notes\nMore text on page two.");
  const Document again = ingest_tagged(write_tagged(doc), IngestOptions{doc.id});
  EXPECT_EQ(doc, again);
}

// Random marker placement: tiling invariants and tagged round trip.
TEST(IngestProperty, RandomMarkupKeepsInvariants) {
  std::mt19937 rng(20261015);
  const std::vector<std::string> words = {"knowledge", "Frames", "AI", "of", "the",
                                          "systems",   "rule",   "is", "and", "Expert"};
  for (int round = 0; round < 300; ++round) {
    std::string src;
    bool emph = false;
    const int n = 1 + static_cast<int>(rng() % 40);
    bool line_start = true;
    for (int i = 0; i < n; ++i) {
      const int r = static_cast<int>(rng() % 20);
      if (r == 0 && !emph) {
        src += "\f";
        line_start = true;
      } else if (r == 1 && !emph) {
        src += "\n\n";
        line_start = true;
      } else if (r == 2 && line_start && !emph) {
        src += std::string(1 + rng() % 3, '#') + " ";
      } else if (r == 3) {
        src += emph ? "* " : " *";
        emph = !emph;
      } else if (r == 4) {
        src += ". ";
      }
      if (r == 2 && line_start) {
        src += words[rng() % words.size()] + "\n";
        continue;
      }
      src += words[rng() % words.size()];
      src += (rng() % 5 == 0) ? ", " : " ";
      line_start = false;
    }
    if (emph) src += "*";
    Document doc;
    try {
      doc = ingest_plain_text(src);
    } catch (const Error& e) {
      ADD_FAILURE() << e.what() << " for input:\n" << src;
      continue;
    }
    expect_tiling(doc);
    EXPECT_EQ(ingest_tagged(write_tagged(doc), IngestOptions{doc.id}), doc) << src;
    EXPECT_EQ(ingest_plain_text(src), doc);
  }
}

}  // namespace
}  // namespace folio
