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


#include <chrono>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "folio/cli.hpp"
#include "support.hpp"

namespace folio {
namespace {

namespace fs = std::filesystem;

const std::string kData = FOLIO_DATA_DIR;
const std::string kGolden = FOLIO_GOLDEN_DIR;

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run cli_run(std::vector<std::string> args) {
  args.insert(args.begin(), "folio");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Run r;
  r.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

class Workdir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("folio-" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string at(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(Workdir, FixtureMatchesGolden) {
  const auto r = cli_run({"build", "--config", kData + "/fixture/folio.conf", "--out",
                          at("fx"), "--print"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(text::read_file(at("fx.index.txt")), text::read_file(kGolden + "/fixture.index.txt"));
  EXPECT_EQ(text::read_file(at("fx.index.tex")), text::read_file(kGolden + "/fixture.index.tex"));
  EXPECT_NE(r.err.find("entries=24"), std::string::npos) << r.err;
  const DraftIndex d = import_interchange(text::read_file(at("fx.draft.json")));
  EXPECT_EQ(d.document_id, "knowledge-primer");
  EXPECT_EQ(render_text(d), text::read_file(at("fx.index.txt")));
}

TEST_F(Workdir, BuildIsDeterministic) {
  const std::string conf = kData + "/fixture/folio.conf";
  ASSERT_EQ(cli_run({"build", "--config", conf, "--out", at("a")}).code, 0);
  ASSERT_EQ(cli_run({"build", "--config", conf, "--out", at("b")}).code, 0);
  EXPECT_EQ(text::read_file(at("a.draft.json")), text::read_file(at("b.draft.json")));
  EXPECT_EQ(text::read_file(at("a.index.txt")), text::read_file(at("b.index.txt")));
}

TEST_F(Workdir, FlagsOverrideConfig) {
  const auto r = cli_run({"build", "--config", kData + "/fixture/folio.conf", "--max-entries",
                          "5", "--out", at("small")});
  ASSERT_EQ(r.code, 0) << r.err;
  const DraftIndex d = import_interchange(text::read_file(at("small.draft.json")));
  EXPECT_GE(d.terms.size(), 5u);
  EXPECT_LE(d.terms.size(), 8u);
}

TEST_F(Workdir, MissingInputFails) {
  const auto r = cli_run({"build", "--input", at("nope.txt"), "--out", at("x")});
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.err.find("error: IoError"), std::string::npos) << r.err;
  EXPECT_FALSE(fs::exists(at("x.draft.json")));
  EXPECT_NE(cli_run({"build", "--input", kData + "/fixture/knowledge.txt"}).code, 0);
  EXPECT_NE(cli_run({}).code, 0);
}

TEST_F(Workdir, ConfigErrors) {
  text::write_file(at("bad.conf"), "max_entries = 0\n");
  auto r = cli_run({"build", "--config", at("bad.conf"), "--input",
                    kData + "/fixture/knowledge.txt", "--out", at("x")});
  EXPECT_NE(r.err.find("error: BadConfig"), std::string::npos) << r.err;
  text::write_file(at("bad.conf"), "colour = blue\n");
  r = cli_run({"build", "--config", at("bad.conf"), "--out", at("x")});
  EXPECT_NE(r.err.find("error: BadConfig"), std::string::npos) << r.err;
  text::write_file(at("bad.conf"), "weights = 0.5, 0.5, 0.5, 0.5\n");
  r = cli_run({"build", "--config", at("bad.conf"), "--input", kData + "/fixture/knowledge.txt",
               "--out", at("x")});
  EXPECT_NE(r.err.find("error: BadWeights"), std::string::npos) << r.err;
  text::write_file(at("bad.rules"), "broken\n");
  r = cli_run({"build", "--input", kData + "/fixture/knowledge.txt", "--rules", at("bad.rules"),
               "--out", at("x")});
  EXPECT_NE(r.err.find("error: BadRule"), std::string::npos) << r.err;
}

TEST_F(Workdir, EvalAgainstTraditionalIndex) {
  ASSERT_EQ(cli_run({"build", "--config", kData + "/fixture/folio.conf", "--out", at("fx")}).code,
            0);
  const auto r = cli_run({"eval", "--draft", at("fx.draft.json"), "--reference",
                          at("fx.index.txt"), "--traditional",
                          kData + "/fixture/traditional.idx", "--input",
                          kData + "/fixture/knowledge.txt", "--label", "Zorblax"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("\tZorblax\n"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("Existence of an original manual index\tYes"), std::string::npos);
  EXPECT_NE(r.out.find("Precision of descriptor extraction – comparison 3\t100%"),
            std::string::npos)
      << r.out;
  EXPECT_NE(r.out.find("Size increase (# of descriptors) – comparison 1\t+"), std::string::npos)
      << r.out;

  const auto m = cli_run({"eval", "--draft", at("fx.draft.json"), "--reference",
                          at("fx.draft.json"), "--report", "machine"});
  ASSERT_EQ(m.code, 0) << m.err;
  const auto j = nlohmann::ordered_json::parse(m.out);
  EXPECT_EQ(j["format"], "folio-eval");

  const auto bad = cli_run({"eval", "--draft", at("fx.draft.json"), "--reference",
                            at("fx.draft.json"), "--report", "xml"});
  EXPECT_NE(bad.err.find("error: UnknownFormat"), std::string::npos);
}

TEST_F(Workdir, FixtureRunsQuickly) {
  const auto start = std::chrono::steady_clock::now();
  ASSERT_EQ(cli_run({"build", "--config", kData + "/fixture/folio.conf", "--out", at("t")}).code,
            0);
  const auto elapsed = std::chrono::steady_clock::now() - start;
  EXPECT_LT(std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count(), 5000);
}

TEST(PipelineProperty, StructuralInvariants) {
  const auto r = testing::pipeline_invariant_property(150, 5);
  EXPECT_TRUE(r.ok()) << r.failure;
  EXPECT_GT(r.interesting, 100);
}

}  // namespace
}  // namespace folio
