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


#include <filesystem>
#include <fstream>
#include <memory>
#include <string>

#include <gtest/gtest.h>
#include <httplib.h>

#include "folio/pipeline.hpp"
#include "folio/service.hpp"

namespace folio {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

const DraftIndex& fixture_draft() {
  static const DraftIndex draft =
      run_pipeline(load_config(std::string(FOLIO_DATA_DIR) + "/fixture/folio.conf")).draft;
  return draft;
}

TermId id_of(const std::string& canonical) {
  for (const auto& t : fixture_draft().terms) {
    if (t.canonical == canonical) return t.id;
  }
  ADD_FAILURE() << "no term " << canonical;
  return -1;
}

std::string decision_body(const char* kind, TermId id, const char* action,
                          const char* payload = nullptr, const char* document = nullptr) {
  Json j{{"subject_kind", kind}, {"subject_id", id}, {"action", action}, {"author", "ana"}};
  if (payload) j["payload"] = payload;
  if (document) j["document_id"] = document;
  return j.dump();
}

class Served : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("folio-svc-" +
            std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    start();
  }
  void TearDown() override {
    stop();
    fs::remove_all(dir_);
  }

  std::string log_path() const { return (dir_ / "draft.json.decisions.jsonl").string(); }

  void start() {
    session_ = std::make_unique<ValidationSession>(fixture_draft(), log_path());
    server_ = std::make_unique<ValidationServer>(*session_);
    port_ = server_->bind("127.0.0.1", 0);
    server_->start_background();
    client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
  }
  void stop() {
    client_.reset();
    if (server_) server_->stop();
    server_.reset();
    session_.reset();
  }

  httplib::Result get(const std::string& path) { return client_->Get(path); }
  httplib::Result post(const std::string& body) {
    return client_->Post("/decisions", body, "application/json");
  }

  fs::path dir_;
  std::unique_ptr<ValidationSession> session_;
  std::unique_ptr<ValidationServer> server_;
  std::unique_ptr<httplib::Client> client_;
  int port_ = 0;
};

TEST_F(Served, EntriesInRankOrder) {
  auto res = get("/entries?page_size=5");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(res->get_header_value(kSchemaHeader), "1");
  const auto j = Json::parse(res->body);
  ASSERT_EQ(j["entries"].size(), 5u);
  const auto& ranking = fixture_draft().ranking.entries;
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_EQ(j["entries"][i]["term_id"], ranking[i].term_id);
    EXPECT_EQ(j["entries"][i]["rank"], i + 1);
    EXPECT_EQ(j["entries"][i]["state"], "undecided");
  }
  EXPECT_EQ(j["total"], ranking.size());
  EXPECT_EQ(j["summary"]["document_id"], "knowledge-primer");
}

TEST_F(Served, EntriesFilteringAndPaging) {
  auto j = Json::parse(get("/entries?filter=rejected")->body);
  EXPECT_TRUE(j["entries"].empty());
  EXPECT_EQ(j["total"], 0);
  j = Json::parse(get("/entries?page=99")->body);
  EXPECT_TRUE(j["entries"].empty());
  for (const char* bad : {"/entries?page=-1", "/entries?page_size=0", "/entries?page_size=5000",
                          "/entries?page=x", "/entries?filter=maybe"}) {
    EXPECT_EQ(get(bad)->status, 400) << bad;
  }
}

TEST_F(Served, TermDetail) {
  auto res = get("/terms/" + std::to_string(id_of("knowledge")));
  ASSERT_EQ(res->status, 200);
  const auto j = Json::parse(res->body);
  EXPECT_EQ(j["term"]["canonical"], "knowledge");
  bool found = false;
  for (const auto& r : j["relations"]) {
    found = found || (r["kind"] == "hypernymy" && r["source_canonical"] == "knowledge" &&
                      r["target_canonical"] == "knowledge representation");
  }
  EXPECT_TRUE(found) << j["relations"].dump();
  EXPECT_FALSE(j["segment_previews"].empty());
  EXPECT_EQ(get("/terms/99999")->status, 404);
  EXPECT_EQ(Json::parse(get("/terms/99999")->body)["error"], "UnknownTerm");
}

TEST_F(Served, DecisionsAndErrors) {
  const TermId k = id_of("knowledge");
  auto res = post(decision_body("term", k, "reject"));
  ASSERT_EQ(res->status, 200) << res->body;
  auto j = Json::parse(res->body);
  EXPECT_EQ(j["decisions"], 1);
  EXPECT_EQ(j["tallies"]["rejected"], 1);

  EXPECT_EQ(post(decision_body("term", 99999, "accept"))->status, 404);
  EXPECT_EQ(post(decision_body("term", k, "accept", nullptr, "other-book"))->status, 409);
  EXPECT_EQ(post(decision_body("term", k, "relabel"))->status, 422);
  EXPECT_EQ(post(decision_body("term", k, "explode"))->status, 422);
  EXPECT_EQ(post("{not json")->status, 400);

  const TermId ai = id_of("ai");
  ASSERT_EQ(post(decision_body("term", ai, "relabel", "A.I."))->status, 200);
  ASSERT_EQ(post(decision_body("term", ai, "relabel", "Art. Int."))->status, 200);
  const auto text = get("/export?format=text")->body;
  EXPECT_NE(text.find("Art. Int. see Artificial Intelligence"), std::string::npos) << text;
  EXPECT_EQ(text.find("A.I. see"), std::string::npos);
  j = Json::parse(get("/entries?filter=rejected")->body);
  ASSERT_EQ(j["entries"].size(), 1u);
  EXPECT_EQ(j["entries"][0]["term_id"], k);
}

TEST_F(Served, ExportFormats) {
  auto res = get("/export");
  ASSERT_EQ(res->status, 200);
  const DraftIndex exported = import_interchange(res->body);
  EXPECT_EQ(exported, apply_validation_decisions(fixture_draft(), {}));
  EXPECT_EQ(exported.status, IndexStatus::kValidated);
  EXPECT_EQ(get("/export?format=text")->body, render_text(fixture_draft()));
  EXPECT_EQ(get("/export?format=print")->body, render_print(fixture_draft()));
  res = get("/export?format=docx");
  EXPECT_EQ(res->status, 400);
  EXPECT_EQ(Json::parse(res->body)["error"], "UnknownFormat");
}

TEST_F(Served, RestartReplaysLog) {
  ASSERT_EQ(post(decision_body("term", id_of("knowledge"), "reject"))->status, 200);
  ASSERT_EQ(post(decision_body("term", id_of("frame"), "accept"))->status, 200);
  const auto before = get("/export")->body;
  stop();
  start();
  EXPECT_EQ(get("/export")->body, before);
  EXPECT_EQ(Json::parse(get("/entries")->body)["summary"]["decisions"], 2);
}

TEST_F(Served, CorruptLogRefusesToStart) {
  ASSERT_EQ(post(decision_body("term", id_of("knowledge"), "reject"))->status, 200);
  stop();
  {
    std::ofstream out(log_path(), std::ios::app);
    out << "{\"subject_kind\": \"term\", \"subj";
  }
  try {
    ValidationSession s(fixture_draft(), log_path());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kCorruptDecisionLog);
    EXPECT_NE(std::string(e.what()).find(":2:"), std::string::npos) << e.what();
  }
  {
    std::ofstream out(log_path(), std::ios::trunc);
    out << decision_body("term", 99999, "accept") << "\n";
  }
  try {
    ValidationSession s(fixture_draft(), log_path());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kCorruptDecisionLog);
  }
  fs::remove(log_path());
  start();
}

TEST_F(Served, PortInUse) {
  ValidationSession other(fixture_draft(), std::nullopt);
  ValidationServer second(other);
  try {
    second.bind("127.0.0.1", port_);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kPortInUse);
  }
}

}  // namespace
}  // namespace folio
