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

#include <sys/socket.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "folio/index.hpp"
#include "folio/interchange.hpp"

namespace folio {

inline constexpr int kApiSchemaVersion = 1;
inline constexpr const char* kSchemaHeader = "X-Folio-Schema-Version";

inline std::string decision_log_path(const std::string& draft_path) {
  return draft_path + ".decisions.jsonl";
}

// Append-only file of decisions, one JSON object per line.
class DecisionLog {
 public:
  explicit DecisionLog(std::string path) : path_(std::move(path)) {}

  const std::string& path() const { return path_; }

  std::vector<Decision> replay() const {
    std::vector<Decision> out;
    if (!std::filesystem::exists(path_)) return out;
    const std::string content = text::read_file(path_);
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < content.size()) {
      ++line_no;
      const auto nl = content.find('\n', pos);
      const auto line = content.substr(pos, nl == std::string::npos ? std::string::npos : nl - pos);
      const auto fail = [&](const std::string& why) {
        throw Error(ErrorCode::kCorruptDecisionLog,
                    path_ + ":" + std::to_string(line_no) + ": " + why);
      };
      if (nl == std::string::npos) fail("truncated record");
      pos = nl + 1;
      if (text::trim(line).empty()) continue;
      try {
        out.push_back(interchange::decision_from(nlohmann::ordered_json::parse(line)));
      } catch (const nlohmann::json::exception& e) {
        fail(e.what());
      } catch (const Error& e) {
        fail(e.what());
      }
    }
    return out;
  }

  void append(const Decision& d) {
    std::ofstream out(path_, std::ios::app | std::ios::binary);
    out << interchange::to_json(d).dump() << '\n';
    out.flush();
    if (!out) throw Error(ErrorCode::kIoError, "cannot append to " + path_);
  }

 private:
  std::string path_;
};

struct SessionSnapshot {
  std::vector<Decision> log;
  DraftIndex final_index;  // draft with the log applied
};

// One draft plus its decision log. Readers get immutable snapshots; writers
// are serialized so log order equals application order.
class ValidationSession {
 public:
  ValidationSession(DraftIndex draft, std::optional<std::string> log_path)
      : draft_(std::move(draft)) {
    std::vector<Decision> log;
    if (log_path) {
      log_.emplace(*log_path);
      log = log_->replay();
    }
    try {
      install(std::move(log));
    } catch (const Error& e) {
      if (!log_) throw;
      throw Error(ErrorCode::kCorruptDecisionLog,
                  log_->path() + ": replay failed: " + e.what());
    }
  }

  const DraftIndex& draft() const { return draft_; }

  std::shared_ptr<const SessionSnapshot> snapshot() const {
    std::shared_lock lock(snapshot_mutex_);
    return snapshot_;
  }

  // Validates against the current state, appends to the log, publishes.
  std::shared_ptr<const SessionSnapshot> post(Decision d) {
    std::lock_guard writer(write_mutex_);
    if (d.document_id.empty()) d.document_id = draft_.document_id;
    if (d.timestamp == 0) {
      d.timestamp = std::chrono::duration_cast<std::chrono::seconds>(
                        std::chrono::system_clock::now().time_since_epoch())
                        .count();
    }
    auto next = std::make_shared<SessionSnapshot>();
    next->log = snapshot()->log;
    next->log.push_back(d);
    next->final_index = apply_validation_decisions(draft_, next->log);
    if (log_) log_->append(d);
    std::unique_lock lock(snapshot_mutex_);
    snapshot_ = next;
    return next;
  }

 private:
  void install(std::vector<Decision> log) {
    auto snap = std::make_shared<SessionSnapshot>();
    snap->final_index = apply_validation_decisions(draft_, log);
    snap->log = std::move(log);
    snapshot_ = std::move(snap);
  }

  DraftIndex draft_;
  std::optional<DecisionLog> log_;
  mutable std::shared_mutex snapshot_mutex_;
  std::mutex write_mutex_;
  std::shared_ptr<const SessionSnapshot> snapshot_;
};

namespace api {

using Json = nlohmann::ordered_json;

inline int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnknownSubject: return 404;
    case ErrorCode::kStaleDraft: return 409;
    case ErrorCode::kInvalidDecision: return 422;
    default: return 400;
  }
}

inline Json tallies(const DraftIndex& index) {
  int undecided = 0;
  int accepted = 0;
  int rejected = 0;
  for (const auto& t : index.terms) {
    (t.state == DecisionState::kAccepted   ? accepted
     : t.state == DecisionState::kRejected ? rejected
                                           : undecided)++;
  }
  return Json{{"undecided", undecided}, {"accepted", accepted}, {"rejected", rejected}};
}

inline Json summary(const SessionSnapshot& snap, const DraftIndex& draft) {
  return Json{{"document_id", draft.document_id},
              {"terms", draft.terms.size()},
              {"relations", draft.relations.size()},
              {"budget", draft.budget},
              {"decisions", snap.log.size()},
              {"tallies", tallies(snap.final_index)}};
}

inline std::optional<long> parse_long(const std::string& s) {
  try {
    std::size_t used = 0;
    const long v = std::stol(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  return std::nullopt;
}

inline Json list_entries(const SessionSnapshot& snap, const DraftIndex& draft, long page,
                         long page_size, const std::string& filter) {
  const DraftIndex& index = snap.final_index;
  Json items = Json::array();
  long matched = 0;
  std::size_t rank = 0;
  for (const auto& e : draft.ranking.entries) {
    ++rank;
    const TermRecord* t = index.find_term(e.term_id);
    if (t == nullptr) continue;
    if (filter != "all" && state_name(t->state) != filter) continue;
    if (matched >= page * page_size && matched < (page + 1) * page_size) {
      items.push_back(Json{{"rank", rank},
                           {"term_id", t->id},
                           {"canonical", t->canonical},
                           {"label", t->label},
                           {"state", state_name(t->state)},
                           {"parent", interchange::optional_id(t->parent)},
                           {"see", interchange::optional_id(t->see)},
                           {"score", interchange::to_json(e.score)}});
    }
    ++matched;
  }
  Json j{{"summary", summary(snap, draft)},
         {"page", page},
         {"page_size", page_size},
         {"filter", filter},
         {"total", matched}};
  j["entries"] = std::move(items);
  return j;
}

inline std::optional<Json> term_detail(const SessionSnapshot& snap, TermId id) {
  const DraftIndex& index = snap.final_index;
  const TermRecord* t = index.find_term(id);
  if (t == nullptr) return std::nullopt;
  Json j{{"term", interchange::to_json(*t)}};
  Json rels = Json::array();
  for (const auto& r : index.relations) {
    if (r.relation.source_id != id && r.relation.target_id != id) continue;
    Json rj{{"id", r.id}};
    rj.update(interchange::to_json(r.relation));
    rj["state"] = state_name(r.state);
    rj["source_canonical"] = index.find_term(r.relation.source_id)->canonical;
    rj["target_canonical"] = index.find_term(r.relation.target_id)->canonical;
    rels.push_back(std::move(rj));
  }
  j["relations"] = std::move(rels);
  Json previews = Json::array();
  for (const auto& s : t->segment_refs) {
    previews.push_back(Json{{"segment_id", s.ref.segment_id},
                            {"score", s.ref.score},
                            {"preview", s.preview}});
  }
  j["segment_previews"] = std::move(previews);
  return j;
}

}  // namespace api

// HTTP front of a ValidationSession.
class ValidationServer {
 public:
  explicit ValidationServer(ValidationSession& session,
                            std::optional<std::string> static_dir = std::nullopt)
      : session_(session) {
    server_.set_socket_options([](socket_t sock) {
      int yes = 1;
      setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
    });
    server_.set_default_headers({{kSchemaHeader, std::to_string(kApiSchemaVersion)}});
    if (static_dir) server_.set_mount_point("/", *static_dir);
    routes();
  }

  ~ValidationServer() { stop(); }

  // Port 0 picks a free port. Returns the bound port.
  int bind(const std::string& host, int port) {
    if (port == 0) {
      port_ = server_.bind_to_any_port(host);
      if (port_ < 0) throw Error(ErrorCode::kPortInUse, "no free port on " + host);
    } else {
      if (!server_.bind_to_port(host, port)) {
        throw Error(ErrorCode::kPortInUse, host + ":" + std::to_string(port));
      }
      port_ = port;
    }
    return port_;
  }

  void serve() { server_.listen_after_bind(); }

  void start_background() {
    thread_ = std::thread([this] { serve(); });
    server_.wait_until_ready();
  }

  void stop() {
    server_.stop();
    if (thread_.joinable()) thread_.join();
  }

  int port() const { return port_; }

 private:
  static void send_json(httplib::Response& res, const api::Json& body, int status = 200) {
    res.status = status;
    res.set_content(body.dump(2) + "\n", "application/json");
  }

  static void send_error(httplib::Response& res, int status, const std::string& name,
                         const std::string& detail) {
    send_json(res, api::Json{{"error", name}, {"detail", detail}}, status);
  }

  void routes() {
    server_.Get("/entries", [this](const httplib::Request& req, httplib::Response& res) {
      const auto param = [&](const char* key, const char* fallback) {
        return req.has_param(key) ? req.get_param_value(key) : std::string(fallback);
      };
      const auto page = api::parse_long(param("page", "0"));
      const auto size = api::parse_long(param("page_size", "50"));
      const std::string filter = param("filter", "all");
      if (!page || !size || *page < 0 || *size < 1 || *size > 1000) {
        return send_error(res, 400, "BadRequest", "page must be >= 0, page_size in [1, 1000]");
      }
      if (filter != "all" && filter != "undecided" && filter != "accepted" &&
          filter != "rejected") {
        return send_error(res, 400, "BadRequest", "unknown filter '" + filter + "'");
      }
      const auto snap = session_.snapshot();
      send_json(res, api::list_entries(*snap, session_.draft(), *page, *size, filter));
    });

    server_.Get(R"(/terms/(-?\d+))", [this](const httplib::Request& req, httplib::Response& res) {
      const auto id = api::parse_long(req.matches[1]);
      const auto snap = session_.snapshot();
      const auto detail = id ? api::term_detail(*snap, static_cast<TermId>(*id)) : std::nullopt;
      if (!detail) return send_error(res, 404, "UnknownTerm", "no term " + req.matches[1].str());
      send_json(res, *detail);
    });

    server_.Post("/decisions", [this](const httplib::Request& req, httplib::Response& res) {
      Decision d;
      try {
        d = interchange::decision_from(api::Json::parse(req.body));
      } catch (const nlohmann::json::exception& e) {
        return send_error(res, 400, "MalformedDocument", e.what());
      } catch (const Error& e) {
        const int status = e.code() == ErrorCode::kInvalidDecision ? 422 : 400;
        return send_error(res, status, std::string(e.name()), e.what());
      }
      try {
        const auto snap = session_.post(d);
        send_json(res, api::Json{{"accepted", true},
                                 {"decisions", snap->log.size()},
                                 {"tallies", api::tallies(snap->final_index)}});
      } catch (const Error& e) {
        send_error(res, api::http_status(e.code()), std::string(e.name()), e.what());
      }
    });

    server_.Get("/export", [this](const httplib::Request& req, httplib::Response& res) {
      const std::string format =
          req.has_param("format") ? req.get_param_value("format") : "interchange";
      const auto snap = session_.snapshot();
      if (format == "interchange") {
        res.set_content(export_interchange(snap->final_index), "application/json");
      } else if (format == "text") {
        res.set_content(render_text(snap->final_index), "text/plain; charset=utf-8");
      } else if (format == "print") {
        res.set_content(render_print(snap->final_index), "text/plain; charset=utf-8");
      } else {
        send_error(res, 400, "UnknownFormat", "format must be interchange, text or print");
      }
    });
  }

  ValidationSession& session_;
  httplib::Server server_;
  std::thread thread_;
  int port_ = -1;
};

}  // namespace folio
