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

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "folio/eval.hpp"
#include "folio/interchange.hpp"
#include "folio/pipeline.hpp"
#include "folio/service.hpp"

namespace folio::cli {

struct BuildArgs {
  std::string input;
  std::string config;
  std::string rules;
  std::string synonyms;
  std::optional<std::size_t> max_entries;
  std::string out;
  bool print = false;
};

struct EvalArgs {
  std::string draft;
  std::string reference;
  std::string traditional;
  std::string input;
  std::optional<std::size_t> k;
  std::string report = "table";
  std::string label = "document";
  bool literal_subentries = false;
};

struct ServeArgs {
  std::string draft;
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string static_dir;
};

inline PipelineConfig build_config(const BuildArgs& a) {
  PipelineConfig config = a.config.empty() ? PipelineConfig{} : load_config(a.config);
  if (!a.input.empty()) config.input_path = a.input;
  if (!a.rules.empty()) config.rules_path = a.rules;
  if (!a.synonyms.empty()) config.synonyms_path = a.synonyms;
  if (a.max_entries) config.max_entries = *a.max_entries;
  if (!a.out.empty()) config.out_prefix = a.out;
  if (config.out_prefix.empty()) throw Error(ErrorCode::kBadConfig, "no output prefix (--out)");
  if (config.input_path.empty()) throw Error(ErrorCode::kBadConfig, "no input (--input)");
  config.validate();
  return config;
}

inline int cmd_build(const BuildArgs& a, std::ostream& err) {
  const PipelineConfig config = build_config(a);
  const PipelineResult r = run_pipeline(config);
  text::write_file(config.out_prefix + ".draft.json", export_interchange(r.draft));
  text::write_file(config.out_prefix + ".index.txt", render_text(r.draft));
  if (a.print) text::write_file(config.out_prefix + ".index.tex", render_print(r.draft));
  err << "terms=" << r.terms.size() << " relations=" << r.relations.size()
      << " entries=" << r.draft.terms.size() << "\n";
  return 0;
}

inline int cmd_eval(const EvalArgs& a, std::ostream& out) {
  if (a.report != "table" && a.report != "machine") {
    throw Error(ErrorCode::kUnknownFormat, "report must be table or machine");
  }
  ReferenceParseOptions ref_options;
  ref_options.compose_subentries = !a.literal_subentries;
  const CandidateIndex draft = load_candidate(text::read_file(a.draft), ref_options);
  ref_options.source_kind = IndexSource::kValidatedIndDoc;
  const ReferenceIndex validated = load_reference(text::read_file(a.reference), ref_options);
  std::optional<ReferenceIndex> traditional;
  if (!a.traditional.empty()) {
    ref_options.source_kind = IndexSource::kTraditionalManual;
    traditional = load_reference(text::read_file(a.traditional), ref_options);
  }
  EvalOptions options;
  options.k = a.k;
  options.label = a.label;
  if (!a.input.empty()) {
    options.corpus_words = word_occurrences(load_document(a.input, PipelineConfig{}));
  }
  const EvalReport report =
      evaluate(draft, validated, traditional ? &*traditional : nullptr, options);
  const std::vector<EvalReport> reports{report};
  out << (a.report == "table" ? compare_reports(reports) : export_reports(reports));
  return 0;
}

inline int cmd_serve(const ServeArgs& a, std::ostream& err) {
  ValidationSession session(import_interchange(text::read_file(a.draft)),
                            decision_log_path(a.draft));
  ValidationServer server(session, a.static_dir.empty() ? std::nullopt
                                                        : std::optional<std::string>(a.static_dir));
  const int port = server.bind(a.host, a.port);
  err << "serving " << a.draft << " on http://" << a.host << ":" << port << "\n";
  server.serve();
  return 0;
}

// Returns the process exit code. Errors go to `err` as "error: Name: detail".
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  CLI::App app{"Back-of-the-book index builder"};
  app.require_subcommand(1);

  BuildArgs build;
  auto* b = app.add_subcommand("build", "Build a draft index from a document");
  b->add_option("--input", build.input, "Document (.txt plain, .tagged pre-tagged)");
  b->add_option("--config", build.config, "key = value configuration file");
  b->add_option("--rules", build.rules, "Pattern rule file");
  b->add_option("--synonyms", build.synonyms, "Synonym dictionary");
  b->add_option("--max-entries", build.max_entries, "Editorial budget");
  b->add_option("--out", build.out, "Output prefix");
  b->add_flag("--print", build.print, "Also write the macro rendering");

  EvalArgs eval;
  auto* e = app.add_subcommand("eval", "Evaluate a draft against reference indexes");
  e->add_option("--draft", eval.draft, "Draft index")->required();
  e->add_option("--reference", eval.reference, "Validated index")->required();
  e->add_option("--traditional", eval.traditional, "Traditional manual index");
  e->add_option("--input", eval.input, "Source document, for the corpus size row");
  e->add_option("--k", eval.k, "Cutoff for ranked precision");
  e->add_option("--report", eval.report, "table or machine");
  e->add_option("--label", eval.label, "Column label");
  e->add_flag("--literal-subentries", eval.literal_subentries,
              "Read sub-entry labels as printed, without the parent's words");

  ServeArgs serve;
  auto* s = app.add_subcommand("serve", "Serve the validation API for a draft");
  s->add_option("--draft", serve.draft, "Draft index")->required();
  s->add_option("--port", serve.port, "TCP port");
  s->add_option("--host", serve.host, "Bind address");
  s->add_option("--static", serve.static_dir, "Directory of UI assets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& ex) {
    return app.exit(ex, out, err);
  }
  try {
    if (b->parsed()) return cmd_build(build, err);
    if (e->parsed()) return cmd_eval(eval, out);
    return cmd_serve(serve, err);
  } catch (const Error& ex) {
    err << "error: " << ex.what() << "\n";
    return 2;
  }
}

}  // namespace folio::cli
