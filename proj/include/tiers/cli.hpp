// Copyright 2026 The Tiers Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TIERS_CLI_HPP_
#define TIERS_CLI_HPP_

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tiers/bench.hpp"
#include "tiers/bundled.hpp"
#include "tiers/error.hpp"
#include "tiers/generator.hpp"
#include "tiers/grammar.hpp"
#include "tiers/http_provider.hpp"
#include "tiers/lexicon.hpp"
#include "tiers/questionnaire.hpp"
#include "tiers/recognizer.hpp"
#include "tiers/selector.hpp"
#include "tiers/sentence_io.hpp"
#include "tiers/stats.hpp"
#include "tiers/thalamo.hpp"
#include "tiers/trial_store.hpp"

#ifndef TIERS_VERSION
#define TIERS_VERSION "0.0.0"
#endif

namespace tiers::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitRuntime = 3;

inline int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kSchema:
    case ErrorKind::kValidation:
    case ErrorKind::kUnknownLhs:
    case ErrorKind::kUnknownSymbol:
    case ErrorKind::kPrecondition:
    case ErrorKind::kCredential:
    case ErrorKind::kCountMismatch:
    case ErrorKind::kCapTooLarge:
    case ErrorKind::kDimension:
      return kExitValidation;
    default:
      return kExitRuntime;
  }
}

inline std::string version_text() {
  return std::string("tiers ") + TIERS_VERSION + " (C++" + std::to_string(__cplusplus / 100 % 100) +
#if defined(__clang__)
         ", clang " + __clang_version__ +
#elif defined(__GNUC__)
         ", gcc " + __VERSION__ +
#endif
         ")";
}

// Optional JSON config: grammar and lexicon paths, generation caps per
// tier, and the bench keys read by load_bench_config.
struct RunConfig {
  std::filesystem::path path;
  std::map<std::string, std::filesystem::path> grammars;
  std::optional<std::filesystem::path> lexicon;
  std::map<std::string, nlohmann::json> generation;

  static RunConfig load(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw Error(ErrorKind::kIo, "cannot open config " + file.string());
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::kSchema, file.string() + ": " + e.what());
    }
    RunConfig cfg;
    cfg.path = file;
    const auto base = file.parent_path();
    const auto resolve = [&](const std::string& p) {
      const std::filesystem::path fp(p);
      return fp.is_absolute() ? fp : base / fp;
    };
    try {
      if (j.contains("grammars")) {
        for (const auto& [id, p] : j.at("grammars").items()) {
          cfg.grammars[id] = resolve(p.get<std::string>());
        }
      }
      if (j.contains("lexicon")) cfg.lexicon = resolve(j.at("lexicon").get<std::string>());
      if (j.contains("generation")) {
        for (const auto& [id, g] : j.at("generation").items()) cfg.generation[id] = g;
      }
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::kSchema, file.string() + ": " + e.what());
    }
    for (const auto& [id, p] : cfg.grammars) {
      if (!std::filesystem::exists(p)) throw Error(ErrorKind::kValidation, "missing grammar file " + p.string());
    }
    if (cfg.lexicon && !std::filesystem::exists(*cfg.lexicon)) {
      throw Error(ErrorKind::kValidation, "missing lexicon file " + cfg.lexicon->string());
    }
    return cfg;
  }

  // The bundled grammar unless the config names a file for `id`.
  Grammar grammar(const std::string& id) const {
    const auto it = grammars.find(id);
    if (it == grammars.end()) {
      if (lexicon) return bundled_grammar(id, Lexicon::load_file(lexicon->string()));
      return bundled_grammar(id);
    }
    std::ifstream in(it->second);
    std::stringstream doc;
    doc << in.rdbuf();
    const Lexicon lex = lexicon ? Lexicon::load_file(lexicon->string()) : english_lexicon();
    return load_grammar(doc.str(), lex);
  }

  GenConfig generation_for(const Grammar& g, std::uint64_t seed) const {
    GenConfig cfg = GenConfig::for_selection(g.tier(), seed);
    cfg.grammar_id = g.id();
    const auto it = generation.find(g.id());
    if (it != generation.end()) {
      cfg.max_expansion_per_symbol = it->second.value("max_expansion", cfg.max_expansion_per_symbol);
      cfg.max_recursion_depth = it->second.value("max_depth", cfg.max_recursion_depth);
    }
    return cfg;
  }
};

namespace detail {

inline std::ofstream open_out(const std::string& path) {
  if (const auto parent = std::filesystem::path(path).parent_path(); !parent.empty()) {
    std::filesystem::create_directories(parent);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path);
  return out;
}

inline std::string csv_millis(double ms) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.3f", ms);
  return buffer;
}

}  // namespace detail

// Runs the command line `args` (without the program name). Returns the
// process exit code; errors go to `err` prefixed with the failing stage.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Grammar-tier sentence generation, recognition and benchmarking", "tiers"};
  app.require_subcommand(0, 1);
  bool show_version = false;
  app.add_flag("--version", show_version, "Print build information");
  std::string config_path;
  if (const char* env = std::getenv("TIERS_CONFIG")) config_path = env;
  app.add_option("--config", config_path, "JSON config file (default: $TIERS_CONFIG)");

  // generate
  auto* gen = app.add_subcommand("generate", "Generate sentences from a grammar");
  std::string gen_grammar;
  std::size_t gen_count = 1;
  std::uint64_t gen_seed = 0;
  std::optional<int> gen_expansion;
  std::optional<int> gen_depth;
  std::string gen_format = "plain";
  std::string gen_out;
  gen->add_option("--grammar", gen_grammar, "cfg, ixg or csg")->required();
  gen->add_option("--count", gen_count, "Number of sentences")->check(CLI::PositiveNumber);
  gen->add_option("--seed", gen_seed, "Seed of the first sentence");
  gen->add_option("--max-expansion", gen_expansion, "Expansions per symbol before forcing");
  gen->add_option("--max-depth", gen_depth, "Recursion depth before forcing");
  gen->add_option("--format", gen_format, "plain or jsonl")->check(CLI::IsMember({"plain", "jsonl"}));
  gen->add_option("--out", gen_out, "Output file (default: stdout)");

  // select
  auto* sel = app.add_subcommand("select", "Repair and filter sentences");
  std::string sel_grammar;
  std::string sel_in;
  std::string sel_out;
  std::string sel_report;
  sel->add_option("--grammar", sel_grammar, "cfg, ixg or csg")->required();
  sel->add_option("--in", sel_in, "Sentences (JSON lines or plain text)")->required();
  sel->add_option("--out", sel_out, "Kept sentences (JSON lines)")->required();
  sel->add_option("--report", sel_report, "Per-sentence report (JSON lines)");

  // pipeline
  auto* pipe = app.add_subcommand("pipeline", "Generate, select and verify");
  std::string pipe_grammar;
  std::size_t pipe_want = 50;
  std::uint64_t pipe_seed = 0;
  std::string pipe_out;
  std::size_t pipe_attempts = BatchOptions{}.max_attempts;
  std::string pipe_format = "jsonl";
  pipe->add_option("--grammar", pipe_grammar, "cfg, ixg or csg")->required();
  pipe->add_option("--want", pipe_want, "Sentences to keep");
  pipe->add_option("--seed", pipe_seed, "Seed of the first attempt");
  pipe->add_option("--out", pipe_out, "Output file (default: stdout)");
  pipe->add_option("--max-attempts", pipe_attempts, "Generation attempts before giving up");
  pipe->add_option("--format", pipe_format, "plain or jsonl")->check(CLI::IsMember({"plain", "jsonl"}));

  // recognize
  auto* rec = app.add_subcommand("recognize", "Decide membership for each sentence");
  std::string rec_grammar;
  std::string rec_in;
  std::string rec_out;
  std::size_t rec_nodes = SearchBudget{}.max_nodes;
  rec->add_option("--grammar", rec_grammar, "cfg, ixg or csg")->required();
  rec->add_option("--in", rec_in, "Sentences (JSON lines or plain text)")->required();
  rec->add_option("--out", rec_out, "CSV output (default: stdout)");
  rec->add_option("--max-nodes", rec_nodes, "CSG search node budget")->check(CLI::PositiveNumber);

  // classify
  auto* cls = app.add_subcommand("classify", "List the bundled grammars accepting each sentence");
  std::string cls_in;
  std::string cls_out;
  cls->add_option("--in", cls_in, "Sentences (JSON lines or plain text)")->required();
  cls->add_option("--out", cls_out, "CSV output (default: stdout)");

  // bench
  auto* bench = app.add_subcommand("bench", "Query language models");
  bench->require_subcommand(1);
  std::string bench_config;
  auto* bench_run = bench->add_subcommand("run", "Start a run into an empty store");
  bench_run->add_option("--config", bench_config, "Bench config")->required();
  auto* bench_resume = bench->add_subcommand("resume", "Continue a run, skipping stored trials");
  bench_resume->add_option("--config", bench_config, "Bench config")->required();
  auto* bench_export = bench->add_subcommand("export-questionnaire", "Write the human form and key");
  std::uint64_t export_seed = 0;
  std::string export_out = "questionnaire";
  bench_export->add_option("--config", bench_config, "Bench config naming the sentence files")->required();
  bench_export->add_option("--seed", export_seed, "Shuffle seed");
  bench_export->add_option("--out", export_out, "Output directory");

  // stats
  auto* stats = app.add_subcommand("stats", "Aggregate trial records");
  stats->require_subcommand(1);
  auto* stats_emit = stats->add_subcommand("emit", "Write stats.csv, stats_per_question.csv, report.md");
  std::string stats_store;
  std::string stats_out;
  stats_emit->add_option("--store", stats_store, "Store directory")->required();
  stats_emit->add_option("--out", stats_out, "Output directory")->required();

  // thalamo
  auto* thal = app.add_subcommand("thalamo", "Thalamocortical loop demonstration");
  thal->require_subcommand(1);
  auto* demo = thal->add_subcommand("demo", "Categorise a token stream and learn its transitions");
  std::string demo_tokens;
  thalamo::DemoOptions demo_options;
  std::string demo_embedding = "onehot";
  std::string demo_out;
  demo->add_option("--tokens", demo_tokens, "Whitespace-separated token file")->required();
  demo->add_option("--prototypes", demo_options.prototypes, "Category rows")->check(CLI::PositiveNumber);
  demo->add_option("--lr", demo_options.learning_rate, "Learning rate k")->check(CLI::Range(0.0, 1.0));
  demo->add_option("--seed", demo_options.seed, "Initialisation seed");
  demo->add_option("--epochs", demo_options.epochs, "Training passes");
  demo->add_option("--embedding", demo_embedding, "onehot or random")
      ->check(CLI::IsMember({"onehot", "random"}));
  demo->add_option("--out", demo_out, "Report file (default: stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (app.exit(e, out, err) == 0) return kExitOk;
    err << app.help();
    return kExitUsage;
  }
  if (show_version) {
    out << version_text() << '\n';
    return kExitOk;
  }
  if (app.get_subcommands().empty()) {
    err << app.help();
    return kExitUsage;
  }

  std::string stage = app.get_subcommands().front()->get_name();
  try {
    const RunConfig config = config_path.empty() ? RunConfig{} : RunConfig::load(config_path);
    std::ofstream file_out;
    const auto sink = [&](const std::string& path) -> std::ostream& {
      if (path.empty()) return out;
      file_out = detail::open_out(path);
      return file_out;
    };

    if (*gen) {
      const Grammar g = config.grammar(gen_grammar);
      GenConfig base = config.generation_for(g, gen_seed);
      if (gen_expansion) base.max_expansion_per_symbol = *gen_expansion;
      if (gen_depth) base.max_recursion_depth = *gen_depth;
      std::vector<Sentence> sentences;
      std::size_t overflows = 0;
      for (std::uint64_t seed = gen_seed; sentences.size() < gen_count; ++seed) {
        GenConfig c = base;
        c.seed = seed;
        try {
          sentences.push_back(generate(g, c));
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::kGenerationOverflow || ++overflows > 1000 + 10 * gen_count) throw;
        }
      }
      std::ostream& o = sink(gen_out);
      if (gen_format == "jsonl") {
        write_jsonl(o, g, sentences);
      } else {
        write_plain(o, sentences);
      }
      if (overflows) err << "generate: skipped " << overflows << " seeds that overflowed\n";
      return kExitOk;
    }

    if (*sel) {
      const Grammar g = config.grammar(sel_grammar);
      const auto sentences = read_sentences_file(sel_in, g);
      std::vector<Sentence> kept;
      std::ostringstream report;
      for (const Sentence& s : sentences) {
        auto [result, r] = select(g, s);
        report << nlohmann::json{{"id", result.id},
                                 {"kept", r.kept},
                                 {"reasons", r.reasons},
                                 {"repaired", r.repaired}}
                      .dump()
               << '\n';
        if (r.kept) kept.push_back(std::move(result));
      }
      {
        std::ofstream o = detail::open_out(sel_out);
        write_jsonl(o, g, kept);
      }
      if (!sel_report.empty()) detail::open_out(sel_report) << report.str();
      err << "select: kept " << kept.size() << " of " << sentences.size() << '\n';
      return kExitOk;
    }

    if (*pipe) {
      const Grammar g = config.grammar(pipe_grammar);
      const BatchResult batch =
          batch_select(g, config.generation_for(g, pipe_seed), pipe_want, {pipe_attempts});
      stage = "pipeline verify";
      const Recognizer recognizer(g);
      for (const Sentence& s : batch.sentences) {
        const ParseResult r = recognizer(s.tokens);
        if (r.verdict != Verdict::kAccept) {
          throw Error(ErrorKind::kInternal, "kept sentence " + s.id + " is not accepted: " +
                                                std::string(to_string(r.verdict)));
        }
      }
      std::ostream& o = sink(pipe_out);
      if (pipe_format == "jsonl") {
        write_jsonl(o, g, batch.sentences);
      } else {
        write_plain(o, batch.sentences);
      }
      err << "pipeline: kept " << batch.sentences.size() << " after " << batch.attempts
          << " attempts; all accepted by the " << g.id() << " recognizer\n";
      return kExitOk;
    }

    if (*rec) {
      const Grammar g = config.grammar(rec_grammar);
      const auto sentences = read_sentences_file(rec_in, g);
      const Recognizer recognizer(g);
      SearchBudget budget = SearchBudget::for_grammar(g, rec_nodes);
      std::ostream& o = sink(rec_out);
      o << "sentence_id,grammar,verdict,nodes,millis\n";
      for (const Sentence& s : sentences) {
        const ParseResult r = g.tier() == Tier::kCsg ? recognize_csg(g, s.tokens, budget)
                                                     : recognizer(s.tokens);
        o << csv_field(s.id) << ',' << g.id() << ',' << to_string(r.verdict) << ','
          << r.cost.nodes_explored << ',' << detail::csv_millis(r.cost.elapsed_ms) << '\n';
      }
      return kExitOk;
    }

    if (*cls) {
      const auto sentences = read_sentences_file(cls_in, bundled_grammar("cfg"), false);
      std::ostream& o = sink(cls_out);
      o << "sentence_id,accepting,unknown\n";
      for (const Sentence& s : sentences) {
        const Classification c = classify(s.tokens);
        const auto joined = [](const std::set<std::string>& ids) {
          std::string text;
          for (const char* id : {"cfg", "ixg", "csg"}) {
            if (ids.count(id)) text += (text.empty() ? "" : ";") + std::string(id);
          }
          return text;
        };
        o << csv_field(s.id) << ',' << joined(c.accepting) << ',' << joined(c.unknown) << '\n';
      }
      return kExitOk;
    }

    if (*bench) {
      stage = "bench";
      BenchConfig cfg = load_bench_config(bench_config);
      if (*bench_export) {
        stage = "bench export-questionnaire";
        auto sentences = load_bench_sentences(cfg.sentences);
        std::vector<Sentence> chosen;
        std::map<std::string, std::size_t> taken;
        for (Sentence& s : sentences) {
          if (taken[s.provenance.grammar_id]++ < kQuestionsPerGrammar) chosen.push_back(std::move(s));
        }
        const Questionnaire q = export_questionnaire(chosen, export_seed);
        std::filesystem::create_directories(export_out);
        detail::open_out((std::filesystem::path(export_out) / "form.txt").string()) << q.form;
        detail::open_out((std::filesystem::path(export_out) / "key.csv").string()) << q.key;
        return kExitOk;
      }
      const bool resume = bench_resume->parsed();
      stage = resume ? "bench resume" : "bench run";
      check_credentials(cfg.models);
      const auto sentences = load_bench_sentences(cfg.sentences);
      TrialStore store(cfg.store);
      if (!resume && std::filesystem::exists(store.trials_path()) &&
          std::filesystem::file_size(store.trials_path()) > 0) {
        throw Error(ErrorKind::kPrecondition,
                    "store " + cfg.store.string() + " already has trials; use bench resume");
      }
      cfg.options.log = [&err](const std::string& line) { err << line << '\n'; };
      const std::uint64_t seed = cfg.seed;
      const RunSummary summary = run_bench(
          cfg.models, sentences, store,
          [seed](const ModelSpec& m) { return make_provider(m, seed); }, cfg.options);
      err << stage << ": planned " << summary.planned << ", skipped " << summary.skipped
          << ", completed " << summary.completed << ", unparseable " << summary.unparseable
          << ", failed " << summary.failed << ", requests " << summary.requests << ", retries "
          << summary.retries << '\n';
      stage = "stats emit";
      write_tables(emit_tables(store), cfg.out);
      return kExitOk;
    }

    if (*stats) {
      stage = "stats emit";
      if (!std::filesystem::is_directory(stats_store)) {
        throw Error(ErrorKind::kStore, "no store directory " + stats_store);
      }
      const TrialStore store(stats_store);
      write_tables(emit_tables(store), stats_out);
      return kExitOk;
    }

    if (*thal) {
      stage = "thalamo demo";
      std::ifstream in(demo_tokens);
      if (!in) throw Error(ErrorKind::kIo, "cannot open " + demo_tokens);
      std::vector<std::string> stream;
      for (std::string t; in >> t;) stream.push_back(t);
      demo_options.one_hot = demo_embedding == "onehot";
      const thalamo::DemoResult result = thalamo::nested_demo(stream, demo_options);
      std::ostream& o = sink(demo_out);
      o << "# categories\n";
      for (const std::string& word : result.vocabulary) {
        for (std::size_t i = 0; i < stream.size(); ++i) {
          if (stream[i] == word) {
            o << word << " C" << result.categories[i] << '\n';
            break;
          }
        }
      }
      o << "# sequence\n" << result.labels() << '\n';
      o << "# transitions\n";
      for (const auto& [pair, weight] : result.transitions.transitions()) {
        o << 'C' << pair.first << " -> C" << pair.second << ' ' << weight << '\n';
      }
      return kExitOk;
    }
  } catch (const Error& e) {
    err << "tiers " << stage << ": " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "tiers " << stage << ": " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace tiers::cli

#endif  // TIERS_CLI_HPP_
